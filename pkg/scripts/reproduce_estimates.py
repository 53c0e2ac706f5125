#!/usr/bin/env python3
"""Print the headline SI estimates, optionally with enhanced gravity.

Usage:
    python scripts/reproduce_estimates.py [--kappa K]
"""

import argparse

from gravloc.estimates import reference_report


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--kappa",
        type=float,
        default=1.0,
        help="gravity enhancement factor (>= 1)",
    )
    args = parser.parse_args()
    report = reference_report(kappa=args.kappa)
    width = max(len(row.name) for row in report.rows)
    print(f"# headline estimates, kappa = {args.kappa:g}")
    for row in report.rows:
        print(f"{row.name:<{width}}  {row.value:.6e} {row.unit}")


if __name__ == "__main__":
    main()
