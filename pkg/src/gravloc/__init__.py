"""Self-gravity measurement laboratory.

Tools for exploring whether gravitational self-interaction can keep a
macroscopic measurement apparatus classical: rigid-body self-gravity
profiles (`selfgrav`), two-branch wavepacket dynamics under measurement
forces (`dynamics`), the saddle-billiard detector escape model
(`escape`), SI-unit estimates (`estimates`), and a config-driven run
harness (`config`, `runner`, `cli`).
"""

__version__ = "0.1.0"
