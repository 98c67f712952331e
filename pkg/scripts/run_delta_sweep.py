#!/usr/bin/env python3
"""Run the feature-separation sweep from the command line.

All flags are forwarded to ``vnom delta-sweep``; see ``--help`` for the list.
Typical desk-scale run:

    python scripts/run_delta_sweep.py --out-dir runs/delta --trials 20
"""

import sys

from vnom.cli import main

if __name__ == "__main__":
    sys.exit(main(["delta-sweep", *sys.argv[1:]]))
