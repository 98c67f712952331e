#!/usr/bin/env python3
"""Run the block-separation sweep from the command line.

All flags are forwarded to ``vnom eps-sweep``; see ``--help`` for the list.
Typical desk-scale run:

    python scripts/run_eps_sweep.py --out-dir runs/eps --trials 20
"""

import sys

from vnom.cli import main

if __name__ == "__main__":
    sys.exit(main(["eps-sweep", *sys.argv[1:]]))
