#!/usr/bin/env python3
"""Check every bundled small instance against the exact ranking oracle.

Exits non-zero if any optimality or strictness check fails.  Forward flags to
``vnom oracle-suite``; use ``--out-dir`` to keep the report CSV.
"""

import sys

from vnom.cli import main

if __name__ == "__main__":
    sys.exit(main(["oracle-suite", *sys.argv[1:]]))
