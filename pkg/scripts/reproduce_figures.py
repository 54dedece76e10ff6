#!/usr/bin/env python3
"""Regenerate every figure dataset into one directory.

Equivalent to running the fig2..fig5 subcommands by hand; kept as a script
so a fresh checkout can rebuild all CSVs with one command:

    python scripts/reproduce_figures.py --out data/
"""

import argparse
import sys

from ptcoupler.cli import main as cli_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="data", help="output directory")
    args = parser.parse_args()
    for command in ("fig2", "fig3", "fig4", "fig5"):
        code = cli_main([command, "--out", args.out])
        if code != 0:
            print(f"{command} failed with exit code {code}", file=sys.stderr)
            return code
        print(f"{command}: done")
    return 0


if __name__ == "__main__":
    sys.exit(main())
