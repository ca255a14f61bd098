"""Crossover certificates for pi(x) - li(x).

This wrapper calls `lehmancert.main:main()` so you can run:

    python run_lehmancert.py [--debug] <subcommand> ...

It is equivalent to `python -m lehmancert.main [--debug] <subcommand> ...`.
"""

import sys

from lehmancert.main import main


if __name__ == "__main__":
    sys.exit(main())
