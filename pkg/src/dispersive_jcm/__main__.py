"""Module entry point: python -m dispersive_jcm."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
