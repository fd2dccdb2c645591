#!/usr/bin/env python3
"""Launch pmscheme."""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
