"""Entry point for python -m wenodec."""

import sys

from .cli import main

sys.exit(main())
