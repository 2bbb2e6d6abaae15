#!/usr/bin/env python3
"""qpt CLI entry point.

Commands are auto-loaded from the cli package.
"""

from cli import cli

if __name__ == "__main__":
    cli()
