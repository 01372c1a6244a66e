#!/usr/bin/env python3
"""
curvkit - Run Script
Runs the CLI from a source checkout without installing the console script
"""

import sys

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def main():
    """Main entry point"""
    # Import here to ensure environment is loaded
    from curvkit.main import main as cli_main

    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
