# File: main.py

import sys

from src.cli.runner import run

if __name__ == "__main__":
    # This is the official entry point of our application.
    # It hands the command line to the runner and exits with its status.
    sys.exit(run(sys.argv[1:]))
