import sys

from pseudo_pure.cli import main

if __name__ == "__main__":
    sys.exit(main())
