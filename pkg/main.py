import sys

# -- local imports
from rcpsp_ga.cli import main

# --- run main
if __name__ == '__main__':
    sys.exit(main())
