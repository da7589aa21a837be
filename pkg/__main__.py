"""Main entry point for qhgeom when run from the repository root"""

from qhgeom.cli import main

if __name__ == "__main__":
    main()
