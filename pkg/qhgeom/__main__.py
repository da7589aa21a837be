"""Main entry point for qhgeom when run as a module"""

import logging
import sys

# Force UTF-8 output on Windows (the summaries use check marks)
if sys.stderr.encoding and sys.stderr.encoding.lower() not in ('utf-8', 'utf8'):
    try:
        sys.stdout.reconfigure(encoding='utf-8', errors='replace')
        sys.stderr.reconfigure(encoding='utf-8', errors='replace')
    except Exception:
        pass

# ── Root logger ──────────────────────────────────────────────────────────────
logging.basicConfig(level=logging.WARNING, format='%(levelname)s: %(message)s')

from qhgeom.cli import main

if __name__ == '__main__':
    main()
