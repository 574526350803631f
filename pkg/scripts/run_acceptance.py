"""Print the acceptance table (one line per criterion); exit 1 on any failure."""

import runpy
import sys
from pathlib import Path

sys.argv = [str(Path(__file__).resolve().parents[1] / "tests" / "test_acceptance.py")]
runpy.run_path(sys.argv[0], run_name="__main__")
