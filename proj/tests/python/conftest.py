import sys
from pathlib import Path

# Prefer an installed mfgsolve; otherwise fall back to the staged CMake build
# (cmake -B build-py -DSKBUILD=1, see README).
try:
    import mfgsolve  # noqa: F401
except ImportError:
    stage = Path(__file__).resolve().parents[2] / "build-py" / "stage"
    if stage.is_dir():
        sys.path.insert(0, str(stage))
