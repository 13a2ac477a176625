import sys
from pathlib import Path

HERE = Path(__file__).resolve()
SRC = HERE.parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

# The simulator is consumed strictly through its CLI (subprocess) and CSV
# contract; its source tree is handed to subprocesses only, never imported.
SIMULATOR_SRC = HERE.parents[2] / "src"
