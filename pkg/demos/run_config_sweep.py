"""Driving the batch runner from Python instead of the command line.

Equivalent to ``erqt run configs/kramers_sweep.yaml --output -``.
"""

import sys
from pathlib import Path

from erqt.config import parse_config, run_scenario, write_csv_rows

config_path = Path(__file__).resolve().parent.parent / "configs" / "kramers_sweep.yaml"
config = parse_config(config_path.read_text())
rows = run_scenario(config, threads=2)
write_csv_rows(rows, sys.stdout)
print(f"\n{len(rows)} rows, {sum(r.is_error for r in rows)} with errors", file=sys.stderr)
