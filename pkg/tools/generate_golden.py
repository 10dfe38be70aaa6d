"""
Regenerate the golden census files under data/golden

Run from the repository root:

    python tools/generate_golden.py

The census files are compared byte for byte by test_matthews.py, so only rerun
this after a deliberate change to the classifier or the CSV layout.
"""
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from app.services import report_writers  # noqa: E402
from app.services.matthews_service import matthews_service  # noqa: E402

# (config file, max seed degree, degree threshold, step cap)
CENSUSES = {
    "matthews_ex1_census.csv": ("data/matthews_ex1.cfg", 4, 100, 10_000),
}

output_dir = "data/golden"
os.makedirs(output_dir, exist_ok=True)

for filename, (config_path, max_seed_degree, threshold, step_cap) in CENSUSES.items():
    cfg = matthews_service.load_config(config_path)
    outcomes = matthews_service.census(cfg, max_seed_degree, threshold, step_cap)
    output_file = os.path.join(output_dir, filename)
    with open(output_file, "w", encoding="utf-8", newline="") as f:
        f.write(report_writers.matthews_census_csv(outcomes))
    kinds = {}
    for outcome in outcomes:
        kinds[outcome.kind.value] = kinds.get(outcome.kind.value, 0) + 1
    print(f"Wrote {len(outcomes)} rows to {output_file}: {kinds}")
