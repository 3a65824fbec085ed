import csv
from pathlib import Path

import pytest

SLOTS_HEADER = ["run", "seed", "slot", "vehicle", "normalized_area", "m_tau", "failures"]
RUNS_HEADER = [
    "run",
    "seed",
    "nv",
    "tau_end",
    "connected",
    "complete",
    "scheduled",
    "failed",
    "skipped",
    "violations",
    "area_all_m2",
]
BOUNDS_HEADER = ["nv", "lower", "upper"]

# three runs of two vehicles; run 1 ends a slot early to exercise the
# carry-forward in the mean curve
SLOTS_ROWS = [
    [0, 100, 0, 0, 0.2, 0, 0],
    [0, 100, 0, 1, 0.2, 0, 0],
    [0, 100, 1, 0, 0.4, 1, 0],
    [0, 100, 1, 1, 0.5, 1, 0],
    [0, 100, 2, 0, 0.6, 2, 1],
    [0, 100, 2, 1, 0.7, 2, 1],
    [0, 100, 3, 0, 0.8, 1, 0],
    [0, 100, 3, 1, 1.0, 1, 0],
    [1, 101, 0, 0, 0.3, 0, 0],
    [1, 101, 0, 1, 0.3, 0, 0],
    [1, 101, 1, 0, 0.6, 2, 0],
    [1, 101, 1, 1, 0.6, 2, 0],
    [1, 101, 2, 0, 0.9, 2, 0],
    [1, 101, 2, 1, 1.0, 2, 0],
    [2, 102, 0, 0, 0.1, 0, 0],
    [2, 102, 0, 1, 0.1, 0, 0],
    [2, 102, 1, 0, 0.3, 1, 1],
    [2, 102, 1, 1, 0.4, 1, 1],
    [2, 102, 2, 0, 0.5, 1, 0],
    [2, 102, 2, 1, 0.8, 1, 0],
    [2, 102, 3, 0, 0.7, 2, 0],
    [2, 102, 3, 1, 0.9, 2, 0],
]

# fleet of 10, completion at {18, 18, 20}; one disconnected run to skip
RUNS_ROWS = [
    [0, 100, 10, 18, 1, 1, 22, 0, 0, 0, 3700.0],
    [1, 101, 10, 18, 1, 1, 23, 1, 0, 0, 3650.0],
    [2, 102, 10, 20, 1, 1, 25, 2, 1, 0, 3800.0],
    [3, 103, 10, 2, 0, 0, 4, 0, 0, 0, 3600.0],
]

BOUNDS_ROWS = [[10, 18, 90], [20, 38, 380]]


def write_csv(path: Path, header: list[str], rows: list[list]) -> Path:
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        writer.writerows(rows)
    return path


@pytest.fixture
def slots_csv(tmp_path):
    return write_csv(tmp_path / "slots.csv", SLOTS_HEADER, SLOTS_ROWS)


@pytest.fixture
def runs_csv(tmp_path):
    return write_csv(tmp_path / "runs.csv", RUNS_HEADER, RUNS_ROWS)


@pytest.fixture
def bounds_csv(tmp_path):
    return write_csv(tmp_path / "bounds.csv", BOUNDS_HEADER, BOUNDS_ROWS)
