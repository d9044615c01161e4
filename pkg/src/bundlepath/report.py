"""Machine-readable run reports (JSON / CSV) and their shipped schema."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from importlib import resources

from .solver import SolveResult

CSV_FIELDS = [
    "input", "source", "algorithm", "construction", "transform",
    "k", "threshold", "seed", "metered",
    "n", "m", "n_t", "m_t",
    "size_r", "size_r1", "size_r2", "sum_ball", "mean_sv",
    "comparisons", "additions", "extract_mins", "wall_ms", "checksum",
]


@dataclass(frozen=True)
class RunReport:
    input: str
    source: int
    algorithm: str
    construction: str | None
    transform: str | None
    k: int | None
    threshold: int | None
    seed: int
    metered: bool
    n: int
    m: int
    n_t: int
    m_t: int
    size_r: int | None
    size_r1: int | None
    size_r2: int | None
    sum_ball: int | None
    mean_sv: float | None
    comparisons: int
    additions: int
    extract_mins: int
    wall_ms: float
    checksum: str

    @classmethod
    def from_result(cls, result: SolveResult, input_desc: str,
                    source: int, metered: bool) -> "RunReport":
        return cls(
            input=input_desc, source=source, algorithm=result.algorithm,
            construction=result.construction, transform=result.transform,
            k=result.k, threshold=result.threshold, seed=result.seed,
            metered=metered, n=result.n, m=result.m,
            n_t=result.n_t, m_t=result.m_t,
            size_r=result.size_r, size_r1=result.size_r1,
            size_r2=result.size_r2, sum_ball=result.sum_ball,
            mean_sv=result.mean_sv,
            comparisons=result.comparisons, additions=result.additions,
            extract_mins=result.extract_mins, wall_ms=result.wall_ms,
            checksum=result.checksum,
        )

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    def to_csv_row(self) -> list:
        d = asdict(self)
        return [d[f] for f in CSV_FIELDS]


def csv_header() -> str:
    buf = io.StringIO()
    csv.writer(buf).writerow(CSV_FIELDS)
    return buf.getvalue().rstrip("\n")


def csv_line(report: RunReport) -> str:
    buf = io.StringIO()
    csv.writer(buf).writerow(report.to_csv_row())
    return buf.getvalue().rstrip("\n")


def load_schema(name: str) -> dict:
    """Load a schema shipped with the package ('run_report' or 'stats_report')."""
    path = resources.files("bundlepath").joinpath(f"schemas/{name}.schema.json")
    return json.loads(path.read_text())
