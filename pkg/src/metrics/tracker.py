"""Records of benchmark runs."""

import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any

import pandas as pd

# Leading CSV columns, in order; the remaining record fields follow.
CSV_COLUMNS = [
    "family",
    "n",
    "nnz",
    "build_ms",
    "solve_ms",
    "iterations",
    "measured_eps",
    "chain_nnz",
]


@dataclass
class BenchRecord:
    """Metrics for one (family, n) instance."""

    family: str
    n: int
    nnz: int = 0
    build_ms: float = 0.0
    solve_ms: float = 0.0
    iterations: int = 0
    measured_eps: float | None = None  # None above the dense oracle cap
    chain_nnz: int = 0

    depth: int = 0
    converged: bool = False
    contraction: float | None = None
    chain_passed: bool | None = None
    seed: int = 0
    error: str | None = None

    timestamp: str = field(default_factory=lambda: datetime.now().isoformat())


@dataclass
class BenchResults:
    """All records of one suite run."""

    suite: str
    seed: int
    timestamp: str = field(default_factory=lambda: datetime.now().isoformat())
    records: list[BenchRecord] = field(default_factory=list)

    def add_record(self, record: BenchRecord) -> None:
        self.records.append(record)

    def families(self) -> list[str]:
        return sorted({r.family for r in self.records})

    def calculate_summary(self) -> dict[str, Any]:
        """Per-family averages over the successful records."""

        def summarize(records: list[BenchRecord]) -> dict[str, Any]:
            ok = [r for r in records if r.error is None]
            if not ok:
                return {"count": len(records), "failures": len(records)}
            eps = [r.measured_eps for r in ok if r.measured_eps is not None]
            return {
                "count": len(records),
                "failures": len(records) - len(ok),
                "avg_build_ms": sum(r.build_ms for r in ok) / len(ok),
                "avg_solve_ms": sum(r.solve_ms for r in ok) / len(ok),
                "avg_iterations": sum(r.iterations for r in ok) / len(ok),
                "max_measured_eps": max(eps) if eps else None,
                "avg_chain_fill": sum(r.chain_nnz / max(r.nnz, 1) for r in ok) / len(ok),
            }

        return {family: summarize([r for r in self.records if r.family == family]) for family in self.families()}

    def to_frame(self) -> pd.DataFrame:
        """One row per record, CSV_COLUMNS first, sorted by family then n."""
        frame = pd.DataFrame([asdict(r) for r in self.records])
        if frame.empty:
            return pd.DataFrame(columns=CSV_COLUMNS)
        rest = [c for c in frame.columns if c not in CSV_COLUMNS]
        return frame[CSV_COLUMNS + rest].sort_values(["family", "n"], kind="stable").reset_index(drop=True)

    def save_csv(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)

    def save(self, path: Path) -> None:
        """Save results to a JSON file."""
        data = {
            "suite": self.suite,
            "seed": self.seed,
            "timestamp": self.timestamp,
            "records": [_json_safe(asdict(r)) for r in self.records],
            "summary": self.calculate_summary(),
        }

        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(data, indent=2))

    @classmethod
    def load(cls, path: Path) -> "BenchResults":
        """Load results from a JSON file."""
        data = json.loads(path.read_text())

        results = cls(suite=data["suite"], seed=data["seed"], timestamp=data["timestamp"])
        for record in data["records"]:
            results.records.append(BenchRecord(**record))

        return results


def _json_safe(record: dict[str, Any]) -> dict[str, Any]:
    # JSON has no inf/nan
    return {
        key: None if isinstance(value, float) and not math.isfinite(value) else value
        for key, value in record.items()
    }
