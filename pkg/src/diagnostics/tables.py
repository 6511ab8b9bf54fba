"""
Convergence tables: one row per cutoff N, comparing a finite-N quantity
(lhs) with its limit (rhs).
"""
import csv
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from src.errors import PreconditionError

Number = Union[int, float, Fraction]

TREND_SLACK = 1e-12


def _cell(value: Optional[Number]) -> str:
    if value is None:
        return ""
    return repr(float(value))


@dataclass
class ConvergenceRow:
    cutoff: int
    rank: int
    lhs: Number
    rhs: Number
    bound: Optional[Number] = None
    aux: Dict[str, Number] = field(default_factory=dict)

    @property
    def gap(self) -> Number:
        return abs(self.lhs - self.rhs)

    def to_dict(self) -> Dict[str, Any]:
        row = {
            "N": self.cutoff,
            "d_N": self.rank,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "gap": float(self.gap),
            "bound": None if self.bound is None else float(self.bound),
        }
        row.update({k: float(v) for k, v in sorted(self.aux.items())})
        return row


@dataclass
class ConvergenceTable:
    """
    Rows in strictly increasing N. Gaps are recomputed from lhs/rhs on
    every access, never stored.
    """
    experiment: str
    metadata: Dict[str, Any] = field(default_factory=dict)
    rows: List[ConvergenceRow] = field(default_factory=list)

    def add_row(self, row: ConvergenceRow) -> None:
        if self.rows and row.cutoff <= self.rows[-1].cutoff:
            raise PreconditionError(
                f"cutoffs must increase: {row.cutoff} after {self.rows[-1].cutoff}"
            )
        self.rows.append(row)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def cutoffs(self) -> List[int]:
        return [r.cutoff for r in self.rows]

    def gaps(self) -> List[float]:
        return [float(r.gap) for r in self.rows]

    @property
    def final_gap(self) -> float:
        if not self.rows:
            raise PreconditionError("table is empty")
        return float(self.rows[-1].gap)

    def tail_non_increasing(self, window: int = 5, slack: float = TREND_SLACK) -> bool:
        """Gaps over the last `window` rows never grow by more than `slack`."""
        tail = self.gaps()[-window:]
        return all(b <= a + slack for a, b in zip(tail, tail[1:]))

    def tail_trend_decreasing(self, window: int = 5, slack: float = TREND_SLACK) -> bool:
        """The last gap of the tail is no larger than its first."""
        tail = self.gaps()[-window:]
        return len(tail) < 2 or tail[-1] <= tail[0] + slack

    def aux_columns(self) -> List[str]:
        return sorted({k for r in self.rows for k in r.aux})

    def to_csv(self, path: Union[str, Path], header: Optional[str] = None) -> Path:
        """Write the table; `header` becomes a leading `# ...` comment line."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        aux = self.aux_columns()
        with open(path, "w", newline="") as f:
            if header:
                f.write(f"# {header}\n")
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["N", "d_N", "lhs", "rhs", "gap", "bound"] + aux)
            for r in self.rows:
                writer.writerow(
                    [r.cutoff, r.rank, _cell(r.lhs), _cell(r.rhs), _cell(r.gap), _cell(r.bound)]
                    + [_cell(r.aux.get(k)) for k in aux]
                )
        return path

    def to_dict(self) -> Dict[str, Any]:
        return {
            "experiment": self.experiment,
            "metadata": self.metadata,
            "rows": [r.to_dict() for r in self.rows],
        }
