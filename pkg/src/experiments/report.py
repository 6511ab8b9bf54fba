"""Report files of one run: ESD CSVs, convergence tables and verdict.json."""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from src import __version__
from src.diagnostics import ConvergenceTable
from src.experiments.config import ExperimentConfig
from src.spectral import EmpiricalSpectralDistribution

logger = logging.getLogger(__name__)

PASS, FAIL, INFO = "pass", "fail", "info"


@dataclass
class InvariantResult:
    name: str
    status: str
    detail: Dict[str, Any]

    def to_dict(self) -> Dict[str, Any]:
        return {"status": self.status, **self.detail}


class ReportWriter:
    """
    Collects outputs of a run under `cfg.output_dir`.

    Invariants are recorded as pass/fail, or as info when they are
    reported but not asserted. The run passes iff no invariant failed.
    """

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.output_dir = Path(cfg.output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.config_hash = cfg.config_hash()
        self.csv_header = f"config_hash={self.config_hash} version={__version__}"
        self.invariants: Dict[str, InvariantResult] = {}
        self.files: List[str] = []

    def _track(self, path: Path) -> Path:
        self.files.append(path.name)
        return path

    def write_esd(self, esd: EmpiricalSpectralDistribution, prefix: str = "esd") -> Path:
        return self._track(esd.to_csv(self.output_dir / f"{prefix}_N{esd.cutoff}.csv", self.csv_header))

    def write_table(self, table: ConvergenceTable) -> Path:
        path = self._track(table.to_csv(self.output_dir / f"table_{table.experiment}.csv", self.csv_header))
        logger.info(f"[Report] {table.experiment}: {len(table)} rows -> {path}")
        return path

    def record(self, name: str, ok: Optional[bool], **detail) -> InvariantResult:
        """ok=None records an info-only entry."""
        status = INFO if ok is None else (PASS if ok else FAIL)
        result = InvariantResult(name, status, detail)
        self.invariants[name] = result
        log = logger.warning if status == FAIL else logger.info
        log(f"[Report] {name}: {status}")
        return result

    @property
    def passed(self) -> bool:
        return all(r.status != FAIL for r in self.invariants.values())

    @property
    def failures(self) -> List[str]:
        return [name for name, r in self.invariants.items() if r.status == FAIL]

    def write_verdict(self, summary: Optional[Dict[str, Any]] = None) -> Path:
        verdict = {
            "experiment": self.cfg.experiment,
            "name": self.cfg.name,
            "version": __version__,
            "config_hash": self.config_hash,
            "config": self.cfg.to_dict(),
            "invariants": {name: r.to_dict() for name, r in sorted(self.invariants.items())},
            "passed": self.passed,
            "files": sorted(self.files),
            "summary": summary or {},
        }
        path = self.output_dir / "verdict.json"
        with open(path, "w") as f:
            json.dump(verdict, f, indent=2, sort_keys=True)
            f.write("\n")
        logger.info(f"[Report] Verdict {'PASS' if self.passed else 'FAIL'} -> {path}")
        return path
