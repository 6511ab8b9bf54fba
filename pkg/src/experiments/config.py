"""
Experiment configuration.

Composition order, later layers winning:

    config/main.yaml (+ the experiment group picked by the subcommand)
    the user's --config file
    --out / --seed / --max-rank flags and free key=value overrides

The merged tree is checked against ExperimentConfig before any work starts.
"""
import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

import yaml
from hydra import compose, initialize_config_dir
from omegaconf import OmegaConf
from omegaconf.errors import OmegaConfBaseException

from src.errors import ConfigError, RankCapExceeded
from src.multiindex import rank_PN
from src.operators import SpaceKind, WeightFamily
from src.spectral import PolynomialFunction, TestFunction, make_test_function

logger = logging.getLogger(__name__)

CONFIG_DIR = Path(__file__).resolve().parents[2] / "config"

DEFAULT_SCHEDULE = (2, 4, 8, 12, 16, 24, 32, 40)
MIN_MC_SAMPLES = 1000
HASH_EXCLUDED = ("output_dir", "hardware")

# subcommand -> experiment group
EXPERIMENTS = {
    "run": "szego",
    "folner": "folner",
    "bergman": "bergman",
    "det": "determinant",
}


@dataclass
class SpaceConfig:
    kind: str = SpaceKind.DRURY_ARVESON.value
    bergman_parameter: float = 0.0


@dataclass
class HardwareConfig:
    num_workers: int = 1


@dataclass
class ExperimentConfig:
    """Everything one `szego` run needs."""
    experiment: str = "szego"
    name: str = "szego"
    space: SpaceConfig = field(default_factory=SpaceConfig)
    dimension: int = 2
    cutoffs: List[int] = field(default_factory=list)  # empty -> default schedule
    symbol_file: Optional[str] = None
    test_function: str = "x"
    polynomial_coefficients: List[float] = field(default_factory=list)
    mc_samples: int = 100_000
    seed: int = 0
    output_dir: str = "artifacts/szego"
    max_rank: int = 5000
    expansion_cap: int = 1_000_000
    complete_hermitian: bool = True
    gap_tolerance: float = 0.05
    determinant_tolerance: float = 0.02
    positivity_samples: int = 20_000
    check_trend: bool = True
    folner_norm: str = "hs"
    hardware: HardwareConfig = field(default_factory=HardwareConfig)

    def weights(self) -> WeightFamily:
        try:
            kind = SpaceKind(self.space.kind)
        except ValueError:
            raise ConfigError(
                f"unknown space {self.space.kind!r}; expected one of {[k.value for k in SpaceKind]}"
            )
        return WeightFamily(kind, self.dimension, float(self.space.bergman_parameter))

    def test_function_handle(self) -> TestFunction:
        return make_test_function(self.test_function, self.polynomial_coefficients)

    def to_dict(self):
        return OmegaConf.to_container(OmegaConf.structured(self), resolve=True)

    def config_hash(self) -> str:
        """SHA-256 of the settings that determine the numbers (output location and worker count excluded)."""
        settings = {k: v for k, v in self.to_dict().items() if k not in HASH_EXCLUDED}
        payload = json.dumps(settings, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode()).hexdigest()


def default_schedule(dimension: int, max_rank: int) -> List[int]:
    """The standard sweep, dropping cutoffs whose rank is over the cap."""
    schedule = [n for n in DEFAULT_SCHEDULE if rank_PN(dimension, n) <= max_rank]
    if not schedule:
        raise ConfigError(f"no default cutoff fits under max_rank={max_rank} at d={dimension}")
    if len(schedule) < len(DEFAULT_SCHEDULE):
        logger.info(f"[Config] d={dimension}: cutoff schedule capped at N={schedule[-1]}")
    return schedule


def validate_config(cfg: ExperimentConfig) -> ExperimentConfig:
    """Check the invariants of a config and fill in the default schedule."""
    if cfg.experiment not in EXPERIMENTS.values():
        raise ConfigError(f"unknown experiment {cfg.experiment!r}")
    if cfg.dimension < 1:
        raise ConfigError(f"dimension must be >= 1, got {cfg.dimension}")
    if cfg.max_rank < 1:
        raise ConfigError(f"max_rank must be positive, got {cfg.max_rank}")
    if not 0 <= cfg.seed < 2 ** 64:
        raise ConfigError(f"seed must be a 64-bit unsigned integer, got {cfg.seed}")
    cfg.weights()

    if not cfg.cutoffs:
        cfg.cutoffs = default_schedule(cfg.dimension, cfg.max_rank)
    cutoffs = list(cfg.cutoffs)
    if cutoffs[0] < 0 or any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise ConfigError(f"cutoffs must be non-negative and strictly increasing, got {cutoffs}")
    largest = rank_PN(cfg.dimension, cutoffs[-1])
    if largest > cfg.max_rank:
        raise RankCapExceeded(largest, cfg.max_rank, f"N={cutoffs[-1]} truncation")

    f = cfg.test_function_handle()
    if not isinstance(f, PolynomialFunction) and cfg.mc_samples < MIN_MC_SAMPLES:
        raise ConfigError(
            f"{f.name} needs at least {MIN_MC_SAMPLES} Monte Carlo samples, got {cfg.mc_samples}"
        )
    if cfg.mc_samples < 1 or cfg.positivity_samples < 1:
        raise ConfigError("sample counts must be positive")
    if cfg.folner_norm not in ("hs", "trace"):
        raise ConfigError(f"folner_norm must be 'hs' or 'trace', got {cfg.folner_norm!r}")
    if cfg.experiment in ("szego", "bergman", "determinant") and not cfg.symbol_file:
        raise ConfigError(f"experiment {cfg.experiment!r} needs a symbol_file")
    return cfg


def _resolve_symbol_path(cfg: ExperimentConfig, config_path: Optional[str]) -> None:
    if not cfg.symbol_file or Path(cfg.symbol_file).is_absolute() or Path(cfg.symbol_file).exists():
        return
    for base in ([Path(config_path).parent] if config_path else []) + [CONFIG_DIR.parent]:
        candidate = base / cfg.symbol_file
        if candidate.exists():
            cfg.symbol_file = str(candidate)
            return


def _compose_defaults(experiment: str):
    if not CONFIG_DIR.is_dir():
        logger.warning(f"[Config] {CONFIG_DIR} not found; using built-in defaults")
        return OmegaConf.create({"experiment": experiment, "name": experiment})
    with initialize_config_dir(version_base=None, config_dir=str(CONFIG_DIR)):
        return compose(config_name="main", overrides=[f"experiment={experiment}"])


def load_experiment_config(
    command: str,
    config_path: Optional[str] = None,
    overrides: Sequence[str] = (),
    output_dir: Optional[str] = None,
    seed: Optional[int] = None,
    max_rank: Optional[int] = None,
) -> ExperimentConfig:
    """Compose, merge and validate the config for one subcommand."""
    if command not in EXPERIMENTS:
        raise ConfigError(f"unknown command {command!r}; expected one of {sorted(EXPERIMENTS)}")
    experiment = EXPERIMENTS[command]

    flags = {}
    if output_dir is not None:
        flags["output_dir"] = output_dir
    if seed is not None:
        flags["seed"] = seed
    if max_rank is not None:
        flags["max_rank"] = max_rank

    try:
        layers = [OmegaConf.structured(ExperimentConfig), _compose_defaults(experiment)]
        if config_path:
            if not Path(config_path).exists():
                raise ConfigError(f"config file not found: {config_path}")
            layers.append(OmegaConf.load(config_path))
        layers.append(OmegaConf.create(flags))
        layers.append(OmegaConf.from_dotlist(list(overrides)))
        merged = OmegaConf.merge(*layers)
        if merged.experiment != experiment:
            raise ConfigError(
                f"`{command}` runs the {experiment!r} experiment, config says {merged.experiment!r}"
            )
        cfg = OmegaConf.to_object(merged)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f"{config_path}:{mark.line + 1}" if mark is not None else str(config_path)
        raise ConfigError(f"{where}: {getattr(e, 'problem', None) or e}")
    except OmegaConfBaseException as e:
        raise ConfigError(f"invalid configuration: {e}")

    _resolve_symbol_path(cfg, config_path)
    return validate_config(cfg)
