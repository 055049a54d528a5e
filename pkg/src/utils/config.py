import json
import os
from typing import Any, Dict, List, Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.utils.errors import ConfigError

# Load environment variables from .env file
load_dotenv()

# ---------------------------------------------------------------------
# Environment defaults
# ---------------------------------------------------------------------


def _env_float(name: str, default: float) -> float:
    try:
        return float(os.getenv(name, str(default)))
    except ValueError:
        raise ConfigError(f"{name} must be a number, got {os.getenv(name)!r}")


def _env_int(name: str, default: int) -> int:
    try:
        return int(os.getenv(name, str(default)))
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {os.getenv(name)!r}")


DEFAULT_EPS = _env_float("CLUSTERBOUND_EPS", 1e-8)
DEFAULT_ORACLE_CAP = _env_int("CLUSTERBOUND_ORACLE_CAP", 2500)
DEFAULT_DENSE_FACTOR_LIMIT = _env_int("CLUSTERBOUND_DENSE_FACTOR_LIMIT", 2500)
DEFAULT_OUT_DIR = os.getenv("CLUSTERBOUND_OUT_DIR", "results")

# i_max per coarse space, as used for the published experiment table
DEFAULT_I_MAX: Dict[str, int] = {"gdsw": 100, "rgdsw": 300, "none": 100}

CoarseKind = Literal["gdsw", "rgdsw", "none"]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ---------------------------------------------------------------------
# Config sections
# ---------------------------------------------------------------------


class ProblemConfig(_Strict):
    H: float = 0.25
    H_over_h: int = 16
    contrast: float = 1e8
    background: float = 1.0
    inclusions_per_edge: int = 2
    channel_len: int = 3
    channel_width: int = 1
    f: float = 1.0
    bc: float = 0.0

    @field_validator("H")
    @classmethod
    def _reciprocal_integer(cls, v: float) -> float:
        if v <= 0 or v > 1:
            raise ValueError("H must lie in (0, 1]")
        inv = 1.0 / v
        if abs(inv - round(inv)) > 1e-9:
            raise ValueError(f"1/H must be an integer, got 1/H={inv}")
        return v

    @field_validator("H_over_h", "channel_width")
    @classmethod
    def _positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be >= 1")
        return v

    @field_validator("contrast", "background")
    @classmethod
    def _positive_coefficient(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("coefficients must be strictly positive")
        return v

    @property
    def n_sub(self) -> int:
        return int(round(1.0 / self.H))


class PreconditionerConfig(_Strict):
    coarse_space: CoarseKind = "gdsw"
    overlap: int = Field(default=2, ge=0)


class StopConfig(_Strict):
    mode: Literal["residual", "anorm"] = "residual"
    eps: float = DEFAULT_EPS
    max_iter: int = Field(default=5000, gt=0)

    @field_validator("eps")
    @classmethod
    def _unit_interval(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError("eps must lie in (0, 1)")
        return v


class EstimatorSettings(_Strict):
    eta: int = Field(default=5, ge=1)
    tau: float = Field(default=0.1, gt=0)
    i_max: Optional[int] = None
    r: float = Field(default=0.5, gt=0, le=1)
    enabled: bool = True

    def resolved_i_max(self, coarse_space: str) -> int:
        return self.i_max if self.i_max is not None else DEFAULT_I_MAX.get(coarse_space, 100)


class SyntheticConfig(_Strict):
    cases: int = Field(default=100, ge=0)
    clusters: List[int] = Field(default_factory=lambda: [1, 2, 3, 4])
    n_max: int = Field(default=400, ge=1)
    kappa_max: float = Field(default=1e10, ge=1)
    spectrum_files: List[str] = Field(default_factory=list)


class ExperimentConfig(_Strict):
    problem: ProblemConfig = Field(default_factory=ProblemConfig)
    preconditioner: PreconditionerConfig = Field(default_factory=PreconditionerConfig)
    stop: StopConfig = Field(default_factory=StopConfig)
    estimator: EstimatorSettings = Field(default_factory=EstimatorSettings)
    synthetic: SyntheticConfig = Field(default_factory=SyntheticConfig)
    H_list: List[float] = Field(default_factory=list)
    coarse_spaces: List[CoarseKind] = Field(default_factory=lambda: ["gdsw", "rgdsw"])
    out_dir: str = DEFAULT_OUT_DIR
    seed: int = 0
    oracle_cap: int = Field(default=DEFAULT_ORACLE_CAP, ge=1)
    jobs: int = Field(default=1, ge=1)


# ---------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------


def build_experiment_config(data: Optional[Dict[str, Any]] = None, **overrides: Any) -> ExperimentConfig:
    """
    Validate a raw dict into an ExperimentConfig, applying flat overrides
    (CLI flags) on top: eps, mode, seed, out_dir, oracle_cap, jobs.
    """
    raw: Dict[str, Any] = json.loads(json.dumps(data or {}))
    stop = raw.setdefault("stop", {})
    for key in ("eps", "mode"):
        if overrides.get(key) is not None:
            stop[key] = overrides[key]
    for key in ("seed", "out_dir", "oracle_cap", "jobs"):
        if overrides.get(key) is not None:
            raw[key] = overrides[key]
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigError(f"Invalid experiment config:\n{e}") from e


def load_experiment_config(path: Optional[str], **overrides: Any) -> ExperimentConfig:
    data: Dict[str, Any] = {}
    if path:
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except FileNotFoundError:
            raise ConfigError(f"Config file not found: {path}")
        except json.JSONDecodeError as e:
            raise ConfigError(f"Config file {path} is not valid JSON: {e}")
        if not isinstance(data, dict):
            raise ConfigError(f"Config file {path} must hold a JSON object")
    return build_experiment_config(data, **overrides)
