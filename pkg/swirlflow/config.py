"""
Configuration settings for swirlflow runs
"""
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, model_validator

from .errors import ConfigError
from .models import GasModel

load_dotenv()


@dataclass
class OutputFormats:
    """Column layouts of the emitted tables"""
    PROFILE_HEADER = ["r", "rho", "u1", "u2", "p", "c2", "m1sq", "m2sq", "msq", "A", "region"]
    SWEEP_HEADER = ["r_b", "p_exit", "a_plus", "x", "downstream_msq", "regime"]


@dataclass
class ExitCodes:
    """Process exit codes shared by every subcommand"""
    OK = 0
    CONFIG_ERROR = 2
    SOLVER_ERROR = 3


@dataclass
class AppConfig:
    """Main application configuration"""
    # Numerical tolerances
    TOL_RESIDUAL = float(os.getenv("SWIRLFLOW_TOL_RESIDUAL", "1e-10"))
    TOL_ROOT = float(os.getenv("SWIRLFLOW_TOL_ROOT", "1e-13"))
    EPS_SONIC = float(os.getenv("SWIRLFLOW_EPS_SONIC", "1e-9"))

    # Shock positions used in place of the annulus endpoints
    BOUNDARY_OFFSET = 1e-8

    # Sampling
    DEFAULT_SAMPLES = 512
    SHOCK_MIN_SAMPLES = 4
    DEFAULT_SWEEP_POINTS = 50

    # Logging and terminal output
    LOG_LEVEL = os.getenv("SWIRLFLOW_LOG_LEVEL", "WARNING")
    NO_COLOR = os.getenv("NO_COLOR") is not None

    FORMATS = OutputFormats()
    EXIT_CODES = ExitCodes()


class Annulus(BaseModel):
    r_inner: float = Field(gt=0)
    r_outer: float = Field(gt=0)

    @model_validator(mode="after")
    def _ordered(self) -> "Annulus":
        if not self.r_inner < self.r_outer:
            raise ValueError("annulus needs r_inner < r_outer")
        return self


class BoundaryConfig(BaseModel):
    radius: float = Field(gt=0)
    rho: float = Field(gt=0)
    u1: float
    u2: float
    A: float = Field(gt=0)


class OutputConfig(BaseModel):
    format: Literal["csv", "json"] = "csv"
    path: Optional[str] = None


class ToleranceConfig(BaseModel):
    tol_residual: Optional[float] = None
    tol_root: Optional[float] = None
    eps_sonic: Optional[float] = None


class RunConfig(BaseModel):
    """Schema of the JSON run configuration"""
    gamma: float = Field(gt=1)
    problem: Literal["I", "II", "III", "IV", "circulatory"]
    annulus: Annulus
    boundary: BoundaryConfig
    exit_pressure: Optional[float] = Field(default=None, gt=0)
    samples: int = Field(default=AppConfig.DEFAULT_SAMPLES, ge=2)
    output: OutputConfig = Field(default_factory=OutputConfig)
    tolerances: Optional[ToleranceConfig] = None

    @model_validator(mode="after")
    def _consistent(self) -> "RunConfig":
        inner_problems = ("I", "III", "circulatory")
        expected = self.annulus.r_inner if self.problem in inner_problems else self.annulus.r_outer
        if abs(self.boundary.radius - expected) > 1e-12 * expected:
            side = "r_inner" if self.problem in inner_problems else "r_outer"
            raise ValueError(f"boundary.radius must equal annulus.{side} for problem {self.problem}")
        if self.problem == "circulatory":
            if self.boundary.u1 != 0.0 or self.boundary.u2 == 0.0:
                raise ValueError("circulatory runs need u1 = 0 and u2 != 0")
        elif self.problem in inner_problems and not self.boundary.u1 > 0.0:
            raise ValueError(f"problem {self.problem} needs outward data (u1 > 0)")
        elif self.problem not in inner_problems and not self.boundary.u1 < 0.0:
            raise ValueError(f"problem {self.problem} needs inward data (u1 < 0)")
        needs_pressure = self.problem in ("III", "IV")
        if needs_pressure and self.exit_pressure is None:
            raise ValueError(f"exit_pressure is required for problem {self.problem}")
        if not needs_pressure and self.exit_pressure is not None:
            raise ValueError("exit_pressure is only accepted for problems III and IV")
        if needs_pressure and self.samples < AppConfig.SHOCK_MIN_SAMPLES:
            raise ValueError(f"shock profiles need samples >= {AppConfig.SHOCK_MIN_SAMPLES}")
        return self

    def gas_model(self) -> GasModel:
        """Gas model with tolerance overrides applied over the environment defaults"""
        overrides = self.tolerances or ToleranceConfig()

        def pick(value: Optional[float], default: float) -> float:
            return default if value is None else value

        try:
            return GasModel(
                gamma=self.gamma,
                tol_residual=pick(overrides.tol_residual, AppConfig.TOL_RESIDUAL),
                tol_root=pick(overrides.tol_root, AppConfig.TOL_ROOT),
                eps_sonic=pick(overrides.eps_sonic, AppConfig.EPS_SONIC),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def load_run_config(path: str) -> RunConfig:
    """Read and validate a JSON run configuration"""
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        return RunConfig.model_validate_json(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        if first["type"] == "json_invalid":
            raise ConfigError(f"malformed JSON in {path}: {first['msg']}") from exc
        location = ".".join(str(part) for part in first["loc"]) or "config"
        raise ConfigError(f"invalid config {path}: {location}: {first['msg']}") from exc
