"""
Data models for the swirlflow solvers
"""
import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional

from .errors import InvalidStateError


class Direction(str, Enum):
    """Radial direction of the mass flux"""
    OUTWARD = "Outward"
    INWARD = "Inward"


class Branch(str, Enum):
    """Root of the mass-flux polynomial on either side of its minimizer"""
    RADIAL_SUPERSONIC = "RadialSupersonic"
    RADIAL_SUBSONIC = "RadialSubsonic"


class MachRegime(str, Enum):
    """Total-Mach classification of a single state"""
    SUPERSONIC = "supersonic"
    SUBSONIC = "subsonic"
    SONIC = "sonic"


class SmoothLabel(str, Enum):
    """Flow patterns of smooth one-sided boundary value problems"""
    SUPERSONIC = "Supersonic"
    SUBSONIC = "Subsonic"
    TRANSONIC_SMOOTH = "TransonicSmooth"
    SUPERSONIC_TO_SONIC_AT_OUTER = "SupersonicToSonicAtOuter"
    SONIC_AT_INNER = "SonicAtInner"
    SONIC_AT_OUTER = "SonicAtOuter"
    NO_GLOBAL_SOLUTION = "NoGlobalSolution"
    PURELY_CIRCULATORY = "PurelyCirculatory"


class ShockLabel(str, Enum):
    """Flow patterns behind a circular transonic shock"""
    SUP_SUB_UNIFORM = "SupSubUniform"
    SUP_SUP_UNIFORM = "SupSupUniform"
    SUP_SUP_TO_SUBSONIC_DOWNSTREAM = "SupSupToSubsonicDownstream"
    SUP_SUP_SONIC_AT_EXIT = "SupSupSonicAtExit"
    SUP_SONIC_COINCIDENT = "SupSonicCoincident"
    SUB_TO_SUPERSONIC_DOWNSTREAM = "SubToSupersonicDownstream"
    SONIC_AT_EXIT = "SonicAtExit"
    NO_SOLUTION = "NoSolution"


@dataclass(frozen=True)
class GasModel:
    """Polytropic gas p = A rho^gamma with the tolerances used by every solver"""
    gamma: float
    tol_residual: float = 1e-10
    tol_root: float = 1e-13
    eps_sonic: float = 1e-9

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise InvalidStateError(f"gamma must exceed 1, got {self.gamma!r}")
        for name in ("tol_residual", "tol_root", "eps_sonic"):
            value = getattr(self, name)
            if not 0.0 < value < 1e-3:
                raise InvalidStateError(f"{name} must lie in (0, 1e-3), got {value!r}")


@dataclass(frozen=True)
class BoundaryState:
    """Prescribed flow state on one circle of the annulus"""
    r: float
    rho: float
    u1: float
    u2: float
    A: float

    def __post_init__(self):
        if not (self.r > 0 and self.rho > 0 and self.A > 0):
            raise InvalidStateError(
                f"boundary needs r, rho, A > 0, got r={self.r!r}, rho={self.rho!r}, A={self.A!r}"
            )


@dataclass(frozen=True)
class FlowInvariants:
    """Conserved quantities of one smooth flow region"""
    kappa1: float
    kappa2: float
    B0: float
    A: float
    direction: Direction

    def __post_init__(self):
        if not (self.B0 > 0 and self.A > 0):
            raise InvalidStateError(f"B0 and A must be positive, got B0={self.B0!r}, A={self.A!r}")
        if self.kappa1 > 0 and self.direction is not Direction.OUTWARD:
            raise InvalidStateError("positive mass flux requires outward direction")
        if self.kappa1 < 0 and self.direction is not Direction.INWARD:
            raise InvalidStateError("negative mass flux requires inward direction")

    def with_entropy(self, A: float) -> "FlowInvariants":
        """Same flux constants with a different entropy constant (flow behind a shock)"""
        return replace(self, A=A)


@dataclass(frozen=True)
class FlowState:
    """Pointwise flow description at one radius"""
    r: float
    rho: float
    u1: float
    u2: float
    p: float
    c2: float
    m1sq: float
    m2sq: float
    msq: float
    A: float

    def to_dict(self) -> Dict[str, float]:
        """Convert to dictionary"""
        return asdict(self)


@dataclass(frozen=True)
class SmoothRegime:
    """Classification of a smooth flow with the radii that justify it"""
    label: SmoothLabel
    r_c: Optional[float] = None
    r_sharp: Optional[float] = None
    branch: Optional[Branch] = None


@dataclass(frozen=True)
class RadialProfile:
    """Flow states sampled on an ascending radius grid"""
    states: List[FlowState]
    region: str
    branch: Optional[Branch] = None

    def __post_init__(self):
        radii = [state.r for state in self.states]
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise InvalidStateError("profile radii must be strictly increasing")

    def __len__(self) -> int:
        return len(self.states)

    @property
    def radii(self) -> List[float]:
        return [state.r for state in self.states]


@dataclass(frozen=True)
class ShockRegime:
    """Case table outcome for a shock problem"""
    label: ShockLabel
    problem: str
    subcase: Optional[str] = None
    r_star: Optional[float] = None
    r_star_prime: Optional[float] = None
    p0: Optional[float] = None
    p1: Optional[float] = None
    p_star_prime: Optional[float] = None
    rho_sharp: Optional[float] = None
    f2_at_rho_sharp: Optional[float] = None
    rho_sharp_sharp: Optional[float] = None
    f2_at_rho_sharp_sharp: Optional[float] = None
    r_sharp_minus: Optional[float] = None
    r_sharp_plus: Optional[float] = None
    # relative distance of p_ex from p'_* when that comparison decided the label
    margin: Optional[float] = None

    def to_dict(self) -> Dict[str, object]:
        """Convert to dictionary, dropping unset diagnostics"""
        data = {"regime": self.label.value, "problem": self.problem}
        for key, value in asdict(self).items():
            if key in ("label", "problem") or value is None:
                continue
            data[key] = value
        return data


@dataclass(frozen=True)
class ShockSolution:
    """Piecewise smooth flow with one circular shock"""
    r_b: float
    upstream: FlowState
    downstream: FlowState
    A_plus: float
    x: float
    p_exit: float
    r_exit: float
    invariants: FlowInvariants
    regime: Optional[ShockRegime] = None

    @property
    def A_minus(self) -> float:
        return self.invariants.A

    def to_dict(self) -> Dict[str, object]:
        """Convert to dictionary"""
        data = {
            "r_b": self.r_b,
            "x": self.x,
            "A_minus": self.A_minus,
            "A_plus": self.A_plus,
            "p_exit": self.p_exit,
            "r_exit": self.r_exit,
            "upstream": self.upstream.to_dict(),
            "downstream": self.downstream.to_dict(),
        }
        if self.regime is not None:
            data.update(self.regime.to_dict())
        return data


@dataclass(frozen=True)
class ShockInequalityReport:
    """Measured values of the inequalities behind exit-pressure monotonicity"""
    radial_mach_sum: float
    cross_mach_term: float
    dK0_drb: float
    dA_plus_drb: float
    failures: List[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class SweepRow:
    """One shock position of an exit-pressure sweep"""
    r_b: float
    p_exit: float
    a_plus: float
    x: float
    downstream_msq: float
    regime: str


@dataclass
class RegimeReport:
    """Classification outcome printed by the command line front end"""
    problem: str
    regime: str
    subcase: Optional[str] = None
    diagnostics: Dict[str, float] = field(default_factory=dict)
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, object]:
        """Convert to dictionary"""
        data: Dict[str, object] = {"problem": self.problem, "regime": self.regime}
        if self.subcase is not None:
            data["subcase"] = self.subcase
        for key, value in self.diagnostics.items():
            if value is None or (isinstance(value, float) and not math.isfinite(value)):
                continue
            data[key] = value
        if self.error is not None:
            data["error"] = self.error
        return data
