"""
Thermodynamic and invariant algebra shared by the smooth and shock solvers
"""
import logging
import math
from typing import Callable

from scipy.optimize import brentq

from .errors import BracketError, InvalidStateError
from .models import BoundaryState, Direction, FlowInvariants, FlowState, GasModel, MachRegime

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 200


def pressure(gas: GasModel, A: float, rho: float) -> float:
    return A * rho ** gas.gamma


def sound_speed_sq(gas: GasModel, A: float, rho: float) -> float:
    return gas.gamma * A * rho ** (gas.gamma - 1.0)


def flow_state(gas: GasModel, A: float, r: float, rho: float, u1: float, u2: float) -> FlowState:
    """Build the full pointwise state from primitive variables"""
    c2 = sound_speed_sq(gas, A, rho)
    m1sq = u1 * u1 / c2
    m2sq = u2 * u2 / c2
    return FlowState(
        r=float(r),
        rho=float(rho),
        u1=float(u1),
        u2=float(u2),
        p=pressure(gas, A, rho),
        c2=c2,
        m1sq=m1sq,
        m2sq=m2sq,
        msq=m1sq + m2sq,
        A=A,
    )


def bernoulli(gas: GasModel, state: FlowState) -> float:
    """Bernoulli function 1/2 |U|^2 + c^2/(gamma - 1)"""
    return 0.5 * (state.u1 ** 2 + state.u2 ** 2) + state.c2 / (gas.gamma - 1.0)


def invariants_from_boundary(gas: GasModel, b: BoundaryState) -> FlowInvariants:
    """Conserved quantities carried by boundary data with nonzero radial velocity"""
    if b.u1 == 0.0:
        raise InvalidStateError("radial velocity is zero; use circulatory_invariants")
    direction = Direction.OUTWARD if b.u1 > 0 else Direction.INWARD
    return FlowInvariants(
        kappa1=b.r * b.rho * b.u1,
        kappa2=b.r * b.u2,
        B0=0.5 * (b.u1 ** 2 + b.u2 ** 2) + sound_speed_sq(gas, b.A, b.rho) / (gas.gamma - 1.0),
        A=b.A,
        direction=direction,
    )


def circulatory_invariants(gas: GasModel, b: BoundaryState) -> FlowInvariants:
    """Conserved quantities of a purely circulatory flow (no radial mass flux)"""
    if b.u1 != 0.0:
        raise InvalidStateError("circulatory flow needs zero radial velocity")
    if b.u2 == 0.0:
        raise InvalidStateError("static gas: both velocity components vanish")
    return FlowInvariants(
        kappa1=0.0,
        kappa2=b.r * b.u2,
        B0=0.5 * b.u2 ** 2 + sound_speed_sq(gas, b.A, b.rho) / (gas.gamma - 1.0),
        A=b.A,
        direction=Direction.OUTWARD,
    )


def state_from_density(gas: GasModel, inv: FlowInvariants, r: float, rho: float) -> FlowState:
    """Recover velocities and Mach numbers from the density at a radius"""
    if not (r > 0 and rho > 0):
        raise InvalidStateError(f"state needs r > 0 and rho > 0, got r={r!r}, rho={rho!r}")
    return flow_state(gas, inv.A, r, rho, inv.kappa1 / (r * rho), inv.kappa2 / r)


def mass_flux_residual(gas: GasModel, inv: FlowInvariants, r: float, rho: float) -> float:
    """F_r(rho); its roots are the densities compatible with all invariants at radius r"""
    g = gas.gamma
    return (
        g / (g - 1.0) * inv.A * rho ** (g + 1.0)
        - (inv.B0 - inv.kappa2 ** 2 / (2.0 * r * r)) * rho * rho
        + inv.kappa1 ** 2 / (2.0 * r * r)
    )


def mass_flux_slope(gas: GasModel, inv: FlowInvariants, r: float, rho: float) -> float:
    """dF_r/drho"""
    g = gas.gamma
    return g * (g + 1.0) / (g - 1.0) * inv.A * rho ** g - 2.0 * (
        inv.B0 - inv.kappa2 ** 2 / (2.0 * r * r)
    ) * rho


def swirl_bernoulli_K(gas: GasModel, inv: FlowInvariants, r: float) -> float:
    """K(r): squared radial velocity of the radial-sonic state at r"""
    if not r > 0:
        raise InvalidStateError(f"radius must be positive, got {r!r}")
    g = gas.gamma
    return 2.0 * (g - 1.0) * inv.B0 / (g + 1.0) - (g - 1.0) * inv.kappa2 ** 2 / ((g + 1.0) * r * r)


def critical_density(gas: GasModel, inv: FlowInvariants) -> float:
    """Density of the total-sonic state"""
    g = gas.gamma
    return (2.0 * (g - 1.0) * inv.B0 / ((g + 1.0) * g * inv.A)) ** (1.0 / (g - 1.0))


def minimizer_density(gas: GasModel, inv: FlowInvariants, r: float) -> float:
    """rho_*(r), where F_r attains its minimum; the state there is radial-sonic"""
    K = swirl_bernoulli_K(gas, inv, r)
    if K <= 0.0:
        raise InvalidStateError(
            f"radius {r!r} is inside the vacuum circle {vacuum_radius(inv)!r}"
        )
    return (K / (gas.gamma * inv.A)) ** (1.0 / (gas.gamma - 1.0))


def entropy_ratio_T1(gas: GasModel, x: float) -> float:
    """A+/A- across a shock with velocity ratio x = U1+/U1-"""
    g = gas.gamma
    lo = (g - 1.0) / (g + 1.0)
    hi = (g + 1.0) / (g - 1.0)
    if not lo < x < hi:
        raise InvalidStateError(f"velocity ratio {x!r} outside ({lo!r}, {hi!r})")
    return x ** g / (g + 1.0) * (-(g - 1.0) + 4.0 * g / ((g + 1.0) * x - (g - 1.0)))


def pressure_ratio_T2(gas: GasModel, x: float) -> float:
    """Pressure ratio as printed alongside T1; the two printed formulas coincide.

    Downstream pressure is always recomputed as A+ (rho+)^gamma, never from this ratio.
    """
    return entropy_ratio_T1(gas, x)


def vacuum_radius(inv: FlowInvariants) -> float:
    """Radius inside which the swirl alone exhausts the Bernoulli constant"""
    return abs(inv.kappa2) / math.sqrt(2.0 * inv.B0)


def mach_regime(gas: GasModel, msq: float) -> MachRegime:
    """Classify a squared total Mach number with the sonic tolerance"""
    if abs(msq - 1.0) <= gas.eps_sonic:
        return MachRegime.SONIC
    return MachRegime.SUPERSONIC if msq > 1.0 else MachRegime.SUBSONIC


def bracketed_root(f: Callable[[float], float], lo: float, hi: float, xtol: float) -> float:
    """Root of f on [lo, hi] by Brent's method; sign change required"""
    try:
        root, info = brentq(
            f, lo, hi, xtol=max(xtol, 1e-300), maxiter=MAX_ITERATIONS, full_output=True, disp=False
        )
    except ValueError as exc:
        raise BracketError(f"no sign change on [{lo!r}, {hi!r}]: {exc}") from exc
    if not info.converged:
        raise BracketError(f"root finder stopped after {info.iterations} iterations: {info.flag}")
    return root


def expand_bracket(f: Callable[[float], float], start: float, positive: bool) -> float:
    """Double start until f changes to the requested sign"""
    x = start
    for doublings in range(MAX_ITERATIONS):
        value = f(x)
        if (value > 0.0) == positive and value != 0.0:
            if doublings:
                logger.debug("bracket end moved from %g to %g", start, x)
            return x
        x *= 2.0
    raise BracketError(f"could not bracket a sign change starting from {start!r}")
