"""
Smooth radially symmetric flows: branch-resolved density solving, sonic and
limiting circles, regime classification for outward and inward data, and a
Runge-Kutta oracle over the derivative system.
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidStateError, NoRootError, SonicBoundaryError, SonicSingularityError
from .gas_core import (
    bracketed_root,
    circulatory_invariants,
    critical_density,
    expand_bracket,
    flow_state,
    invariants_from_boundary,
    mass_flux_residual,
    mass_flux_slope,
    minimizer_density,
    state_from_density,
    swirl_bernoulli_K,
    vacuum_radius,
)
from .models import (
    BoundaryState,
    Branch,
    FlowInvariants,
    FlowState,
    GasModel,
    RadialProfile,
    SmoothLabel,
    SmoothRegime,
)

logger = logging.getLogger(__name__)

NEWTON_POLISH_STEPS = 5
# grid refinement toward the limiting circle
REFINE_DISTANCE = 1e-2
REFINE_RATIO = 0.9
REFINE_FLOOR = 1e-6


def limiting_function(gas: GasModel, inv: FlowInvariants, r: float) -> float:
    """G(r) = F_r(rho_*(r)); strictly decreasing, positive inside the limiting circle"""
    g = gas.gamma
    K = swirl_bernoulli_K(gas, inv, r)
    if K <= 0.0:
        raise InvalidStateError(f"radius {r!r} is inside the vacuum circle")
    return (
        -0.5 * (g * inv.A) ** (-2.0 / (g - 1.0)) * K ** ((g + 1.0) / (g - 1.0))
        + inv.kappa1 ** 2 / (2.0 * r * r)
    )


def limiting_radius_lower_bound(gas: GasModel, inv: FlowInvariants) -> float:
    """Swirl-free estimate of the limiting radius; exact when kappa2 = 0"""
    g = gas.gamma
    return (
        (g * inv.A) ** (1.0 / (g - 1.0))
        * ((g + 1.0) / (2.0 * (g - 1.0) * inv.B0)) ** ((g + 1.0) / (2.0 * (g - 1.0)))
        * abs(inv.kappa1)
    )


def solve_density(gas: GasModel, inv: FlowInvariants, r: float, branch: Branch) -> float:
    """Root of F_r on the requested side of its minimizer"""
    if inv.kappa1 == 0.0:
        raise InvalidStateError("no radial mass flux; use circulatory_density")
    try:
        rho_star = minimizer_density(gas, inv, r)
    except InvalidStateError as exc:
        raise NoRootError(str(exc)) from exc

    def residual(rho: float) -> float:
        return mass_flux_residual(gas, inv, r, rho)

    scale = inv.kappa1 ** 2 / (2.0 * r * r)
    at_minimum = residual(rho_star)
    if at_minimum > gas.tol_residual * scale:
        raise NoRootError(f"radius {r!r} lies inside the limiting circle")
    if at_minimum >= 0.0:
        # branches merge on the limiting circle
        return rho_star

    if branch is Branch.RADIAL_SUPERSONIC:
        lo, hi = 0.0, rho_star
    else:
        lo, hi = rho_star, expand_bracket(residual, 2.0 * rho_star, positive=True)
        logger.debug("subsonic bracket at r=%g: [%g, %g]", r, lo, hi)
    rho = bracketed_root(residual, lo, hi, gas.tol_root * rho_star)

    value = residual(rho)
    for _ in range(NEWTON_POLISH_STEPS):
        slope = mass_flux_slope(gas, inv, r, rho)
        if slope == 0.0 or value == 0.0:
            break
        candidate = rho - value / slope
        if not lo < candidate < hi:
            break
        candidate_value = residual(candidate)
        if abs(candidate_value) >= abs(value):
            break
        rho, value = candidate, candidate_value

    if abs(value) > gas.tol_residual * max(scale, 1.0):
        logger.warning("density residual %g at r=%g exceeds tolerance", value, r)
    return rho


def sonic_radius(gas: GasModel, inv: FlowInvariants) -> float:
    """Radius of the total-sonic state (rho_c) on the subsonic branch"""
    g = gas.gamma
    rho_c = critical_density(gas, inv)
    return math.sqrt(
        (g + 1.0) * (inv.kappa1 ** 2 + inv.kappa2 ** 2 * rho_c ** 2)
        / (2.0 * (g - 1.0) * inv.B0 * rho_c ** 2)
    )


def limiting_radius(gas: GasModel, inv: FlowInvariants) -> float:
    """Radius r_sharp where both density branches merge and M1^2 = 1"""
    if inv.kappa1 == 0.0:
        raise InvalidStateError("limiting circle needs nonzero mass flux")

    def G(r: float) -> float:
        return limiting_function(gas, inv, r)

    lo = max(vacuum_radius(inv) * (1.0 + 1e-12), 0.5 * limiting_radius_lower_bound(gas, inv))
    hi = expand_bracket(G, 2.0 * lo, positive=False)
    r_sharp = bracketed_root(G, lo, hi, gas.tol_root * hi)
    logger.debug("limiting radius %.15g from bracket [%g, %g]", r_sharp, lo, hi)
    return r_sharp


def boundary_branch(gas: GasModel, b: BoundaryState) -> Branch:
    """Branch of F_r the boundary density sits on"""
    state = flow_state(gas, b.A, b.r, b.rho, b.u1, b.u2)
    if abs(state.m1sq - 1.0) <= gas.eps_sonic:
        raise SonicBoundaryError(f"boundary at r={b.r!r} is radial-sonic (M1^2={state.m1sq!r})")
    return Branch.RADIAL_SUPERSONIC if state.m1sq > 1.0 else Branch.RADIAL_SUBSONIC


def _close(a: float, b: float, eps: float) -> bool:
    return abs(a - b) <= eps * abs(b)


def classify_outward(gas: GasModel, b: BoundaryState, r1: float) -> SmoothRegime:
    """Flow pattern of an outward smooth flow on [b.r, r1] (Problem I)"""
    if not b.u1 > 0.0:
        raise InvalidStateError("outward classification needs u1 > 0")
    if not r1 > b.r:
        raise InvalidStateError(f"outer radius {r1!r} must exceed {b.r!r}")
    branch = boundary_branch(gas, b)
    state = flow_state(gas, b.A, b.r, b.rho, b.u1, b.u2)
    if branch is Branch.RADIAL_SUPERSONIC:
        return SmoothRegime(SmoothLabel.SUPERSONIC, branch=branch)
    if abs(state.msq - 1.0) <= gas.eps_sonic:
        return SmoothRegime(SmoothLabel.SONIC_AT_INNER, r_c=b.r, branch=branch)
    if state.msq < 1.0:
        return SmoothRegime(SmoothLabel.SUBSONIC, branch=branch)

    r_c = sonic_radius(gas, invariants_from_boundary(gas, b))
    logger.debug("outward |M|^2 > 1 > M1^2 at r0=%g; sonic circle at %g", b.r, r_c)
    if _close(r1, r_c, gas.eps_sonic):
        label = SmoothLabel.SUPERSONIC_TO_SONIC_AT_OUTER
    elif r1 > r_c:
        label = SmoothLabel.TRANSONIC_SMOOTH
    else:
        label = SmoothLabel.SUPERSONIC
    return SmoothRegime(label, r_c=r_c, branch=branch)


def classify_inward(gas: GasModel, b: BoundaryState, r0: float) -> SmoothRegime:
    """Flow pattern of an inward smooth flow on [r0, b.r] (Problem II)"""
    if not b.u1 < 0.0:
        raise InvalidStateError("inward classification needs u1 < 0")
    if not 0.0 < r0 < b.r:
        raise InvalidStateError(f"inner radius {r0!r} must lie in (0, {b.r!r})")
    branch = boundary_branch(gas, b)
    state = flow_state(gas, b.A, b.r, b.rho, b.u1, b.u2)
    inv = invariants_from_boundary(gas, b)
    r_sharp = limiting_radius(gas, inv)
    if r0 < r_sharp * (1.0 - gas.eps_sonic):
        logger.info("inner radius %g is inside the limiting circle %g", r0, r_sharp)
        return SmoothRegime(SmoothLabel.NO_GLOBAL_SOLUTION, r_sharp=r_sharp, branch=branch)

    if branch is Branch.RADIAL_SUPERSONIC or state.msq > 1.0 + gas.eps_sonic:
        return SmoothRegime(SmoothLabel.SUPERSONIC, r_sharp=r_sharp, branch=branch)
    if abs(state.msq - 1.0) <= gas.eps_sonic:
        return SmoothRegime(SmoothLabel.SONIC_AT_OUTER, r_c=b.r, r_sharp=r_sharp, branch=branch)

    r_c = sonic_radius(gas, inv)
    if _close(r0, r_c, gas.eps_sonic):
        label = SmoothLabel.SONIC_AT_INNER
    elif r0 > r_c:
        label = SmoothLabel.SUBSONIC
    else:
        label = SmoothLabel.TRANSONIC_SMOOTH
    return SmoothRegime(label, r_c=r_c, r_sharp=r_sharp, branch=branch)


def circulatory_density(gas: GasModel, inv: FlowInvariants, r: float) -> float:
    """Closed-form density of a flow without radial velocity"""
    g = gas.gamma
    head = inv.B0 - inv.kappa2 ** 2 / (2.0 * r * r)
    if head <= 0.0:
        raise NoRootError(f"radius {r!r} is inside the vacuum circle")
    return ((g - 1.0) / (inv.A * g)) ** (1.0 / (g - 1.0)) * head ** (1.0 / (g - 1.0))


def circulatory_sonic_radius(gas: GasModel, inv: FlowInvariants) -> float:
    g = gas.gamma
    return math.sqrt((g + 1.0) / (2.0 * (g - 1.0) * inv.B0)) * abs(inv.kappa2)


def purely_circulatory(
    gas: GasModel, b: BoundaryState, r_outer: float, samples: int
) -> Tuple[RadialProfile, SmoothRegime]:
    """Profile and pattern of a purely circulatory flow on [b.r, r_outer]"""
    inv = circulatory_invariants(gas, b)
    if not r_outer > b.r:
        raise InvalidStateError(f"outer radius {r_outer!r} must exceed {b.r!r}")
    state = flow_state(gas, b.A, b.r, b.rho, 0.0, b.u2)
    r_c = circulatory_sonic_radius(gas, inv)
    if abs(state.msq - 1.0) <= gas.eps_sonic:
        regime = SmoothRegime(SmoothLabel.SONIC_AT_INNER, r_c=b.r)
    elif state.msq < 1.0:
        regime = SmoothRegime(SmoothLabel.SUBSONIC)
    elif _close(r_outer, r_c, gas.eps_sonic):
        regime = SmoothRegime(SmoothLabel.SUPERSONIC_TO_SONIC_AT_OUTER, r_c=r_c)
    elif r_c < r_outer:
        regime = SmoothRegime(SmoothLabel.TRANSONIC_SMOOTH, r_c=r_c)
    else:
        # sonic circle beyond the annulus
        regime = SmoothRegime(SmoothLabel.SUPERSONIC, r_c=r_c)

    states = [
        state_from_density(gas, inv, r, circulatory_density(gas, inv, r))
        for r in radius_grid(b.r, r_outer, samples)
    ]
    return RadialProfile(states, SmoothLabel.PURELY_CIRCULATORY.value), regime


def radius_grid(r_lo: float, r_hi: float, n: int, r_sharp: Optional[float] = None) -> np.ndarray:
    """Ascending sample radii, uniform unless r_lo sits next to the limiting circle"""
    if n < 2:
        raise InvalidStateError(f"need at least two samples, got {n}")
    if not r_lo < r_hi:
        raise InvalidStateError(f"empty radius range [{r_lo!r}, {r_hi!r}]")
    if r_sharp is None or r_lo - r_sharp >= REFINE_DISTANCE:
        grid = np.linspace(r_lo, r_hi, n)
    else:
        weights = np.maximum(REFINE_RATIO ** np.arange(n - 2, -1, -1, dtype=float), REFINE_FLOOR)
        fractions = np.concatenate(([0.0], np.cumsum(weights) / weights.sum()))
        grid = r_lo + (r_hi - r_lo) * fractions
    grid[0], grid[-1] = r_lo, r_hi
    return grid


def profile(
    gas: GasModel,
    inv: FlowInvariants,
    branch: Branch,
    r_lo: float,
    r_hi: float,
    n: int,
    region: str = "smooth",
) -> RadialProfile:
    """Sample a smooth flow on one density branch"""
    if inv.kappa1 == 0.0:
        grid = radius_grid(r_lo, r_hi, n)
        states = [state_from_density(gas, inv, r, circulatory_density(gas, inv, r)) for r in grid]
        return RadialProfile(states, region)
    grid = radius_grid(r_lo, r_hi, n, limiting_radius(gas, inv))
    states = [state_from_density(gas, inv, r, solve_density(gas, inv, r, branch)) for r in grid]
    return RadialProfile(states, region, branch)


def _check_regular(gas: GasModel, state: FlowState):
    if abs(state.m1sq - 1.0) <= gas.eps_sonic:
        raise SonicSingularityError(f"radial-sonic state at r={state.r!r}")


def ode_rhs(gas: GasModel, state: FlowState) -> Tuple[float, float, float]:
    """(drho/dr, dU1/dr, dU2/dr) of the reduced steady Euler system"""
    _check_regular(gas, state)
    r = state.r
    denom = r * (1.0 - state.m1sq)
    return (
        state.msq * state.rho / denom,
        -(1.0 + state.m2sq) * state.u1 / denom,
        -state.u2 / r,
    )


def mach_derivatives(gas: GasModel, state: FlowState) -> Tuple[float, float, float]:
    """Radial derivatives of M1^2, M2^2 and |M|^2"""
    _check_regular(gas, state)
    g = gas.gamma
    m1, m2, m = state.m1sq, state.m2sq, state.msq
    denom = state.r * (m1 - 1.0)
    return (
        m1 * (2.0 + (g - 1.0) * m1 + (g + 1.0) * m2) / denom,
        m2 * (2.0 + (g - 3.0) * m1 + (g - 1.0) * m2) / denom,
        m * (2.0 + (g - 1.0) * m) / denom,
    )


def integrate_rk4(
    gas: GasModel,
    A: float,
    start: FlowState,
    radii: Sequence[float],
    max_step: float = 1e-4,
) -> List[FlowState]:
    """Classical RK4 march of ode_rhs from start through each radius in turn"""

    def rhs(r: float, y: np.ndarray) -> np.ndarray:
        return np.array(ode_rhs(gas, flow_state(gas, A, r, y[0], y[1], y[2])))

    r = start.r
    y = np.array([start.rho, start.u1, start.u2], dtype=float)
    states = []
    for target in radii:
        steps = max(1, int(math.ceil(abs(target - r) / max_step)))
        h = (target - r) / steps
        for _ in range(steps):
            k1 = rhs(r, y)
            k2 = rhs(r + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(r + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(r + h, y + h * k3)
            y = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            r += h
        r = float(target)
        states.append(flow_state(gas, A, r, y[0], y[1], y[2]))
    return states
