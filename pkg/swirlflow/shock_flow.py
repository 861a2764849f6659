"""
Circular transonic shocks in outward (Problem III) and inward (Problem IV)
swirling flows with a prescribed exit pressure.

All shock algebra runs on |U1|; stored states keep the signed radial velocity.
"""
import logging
import math
from dataclasses import replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from .config import AppConfig
from .errors import (
    ConsistencyError,
    InvalidStateError,
    NoRootError,
    NoShockSolutionError,
    NotSupersonicError,
    PressureOutOfRangeError,
)
from .gas_core import (
    bernoulli,
    bracketed_root,
    expand_bracket,
    flow_state,
    invariants_from_boundary,
    mach_regime,
    pressure,
    state_from_density,
    swirl_bernoulli_K,
)
from .models import (
    BoundaryState,
    Branch,
    Direction,
    FlowInvariants,
    FlowState,
    GasModel,
    MachRegime,
    ShockInequalityReport,
    ShockLabel,
    ShockRegime,
    ShockSolution,
    SweepRow,
)
from .smooth_flow import (
    boundary_branch,
    limiting_function,
    limiting_radius,
    limiting_radius_lower_bound,
    solve_density,
)

logger = logging.getLogger(__name__)

# tolerated round-off when checking the shock inequalities
INEQUALITY_SLACK = 1e-12

_OUTWARD_BY_EXIT = {
    MachRegime.SUPERSONIC: (ShockLabel.SUP_SUP_UNIFORM, "1"),
    MachRegime.SUBSONIC: (ShockLabel.SUP_SUP_TO_SUBSONIC_DOWNSTREAM, "2"),
    MachRegime.SONIC: (ShockLabel.SUP_SUP_SONIC_AT_EXIT, "3"),
}

_INWARD_BY_EXIT = {
    MachRegime.SUBSONIC: (ShockLabel.SUP_SUB_UNIFORM, "1"),
    MachRegime.SUPERSONIC: (ShockLabel.SUB_TO_SUPERSONIC_DOWNSTREAM, "2"),
    MachRegime.SONIC: (ShockLabel.SONIC_AT_EXIT, "3"),
}


def swirl_ratio(inv: FlowInvariants, r: float) -> float:
    """a(r) = kappa2^2 / (2 r^2 B0 - kappa2^2)"""
    return inv.kappa2 ** 2 / (2.0 * r * r * inv.B0 - inv.kappa2 ** 2)


def rh_jump(gas: GasModel, inv: FlowInvariants, upstream: FlowState) -> Tuple[FlowState, float]:
    """Downstream state and entropy constant behind a shock at upstream.r"""
    if abs(upstream.m1sq - 1.0) <= gas.eps_sonic:
        # zero-strength shock
        return upstream, upstream.A
    if upstream.m1sq < 1.0:
        raise NotSupersonicError(
            f"upstream at r={upstream.r!r} is radial-subsonic (M1^2={upstream.m1sq!r})"
        )
    g = gas.gamma
    r_b = upstream.r
    K0 = swirl_bernoulli_K(gas, inv, r_b)
    if K0 <= 0.0:
        raise InvalidStateError(f"K(r_b) must be positive, got {K0!r}")

    u_minus = abs(upstream.u1)
    u_plus = K0 / u_minus
    rho_plus = inv.kappa1 ** 2 / (K0 * r_b * r_b * upstream.rho)
    A_plus = (
        (r_b / abs(inv.kappa1)) ** (g - 1.0)
        * u_plus ** g
        * ((g + 1.0) * u_minus / (2.0 * g) - (g - 1.0) * u_plus / (2.0 * g))
    )
    sign = math.copysign(1.0, upstream.u1)
    downstream = flow_state(gas, A_plus, r_b, rho_plus, sign * u_plus, upstream.u2)
    return downstream, A_plus


def rh_residuals(gas: GasModel, upstream: FlowState, downstream: FlowState) -> Dict[str, float]:
    """Relative jumps of the four conserved fluxes across a shock"""
    mass_minus = upstream.rho * upstream.u1
    momentum_minus = upstream.rho * upstream.u1 ** 2 + upstream.p
    speed = math.hypot(upstream.u1, upstream.u2)
    bernoulli_minus = bernoulli(gas, upstream)
    return {
        "mass": (downstream.rho * downstream.u1 - mass_minus) / abs(mass_minus),
        "momentum": (downstream.rho * downstream.u1 ** 2 + downstream.p - momentum_minus)
        / momentum_minus,
        "angular": (downstream.rho * downstream.u1 * downstream.u2 - mass_minus * upstream.u2)
        / (abs(mass_minus) * speed),
        "bernoulli": (bernoulli(gas, downstream) - bernoulli_minus) / bernoulli_minus,
    }


def shock_states(gas: GasModel, inv: FlowInvariants, r_b: float) -> Tuple[FlowState, FlowState, float]:
    """(upstream, downstream, A_plus) for a shock placed at r_b"""
    rho_minus = solve_density(gas, inv, r_b, Branch.RADIAL_SUPERSONIC)
    upstream = state_from_density(gas, inv, r_b, rho_minus)
    downstream, A_plus = rh_jump(gas, inv, upstream)
    return upstream, downstream, A_plus


def _exit_radius(direction: Direction, r0: float, r1: float) -> float:
    return r1 if direction is Direction.OUTWARD else r0


def _shock_solution(gas: GasModel, inv: FlowInvariants, r_b: float, r_exit: float) -> ShockSolution:
    upstream, downstream, A_plus = shock_states(gas, inv, r_b)
    rho_exit = solve_density(gas, inv.with_entropy(A_plus), r_exit, Branch.RADIAL_SUBSONIC)
    return ShockSolution(
        r_b=r_b,
        upstream=upstream,
        downstream=downstream,
        A_plus=A_plus,
        x=abs(downstream.u1) / abs(upstream.u1),
        p_exit=pressure(gas, A_plus, rho_exit),
        r_exit=r_exit,
        invariants=inv,
    )


def exit_pressure_of_shock(
    gas: GasModel, inv: FlowInvariants, r_b: float, r_exit: float, direction: Direction
) -> float:
    """Exit pressure realized when the shock sits at r_b"""
    if direction is not inv.direction:
        raise InvalidStateError(f"invariants describe {inv.direction.value} flow, not {direction.value}")
    downstream_side = r_exit > r_b if direction is Direction.OUTWARD else r_exit < r_b
    if not downstream_side:
        raise InvalidStateError(f"exit radius {r_exit!r} is upstream of the shock at {r_b!r}")
    return _shock_solution(gas, inv, r_b, r_exit).p_exit


def downstream_limiting_radius(gas: GasModel, inv: FlowInvariants, A_value: float) -> float:
    """Limiting radius of the flow carrying inv's fluxes with entropy constant A_value"""
    g = gas.gamma
    quad = 2.0 * (g - 1.0) * inv.B0 / (g + 1.0)
    coeff = (g * A_value) ** (2.0 / (g + 1.0)) * abs(inv.kappa1) ** (2.0 * (g - 1.0) / (g + 1.0))
    offset = (g - 1.0) * inv.kappa2 ** 2 / (g + 1.0)

    def balance(x: float) -> float:
        return quad * x * x - coeff * x ** (4.0 / (g + 1.0)) - offset

    start = max(
        limiting_radius_lower_bound(gas, inv.with_entropy(A_value)),
        abs(inv.kappa2) / math.sqrt(2.0 * inv.B0),
    )
    lo = 0.5 * start
    hi = expand_bracket(balance, 2.0 * start, positive=True)
    return bracketed_root(balance, lo, hi, gas.tol_root * hi)


def shock_position_range(
    gas: GasModel, inv: FlowInvariants, r0: float, r1: float, direction: Direction
) -> Tuple[float, float]:
    """Admissible shock radii (lo, hi), offset from the annulus endpoints"""
    if not 0.0 < r0 < r1:
        raise InvalidStateError(f"annulus needs 0 < r0 < r1, got ({r0!r}, {r1!r})")
    lo = r0 * (1.0 + AppConfig.BOUNDARY_OFFSET)
    hi = r1 * (1.0 - AppConfig.BOUNDARY_OFFSET)
    if direction is Direction.OUTWARD:
        return lo, hi

    r_sharp_minus = limiting_radius(gas, inv)
    if r_sharp_minus >= lo:
        raise NoRootError(f"upstream limiting circle {r_sharp_minus!r} reaches the exit {r0!r}")

    def reach(r_b: float) -> float:
        # positive while r0 lies inside the downstream limiting circle
        A_plus = shock_states(gas, inv, r_b)[2]
        return limiting_function(gas, inv.with_entropy(A_plus), r0)

    if reach(lo) > 0.0:
        raise NoRootError(f"downstream flow cannot reach r0={r0!r} for any shock position")
    if reach(hi) > 0.0:
        r_b_max = bracketed_root(reach, lo, hi, gas.tol_root * hi)
        logger.info("shock positions capped at %.12g by the downstream limiting circle", r_b_max)
        hi = r_b_max * (1.0 - AppConfig.BOUNDARY_OFFSET)
    return lo, hi


def _interval_over(
    gas: GasModel, inv: FlowInvariants, window: Tuple[float, float], r_exit: float
) -> Tuple[float, float]:
    lo, hi = window
    p0 = _shock_solution(gas, inv, lo, r_exit).p_exit
    p1 = _shock_solution(gas, inv, hi, r_exit).p_exit
    if not p1 < p0:
        raise ConsistencyError(f"exit pressure not decreasing in shock radius: p1={p1!r}, p0={p0!r}")
    return p1, p0


def pressure_interval(
    gas: GasModel, inv: FlowInvariants, r0: float, r1: float, direction: Direction
) -> Tuple[float, float]:
    """(p1, p0): exit pressures of shocks next to the outlet and the inlet"""
    window = shock_position_range(gas, inv, r0, r1, direction)
    return _interval_over(gas, inv, window, _exit_radius(direction, r0, r1))


def shock_from_exit_pressure(
    gas: GasModel,
    inv: FlowInvariants,
    r0: float,
    r1: float,
    p_ex: float,
    direction: Direction,
    window: Optional[Tuple[float, float]] = None,
) -> ShockSolution:
    """Locate the unique shock matching p_ex and classify the resulting flow"""
    if direction is not inv.direction:
        raise InvalidStateError(f"invariants describe {inv.direction.value} flow, not {direction.value}")
    if window is None:
        window = shock_position_range(gas, inv, r0, r1, direction)
    r_exit = _exit_radius(direction, r0, r1)
    p1, p0 = _interval_over(gas, inv, window, r_exit)
    if not p1 < p_ex < p0:
        raise PressureOutOfRangeError(p_ex, p1, p0)

    lo, hi = window
    r_b = bracketed_root(
        lambda rb: _shock_solution(gas, inv, rb, r_exit).p_exit - p_ex, lo, hi, gas.tol_root * hi
    )
    solution = _shock_solution(gas, inv, r_b, r_exit)
    logger.debug("exit pressure %.12g places the shock at r_b=%.15g", p_ex, r_b)
    if direction is Direction.OUTWARD:
        regime = _outward_regime(gas, inv, r0, r1, p_ex, p1, p0)
    else:
        regime = _inward_regime(gas, inv, r0, r1, p_ex, p1, p0, solution, hi)
    logger.info("Problem %s regime %s (subcase %s)", regime.problem, regime.label.value, regime.subcase)
    return replace(solution, regime=regime)


def classifier_f1(gas: GasModel, inv: FlowInvariants, r: float) -> float:
    """f1(r); downstream of a shock at r is sonic where f1 = 1"""
    rho_minus = solve_density(gas, inv, r, Branch.RADIAL_SUPERSONIC)
    m1sq = state_from_density(gas, inv, r, rho_minus).m1sq
    g = gas.gamma
    return (1.0 - (g + 1.0) * swirl_ratio(inv, r) / (g - 1.0)) * m1sq


def swirl_sonic_radius(gas: GasModel, inv: FlowInvariants) -> float:
    """r_* with a(r_*) = (gamma - 1)/(gamma + 1); zero without swirl"""
    if inv.kappa2 == 0.0:
        return 0.0
    g = gas.gamma
    return math.sqrt(g * inv.kappa2 ** 2 / ((g - 1.0) * inv.B0))


def coincidence_radius(gas: GasModel, inv: FlowInvariants) -> float:
    """r'_*: shock radius whose downstream state is exactly total-sonic"""
    r_sharp = limiting_radius(gas, inv)
    if inv.kappa2 == 0.0:
        return r_sharp

    def excess(r: float) -> float:
        return classifier_f1(gas, inv, r) - 1.0

    lo = max(swirl_sonic_radius(gas, inv), r_sharp)
    try:
        start = excess(lo)
    except NoRootError:
        # r_sharp rounded just inside the limiting circle
        lo = r_sharp * (1.0 + gas.tol_root)
        start = excess(lo)
    if start >= 0.0:
        # f1 climbs from below 1 to above 1 within root tolerance of lo
        logger.debug("coincidence radius at the bracket start %.15g", lo)
        return lo
    hi = expand_bracket(excess, 2.0 * lo, positive=True)
    r_star_prime = bracketed_root(excess, lo, hi, gas.tol_root * hi)
    logger.debug("coincidence radius %.15g", r_star_prime)
    return r_star_prime


def downstream_sonic_test_g(gas: GasModel, a_val: float, x_val: float) -> Tuple[float, Tuple[float, ...]]:
    """
    g_a(x) and its real roots for a = swirl_ratio at the shock and x = upstream M1^2.

    Behind the shock |M+|^2 > 1 where g_a(M1^2) > 0, |M+|^2 < 1 where it is
    negative and |M+|^2 = 1 at its roots. The value is returned bare; callers
    map its sign to a MachRegime.
    """
    g = gas.gamma
    value = (1.0 - x_val) * (2.0 / (g + 1.0) + (g - 1.0) * x_val / (g + 1.0)) + a_val * x_val * (
        x_val + 2.0 / (g - 1.0)
    )
    lead = 1.0 - (g + 1.0) * a_val / (g - 1.0)
    roots: Tuple[float, ...] = (-2.0 / (g - 1.0),)
    if lead != 0.0:
        roots = roots + (1.0 / lead,)
    return value, roots


def exit_state_test_f2(
    gas: GasModel, inv: FlowInvariants, p_ex: float, r_exit: float
) -> Tuple[float, float, MachRegime]:
    """(f2(rho_sharp), rho_sharp, exit regime) for an exit pressure"""
    if not p_ex > 0.0:
        raise InvalidStateError(f"exit pressure must be positive, got {p_ex!r}")
    g = gas.gamma
    rho_sharp = g * (g + 1.0) * p_ex / (2.0 * (g - 1.0) * inv.B0)
    value, scale = _f2(gas, inv, p_ex, r_exit, rho_sharp)
    if abs(value) <= gas.eps_sonic * scale:
        regime = MachRegime.SONIC
    else:
        regime = MachRegime.SUPERSONIC if value > 0.0 else MachRegime.SUBSONIC
    return value, rho_sharp, regime


def _f2(gas: GasModel, inv: FlowInvariants, p_ex: float, r_exit: float, rho: float) -> Tuple[float, float]:
    g = gas.gamma
    terms = (
        g * p_ex * rho / (g - 1.0),
        -(inv.B0 - inv.kappa2 ** 2 / (2.0 * r_exit ** 2)) * rho * rho,
        inv.kappa1 ** 2 / (2.0 * r_exit ** 2),
    )
    return sum(terms), sum(abs(t) for t in terms)


def rho_sharp_sharp(gas: GasModel, inv: FlowInvariants, p_ex: float, r0: float) -> float:
    """Density of the radial-sonic state at r0 carrying pressure p_ex"""
    return gas.gamma * p_ex / swirl_bernoulli_K(gas, inv, r0)


def exit_circle_test(gas: GasModel, inv: FlowInvariants, p_ex: float, r0: float) -> Tuple[float, float]:
    """
    (f2(rho_sharp_sharp), rho_sharp_sharp) at the exit circle r0.

    Non-positive when the state at r0 carrying p_ex is radial-subsonic, that is
    when r0 lies on or outside the downstream limiting circle. Positive values
    mean no downstream flow reaches r0 with that pressure.
    """
    rho_ss = rho_sharp_sharp(gas, inv, p_ex, r0)
    return _f2(gas, inv, p_ex, r0, rho_ss)[0], rho_ss


def _outward_regime(
    gas: GasModel,
    inv: FlowInvariants,
    r0: float,
    r1: float,
    p_ex: float,
    p1: float,
    p0: float,
) -> ShockRegime:
    r_star = swirl_sonic_radius(gas, inv)
    r_star_prime = coincidence_radius(gas, inv)
    f2, rho_sharp, exit_regime = exit_state_test_f2(gas, inv, p_ex, r1)
    base = dict(
        problem="III",
        r_star=r_star,
        r_star_prime=r_star_prime,
        p0=p0,
        p1=p1,
        rho_sharp=rho_sharp,
        f2_at_rho_sharp=f2,
    )
    if r1 <= r_star_prime:
        label, tail = _OUTWARD_BY_EXIT[exit_regime]
        return ShockRegime(label, subcase=f"1.{tail}", **base)
    if r0 >= r_star_prime:
        return ShockRegime(ShockLabel.SUP_SUB_UNIFORM, subcase="3", **base)

    p_star_prime = exit_pressure_of_shock(gas, inv, r_star_prime, r1, Direction.OUTWARD)
    margin = (p_ex - p_star_prime) / p_star_prime
    base.update(p_star_prime=p_star_prime, margin=margin)
    if abs(margin) <= gas.eps_sonic:
        return ShockRegime(ShockLabel.SUP_SONIC_COINCIDENT, subcase="2.5", **base)
    if p_ex > p_star_prime:
        label, tail = _OUTWARD_BY_EXIT[exit_regime]
        return ShockRegime(label, subcase=f"2.{tail}", **base)
    return ShockRegime(ShockLabel.SUP_SUB_UNIFORM, subcase="2.4", **base)


def _inward_regime(
    gas: GasModel,
    inv: FlowInvariants,
    r0: float,
    r1: float,
    p_ex: float,
    p1: float,
    p0: float,
    solution: ShockSolution,
    r_b_max: float,
) -> ShockRegime:
    r_sharp_minus = limiting_radius(gas, inv)
    r_sharp_plus = downstream_limiting_radius(gas, inv, solution.A_plus)
    if solution.x < 1.0 and r_sharp_minus >= r_sharp_plus:
        raise ConsistencyError(
            f"upstream limiting radius {r_sharp_minus!r} not inside downstream one {r_sharp_plus!r}"
        )
    f2_ss, rho_ss = exit_circle_test(gas, inv, p_ex, r0)
    r_star_prime = coincidence_radius(gas, inv)
    f2, rho_sharp, exit_regime = exit_state_test_f2(gas, inv, p_ex, r0)
    base = dict(
        problem="IV",
        r_star=swirl_sonic_radius(gas, inv),
        r_star_prime=r_star_prime,
        p0=p0,
        p1=p1,
        rho_sharp=rho_sharp,
        f2_at_rho_sharp=f2,
        rho_sharp_sharp=rho_ss,
        f2_at_rho_sharp_sharp=f2_ss,
        r_sharp_minus=r_sharp_minus,
        r_sharp_plus=r_sharp_plus,
    )
    if r0 >= r_star_prime:
        label, tail = _INWARD_BY_EXIT[exit_regime]
        return ShockRegime(label, subcase=f"1.{tail}", **base)
    if r1 <= r_star_prime:
        return ShockRegime(ShockLabel.SUP_SUP_UNIFORM, subcase="3", **base)
    if r_star_prime >= r_b_max:
        # every feasible shock sits upstream of r'_*
        return ShockRegime(ShockLabel.SUP_SUP_UNIFORM, subcase="2.4", **base)

    p_star_prime = exit_pressure_of_shock(gas, inv, r_star_prime, r0, Direction.INWARD)
    margin = (p_ex - p_star_prime) / p_star_prime
    base.update(p_star_prime=p_star_prime, margin=margin)
    if abs(margin) <= gas.eps_sonic:
        return ShockRegime(ShockLabel.SUP_SONIC_COINCIDENT, subcase="2.5", **base)
    if p_ex < p_star_prime:
        label, tail = _INWARD_BY_EXIT[exit_regime]
        return ShockRegime(label, subcase=f"2.{tail}", **base)
    return ShockRegime(ShockLabel.SUP_SUP_UNIFORM, subcase="2.4", **base)


def _require_supersonic_entry(gas: GasModel, b: BoundaryState):
    if boundary_branch(gas, b) is not Branch.RADIAL_SUPERSONIC:
        raise NotSupersonicError(f"boundary data at r={b.r!r} is radial-subsonic")


def classify_problem_III(gas: GasModel, b: BoundaryState, r1: float, p_ex: float) -> ShockSolution:
    """Outward supersonic entry at b.r, exit pressure p_ex at r1"""
    if not b.u1 > 0.0:
        raise InvalidStateError("Problem III needs outward entry data (u1 > 0)")
    _require_supersonic_entry(gas, b)
    inv = invariants_from_boundary(gas, b)
    return shock_from_exit_pressure(gas, inv, b.r, r1, p_ex, Direction.OUTWARD)


def classify_problem_IV(gas: GasModel, b: BoundaryState, r0: float, p_ex: float) -> ShockSolution:
    """Inward supersonic entry at b.r, exit pressure p_ex at r0"""
    if not b.u1 < 0.0:
        raise InvalidStateError("Problem IV needs inward entry data (u1 < 0)")
    _require_supersonic_entry(gas, b)
    inv = invariants_from_boundary(gas, b)
    if not 0.0 < r0 < b.r:
        raise InvalidStateError(f"exit radius {r0!r} must lie in (0, {b.r!r})")

    f2_ss, rho_ss = exit_circle_test(gas, inv, p_ex, r0)
    no_solution = ShockRegime(
        ShockLabel.NO_SOLUTION, problem="IV", rho_sharp_sharp=rho_ss, f2_at_rho_sharp_sharp=f2_ss
    )
    if f2_ss > 0.0:
        raise NoShockSolutionError(
            f"exit radius {r0!r} lies inside the downstream limiting circle", regime=no_solution
        )
    try:
        window = shock_position_range(gas, inv, r0, b.r, Direction.INWARD)
    except NoRootError as exc:
        raise NoShockSolutionError(str(exc), regime=no_solution) from exc
    try:
        return shock_from_exit_pressure(gas, inv, r0, b.r, p_ex, Direction.INWARD, window=window)
    except PressureOutOfRangeError as exc:
        raise NoShockSolutionError(
            str(exc), regime=replace(no_solution, p0=exc.p0, p1=exc.p1)
        ) from exc


def verify_shock_inequalities(gas: GasModel, solution: ShockSolution) -> ShockInequalityReport:
    """Measure the inequalities behind the monotone dependence of p_ex on r_b"""
    if not solution.x < 1.0:
        raise InvalidStateError("inequalities need a shock of positive strength (x < 1)")
    g = gas.gamma
    up, down = solution.upstream, solution.downstream
    inv = solution.invariants
    r_b = solution.r_b

    radial_mach_sum = down.m1sq + up.m1sq - 2.0
    cross = down.m1sq * up.m2sq + up.m1sq * down.m2sq - down.m2sq - up.m2sq
    dK0 = 2.0 * (g - 1.0) * up.u2 ** 2 / ((g + 1.0) * r_b)
    h = 1e-6 * r_b
    dA = (shock_states(gas, inv, r_b + h)[2] - shock_states(gas, inv, r_b - h)[2]) / (2.0 * h)

    failures = []
    if not radial_mach_sum > 0.0:
        failures.append("radial_mach_sum")
    if cross < -INEQUALITY_SLACK:
        failures.append("cross_mach_term")
    if dK0 < 0.0:
        failures.append("dK0_drb")
    if not dA > 0.0:
        failures.append("dA_plus_drb")
    if failures:
        logger.warning("shock at r_b=%g violates %s", r_b, ", ".join(failures))
    return ShockInequalityReport(radial_mach_sum, cross, dK0, dA, failures)


def shock_sweep(
    gas: GasModel, inv: FlowInvariants, r0: float, r1: float, direction: Direction, n: int
) -> List[SweepRow]:
    """Exit pressure and downstream state for n shock positions spread over (r0, r1)"""
    if n < 1:
        raise InvalidStateError(f"sweep needs at least one point, got {n}")
    lo, hi = shock_position_range(gas, inv, r0, r1, direction)
    r_exit = _exit_radius(direction, r0, r1)
    rows = []
    for r_b in np.linspace(lo, hi, n + 2)[1:-1]:
        solution = _shock_solution(gas, inv, float(r_b), r_exit)
        rows.append(
            SweepRow(
                r_b=solution.r_b,
                p_exit=solution.p_exit,
                a_plus=solution.A_plus,
                x=solution.x,
                downstream_msq=solution.downstream.msq,
                regime=mach_regime(gas, solution.downstream.msq).value,
            )
        )
    return rows
