import math
from dataclasses import replace

import numpy as np
import pytest

from swirlflow.errors import InvalidStateError, NoRootError, NotSupersonicError, PressureOutOfRangeError
from swirlflow.gas_core import entropy_ratio_T1, flow_state, pressure, state_from_density
from swirlflow.models import Branch, Direction, FlowInvariants, GasModel, ShockSolution
from swirlflow.shock_flow import (
    classifier_f1,
    coincidence_radius,
    downstream_limiting_radius,
    downstream_sonic_test_g,
    exit_pressure_of_shock,
    exit_circle_test,
    exit_state_test_f2,
    pressure_interval,
    rh_jump,
    rh_residuals,
    rho_sharp_sharp,
    shock_from_exit_pressure,
    shock_position_range,
    shock_states,
    shock_sweep,
    swirl_ratio,
    swirl_sonic_radius,
    verify_shock_inequalities,
)
from swirlflow.smooth_flow import limiting_radius, solve_density


def exit_msq(gas, inv, r_b, r_exit):
    A_plus = shock_states(gas, inv, r_b)[2]
    downstream = inv.with_entropy(A_plus)
    rho = solve_density(gas, downstream, r_exit, Branch.RADIAL_SUBSONIC)
    return state_from_density(gas, downstream, r_exit, rho).msq


def random_flow(rng, direction):
    sign = 1.0 if direction is Direction.OUTWARD else -1.0
    gas = GasModel(gamma=float(rng.uniform(1.3, 3.0)))
    inv = FlowInvariants(
        kappa1=sign * float(rng.uniform(0.2, 2.0)),
        kappa2=float(rng.uniform(-2.0, 2.0)),
        B0=float(rng.uniform(1.0, 3.0)),
        A=float(rng.uniform(0.5, 2.0)),
        direction=direction,
    )
    return gas, inv


# jump conditions


def test_rh_jump_closed_form(gas):
    inv = FlowInvariants(kappa1=1.0, kappa2=0.0, B0=3.0, A=1.0, direction=Direction.OUTWARD)
    upstream = flow_state(gas, 1.0, 1.0, 0.5, 2.0, 0.0)
    downstream, A_plus = rh_jump(gas, inv, upstream)
    assert downstream.u1 == pytest.approx(1.0)
    assert downstream.rho == pytest.approx(1.0)
    assert A_plus == pytest.approx(1.25)
    assert downstream.c2 == pytest.approx(2.5)
    assert downstream.m1sq == pytest.approx(0.4)
    for name, value in rh_residuals(gas, upstream, downstream).items():
        assert abs(value) <= 1e-10, name


def test_rh_jump_conserves_fluxes_with_swirl(gas, inv_out, inv_in):
    for inv in (inv_out, inv_in):
        for r_b in (1.0, 1.1, 1.4):
            upstream, downstream, _ = shock_states(gas, inv, r_b)
            assert downstream.u2 == upstream.u2
            assert math.copysign(1.0, downstream.u1) == math.copysign(1.0, upstream.u1)
            for name, value in rh_residuals(gas, upstream, downstream).items():
                assert abs(value) <= 1e-10, name


def test_rh_jump_zero_strength(gas, inv_out):
    upstream = flow_state(gas, 1.0, 1.0, 1.0, math.sqrt(2.0), 0.0)
    downstream, A_plus = rh_jump(gas, inv_out, upstream)
    assert downstream is upstream
    assert A_plus == 1.0


def test_rh_jump_requires_supersonic_upstream(gas, inv_out):
    upstream = flow_state(gas, 1.0, 1.0, 1.0, 0.5, 0.0)
    with pytest.raises(NotSupersonicError):
        rh_jump(gas, inv_out, upstream)


def test_shock_at_anchor_radius(gas, inv_out):
    upstream, downstream, A_plus = shock_states(gas, inv_out, 1.1)
    assert upstream.rho == pytest.approx(0.5153, rel=1e-3)
    assert downstream.u1 == pytest.approx(0.9775, rel=1e-3)
    assert downstream.rho == pytest.approx(0.930, rel=2e-3)
    assert A_plus == pytest.approx(1.134, rel=2e-3)
    assert downstream.m1sq == pytest.approx(0.4531, rel=2e-3)
    assert downstream.msq == pytest.approx(0.8450, rel=2e-3)
    x = downstream.u1 / upstream.u1
    assert A_plus / inv_out.A == pytest.approx(entropy_ratio_T1(gas, x), rel=1e-12)
    assert downstream.p > upstream.p


def test_inward_shock_mirrors_outward(gas, inv_out, inv_in):
    _, out_down, out_A = shock_states(gas, inv_out, 1.1)
    _, in_down, in_A = shock_states(gas, inv_in, 1.1)
    assert in_A == pytest.approx(out_A, rel=1e-12)
    assert in_down.u1 == pytest.approx(-out_down.u1, rel=1e-12)
    assert in_down.rho == pytest.approx(out_down.rho, rel=1e-12)


# exit pressure


def test_exit_pressure_anchor(gas, inv_out):
    p_near = exit_pressure_of_shock(gas, inv_out, 1.0, 1.2, Direction.OUTWARD)
    p_far = exit_pressure_of_shock(gas, inv_out, 1.1, 1.2, Direction.OUTWARD)
    assert p_far == pytest.approx(1.188, abs=1e-2)
    assert p_near > p_far


def test_exit_pressure_validates_geometry(gas, inv_out):
    with pytest.raises(InvalidStateError):
        exit_pressure_of_shock(gas, inv_out, 1.1, 1.2, Direction.INWARD)
    with pytest.raises(InvalidStateError):
        exit_pressure_of_shock(gas, inv_out, 1.1, 1.05, Direction.OUTWARD)


def test_exit_pressure_decreases_with_shock_radius(gas, inv_out):
    h = 1e-6
    for r_b in np.linspace(0.98, 1.4, 10):
        ahead = exit_pressure_of_shock(gas, inv_out, float(r_b) + h, 1.5, Direction.OUTWARD)
        behind = exit_pressure_of_shock(gas, inv_out, float(r_b) - h, 1.5, Direction.OUTWARD)
        assert ahead < behind


def test_pressure_interval_outward(gas, inv_out):
    p1, p0 = pressure_interval(gas, inv_out, 0.97, 1.2, Direction.OUTWARD)
    assert p1 < p0
    assert p1 < exit_pressure_of_shock(gas, inv_out, 1.1, 1.2, Direction.OUTWARD) < p0


def test_shock_position_range_inward_needs_room(gas, inv_in):
    with pytest.raises(NoRootError):
        shock_position_range(gas, inv_in, 0.9, 1.5, Direction.INWARD)
    lo, hi = shock_position_range(gas, inv_in, 1.05, 1.5, Direction.INWARD)
    assert 1.05 < lo < hi < 1.5


def test_locate_shock_round_trip(gas, inv_out):
    p_ex = exit_pressure_of_shock(gas, inv_out, 1.1, 1.2, Direction.OUTWARD)
    solution = shock_from_exit_pressure(gas, inv_out, 0.97, 1.2, p_ex, Direction.OUTWARD)
    assert solution.r_b == pytest.approx(1.1, abs=1e-9)
    assert solution.p_exit == pytest.approx(p_ex, rel=1e-9)
    assert solution.regime is not None
    assert solution.x < 1.0


def test_pressure_next_to_inlet_places_shock_at_inlet(gas, inv_out):
    p1, p0 = pressure_interval(gas, inv_out, 0.97, 1.2, Direction.OUTWARD)
    solution = shock_from_exit_pressure(gas, inv_out, 0.97, 1.2, p0 * (1.0 - 1e-9), Direction.OUTWARD)
    assert solution.r_b - 0.97 < 1e-6


def test_pressure_outside_interval(gas, inv_out):
    p1, p0 = pressure_interval(gas, inv_out, 0.97, 1.2, Direction.OUTWARD)
    with pytest.raises(PressureOutOfRangeError) as excinfo:
        shock_from_exit_pressure(gas, inv_out, 0.97, 1.2, p0, Direction.OUTWARD)
    assert excinfo.value.p0 == p0
    with pytest.raises(PressureOutOfRangeError):
        shock_from_exit_pressure(gas, inv_out, 0.97, 1.2, p1, Direction.OUTWARD)
    with pytest.raises(PressureOutOfRangeError):
        shock_from_exit_pressure(gas, inv_out, 0.97, 1.2, 2.0 * p0, Direction.OUTWARD)


# downstream classifiers


def test_classifier_f1_values(gas, inv_out):
    assert swirl_ratio(inv_out, 1.0) == pytest.approx(0.2)
    assert classifier_f1(gas, inv_out, 1.0) == pytest.approx(0.761553, rel=1e-5)
    assert classifier_f1(gas, inv_out, 1.1) == pytest.approx(1.5726, rel=1e-3)
    assert classifier_f1(gas, inv_out, 1.02) < 1.0 < classifier_f1(gas, inv_out, 1.035)


def test_coincidence_radius(gas, inv_out):
    assert swirl_sonic_radius(gas, inv_out) == pytest.approx(math.sqrt(2.0 / 3.0))
    r_star_prime = coincidence_radius(gas, inv_out)
    assert r_star_prime == pytest.approx(1.0299, abs=2e-3)
    assert classifier_f1(gas, inv_out, r_star_prime) == pytest.approx(1.0, abs=1e-10)
    assert shock_states(gas, inv_out, r_star_prime)[1].msq == pytest.approx(1.0, abs=1e-6)


def test_coincidence_radius_without_swirl():
    gas = GasModel(gamma=1.4)
    inv = FlowInvariants(kappa1=2.0, kappa2=0.0, B0=6.0, A=1.0, direction=Direction.OUTWARD)
    assert swirl_sonic_radius(gas, inv) == 0.0
    assert coincidence_radius(gas, inv) == limiting_radius(gas, inv)


def test_coincidence_radius_with_weak_swirl(gas):
    inv = FlowInvariants(kappa1=1.0, kappa2=1e-3, B0=3.0, A=1.0, direction=Direction.OUTWARD)
    r_sharp = limiting_radius(gas, inv)
    r_star_prime = coincidence_radius(gas, inv)
    assert r_star_prime >= r_sharp
    assert r_star_prime == pytest.approx(r_sharp, rel=1e-6)
    assert classifier_f1(gas, inv, r_star_prime) == pytest.approx(1.0, abs=1e-5)


def test_downstream_sonic_test_g_predicts_downstream_regime(gas, inv_out):
    for r_b in (1.0, 1.02, 1.1, 1.3):
        upstream, downstream, _ = shock_states(gas, inv_out, r_b)
        value, roots = downstream_sonic_test_g(gas, swirl_ratio(inv_out, r_b), upstream.m1sq)
        assert (value > 0.0) == (downstream.msq > 1.0)
        assert len(roots) == 2


def test_downstream_sonic_test_g_roots(gas):
    a_val = 0.2
    value, roots = downstream_sonic_test_g(gas, a_val, 1.0)
    assert value == pytest.approx(a_val * 3.0)
    assert roots[0] == -2.0
    for root in roots:
        assert downstream_sonic_test_g(gas, a_val, root)[0] == pytest.approx(0.0, abs=1e-12)


def test_exit_state_test_f2(gas, inv_out):
    p_ex = 1.188
    f2, rho_sharp, regime = exit_state_test_f2(gas, inv_out, p_ex, 1.2)
    assert rho_sharp == pytest.approx(p_ex, rel=1e-15)
    assert f2 < 0.0
    assert regime.value == "subsonic"
    with pytest.raises(InvalidStateError):
        exit_state_test_f2(gas, inv_out, 0.0, 1.2)


def test_exit_state_test_f2_matches_exit_mach(gas, inv_out):
    for r_b in (1.0, 1.05, 1.1):
        for r_exit in (r_b + 0.005, r_b + 0.1, 1.5):
            msq = exit_msq(gas, inv_out, r_b, r_exit)
            if abs(msq - 1.0) < 1e-6:
                continue
            p_ex = exit_pressure_of_shock(gas, inv_out, r_b, r_exit, Direction.OUTWARD)
            f2, _, _ = exit_state_test_f2(gas, inv_out, p_ex, r_exit)
            assert (f2 > 0.0) == (msq > 1.0)

def test_exit_state_test_f2_matches_exit_mach_on_random_shocks():
    rng = np.random.default_rng(17)
    checked = 0
    for _ in range(20):
        gas, inv = random_flow(rng, Direction.OUTWARD)
        r_b = limiting_radius(gas, inv) * float(rng.uniform(1.05, 2.0))
        r_exit = r_b * float(rng.uniform(1.01, 1.6))
        msq = exit_msq(gas, inv, r_b, r_exit)
        if abs(msq - 1.0) < 1e-6:
            continue
        p_ex = exit_pressure_of_shock(gas, inv, r_b, r_exit, Direction.OUTWARD)
        f2, _, _ = exit_state_test_f2(gas, inv, p_ex, r_exit)
        assert (f2 > 0.0) == (msq > 1.0)
        checked += 1
    assert checked >= 18


def test_exit_circle_test_matches_downstream_limiting_circle():
    rng = np.random.default_rng(19)
    for _ in range(20):
        gas, inv = random_flow(rng, Direction.INWARD)
        r_sharp_minus = limiting_radius(gas, inv)
        r_b = r_sharp_minus * float(rng.uniform(1.05, 2.0))
        A_plus = shock_states(gas, inv, r_b)[2]
        r_sharp_plus = downstream_limiting_radius(gas, inv, A_plus)
        assert r_sharp_minus < r_sharp_plus <= r_b
        r0 = r_sharp_plus + float(rng.uniform(0.05, 0.95)) * (r_b - r_sharp_plus)

        # pressure of the downstream flow reaching r0
        p_ex = exit_pressure_of_shock(gas, inv, r_b, r0, Direction.INWARD)
        f2_ss, rho_ss = exit_circle_test(gas, inv, p_ex, r0)
        assert f2_ss <= 0.0
        assert rho_ss == rho_sharp_sharp(gas, inv, p_ex, r0)

        # same entropy on the radial-supersonic side of r0
        downstream = inv.with_entropy(A_plus)
        rho_sup = solve_density(gas, downstream, r0, Branch.RADIAL_SUPERSONIC)
        assert exit_circle_test(gas, inv, pressure(gas, A_plus, rho_sup), r0)[0] > 0.0



def test_rho_sharp_sharp_dominates_rho_sharp(gas, inv_in):
    for p_ex in (0.5, 1.0, 2.0):
        for r0 in (1.0, 1.2):
            _, rho_sharp, _ = exit_state_test_f2(gas, inv_in, p_ex, r0)
            assert rho_sharp_sharp(gas, inv_in, p_ex, r0) >= rho_sharp


def test_downstream_limiting_radius_matches_limiting_circle(gas, inv_out, inv_in):
    A_plus = shock_states(gas, inv_out, 1.1)[2]
    for inv in (inv_out, inv_in):
        expected = limiting_radius(gas, inv.with_entropy(A_plus))
        assert downstream_limiting_radius(gas, inv, A_plus) == pytest.approx(expected, rel=1e-9)
    assert downstream_limiting_radius(gas, inv_in, A_plus) > limiting_radius(gas, inv_in)


# shock inequalities


def test_shock_inequalities_anchor(gas, inv_out):
    p_ex = exit_pressure_of_shock(gas, inv_out, 1.1, 1.2, Direction.OUTWARD)
    solution = shock_from_exit_pressure(gas, inv_out, 0.97, 1.2, p_ex, Direction.OUTWARD)
    report = verify_shock_inequalities(gas, solution)
    assert report.holds
    assert report.cross_mach_term >= 0.0
    assert report.dA_plus_drb > 0.0


def shock_at(gas, inv, r_b, r_exit):
    upstream, downstream, A_plus = shock_states(gas, inv, r_b)
    return ShockSolution(
        r_b=r_b,
        upstream=upstream,
        downstream=downstream,
        A_plus=A_plus,
        x=abs(downstream.u1) / abs(upstream.u1),
        p_exit=downstream.p,
        r_exit=r_exit,
        invariants=inv,
    )


def test_shock_inequalities_random_shocks():
    rng = np.random.default_rng(3)
    for _ in range(100):
        direction = Direction.OUTWARD if rng.random() < 0.5 else Direction.INWARD
        gas, inv = random_flow(rng, direction)
        r_b = limiting_radius(gas, inv) * float(rng.uniform(1.05, 2.0))
        solution = shock_at(gas, inv, r_b, r_b * 1.1)
        assert pressure(gas, solution.A_plus, solution.downstream.rho) > solution.upstream.p
        for name, value in rh_residuals(gas, solution.upstream, solution.downstream).items():
            assert abs(value) <= 1e-10, name
        assert solution.A_plus / inv.A == pytest.approx(entropy_ratio_T1(gas, solution.x), rel=1e-10)
        report = verify_shock_inequalities(gas, solution)
        assert report.holds, report.failures


def test_shock_inequalities_reject_zero_strength(gas, inv_out):
    solution = replace(shock_at(gas, inv_out, 1.1, 1.2), x=1.0)
    with pytest.raises(InvalidStateError):
        verify_shock_inequalities(gas, solution)


# sweep


def test_sweep_is_monotone(gas, inv_out):
    rows = shock_sweep(gas, inv_out, 0.97, 1.5, Direction.OUTWARD, 12)
    assert len(rows) == 12
    pressures = [row.p_exit for row in rows]
    assert all(b < a for a, b in zip(pressures, pressures[1:]))
    assert all(row.x < 1.0 for row in rows)
    assert {row.regime for row in rows} <= {"supersonic", "subsonic", "sonic"}

def test_random_outward_sweeps_are_monotone_and_invertible():
    rng = np.random.default_rng(23)
    for _ in range(10):
        gas, inv = random_flow(rng, Direction.OUTWARD)
        r0 = limiting_radius(gas, inv) * float(rng.uniform(1.05, 1.5))
        r1 = r0 * float(rng.uniform(1.2, 2.0))
        rows = shock_sweep(gas, inv, r0, r1, Direction.OUTWARD, 50)
        pressures = np.array([row.p_exit for row in rows])
        assert np.all(np.diff(pressures) < 0.0)
        for row in rows:
            solution = shock_from_exit_pressure(gas, inv, r0, r1, row.p_exit, Direction.OUTWARD)
            assert solution.r_b == pytest.approx(row.r_b, rel=1e-9)



def test_sweep_single_point_sits_mid_window(gas, inv_out):
    (row,) = shock_sweep(gas, inv_out, 0.97, 1.5, Direction.OUTWARD, 1)
    assert row.r_b == pytest.approx(0.5 * (0.97 + 1.5), abs=1e-7)
    with pytest.raises(InvalidStateError):
        shock_sweep(gas, inv_out, 0.97, 1.5, Direction.OUTWARD, 0)


def test_sweep_without_swirl_stays_subsonic_behind_shock():
    gas = GasModel(gamma=1.4)
    inv = FlowInvariants(kappa1=2.0 * math.sqrt(1.4), kappa2=0.0, B0=6.3, A=1.0, direction=Direction.OUTWARD)
    rows = shock_sweep(gas, inv, 1.0, 2.0, Direction.OUTWARD, 10)
    assert all(row.downstream_msq < 1.0 for row in rows)
    assert all(row.regime == "subsonic" for row in rows)
