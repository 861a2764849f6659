"""
Shared fixtures: the closed-form anchor flow with gamma = 2, A = 1, B0 = 3
and unit mass and swirl fluxes, in both directions.
"""
import json
import math

import pytest

from swirlflow.gas_core import state_from_density
from swirlflow.models import BoundaryState, Branch, Direction, FlowInvariants, GasModel
from swirlflow.smooth_flow import solve_density

SUPERSONIC_RHO_AT_ONE = (0.5 + math.sqrt(4.25)) / 4.0


def boundary_on(gas: GasModel, inv: FlowInvariants, r: float, branch: Branch) -> BoundaryState:
    """Boundary data sitting on a given branch of a known flow"""
    state = state_from_density(gas, inv, r, solve_density(gas, inv, r, branch))
    return BoundaryState(r=r, rho=state.rho, u1=state.u1, u2=state.u2, A=inv.A)


def write_config(path, **overrides) -> str:
    data = {
        "gamma": 2.0,
        "problem": "I",
        "annulus": {"r_inner": 1.0, "r_outer": 1.5},
        "boundary": {
            "radius": 1.0,
            "rho": SUPERSONIC_RHO_AT_ONE,
            "u1": 1.0 / SUPERSONIC_RHO_AT_ONE,
            "u2": 1.0,
            "A": 1.0,
        },
        "samples": 16,
    }
    data.update(overrides)
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def gas():
    return GasModel(gamma=2.0)


@pytest.fixture
def inv_out():
    return FlowInvariants(kappa1=1.0, kappa2=1.0, B0=3.0, A=1.0, direction=Direction.OUTWARD)


@pytest.fixture
def inv_in():
    return FlowInvariants(kappa1=-1.0, kappa2=1.0, B0=3.0, A=1.0, direction=Direction.INWARD)
