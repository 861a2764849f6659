"""
Command line front end: classify, profile, shock, sweep and limits runs
driven by a JSON configuration file.
"""
import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from typing import Dict, List, Optional, Sequence, Tuple

from .config import AppConfig, RunConfig, load_run_config
from .errors import ConfigError, NoShockSolutionError, PressureOutOfRangeError, SwirlFlowError
from .gas_core import circulatory_invariants, critical_density, invariants_from_boundary, vacuum_radius
from .models import (
    BoundaryState,
    Branch,
    Direction,
    FlowInvariants,
    FlowState,
    RegimeReport,
    ShockSolution,
    SmoothLabel,
)
from .shock_flow import (
    classify_problem_III,
    classify_problem_IV,
    coincidence_radius,
    pressure_interval,
    shock_sweep,
    swirl_sonic_radius,
)
from .smooth_flow import (
    boundary_branch,
    circulatory_sonic_radius,
    classify_inward,
    classify_outward,
    limiting_radius,
    profile,
    purely_circulatory,
    sonic_radius,
)

logger = logging.getLogger(__name__)

ProfileRow = Tuple[FlowState, str]

_FAILED_LABELS = (SmoothLabel.NO_GLOBAL_SOLUTION.value, "NoSolution")


class RunService:
    """Runs the solvers for one validated configuration"""

    def __init__(self, run: RunConfig):
        self.run = run
        self.gas = run.gas_model()
        b = run.boundary
        self.boundary = BoundaryState(r=b.radius, rho=b.rho, u1=b.u1, u2=b.u2, A=b.A)
        self.r_inner = run.annulus.r_inner
        self.r_outer = run.annulus.r_outer

    @property
    def problem(self) -> str:
        return self.run.problem

    @property
    def direction(self) -> Direction:
        return Direction.INWARD if self.problem in ("II", "IV") else Direction.OUTWARD

    def invariants(self) -> FlowInvariants:
        if self.problem == "circulatory":
            return circulatory_invariants(self.gas, self.boundary)
        return invariants_from_boundary(self.gas, self.boundary)

    def _require_shock_problem(self):
        if self.problem not in ("III", "IV"):
            raise ConfigError(f"problem {self.problem} has no shock; use problem III or IV")

    def solve_shock(self) -> ShockSolution:
        self._require_shock_problem()
        if self.problem == "III":
            return classify_problem_III(self.gas, self.boundary, self.r_outer, self.run.exit_pressure)
        return classify_problem_IV(self.gas, self.boundary, self.r_inner, self.run.exit_pressure)

    def classify(self) -> RegimeReport:
        """Regime label with the radii, densities and pressures behind it"""
        if self.problem == "circulatory":
            _, regime = purely_circulatory(self.gas, self.boundary, self.r_outer, 2)
            inv = self.invariants()
            return RegimeReport(
                self.problem,
                regime.label.value,
                diagnostics={"r_c": circulatory_sonic_radius(self.gas, inv), "rho_c": critical_density(self.gas, inv)},
            )
        if self.problem in ("I", "II"):
            inv = self.invariants()
            if self.problem == "I":
                regime = classify_outward(self.gas, self.boundary, self.r_outer)
            else:
                regime = classify_inward(self.gas, self.boundary, self.r_inner)
            diagnostics = {
                "r_c": regime.r_c if regime.r_c is not None else sonic_radius(self.gas, inv),
                "r_sharp": regime.r_sharp if regime.r_sharp is not None else limiting_radius(self.gas, inv),
                "rho_c": critical_density(self.gas, inv),
            }
            return RegimeReport(self.problem, regime.label.value, diagnostics=diagnostics)

        try:
            solution = self.solve_shock()
        except NoShockSolutionError as exc:
            regime = exc.regime.to_dict() if exc.regime is not None else {}
            return _no_solution(self.problem, regime, str(exc))
        except PressureOutOfRangeError as exc:
            return _no_solution(self.problem, {"p0": exc.p0, "p1": exc.p1}, str(exc))
        regime = solution.regime.to_dict()
        diagnostics = {k: v for k, v in regime.items() if k not in ("regime", "problem", "subcase")}
        inv = solution.invariants
        diagnostics.update(
            r_b=solution.r_b,
            x=solution.x,
            A_plus=solution.A_plus,
            downstream_msq=solution.downstream.msq,
            r_c=sonic_radius(self.gas, inv),
            rho_c=critical_density(self.gas, inv),
        )
        return RegimeReport(self.problem, regime["regime"], subcase=regime.get("subcase"), diagnostics=diagnostics)

    def profile_rows(self, samples: int) -> List[ProfileRow]:
        """Sampled states in ascending radius; shock runs list the shock radius in both regions"""
        if self.problem == "circulatory":
            prof, _ = purely_circulatory(self.gas, self.boundary, self.r_outer, samples)
            return [(state, prof.region) for state in prof.states]
        if self.problem in ("I", "II"):
            branch = boundary_branch(self.gas, self.boundary)
            prof = profile(self.gas, self.invariants(), branch, self.r_inner, self.r_outer, samples)
            return [(state, prof.region) for state in prof.states]

        if samples < AppConfig.SHOCK_MIN_SAMPLES:
            raise ConfigError(f"shock profiles need samples >= {AppConfig.SHOCK_MIN_SAMPLES}, got {samples}")
        solution = self.solve_shock()
        inv = solution.invariants
        inv_plus = inv.with_entropy(solution.A_plus)
        r_b = solution.r_b
        if self.problem == "III":
            n_up = _share(samples, r_b - self.r_inner, self.r_outer - self.r_inner)
            upstream = profile(self.gas, inv, Branch.RADIAL_SUPERSONIC, self.r_inner, r_b, n_up, "upstream")
            downstream = profile(
                self.gas, inv_plus, Branch.RADIAL_SUBSONIC, r_b, self.r_outer, samples - n_up, "downstream"
            )
            regions = (upstream, downstream)
        else:
            n_down = _share(samples, r_b - self.r_inner, self.r_outer - self.r_inner)
            downstream = profile(
                self.gas, inv_plus, Branch.RADIAL_SUBSONIC, self.r_inner, r_b, n_down, "downstream"
            )
            upstream = profile(self.gas, inv, Branch.RADIAL_SUPERSONIC, r_b, self.r_outer, samples - n_down, "upstream")
            regions = (downstream, upstream)
        return [(state, region.region) for region in regions for state in region.states]

    def shock(self) -> Dict[str, object]:
        return self.solve_shock().to_dict()

    def sweep(self, points: int):
        self._require_shock_problem()
        return shock_sweep(self.gas, self.invariants(), self.r_inner, self.r_outer, self.direction, points)

    def limits(self) -> Dict[str, object]:
        """Analytical radii of the configuration, plus the pressure interval for shock problems"""
        inv = self.invariants()
        data: Dict[str, object] = {"problem": self.problem, "r_tilde": vacuum_radius(inv)}
        if self.problem == "circulatory":
            data["r_c"] = circulatory_sonic_radius(self.gas, inv)
            return data
        data.update(
            r_star=swirl_sonic_radius(self.gas, inv),
            r_star_prime=coincidence_radius(self.gas, inv),
            r_c=sonic_radius(self.gas, inv),
            r_sharp=limiting_radius(self.gas, inv),
        )
        if self.problem in ("III", "IV"):
            p1, p0 = pressure_interval(self.gas, inv, self.r_inner, self.r_outer, self.direction)
            data.update(p1=p1, p0=p0)
        return data


def _no_solution(problem: str, regime: Dict[str, object], message: str) -> RegimeReport:
    diagnostics = {k: v for k, v in regime.items() if k not in ("regime", "problem")}
    return RegimeReport(problem, "NoSolution", diagnostics=diagnostics, error=message)


def _share(samples: int, part: float, whole: float) -> int:
    """Samples given to one side of the shock; both sides keep at least two"""
    return min(max(2, int(round(samples * part / whole))), samples - 2)


def _fmt(value: float) -> str:
    # shortest text that parses back to the same float
    return repr(float(value))


def render_profile_csv(rows: Sequence[ProfileRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(AppConfig.FORMATS.PROFILE_HEADER)
    for state, region in rows:
        values = [state.r, state.rho, state.u1, state.u2, state.p, state.c2, state.m1sq, state.m2sq, state.msq, state.A]
        writer.writerow([_fmt(v) for v in values] + [region])
    return buffer.getvalue()


def render_sweep_csv(rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(AppConfig.FORMATS.SWEEP_HEADER)
    for row in rows:
        writer.writerow(
            [_fmt(row.r_b), _fmt(row.p_exit), _fmt(row.a_plus), _fmt(row.x), _fmt(row.downstream_msq), row.regime]
        )
    return buffer.getvalue()


def render_json(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def write_output(text: str, path: Optional[str]):
    """Write to path atomically, or to standard output when no path is given"""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(path))
    handle = tempfile.NamedTemporaryFile("w", dir=directory, prefix=".swirlflow-", delete=False, newline="")
    try:
        with handle:
            handle.write(text)
        os.replace(handle.name, path)
    except OSError:
        if os.path.exists(handle.name):
            os.unlink(handle.name)
        raise


def _error(message: str):
    line = " ".join(message.split())
    if sys.stderr.isatty() and not AppConfig.NO_COLOR:
        line = f"\033[31m{line}\033[0m"
    print(line, file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swirlflow",
        description="Steady radially symmetric swirling flows and circular transonic shocks in an annulus",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    helps = {
        "classify": "print the flow regime and its diagnostics as JSON",
        "profile": "write sampled flow states along the radius",
        "shock": "print the full shock solution as JSON (problems III and IV)",
        "sweep": "tabulate exit pressure against shock position (problems III and IV)",
        "limits": "print the characteristic radii and the admissible pressure interval",
    }
    for name, text in helps.items():
        sub = subparsers.add_parser(name, help=text)
        sub.add_argument("--config", required=True, help="path to the JSON run configuration")
        sub.add_argument("--out", default=None, help="output file (default: configured path or stdout)")
        sub.add_argument("--verbose", "-v", action="store_true", help="log solver progress to stderr")
        if name == "profile":
            sub.add_argument("--samples", type=int, default=None, help="number of radius samples")
        if name == "sweep":
            sub.add_argument(
                "--points", type=int, default=AppConfig.DEFAULT_SWEEP_POINTS, help="number of shock positions"
            )
    return parser


def _execute(args: argparse.Namespace, run: RunConfig) -> int:
    service = RunService(run)
    out = args.out or run.output.path

    if args.command == "classify":
        report = service.classify()
        write_output(render_json(report.to_dict()), out)
        if report.regime in _FAILED_LABELS:
            return AppConfig.EXIT_CODES.SOLVER_ERROR
        return AppConfig.EXIT_CODES.OK

    if args.command == "profile":
        samples = args.samples if args.samples is not None else run.samples
        if samples < 2:
            raise ConfigError(f"--samples must be at least 2, got {samples}")
        rows = service.profile_rows(samples)
        if run.output.format == "json":
            text = render_json([dict(state.to_dict(), region=region) for state, region in rows])
        else:
            text = render_profile_csv(rows)
        write_output(text, out)
    elif args.command == "shock":
        write_output(render_json(service.shock()), out)
    elif args.command == "sweep":
        if args.points < 1:
            raise ConfigError(f"--points must be at least 1, got {args.points}")
        rows = service.sweep(args.points)
        if run.output.format == "json":
            text = render_json([row.__dict__ for row in rows])
        else:
            text = render_sweep_csv(rows)
        write_output(text, out)
    else:
        write_output(render_json(service.limits()), out)
    return AppConfig.EXIT_CODES.OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else AppConfig.LOG_LEVEL.upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        run = load_run_config(args.config)
        return _execute(args, run)
    except ConfigError as exc:
        _error(f"config error: {exc}")
        return AppConfig.EXIT_CODES.CONFIG_ERROR
    except SwirlFlowError as exc:
        logger.debug("solver failure", exc_info=True)
        report = RegimeReport(run.problem, type(exc).__name__, error=str(exc))
        sys.stdout.write(render_json(report.to_dict()))
        _error(f"solver error: {exc}")
        return AppConfig.EXIT_CODES.SOLVER_ERROR
    except OSError as exc:
        logger.debug("output failure", exc_info=True)
        _error(f"cannot write output: {exc.strerror or exc}")
        return AppConfig.EXIT_CODES.CONFIG_ERROR
