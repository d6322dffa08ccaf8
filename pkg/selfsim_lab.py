import argparse
import os
import sys
import time

import numpy as np
from pydantic import ValidationError
from tabulate import tabulate

from selfsim.audit.claims import run_audit
from selfsim.closedform.families import ClosedFormSolution, Family, evaluate_jet
from selfsim.conserved.scaling import gaussian_wave, measure_scaling_exponent, sine_decay
from selfsim.errors import ConfigError, SelfSimError
from selfsim.evolution.blowup import fit_blowup_rate
from selfsim.evolution.initial import closed_form_for, state_from_run_config
from selfsim.evolution.solver import EvolutionTermination, diagnose_exact_background, evolve
from selfsim.logger import configure_logging
from selfsim.output import output_dir, write_csv, write_json
from selfsim.profile.ode import branch_jet, verify_branch
from selfsim.profile.shoot import shoot_profile
from selfsim.residual.sweep import sweep_residual
from selfsim.runconfig import load_run_config
from selfsim.schema.config import DomainSampler
from selfsim.schema.grid import Grid1D
from selfsim.schema.report import EquationId
from selfsim.settings import settings
from selfsim.similarity.steady import SteadyOdeId, steady_ode_integrate, steady_table
from selfsim.stability.linearized import branch_profile, bump, derived_linearized_coefficients, directional_linearization_check, linearized_coefficients, zero_profile
from selfsim.stability.modes import solve_mode_quadratic

configure_logging()

EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE = 0, 1, 2

# family flag -> (families, expected to solve)
VERIFY_FAMILIES = {
    "born-infeld": {
        "log": ((Family.BORN_INFELD_LOG,), True),
    },
    "membrane": {
        "sphere": ((Family.MEMBRANE_SPHERE_PLUS, Family.MEMBRANE_SPHERE_MINUS), True),
        "sphere-plus": ((Family.MEMBRANE_SPHERE_PLUS,), True),
        "sphere-minus": ((Family.MEMBRANE_SPHERE_MINUS,), True),
        "constant": ((Family.CONSTANT_PROFILE,), True),
    },
    "spacelike": {
        "log-claimed": ((Family.SPACELIKE_LOG_CLAIMED,), False),
        "arctan": ((Family.SPACELIKE_ARCTAN_CORRECTED,), True),
    },
}


class UsageError(Exception):
    pass


def _sampler_for(family: Family, args) -> DomainSampler:
    common = dict(n_a=args.samples, n_b=args.samples, margin=args.margin, random=args.random, seed=args.seed)
    if family == Family.BORN_INFELD_LOG:
        return DomainSampler(kind="lightcone", **common)
    if family in (Family.SPACELIKE_LOG_CLAIMED, Family.SPACELIKE_ARCTAN_CORRECTED):
        return DomainSampler(kind="rectangle", box=(0.0, 0.5 * args.T, 0.0, 0.5 * args.T), **common)
    return DomainSampler(kind="backward_cone", rho_max=args.rho_max, **common)


def cmd_verify(args) -> int:
    families = VERIFY_FAMILIES[args.equation]
    if args.family not in families:
        raise UsageError(f"family {args.family} does not pair with {args.equation}, expected one of {sorted(families)}")
    members, expect_solution = families[args.family]
    extended = False if args.double else None

    reports, rows, ok = [], [], True
    for family in members:
        sol = ClosedFormSolution(family=family, T=args.T, k=args.c if family == Family.CONSTANT_PROFILE else args.k)
        sampler = _sampler_for(family, args)
        checks = [(sol.equation, expect_solution, settings.SOLUTION_TOLERANCE)]
        if sol.is_sphere:
            checks.append((EquationId.EIKONAL, True, settings.EIKONAL_TOLERANCE))
        for equation, should_vanish, tol in checks:
            report = sweep_residual(equation, sol, sampler, extended=extended, progress=args.progress)
            passed = report.max_abs <= tol if should_vanish else report.max_abs >= settings.NON_SOLUTION_FLOOR
            ok = ok and passed
            verdict = ("solution" if should_vanish else "non-solution") + (" (ok)" if passed else " (FAILED)")
            rows.append([family.value, equation.value, report.n_points, f"{report.max_abs:.3e}", f"{report.rms:.3e}", verdict])
            reports.append({"family": family.value, "expected_solution": should_vanish, "passed": passed, **report.to_json_dict()})

    path = write_json(os.path.join(output_dir(args.output_dir), f"verify_{args.equation}_{args.family}.json"), reports)
    print(tabulate(rows, headers=["family", "equation", "points", "max_abs", "rms", "verdict"]))
    print(f"Saved residual reports to {path}")
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_profile(args) -> int:
    out = output_dir(args.output_dir)
    if args.steady:
        ode = SteadyOdeId.BORN_INFELD_STEADY if args.steady == "born-infeld" else SteadyOdeId.SPACELIKE_STEADY
        slope = 2 * args.k if ode == SteadyOdeId.BORN_INFELD_STEADY else args.k
        solution = steady_ode_integrate(ode, (0.0, slope), (0.0, args.rho_max), args.d_rho)
        path = write_csv(os.path.join(out, f"steady_{args.steady}.csv"), ["rho", "v_numeric", "v_closed_claimed", "v_closed_corrected"], steady_table(solution, args.k))
        print(f"Saved steady profile to {path}")
        return EXIT_OK

    if args.branch:
        sign = 1 if args.branch == "plus" else -1
        report = verify_branch(sign, args.samples, (0.01, 0.99))
        path = write_json(os.path.join(out, f"branch_{args.branch}.json"), report.to_json_dict())
        print(tabulate([[args.branch, report.n_points, f"{report.max_abs:.3e}"]], headers=["branch", "points", "max_abs"]))
        print(f"Saved branch report to {path}")
        return EXIT_OK if report.max_abs <= settings.SOLUTION_TOLERANCE else EXIT_TOLERANCE

    result = shoot_profile(args.a, args.rho_max, args.d_rho, tolerance=args.tolerance)
    columns = result.columns()
    rows = list(zip(*(columns[name] for name in ("rho", "phi", "dphi", "degeneracy_gap"))))
    path = write_csv(os.path.join(out, f"profile_a{args.a}.csv"), ["rho", "phi", "dphi", "degeneracy_gap"], rows)
    print(f"Termination: {result.termination.value}" + (f" at rho = {result.degeneracy_location:.6f}" if result.degeneracy_location is not None else ""))
    print(f"Saved {len(rows)} profile samples to {path}")
    return EXIT_OK


def _run_overrides(args):
    keys = ("equation", "family", "k", "T", "c", "amplitude", "width", "lo", "hi", "n", "t_end", "cfl_safety", "dissipation", "excision_rho", "edge_data", "snapshot_every", "fit_lo", "fit_hi", "output_dir")
    return {key: getattr(args, key) for key in keys}


def cmd_evolve(args) -> int:
    cfg = load_run_config(args.config, _run_overrides(args))
    out = output_dir(cfg.output_dir)
    grid = Grid1D(lo=cfg.lo, hi=cfg.hi, n=cfg.n)
    exact = closed_form_for(cfg)

    if exact is not None and exact.is_sphere:
        # lightlike background: check the exact solution on the grid instead of stepping it
        report = diagnose_exact_background(exact, grid, 0.0)
        path = write_json(os.path.join(out, f"evolve_{cfg.family}_background.json"), {"termination": EvolutionTermination.DEGENERACY_STOP.value, **report.to_json_dict()})
        print(f"Exact background is lightlike; residual on the grid max_abs = {report.max_abs:.3e}")
        print(f"Saved background diagnostics to {path}")
        return EXIT_OK

    start = time.time()
    edges = exact if cfg.edge_data == "exact" else None
    result = evolve(state_from_run_config(cfg), cfg.evolution_config(show_progress=args.progress, edge_solution=edges))
    header = ["t", "sup_q", "q_at_origin", "min_discriminant", "momentum_integral", "x_left", "x_right"]
    diag_path = write_csv(os.path.join(out, f"evolve_{cfg.equation}_{cfg.family}.csv"), header, [list(row) for row in result.diagnostics])
    if result.snapshots:
        rows = [[snap.t, x, u, p, q] for snap in result.snapshots for x, u, p, q in zip(snap.x, snap.u, snap.p, snap.q)]
        write_csv(os.path.join(out, f"evolve_{cfg.equation}_{cfg.family}_snapshots.csv"), ["t", "x", "u", "p", "q"], [[float(v) for v in row] for row in rows])

    summary = {
        "equation": cfg.equation,
        "family": cfg.family,
        "termination": result.termination.value,
        "t_final": result.final.t,
        "n_steps": result.n_steps,
    }
    table = [["termination", result.termination.value], ["t_final", f"{result.final.t:.6f}"], ["steps", result.n_steps]]

    if exact is not None and result.final.n_active > 0:
        final = result.final
        x, u = final.nodes(), final.u[final.active]
        inside = np.abs(x) < exact.T - final.t - settings.EPS_BOUNDARY
        if inside.any():
            errors = [abs(ui - evaluate_jet(exact, (final.t, float(xi))).value) for xi, ui in zip(x[inside], u[inside])]
            summary["sup_error"] = float(max(errors))
            table.append(["sup error vs exact", f"{summary['sup_error']:.3e}"])

    if cfg.fit_lo is not None:
        fit = fit_blowup_rate(result.series("t"), result.series("q_at_origin"), cfg.T, (cfg.fit_lo, cfg.fit_hi))
        summary["blowup_fit"] = fit.model_dump()
        table += [["fitted exponent", f"{fit.fitted_exponent:.4f}"], ["fitted amplitude", f"{fit.fitted_amplitude:.4f}"]]

    write_json(os.path.join(out, f"evolve_{cfg.equation}_{cfg.family}.json"), summary)
    print(tabulate(table))
    print(f"Saved {len(result.diagnostics)} diagnostic rows to {diag_path}")
    print(f"Total time: {time.time() - start:.2f}s")
    return EXIT_OK


def cmd_stability(args) -> int:
    out = output_dir(args.output_dir)
    report = solve_mode_quadratic()
    write_json(os.path.join(out, "modes.json"), report.model_dump())

    rows = []
    for rho in np.linspace(0.05, 0.95, args.samples):
        rho = float(rho)
        jet = branch_jet(1, rho)
        printed, derived = linearized_coefficients(*jet, rho), derived_linearized_coefficients(*jet, rho)
        rows.append([rho, printed.v_tau_tau, printed.v_tau, printed.v_tau_rho, printed.v_rho_rho, printed.v_rho, printed.v, derived.v_tau])
    write_csv(os.path.join(out, "branch_coefficients.csv"), ["rho", "v_tau_tau", "v_tau", "v_tau_rho", "v_rho_rho", "v_rho", "v", "v_tau_derived"], rows)

    rhos = list(np.linspace(0.1, 0.9, 81))
    zero_check = directional_linearization_check(zero_profile, bump(), 1e-6, rhos)
    branch_checks = {nu: directional_linearization_check(branch_profile(1), bump(), 1e-6, rhos, nu=nu) for nu in (0.0, 0.5)}
    write_json(os.path.join(out, "linearization.json"), {
        "zero_profile": zero_check.max_mismatch,
        "branch": {str(nu): check.max_mismatch for nu, check in branch_checks.items()},
    })

    print(tabulate([[f"{r:g}", label] for r, label in zip(report.roots, report.classification)], headers=["nu", "classification"]))
    print(f"Claimed roots {list(report.claimed_roots)}: match={report.match_verdict}, qualitative match={report.qualitative_match}")
    print(f"Linearization mismatch: zero profile {zero_check.max_mismatch:.3e}, branch {branch_checks[0.0].max_mismatch:.3e} (nu = 0), {branch_checks[0.5].max_mismatch:.3e} (nu = 0.5)")
    return EXIT_OK if zero_check.max_mismatch <= 1e-5 else EXIT_TOLERANCE


def cmd_scaling(args) -> int:
    try:
        lambdas = [float(v) for v in args.lambdas.split(",")]
    except ValueError:
        raise UsageError(f"could not parse --lambdas {args.lambdas}")
    field = sine_decay if args.field == "sine" else gaussian_wave
    kinds = ["x-weight", "unweighted"] if args.weight == "both" else [args.weight]
    measurements = [measure_scaling_exponent(field, lambdas, kind) for kind in kinds]
    path = write_json(os.path.join(output_dir(args.output_dir), f"scaling_{args.field}.json"), [m.model_dump() for m in measurements])
    print(tabulate([[m.weight_kind, f"{m.measured_exponent:.6f}", m.claimed_exponent, f"{m.fit.r_squared:.6f}"] for m in measurements], headers=["weight", "measured", "claimed", "r^2"]))
    print(f"Saved scaling measurements to {path}")
    return EXIT_OK


def cmd_audit(args) -> int:
    report = run_audit(samples=args.samples, seed=args.seed, progress=args.progress)
    path = write_json(os.path.join(output_dir(args.output_dir), "audit.json"), report.model_dump(mode="json"))
    rows = [[c.id, c.verdict.value, c.secondary_verdict.value if c.secondary_verdict else "", c.expected.value, "REGRESSED" if c.regressed else ""] for c in report.claims]
    print(tabulate(rows, headers=["claim", "verdict", "secondary", "expected", ""]))
    print(f"Saved audit report to {path}")
    return EXIT_OK if report.passed else EXIT_TOLERANCE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Self-similar blow-up lab for the Born-Infeld, membrane and spacelike zero mean curvature equations")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="Residual sweeps of the closed-form families")
    verify.add_argument("--equation", choices=sorted(VERIFY_FAMILIES), required=True)
    verify.add_argument("--family", required=True, help="log, sphere, sphere-plus, sphere-minus, constant, log-claimed or arctan")
    verify.add_argument("--k", type=float, default=1.0)
    verify.add_argument("--c", type=float, default=0.3, help="Constant for the constant profile")
    verify.add_argument("--T", type=float, default=1.0)
    verify.add_argument("--samples", type=int, default=100, help="Samples per axis")
    verify.add_argument("--margin", type=float, default=0.02)
    verify.add_argument("--rho_max", "--rho-max", type=float, default=0.95)
    verify.add_argument("--random", action="store_true", help="Seeded random samples instead of a tensor grid")
    verify.add_argument("--seed", type=int, default=settings.AUDIT_SEED)
    verify.add_argument("--double", action="store_true", help="Evaluate in float64 instead of extended precision")
    verify.set_defaults(handler=cmd_verify)

    profile = sub.add_parser("profile", help="Profile shooting, branch verification and steady ODEs")
    profile.add_argument("--a", type=float, default=0.5, help="phi(0)")
    profile.add_argument("--rho_max", "--rho-max", type=float, default=0.9)
    profile.add_argument("--d_rho", type=float, default=1e-3)
    profile.add_argument("--tolerance", type=float, default=None, help="Adaptive step tolerance; fixed steps when omitted")
    profile.add_argument("--branch", choices=["plus", "minus"], default=None)
    profile.add_argument("--steady", choices=["born-infeld", "spacelike"], default=None)
    profile.add_argument("--k", type=float, default=1.0)
    profile.add_argument("--samples", type=int, default=1000)
    profile.set_defaults(handler=cmd_profile)

    evolve_cmd = sub.add_parser("evolve", help="Method-of-lines evolution from a run config")
    evolve_cmd.add_argument("config", nargs="?", default=None, help="key=value run config file")
    for name, kind in (("equation", str), ("family", str), ("k", float), ("T", float), ("c", float), ("amplitude", float), ("width", float), ("lo", float), ("hi", float), ("n", int), ("t_end", float), ("cfl_safety", float), ("dissipation", float), ("excision_rho", float), ("snapshot_every", int), ("fit_lo", float), ("fit_hi", float)):
        evolve_cmd.add_argument(f"--{name}", type=kind, default=None)
    evolve_cmd.add_argument("--edge_data", choices=["exact", "extrapolate"], default=None, help="Edge rates for closed-form families")
    evolve_cmd.set_defaults(handler=cmd_evolve)

    stability = sub.add_parser("stability", help="Mode roots and linearization checks")
    stability.add_argument("--samples", type=int, default=181, help="Branch points for the coefficient table")
    stability.set_defaults(handler=cmd_stability)

    scaling = sub.add_parser("scaling", help="Scaling exponent of the quadratic energy")
    scaling.add_argument("--lambdas", default="0.5,1,2,4")
    scaling.add_argument("--weight", choices=["x-weight", "unweighted", "both"], default="both")
    scaling.add_argument("--field", choices=["sine", "gaussian"], default="sine")
    scaling.set_defaults(handler=cmd_scaling)

    audit = sub.add_parser("audit", help="Check every quantitative claim")
    audit.add_argument("--samples", type=int, default=None)
    audit.add_argument("--seed", type=int, default=None)
    audit.set_defaults(handler=cmd_audit)

    for command in (verify, profile, evolve_cmd, stability, scaling, audit):
        command.add_argument("--output_dir", type=str, default=None, help=f"Output folder, defaults to {settings.OUTPUT_DIR}")
        command.add_argument("--progress", action="store_true", help="Show progress bars")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.handler(args)
    except (UsageError, ConfigError, ValidationError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SelfSimError as e:
        # precondition failures, e.g. a degenerate profile start
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
