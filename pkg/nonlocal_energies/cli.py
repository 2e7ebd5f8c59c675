"""
Batch command-line front end.

    nonlocal-energies spectrum --N 2 --beta 2 --k-max 50
    nonlocal-energies energy --shape ball.json --beta 1 --alpha 0.5 --s 0.5 --order 12
    nonlocal-energies fuglede --N 2 --beta 1 --seed 7
    nonlocal-energies sharpness --N 2 --beta 2

Exit codes: 0 pass, 1 asserted bound violated, 2 usage or validation error,
3 numerical non-convergence.
"""

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import COMMANDS, RunConfig
from .csv_output import SPECTRAL_HEADER, spectral_comments, spectral_table_rows, write_rows
from .densities import Density2D
from .errors import BoundViolation, ConvergenceError, DomainError, PreconditionError
from .geometry import load_shape
from .mixed_scan import ball_minimality_scan
from .radial_profile import RadialDensity
from .report import ball_reference_check, evaluate
from .shell_transport import outer_to_inner_shells, transport_energy_bound_check
from .spectral import build_table, oscillation_profile, verify_gap
from .sphere_grid import SphereGrid
from .stability import big_asymmetry_check, fuglede_check, sharpness_fit
from .transport import knothe_rosenblatt_2d, verify_pushforward

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3

SLOPE_WINDOW = (1.95, 2.05)
RANDOM_MODE_K_MAX = 12


def _grid(text: str | None) -> list[float] | None:
    if text is None:
        return None
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise DomainError(f"cannot parse grid {text!r}; expected comma separated numbers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nonlocal-energies",
        description="Nonlocal shape energies, spherical spectra and stability checks",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="flat JSON file with RunConfig fields")
    parser.add_argument("--N", type=int)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--s", type=float)
    parser.add_argument("--M", type=float)
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--k-max", "--kmax", dest="k_max", type=int)
    parser.add_argument("--resolution", type=int)
    parser.add_argument("--t-grid", dest="t_grid", help="comma separated amplitudes")
    parser.add_argument("--h-grid", dest="h_grid", help="comma separated annulus widths")
    parser.add_argument("--m-grid", dest="m_grid", help="comma separated masses")
    parser.add_argument("--n-random", dest="n_random", type=int)
    parser.add_argument("--n-cases", dest="n_cases", type=int)
    parser.add_argument("--n-balls", dest="n_balls", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--shape", help="shape JSON file for the energy command")
    parser.add_argument("--output", "-o", help="CSV or JSON output path")
    parser.add_argument("--threads", type=int)
    parser.add_argument("--order", type=int, help="base quadrature order for the energy command")
    parser.add_argument("--tolerance", type=float, help="relative gap allowed between successive orders")
    parser.add_argument("--verbose", "-v", action="store_true")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Config file first, then flags; validated before dispatch."""
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    flags = {k: v for k, v in vars(args).items() if k not in ("config", "verbose")}
    for name in ("t_grid", "h_grid", "m_grid"):
        flags[name] = _grid(flags[name])
    return config.override(flags).validate()


def cmd_spectrum(config: RunConfig) -> int:
    table = build_table(config.N, config.beta, config.k_max)
    text = write_rows(config.output, SPECTRAL_HEADER, spectral_table_rows(table), spectral_comments(table))
    if not config.output:
        print(text, end="")
    if config.k_max >= 10:
        gap = verify_gap(table)
        print(f"gap: min lambda_1 - lambda_k = {gap.min_gap:.12g} at k={gap.argmin_k}, "
              f"D_beta = {gap.D_beta:.12g}, slack {gap.slack:.3g}")
    else:
        print(f"gap: skipped (k_max={config.k_max} < 10)")
    if config.k_max > 0.5 * config.beta + 2:
        osc = oscillation_profile(table)
        print(f"oscillation: k_tilde={osc.k_tilde} alternates={osc.alternates} "
              f"tail={osc.tail_direction} monotone={osc.tail_monotone}")
    return EXIT_OK


def cmd_energy(config: RunConfig) -> int:
    try:
        shape = load_shape(config.shape)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise DomainError(f"cannot read shape file {config.shape}: {exc}")
    report = evaluate(shape, config.beta, config.alpha, config.s, order=config.order, tolerance=config.tolerance)
    ball_reference_check(report, shape)
    text = report.to_json()
    if config.output:
        with open(config.output, "w") as f:
            f.write(text + "\n")
    print(text)
    return EXIT_OK


def _fuglede_battery(config: RunConfig, grid: SphereGrid) -> list[tuple[str, np.ndarray]]:
    battery = []
    for k in config.modes:
        if grid.N == 2:
            u = 0.5 * np.cos(k * grid.phi)
        else:
            z = grid.zonal(k)
            u = 0.5 * z / np.max(np.abs(z))
        battery.append((f"mode{k}", u))
    rng = np.random.default_rng(config.seed)
    k_hi = min(RANDOM_MODE_K_MAX, grid.max_degree)
    for i in range(config.n_random):
        battery.append((f"random{i}", grid.random_band_limited(rng, 2, k_hi)))
    return battery


def cmd_fuglede(config: RunConfig) -> int:
    grid = SphereGrid(config.N, config.resolution)
    battery = _fuglede_battery(config, grid)

    def run(item):
        name, u = item
        return name, fuglede_check(grid, config.beta, u, config.t_grid, raise_on_violation=False)

    with ThreadPoolExecutor(max_workers=config.worker_count) as pool:
        results = list(pool.map(run, battery))

    rows = []
    failures = []
    for idx, (name, sweep) in enumerate(results):
        limit = sweep.extrapolated_limit if sweep.extrapolated_limit is not None else math.nan
        for case in sweep.cases:
            rows.append([idx, case.t, case.u_norm_sq, case.deficit, case.bound, case.slack,
                         case.ratio, sweep.predicted_limit, limit])
        failures += [(name, c) for c in sweep.failures]
        print(f"{name}: ratio limit {limit:.8g} predicted {sweep.predicted_limit:.8g} "
              f"worst slack {sweep.worst_slack:.3g}")
    header = ["case", "t", "u_norm_sq", "deficit", "bound", "slack", "ratio",
              "predicted_limit", "extrapolated_limit"]
    comments = [f"N={config.N} beta={config.beta:.17g} seed={config.seed}",
                "bound = (D_beta/8) t^2 ||u||^2; ratio = deficit / (t^2 ||u||^2)",
                "cases: " + " ".join(f"{i}={name}" for i, (name, _) in enumerate(results))]
    write_rows(config.output, header, rows, comments)
    print(f"fuglede: {len(rows) - len(failures)}/{len(rows)} cases pass")
    if failures:
        name, worst = min(failures, key=lambda f: f[1].slack)
        raise BoundViolation(f"deficit bound violated for {name} at t={worst.t}", case=worst.to_dict())
    return EXIT_OK


def cmd_sharpness(config: RunConfig) -> int:
    fit = sharpness_fit(config.N, config.beta, config.h_grid)
    write_rows(config.output, ["asymmetry", "deficit"], fit.to_rows(),
               [f"N={config.N} beta={config.beta:.17g}", "asymmetry = 2 omega_N h on the annulus family"])
    print(f"sharpness: slope {fit.slope:.6f} (residual {fit.residual:.3g})")
    lo, hi = SLOPE_WINDOW
    if not lo <= fit.slope <= hi:
        raise BoundViolation(
            f"deficit exponent {fit.slope:.4f} outside [{lo}, {hi}]",
            case={"N": config.N, "beta": config.beta, "slope": fit.slope},
        )
    return EXIT_OK


def cmd_mixed(config: RunConfig) -> int:
    m_grid = config.m_grid if config.m_grid is not None else np.geomspace(0.1, 1000.0, 13)
    report = ball_minimality_scan(config.N, config.beta, config.alpha, config.s, m_grid)
    write_rows(config.output, ["m", "epsilon", "ball_energy", "best_competitor_energy", "margin"],
               report.to_rows(),
               [f"N={config.N} beta={config.beta:.17g} alpha={config.alpha:.17g} s={config.s:.17g}",
                "margin = best competitor minus ball; epsilon = (m/omega_N)^(1+(beta+s)/N)"])
    threshold = report.threshold
    print(f"mixed: ball wins from m = {threshold} on; "
          f"{len(report.violations)} masses below the threshold where it loses")
    return EXIT_OK


def cmd_transport(config: RunConfig) -> int:
    rng = np.random.default_rng(config.seed)
    rows = []
    failures = []
    for i in range(config.n_cases):
        src = Density2D.random(rng)
        raw = Density2D.random(rng)
        dst = Density2D(raw.x_edges, raw.y_edges, raw.values * (src.mass / raw.mass))
        push = verify_pushforward(knothe_rosenblatt_2d(src, dst))
        rows.append([i, 0, push.worst, 2.0 * push.cell_mass, 2.0 * push.cell_mass - push.worst])
        if not push.passed:
            failures.append(("knothe_rosenblatt", i, push.worst))
    for i in range(config.n_cases):
        shell_map = outer_to_inner_shells(8, rng)
        e3 = RadialDensity.random(2, rng)
        bound = transport_energy_bound_check(shell_map, e3, config.beta)
        rows.append([i, 1, bound.lhs, bound.rhs, bound.slack])
        if not bound.passed:
            failures.append(("shell", i, bound.lhs))
    write_rows(config.output, ["case", "kind", "value", "limit", "slack"], rows,
               [f"seed={config.seed} beta={config.beta:.17g}",
                "kind 0: push-forward residual vs twice the cell mass; kind 1: energy change vs transport bound"])
    print(f"transport: {len(rows) - len(failures)}/{len(rows)} cases pass")
    if failures:
        kind, i, value = failures[0]
        raise BoundViolation(f"{kind} case {i} failed ({value:.6g})",
                             case={"kind": kind, "case": i, "seed": config.seed})
    return EXIT_OK


def cmd_bigasym(config: RunConfig) -> int:
    report = big_asymmetry_check(config.N, config.beta, config.n_balls)
    write_rows(config.output, ["n_balls", "deficit", "bound", "slack"],
               [[report.n_balls, report.deficit, report.bound, report.slack]],
               [f"N={config.N} beta={config.beta:.17g}", "bound = (3^beta - 2^beta)/2 omega_N^2"])
    print(f"bigasym: deficit {report.deficit:.10g} >= {report.bound:.10g}")
    return EXIT_OK


COMMAND_TABLE = {
    "spectrum": cmd_spectrum,
    "energy": cmd_energy,
    "fuglede": cmd_fuglede,
    "sharpness": cmd_sharpness,
    "mixed": cmd_mixed,
    "transport": cmd_transport,
    "bigasym": cmd_bigasym,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = config_from_args(args)
        return COMMAND_TABLE[config.command](config)
    except BoundViolation as exc:
        print(f"FAIL: {exc}", file=sys.stderr)
        print(json.dumps(exc.case, default=str, indent=2), file=sys.stderr)
        return EXIT_VIOLATION
    except ConvergenceError as exc:
        print(f"NON-CONVERGENCE: {exc}", file=sys.stderr)
        print(json.dumps(exc.diagnostics, default=str, indent=2), file=sys.stderr)
        return EXIT_CONVERGENCE
    except (DomainError, PreconditionError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
