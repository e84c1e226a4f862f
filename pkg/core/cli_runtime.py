"""Headless CLI runtime wiring for kaehlerkit."""

import argparse
import logging
import sys
from collections.abc import Sequence
from dataclasses import replace
from pathlib import Path

import numpy as np

from core.app_config import AppConfig
from core.dynamics import (
    HamiltonianSpec,
    bloch_point,
    chart_to_bloch,
    chordal_distance,
    energy,
    project_to_chart,
    riccati_evolve,
    schrodinger_evolve,
)
from core.gns import gns_construct, gns_orbit_dimension
from core.numkernel import DimensionError
from core.pullback import (
    CriterionNotApplicable,
    block_norms,
    devicente_check,
    distance_to_separable,
    local_product_rep,
    max_entanglement_pure,
    mixed_tensor,
    pure_pullback,
    separability_pure,
    su_basis,
    werner_scan,
)
from core.reports import Report, Table, render
from core.state_files import StateFile, StateFileError, load_state_file

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_NOT_APPLICABLE = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="kaehlerkit: geometric entanglement and dynamics toolkit")
    parser.add_argument("--log-level", default=None, help="Logging level (default: LOG_LEVEL or INFO)")
    parser.add_argument("--format", choices=("text", "csv", "json"), default="text", help="Report format")
    parser.add_argument("--tol", type=float, default=None, help="Zero-block and Hermiticity tolerance")
    parser.add_argument("--hermiticity-tol", type=float, default=None)
    parser.add_argument("--psd-tol", type=float, default=None)
    parser.add_argument("--rank-tol", type=float, default=None, help="Schmidt rank tolerance")
    sub = parser.add_subparsers(dest="command", required=True)

    p_tensors = sub.add_parser("tensors", help="Pull-back coefficient matrices of a state")
    p_tensors.add_argument("file", help="State file (pure or density)")
    p_tensors.add_argument("--rep", choices=("su", "local-product"), default="local-product")
    p_tensors.add_argument("--n", type=int, default=None, help="Local dimension N (default: from the file)")

    p_sep = sub.add_parser("separability", help="Entanglement criteria for a bipartite state")
    p_sep.add_argument("file", help="State file (pure or density)")
    p_sep.add_argument("--dims", type=int, nargs=2, metavar=("NA", "NB"), default=None)
    p_sep.add_argument(
        "--criterion",
        choices=("auto", "block", "max-entanglement", "kyfan"),
        default="auto",
        help="auto: block test for pure states, Ky Fan bound for density states",
    )

    p_scan = sub.add_parser("werner-scan", help="Ky Fan statistic across Werner states")
    p_scan.add_argument("--from", dest="x_from", type=float, default=0.0)
    p_scan.add_argument("--to", dest="x_to", type=float, default=1.0)
    p_scan.add_argument("--steps", type=int, default=11, help="Number of grid points")
    p_scan.add_argument("--out", default=None, help="CSV output path (default: inline in the report)")

    p_evolve = sub.add_parser("evolve", help="Schrödinger and Riccati evolution")
    p_evolve.add_argument("hamiltonian", help="Operator file")
    p_evolve.add_argument("state", help="Pure state file")
    p_evolve.add_argument("--t-max", type=float, default=1.0)
    p_evolve.add_argument("--step", type=float, default=None, help="RK4 step (default: KAEHLERKIT_RK4_STEP)")
    p_evolve.add_argument("--samples", type=int, default=100, help="Output intervals between 0 and t-max")
    p_evolve.add_argument("--mode", choices=("schrodinger", "riccati", "both"), default="both")
    p_evolve.add_argument("--out", default=None, help="CSV output path (default: inline in the report)")

    p_gns = sub.add_parser("gns", help="GNS construction for a density state")
    p_gns.add_argument("file", help="State file (pure or density)")
    return parser


def _configure_logging(level_name: str, log_file: str = ""):
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
    logging.basicConfig(
        level=getattr(logging, str(level_name or "").upper(), logging.INFO),
        format="%(asctime)s %(levelname)s [%(name)s] %(message)s",
        handlers=handlers,
    )


def _apply_overrides(config: AppConfig, args: argparse.Namespace) -> AppConfig:
    overrides = {}
    if args.tol is not None:
        overrides["zero_block_rel_tol"] = args.tol
        overrides["hermiticity_tol"] = args.tol
    if args.hermiticity_tol is not None:
        overrides["hermiticity_tol"] = args.hermiticity_tol
    if args.psd_tol is not None:
        overrides["psd_tol"] = args.psd_tol
    if args.rank_tol is not None:
        overrides["schmidt_rank_tol"] = args.rank_tol
    return replace(config, **overrides) if overrides else config


def _density(state: StateFile, config: AppConfig):
    return state.to_density(
        psd_tol=config.psd_tol, trace_tol=config.trace_tol, hermiticity_tol=config.hermiticity_tol
    )


def _emit(report: Report, fmt: str):
    sys.stdout.write(render(report, fmt))
    sys.stdout.flush()


def _write_table(report: Report, out_path: str | None):
    if out_path is None or report.table is None:
        return
    Path(out_path).write_text(report.table.to_csv(), encoding="utf-8", newline="\n")
    logger.info("Wrote %d rows to %s", len(report.table.rows), out_path)
    report.outputs["csv_path"] = out_path
    report.table = None


def cmd_tensors(config: AppConfig, file_path: str, rep_name: str, n: int | None, fmt: str) -> int:
    """Print sym/antisym coefficient matrices of the state on the chosen representation."""
    state = load_state_file(file_path)
    if rep_name == "su":
        rep = su_basis(n if n is not None else state.size)
    else:
        dims = state.bipartite_dims() if n is None else None
        rep = local_product_rep(n) if dims is None else local_product_rep(dims.n_a, dims.n_b)
    if state.kind == "pure":
        coeffs = pure_pullback(state.to_pure(), rep)
        tensor = "covariance"
    else:
        coeffs = mixed_tensor(_density(state, config), rep)
        tensor = "second moments"

    outputs: dict[str, object] = {
        "kind": state.kind,
        "rep": rep_name,
        "tensor": tensor,
        "labels": list(rep.labels),
        "sym": coeffs.sym,
        "antisym": coeffs.antisym,
    }
    if coeffs.partition is not None:
        outputs["block_norms"] = block_norms(coeffs)
    _emit(Report("tensors", {"state": state.digest}, outputs, config.tolerances()), fmt)
    return EXIT_OK


def cmd_separability(config: AppConfig, file_path: str, dims_arg, criterion: str, fmt: str) -> int:
    """Run the block test (pure) or the Ky Fan bound (density) and print the verdict."""
    state = load_state_file(file_path)
    if dims_arg is not None:
        state = replace(state, dims=(dims_arg[0], dims_arg[1]))
    dims = state.bipartite_dims()
    if criterion == "auto":
        criterion = "block" if state.kind == "pure" else "kyfan"

    outputs: dict[str, object] = {"kind": state.kind, "dims": list(dims.as_tuple())}
    if criterion in ("block", "max-entanglement"):
        if state.kind != "pure":
            raise CriterionNotApplicable(f"The {criterion} criterion needs a pure state")
        psi = state.to_pure()
        if criterion == "block":
            report = separability_pure(psi, dims, rel_tol=config.zero_block_rel_tol, rank_tol=config.schmidt_rank_tol)
            distance = distance_to_separable(psi, dims, floor=config.distance_ratio_floor)
            outputs["g_ab_sq"] = distance.g_ab_sq
            outputs["r_sq"] = distance.r_sq
            outputs["distance_ratio"] = distance.ratio
        else:
            report = max_entanglement_pure(psi, dims, tol=config.antisym_tol, rank_tol=config.schmidt_rank_tol)
    else:
        report = devicente_check(_density(state, config), dims)

    outputs.update(
        {
            "criterion": report.criterion,
            "verdict": report.verdict,
            "statistic": report.statistic,
            "bound": report.bound,
            "blocks": report.blocks,
        }
    )
    outputs.update(report.details)
    _emit(Report("separability", {"state": state.digest}, outputs, config.tolerances()), fmt)
    return EXIT_OK


def cmd_werner_scan(config: AppConfig, x_from: float, x_to: float, steps: int, out_path: str | None, fmt: str) -> int:
    grid = np.linspace(x_from, x_to, steps)
    rows = werner_scan(grid)
    table = Table(["x", "statistic", "bound", "verdict"], [[r.x, r.statistic, r.bound, r.verdict] for r in rows])
    flips = [rows[i].x for i in range(1, len(rows)) if rows[i].verdict != rows[i - 1].verdict]
    outputs: dict[str, object] = {"points": len(rows), "from": x_from, "to": x_to, "verdict_flips_at": flips}
    report = Report("werner-scan", {}, outputs, config.tolerances(), table)
    _write_table(report, out_path)
    _emit(report, fmt)
    return EXIT_OK


def _ket_columns(prefix: str, dim: int) -> list[str]:
    return [f"{part}_{prefix}{k + 1}" for k in range(dim) for part in ("re", "im")]


def _ket_values(amplitudes) -> list[float]:
    return [float(v) for z in amplitudes for v in (z.real, z.imag)]


def cmd_evolve(
    config: AppConfig,
    hamiltonian_path: str,
    state_path: str,
    t_max: float,
    step: float,
    samples: int,
    mode: str,
    out_path: str | None,
    fmt: str,
) -> int:
    """Tabulate the trajectory; ``both`` adds the chordal deviation between the two flows."""
    ham_file = load_state_file(hamiltonian_path)
    if ham_file.kind != "operator":
        raise ValueError(f"{hamiltonian_path} must be an operator file, got kind {ham_file.kind!r}")
    hbar = ham_file.hbar if ham_file.hbar is not None else config.hbar
    spec = HamiltonianSpec(ham_file.data, hbar=hbar, tol=config.hermiticity_tol)
    state_file = load_state_file(state_path)
    psi0 = state_file.to_pure()
    if psi0.dim != spec.dim:
        raise DimensionError(f"State of dimension {psi0.dim} does not match H of size {spec.dim}")
    if mode != "schrodinger" and spec.dim != 2:
        raise DimensionError(f"Riccati mode needs a two-level system, got dimension {spec.dim}")

    times = np.array([0.0]) if t_max == 0 else np.linspace(0.0, t_max, samples + 1)
    header = ["t"]
    columns: list[list] = [list(times)]
    exact = riccati = None
    if mode in ("schrodinger", "both"):
        exact = schrodinger_evolve(spec, psi0, times)
        header += _ket_columns("z", spec.dim)
        columns.append([_ket_values(p.amplitudes) for p in exact.points])
    if mode in ("riccati", "both"):
        riccati = riccati_evolve(spec, project_to_chart(psi0), times, step, config.chart_switch_threshold)
        header += ["chart", "re_value", "im_value"]
        columns.append([[p.chart, p.value.real, p.value.imag] for p in riccati.points])
    if spec.dim == 2:
        header += ["bloch_x", "bloch_y", "bloch_z"]
        source = exact.points if exact is not None else riccati.points
        to_bloch = bloch_point if exact is not None else chart_to_bloch
        columns.append([list(to_bloch(p)) for p in source])
    deviations = None
    if mode == "both":
        deviations = [
            chordal_distance(chart_to_bloch(r), bloch_point(s)) for r, s in zip(riccati.points, exact.points)
        ]
        header.append("deviation")
        columns.append([[d] for d in deviations])

    rows = []
    for i, t in enumerate(times):
        row = [float(t)]
        for col in columns[1:]:
            row.extend(col[i])
        rows.append(row)

    outputs: dict[str, object] = {
        "mode": mode,
        "dim": spec.dim,
        "hbar": spec.hbar,
        "t_max": t_max,
        "step": step,
        "points": len(rows),
    }
    if exact is not None:
        outputs["energy_start"] = energy(spec, exact.points[0])
        outputs["energy_end"] = energy(spec, exact.points[-1])
        outputs["norm_drift"] = abs(exact.points[-1].norm - psi0.norm)
    if deviations is not None:
        outputs["max_deviation"] = max(deviations)
    inputs = {"hamiltonian": ham_file.digest, "state": state_file.digest}
    report = Report("evolve", inputs, outputs, config.tolerances(), Table(header, rows))
    _write_table(report, out_path)
    _emit(report, fmt)
    return EXIT_OK


def cmd_gns(config: AppConfig, file_path: str, fmt: str) -> int:
    state = load_state_file(file_path)
    rho = _density(state, config)
    result = gns_construct(rho, rel_tol=config.gns_rank_rel_tol)
    n = rho.dim
    positive = result.spectrum[result.spectrum > config.gns_rank_rel_tol * max(result.spectrum[-1], 0.0)]
    outputs: dict[str, object] = {
        "n": n,
        "algebra_dim": result.algebra_dim,
        "state_rank": rho.rank(config.schmidt_rank_tol),
        "hilbert_dim": result.hilbert_dim,
        "ideal_dim": result.ideal_dim,
        "gram_min_eigenvalue": float(result.spectrum[0]),
        "gram_max_eigenvalue": float(result.spectrum[-1]),
        "gram_min_nonzero_eigenvalue": float(positive.min()) if positive.size else 0.0,
        "quotient_basis": [f"E({a // n},{a % n})" for a in result.quotient_basis],
        "orbit_dim": gns_orbit_dimension(rho, config.schmidt_rank_tol),
    }
    _emit(Report("gns", {"state": state.digest}, outputs, config.tolerances()), fmt)
    return EXIT_OK


def _validate_usage(parser: argparse.ArgumentParser, args: argparse.Namespace, config: AppConfig):
    if args.command == "werner-scan":
        if args.steps < 1:
            parser.error(f"--steps must be at least 1, got {args.steps}")
        if not 0.0 <= args.x_from <= args.x_to <= 1.0:
            parser.error(f"Need 0 <= --from <= --to <= 1, got {args.x_from} and {args.x_to}")
        if args.steps == 1 and args.x_from != args.x_to:
            parser.error("A single-point scan needs --from equal to --to")
    if args.command == "evolve":
        if args.t_max < 0:
            parser.error(f"--t-max must be non-negative, got {args.t_max}")
        if args.samples < 1:
            parser.error(f"--samples must be at least 1, got {args.samples}")
        if args.step is None:
            args.step = config.rk4_step
        if not args.step > 0:
            parser.error(f"--step must be positive, got {args.step}")
    if args.command == "tensors" and args.n is not None and args.n < 2:
        parser.error(f"--n must be at least 2, got {args.n}")


def _dispatch(config: AppConfig, args: argparse.Namespace) -> int:
    if args.command == "tensors":
        return cmd_tensors(config, args.file, args.rep, args.n, args.format)
    if args.command == "separability":
        return cmd_separability(config, args.file, args.dims, args.criterion, args.format)
    if args.command == "werner-scan":
        return cmd_werner_scan(config, args.x_from, args.x_to, args.steps, args.out, args.format)
    if args.command == "evolve":
        return cmd_evolve(
            config, args.hamiltonian, args.state, args.t_max, args.step, args.samples, args.mode, args.out, args.format
        )
    if args.command == "gns":
        return cmd_gns(config, args.file, args.format)
    raise ValueError(f"Unknown command: {args.command}")


def run_cli(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    config = AppConfig.from_env()
    _configure_logging(args.log_level or config.log_level, config.log_file)
    config = _apply_overrides(config, args)
    _validate_usage(parser, args, config)

    try:
        return _dispatch(config, args)
    except StateFileError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_USAGE
    except CriterionNotApplicable as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_NOT_APPLICABLE
    except OSError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_VALIDATION
