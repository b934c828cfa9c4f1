"""
Qudit Tomography Command Line

Subcommands:
    verify    check one inequality over sampled (or loaded) states
    nosignal  check the no-signaling identities for one state
    demo      rebuild the j=5/2 and j=7/2 examples and check them
    sweep     grid of q values x trials, written as CSV by default

Exit status: 0 when every report holds, 2 when any report is violated,
1 on usage, input or validation errors.
"""

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence, TextIO, Tuple

import numpy as np

import config
from config import DEFAULT_Q_GRID, Tolerances
from errors import QuditError, UsageError
from indexing import FactorShape, marginalization_matrix, reduce_density, suggest_shape
from inequalities import (
    EnsembleConfig,
    EnsembleSummary,
    check_mixed_inequality,
    check_ssa_tomographic,
    run_ensemble,
)
from linalg import DensityMatrix, load_matrix_json, validate_density
from reference_matrices import (
    M12_J72_PRINTED,
    M1_J52,
    M23_J72,
    M2_J52,
    M2_J72,
    printed_rho2_j72,
    spin_labels,
)
from reports import CSV_COLUMNS, InequalityId, InequalityReport
from sampling import SeededGenerator, haar_unitary, random_angles, random_density
from tomography import SU2Angles, check_no_signaling, product_unitary, su2_irrep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2


@dataclass(frozen=True)
class RunConfig:
    """Everything a subcommand needs, resolved from flags and environment."""

    command: str
    N: Optional[int]
    shape: Optional[FactorShape]
    q_values: Tuple[float, ...]
    trials: int
    seed: int
    tolerances: Tolerances
    input_path: Optional[str]
    output_format: str
    output_path: Optional[str]
    pad: bool = False
    rank: Optional[int] = None
    partners: int = 20
    workers: int = 1
    inequalities: Tuple[InequalityId, ...] = ()
    which: Optional[str] = None
    spin: bool = False


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _float_list(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    """Subcommands verify, nosignal, demo and sweep over shared options."""
    common = _Parser(add_help=False)
    common.add_argument("--N", dest="N", type=int, help="State dimension (default: product of --shape)")
    common.add_argument("--shape", type=str, help="Factor dimensions, e.g. 2,3 or 2,2,2")
    common.add_argument("--q", type=_float_list, help="Comma-separated q values (each >= 1)")
    common.add_argument("--trials", type=int, help="Number of trials (nosignal, demo: partner unitaries)")
    common.add_argument("--seed", type=int, help="Random seed (default: QUDIT_SEED or 0)")
    common.add_argument("--tol", type=float, help="Slack tolerance for verdicts")
    common.add_argument("--input", type=str, help="Density matrix JSON file")
    common.add_argument("--output", type=str, help="Write reports here instead of standard output")
    common.add_argument("--format", choices=("json", "csv"), help="Report format")
    common.add_argument("--pad", action="store_true", help="Zero-pad the state up to the shape's N")
    common.add_argument("--rank", type=int, help="Rank of sampled states (default: full)")
    common.add_argument("--workers", type=int, help="Concurrent trials (default: QUDIT_WORKERS or 1)")
    common.add_argument("--verbose", "-v", action="count", default=0, help="More logging on stderr")

    parser = _Parser(prog="qudit_cli", description="Qudit tomogram entropic inequality checker")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", parents=[common], help="Check one inequality")
    verify.add_argument("--ineq", required=True, help="One of: " + ", ".join(i.value for i in InequalityId))
    verify.add_argument("--partners", type=int, default=20, help="Partner unitaries per nosig check")

    nosignal = sub.add_parser("nosignal", parents=[common], help="No-signaling check")
    nosignal.add_argument("--spin", action="store_true", help="Use SU(2) irreps instead of Haar unitaries")

    demo = sub.add_parser("demo", parents=[common], help="Rebuild the j=5/2 or j=7/2 example")
    demo.add_argument("which", choices=("j52", "j72"))

    sweep = sub.add_parser("sweep", parents=[common], help="q x trials grid")
    sweep.add_argument("--ineq", required=True, help="Comma-separated inequality ids")
    sweep.add_argument("--partners", type=int, default=20, help="Partner unitaries per nosig check")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """
    Turn parsed arguments into a RunConfig.

    Args:
        args: Namespace from build_parser().

    Returns:
        The run configuration, with environment defaults filled in.

    Raises:
        UsageError: unknown inequality ids or negative counts.
    """
    tolerances = config.default_tolerances()
    if args.tol is not None:
        tolerances = tolerances.with_slack(args.tol)

    shape = FactorShape.parse(args.shape) if args.shape else None
    inequalities: Tuple[InequalityId, ...] = ()
    if getattr(args, "ineq", None):
        try:
            inequalities = tuple(InequalityId.parse(p) for p in args.ineq.split(",") if p.strip())
        except ValueError as e:
            raise UsageError(str(e)) from None
        if args.command == "verify" and len(inequalities) != 1:
            raise UsageError("verify takes exactly one --ineq")

    default_format = "csv" if args.command == "sweep" else "json"
    trials = args.trials
    if trials is None:
        trials = 5 if args.command in ("nosignal", "demo") else 1
    if trials < 0:
        raise UsageError(f"--trials must be >= 0, got {trials}")
    partners = getattr(args, "partners", 20)
    if partners < 0:
        raise UsageError(f"--partners must be >= 0, got {partners}")

    return RunConfig(
        command=args.command,
        N=args.N,
        shape=shape,
        q_values=args.q if args.q else DEFAULT_Q_GRID,
        trials=trials,
        seed=config.default_seed() if args.seed is None else args.seed,
        tolerances=tolerances,
        input_path=args.input,
        output_format=args.format or default_format,
        output_path=args.output,
        pad=args.pad,
        rank=args.rank,
        partners=partners,
        workers=config.default_workers() if args.workers is None else args.workers,
        inequalities=inequalities,
        which=getattr(args, "which", None),
        spin=getattr(args, "spin", False),
    )


def _load_state(cfg: RunConfig) -> Optional[DensityMatrix]:
    if not cfg.input_path:
        return None
    rho = validate_density(load_matrix_json(cfg.input_path), cfg.tolerances)
    logger.info("loaded %dx%d state from %s", rho.dim, rho.dim, cfg.input_path)
    return rho


def write_reports(reports: Sequence[InequalityReport], fmt: str, stream: TextIO) -> None:
    """Write reports as a JSON list or as CSV rows with CSV_COLUMNS."""
    if fmt == "csv":
        writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for report in reports:
            writer.writerow(report.to_row())
    else:
        json.dump([r.to_dict() for r in reports], stream, indent=2)
        stream.write("\n")


def emit(reports: Sequence[InequalityReport], cfg: RunConfig) -> None:
    """Write reports to --output, or to standard output."""
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as f:
            write_reports(reports, cfg.output_format, f)
        logger.info("wrote %d reports to %s", len(reports), cfg.output_path)
    else:
        write_reports(reports, cfg.output_format, sys.stdout)


def _exit_status(reports: Sequence[InequalityReport]) -> int:
    return EXIT_OK if all(r.holds for r in reports) else EXIT_VIOLATION


def _print_summary(summary: EnsembleSummary) -> None:
    print(
        f"{summary.count} reports, {summary.violations} violations, min slack {summary.min_slack}",
        file=sys.stderr,
    )


def _require_shape(cfg: RunConfig) -> FactorShape:
    if cfg.shape is None:
        raise UsageError("--shape is required")
    return cfg.shape


def _ensemble(cfg: RunConfig) -> List[InequalityReport]:
    shape = _require_shape(cfg)
    state = _load_state(cfg)
    ensemble = EnsembleConfig(
        inequalities=cfg.inequalities,
        shape=shape,
        N=cfg.N,
        q_values=cfg.q_values,
        trials=cfg.trials,
        seed=cfg.seed,
        rank=cfg.rank,
        partners=cfg.partners,
        pad=cfg.pad,
        workers=cfg.workers,
        state=state,
        tolerances=cfg.tolerances,
    )
    dim = ensemble.state_dim
    if dim > shape.N:
        hint = suggest_shape(dim, shape.n_factors)
        logger.error("N = %d does not fit shape %s; try --shape %s --pad", dim, shape, hint)
    result = run_ensemble(ensemble)
    _print_summary(result.summary)
    return result.reports


def cmd_verify(cfg: RunConfig) -> int:
    """Run one inequality over the configured trials."""
    reports = _ensemble(cfg)
    emit(reports, cfg)
    return _exit_status(reports)


def cmd_sweep(cfg: RunConfig) -> int:
    """q-grid x trials sweep; CSV unless --format json."""
    reports = _ensemble(cfg)
    emit(reports, cfg)
    return _exit_status(reports)


def _local_unitaries(dim: int, count: int, rng: np.random.Generator, spin: bool):
    if spin:
        j = (dim - 1) / 2
        return [su2_irrep(j, SU2Angles(theta, phi)) for theta, phi in random_angles(rng, count)]
    return [haar_unitary(dim, rng) for _ in range(count)]


def _no_signaling_reports(
    rho: DensityMatrix, shape: FactorShape, partners: int, rng: np.random.Generator,
    spin: bool, cfg: RunConfig,
) -> List[InequalityReport]:
    n, m = shape.dims
    u1 = _local_unitaries(n, 1, rng, spin)[0]
    u2 = _local_unitaries(m, 1, rng, spin)[0]
    u2_list = _local_unitaries(m, partners, rng, spin)
    u1_list = _local_unitaries(n, partners, rng, spin)
    return [
        check_no_signaling(rho, shape, u1, u2_list, 1, cfg.tolerances, cfg.seed),
        check_no_signaling(rho, shape, u2, u1_list, 2, cfg.tolerances, cfg.seed),
    ]


def cmd_nosignal(cfg: RunConfig) -> int:
    """No-signaling of both marginals of one state; --trials partner unitaries."""
    shape = _require_shape(cfg)
    if shape.n_factors != 2:
        raise UsageError(f"nosignal needs a two-factor shape, got {shape}")
    rng = SeededGenerator(cfg.seed).generator()
    rho = _load_state(cfg)
    if rho is None:
        rho = random_density(cfg.N or shape.N, rng, cfg.rank, cfg.tolerances)

    reports = _no_signaling_reports(rho, shape, cfg.trials, rng, cfg.spin, cfg)
    deviation = max(r.extra["max_deviation"] for r in reports)
    print(f"max deviation: {deviation:.3e}", file=sys.stderr)
    emit(reports, cfg)
    return _exit_status(reports)


def _print_matrix(title: str, M: np.ndarray) -> None:
    print(f"\n{title}")
    with np.printoptions(precision=4, suppress=True, linewidth=120):
        print(M)


def _compare_fixture(title: str, generated: np.ndarray, printed: np.ndarray) -> bool:
    match = bool(np.array_equal(generated, printed))
    _print_matrix(f"{title} (generated, matches printed: {match})", generated.astype(int))
    return match


def _demo_j52(cfg: RunConfig, rng: np.random.Generator) -> Tuple[bool, List[InequalityReport]]:
    shape = FactorShape((2, 3))
    print("=== Qudit j=5/2 as (2, 3): no signaling ===")
    for index, label in enumerate(spin_labels(6), start=1):
        print(f"  index {index} <-> m = {label}")

    ok = _compare_fixture("M(1)", marginalization_matrix(shape, [1]).matrix, M1_J52)
    ok &= _compare_fixture("M(2)", marginalization_matrix(shape, [2]).matrix, M2_J52)

    rho = _load_state(cfg)
    if rho is None:
        rho = random_density(6, rng, cfg.rank, cfg.tolerances)
    _print_matrix("rho_1 = [Tr rho_jk]", reduce_density(rho, shape, [1], cfg.tolerances).matrix)
    _print_matrix("rho_2 = rho_11 + rho_22", reduce_density(rho, shape, [2], cfg.tolerances).matrix)

    # spin tomogram: u1 for j=1/2, u2 for j=1
    reports = _no_signaling_reports(rho, shape, cfg.trials, rng, True, cfg)
    for r in reports:
        print(f"\nw_{r.extra['side']} deviation over {r.extra['partners']} partners: {r.extra['max_deviation']:.3e}")
    return ok, reports


def _demo_j72(cfg: RunConfig, rng: np.random.Generator) -> Tuple[bool, List[InequalityReport]]:
    shape = FactorShape((2, 2, 2))
    print("=== Qudit j=7/2 as (2, 2, 2): strong subadditivity ===")
    for index, label in enumerate(spin_labels(8), start=1):
        print(f"  index {index} <-> m = {label}")

    ok = _compare_fixture("M(23)", marginalization_matrix(shape, [2, 3]).matrix, M23_J72)
    ok &= _compare_fixture("M(2)", marginalization_matrix(shape, [2]).matrix, M2_J72)

    m12 = marginalization_matrix(shape, [1, 2]).matrix
    matches_printed = bool(np.array_equal(m12, M12_J72_PRINTED))
    _print_matrix("M(12) (generated, keeps the (i, k) marginal)", m12.astype(int))
    _print_matrix("M(12) as printed", M12_J72_PRINTED.astype(int))
    if not matches_printed:
        print("note: the printed M(12) sums over both k and l (it keeps factor 1 only);")
        print("      the generated (i, k) marginal is used for every check below.")

    rho = _load_state(cfg)
    if rho is None:
        rho = random_density(8, rng, cfg.rank, cfg.tolerances)
    rho2 = reduce_density(rho, shape, [2], cfg.tolerances).matrix
    _print_matrix("rho_2 (block sum over factors 1 and 3)", rho2)
    _print_matrix("rho_2 from the printed element formulas", printed_rho2_j72(rho))
    print("note: the printed off-diagonal element is the conjugate of the block sum; spectra agree.")

    spins = ("1/2", "1/2", "1/2")
    reports = []
    for q in cfg.q_values:
        theta_phi = random_angles(rng, 3)
        parts = [su2_irrep(j, SU2Angles(t, p)) for j, (t, p) in zip(spins, theta_phi)]
        u = product_unitary(parts)
        reports.append(check_ssa_tomographic(rho, u, shape, q, cfg.tolerances, cfg.seed))
        reports.append(check_mixed_inequality(rho, parts, shape, q, cfg.tolerances, cfg.seed))
    for r in reports:
        print(f"{r.inequality.value:>8} q={r.q:<4} lhs={r.lhs:.6f} rhs={r.rhs:.6f} slack={r.slack:.3e} holds={r.holds}")
    return ok, reports


def cmd_demo(cfg: RunConfig) -> int:
    """Print the example matrices and run their checks."""
    rng = SeededGenerator(cfg.seed).generator()
    if cfg.which == "j52":
        fixtures_ok, reports = _demo_j52(cfg, rng)
    else:
        fixtures_ok, reports = _demo_j72(cfg, rng)

    if cfg.output_path:
        emit(reports, cfg)
    if not fixtures_ok:
        print("generated marginalization matrices differ from the printed ones", file=sys.stderr)
        return EXIT_VIOLATION
    return _exit_status(reports)


COMMANDS = {
    "verify": cmd_verify,
    "nosignal": cmd_nosignal,
    "demo": cmd_demo,
    "sweep": cmd_sweep,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run the subcommand and return the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(
            level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else config.log_level(),
            stream=sys.stderr,
            format="%(levelname)s %(name)s: %(message)s",
        )
        cfg = resolve_config(args)
        return COMMANDS[cfg.command](cfg)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (QuditError, OSError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
