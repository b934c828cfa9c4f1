"""
Entropic Inequality Checkers

Each checker evaluates one inequality lhs <= rhs on a concrete state and
returns an InequalityReport with slack = rhs - lhs. Tomographic checkers
(SUB_TOMO, SSA_TOMO, SUMFORM_A1) are expected to hold for every input; the
quantum-side checkers (SUB_QUANTUM, MIXED) only record verdicts, so any
violation is logged with the full counterexample.

run_ensemble sweeps the checkers over seeded random states and unitaries.
"""

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

import config
from config import DEFAULT_Q_GRID, Tolerances
from entropy import tsallis_classical, tsallis_quantum, validate_q
from errors import ConfigError, DimMismatch, NonProductInput, ShapeMismatch
from indexing import FactorShape, marginalization_matrix, pad_density, reduce_density
from linalg import DensityMatrix, UnitaryMatrix
from reports import InequalityId, InequalityReport
from sampling import SeededGenerator, haar_unitary, random_density, random_product_unitary
from tomography import TomogramVector, check_no_signaling, product_unitary, tomogram

logger = logging.getLogger(__name__)

__all__ = [
    "InequalityId",
    "InequalityReport",
    "EnsembleConfig",
    "EnsembleSummary",
    "EnsembleResult",
    "check_subadditivity_tomographic",
    "check_subadditivity_quantum",
    "check_ssa_tomographic",
    "check_mixed_inequality",
    "check_sumform_a1",
    "run_ensemble",
]


def _require_shape(rho: DensityMatrix, shape: FactorShape, n_factors: int) -> None:
    if shape.n_factors != n_factors:
        raise ShapeMismatch(f"expected a {n_factors}-factor shape, got {shape.dims}")
    if shape.N != rho.dim:
        raise ShapeMismatch(
            f"shape {shape.dims} has N = {shape.N} but the state has N = {rho.dim}; pad the state first"
        )


def _marginal(w: TomogramVector, shape: FactorShape, keep) -> np.ndarray:
    return marginalization_matrix(shape, keep).apply(w.probabilities)


def _counterexample(rho: DensityMatrix, u: Optional[UnitaryMatrix]) -> dict:
    payload = {"rho_re": rho.matrix.real.tolist(), "rho_im": rho.matrix.imag.tolist()}
    if u is not None:
        payload["u_re"] = u.matrix.real.tolist()
        payload["u_im"] = u.matrix.imag.tolist()
    return payload


def _record(report: InequalityReport, rho: DensityMatrix, u: Optional[UnitaryMatrix]) -> InequalityReport:
    if not report.holds:
        report = report.with_extra(counterexample=_counterexample(rho, u))
        logger.warning(
            "%s violated at q=%s: slack %.3e; counterexample %s",
            report.inequality.value,
            report.q,
            report.slack,
            json.dumps(report.extra["counterexample"]),
        )
    return report


def check_subadditivity_tomographic(
    rho: DensityMatrix,
    u: UnitaryMatrix,
    shape: FactorShape,
    q: float,
    tol: Optional[Tolerances] = None,
    seed: Optional[int] = None,
) -> InequalityReport:
    """
    S_q(w(u)) <= S_q(Omega_1) + S_q(Omega_2) for a two-factor shape (n, m).
    """
    tol = config.resolve(tol)
    q = validate_q(q)
    _require_shape(rho, shape, 2)
    w = tomogram(rho, u, tol)
    lhs = tsallis_classical(w, q, tol)
    rhs = tsallis_classical(_marginal(w, shape, [1]), q, tol) + tsallis_classical(_marginal(w, shape, [2]), q, tol)
    report = InequalityReport.build(
        InequalityId.SUB_TOMO, q=q, N=rho.dim, shape=shape.dims, lhs=lhs, rhs=rhs,
        tolerance=tol.slack, seed=seed,
    )
    return _record(report, rho, u)


def check_subadditivity_quantum(
    rho: DensityMatrix,
    shape: FactorShape,
    q: float,
    tol: Optional[Tolerances] = None,
    seed: Optional[int] = None,
) -> InequalityReport:
    """S_q(rho) <= S_q(rho_1) + S_q(rho_2); recorded, not assumed."""
    tol = config.resolve(tol)
    q = validate_q(q)
    _require_shape(rho, shape, 2)
    rho1 = reduce_density(rho, shape, [1], tol)
    rho2 = reduce_density(rho, shape, [2], tol)
    lhs = tsallis_quantum(rho, q, tol)
    rhs = tsallis_quantum(rho1, q, tol) + tsallis_quantum(rho2, q, tol)
    report = InequalityReport.build(
        InequalityId.SUB_QUANTUM, q=q, N=rho.dim, shape=shape.dims, lhs=lhs, rhs=rhs,
        tolerance=tol.slack, seed=seed,
    )
    return _record(report, rho, None)


def check_ssa_tomographic(
    rho: DensityMatrix,
    u: UnitaryMatrix,
    shape: FactorShape,
    q: float,
    tol: Optional[Tolerances] = None,
    seed: Optional[int] = None,
) -> InequalityReport:
    """
    S_q(w) + S_q(w_2) <= S_q(w_12) + S_q(w_23) for a three-factor shape.
    """
    tol = config.resolve(tol)
    q = validate_q(q)
    _require_shape(rho, shape, 3)
    w = tomogram(rho, u, tol)
    lhs = tsallis_classical(w, q, tol) + tsallis_classical(_marginal(w, shape, [2]), q, tol)
    rhs = tsallis_classical(_marginal(w, shape, [1, 2]), q, tol) + tsallis_classical(_marginal(w, shape, [2, 3]), q, tol)
    report = InequalityReport.build(
        InequalityId.SSA_TOMO, q=q, N=rho.dim, shape=shape.dims, lhs=lhs, rhs=rhs,
        tolerance=tol.slack, seed=seed,
    )
    return _record(report, rho, u)


def check_mixed_inequality(
    rho: DensityMatrix,
    parts: Sequence[UnitaryMatrix],
    shape: FactorShape,
    q: float,
    tol: Optional[Tolerances] = None,
    seed: Optional[int] = None,
) -> InequalityReport:
    """
    S_q(rho) + S_q(rho_2) <= S_q(w_12) + S_q(w_23) with u = u_1 (x) u_2 (x) u_3.

    Args:
        parts: The three local unitaries; a single assembled unitary is rejected.
    """
    tol = config.resolve(tol)
    q = validate_q(q)
    if isinstance(parts, UnitaryMatrix) or isinstance(parts, np.ndarray):
        raise NonProductInput("the mixed inequality needs the local factors u1, u2, u3, not an assembled unitary")
    _require_shape(rho, shape, 3)
    if len(parts) != 3:
        raise NonProductInput(f"expected 3 local unitaries, got {len(parts)}")
    for position, (part, n) in enumerate(zip(parts, shape.dims), start=1):
        if part.dim != n:
            raise DimMismatch(f"u{position} has dim {part.dim}, factor {position} has {n}")

    u = product_unitary(parts)
    w = tomogram(rho, u, tol)
    rho2 = reduce_density(rho, shape, [2], tol)
    lhs = tsallis_quantum(rho, q, tol) + tsallis_quantum(rho2, q, tol)
    rhs = tsallis_classical(_marginal(w, shape, [1, 2]), q, tol) + tsallis_classical(_marginal(w, shape, [2, 3]), q, tol)
    report = InequalityReport.build(
        InequalityId.MIXED, q=q, N=rho.dim, shape=shape.dims, lhs=lhs, rhs=rhs,
        tolerance=tol.slack, seed=seed,
    )
    return _record(report, rho, u)


def check_sumform_a1(
    rho: DensityMatrix,
    u: UnitaryMatrix,
    shape: FactorShape,
    q: float,
    tol: Optional[Tolerances] = None,
    seed: Optional[int] = None,
) -> InequalityReport:
    """
    Sum form of tomographic subadditivity.

    lhs = sum_b [(M1 w)_b^q + (M2 w)_b^q], rhs = 1 + sum_a w_a^q. This is
    the subadditivity inequality multiplied through by (q - 1). The opposite
    direction, as it is usually printed, is reported in
    ``extra["printed_direction_holds"]``.
    """
    tol = config.resolve(tol)
    q = validate_q(q)
    _require_shape(rho, shape, 2)
    w = tomogram(rho, u, tol)
    p = w.probabilities
    lhs = float(np.sum(_marginal(w, shape, [1]) ** q) + np.sum(_marginal(w, shape, [2]) ** q))
    rhs = float(1.0 + np.sum(p ** q))
    report = InequalityReport.build(
        InequalityId.SUMFORM_A1, q=q, N=rho.dim, shape=shape.dims, lhs=lhs, rhs=rhs,
        tolerance=tol.slack, seed=seed,
        extra={"printed_direction_holds": bool(rhs <= lhs + tol.slack)},
    )
    return _record(report, rho, u)


@dataclass(frozen=True)
class EnsembleConfig:
    """
    What run_ensemble samples and checks.

    ``state`` fixes rho for every trial; otherwise a random state of dimension
    N (and rank ``rank``) is drawn per trial. With ``pad`` a state whose N is
    smaller than shape.N is zero-padded up to shape.N.
    """

    inequalities: Tuple[InequalityId, ...]
    shape: FactorShape
    N: Optional[int] = None
    q_values: Tuple[float, ...] = DEFAULT_Q_GRID
    trials: int = 1
    seed: int = 0
    rank: Optional[int] = None
    partners: int = 20
    pad: bool = False
    workers: int = 1
    state: Optional[DensityMatrix] = None
    tolerances: Optional[Tolerances] = None

    def __post_init__(self):
        if not self.inequalities:
            raise ConfigError("name at least one inequality")
        if self.trials < 0:
            raise ConfigError(f"trials must be >= 0, got {self.trials}")
        if self.partners < 0:
            raise ConfigError(f"partners must be >= 0, got {self.partners}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        for q in self.q_values:
            validate_q(q)
        if self.state is not None and self.N is not None and self.N != self.state.dim:
            raise ShapeMismatch(f"N = {self.N} but the input state has N = {self.state.dim}")

    @property
    def state_dim(self) -> int:
        if self.state is not None:
            return self.state.dim
        return self.shape.N if self.N is None else self.N

    def validate_dimensions(self) -> None:
        """Reject a state dimension that neither equals shape.N nor can be padded to it."""
        N = self.state_dim
        if N == self.shape.N:
            return
        if not self.pad:
            raise ShapeMismatch(f"shape {self.shape} has N = {self.shape.N} but N = {N}; use --pad to zero-pad")
        if N > self.shape.N:
            raise ShapeMismatch(f"cannot pad N = {N} down to shape {self.shape} (N = {self.shape.N})")


@dataclass(frozen=True)
class EnsembleSummary:
    count: int
    violations: int
    min_slack: Optional[float]
    worst: Optional[InequalityReport]

    @classmethod
    def of(cls, reports: Sequence[InequalityReport]) -> "EnsembleSummary":
        """Count violations and keep the report with the smallest slack."""
        if not reports:
            return cls(count=0, violations=0, min_slack=None, worst=None)
        worst = min(reports, key=lambda r: r.slack)
        return cls(
            count=len(reports),
            violations=sum(1 for r in reports if not r.holds),
            min_slack=worst.slack,
            worst=worst,
        )

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "violations": self.violations,
            "min_slack": self.min_slack,
            "worst": None if self.worst is None else self.worst.to_dict(),
        }


@dataclass(frozen=True)
class EnsembleResult:
    reports: List[InequalityReport] = field(default_factory=list)
    summary: EnsembleSummary = field(default_factory=lambda: EnsembleSummary.of([]))


def _run_trial(cfg: EnsembleConfig, trial: int) -> List[InequalityReport]:
    tol = config.resolve(cfg.tolerances)
    rng = SeededGenerator(cfg.seed).substream(trial).generator()
    shape = cfg.shape

    if cfg.state is not None:
        rho = cfg.state
    else:
        rho = random_density(cfg.state_dim, rng, cfg.rank, tol)
    original_N = rho.dim
    if cfg.pad:
        rho = pad_density(rho, shape.N)

    u = haar_unitary(shape.N, rng, tol)
    needs_parts = InequalityId.MIXED in cfg.inequalities
    parts = random_product_unitary(shape, rng, tol) if needs_parts else None
    if InequalityId.NOSIG in cfg.inequalities:
        if shape.n_factors != 2:
            raise ShapeMismatch(f"nosig needs a two-factor shape, got {shape.dims}")
        fixed = [haar_unitary(n, rng, tol) for n in shape.dims]
        partner_sets = [
            [haar_unitary(shape.dims[1], rng, tol) for _ in range(cfg.partners)],
            [haar_unitary(shape.dims[0], rng, tol) for _ in range(cfg.partners)],
        ]

    extra = {"trial": trial}
    if original_N != rho.dim:
        extra["N_original"] = original_N

    reports = []
    for q in cfg.q_values:
        for ineq in cfg.inequalities:
            if ineq is InequalityId.SUB_TOMO:
                batch = [check_subadditivity_tomographic(rho, u, shape, q, tol, cfg.seed)]
            elif ineq is InequalityId.SUB_QUANTUM:
                batch = [check_subadditivity_quantum(rho, shape, q, tol, cfg.seed)]
            elif ineq is InequalityId.SSA_TOMO:
                batch = [check_ssa_tomographic(rho, u, shape, q, tol, cfg.seed)]
            elif ineq is InequalityId.MIXED:
                batch = [check_mixed_inequality(rho, parts, shape, q, tol, cfg.seed)]
            elif ineq is InequalityId.SUMFORM_A1:
                batch = [check_sumform_a1(rho, u, shape, q, tol, cfg.seed)]
            else:
                # independent of q; recorded under each q so every grid cell is filled
                batch = [
                    check_no_signaling(rho, shape, fixed[side - 1], partner_sets[side - 1], side, tol, cfg.seed)
                    for side in (1, 2)
                ]
            reports.extend(r.with_extra(**extra) for r in batch)
    return reports


def run_ensemble(cfg: EnsembleConfig) -> EnsembleResult:
    """
    Run every configured checker over ``cfg.trials`` seeded trials.

    Trial t draws from the substream (seed, t), so the report list is the
    same for any number of workers; reports come back in trial order.
    """
    cfg.validate_dimensions()
    logger.info(
        "ensemble: %s, shape %s, q %s, %d trials, seed %d",
        ",".join(i.value for i in cfg.inequalities), cfg.shape, list(cfg.q_values), cfg.trials, cfg.seed,
    )
    if cfg.trials == 0:
        return EnsembleResult()

    if cfg.workers == 1:
        per_trial = [_run_trial(cfg, t) for t in range(cfg.trials)]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            per_trial = list(pool.map(lambda t: _run_trial(cfg, t), range(cfg.trials)))

    reports = [r for batch in per_trial for r in batch]
    summary = EnsembleSummary.of(reports)
    logger.info("ensemble done: %d reports, %d violations, min slack %s",
                summary.count, summary.violations, summary.min_slack)
    return EnsembleResult(reports=reports, summary=summary)
