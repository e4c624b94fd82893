"""Randomized numerical validation of structural verdicts.

Structural controllability is a generic property: it holds for almost
every numerical realization of the pattern, and its absence holds for all
of them.  This module samples realizations with entries bounded away from
zero, computes the Kalman controllability rank, and compares the outcome
against the structural decision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .patterns import DimensionMismatchError, StructuredMatrix
from .resilience import is_structurally_controllable


def sample_realization(m: StructuredMatrix, seed: int) -> np.ndarray:
    """A numerical realization: one draw per star, uniform on +-[0.1, 1].

    The magnitude floor keeps samples away from zero so the realization
    always has the pattern's exact zero structure.  Deterministic for a
    fixed seed.
    """
    rng = np.random.default_rng(seed)
    out = np.zeros((m.rows, m.cols))
    stars = sorted(m.stars)
    if stars:
        magnitudes = rng.uniform(0.1, 1.0, size=len(stars))
        signs = np.where(rng.random(len(stars)) < 0.5, -1.0, 1.0)
        for (r, c), value in zip(stars, magnitudes * signs):
            out[r - 1, c - 1] = value
    return out


def kalman_rank(A: np.ndarray, B: np.ndarray, threshold_scale: float = 1.0) -> int:
    """Numerical rank of [B, AB, ..., A^(n-1) B].

    Columns of each power block are scaled to unit norm before assembly to
    keep the singular values comparable; the rank threshold is the usual
    max(dim) * eps * sigma_max rule, optionally scaled for sensitivity
    checks.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or B.shape[0] != n:
        raise DimensionMismatchError(f"incompatible shapes {A.shape} and {B.shape}")
    if B.shape[1] == 0 or n == 0:
        return 0

    def unit_columns(block: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(block, axis=0)
        safe = np.where(norms > 0, norms, 1.0)
        return block / safe

    blocks = []
    cur = B
    for _ in range(n):
        blocks.append(unit_columns(cur))
        cur = A @ cur
    ctrb = np.hstack(blocks)
    svals = np.linalg.svd(ctrb, compute_uv=False)
    if svals.size == 0 or svals[0] == 0.0:
        return 0
    tol = max(ctrb.shape) * np.finfo(float).eps * svals[0] * threshold_scale
    return int(np.sum(svals > tol))


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    a_seed: int
    b_seed: int
    rank: int


@dataclass(frozen=True)
class OracleReport:
    """Agreement between the structural verdict and sampled realizations.

    When the pattern is structurally controllable every trial must reach
    full rank; when it is not, no trial may (rank deficiency is exact for
    structurally uncontrollable patterns, not merely generic).
    """

    n: int
    structurally_controllable: bool
    trials: int
    full_rank_trials: int
    mismatches: tuple[TrialOutcome, ...]

    @property
    def agreement(self) -> bool:
        return not self.mismatches


def trial_seeds(master_seed: int, trials: int) -> list[tuple[int, int]]:
    """Deterministic (A-seed, B-seed) pairs derived from the master seed."""
    state = np.random.SeedSequence(master_seed).generate_state(2 * trials)
    return [(int(state[2 * i]), int(state[2 * i + 1])) for i in range(trials)]


def validate_structural_verdict(
    a: StructuredMatrix, b: StructuredMatrix, trials: int, seed: int
) -> OracleReport:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    structural = is_structurally_controllable(a, b).controllable
    n = a.rows
    full = 0
    mismatches: list[TrialOutcome] = []
    for trial, (a_seed, b_seed) in enumerate(trial_seeds(seed, trials)):
        rank = kalman_rank(sample_realization(a, a_seed), sample_realization(b, b_seed))
        if rank == n:
            full += 1
        if (rank == n) != structural:
            mismatches.append(TrialOutcome(trial, a_seed, b_seed, rank))
    return OracleReport(
        n=n,
        structurally_controllable=structural,
        trials=trials,
        full_rank_trials=full,
        mismatches=tuple(mismatches),
    )
