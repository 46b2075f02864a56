from dataclasses import dataclass
from typing import Tuple

import numpy as np
from tqdm import tqdm

from src.errors import CalibrationError, ContractViolationError, ValidationError
from src.similarity.matrix import DISTANCE, SIMILARITY

PROBABILITY_FLOOR = 1e-12
PERPLEXITY_TOL = 1e-6
MAX_BRACKET_STEPS = 64
MAX_BISECTION_STEPS = 200
LOG_BETA_LIMIT = 700.0


@dataclass(frozen=True)
class AffinityMatrix:
    """Joint probabilities: symmetric, zero diagonal, off-diagonal >= floor, total 1."""

    P: np.ndarray
    ids: Tuple[str, ...] = ()

    @property
    def k(self):
        return self.P.shape[0]


def floor_and_normalize(matrix, floor=PROBABILITY_FLOOR):
    """
    Zero the diagonal, raise off-diagonal entries to `floor` and rescale the
    rest so the total is 1. Symmetric input stays exactly symmetric.
    """
    out = np.array(matrix, dtype=np.float64, copy=True)
    np.fill_diagonal(out, 0.0)
    off = ~np.eye(out.shape[0], dtype=bool)
    for _ in range(16):
        low = off & (out < floor)
        out[low] = floor
        free = off & ~low
        out[free] *= (1.0 - floor * low.sum()) / out[free].sum()
        if not (out[free] < floor).any():
            break
    return out


def _row_distribution(d2, log_beta):
    probs = np.exp(-np.exp(log_beta) * d2)
    probs /= probs.sum()
    nonzero = probs > 0
    entropy = -np.sum(probs[nonzero] * np.log2(probs[nonzero]))
    return probs, entropy


def calibrate_row(distances_row, perplexity, row_index=0):
    """
    Find sigma_i such that the Gaussian conditional distribution over the
    row's neighbors has perplexity 2^H (H in bits) equal to `perplexity`.
    Bisection runs on log(beta), beta = 1 / (2 sigma^2).
    """
    d = np.asarray(distances_row, dtype=np.float64)
    if not (1.0 <= perplexity <= d.shape[0]):
        raise ContractViolationError(
            f"Perplexity {perplexity} outside [1, {d.shape[0]}] for row {row_index}"
        )
    if not (d > 0).any():
        raise CalibrationError(
            f"Row {row_index}: all distances are zero, perplexity cannot be calibrated",
            row=row_index,
        )

    d2 = d * d
    d2 = d2 - d2.min()
    spread = d2[d2 > 0]
    log_beta = -np.log(spread.mean()) if spread.size else 0.0
    lo, hi = -np.inf, np.inf
    step, bracket_steps = 1.0, 0

    for _ in range(MAX_BRACKET_STEPS + MAX_BISECTION_STEPS):
        probs, entropy = _row_distribution(d2, log_beta)
        achieved = 2.0 ** entropy
        if abs(achieved - perplexity) <= PERPLEXITY_TOL:
            sigma = np.sqrt(0.5 / np.exp(log_beta))
            return float(sigma), probs
        # A flat distribution needs a larger beta (narrower kernel).
        if achieved > perplexity:
            lo = log_beta
        else:
            hi = log_beta

        if np.isfinite(lo) and np.isfinite(hi):
            if hi - lo <= 1e-15 * max(1.0, abs(lo)):
                break
            log_beta = 0.5 * (lo + hi)
        else:
            bracket_steps += 1
            if bracket_steps > MAX_BRACKET_STEPS:
                break
            log_beta += step if np.isinf(hi) else -step
            log_beta = float(np.clip(log_beta, -LOG_BETA_LIMIT, LOG_BETA_LIMIT))
            step *= 2.0

    raise CalibrationError(
        f"Row {row_index}: could not reach perplexity {perplexity} (achieved entropy {entropy:.6f} bits, perplexity {achieved:.6f})",
        row=row_index,
        entropy=float(entropy),
    )


def joint_affinities(distances, perplexity, progress=True):
    """p_ij = (p_{j|i} + p_{i|j}) / (2k), floored at 1e-12 off the diagonal."""
    if distances.kind != DISTANCE:
        raise ContractViolationError(f"Expected a distance matrix, got '{distances.kind}'")
    k = distances.k
    if k < 3:
        raise ValidationError(f"Affinities need at least 3 items, got {k}")
    if not perplexity < k:
        raise ValidationError(f"Perplexity {perplexity} must be smaller than k = {k}")

    conditional = np.zeros((k, k))
    others = ~np.eye(k, dtype=bool)
    for i in tqdm(range(k), desc="Perplexity calibration", disable=not progress, leave=False):
        _, probs = calibrate_row(distances.data[i, others[i]], perplexity, row_index=i)
        conditional[i, others[i]] = probs

    joint = (conditional + conditional.T) / (2.0 * k)
    return AffinityMatrix(P=floor_and_normalize(joint), ids=distances.ids)


def direct_affinities(similarity):
    """Row-normalized similarities, symmetrized like joint_affinities."""
    if similarity.kind != SIMILARITY:
        raise ContractViolationError(f"Expected a similarity matrix, got '{similarity.kind}'")
    s = np.clip(similarity.data, 0.0, None)
    np.fill_diagonal(s, 0.0)
    totals = s.sum(axis=1)
    empty = np.flatnonzero(totals <= 0)
    if empty.size:
        raise CalibrationError(f"Row {empty[0]} has no positive similarity", row=int(empty[0]))
    conditional = s / totals[:, None]
    joint = (conditional + conditional.T) / (2.0 * similarity.k)
    return AffinityMatrix(P=floor_and_normalize(joint), ids=similarity.ids)
