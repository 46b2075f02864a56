from dataclasses import dataclass

import numpy as np
from loguru import logger
from scipy.linalg import eigh
from tqdm import tqdm

from src.errors import ContractViolationError, EmptyInputError
from src.similarity.matrix import SIMILARITY, SYMMETRY_TOL, PairwiseMatrix, mirror_upper

EIGENVALUE_EPS = 1e-10
# Ranks whose aggregated weight is below this contribute nothing to EROS.
WEIGHT_CUTOFF = 1e-12
WEIGHT_AGGREGATORS = {"mean": np.mean, "min": np.min, "max": np.max}


@dataclass(frozen=True)
class EigenBasis:
    """Columns of `vectors` are orthonormal eigenvectors; `values` sorted descending, clamped at 0."""

    vectors: np.ndarray
    values: np.ndarray

    @property
    def n(self):
        return self.values.shape[0]


@dataclass(frozen=True)
class WeightVector:
    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=np.float64)
        if (w < 0).any() or abs(w.sum() - 1.0) > 1e-12:
            raise ContractViolationError(f"EROS weights must be non-negative and sum to 1, got {w}")
        object.__setattr__(self, "w", w)


def covariance(item):
    """(1/m) A^T A, with A the item centered by its own column means."""
    values = item.values if hasattr(item, "values") else np.asarray(item, dtype=np.float64)
    centered = values - values.mean(axis=0)
    return centered.T @ centered / values.shape[0]


def _fix_signs(vectors):
    """Flip each column so its largest-magnitude entry (first one on ties) is positive."""
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def eigendecompose(cov):
    cov = np.asarray(cov, dtype=np.float64)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ContractViolationError(f"Expected a square matrix, got shape {cov.shape}")
    scale = max(1.0, np.abs(cov).max(initial=0.0))
    if np.abs(cov - cov.T).max(initial=0.0) > SYMMETRY_TOL * scale:
        raise ContractViolationError("eigendecompose needs a symmetric matrix")

    values, vectors = eigh(cov)
    order = np.argsort(values, kind="stable")[::-1]
    values, vectors = values[order], vectors[:, order]
    if values[-1] < -EIGENVALUE_EPS * scale:
        logger.debug(f"Clamping negative eigenvalue {values[-1]:.3e} to 0")
    values = np.maximum(values, 0.0)
    return EigenBasis(vectors=_fix_signs(vectors), values=values)


def item_bases(dataset):
    return [eigendecompose(covariance(item)) for item in dataset.items]


def eros_weights(dataset, aggregator="mean", bases=None):
    """
    Normalize each item's spectrum to sum 1 (an all-zero spectrum becomes
    uniform), aggregate rank by rank across items, then re-normalize.
    """
    if dataset.k == 0:
        raise EmptyInputError("empty input: cannot compute EROS weights for an empty dataset")
    if aggregator not in WEIGHT_AGGREGATORS:
        raise ContractViolationError(
            f"Unknown weight aggregator '{aggregator}', expected one of {sorted(WEIGHT_AGGREGATORS)}"
        )
    bases = item_bases(dataset) if bases is None else bases

    spectra = np.array([basis.values for basis in bases])
    totals = spectra.sum(axis=1, keepdims=True)
    if not (totals > 0).any():
        raise ContractViolationError("No item has a nonzero eigenvalue; EROS weights are undefined")
    n = spectra.shape[1]
    normalized = np.where(totals > 0, spectra / np.where(totals > 0, totals, 1.0), 1.0 / n)

    w = WEIGHT_AGGREGATORS[aggregator](normalized, axis=0)
    return WeightVector(w=w / w.sum())


def _effective_weights(w):
    w = w.w if isinstance(w, WeightVector) else np.asarray(w, dtype=np.float64)
    return np.where(w < WEIGHT_CUTOFF, 0.0, w)


def eros(basis_i, basis_j, w):
    """Sum over ranks l of w_l * |<v_il, v_jl>|."""
    weights = _effective_weights(w)
    if not (basis_i.vectors.shape == basis_j.vectors.shape == (weights.shape[0],) * 2):
        raise ContractViolationError(
            f"EROS dimension mismatch: {basis_i.vectors.shape}, {basis_j.vectors.shape}, w of length {weights.shape[0]}"
        )
    cosines = np.abs((basis_i.vectors * basis_j.vectors).sum(axis=0))
    return float(cosines @ weights)


def eros_matrix(dataset, aggregator="mean", progress=True):
    dataset.require_pairs()
    bases = item_bases(dataset)
    weights = eros_weights(dataset, aggregator, bases=bases)
    effective = _effective_weights(weights)
    vectors = np.stack([basis.vectors for basis in bases])

    k = dataset.k
    upper = np.zeros((k, k))
    for i in tqdm(range(k - 1), desc="EROS", disable=not progress, leave=False):
        cosines = np.abs((vectors[i] * vectors[i + 1:]).sum(axis=1))
        upper[i, i + 1:] = cosines @ effective
    # Rounding can push a cosine a hair past 1.
    data = np.clip(mirror_upper(upper), 0.0, 1.0) + np.eye(k)
    logger.info(f"Computed EROS similarity matrix ({k}x{k}, weights {np.round(weights.w, 4).tolist()})")
    return PairwiseMatrix(kind=SIMILARITY, data=data, ids=tuple(dataset.ids))
