import numba
import numpy as np
from loguru import logger

from src.errors import ContractViolationError, EmptyInputError
from src.similarity.matrix import DISTANCE, PairwiseMatrix, mirror_upper

NO_BAND = -1


@numba.njit(nogil=True, cache=True)
def _dtw_kernel(a, b, band):
    r, c = a.shape[0], b.shape[0]
    width = max(r, c) if band < 0 else max(band, abs(r - c))
    acc = np.full((r + 1, c + 1), np.inf)
    acc[0, 0] = 0.0
    for i in range(1, r + 1):
        lo = max(1, i - width)
        hi = min(c, i + width)
        for j in range(lo, hi + 1):
            diff = a[i - 1] - b[j - 1]
            acc[i, j] = diff * diff + min(acc[i - 1, j], acc[i, j - 1], acc[i - 1, j - 1])
    return acc[r, c]


@numba.njit(nogil=True, cache=True)
def _mts_dtw_kernel(x, y, band):
    total = 0.0
    for col in range(x.shape[1]):
        total += _dtw_kernel(x[:, col], y[:, col], band)
    return total


@numba.njit(parallel=True, cache=True)
def _pairs_kernel(stacked, rows, cols, band):
    out = np.empty(rows.shape[0])
    for p in numba.prange(rows.shape[0]):
        out[p] = _mts_dtw_kernel(stacked[rows[p]], stacked[cols[p]], band)
    return out


def _band(band):
    return NO_BAND if band is None else int(band)


def _sequence(values):
    seq = np.ascontiguousarray(values, dtype=np.float64).ravel()
    if seq.shape[0] == 0:
        raise EmptyInputError("empty input: DTW needs non-empty sequences")
    return seq


def dtw(a, b, band=None):
    """
    Accumulated cost of the optimal warping path, local cost (a_i - b_j)^2,
    steps (1,0), (0,1), (1,1). `band` adds a Sakoe-Chiba constraint
    |i - j| <= max(band, |len(a) - len(b)|).
    """
    return float(_dtw_kernel(_sequence(a), _sequence(b), _band(band)))


def _values(item):
    return np.ascontiguousarray(item.values if hasattr(item, "values") else item, dtype=np.float64)


def mts_dtw(item_i, item_j, band=None):
    """Independent multivariate DTW: the per-variable DTW costs summed."""
    x, y = _values(item_i), _values(item_j)
    if x.shape[1] != y.shape[1]:
        raise ContractViolationError(
            f"mts_dtw needs the same variable count, got {x.shape[1]} and {y.shape[1]}"
        )
    if x.shape[0] == 0 or y.shape[0] == 0:
        raise EmptyInputError("empty input: DTW needs non-empty items")
    return float(_mts_dtw_kernel(x, y, _band(band)))


def dtw_matrix(dataset, band=None):
    """Pairwise mts_dtw over the upper triangle, mirrored."""
    dataset.require_pairs()
    k = dataset.k
    rows, cols = np.triu_indices(k, k=1)
    stacked = dataset.stacked()
    logger.info(f"Computing DTW distances for {rows.shape[0]} pairs...")
    if stacked is not None:
        values = _pairs_kernel(stacked, rows.astype(np.int64), cols.astype(np.int64), _band(band))
    else:
        values = np.array(
            [mts_dtw(dataset.items[i], dataset.items[j], band) for i, j in zip(rows, cols)]
        )
    upper = np.zeros((k, k))
    upper[rows, cols] = values
    return PairwiseMatrix(kind=DISTANCE, data=mirror_upper(upper), ids=tuple(dataset.ids))
