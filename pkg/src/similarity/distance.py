import numpy as np
from scipy.spatial.distance import pdist, squareform

from src.errors import ContractViolationError, EmptyInputError
from src.similarity.matrix import DISTANCE, SIMILARITY, PairwiseMatrix

SIMILARITY_TOL = 1e-9


def euclidean_matrix(vectors, ids=()):
    vectors = np.asarray(vectors, dtype=np.float64)
    if vectors.ndim != 2 or vectors.shape[0] < 2:
        raise EmptyInputError(f"Euclidean distances need a k x p matrix with k >= 2, got {vectors.shape}")
    return PairwiseMatrix(kind=DISTANCE, data=squareform(pdist(vectors, "euclidean")), ids=tuple(ids))


def similarity_to_distance(similarity):
    """Chord conversion d = sqrt(2 (1 - s)); s = 1 maps to 0, s = 0 to sqrt(2)."""
    if similarity.kind != SIMILARITY:
        raise ContractViolationError(f"Expected a similarity matrix, got '{similarity.kind}'")
    s = similarity.data
    if s.min() < -SIMILARITY_TOL or s.max() > 1.0 + SIMILARITY_TOL:
        raise ContractViolationError(
            f"Similarity entries must lie in [0, 1], got range [{s.min()}, {s.max()}]"
        )
    d = np.sqrt(2.0 * (1.0 - np.clip(s, 0.0, 1.0)))
    np.fill_diagonal(d, 0.0)
    return PairwiseMatrix(kind=DISTANCE, data=d, ids=similarity.ids)
