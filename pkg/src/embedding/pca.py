import numpy as np
from loguru import logger

from src.embedding.result import Embedding
from src.errors import DimensionError, EmptyInputError
from src.similarity.eros import eigendecompose


def pca_project(data, d=2, ids=None, labels=None):
    """
    Project centered rows onto the top-d eigenvectors of the data covariance,
    components ordered by explained variance with the eigendecompose sign
    convention.
    """
    X = np.asarray(data, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise EmptyInputError(f"PCA needs a k x p matrix with k >= 2, got shape {X.shape}")
    if d not in (2, 3):
        raise DimensionError(f"PCA output dimension must be 2 or 3, got {d}")
    if X.shape[1] < d:
        raise DimensionError(f"Cannot project {X.shape[1]} features onto {d} components")

    k = X.shape[0]
    centered = X - X.mean(axis=0)
    cov = centered.T @ centered / k
    basis = eigendecompose(0.5 * (cov + cov.T))
    components = basis.vectors[:, :d]
    total = basis.values.sum()
    ratio = basis.values[:d] / total if total > 0 else np.zeros(d)
    logger.info(f"PCA explained variance ratio: {np.round(ratio, 4).tolist()}")

    return Embedding(
        Y=centered @ components,
        ids=tuple(ids) if ids is not None else tuple(str(i) for i in range(k)),
        labels=tuple(labels) if labels is not None else (None,) * k,
        method="pca",
        config="pca",
        explained_variance=ratio,
        components=components,
    )
