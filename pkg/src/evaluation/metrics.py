from collections import Counter

import numpy as np
from scipy.spatial.distance import pdist, squareform

from src.errors import ContractViolationError, MissingLabelError


def neighbor_order(distances):
    """
    Row i lists every other index sorted by distance from i; equal distances
    keep index order. The point itself is excluded.
    """
    dist = np.array(distances, dtype=np.float64, copy=True)
    np.fill_diagonal(dist, -np.inf)
    order = np.argsort(dist, axis=1, kind="stable")
    return order[:, 1:]


def _embedding_distances(embedding):
    return squareform(pdist(embedding.Y, "euclidean"))


def knn_label_agreement(embedding, k_neighbors):
    """
    Leave-one-out share of points whose label is the strict majority among
    their k nearest embedding neighbors; a tied vote counts as disagreement.
    """
    labels = list(embedding.labels)
    missing = [item_id for item_id, label in zip(embedding.ids, labels) if label in (None, "")]
    if missing:
        raise MissingLabelError(f"{len(missing)} item(s) have no label, e.g. '{missing[0]}'")
    if not 1 <= k_neighbors < embedding.k:
        raise ContractViolationError(f"k_neighbors must be in [1, {embedding.k}), got {k_neighbors}")

    neighbors = neighbor_order(_embedding_distances(embedding))[:, :k_neighbors]
    agree = 0
    for i, row in enumerate(neighbors):
        votes = Counter(labels[j] for j in row).most_common()
        top = votes[0][1]
        winners = [label for label, count in votes if count == top]
        agree += len(winners) == 1 and winners[0] == labels[i]
    return agree / embedding.k


def trustworthiness(high_distances, embedding, k_neighbors):
    """
    T = 1 - 2 / (k K (2k - 3K - 1)) * sum_i sum_{j in U_i} (r(i, j) - K),
    U_i the embedding K-neighbors of i that are not high-dimensional
    K-neighbors, r(i, j) the 1-based high-dimensional rank of j around i.
    """
    k = embedding.k
    if high_distances.k != k:
        raise ContractViolationError(f"{high_distances.k} high-dimensional points vs {k} embedded points")
    if not 1 <= k_neighbors < k / 2:
        raise ContractViolationError(f"k_neighbors must be in [1, {k / 2}), got {k_neighbors}")

    high_order = neighbor_order(high_distances.data)
    low_order = neighbor_order(_embedding_distances(embedding))
    ranks = np.empty((k, k), dtype=np.int64)
    ranks[np.arange(k)[:, None], high_order] = np.arange(1, k)

    penalty = 0
    for i in range(k):
        high_set = set(high_order[i, :k_neighbors].tolist())
        for j in low_order[i, :k_neighbors]:
            if j not in high_set:
                penalty += ranks[i, j] - k_neighbors
    return 1.0 - 2.0 / (k * k_neighbors * (2 * k - 3 * k_neighbors - 1)) * penalty
