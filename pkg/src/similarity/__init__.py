from .cache import cache_key, cached_matrix
from .distance import euclidean_matrix, similarity_to_distance
from .dtw import dtw, dtw_matrix, mts_dtw
from .eros import (
    EigenBasis,
    WeightVector,
    covariance,
    eigendecompose,
    eros,
    eros_matrix,
    eros_weights,
    item_bases,
)
from .matrix import DISTANCE, SIMILARITY, PairwiseMatrix
