import os

from loguru import logger

from src.errors import StaleCacheError
from src.similarity.matrix import PairwiseMatrix
from src.utils import content_hash, read_json


def cache_key(dataset, params):
    """Content hash of the preprocessed dataset plus the parameters that shaped the matrix."""
    return content_hash([item.values for item in dataset.items], dataset.ids, params)


def cached_matrix(cache_dir, name, key, ids, build):
    """
    Return the matrix stored as `<name>.json`, building and storing it on a
    miss. A stored envelope whose key or ids disagree with the request is
    stale: it belongs to another dataset or other parameters.
    """
    if cache_dir is None:
        return build()
    path = os.path.join(cache_dir, f"{name}.json")
    if os.path.exists(path):
        payload = read_json(path)
        if payload.get("key") != key or payload.get("ids") != [str(i) for i in ids]:
            raise StaleCacheError(
                f"Cached matrix {path} does not match the current dataset; delete it or run with --no-cache"
            )
        logger.info(f"Loaded cached {name} matrix from {path}")
        return PairwiseMatrix.from_dict(payload)

    matrix = build()
    matrix.to_json(path, key=key, name=name)
    logger.info(f"Saved {name} matrix to cache {path}")
    return matrix
