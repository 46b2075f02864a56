import hashlib
import json
import os
import sys

import numpy as np
from loguru import logger


def configure_logging(level="INFO"):
    """
    Route loguru to a single stderr sink. Called once by the CLI; library
    code only ever imports `logger`.
    """
    logger.remove()
    logger.add(
        sys.stderr,
        level=level,
        format="<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | {message}",
    )


def content_hash(arrays, ids, params):
    """
    Stable sha256 over a list of float arrays, their ids and a JSON-able
    parameter dict. Used to key the pairwise-matrix cache.
    """
    digest = hashlib.sha256()
    for item_id, values in zip(ids, arrays):
        digest.update(str(item_id).encode("utf-8"))
        block = np.ascontiguousarray(values, dtype=np.float64)
        digest.update(str(block.shape).encode("ascii"))
        digest.update(block.tobytes())
    digest.update(json.dumps(params, sort_keys=True).encode("utf-8"))
    return digest.hexdigest()


def write_json(payload, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def read_json(path):
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)
