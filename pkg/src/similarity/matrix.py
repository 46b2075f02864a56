import os
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd

from src.errors import ContractViolationError
from src.utils import read_json, write_json

SIMILARITY = "similarity"
DISTANCE = "distance"
SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class PairwiseMatrix:
    """Symmetric k x k similarity (diagonal 1, entries in [0, 1]) or distance (diagonal 0, entries >= 0)."""

    kind: str
    data: np.ndarray
    ids: Tuple[str, ...] = ()

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64, copy=True)
        if self.kind not in (SIMILARITY, DISTANCE):
            raise ContractViolationError(f"Unknown matrix kind '{self.kind}'")
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ContractViolationError(f"Pairwise matrix must be square, got {data.shape}")
        if not np.isfinite(data).all():
            raise ContractViolationError("Pairwise matrix contains non-finite entries")
        if np.abs(data - data.T).max(initial=0.0) > SYMMETRY_TOL:
            raise ContractViolationError("Pairwise matrix is not symmetric")
        diagonal = 1.0 if self.kind == SIMILARITY else 0.0
        if not np.all(np.diag(data) == diagonal):
            raise ContractViolationError(f"{self.kind} matrix diagonal must be exactly {diagonal}")
        if self.kind == DISTANCE and data.min(initial=0.0) < 0.0:
            raise ContractViolationError("distance matrix has negative entries")
        ids = tuple(str(i) for i in self.ids) or tuple(str(i) for i in range(data.shape[0]))
        if len(ids) != data.shape[0]:
            raise ContractViolationError(f"{len(ids)} ids for a {data.shape[0]}x{data.shape[0]} matrix")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "ids", ids)

    @property
    def k(self):
        return self.data.shape[0]

    def to_csv(self, path):
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        frame = pd.DataFrame(self.data, index=list(self.ids), columns=list(self.ids))
        frame.to_csv(path, float_format="%.17g", index=False)

    def to_dict(self):
        return {"kind": self.kind, "ids": list(self.ids), "data": self.data.tolist()}

    @classmethod
    def from_dict(cls, payload):
        return cls(kind=payload["kind"], data=np.array(payload["data"]), ids=tuple(payload["ids"]))

    def to_json(self, path, **extra):
        write_json({**self.to_dict(), **extra}, path)

    @classmethod
    def from_json(cls, path):
        return cls.from_dict(read_json(path))


def mirror_upper(upper):
    """Copy the strict upper triangle onto the lower one so the result is exactly symmetric."""
    out = np.triu(upper, k=1)
    return out + out.T
