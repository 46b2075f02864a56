from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.errors import ContractViolationError, EmptyInputError, ValidationError


@dataclass(frozen=True)
class MtsItem:
    """One m x n observation matrix: m time-ordered rows, n variables."""

    id: str
    values: np.ndarray
    label: Optional[str] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise ValidationError(
                f"Item '{self.id}' must be a non-empty 2-D matrix, got shape {values.shape}"
            )
        if not np.isfinite(values).all():
            raise ValidationError(f"Item '{self.id}' contains NaN or Inf values")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def m(self):
        return self.values.shape[0]

    @property
    def n(self):
        return self.values.shape[1]


@dataclass(frozen=True)
class MtsDataset:
    items: Tuple[MtsItem, ...]
    variable_names: Tuple[str, ...]

    def __post_init__(self):
        items = tuple(self.items)
        names = tuple(str(name) for name in self.variable_names)
        for item in items:
            if item.n != len(names):
                raise ContractViolationError(
                    f"Item '{item.id}' has {item.n} variables, dataset declares {len(names)}"
                )
        ids = [item.id for item in items]
        if len(set(ids)) != len(ids):
            raise ValidationError("Item ids must be unique within a dataset")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "variable_names", names)

    @property
    def k(self):
        return len(self.items)

    @property
    def n(self):
        return len(self.variable_names)

    @property
    def ids(self):
        return [item.id for item in self.items]

    @property
    def labels(self):
        return [item.label for item in self.items]

    def require_pairs(self):
        """Pairwise operations need at least two items."""
        if self.k < 2:
            raise EmptyInputError(
                f"Pairwise similarity needs at least 2 items, dataset has {self.k}"
            )

    def stacked(self):
        """All items as one (k, m, n) array, or None when item lengths differ."""
        shapes = {item.values.shape for item in self.items}
        if len(shapes) != 1:
            return None
        return np.stack([item.values for item in self.items])


@dataclass(frozen=True)
class PreprocessReport:
    means: List[float]
    stds: List[float]
    zero_variance: int
    per_item: bool = False
    window: Optional[int] = None
    dropped_rows: int = 0
    item_stats: Dict[str, Dict[str, List[float]]] = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)
