import os
from dataclasses import dataclass
from typing import Any, Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from src.errors import InputError, ValidationError
from src.utils import read_json, write_json


@dataclass(frozen=True)
class Embedding:
    """k x d coordinates plus the run that produced them."""

    Y: np.ndarray
    ids: Tuple[str, ...]
    labels: Tuple[Optional[str], ...]
    method: str
    cost_trace: Tuple[float, ...] = ()
    config: Any = None
    explained_variance: Optional[np.ndarray] = None
    components: Optional[np.ndarray] = None

    def __post_init__(self):
        Y = np.asarray(self.Y, dtype=np.float64)
        if Y.ndim != 2 or Y.shape[1] not in (2, 3):
            raise ValidationError(f"Embedding must be k x 2 or k x 3, got {Y.shape}")
        if not np.isfinite(Y).all():
            raise ValidationError("Embedding contains non-finite coordinates")
        if len(self.ids) != Y.shape[0] or len(self.labels) != Y.shape[0]:
            raise ValidationError("ids and labels must have one entry per point")
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "ids", tuple(str(i) for i in self.ids))
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def k(self):
        return self.Y.shape[0]

    @property
    def d(self):
        return self.Y.shape[1]

    @property
    def final_cost(self):
        return self.cost_trace[-1] if self.cost_trace else None

    def with_labels(self, labels):
        return Embedding(
            Y=self.Y,
            ids=self.ids,
            labels=tuple(labels),
            method=self.method,
            cost_trace=self.cost_trace,
            config=self.config,
            explained_variance=self.explained_variance,
            components=self.components,
        )

    def sidecar(self):
        config = self.config.to_dict() if hasattr(self.config, "to_dict") else self.config
        return {
            "method": self.method,
            "config": config,
            "seed": config.get("seed") if isinstance(config, dict) else None,
            "final_cost": self.final_cost,
            "cost_trace": list(self.cost_trace),
            "explained_variance": (
                None if self.explained_variance is None else np.asarray(self.explained_variance).tolist()
            ),
        }


def embedding_frame(embedding):
    frame = pd.DataFrame(embedding.Y, columns=[f"y{i + 1}" for i in range(embedding.d)])
    frame.insert(0, "label", ["" if label is None else label for label in embedding.labels])
    frame.insert(0, "id", list(embedding.ids))
    return frame


def write_embedding(embedding, csv_path, sidecar_path, **extra):
    """CSV (id, label, y1..yd) plus a sidecar JSON with config, seed, final cost and cost trace."""
    os.makedirs(os.path.dirname(os.path.abspath(csv_path)), exist_ok=True)
    embedding_frame(embedding).to_csv(csv_path, index=False, float_format="%.17g")
    write_json({**embedding.sidecar(), **extra}, sidecar_path)
    logger.info(f"Saved {embedding.method} embedding to {csv_path} (sidecar {sidecar_path})")


def read_embedding(csv_path, sidecar_path=None):
    if not os.path.exists(csv_path):
        raise InputError(f"Embedding file not found: {csv_path}")
    frame = pd.read_csv(csv_path, dtype={"id": str, "label": str}, keep_default_na=False)
    coords = [col for col in frame.columns if col.startswith("y")]
    sidecar = read_json(sidecar_path) if sidecar_path and os.path.exists(sidecar_path) else {}
    return Embedding(
        Y=frame[coords].to_numpy(dtype=np.float64),
        ids=tuple(frame["id"]),
        labels=tuple(label if label != "" else None for label in frame["label"]),
        method=sidecar.get("method", "unknown"),
        cost_trace=tuple(sidecar.get("cost_trace", ())),
        config=sidecar.get("config"),
    ), sidecar
