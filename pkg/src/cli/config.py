import os
from dataclasses import asdict, dataclass, field, fields
from typing import Dict, List, Optional

from src.data.load import IngestionSchema
from src.embedding.tsne import TsneConfig
from src.errors import InputError, SchemaError, ValidationError
from src.plot.svg import PlotOptions
from src.similarity.eros import WEIGHT_AGGREGATORS
from src.utils import read_json

METHODS = ("mtsne", "tsne-euclidean", "tsne-dtw", "pca")
AFFINITY_SOURCES = ("distance", "direct")
SCHEMA_FLAGS = {
    "id_column": "id_column",
    "label_column": "label_column",
    "time_column": "time_column",
    "variables": "variable_columns",
    "one_item_per_file": "one_item_per_file",
}
TSNE_FIELDS = (
    "perplexity",
    "iterations",
    "learning_rate",
    "momentum_initial",
    "momentum_final",
    "momentum_switch_iter",
    "exaggeration_factor",
    "exaggeration_iters",
    "init_std",
)


@dataclass(frozen=True)
class RunConfig:
    input: Optional[str] = None
    schema: Optional[IngestionSchema] = None
    window: Optional[int] = None
    per_item: bool = False
    skip_normalize: bool = False
    aggregate: str = "mean"
    phase_boundaries: List[int] = field(default_factory=list)
    method: str = "mtsne"
    dim: int = 2
    seed: int = 0
    aggregator: str = "mean"
    affinity_from: str = "distance"
    flatten: bool = False
    band: Optional[int] = None
    perplexity: Optional[float] = None
    iterations: Optional[int] = None
    learning_rate: Optional[float] = None
    momentum_initial: Optional[float] = None
    momentum_final: Optional[float] = None
    momentum_switch_iter: Optional[int] = None
    exaggeration_factor: Optional[float] = None
    exaggeration_iters: Optional[int] = None
    init_std: Optional[float] = None
    gains: bool = False
    k_neighbors: int = 10
    cache: bool = True
    out: str = "output"
    annotate: Optional[str] = None
    azimuth: float = 45.0
    elevation: float = 30.0
    point_radius: float = 4.0
    colors: Dict[str, str] = field(default_factory=dict)
    title: Optional[str] = None

    def validate(self, needs_input=True):
        if needs_input and not self.input:
            raise ValidationError("--input is required")
        if needs_input and self.schema is None:
            raise SchemaError("An ingestion schema is required (--schema or --id-column / --one-item-per-file)")
        if self.method not in METHODS:
            raise ValidationError(f"Unknown method '{self.method}', expected one of {METHODS}")
        if self.dim not in (2, 3):
            raise ValidationError(f"--dim must be 2 or 3, got {self.dim}")
        if self.window is not None and self.window < 1:
            raise ValidationError(f"--window must be a positive integer, got {self.window}")
        if self.aggregator not in WEIGHT_AGGREGATORS:
            raise ValidationError(f"--aggregator must be one of {sorted(WEIGHT_AGGREGATORS)}")
        if self.affinity_from not in AFFINITY_SOURCES:
            raise ValidationError(f"--affinity-from must be one of {AFFINITY_SOURCES}")
        if self.band is not None and self.band < 0:
            raise ValidationError("--band must be non-negative")
        if self.k_neighbors < 1:
            raise ValidationError("--k-neighbors must be positive")
        if self.seed < 0:
            raise ValidationError("--seed must be unsigned")
        if self.phase_boundaries and self.window is None:
            raise ValidationError("--phase-boundaries labels segments and needs --window")
        return self

    def tsne_config(self, k):
        overrides = {name: getattr(self, name) for name in TSNE_FIELDS}
        return TsneConfig.for_size(
            k, output_dim=self.dim, seed=self.seed, use_gains=self.gains, **overrides
        )

    def plot_options(self, title=None):
        return PlotOptions(
            point_radius=self.point_radius,
            color_map=dict(self.colors),
            annotate=self.annotate,
            azimuth=self.azimuth,
            elevation=self.elevation,
            title=title or self.title,
        )

    def to_dict(self):
        payload = asdict(self)
        payload["schema"] = self.schema.to_dict() if self.schema else None
        return payload


def _load_schema(value):
    if value is None or isinstance(value, IngestionSchema):
        return value
    if isinstance(value, dict):
        return value
    if not os.path.exists(value):
        raise InputError(f"Schema file not found: {value}")
    return read_json(value)


def _resolve_schema(cli, file_config):
    payload = {}
    for source in (file_config, cli):
        loaded = _load_schema(source.get("schema"))
        if loaded:
            payload.update(loaded)
        for flag, key in SCHEMA_FLAGS.items():
            if source.get(flag) is not None:
                payload[key] = source[flag]
    if not payload:
        return None
    if isinstance(payload.get("variable_columns"), str):
        payload["variable_columns"] = [
            name.strip() for name in payload["variable_columns"].split(",") if name.strip()
        ]
    return IngestionSchema.from_dict(payload)


def resolve_config(cli, config_path=None):
    """CLI flags override the JSON config file, which overrides built-in defaults."""
    file_config = {}
    if config_path:
        if not os.path.exists(config_path):
            raise InputError(f"Config file not found: {config_path}")
        file_config = {key.replace("-", "_"): value for key, value in read_json(config_path).items()}

    names = {f.name for f in fields(RunConfig)}
    unknown = set(file_config) - names - set(SCHEMA_FLAGS)
    if unknown:
        raise ValidationError(f"Unknown config keys: {sorted(unknown)}")

    values = {}
    for source in (file_config, cli):
        for key, value in source.items():
            if key in names and key != "schema" and value is not None:
                values[key] = value
    values["schema"] = _resolve_schema(cli, file_config)
    if isinstance(values.get("phase_boundaries"), str):
        values["phase_boundaries"] = [int(b) for b in values["phase_boundaries"].split(",") if b.strip()]
    if isinstance(values.get("colors"), str):
        values["colors"] = dict(pair.split("=", 1) for pair in values["colors"].split(",") if "=" in pair)
    return RunConfig(**values)
