import glob
import os
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from src.data.dataset import MtsDataset, MtsItem
from src.errors import EmptyInputError, InputError, ParseError, SchemaError, ValidationError

FLOAT_FORMAT = "%.17g"


@dataclass(frozen=True)
class IngestionSchema:
    id_column: Optional[str] = None
    label_column: Optional[str] = None
    time_column: Optional[str] = None
    variable_columns: Optional[Tuple[str, ...]] = None
    one_item_per_file: bool = False

    def __post_init__(self):
        if self.variable_columns is not None:
            object.__setattr__(self, "variable_columns", tuple(self.variable_columns))
        if not self.one_item_per_file and not self.id_column:
            raise SchemaError(
                "Schema needs an id column unless it declares one item per file"
            )

    @classmethod
    def from_dict(cls, payload):
        known = {"id_column", "label_column", "time_column", "variable_columns", "one_item_per_file"}
        unknown = set(payload) - known
        if unknown:
            raise SchemaError(f"Unknown schema keys: {sorted(unknown)}")
        return cls(**payload)

    def to_dict(self):
        payload = asdict(self)
        if self.variable_columns is not None:
            payload["variable_columns"] = list(self.variable_columns)
        return payload


def _csv_files(path):
    if os.path.isdir(path):
        files = sorted(glob.glob(os.path.join(path, "**", "*.csv"), recursive=True))
        if not files:
            raise EmptyInputError(f"empty input: no CSV files found under {path}")
        return files
    if not os.path.exists(path):
        raise InputError(f"Input file not found: {path}")
    return [path]


def _read_frame(path):
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise EmptyInputError(f"empty input: {path}")
    if frame.empty:
        raise EmptyInputError(f"empty input: {path} has a header but no rows")
    frame.columns = [str(col).strip() for col in frame.columns]
    return frame


def _variable_columns(frame, schema, path):
    reserved = [schema.id_column, schema.label_column, schema.time_column]
    for col in reserved + list(schema.variable_columns or ()):
        if col and col not in frame.columns:
            raise SchemaError(f"Column '{col}' not found in {path}")
    if schema.variable_columns is not None:
        variables = list(schema.variable_columns)
    else:
        variables = [col for col in frame.columns if col not in reserved]
    if not variables:
        raise SchemaError(f"No variable columns left in {path}")
    return variables


def _parse_values(frame, variables, path):
    """
    Convert the variable block to float64. Errors cite the 1-based data row
    and the 1-based variable column.
    """
    raw = frame[variables].to_numpy(dtype=object)
    try:
        values = raw.astype(np.float64)
    except ValueError:
        for row, col in np.ndindex(raw.shape):
            cell = raw[row, col]
            if str(cell).strip() == "":
                raise ValidationError(
                    f"Missing value in {path} at row {row + 1}, variable column {col + 1} ('{variables[col]}')"
                )
            try:
                float(cell)
            except ValueError:
                raise ParseError(
                    f"Non-numeric value '{cell}' in {path} at ({row + 1}, {col + 1}) ('{variables[col]}')",
                    row=row + 1,
                    column=col + 1,
                )
        raise
    bad = np.argwhere(~np.isfinite(values))
    if len(bad):
        row, col = bad[0]
        raise ValidationError(
            f"NaN/Inf value in {path} at ({row + 1}, {col + 1}) ('{variables[col]}')"
        )
    return values


def _time_keys(series):
    """Sortable keys for a time column: numeric first, then datetime, else text."""
    try:
        return pd.to_numeric(series).to_numpy()
    except (ValueError, TypeError):
        pass
    try:
        return pd.to_datetime(series).to_numpy()
    except (ValueError, TypeError):
        return series.to_numpy(dtype=str)


def _item_label(frame, rows, schema, item_id):
    if not schema.label_column:
        return None
    labels = [lab for lab in pd.unique(frame[schema.label_column].to_numpy()[rows]) if lab != ""]
    if len(labels) > 1:
        raise SchemaError(f"Item '{item_id}' has more than one label: {labels}")
    return str(labels[0]) if labels else None


def _frame_items(frame, schema, path):
    variables = _variable_columns(frame, schema, path)
    values = _parse_values(frame, variables, path)

    if schema.one_item_per_file:
        groups = [(os.path.splitext(os.path.basename(path))[0], np.arange(len(frame)))]
    else:
        ids = frame[schema.id_column].to_numpy(dtype=str)
        groups = [(item_id, np.flatnonzero(ids == item_id)) for item_id in pd.unique(ids)]

    time_keys = _time_keys(frame[schema.time_column]) if schema.time_column else None
    items = []
    for item_id, rows in groups:
        if time_keys is not None:
            keys = time_keys[rows]
            order = np.argsort(keys, kind="stable")
            rows, keys = rows[order], keys[order]
            keep = np.ones(len(rows), dtype=bool)
            keep[1:] = keys[1:] != keys[:-1]
            if not keep.all():
                logger.warning(
                    f"Item '{item_id}' in {path}: dropped {int((~keep).sum())} duplicated timestamps"
                )
            rows = rows[keep]
        label = _item_label(frame, rows, schema, item_id)
        items.append(MtsItem(id=str(item_id), values=values[rows], label=label))
    return variables, items


def _load_file(path, schema):
    return _frame_items(_read_frame(path), schema, path)


def load_csv(path, schema):
    """
    Read one CSV file, or every CSV below a directory in sorted path order,
    into an MtsDataset.
    """
    files = _csv_files(path)
    results = [_load_file(f, schema) for f in files]

    variable_names = results[0][0]
    items = []
    for file_path, (variables, file_items) in zip(files, results):
        if variables != variable_names:
            raise SchemaError(
                f"{file_path} has variables {variables}, expected {variable_names}"
            )
        items.extend(file_items)

    dataset = MtsDataset(items=tuple(items), variable_names=tuple(variable_names))
    logger.info(
        f"Loaded {len(files)} file(s) from {path}: {dataset.k} items, {dataset.n} variables"
    )
    return dataset


def dataset_frame(dataset, id_column="id", label_column="label", time_column="t"):
    """Long-format frame in the ingestion shape: id, label, t, variables..."""
    frames = []
    for item in dataset.items:
        frame = pd.DataFrame(item.values, columns=list(dataset.variable_names))
        frame.insert(0, time_column, np.arange(item.m))
        frame.insert(0, label_column, item.label if item.label is not None else "")
        frame.insert(0, id_column, item.id)
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)


def write_dataset_csv(dataset, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    dataset_frame(dataset).to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Saved dataset ({dataset.k} items) to {path}")


def write_item_files(dataset, directory):
    os.makedirs(directory, exist_ok=True)
    for item in dataset.items:
        frame = pd.DataFrame(item.values, columns=list(dataset.variable_names))
        if item.label is not None:
            frame.insert(0, "label", item.label)
        frame.to_csv(os.path.join(directory, f"{item.id}.csv"), index=False, float_format=FLOAT_FORMAT)
    logger.info(f"Saved {dataset.k} item files to {directory}")
