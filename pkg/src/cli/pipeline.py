import os
from contextlib import contextmanager

import numpy as np
from loguru import logger

from src.data import (
    aggregate_matrix,
    assign_phase_labels,
    flatten_matrix,
    load_csv,
    preprocess,
    segment,
)
from src.embedding import direct_affinities, pca_project, tsne_embed
from src.errors import MtsError
from src.evaluation import evaluate_embedding
from src.similarity import (
    cache_key,
    cached_matrix,
    dtw_matrix,
    eros_matrix,
    euclidean_matrix,
    similarity_to_distance,
)


@contextmanager
def stage(name):
    """Tag errors raised inside the block with the pipeline stage they came from."""
    try:
        yield
    except MtsError as e:
        if not hasattr(e, "stage"):
            e.stage = name
        raise


def _annotation_value(value):
    return int(value) if float(value).is_integer() else float(value)


class MtsnePipeline:
    """
    Load, preprocess and embed one dataset. Matrices are computed at most
    once per pipeline and, with caching on, once per preprocessed dataset.
    """

    def __init__(self, config, progress=True):
        self.config = config
        self.progress = progress
        self.cache_dir = os.path.join(config.out, "cache") if config.cache else None
        self.raw = None
        self.dataset = None
        self.report = None
        self._matrices = {}
        self._fields = None

    def load_data(self):
        with stage("load"):
            self.raw = load_csv(self.config.input, self.config.schema)
        return self.raw

    def preprocess(self):
        if self.raw is None:
            self.load_data()
        cfg = self.config
        with stage("preprocess"):
            dataset, report = preprocess(
                self.raw, window=cfg.window, per_item=cfg.per_item, normalize=not cfg.skip_normalize
            )
            if cfg.phase_boundaries:
                dataset = assign_phase_labels(dataset, cfg.phase_boundaries)
        self.dataset, self.report = dataset, report
        logger.info(f"Preprocessed dataset: {dataset.k} items x {dataset.n} variables")
        return dataset, report

    def _ready(self):
        if self.dataset is None:
            self.preprocess()
        return self.dataset

    def raw_segments(self):
        """The un-normalized items matching the preprocessed ones, for annotations."""
        if self.raw is None:
            self.load_data()
        return segment(self.raw, self.config.window) if self.config.window else self.raw

    def annotation_fields(self):
        if self._fields is None:
            raw = self.raw_segments()
            aggregates = aggregate_matrix(raw, self.config.aggregate)
            self._fields = {
                item_id: {f"agg{j}": _annotation_value(value) for j, value in enumerate(row)}
                for item_id, row in zip(raw.ids, aggregates)
            }
        return self._fields

    def _cached(self, name, params, build):
        dataset = self._ready()
        if name not in self._matrices:
            key = cache_key(dataset, params)
            self._matrices[name] = cached_matrix(self.cache_dir, name, key, dataset.ids, build)
        return self._matrices[name]

    def eros_similarity(self):
        dataset = self._ready()
        aggregator = self.config.aggregator
        with stage("similarity"):
            return self._cached(
                f"eros-{aggregator}",
                {"matrix": "eros", "aggregator": aggregator},
                lambda: eros_matrix(dataset, aggregator=aggregator, progress=self.progress),
            )

    def dtw_distances(self):
        dataset = self._ready()
        band = self.config.band
        with stage("similarity"):
            name = "dtw" if band is None else f"dtw-band{band}"
            return self._cached(
                name, {"matrix": "dtw", "band": band}, lambda: dtw_matrix(dataset, band=band)
            )

    def feature_vectors(self, flatten=False):
        dataset = self._ready()
        with stage("features"):
            if flatten:
                return flatten_matrix(dataset)
            return aggregate_matrix(dataset, self.config.aggregate)

    def high_dim(self, method):
        """The distance matrix of the space `method` embeds."""
        dataset = self._ready()
        if method == "mtsne":
            with stage("similarity"):
                return similarity_to_distance(self.eros_similarity())
        if method == "tsne-dtw":
            return self.dtw_distances()
        flatten = self.config.flatten and method == "tsne-euclidean"
        with stage("similarity"):
            return euclidean_matrix(self.feature_vectors(flatten), ids=dataset.ids)

    def embed(self, method):
        dataset = self._ready()
        cfg = self.config
        with stage("dataset"):
            dataset.require_pairs()
        if cfg.flatten and method != "tsne-euclidean":
            logger.warning(f"--flatten only applies to tsne-euclidean, ignored for {method}")

        if method == "pca":
            with stage("projection"):
                embedding = pca_project(
                    self.feature_vectors(), d=cfg.dim, ids=dataset.ids, labels=dataset.labels
                )
            return embedding

        distances = self.high_dim(method)
        affinities = None
        if cfg.affinity_from == "direct":
            if method == "mtsne":
                with stage("affinity"):
                    affinities = direct_affinities(self.eros_similarity())
            else:
                logger.warning(f"--affinity-from direct needs a similarity matrix, using distances for {method}")
        with stage("projection"):
            tsne_config = cfg.tsne_config(dataset.k)
            return tsne_embed(
                distances,
                tsne_config,
                affinities=affinities,
                labels=dataset.labels,
                method=method,
                progress=self.progress,
            )

    def evaluate(self, method, embedding):
        with stage("evaluation"):
            return evaluate_embedding(
                method, embedding, self.high_dim(method), self.config.k_neighbors, self.config.seed
            )

    def summary(self, embedding):
        """Per-dimension spread of an embedding, logged after each run."""
        spread = np.ptp(embedding.Y, axis=0)
        logger.info(f"{embedding.method}: {embedding.k} points, coordinate ranges {np.round(spread, 4).tolist()}")
        return spread
