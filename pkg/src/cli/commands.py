import json
import os

from loguru import logger

from src.data import write_dataset_csv, write_item_files
from src.embedding import read_embedding, write_embedding
from src.errors import MissingLabelError, MtsError, ValidationError
from src.evaluation import EvalReport
from src.plot import render_scatter, write_svg
from src.utils import write_json

from .config import METHODS
from .pipeline import MtsnePipeline


def _artifact_paths(out, method):
    return (
        os.path.join(out, f"{method}_embedding.csv"),
        os.path.join(out, f"{method}_embedding.json"),
        os.path.join(out, f"{method}.svg"),
    )


def _write_run(pipeline, method, embedding):
    cfg = pipeline.config
    csv_path, sidecar_path, svg_path = _artifact_paths(cfg.out, method)
    fields = pipeline.annotation_fields()
    write_embedding(
        embedding,
        csv_path,
        sidecar_path,
        run_config=cfg.to_dict(),
        preprocess=pipeline.report.to_dict(),
        annotation_fields=fields,
    )
    write_svg(render_scatter(embedding, cfg.plot_options(title=method), fields), svg_path)


def cmd_preprocess(config, progress=True):
    """Normalize and segment the input; write the long CSV, one file per item and the report."""
    pipeline = MtsnePipeline(config, progress=progress)
    dataset, report = pipeline.preprocess()
    write_dataset_csv(dataset, os.path.join(config.out, "preprocessed.csv"))
    write_item_files(dataset, os.path.join(config.out, "items"))
    write_json(report.to_dict(), os.path.join(config.out, "preprocess_report.json"))
    logger.info(f"Saved preprocessing report to {os.path.join(config.out, 'preprocess_report.json')}")
    return 0


def cmd_embed(config, progress=True):
    pipeline = MtsnePipeline(config, progress=progress)
    pipeline.preprocess()
    embedding = pipeline.embed(config.method)
    pipeline.summary(embedding)
    _write_run(pipeline, config.method, embedding)
    return 0


def cmd_compare(config, progress=True):
    """
    Run every method with the shared seed and evaluate each. A failing
    method gets a report with its error; the exit code is 0 as soon as one
    method succeeds.
    """
    pipeline = MtsnePipeline(config, progress=progress)
    dataset, _ = pipeline.preprocess()

    unlabeled = [item_id for item_id, label in zip(dataset.ids, dataset.labels) if label in (None, "")]
    reports, failures = [], []
    for method in METHODS:
        try:
            if unlabeled:
                raise MissingLabelError(
                    f"{len(unlabeled)} item(s) have no label, e.g. '{unlabeled[0]}'"
                )
            embedding = pipeline.embed(method)
            _write_run(pipeline, method, embedding)
            reports.append(pipeline.evaluate(method, embedding))
        except MtsError as e:
            where = getattr(e, "stage", "evaluation")
            logger.error(f"{method} failed during {where}: {e}")
            failures.append(e)
            reports.append(EvalReport(method=method, k_neighbors=config.k_neighbors, seed=config.seed, error=str(e)))

    payload = [report.to_dict() for report in reports]
    path = os.path.join(config.out, "compare.json")
    write_json(payload, path)
    logger.info(f"Saved comparison of {len(reports)} methods to {path}")
    print(json.dumps(payload, indent=2, sort_keys=True))

    if len(failures) == len(METHODS):
        return max(e.exit_code for e in failures)
    return 0


def cmd_render(config, progress=True):
    """Re-plot a saved embedding CSV; the sidecar next to it supplies annotation fields."""
    if not config.input:
        raise ValidationError("--input must name an embedding CSV")
    stem, _ = os.path.splitext(config.input)
    embedding, sidecar = read_embedding(config.input, f"{stem}.json")
    if config.out.endswith(".svg"):
        svg_path = config.out
        os.makedirs(os.path.dirname(os.path.abspath(svg_path)), exist_ok=True)
    else:
        os.makedirs(config.out, exist_ok=True)
        svg_path = os.path.join(config.out, f"{os.path.basename(stem)}.svg")
    fields = sidecar.get("annotation_fields", {})
    options = config.plot_options(title=config.title or embedding.method)
    write_svg(render_scatter(embedding, options, fields), svg_path)
    return 0


COMMANDS = {
    "preprocess": cmd_preprocess,
    "embed": cmd_embed,
    "compare": cmd_compare,
    "render": cmd_render,
}
