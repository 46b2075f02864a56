import argparse

from .config import AFFINITY_SOURCES, METHODS


def _add_common(parser):
    parser.add_argument("--config", help="JSON file with default values for any flag")
    parser.add_argument("--out", help="output directory (default: output)")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="debug logging")
    verbosity.add_argument("--quiet", action="store_true", help="warnings only, no progress bars")


def _add_input(parser):
    group = parser.add_argument_group("input")
    group.add_argument("--input", help="CSV file or directory of CSV files")
    group.add_argument("--schema", help="JSON ingestion schema")
    group.add_argument("--id-column", help="column holding the item id")
    group.add_argument("--label-column", help="column holding the item label")
    group.add_argument("--time-column", help="column used to order rows within an item")
    group.add_argument("--variables", help="comma-separated variable columns (default: all others)")
    group.add_argument(
        "--one-item-per-file", action="store_true", default=None, help="each CSV file is one item named by its stem"
    )

    group = parser.add_argument_group("preprocessing")
    group.add_argument("--window", type=int, help="segment items into windows of this many rows")
    group.add_argument("--per-item", action="store_true", default=None, help="normalize each item on its own")
    group.add_argument("--skip-normalize", action="store_true", default=None, help="skip mean-centering and scaling")
    group.add_argument(
        "--aggregate", help="per-variable aggregators (sum, mean, max, min), one name or a comma list"
    )
    group.add_argument(
        "--phase-boundaries", help="comma-separated segment indices; labels segments before/after each"
    )


def _add_plot(parser):
    group = parser.add_argument_group("plot")
    group.add_argument("--annotate", help="per-point text template, fields {id} {label} {agg0}..")
    group.add_argument("--azimuth", type=float, help="camera azimuth in degrees for 3-D plots")
    group.add_argument("--elevation", type=float, help="camera elevation in degrees for 3-D plots")
    group.add_argument("--point-radius", type=float, help="circle radius in pixels")
    group.add_argument("--colors", help="label=color pairs, comma-separated")
    group.add_argument("--title", help="plot title")


def _add_embedding(parser):
    group = parser.add_argument_group("embedding")
    group.add_argument("--dim", type=int, choices=(2, 3), help="output dimension")
    group.add_argument("--seed", type=int, help="random seed")
    group.add_argument("--perplexity", type=float)
    group.add_argument("--iterations", type=int)
    group.add_argument("--learning-rate", type=float)
    group.add_argument("--momentum-initial", type=float)
    group.add_argument("--momentum-final", type=float)
    group.add_argument("--momentum-switch-iter", type=int)
    group.add_argument("--exaggeration", dest="exaggeration_factor", type=float)
    group.add_argument("--exaggeration-iters", type=int)
    group.add_argument("--init-std", type=float)
    group.add_argument("--gains", action="store_true", default=None, help="adaptive per-coordinate gains")
    group.add_argument("--aggregator", choices=("mean", "min", "max"), help="EROS eigenvalue weight aggregator")
    group.add_argument("--affinity-from", choices=AFFINITY_SOURCES)
    group.add_argument("--flatten", action="store_true", default=None, help="tsne-euclidean on flattened items")
    group.add_argument("--band", type=int, help="Sakoe-Chiba band for DTW")
    group.add_argument("--no-cache", dest="cache", action="store_false", default=None)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mtsne",
        description="Embed multivariate time series with EROS similarity and t-SNE.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    preprocess = subparsers.add_parser("preprocess", help="normalize and segment a dataset")
    _add_common(preprocess)
    _add_input(preprocess)

    embed = subparsers.add_parser("embed", help="embed a dataset with one method")
    _add_common(embed)
    _add_input(embed)
    embed.add_argument("--method", choices=METHODS)
    _add_embedding(embed)
    _add_plot(embed)

    compare = subparsers.add_parser("compare", help="embed with every method and score each")
    _add_common(compare)
    _add_input(compare)
    _add_embedding(compare)
    compare.add_argument("--k-neighbors", type=int, help="neighborhood size for the metrics")
    _add_plot(compare)

    render = subparsers.add_parser("render", help="plot a saved embedding CSV")
    _add_common(render)
    render.add_argument("--input", help="embedding CSV written by embed or compare")
    _add_plot(render)
    return parser
