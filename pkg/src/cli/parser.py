"""Argument parser of the ``mixgraph`` command line.

Every subcommand only accepts the flags that apply to it, so a flag given
to the wrong subcommand (``fit-mgm --lags 1``) is a usage error.
"""

import argparse
from typing import List, Union

PROG = "mixgraph"

SUBCOMMANDS = (
    "fit-mgm",
    "fit-mvar",
    "fit-tvmgm",
    "fit-tvmvar",
    "sample",
    "predict",
    "bwselect",
    "export-graph",
)


def int_list(text: str) -> List[int]:
    """Parse a comma separated list of integers."""
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def float_list(text: str) -> List[float]:
    """Parse a comma separated list of numbers."""
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}")


def estpoints_arg(text: str) -> Union[int, List[float]]:
    """A count of equally spaced points, or an explicit comma separated list."""
    if "," not in text:
        try:
            return int(text)
        except ValueError:
            pass
    return float_list(text)


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _runtime(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Worker threads for nodewise fits (default: all cores); results do not depend on it",
    )


def _data(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", required=True, help="CSV data file with a header row")
    parser.add_argument("--schema", required=True, help="JSON schema describing the data columns")


def _selection(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("tuning")
    group.add_argument("--lambda-sel", choices=["cv", "ebic"], default="cv", help="Lambda selection method")
    group.add_argument("--lambda-folds", type=int, default=10, help="Cross-validation folds")
    group.add_argument("--lambda-gam", type=float, default=0.25, help="EBIC hyperparameter gamma")
    group.add_argument("--alpha-seq", type=float_list, default=[1.0], help="Elastic-net alphas, comma separated")
    group.add_argument("--threshold", choices=["lw", "none"], default="lw", help="Post-selection threshold")
    group.add_argument("--n-lambda", type=int, default=None, help="Length of the lambda path")
    group.add_argument("--seed", type=int, default=1, help="Seed of the fold assignment")


def _structure(parser: argparse.ArgumentParser, with_k: bool, with_lags: bool) -> None:
    # None marks an absent --k / --rule-reg
    group = parser.add_argument_group("model")
    if with_k:
        group.add_argument("--k", type=int, default=None, help="Maximal factor order (default: 2)")
        group.add_argument("--rule-reg", choices=["and", "or"], default=None, help="Combination rule (default: and)")
    if with_lags:
        group.add_argument("--lags", type=int_list, default=None, help="Lag set, comma separated")
    group.add_argument("--overparameterize", action="store_true", help="One indicator per category")
    group.add_argument("--binary-sign", action="store_true", help="Report signs for binary variables")


def _timevarying(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("time-varying")
    group.add_argument("--bandwidth", type=float, required=True, help="Gaussian kernel bandwidth")
    group.add_argument("--estpoints", type=estpoints_arg, default=20, help="Count or comma separated list")


def build_parser() -> argparse.ArgumentParser:
    """Build the command line parser."""
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Estimate, sample and evaluate (time-varying) mixed graphical and mixed VAR models",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    for name, k, lags, tv in (
        ("fit-mgm", True, False, False),
        ("fit-mvar", False, True, False),
        ("fit-tvmgm", True, False, True),
        ("fit-tvmvar", False, True, True),
    ):
        sub = subparsers.add_parser(name, help=f"Estimate a {name[4:]} model and write a fit document")
        _data(sub)
        sub.add_argument("--out", required=True, help="Fit document to write")
        _structure(sub, with_k=k, with_lags=lags)
        _selection(sub)
        if tv:
            _timevarying(sub)
        _runtime(sub)

    sample = subparsers.add_parser("sample", help="Draw a dataset from a model specification")
    sample.add_argument("--model", required=True, help="JSON sampling specification")
    sample.add_argument("--n", type=positive_int, default=None, help="Rows to draw (default: one per model)")
    sample.add_argument("--seed", type=int, default=1, help="Random seed")
    sample.add_argument("--out", required=True, help="CSV file to write; the schema goes next to it")
    _runtime(sample)

    predict = subparsers.add_parser("predict", help="Predict every variable from the others")
    predict.add_argument("--model", required=True, help="Fit document")
    _data(predict)
    predict.add_argument("--tv-method", choices=["weighted", "closest"], default="weighted")
    predict.add_argument("--out", required=True, help="CSV file of predictions; errors go to <stem>.errors.csv")
    _runtime(predict)

    bwselect = subparsers.add_parser("bwselect", help="Choose the bandwidth of a time-varying model")
    _data(bwselect)
    bwselect.add_argument("--model-type", choices=["mgm", "mvar"], required=True)
    bwselect.add_argument("--bw-seq", type=float_list, required=True, help="Candidate bandwidths")
    bwselect.add_argument("--bw-folds", type=positive_int, default=10, help="Number of folds")
    bwselect.add_argument("--bw-foldsize", type=positive_int, default=10, help="Held-out rows per fold")
    bwselect.add_argument("--out", required=True, help="JSON file of the search outcome")
    _structure(bwselect, with_k=True, with_lags=True)
    _selection(bwselect)
    _runtime(bwselect)

    export = subparsers.add_parser("export-graph", help="Write the edge list (or factor graph) of a fit")
    export.add_argument("--model", required=True, help="Fit document")
    export.add_argument("--estpoint-index", type=int, default=0, help="Estimation point of a time-varying fit")
    export.add_argument("--factor-graph", action="store_true", help="Write the MGM factor graph as JSON")
    export.add_argument("--out", required=True, help="Output file")
    _runtime(export)

    return parser
