"""Subcommand handlers of the command line.

Each handler takes the parsed arguments, the settings and the echoed
reproduction command, and writes its output files.
"""

import argparse
from pathlib import Path
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd
import structlog

from core.config import Settings
from core.exceptions import UsageError
from dataio.export import export_edges, export_factor_graph
from dataio.loader import load_dataset, write_csv, write_dataset
from dataio.serialization import load_fit, load_sampling_spec, save_fit
from estimation.mgm import fit_mgm
from estimation.mvar import fit_mvar
from models.io import BandwidthDocument, MgmSampling
from models.options import MgmOptions, MvarOptions
from models.prediction import NodeError, PredictionResult
from models.selection import SelectionSpec
from models.variables import Dataset
from prediction.metrics import CATEGORICAL_METRICS, CONTINUOUS_METRICS
from prediction.predictor import predict
from sampling.gibbs import sample_mgm, sample_tvmgm
from sampling.var import sample_mvar, sample_tvmvar
from timevarying.bandwidth import bw_select
from timevarying.estimator import fit_tvmgm, fit_tvmvar

logger = structlog.get_logger(__name__)

Handler = Callable[[argparse.Namespace, Settings, str], None]

METRIC_COLUMNS = list(CONTINUOUS_METRICS) + list(CATEGORICAL_METRICS)


def selection_spec(args: argparse.Namespace) -> SelectionSpec:
    return SelectionSpec(
        method=args.lambda_sel,
        gamma=args.lambda_gam,
        folds=args.lambda_folds,
        alpha_seq=args.alpha_seq,
        threshold_mode=args.threshold,
        seed=args.seed,
        n_lambda=args.n_lambda,
    )


def mgm_options(args: argparse.Namespace) -> MgmOptions:
    return MgmOptions(
        k=2 if args.k is None else args.k,
        rule=args.rule_reg or "and",
        overparameterize=args.overparameterize,
        binary_sign=args.binary_sign,
        selection=selection_spec(args),
    )


def mvar_options(args: argparse.Namespace) -> MvarOptions:
    return MvarOptions(
        overparameterize=args.overparameterize,
        binary_sign=args.binary_sign,
        selection=selection_spec(args),
    )


def required_lags(args: argparse.Namespace) -> List[int]:
    if not args.lags:
        raise UsageError(f"{args.command} requires --lags")
    return args.lags


def fit_command(args: argparse.Namespace, settings: Settings, command: str) -> None:
    """fit-mgm, fit-mvar, fit-tvmgm and fit-tvmvar."""
    data = load_dataset(args.data, args.schema)
    if args.command == "fit-mgm":
        fit = fit_mgm(data, mgm_options(args), settings=settings, n_jobs=args.threads)
    elif args.command == "fit-mvar":
        fit = fit_mvar(data, required_lags(args), mvar_options(args), settings=settings, n_jobs=args.threads)
    elif args.command == "fit-tvmgm":
        fit = fit_tvmgm(
            data, mgm_options(args), args.estpoints, args.bandwidth, settings=settings, n_jobs=args.threads
        )
    else:
        fit = fit_tvmvar(
            data,
            required_lags(args),
            mvar_options(args),
            args.estpoints,
            args.bandwidth,
            settings=settings,
            n_jobs=args.threads,
        )
    save_fit(fit, args.out, command, settings)


def _named(data: Dataset, names: Optional[List[str]]) -> Dataset:
    if names is None:
        return data
    return Dataset(values=data.values, specs=data.specs, names=names)


def sample_command(args: argparse.Namespace, settings: Settings, command: str) -> None:
    """Draw from a stationary or time-varying specification."""
    spec = load_sampling_spec(args.model)
    if spec.models is not None:
        n = len(spec.models) if args.n is None else args.n
        if isinstance(spec, MgmSampling):
            data = sample_tvmgm(spec.models, n, args.seed, spec.burn_in, settings=settings)
        else:
            data = sample_tvmvar(spec.models, n, args.seed, settings=settings)
    else:
        if args.n is None:
            raise UsageError("sampling a stationary model requires --n")
        if isinstance(spec, MgmSampling):
            data = sample_mgm(spec.model, args.n, args.seed, spec.burn_in, spec.thin, settings=settings)
        else:
            data = sample_mvar(spec.model, args.n, args.seed, settings=settings)
    write_dataset(_named(data, spec.names), args.out, command)


def prediction_frame(result: PredictionResult, data: Dataset) -> pd.DataFrame:
    """Predicted values in the input coding plus class probabilities."""
    frame = pd.DataFrame({"row": np.arange(data.n)})
    for j, (name, spec) in enumerate(zip(data.column_names, data.specs)):
        column = result.predicted[:, j]
        if spec.is_categorical:
            labels = data.labels(j)
            frame[name] = [labels[int(v)] if np.isfinite(v) else "" for v in column]
            for c, label in enumerate(labels):
                frame[f"{name}:p{label}"] = result.probabilities[j][:, c]
        else:
            frame[name] = column
    return frame


def _error_rows(errors: List[NodeError], estpoint: Optional[int]) -> List[Dict[str, object]]:
    return [
        {"estpoint": estpoint, "variable": e.name, **{m: e.metrics.get(m) for m in METRIC_COLUMNS}}
        for e in errors
    ]


def errors_frame(result: PredictionResult) -> pd.DataFrame:
    """Overall nodewise errors, then the per-estimation-point errors."""
    rows = _error_rows(result.errors, None)
    for index, point_errors in enumerate(result.tv_errors or []):
        rows.extend(_error_rows(point_errors, index))
    frame = pd.DataFrame(rows, columns=["estpoint", "variable"] + METRIC_COLUMNS)
    frame["estpoint"] = frame["estpoint"].astype("Int64")
    return frame


def predict_command(args: argparse.Namespace, settings: Settings, command: str) -> None:
    fit = load_fit(args.model, settings)
    data = load_dataset(args.data, args.schema)
    result = predict(fit, data, args.tv_method, settings=settings)
    out = Path(args.out)
    write_csv(prediction_frame(result, data), out, command)
    write_csv(errors_frame(result), out.with_name(f"{out.stem}.errors.csv"), command)


def bwselect_command(args: argparse.Namespace, settings: Settings, command: str) -> None:
    data = load_dataset(args.data, args.schema)
    if args.model_type == "mgm":
        if args.lags:
            raise UsageError("--lags only applies to --model-type mvar")
        options, lags = mgm_options(args), None
    else:
        if args.k is not None or args.rule_reg is not None:
            raise UsageError("--k and --rule-reg only apply to --model-type mgm")
        options, lags = mvar_options(args), required_lags(args)
    selection = bw_select(
        data,
        args.model_type,
        args.bw_seq,
        bw_folds=args.bw_folds,
        bw_foldsize=args.bw_foldsize,
        options=options,
        lags=lags,
        settings=settings,
        n_jobs=args.threads,
    )
    document = BandwidthDocument(schema_version=settings.schema_version, command=command, selection=selection)
    Path(args.out).write_text(document.model_dump_json(indent=2) + "\n", encoding="utf-8")


def export_command(args: argparse.Namespace, settings: Settings, command: str) -> None:
    fit = load_fit(args.model, settings)
    if args.factor_graph:
        export_factor_graph(fit, args.out, args.estpoint_index, command)
    else:
        export_edges(fit, args.out, args.estpoint_index, command)


HANDLERS: Dict[str, Handler] = {
    "fit-mgm": fit_command,
    "fit-mvar": fit_command,
    "fit-tvmgm": fit_command,
    "fit-tvmvar": fit_command,
    "sample": sample_command,
    "predict": predict_command,
    "bwselect": bwselect_command,
    "export-graph": export_command,
}
