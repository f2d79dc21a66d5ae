"""Handcrafted histopathology features and classical classifiers."""

import sys as _sys

from ._core import (
    HistofeatError,
    Model,
    compute_metrics,
    cross_validate,
    decode_gray,
    descriptor_dim,
    descriptors,
    extract,
    fit,
    load_dataset,
    read_feature_csv,
    run_cli,
    stratified_folds,
    write_feature_csv,
    write_png,
)

__all__ = [
    "HistofeatError",
    "Model",
    "compute_metrics",
    "cross_validate",
    "decode_gray",
    "descriptor_dim",
    "descriptors",
    "extract",
    "fit",
    "load_dataset",
    "main",
    "read_feature_csv",
    "run_cli",
    "stratified_folds",
    "write_feature_csv",
    "write_png",
]


def main(argv=None):
    """Console entry point mirroring the `histofeat` executable."""
    code, out, err = run_cli(list(_sys.argv[1:] if argv is None else argv))
    _sys.stdout.write(out)
    _sys.stderr.write(err)
    return code
