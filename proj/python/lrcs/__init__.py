"""Hierarchical low-rank reconstruction of undersampled dynamic MRI.

Images are n x q complex arrays, one column per frame, pixels flattened
column-major (Fortran order) from n1 x n2 frames.
"""

import json

from ._core import (
    ConfigError,
    ContainerError,
    DataError,
    Dataset,
    LrcsError,
    SolverError,
    load_dataset,
    nsmse,
    read_images,
    save_dataset,
    write_images,
)
from . import _core

__all__ = [
    "ConfigError",
    "ContainerError",
    "DataError",
    "Dataset",
    "LrcsError",
    "SolverError",
    "load_dataset",
    "nsmse",
    "read_images",
    "reconstruct",
    "save_dataset",
    "synthesize",
    "write_images",
]


def synthesize(spec=None, **fields):
    """Ground truth, operators and measurements for a dataset spec.

    `spec` is a dict in the `gen-data` JSON format; keyword arguments are
    merged on top of it.
    """
    merged = dict(spec or {})
    merged.update(fields)
    return _core._synthesize(json.dumps(merged))


def reconstruct(data, method="mri1", config=None, with_timing=False, **fields):
    """Runs one reconstruction method on a Dataset.

    Returns (z, report) where z is the n x q estimate and report the decoded
    JSON report. Timing fields are present only with `with_timing=True`.
    """
    merged = dict(config or {})
    merged.update(fields)
    merged["method"] = method
    out = _core._reconstruct(data, json.dumps(merged), with_timing)
    return out["z"], json.loads(out["report"])
