#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
Default settings for loewnerlab and a JSON loader that merges user overrides.

The nested dictionary mirrors the package layout: one block per module plus
the harness block, which also lists the scenarios a harness run executes.
"""

import copy
import json
from typing import Any, Dict, Optional

import numpy as np

DEFAULT_CONFIG: Dict[str, Any] = {
    "seed": 42,
    "tolerances": {
        "swallow": 1e-12,   # distance to the driving value on ℝ
        "clamp": 1e-12,     # Im(output) >= -clamp is clamped to 0
        "boundary": 1e-12,  # |Im w| below this counts as on ℝ
    },
    "forward": {
        "step_kind": "vertical",
        "tip_offset": 0.1,
    },
    "newton": {
        "max_iter": 60,
        "tol": 1e-14,
        "max_halvings": 30,
    },
    "inverse": {
        "step_kind": "tilted",
    },
    "whitney": {
        "jmin_offset": 24,
        "adaptive_jmin": -7,
    },
    "metric": {
        "samples": 1000,
        "per_height_samples": 2001,
        "heights": [1e-3, 2.2e-3, 4.6e-3, 1e-2, 2.2e-2, 4.6e-2, 1e-1],
        "internal_resolution": 1e-2,
        "qh_resolution": 1e-2,
    },
    "modulus": {
        "grid_n": 256,
        "cg_tol": 1e-10,
        "cg_maxiter": 20000,
    },
    "harness": {
        "n_jobs": 1,
        "stability_tol": 0.25,
        "C0_max": 50.0,
        "lip_scan_factor": 4.0,
        "weak_lip_c": 2.0 * np.sqrt(2.0),
        "weak_lip_pass_rate": 0.95,
        "brownian": {"kappa": 1.0, "T": 0.25, "n": 2 ** 14, "n_seeds": 100},
        "slit_resolutions": [200, 400],
        "deltas_log2": list(range(3, 13)),
        "scenarios": [
            {"suite": "slit", "family": "segment", "angle": 0.5},
            {"suite": "slit", "family": "segment", "angle": 1.0 / 3.0},
            {"suite": "slit", "family": "log-spiral"},
            {"suite": "johnprop", "driving": "constant", "c": 0.0},
            {"suite": "johnprop", "family": "hugging"},
            {"suite": "nonslit", "driving": "constant", "c": 0.0},
            {"suite": "nonslit", "family": "hugging"},
            {"suite": "subinv", "family": "segment", "angle": 0.5},
            {"suite": "brownian"},
        ],
    },
}


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def load_config(path: Optional[str] = None,
                overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """
    Load a configuration dictionary.

    Args:
        path (Optional[str]): JSON file (local path or s3:// URI). When None the
            defaults are returned.
        overrides (Optional[Dict[str, Any]]): Extra values merged last.

    Returns:
        Dict[str, Any]: Defaults deep-merged with the file and overrides.

    Examples:
        >>> cfg = load_config(overrides={"modulus": {"grid_n": 512}})
        >>> cfg["modulus"]["grid_n"]
        512
    """
    config = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        from .utils.io_utils import open_path

        with open_path(path, "r") as fh:
            config = _deep_merge(config, json.load(fh))
    if overrides:
        config = _deep_merge(config, overrides)
    return config
