"""
Storage Utilities for loewnerlab Inputs and Outputs

This module reads and writes the file formats used by the command line and
the harness: drivings, curves, traces, solved chains, Whitney squares,
modulus problems and reports. Every path may be local or an ``s3://`` URI;
remote paths go through s3fs.

Key features:
- Driving JSON ({"type", "T", "n", "params", "values"})
- Curve CSV (re, im) and trace CSV (t, re, im)
- Chain JSON with grid, step parameters, driving and trace
- Whitney square CSV, modulus problem JSON and report JSON
- Saving matplotlib figures to local or S3 paths

Upstream dependencies:
- s3fs for S3 access (credentials from ~/.aws or the environment)
- pandas for CSV tables

Downstream applications:
- The ``loewner`` command line and TheoremHarness report writing
- load_config for configuration files

Version: 0.1.0
"""

import io
import json
import os
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..core_model import CapacityGrid, Driving, HullCurve, MapChain
from ..exceptions import InvalidArgumentError
from ..metric_analysis import REPORT_COLUMNS

_FILESYSTEM = None

CONTENT_TYPES = {
    "png": "image/png",
    "pdf": "application/pdf",
    "svg": "image/svg+xml",
    "html": "text/html",
}


def is_s3(path: str) -> bool:
    return str(path).startswith("s3://")


def s3_filesystem(profile_name: Optional[str] = None, endpoint_url: Optional[str] = None):
    """
    Shared s3fs.S3FileSystem, created on first use.

    Args:
        profile_name (Optional[str]): AWS profile. Default profile when None.
        endpoint_url (Optional[str]): Custom endpoint for S3-compatible storage.
    """
    global _FILESYSTEM
    if _FILESYSTEM is None or profile_name or endpoint_url:
        import s3fs

        kwargs = {}
        if profile_name:
            kwargs["profile"] = profile_name
        if endpoint_url:
            kwargs["endpoint_url"] = endpoint_url
        _FILESYSTEM = s3fs.S3FileSystem(**kwargs)
    return _FILESYSTEM


@contextmanager
def open_path(path: str, mode: str = "r") -> Iterator[Any]:
    """Open a local path or s3:// URI; parent directories of local outputs are created."""
    path = str(path)
    if is_s3(path):
        with s3_filesystem().open(path, mode) as fh:
            yield fh
        return
    if any(flag in mode for flag in "wa"):
        parent = os.path.dirname(os.path.abspath(path))
        os.makedirs(parent, exist_ok=True)
    with open(path, mode) as fh:
        yield fh


def _read_json(path: str) -> Any:
    with open_path(path, "r") as fh:
        return json.load(fh)


def _write_json(obj: Any, path: str) -> None:
    with open_path(path, "w") as fh:
        json.dump(obj, fh, indent=2, default=_json_default)


def _json_default(value: Any) -> Any:
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def _points_to_list(points: np.ndarray) -> List[List[float]]:
    points = np.asarray(points, dtype=complex)
    return np.column_stack([points.real, points.imag]).tolist()


def _list_to_points(pairs: Sequence[Sequence[float]]) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float).reshape(-1, 2)
    return arr[:, 0] + 1j * arr[:, 1]


# Drivings -------------------------------------------------------------------

def driving_to_dict(d: Driving) -> Dict[str, Any]:
    params = dict(d.params)
    dt = d.grid.dt
    if dt.size and not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
        params["t"] = d.grid.t_values.tolist()
    return {
        "type": d.kind,
        "T": d.T,
        "n": d.grid.n,
        "params": params,
        "values": d.values.tolist(),
    }


def driving_from_dict(payload: Dict[str, Any], n: Optional[int] = None) -> Driving:
    """
    Materialize a Driving JSON object.

    ``n`` overrides the sample count for generated types; 'samples' drivings
    keep their own grid.
    """
    kind = payload.get("type", "samples")
    params = payload.get("params", {}) or {}
    values = payload.get("values")
    T = float(payload.get("T", 1.0))
    if kind == "samples":
        if values is None:
            raise InvalidArgumentError("driving of type 'samples' needs values")
        return Driving.from_kind(kind, T, len(values), params, values)
    count = int(n if n is not None else payload.get("n", 1001))
    return Driving.from_kind(kind, T, count, params)


def read_driving(path: str, n: Optional[int] = None) -> Driving:
    return driving_from_dict(_read_json(path), n)


def write_driving(d: Driving, path: str) -> None:
    _write_json(driving_to_dict(d), path)


# Curves and traces ----------------------------------------------------------

def read_curve(path: str, simple: bool = True, filled: bool = False) -> HullCurve:
    """Curve CSV with columns re, im; the first row is the base point on ℝ."""
    with open_path(path, "r") as fh:
        df = pd.read_csv(fh)
    missing = {"re", "im"} - set(df.columns)
    if missing:
        raise InvalidArgumentError(f"curve file lacks columns {sorted(missing)}")
    return HullCurve(df["re"].to_numpy() + 1j * df["im"].to_numpy(), simple, filled)


def write_curve(curve: HullCurve, path: str) -> None:
    df = pd.DataFrame({"re": curve.points.real, "im": curve.points.imag})
    with open_path(path, "w") as fh:
        df.to_csv(fh, index=False)


def write_trace(times: np.ndarray, trace: np.ndarray, path: str) -> None:
    df = pd.DataFrame({"t": times, "re": np.real(trace), "im": np.imag(trace)})
    with open_path(path, "w") as fh:
        df.to_csv(fh, index=False)


def read_trace(path: str) -> pd.DataFrame:
    with open_path(path, "r") as fh:
        return pd.read_csv(fh)


# Chains ---------------------------------------------------------------------

def write_chain(e, path: str) -> None:
    """Serialize a LoewnerEvolution (chain, driving and trace)."""
    payload = {
        "grid": e.grid.t_values.tolist(),
        "kinds": e.chain.kinds,
        "anchors": e.chain.anchors.tolist(),
        "dts": e.chain.dts.tolist(),
        "alphas": e.chain.alphas.tolist(),
        "step_kind": e.step_kind,
        "tip_offset": e.tip_offset,
        "driving": driving_to_dict(e.driving),
        "trace": None if e.trace is None else _points_to_list(e.trace),
    }
    _write_json(payload, path)


def read_chain(path: str):
    """Load a LoewnerEvolution written by ``write_chain``."""
    from ..forward_solver import LoewnerEvolution

    payload = _read_json(path)
    grid = CapacityGrid(np.asarray(payload["grid"], dtype=float))
    chain = MapChain(grid, np.asarray(payload["anchors"], dtype=float),
                     np.asarray(payload["alphas"], dtype=float))
    if "dts" in payload and not np.allclose(chain.dts, payload["dts"], rtol=1e-9, atol=0.0):
        raise InvalidArgumentError("chain increments do not match the grid")
    driving_payload = dict(payload["driving"])
    values = driving_payload.get("values")
    if values is not None:
        driving = Driving(grid, np.asarray(values, dtype=float),
                          driving_payload.get("type", "samples"),
                          driving_payload.get("params", {}) or {})
    else:
        driving = driving_from_dict(driving_payload, grid.n)
    trace = payload.get("trace")
    trace = None if trace is None else _list_to_points(trace)
    return LoewnerEvolution(chain, driving, trace, payload.get("step_kind", "vertical"),
                            float(payload.get("tip_offset", 0.1)))


# Whitney squares ------------------------------------------------------------

def write_squares(frame: pd.DataFrame, path: str) -> None:
    with open_path(path, "w") as fh:
        frame.to_csv(fh, index=False)


# Modulus problems -----------------------------------------------------------

def read_modulus_problem(path: str, grid_n: Optional[int] = None):
    """
    Load a modulus problem JSON (hull, filled, E, F, bbox, grid_n).

    ``hull`` may be null for the half-plane; E and F are polylines given as
    [re, im] pairs.
    """
    from ..core_model import DomainSpec
    from ..modulus import ModulusProblem

    payload = _read_json(path)
    hull = payload.get("hull")
    curve = None
    if hull:
        filled = bool(payload.get("filled", False))
        curve = HullCurve(_list_to_points(hull), simple=not filled, filled=filled)
    bbox = payload.get("bbox")
    spec = DomainSpec(curve, tuple(bbox) if bbox else None)
    return ModulusProblem(spec, _list_to_points(payload["E"]), _list_to_points(payload["F"]),
                          int(grid_n or payload.get("grid_n", 256)),
                          bbox=spec.bbox if bbox else None)


def write_modulus_result(result, path: str) -> None:
    _write_json({"value": result.value, "grid_n": result.grid_n, "h": result.h,
                 "n_unknowns": result.n_unknowns, "residual": result.residual}, path)


# Reports --------------------------------------------------------------------


def report_records(frame: pd.DataFrame) -> List[Dict[str, Any]]:
    records = []
    for row in frame.itertuples(index=False):
        margin = float(row.margin)
        records.append({
            "check": str(row.check),
            "passed": bool(row.passed),
            "margin": margin if np.isfinite(margin) else None,
            "params": dict(row.params) if isinstance(row.params, dict) else {},
        })
    return records


def write_report(frame: pd.DataFrame, path: str) -> None:
    """Write a report table as a JSON list of {check, passed, margin, params}."""
    _write_json(report_records(frame), path)


def read_report(path: str) -> pd.DataFrame:
    df = pd.DataFrame(_read_json(path), columns=REPORT_COLUMNS)
    df["margin"] = df["margin"].astype(float)
    return df


# Figures --------------------------------------------------------------------

def save_figure(fig, path: str, format: Optional[str] = None, **kwargs) -> None:
    """
    Save a matplotlib figure locally or to S3.

    Args:
        fig (matplotlib.figure.Figure): Figure to save.
        path (str): Output path or s3:// URI.
        format (Optional[str]): File format; taken from the extension when None.
        **kwargs: Passed to ``fig.savefig``.
    """
    format = format or os.path.splitext(str(path))[1].lstrip(".") or "svg"
    if not is_s3(path):
        with open_path(path, "wb") as fh:
            fig.savefig(fh, format=format, **kwargs)
        return
    buf = io.BytesIO()
    fig.savefig(buf, format=format, **kwargs)
    fs = s3_filesystem()
    with fs.open(path, "wb", ContentType=CONTENT_TYPES.get(format, "application/octet-stream")) as fh:
        fh.write(buf.getvalue())
