"""JSON and CSV writers for matrices, spectra, slices, meshes and curve samples.

CSV files carry a header row, 17 significant digits and LF line endings.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .domain import BoundaryMesh, BoundarySlice, PhysicalSet, TransitionReport
from .implicit import BranchProfile, alpha_of_e, b_of_e, c_of_e
from .secular import SpectrumResult


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def _clean(obj):
    # json.dumps would emit Infinity/NaN, which strict readers reject
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def dumps(obj, indent: int | None = 2) -> str:
    if hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    return json.dumps(_clean(obj), indent=indent, default=_json_default)


def matrix_to_json(m) -> str:
    m = np.asarray(m)
    rows = [[float(v) for v in row] for row in m]
    return json.dumps({"dim": int(m.shape[0]), "rows": rows})


def matrix_from_json(text: str) -> np.ndarray:
    data = json.loads(text)
    m = np.array(data["rows"], dtype=float)
    if m.shape != (data["dim"], data["dim"]):
        raise ValueError(f"rows do not form a {data['dim']}x{data['dim']} matrix")
    return m


def matrix_to_csv(m) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in np.asarray(m):
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def table_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def spectrum_to_json(s: SpectrumResult) -> str:
    return dumps(s)


def slice_to_json(s: BoundarySlice) -> str:
    return dumps(s)


def profile_to_json(p: BranchProfile) -> str:
    return dumps(p)


def transition_to_json(r: TransitionReport) -> str:
    return dumps(r)


def mesh_to_csv(mesh: BoundaryMesh) -> str:
    return table_to_csv(["A", "B", "C", "sheet_tag"], ((p.a, p.b, p.c, p.sheet) for p in mesh.points))


def scan_to_csv(cs, verdicts) -> str:
    return table_to_csv(["C", "verdict"], ((c, v.verdict.value) for c, v in zip(cs, verdicts)))


def physical_set_to_json(ps: PhysicalSet) -> str:
    return dumps(
        {
            "intervals": [list(iv) for iv in ps.intervals],
            "punctures": list(ps.punctures),
            "scan": {"lo": ps.lo, "hi": ps.hi, "step": ps.step},
            "reaches_lo": ps.reaches_lo,
            "reaches_hi": ps.reaches_hi,
        }
    )


def sample_curve(kind: str, e, **params) -> tuple[np.ndarray, np.ndarray]:
    """Sample one of the curves C(E), alpha(E), B(E); points at poles become NaN."""
    e = np.asarray(e, dtype=float)
    funcs = {
        "C": lambda x: c_of_e(x, params["b"], params["alpha"]),
        "alpha": lambda x: alpha_of_e(x, params["b"], params["c"]),
        "B": lambda x: b_of_e(x, params["c"], params["alpha"]),
    }
    if kind not in funcs:
        raise ValueError(f"unknown curve {kind!r}; expected one of {sorted(funcs)}")
    f = funcs[kind]
    out = np.empty_like(e)
    for i, x in enumerate(e):
        try:
            out[i] = f(x)
        except ValueError:
            out[i] = np.nan
    return e, out


def curve_to_csv(kind: str, e, values) -> str:
    return table_to_csv(["E", f"{kind}(E)"], zip(e, values))


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")
