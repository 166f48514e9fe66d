"""Reading inputs and writing results, coresets and SVG plots."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import InvalidInputError, ParseError
from .geometry import Segment
from .objective import WeightedSegment
from .optimizer import ClusteringResult
from .polyline import Polyline

_FORMATS = ("csv", "json")


def infer_format(path, fmt: str | None = None) -> str:
    if fmt is not None:
        if fmt not in _FORMATS:
            raise InvalidInputError(f"unknown format {fmt!r}")
        return fmt
    suffix = Path(path).suffix.lower().lstrip(".")
    if suffix not in _FORMATS:
        raise InvalidInputError(f"cannot infer the format of {path}; pass csv or json")
    return suffix


def _make_segment(coords, weight, index, line=None) -> WeightedSegment:
    where = f"segment {index}" + (f" (line {line})" if line is not None else "")
    if not all(math.isfinite(v) for v in coords):
        raise InvalidInputError(f"non-finite coordinate in {where}")
    if not (math.isfinite(weight) and weight > 0):
        raise InvalidInputError(f"nonpositive weight {weight} in {where}")
    a, b = tuple(coords[:2]), tuple(coords[2:])
    if a == b:
        raise InvalidInputError(f"zero-length segment at index {index}" + (f" (line {line})" if line else ""))
    return WeightedSegment(Segment(a, b), weight)


def parse_csv(text: str) -> list[WeightedSegment]:
    """Rows ``x1,y1,x2,y2[,w]``; an optional header line; blank lines are skipped."""
    out = []
    first = True
    for line, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or all(not f.strip() for f in row):
            continue
        try:
            vals = [float(f) for f in row]
        except ValueError:
            if first:
                first = False  # header
                continue
            raise ParseError(f"cannot parse row {','.join(row)!r}", line) from None
        first = False
        if len(vals) not in (4, 5):
            raise ParseError(f"expected 4 or 5 fields, got {len(vals)}", line)
        w = vals[4] if len(vals) == 5 else 1.0
        out.append(_make_segment(vals[:4], w, len(out), line))
    return out


def _weight(v, what) -> float:
    try:
        return float(v)
    except (TypeError, ValueError):
        raise InvalidInputError(f"{what} has a non-numeric weight") from None


def _point(v, what):
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise InvalidInputError(f"{what} must be an [x, y] pair")
    try:
        return [float(v[0]), float(v[1])]
    except (TypeError, ValueError):
        raise InvalidInputError(f"{what} has non-numeric coordinates") from None


def parse_json_segments(doc) -> list[WeightedSegment]:
    if not isinstance(doc, dict) or not isinstance(doc.get("segments"), list):
        raise InvalidInputError('expected an object with a "segments" list')
    out = []
    for i, item in enumerate(doc["segments"]):
        if not isinstance(item, dict) or "a" not in item or "b" not in item:
            raise InvalidInputError(f"segment {i} needs keys a and b")
        coords = _point(item["a"], f"segment {i}.a") + _point(item["b"], f"segment {i}.b")
        out.append(_make_segment(coords, _weight(item.get("w", 1.0), f"segment {i}"), i))
    return out


def _read_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno) from None


def load_segments(path, fmt: str | None = None) -> list[WeightedSegment]:
    fmt = infer_format(path, fmt)
    text = Path(path).read_text(encoding="utf-8")
    if fmt == "csv":
        return parse_csv(text)
    return parse_json_segments(_read_json(text))


def parse_json_polylines(doc) -> tuple[list[Polyline], np.ndarray]:
    """A JSON array whose items are vertex arrays or ``{"vertices": [...], "w": ...}`` objects."""
    if isinstance(doc, dict) and isinstance(doc.get("polylines"), list):
        doc = doc["polylines"]
    if not isinstance(doc, list):
        raise InvalidInputError("expected a JSON array of polylines")
    polys, weights = [], []
    for i, item in enumerate(doc):
        w = 1.0
        if isinstance(item, dict):
            w = _weight(item.get("w", 1.0), f"polyline {i}")
            item = item.get("vertices")
        if not isinstance(item, list) or len(item) < 2:
            raise InvalidInputError(f"polyline {i} needs at least two vertices")
        verts = [_point(v, f"polyline {i} vertex {j}") for j, v in enumerate(item)]
        if not all(math.isfinite(c) for v in verts for c in v):
            raise InvalidInputError(f"non-finite coordinate in polyline {i}")
        if not (math.isfinite(w) and w > 0):
            raise InvalidInputError(f"nonpositive weight {w} in polyline {i}")
        try:
            polys.append(Polyline(tuple(map(tuple, verts))))
        except InvalidInputError as e:
            raise InvalidInputError(f"polyline {i}: {e}") from None
        weights.append(w)
    return polys, np.array(weights)


def load_polylines(path) -> tuple[list[Polyline], np.ndarray]:
    return parse_json_polylines(_read_json(Path(path).read_text(encoding="utf-8")))


def load_input(path, fmt: str | None = None, ell: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Vertex array ``(n, ell+1, 2)`` and weights from a segment or polyline file."""
    from .pipeline import input_arrays

    fmt = infer_format(path, fmt)
    if fmt == "csv":
        return input_arrays(load_segments(path, fmt), ell)
    doc = _read_json(Path(path).read_text(encoding="utf-8"))
    if isinstance(doc, dict) and "segments" in doc:
        return input_arrays(parse_json_segments(doc), ell)
    polys, w = parse_json_polylines(doc)
    return input_arrays(polys, ell, w)


def dump_segments(S: Sequence[WeightedSegment], path, fmt: str | None = None) -> None:
    fmt = infer_format(path, fmt)
    if fmt == "csv":
        with open(path, "w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(["x1", "y1", "x2", "y2", "w"])
            for s in S:
                wr.writerow([repr(s.seg.a.x), repr(s.seg.a.y), repr(s.seg.b.x), repr(s.seg.b.y), repr(s.weight)])
    else:
        doc = {"segments": [{"a": list(s.seg.a), "b": list(s.seg.b), "w": s.weight} for s in S]}
        Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def sorted_centers(result: ClusteringResult) -> tuple[np.ndarray, np.ndarray]:
    """Centers in canonical orientation, sorted lexicographically, and labels remapped to match."""
    C = _kernels.canonical_orientation(result.centers)
    order = sorted(range(len(C)), key=lambda i: tuple(C[i].ravel()))
    remap = np.empty(len(C), dtype=int)
    remap[order] = np.arange(len(C))
    return C[order], remap[np.asarray(result.labels)]


def result_to_dict(result: ClusteringResult) -> dict:
    """Stable JSON-ready view of a result; excludes wall-clock time so equal runs give equal bytes."""
    C, labels = sorted_centers(result)
    out = {
        "k": len(C),
        "ell": int(C.shape[1] - 1),
        "cost": result.cost,
        "centers": C.tolist(),
        "assignment": labels.tolist(),
    }
    if result.repetition_index is not None:
        out["repetition_index"] = result.repetition_index
        out["repetition_costs"] = list(result.repetition_costs)
    if result.epsilon_prime is not None:
        out["epsilon_prime"] = result.epsilon_prime
        out["error_factor"] = result.error_factor
    if result.coreset_meta is not None:
        out["coreset"] = result.coreset_meta
    out["seed"] = result.seed
    out["restart_index"] = result.restart_index
    return out


def dumps_result(result: ClusteringResult) -> str:
    return json.dumps(result_to_dict(result), indent=2) + "\n"


def emit_result(result: ClusteringResult, path) -> None:
    Path(path).write_text(dumps_result(result), encoding="utf-8")


_PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


def svg_document(X, result: ClusteringResult, size: int = 600) -> str:
    X = np.asarray(X, dtype=float)
    C, labels = sorted_centers(result)
    if len(labels) != len(X):
        labels = np.zeros(len(X), dtype=int)
    pts = np.concatenate([X.reshape(-1, 2), C.reshape(-1, 2)])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = max(float((hi - lo).max()), 1e-12)
    pad = 0.05 * span
    scale = size / (span + 2 * pad)

    def path_d(verts):
        # flip y so that the plot has the usual orientation
        xy = [((x - lo[0] + pad) * scale, (hi[1] + pad - y) * scale) for x, y in verts]
        return "M " + " L ".join(f"{x:.3f} {y:.3f}" for x, y in xy)

    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>']
    for x, j in zip(X, labels.tolist()):
        color = _PALETTE[j % len(_PALETTE)]
        lines.append(f'<path d="{path_d(x)}" stroke="{color}" stroke-width="1" fill="none" opacity="0.7"/>')
    for j, c in enumerate(C):
        color = _PALETTE[j % len(_PALETTE)]
        lines.append(f'<path d="{path_d(c)}" stroke="{color}" stroke-width="4" fill="none"/>')
        lines.append(f'<path d="{path_d(c)}" stroke="black" stroke-width="1" fill="none"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_svg(X, result: ClusteringResult, path) -> None:
    """Inputs colored by cluster, centers drawn with a thick stroke on top."""
    if len(X) and isinstance(X[0], WeightedSegment):
        X = np.stack([s.seg.to_array() for s in X])
    Path(path).write_text(svg_document(X, result), encoding="utf-8")


def coreset_to_json(core, X) -> str:
    return json.dumps(core.to_json(X), indent=2) + "\n"
