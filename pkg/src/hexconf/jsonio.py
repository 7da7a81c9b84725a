"""JSON schemas shared by the command-line surface.

Numbers are written with 17 significant digits (lossless double round
trip) and arrays are sorted by vertex, so identical inputs always produce
byte-identical files.
"""

from __future__ import annotations

import json
from typing import Mapping

from .errors import DataError
from .lattice import Face, Vertex, ball
from .layout import LayoutResult, OverlapPair, OverlapReport
from .patch import ConformalPatch, make_patch
from .quasiharm import QuasiHarmonicWeights
from .solver import SolveTrace, YamabeProblem


def _num(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def _render(obj) -> str:
    if isinstance(obj, dict):
        inner = ",".join(f"{json.dumps(k)}:{_render(v)}" for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_render(v) for v in obj) + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    return _num(obj)


def dumps(obj) -> str:
    return _render(obj) + "\n"


def write_doc(obj, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps(obj))


def read_doc(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not valid JSON ({exc})") from exc


def _vertex_rows(doc, key, expected, what) -> dict:
    rows = doc.get(key)
    if not isinstance(rows, list):
        raise DataError(f"'{key}' must be an array of [m, n, value] rows")
    out: dict = {}
    for row in rows:
        if (not isinstance(row, list) or len(row) != 3
                or not all(isinstance(row[q], (int, float)) for q in range(3))
                or row[0] != int(row[0]) or row[1] != int(row[1])):
            raise DataError(f"'{key}' row {row!r} is not [m, n, value]")
        v = (int(row[0]), int(row[1]))
        if v in out:
            raise DataError(f"'{key}' lists vertex {v} twice")
        out[v] = float(row[2])
    if expected is not None:
        missing = sorted(expected - out.keys())
        if missing:
            raise DataError(f"'{key}' is missing vertex {missing[0]}")
        extra = sorted(out.keys() - expected)
        if extra:
            raise DataError(f"'{key}' has vertex {extra[0]} outside its domain")
    return out


# -- patches ---------------------------------------------------------------

def patch_to_doc(p: ConformalPatch) -> dict:
    if p.is_direct:
        raise DataError("direct-length patches have no JSON form")
    return {
        "center": list(p.ball.center),
        "radius": p.ball.radius,
        "base_length": p.base_length,
        "w": [[v[0], v[1], p.w[v]] for v in p.ball.vertices],
    }


def patch_from_doc(doc) -> ConformalPatch:
    if not isinstance(doc, dict):
        raise DataError("patch document must be a JSON object")
    for key in ("center", "radius", "base_length", "w"):
        if key not in doc:
            raise DataError(f"patch document lacks '{key}'")
    center = doc["center"]
    if (not isinstance(center, list) or len(center) != 2
            or not all(isinstance(c, int) for c in center)):
        raise DataError("'center' must be [m, n] with integers")
    radius = doc["radius"]
    if not isinstance(radius, int) or radius < 0:
        raise DataError("'radius' must be a non-negative integer")
    base_length = doc["base_length"]
    if not isinstance(base_length, (int, float)) or base_length <= 0:
        raise DataError("'base_length' must be positive")
    b = ball((center[0], center[1]), radius)
    w = _vertex_rows(doc, "w", set(b.vertices), "factor")
    return make_patch(b, w, float(base_length))


def save_patch(p: ConformalPatch, path) -> None:
    write_doc(patch_to_doc(p), path)


def load_patch(path) -> ConformalPatch:
    return patch_from_doc(read_doc(path))


# -- layouts ---------------------------------------------------------------

def layout_to_doc(layout: LayoutResult) -> dict:
    rows = [[v[0], v[1], z.real, z.imag]
            for v, z in sorted(layout.positions.items())]
    return {"positions": rows, "holonomy_residual": layout.holonomy_residual}


def faces_from_vertices(verts) -> tuple[Face, ...]:
    present = set(verts)
    out = []
    for p in sorted(present):
        for kind in ("up", "down"):
            f = Face(kind, p)
            if all(q in present for q in f.vertices()):
                out.append(f)
    out.sort(key=lambda f: (f.anchor, f.kind))
    return tuple(out)


def layout_from_doc(doc) -> LayoutResult:
    if not isinstance(doc, dict) or "positions" not in doc:
        raise DataError("layout document lacks 'positions'")
    rows = doc["positions"]
    if not isinstance(rows, list):
        raise DataError("'positions' must be an array of [m, n, x, y] rows")
    positions: dict = {}
    for row in rows:
        if (not isinstance(row, list) or len(row) != 4
                or not all(isinstance(c, (int, float)) for c in row)
                or row[0] != int(row[0]) or row[1] != int(row[1])):
            raise DataError(f"'positions' row {row!r} is not [m, n, x, y]")
        v = (int(row[0]), int(row[1]))
        if v in positions:
            raise DataError(f"'positions' lists vertex {v} twice")
        positions[v] = complex(float(row[2]), float(row[3]))
    residual = doc.get("holonomy_residual", 0.0)
    if not isinstance(residual, (int, float)):
        raise DataError("'holonomy_residual' must be a number")
    placed = tuple(
        (f, tuple(positions[v] for v in f.vertices()))
        for f in faces_from_vertices(positions))
    return LayoutResult(positions, placed, float(residual), 1.0)


def save_layout(layout: LayoutResult, path) -> None:
    write_doc(layout_to_doc(layout), path)


def load_layout(path) -> LayoutResult:
    return layout_from_doc(read_doc(path))


# -- vertex functions --------------------------------------------------------

def function_to_doc(values: Mapping[Vertex, float]) -> dict:
    return {"values": [[v[0], v[1], values[v]] for v in sorted(values)]}


def function_from_doc(doc) -> dict:
    if not isinstance(doc, dict):
        raise DataError("function document must be a JSON object")
    return _vertex_rows(doc, "values", None, "value")


def save_function(values: Mapping[Vertex, float], path) -> None:
    write_doc(function_to_doc(values), path)


def load_function(path) -> dict:
    return function_from_doc(read_doc(path))


# -- solver problems ---------------------------------------------------------

def problem_to_doc(prob: YamabeProblem) -> dict:
    b = prob.ball
    return {
        "radius": b.radius,
        "boundary_w": [[v[0], v[1], prob.boundary_w[v]] for v in sorted(b.boundary)],
        "target_K": [[v[0], v[1], prob.target_K[v]] for v in sorted(b.interior)],
    }


def problem_from_doc(doc) -> YamabeProblem:
    if not isinstance(doc, dict):
        raise DataError("problem document must be a JSON object")
    radius = doc.get("radius")
    if not isinstance(radius, int) or radius < 1:
        raise DataError("'radius' must be a positive integer")
    b = ball((0, 0), radius)
    boundary = _vertex_rows(doc, "boundary_w", set(b.boundary), "boundary factor")
    target = _vertex_rows(doc, "target_K", set(b.interior), "target curvature")
    return YamabeProblem(b, boundary, target)


def save_problem(prob: YamabeProblem, path) -> None:
    write_doc(problem_to_doc(prob), path)


def load_problem(path) -> YamabeProblem:
    return problem_from_doc(read_doc(path))


# -- reports -----------------------------------------------------------------

def weights_to_doc(weights: QuasiHarmonicWeights) -> dict:
    return {
        "vertex": list(weights.vertex),
        "c": list(weights.displacement),
        "mu": list(weights.weights),
        "harmonic_factor_bound": weights.harmonic_factor_bound,
    }


def overlaps_to_doc(report: OverlapReport) -> dict:
    return {
        "threshold": report.threshold,
        "pairs": [
            {
                "a": [pair.face_a.kind, pair.face_a.anchor[0], pair.face_a.anchor[1]],
                "b": [pair.face_b.kind, pair.face_b.anchor[0], pair.face_b.anchor[1]],
                "area": pair.area,
            }
            for pair in report.pairs
        ],
    }


def save_overlaps(report: OverlapReport, path) -> None:
    write_doc(overlaps_to_doc(report), path)


def load_overlaps(path) -> OverlapReport:
    doc = read_doc(path)
    if not isinstance(doc, dict) or "pairs" not in doc:
        raise DataError("overlap document lacks 'pairs'")
    pairs = []
    for row in doc["pairs"]:
        try:
            fa = Face(row["a"][0], (int(row["a"][1]), int(row["a"][2])))
            fb = Face(row["b"][0], (int(row["b"][1]), int(row["b"][2])))
            pairs.append(OverlapPair(fa, fb, float(row["area"])))
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise DataError(f"bad overlap row {row!r}") from exc
    return OverlapReport(tuple(pairs), float(doc.get("threshold", 0.0)))


def curvature_report_to_doc(report) -> dict:
    return {
        "max_abs_K": report.max_abs_K,
        "max_inner_angle": report.max_inner_angle,
        "K": [[v[0], v[1], report.K[v]] for v in sorted(report.K)],
        "cone_angle": [[v[0], v[1], report.cone_angle[v]]
                       for v in sorted(report.cone_angle)],
    }


def solution_to_doc(trace: SolveTrace) -> dict:
    return {
        "converged": trace.converged,
        "iterations": [[res, step] for res, step in trace.iterations],
        "patch": patch_to_doc(trace.final_patch),
    }
