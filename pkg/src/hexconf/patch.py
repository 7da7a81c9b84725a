"""Conformal factors on lattice balls: lengths, curvature, cross-ratios.

A patch stores the per-vertex factor w and derives every edge length as
base_length * exp(w_i + w_j).  A secondary direct-length mode exists for
cross-ratio experiments on metrics that are not conformal to the regular
one; it supports lengths and curvature but no factor-based operations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, NamedTuple

import numpy as np

from .errors import (
    InvalidArgumentError,
    InvalidEdgeError,
    InvalidFactorError,
    InvalidTriangleError,
)
from .lattice import Ball, Vertex, neighbors, star_triangles, to_plane, vadd


def edge_key(i: Vertex, j: Vertex) -> tuple[Vertex, Vertex]:
    return (i, j) if i <= j else (j, i)


class _BallArrays(NamedTuple):
    vertices: tuple[Vertex, ...]
    index: dict
    face_corners: np.ndarray   # (F, 3) vertex indices in canonical face order
    interior_mask: np.ndarray  # (V,) bool


@lru_cache(maxsize=128)
def _ball_arrays(b: Ball) -> _BallArrays:
    verts = b.vertices
    index = {v: p for p, v in enumerate(verts)}
    faces = b.faces
    corners = np.zeros((len(faces), 3), dtype=np.int64)
    for q, f in enumerate(faces):
        va, vb, vc = f.vertices()
        corners[q] = (index[va], index[vb], index[vc])
    interior = b.interior
    mask = np.array([v in interior for v in verts], dtype=bool)
    return _BallArrays(verts, index, corners, mask)


@dataclass(frozen=True)
class ConformalPatch:
    ball: Ball
    w: Mapping[Vertex, float] | None
    base_length: float = 1.0
    lengths: Mapping[tuple[Vertex, Vertex], float] | None = field(default=None)

    @property
    def is_direct(self) -> bool:
        return self.w is None


def _face_lengths(p: ConformalPatch, verts: tuple[Vertex, Vertex, Vertex]):
    """Lengths (l_a, l_b, l_c) opposite the three vertices of a face."""
    va, vb, vc = verts
    return (
        edge_length(p, vb, vc),
        edge_length(p, va, vc),
        edge_length(p, va, vb),
    )


def _face_length_arrays(p: ConformalPatch):
    """Side lengths (l_a, l_b, l_c) opposite each corner, one row per face."""
    arrs = _ball_arrays(p.ball)
    ia, ib, ic = arrs.face_corners.T
    if p.is_direct:
        la = np.empty(len(ia))
        lb = np.empty(len(ia))
        lc = np.empty(len(ia))
        for q, f in enumerate(p.ball.faces):
            la[q], lb[q], lc[q] = _face_lengths(p, f.vertices())
    else:
        w_arr = np.array([p.w[v] for v in arrs.vertices])
        la = p.base_length * np.exp(w_arr[ib] + w_arr[ic])
        lb = p.base_length * np.exp(w_arr[ia] + w_arr[ic])
        lc = p.base_length * np.exp(w_arr[ia] + w_arr[ib])
    return arrs, la, lb, lc


def _validate(p: ConformalPatch) -> None:
    if p.base_length <= 0.0:
        raise InvalidArgumentError(f"base_length must be positive, got {p.base_length}")
    if not p.is_direct:
        missing = [v for v in p.ball.vertices if v not in p.w]
        if missing:
            raise InvalidArgumentError(f"factor missing on vertices {missing[:3]}")
    if not p.ball.faces:
        return
    _, la, lb, lc = _face_length_arrays(p)
    bad = (la + lb <= lc) | (lb + lc <= la) | (la + lc <= lb)
    if bad.any():
        q = int(np.argmax(bad))
        f = p.ball.faces[q]
        raise InvalidTriangleError(
            f"face {f.kind}@{f.anchor} violates the triangle inequality "
            f"(lengths {la[q]:.6g}, {lb[q]:.6g}, {lc[q]:.6g})")


def make_patch(b: Ball, w: Mapping[Vertex, float], base_length: float = 1.0) -> ConformalPatch:
    """Patch from a conformal factor; every face is checked on construction."""
    p = ConformalPatch(b, dict(w), float(base_length))
    _validate(p)
    return p


def from_edge_lengths(b: Ball, lengths: Mapping[tuple[Vertex, Vertex], float]) -> ConformalPatch:
    """Direct length assignment; keys are unordered vertex pairs."""
    canon = {edge_key(*k): float(v) for k, v in lengths.items()}
    p = ConformalPatch(b, None, 1.0, canon)
    _validate(p)
    return p


def linear_factor(m_slope: float, n_slope: float, b: Ball) -> ConformalPatch:
    """w(m, n) = m*M + n*N, normalized to zero at the ball center."""
    cm, cn = b.center
    w = {(vm, vn): (vm - cm) * m_slope + (vn - cn) * n_slope for vm, vn in b.vertices}
    try:
        return make_patch(b, w)
    except InvalidTriangleError as exc:
        raise InvalidFactorError(f"linear factor ({m_slope}, {n_slope}): {exc}") from exc


def edge_length(p: ConformalPatch, i: Vertex, j: Vertex) -> float:
    """Conformal length of edge ij: base_length * exp(w_i + w_j)."""
    if j not in neighbors(i):
        raise InvalidEdgeError(f"{i} and {j} are not neighbors")
    if i not in p.ball.vertex_set or j not in p.ball.vertex_set:
        raise InvalidEdgeError(f"edge {i}-{j} leaves the ball")
    if p.is_direct:
        try:
            return p.lengths[edge_key(i, j)]
        except KeyError:
            raise InvalidEdgeError(f"no direct length stored for edge {i}-{j}") from None
    return p.base_length * math.exp(p.w[i] + p.w[j])


@dataclass(frozen=True)
class CurvatureReport:
    K: dict
    cone_angle: dict
    max_abs_K: float
    max_inner_angle: float


def _corner_angles(p: ConformalPatch):
    """Per-face corner angles as arrays aligned with _ball_arrays.face_corners."""
    arrs, la, lb, lc = _face_length_arrays(p)
    ang_a = np.arccos(np.clip((lb**2 + lc**2 - la**2) / (2 * lb * lc), -1.0, 1.0))
    ang_b = np.arccos(np.clip((la**2 + lc**2 - lb**2) / (2 * la * lc), -1.0, 1.0))
    ang_c = np.arccos(np.clip((la**2 + lb**2 - lc**2) / (2 * la * lb), -1.0, 1.0))
    return arrs, ang_a, ang_b, ang_c


def curvature(p: ConformalPatch) -> CurvatureReport:
    """K_i = 2*pi - (sum of the six incident angles), at interior vertices."""
    arrs, ang_a, ang_b, ang_c = _corner_angles(p)
    nv = len(arrs.vertices)
    cone = np.zeros(nv)
    ia, ib, ic = arrs.face_corners.T
    np.add.at(cone, ia, ang_a)
    np.add.at(cone, ib, ang_b)
    np.add.at(cone, ic, ang_c)
    K = {}
    cone_angle = {}
    for q, v in enumerate(arrs.vertices):
        if arrs.interior_mask[q]:
            cone_angle[v] = float(cone[q])
            K[v] = 2.0 * math.pi - float(cone[q])
    max_abs = max((abs(k) for k in K.values()), default=0.0)
    max_angle = float(max(ang_a.max(), ang_b.max(), ang_c.max())) if len(ia) else 0.0
    return CurvatureReport(K, cone_angle, max_abs, max_angle)


def vertex_curvature(p: ConformalPatch, v: Vertex) -> float:
    """Curvature at one vertex whose full star lies in the ball."""
    ring = neighbors(v)
    if v not in p.ball.vertex_set or any(u not in p.ball.vertex_set for u in ring):
        raise InvalidArgumentError(f"star of {v} is not contained in the ball")
    total = 0.0
    for _, nj, nj1 in star_triangles(v):
        l_opp = edge_length(p, nj, nj1)
        l_b = edge_length(p, v, nj1)
        l_c = edge_length(p, v, nj)
        cos_v = (l_b * l_b + l_c * l_c - l_opp * l_opp) / (2.0 * l_b * l_c)
        total += math.acos(min(1.0, max(-1.0, cos_v)))
    return 2.0 * math.pi - total


def opposite_vertices(i: Vertex, j: Vertex) -> tuple[Vertex, Vertex]:
    """Common neighbors (left, right) of the directed edge i -> j."""
    common = set(neighbors(i)) & set(neighbors(j))
    if len(common) != 2:
        raise InvalidEdgeError(f"{i} and {j} are not neighbors")
    a, b = sorted(common)
    zi, zj, za = to_plane(i), to_plane(j), to_plane(a)
    cross = ((zj - zi).conjugate() * (za - zi)).imag
    return (a, b) if cross > 0 else (b, a)


def length_cross_ratio(p: ConformalPatch, i: Vertex, j: Vertex) -> float:
    """(l_il * l_jk) / (l_ik * l_jl) across the interior edge ij.

    l is the opposite vertex on the left of i -> j, k the one on the right;
    for a factor patch the value equals the base metric's ratio exactly.
    """
    left, right = opposite_vertices(i, j)
    for x in (i, j, left, right):
        if x not in p.ball.vertex_set:
            raise InvalidEdgeError(f"edge {i}-{j} is not interior to the ball")
    return (edge_length(p, i, left) * edge_length(p, j, right)) / (
        edge_length(p, i, right) * edge_length(p, j, left))


def difference(p: ConformalPatch, c: Vertex) -> dict:
    """The map i -> w(i+c) - w(i) on vertices with both ends in the ball."""
    if p.is_direct:
        raise InvalidArgumentError("difference requires a conformal-factor patch")
    out = {}
    for v in p.ball.vertices:
        shifted = vadd(v, c)
        if shifted in p.ball.vertex_set:
            out[v] = p.w[shifted] - p.w[v]
    return out


class RatioViolation(NamedTuple):
    vertex: Vertex
    neighbor: Vertex
    ratio: float


def check_edge_ratio_bound(p: ConformalPatch, tol: float = 1e-9) -> tuple[RatioViolation, ...]:
    """Flag neighbors of flat interior vertices with exp(w_j - w_i) < 1/6.

    An empty result means every (numerically) flat star satisfies the
    neighbor-ratio lower bound; the check reports, it does not assert.
    """
    if p.is_direct:
        raise InvalidArgumentError("edge ratio check requires a conformal-factor patch")
    report = curvature(p)
    out = []
    for v, k in sorted(report.K.items()):
        if abs(k) > tol:
            continue
        for u in neighbors(v):
            ratio = math.exp(p.w[u] - p.w[v])
            if ratio < 1.0 / 6.0:
                out.append(RatioViolation(v, u, ratio))
    return tuple(out)


def similarity_classes(p: ConformalPatch, tol: float = 1e-9) -> list[tuple[tuple[float, float, float], int]]:
    """Cluster faces by their angle triple in canonical corner order.

    Returns (representative triple, face count) per class; two faces fall in
    one class iff corresponding angles agree within tol, i.e. they differ by
    an orientation-preserving similarity matching the canonical corners.
    """
    _, ang_a, ang_b, ang_c = _corner_angles(p)
    triples = sorted(zip(ang_a.tolist(), ang_b.tolist(), ang_c.tolist()))
    classes: list[tuple[tuple[float, float, float], int]] = []
    for tri in triples:
        for q, (rep, count) in enumerate(classes):
            if all(abs(x - y) <= tol for x, y in zip(tri, rep)):
                classes[q] = (rep, count + 1)
                break
        else:
            classes.append((tri, 1))
    return classes
