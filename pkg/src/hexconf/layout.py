"""Developing map: immerse a patch in the plane, measure holonomy, find overlaps.

Faces are glued breadth-first across shared edges; every vertex position is
frozen at first placement, so star-closing discrepancies stay visible as a
holonomy residual instead of being averaged away.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernel
from .errors import (
    DegenerateError,
    InvalidArgumentError,
    NotLinearError,
)
from .lattice import Face, Vertex, ball, neighbors
from .patch import ConformalPatch, _face_length_arrays, difference, edge_length, linear_factor


@dataclass(frozen=True)
class LayoutResult:
    """Planar immersion of a patch: positions, placed faces, diagnostics."""

    positions: dict
    placed_faces: tuple[tuple[Face, tuple[complex, complex, complex]], ...]
    holonomy_residual: float
    base_length: float

    def all_counter_clockwise(self) -> bool:
        return all(_signed_area(tri) > 0.0 for _, tri in self.placed_faces)

    def diameter(self) -> float:
        zs = list(self.positions.values())
        if len(zs) < 2:
            return 0.0
        xs = np.array([z.real for z in zs])
        ys = np.array([z.imag for z in zs])
        return float(math.hypot(xs.max() - xs.min(), ys.max() - ys.min()))


def _signed_area(tri) -> float:
    a, b, c = tri
    return 0.5 * ((b - a).conjugate() * (c - a)).imag


def _place_third(za: complex, zb: complex, l_ax: float, l_bx: float) -> complex:
    """Apex left of a -> b with prescribed distances from both endpoints."""
    d = abs(zb - za)
    if d == 0.0:
        raise DegenerateError(
            "anchor positions coincide; the layout scale range exceeds "
            "double precision")
    u = (zb - za) / d
    x = (d * d + l_ax * l_ax - l_bx * l_bx) / (2.0 * d)
    y = math.sqrt(max(l_ax * l_ax - x * x, 0.0))
    return za + (x + 1j * y) * u


def _develop_positions(p: ConformalPatch, base_face: Face):
    """BFS gluing core: positions plus per-face point triples, no diagnostics."""
    faces = p.ball.faces
    arrs, la, lb, lc = _face_length_arrays(p)
    side = {}
    for q, f in enumerate(faces):
        va, vb, vc = f.vertices()
        # lengths keyed per face by the excluded corner
        side[q] = {va: la[q], vb: lb[q], vc: lc[q]}

    edge_to_faces: dict = {}
    for q, f in enumerate(faces):
        va, vb, vc = f.vertices()
        for e in ((va, vb), (vb, vc), (va, vc)):
            key = (e[0], e[1]) if e[0] <= e[1] else (e[1], e[0])
            edge_to_faces.setdefault(key, []).append(q)

    face_index = {f: q for q, f in enumerate(faces)}
    positions: dict = {}
    placed = [False] * len(faces)
    triangles: list = [None] * len(faces)

    def place_face(q: int) -> None:
        f = faces[q]
        va, vb, vc = f.vertices()
        lengths = side[q]
        if not positions:
            z0 = 0.0 + 0.0j
            z1 = z0 + lengths[vc]
            positions[va], positions[vb] = z0, z1
            positions[vc] = _place_third(z0, z1, lengths[vb], lengths[va])
        else:
            order = (va, vb, vc)
            for r in range(3):
                unknown = order[(r + 2) % 3]
                if unknown not in positions:
                    a, b = order[r], order[(r + 1) % 3]
                    positions[unknown] = _place_third(
                        positions[a], positions[b], lengths[b], lengths[a])
                    break
        triangles[q] = (positions[va], positions[vb], positions[vc])

    start = face_index[base_face]
    place_face(start)
    placed[start] = True
    queue = deque([start])
    while queue:
        q = queue.popleft()
        va, vb, vc = faces[q].vertices()
        for e in ((va, vb), (vb, vc), (va, vc)):
            key = (e[0], e[1]) if e[0] <= e[1] else (e[1], e[0])
            for r in edge_to_faces[key]:
                if not placed[r]:
                    place_face(r)
                    placed[r] = True
                    queue.append(r)
    return positions, tuple(zip(faces, triangles))


def develop(p: ConformalPatch, base_face: Face | None = None) -> LayoutResult:
    """Immerse the patch: base face on the positive x-axis, BFS gluing after."""
    faces = p.ball.faces
    if base_face is None:
        base_face = Face("up", p.ball.center)
    if not faces:
        return LayoutResult({p.ball.center: 0.0 + 0.0j}, (), 0.0, p.base_length)
    if base_face not in set(faces):
        raise InvalidArgumentError(f"base face {base_face} is not a face of the ball")
    positions, placed_faces = _develop_positions(p, base_face)
    residual = _holonomy_residual(p, positions)
    return LayoutResult(positions, placed_faces, residual, p.base_length)


def _holonomy_residual(p: ConformalPatch, positions: dict) -> float:
    """Max star-closing discrepancy over interior vertices, per base length."""
    worst = 0.0
    for v in sorted(p.ball.interior):
        ring = neighbors(v)
        zv = positions[v]
        z_prev = positions[ring[0]]
        for j in range(6):
            nj, nj1 = ring[j], ring[(j + 1) % 6]
            z_prev = _place_third(zv, z_prev, edge_length(p, v, nj1),
                                  edge_length(p, nj, nj1))
        worst = max(worst, abs(z_prev - positions[ring[0]]))
    return worst / p.base_length


class OverlapPair(NamedTuple):
    face_a: Face
    face_b: Face
    area: float


@dataclass(frozen=True)
class OverlapReport:
    pairs: tuple[OverlapPair, ...]
    threshold: float

    def __bool__(self) -> bool:
        return bool(self.pairs)


def _layout_arrays(layout: LayoutResult):
    faces = [f for f, _ in layout.placed_faces]
    tris = np.empty((len(faces), 3, 2), dtype=np.float64)
    keys = np.empty((len(faces), 3), dtype=np.int64)
    vid: dict = {}
    for q, (f, tri) in enumerate(layout.placed_faces):
        for r, (v, z) in enumerate(zip(f.vertices(), tri)):
            tris[q, r, 0] = z.real
            tris[q, r, 1] = z.imag
            keys[q, r] = vid.setdefault(v, len(vid))
    return faces, tris, keys


def _min_face_area(tris: np.ndarray) -> float:
    a = tris[:, 0, :]
    b = tris[:, 1, :]
    c = tris[:, 2, :]
    areas = 0.5 * np.abs((b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
                         - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]))
    return float(areas.min()) if len(areas) else 0.0


def find_overlap(layout: LayoutResult, area_threshold: float | None = None) -> OverlapReport:
    """All positive-area intersections between faces sharing no vertex.

    The default threshold 1e-10 * (smallest face area) suppresses floating
    point slivers; shared-vertex faces legitimately touch and are skipped.
    """
    faces, tris, keys = _layout_arrays(layout)
    if area_threshold is None:
        area_threshold = 1e-10 * _min_face_area(tris)
    hits = _kernel.all_overlaps(tris, keys, float(area_threshold))
    pairs = tuple(OverlapPair(faces[ia], faces[ib], area)
                  for ia, ib, area in sorted(hits))
    return OverlapReport(pairs=pairs, threshold=float(area_threshold))


@dataclass(frozen=True)
class Similarity:
    """Orientation-preserving map z -> k*z + b stepping a lattice ray forward."""

    k: complex
    b: complex
    fixed_point: complex | None
    contraction_norm: float

    def __call__(self, z: complex) -> complex:
        return self.k * z + self.b


_LINEAR_TOL = 1e-9


def extract_similarity(layout: LayoutResult, p: ConformalPatch, i: Vertex,
                       e: Vertex, span: int = 2) -> Similarity:
    """Similarity T with T(g(i + t*e)) = g(i + (t+1)*e), from a linear patch.

    Extracted from the first three ray points and verified along the whole
    span; |k| equals exp(2 * Delta_e w) for a linear factor.
    """
    if e not in neighbors((0, 0)):
        raise InvalidArgumentError(f"direction {e} is not one of the six unit vectors")
    if span < 2:
        raise InvalidArgumentError("span must be >= 2")
    for c in ((1, 0), (0, 1)):
        steps = difference(p, c)
        vals = list(steps.values())
        if max(vals) - min(vals) > _LINEAR_TOL:
            raise NotLinearError(f"factor is not linear: Delta_{c} w varies by "
                                 f"{max(vals) - min(vals):.3e}")

    ray = []
    for t in range(span + 1):
        v = (i[0] + t * e[0], i[1] + t * e[1])
        if v not in layout.positions:
            raise InvalidArgumentError(f"ray point {v} is not in the layout")
        ray.append(layout.positions[v])

    step0 = ray[1] - ray[0]
    step1 = ray[2] - ray[1]
    scale = max(1.0, max(abs(z) for z in ray))
    if abs(step0) < 1e-15 * scale or abs(step1) < 1e-15 * scale:
        raise DegenerateError("consecutive ray points coincide")
    k = step1 / step0
    b = ray[1] - k * ray[0]
    for t in range(span):
        if abs(k * ray[t] + b - ray[t + 1]) > 1e-8 * scale:
            raise NotLinearError(f"similarity relation fails at ray step {t}")
    fixed = b / (1.0 - k) if abs(k - 1.0) >= 1e-12 else None
    return Similarity(k=k, b=b, fixed_point=fixed, contraction_norm=abs(k))


def overlap_radius(m_slope: float, n_slope: float, r_max: int) -> int | None:
    """Smallest R <= r_max whose developed linear-factor ball self-overlaps.

    Each radius is developed and searched on its own; the search stops at
    the first radius whose layout has any positive-area pair, so the heavy
    large-radius layouts are only ever built when no overlap exists.
    Returns None when even the full ball at r_max stays overlap-free.
    """
    if r_max < 1:
        raise InvalidArgumentError("r_max must be >= 1")
    # validate the factor on the largest requested ball up front
    linear_factor(m_slope, n_slope, ball((0, 0), r_max))
    for radius in range(1, r_max + 1):
        p = linear_factor(m_slope, n_slope, ball((0, 0), radius))
        _, placed = _develop_positions(p, Face("up", (0, 0)))
        tris = np.empty((len(placed), 3, 2), dtype=np.float64)
        keys = np.empty((len(placed), 3), dtype=np.int64)
        vid: dict = {}
        for q, (f, tri) in enumerate(placed):
            for r, (v, z) in enumerate(zip(f.vertices(), tri)):
                tris[q, r, 0] = z.real
                tris[q, r, 1] = z.imag
                keys[q, r] = vid.setdefault(v, len(vid))
        thresholds = np.full(len(tris), 1e-10 * _min_face_area(tris))
        if _kernel.first_overlap_ordered(tris, keys, thresholds) is not None:
            return radius
    return None
