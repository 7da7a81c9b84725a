"""Pure-Python overlap detection; same contract as the compiled kernel.

Faces are triangles in the plane; candidate pairs come from a uniform grid
whose cell matches the largest face extent, pair areas from convex
clipping.  Pairs sharing a lattice vertex are never reported.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def _clip_area(subject, clip) -> float:
    """Area of the intersection of two CCW triangles (Sutherland-Hodgman)."""
    poly = list(subject)
    for q in range(3):
        ux, uy = clip[q]
        vx, vy = clip[(q + 1) % 3]
        ex, ey = vx - ux, vy - uy
        incoming = poly
        if not incoming:
            return 0.0
        poly = []
        prev = incoming[-1]
        d_prev = ex * (prev[1] - uy) - ey * (prev[0] - ux)
        for cur in incoming:
            d_cur = ex * (cur[1] - uy) - ey * (cur[0] - ux)
            if (d_cur >= 0.0) != (d_prev >= 0.0):
                t = d_prev / (d_prev - d_cur)
                poly.append((prev[0] + t * (cur[0] - prev[0]),
                             prev[1] + t * (cur[1] - prev[1])))
            if d_cur >= 0.0:
                poly.append(cur)
            prev, d_prev = cur, d_cur
    if len(poly) < 3:
        return 0.0
    area = 0.0
    for q in range(len(poly)):
        x1, y1 = poly[q]
        x2, y2 = poly[(q + 1) % len(poly)]
        area += x1 * y2 - x2 * y1
    return abs(area) * 0.5


def _ccw(tri):
    (ax, ay), (bx, by), (cx, cy) = tri
    if (bx - ax) * (cy - ay) - (by - ay) * (cx - ax) < 0.0:
        return (tri[0], tri[2], tri[1])
    return tri


def _pair_area(tris, i, j) -> float:
    ti = _ccw(((tris[i, 0, 0], tris[i, 0, 1]),
               (tris[i, 1, 0], tris[i, 1, 1]),
               (tris[i, 2, 0], tris[i, 2, 1])))
    tj = _ccw(((tris[j, 0, 0], tris[j, 0, 1]),
               (tris[j, 1, 0], tris[j, 1, 1]),
               (tris[j, 2, 0], tris[j, 2, 1])))
    return _clip_area(ti, tj)


def _share_vertex(keys, i, j) -> bool:
    for a in range(3):
        for b in range(3):
            if keys[i, a] == keys[j, b]:
                return True
    return False


def _geometry(tris):
    lo = tris.min(axis=1)
    hi = tris.max(axis=1)
    extent = hi - lo
    diam = float(extent.max()) if len(tris) else 1.0
    cell = max(diam, 1e-300)
    return lo, hi, cell


def _cells(lo_i, hi_i, origin, cell):
    ix0 = int((lo_i[0] - origin[0]) // cell)
    ix1 = int((hi_i[0] - origin[0]) // cell)
    iy0 = int((lo_i[1] - origin[1]) // cell)
    iy1 = int((hi_i[1] - origin[1]) // cell)
    return [(ix, iy) for ix in range(ix0, ix1 + 1) for iy in range(iy0, iy1 + 1)]


def _boxes_disjoint(lo, hi, i, j) -> bool:
    return (hi[i, 0] < lo[j, 0] or hi[j, 0] < lo[i, 0]
            or hi[i, 1] < lo[j, 1] or hi[j, 1] < lo[i, 1])


def all_overlaps(tris: np.ndarray, keys: np.ndarray, threshold: float):
    """All pairs (i < j) of vertex-disjoint faces with intersection > threshold."""
    n = len(tris)
    if n < 2:
        return []
    lo, hi, cell = _geometry(tris)
    origin = lo.min(axis=0)
    grid: dict = {}
    for i in range(n):
        for key in _cells(lo[i], hi[i], origin, cell):
            grid.setdefault(key, []).append(i)
    out = []
    seen_stamp = [-1] * n
    for i in range(n):
        for key in _cells(lo[i], hi[i], origin, cell):
            for j in grid[key]:
                if j <= i or seen_stamp[j] == i:
                    continue
                seen_stamp[j] = i
                if _share_vertex(keys, i, j) or _boxes_disjoint(lo, hi, i, j):
                    continue
                area = _pair_area(tris, i, j)
                if area > threshold:
                    out.append((i, j, area))
    out.sort()
    return out


def first_overlap_ordered(tris: np.ndarray, keys: np.ndarray, thresholds: np.ndarray):
    """First overlap in insertion order: face i is tested against all j < i
    with thresholds[i], then inserted.  Returns (j, i, area) or None."""
    n = len(tris)
    if n < 2:
        return None
    lo, hi, cell = _geometry(tris)
    origin = lo.min(axis=0)
    grid: dict = {}
    seen_stamp = [-1] * n
    for i in range(n):
        cells = _cells(lo[i], hi[i], origin, cell)
        for key in cells:
            for j in grid.get(key, ()):
                if seen_stamp[j] == i:
                    continue
                seen_stamp[j] = i
                if _share_vertex(keys, i, j) or _boxes_disjoint(lo, hi, i, j):
                    continue
                area = _pair_area(tris, i, j)
                if area > thresholds[i]:
                    return (j, i, area)
        for key in cells:
            grid.setdefault(key, []).append(i)
    return None
