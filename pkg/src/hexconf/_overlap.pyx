# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled overlap kernel; mirrors hexconf._overlap_py exactly."""

from libc.math cimport floor
from libc.stdlib cimport free, malloc

BACKEND = "cython"


cdef double _clip_area(double* sx, double* sy, double* cx, double* cy) nogil:
    cdef double px[16]
    cdef double py[16]
    cdef double qx[16]
    cdef double qy[16]
    cdef int np_ = 3, nq, q, r, rp
    cdef double ux, uy, ex, ey, d_prev, d_cur, t, area
    cdef double* inx
    cdef double* iny
    for r in range(3):
        px[r] = sx[r]
        py[r] = sy[r]
    for q in range(3):
        ux = cx[q]
        uy = cy[q]
        ex = cx[(q + 1) % 3] - ux
        ey = cy[(q + 1) % 3] - uy
        if np_ == 0:
            return 0.0
        nq = 0
        rp = np_ - 1
        d_prev = ex * (py[rp] - uy) - ey * (px[rp] - ux)
        for r in range(np_):
            d_cur = ex * (py[r] - uy) - ey * (px[r] - ux)
            if (d_cur >= 0.0) != (d_prev >= 0.0):
                t = d_prev / (d_prev - d_cur)
                qx[nq] = px[rp] + t * (px[r] - px[rp])
                qy[nq] = py[rp] + t * (py[r] - py[rp])
                nq += 1
            if d_cur >= 0.0:
                qx[nq] = px[r]
                qy[nq] = py[r]
                nq += 1
            rp = r
            d_prev = d_cur
        np_ = nq
        for r in range(np_):
            px[r] = qx[r]
            py[r] = qy[r]
    if np_ < 3:
        return 0.0
    area = 0.0
    for r in range(np_):
        area += px[r] * py[(r + 1) % np_] - px[(r + 1) % np_] * py[r]
    if area < 0.0:
        area = -area
    return area * 0.5


cdef double _pair_area(double[:, :, ::1] tris, Py_ssize_t i, Py_ssize_t j) nogil:
    cdef double sx[3]
    cdef double sy[3]
    cdef double cx[3]
    cdef double cy[3]
    cdef double tmp
    cdef int r
    for r in range(3):
        sx[r] = tris[i, r, 0]
        sy[r] = tris[i, r, 1]
        cx[r] = tris[j, r, 0]
        cy[r] = tris[j, r, 1]
    if (sx[1] - sx[0]) * (sy[2] - sy[0]) - (sy[1] - sy[0]) * (sx[2] - sx[0]) < 0.0:
        tmp = sx[1]; sx[1] = sx[2]; sx[2] = tmp
        tmp = sy[1]; sy[1] = sy[2]; sy[2] = tmp
    if (cx[1] - cx[0]) * (cy[2] - cy[0]) - (cy[1] - cy[0]) * (cx[2] - cx[0]) < 0.0:
        tmp = cx[1]; cx[1] = cx[2]; cx[2] = tmp
        tmp = cy[1]; cy[1] = cy[2]; cy[2] = tmp
    return _clip_area(sx, sy, cx, cy)


cdef bint _share_vertex(long long[:, ::1] keys, Py_ssize_t i, Py_ssize_t j) nogil:
    cdef int a, b
    for a in range(3):
        for b in range(3):
            if keys[i, a] == keys[j, b]:
                return 1
    return 0


cdef struct _Grid:
    double ox, oy, cell
    Py_ssize_t nx, ny
    Py_ssize_t* start     # nx*ny + 1 prefix offsets
    Py_ssize_t* entries   # face indices, grouped by cell
    Py_ssize_t* fill      # scratch cursor per cell


cdef void _bboxes(double[:, :, ::1] tris, double* lo, double* hi) nogil:
    cdef Py_ssize_t i, n = tris.shape[0]
    cdef int r
    cdef double x, y
    for i in range(n):
        lo[2 * i] = tris[i, 0, 0]
        hi[2 * i] = tris[i, 0, 0]
        lo[2 * i + 1] = tris[i, 0, 1]
        hi[2 * i + 1] = tris[i, 0, 1]
        for r in range(1, 3):
            x = tris[i, r, 0]
            y = tris[i, r, 1]
            if x < lo[2 * i]:
                lo[2 * i] = x
            if x > hi[2 * i]:
                hi[2 * i] = x
            if y < lo[2 * i + 1]:
                lo[2 * i + 1] = y
            if y > hi[2 * i + 1]:
                hi[2 * i + 1] = y


cdef bint _grid_init(_Grid* g, double* lo, double* hi, Py_ssize_t n) nogil:
    cdef double diam = 0.0, gx0, gy0, gx1, gy1, e
    cdef Py_ssize_t i, ncells, total
    cdef Py_ssize_t ix0, ix1, iy0, iy1, ix, iy
    gx0 = lo[0]; gy0 = lo[1]; gx1 = hi[0]; gy1 = hi[1]
    for i in range(n):
        e = hi[2 * i] - lo[2 * i]
        if e > diam:
            diam = e
        e = hi[2 * i + 1] - lo[2 * i + 1]
        if e > diam:
            diam = e
        if lo[2 * i] < gx0:
            gx0 = lo[2 * i]
        if lo[2 * i + 1] < gy0:
            gy0 = lo[2 * i + 1]
        if hi[2 * i] > gx1:
            gx1 = hi[2 * i]
        if hi[2 * i + 1] > gy1:
            gy1 = hi[2 * i + 1]
    if diam <= 0.0:
        diam = 1.0
    g.cell = diam
    g.ox = gx0
    g.oy = gy0
    g.nx = <Py_ssize_t>floor((gx1 - gx0) / diam) + 2
    g.ny = <Py_ssize_t>floor((gy1 - gy0) / diam) + 2
    if g.nx > 2048:
        g.cell = (gx1 - gx0) / 2046.0
        if (gy1 - gy0) / 2046.0 > g.cell:
            g.cell = (gy1 - gy0) / 2046.0
        g.nx = <Py_ssize_t>floor((gx1 - gx0) / g.cell) + 2
        g.ny = <Py_ssize_t>floor((gy1 - gy0) / g.cell) + 2
    if g.ny > 2048:
        if (gy1 - gy0) / 2046.0 > g.cell:
            g.cell = (gy1 - gy0) / 2046.0
        g.nx = <Py_ssize_t>floor((gx1 - gx0) / g.cell) + 2
        g.ny = <Py_ssize_t>floor((gy1 - gy0) / g.cell) + 2
    ncells = g.nx * g.ny
    g.start = <Py_ssize_t*>malloc((ncells + 1) * sizeof(Py_ssize_t))
    g.fill = <Py_ssize_t*>malloc(ncells * sizeof(Py_ssize_t))
    if g.start == NULL or g.fill == NULL:
        return 0
    for i in range(ncells + 1):
        g.start[i] = 0
    total = 0
    for i in range(n):
        ix0 = <Py_ssize_t>floor((lo[2 * i] - g.ox) / g.cell)
        ix1 = <Py_ssize_t>floor((hi[2 * i] - g.ox) / g.cell)
        iy0 = <Py_ssize_t>floor((lo[2 * i + 1] - g.oy) / g.cell)
        iy1 = <Py_ssize_t>floor((hi[2 * i + 1] - g.oy) / g.cell)
        for ix in range(ix0, ix1 + 1):
            for iy in range(iy0, iy1 + 1):
                g.start[ix * g.ny + iy + 1] += 1
                total += 1
    for i in range(ncells):
        g.start[i + 1] += g.start[i]
        g.fill[i] = g.start[i]
    g.entries = <Py_ssize_t*>malloc(total * sizeof(Py_ssize_t) if total > 0 else sizeof(Py_ssize_t))
    if g.entries == NULL:
        return 0
    for i in range(n):
        ix0 = <Py_ssize_t>floor((lo[2 * i] - g.ox) / g.cell)
        ix1 = <Py_ssize_t>floor((hi[2 * i] - g.ox) / g.cell)
        iy0 = <Py_ssize_t>floor((lo[2 * i + 1] - g.oy) / g.cell)
        iy1 = <Py_ssize_t>floor((hi[2 * i + 1] - g.oy) / g.cell)
        for ix in range(ix0, ix1 + 1):
            for iy in range(iy0, iy1 + 1):
                g.entries[g.fill[ix * g.ny + iy]] = i
                g.fill[ix * g.ny + iy] += 1
    return 1


cdef void _grid_free(_Grid* g) nogil:
    if g.start != NULL:
        free(g.start)
    if g.entries != NULL:
        free(g.entries)
    if g.fill != NULL:
        free(g.fill)


def all_overlaps(double[:, :, ::1] tris, long long[:, ::1] keys, double threshold):
    """All pairs (i < j) of vertex-disjoint faces with intersection > threshold."""
    cdef Py_ssize_t n = tris.shape[0]
    if n < 2:
        return []
    cdef double* lo = <double*>malloc(2 * n * sizeof(double))
    cdef double* hi = <double*>malloc(2 * n * sizeof(double))
    cdef Py_ssize_t* stamp = <Py_ssize_t*>malloc(n * sizeof(Py_ssize_t))
    cdef _Grid g
    g.start = NULL
    g.entries = NULL
    g.fill = NULL
    out = []
    cdef Py_ssize_t i, j, p, ix, iy, ix0, ix1, iy0, iy1, c
    cdef double area
    try:
        if lo == NULL or hi == NULL or stamp == NULL:
            raise MemoryError()
        _bboxes(tris, lo, hi)
        if not _grid_init(&g, lo, hi, n):
            raise MemoryError()
        for i in range(n):
            stamp[i] = -1
        for i in range(n):
            ix0 = <Py_ssize_t>floor((lo[2 * i] - g.ox) / g.cell)
            ix1 = <Py_ssize_t>floor((hi[2 * i] - g.ox) / g.cell)
            iy0 = <Py_ssize_t>floor((lo[2 * i + 1] - g.oy) / g.cell)
            iy1 = <Py_ssize_t>floor((hi[2 * i + 1] - g.oy) / g.cell)
            for ix in range(ix0, ix1 + 1):
                for iy in range(iy0, iy1 + 1):
                    c = ix * g.ny + iy
                    for p in range(g.start[c], g.start[c + 1]):
                        j = g.entries[p]
                        if j <= i or stamp[j] == i:
                            continue
                        stamp[j] = i
                        if _share_vertex(keys, i, j):
                            continue
                        if (hi[2 * i] < lo[2 * j] or hi[2 * j] < lo[2 * i]
                                or hi[2 * i + 1] < lo[2 * j + 1]
                                or hi[2 * j + 1] < lo[2 * i + 1]):
                            continue
                        area = _pair_area(tris, i, j)
                        if area > threshold:
                            out.append((i, j, area))
    finally:
        if lo != NULL:
            free(lo)
        if hi != NULL:
            free(hi)
        if stamp != NULL:
            free(stamp)
        _grid_free(&g)
    out.sort()
    return out


def first_overlap_ordered(double[:, :, ::1] tris, long long[:, ::1] keys,
                          double[::1] thresholds):
    """First overlap in insertion order: face i is tested against all j < i
    with thresholds[i], then inserted.  Returns (j, i, area) or None."""
    cdef Py_ssize_t n = tris.shape[0]
    if n < 2:
        return None
    cdef double* lo = <double*>malloc(2 * n * sizeof(double))
    cdef double* hi = <double*>malloc(2 * n * sizeof(double))
    cdef Py_ssize_t* stamp = <Py_ssize_t*>malloc(n * sizeof(Py_ssize_t))
    cdef _Grid g
    g.start = NULL
    g.entries = NULL
    g.fill = NULL
    cdef Py_ssize_t i, j, p, ix, iy, ix0, ix1, iy0, iy1, c
    cdef double area
    result = None
    try:
        if lo == NULL or hi == NULL or stamp == NULL:
            raise MemoryError()
        _bboxes(tris, lo, hi)
        if not _grid_init(&g, lo, hi, n):
            raise MemoryError()
        for i in range(n):
            stamp[i] = -1
        # reuse fill[] as per-cell insertion cursors so only j < i is visible
        for c in range(g.nx * g.ny):
            g.fill[c] = g.start[c]
        for i in range(n):
            if result is not None:
                break
            ix0 = <Py_ssize_t>floor((lo[2 * i] - g.ox) / g.cell)
            ix1 = <Py_ssize_t>floor((hi[2 * i] - g.ox) / g.cell)
            iy0 = <Py_ssize_t>floor((lo[2 * i + 1] - g.oy) / g.cell)
            iy1 = <Py_ssize_t>floor((hi[2 * i + 1] - g.oy) / g.cell)
            for ix in range(ix0, ix1 + 1):
                if result is not None:
                    break
                for iy in range(iy0, iy1 + 1):
                    if result is not None:
                        break
                    c = ix * g.ny + iy
                    for p in range(g.start[c], g.fill[c]):
                        j = g.entries[p]
                        if stamp[j] == i:
                            continue
                        stamp[j] = i
                        if _share_vertex(keys, i, j):
                            continue
                        if (hi[2 * i] < lo[2 * j] or hi[2 * j] < lo[2 * i]
                                or hi[2 * i + 1] < lo[2 * j + 1]
                                or hi[2 * j + 1] < lo[2 * i + 1]):
                            continue
                        area = _pair_area(tris, i, j)
                        if area > thresholds[i]:
                            result = (j, i, area)
                            break
            if result is None:
                for ix in range(ix0, ix1 + 1):
                    for iy in range(iy0, iy1 + 1):
                        c = ix * g.ny + iy
                        g.entries[g.fill[c]] = i
                        g.fill[c] += 1
    finally:
        if lo != NULL:
            free(lo)
        if hi != NULL:
            free(hi)
        if stamp != NULL:
            free(stamp)
        _grid_free(&g)
    return result
