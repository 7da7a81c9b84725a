"""Euclidean triangle calculus on edge lengths.

Edge lengths are indexed by the opposite vertex: l_i is the side not
touching vertex i.  Everything here works at fixed l_i, which is the
convention the monotone deformation flow and the mean-value coefficients
are built on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import InvalidArgumentError, InvalidTriangleError, NotAcuteError

_ANGLE_EPS = 1e-11          # treat angle differences below this as zero
_LENGTH_REL_EPS = 1e-13     # relative tolerance for "lengths already equal"
_EVENT_PARAM_TOL = 1e-12    # bisection tolerance on the leg parameter


def _angles_from_lengths(l_i, l_j, l_k):
    """Law-of-cosines angles; accepts scalars or numpy arrays."""
    cos_i = (l_j * l_j + l_k * l_k - l_i * l_i) / (2.0 * l_j * l_k)
    cos_j = (l_i * l_i + l_k * l_k - l_j * l_j) / (2.0 * l_i * l_k)
    cos_k = (l_i * l_i + l_j * l_j - l_k * l_k) / (2.0 * l_i * l_j)
    return (
        np.arccos(np.clip(cos_i, -1.0, 1.0)),
        np.arccos(np.clip(cos_j, -1.0, 1.0)),
        np.arccos(np.clip(cos_k, -1.0, 1.0)),
    )


@dataclass(frozen=True)
class Triangle:
    """Three positive edge lengths satisfying strict triangle inequalities."""

    l_i: float
    l_j: float
    l_k: float

    def __post_init__(self):
        li, lj, lk = self.l_i, self.l_j, self.l_k
        if not (li > 0.0 and lj > 0.0 and lk > 0.0):
            raise InvalidTriangleError(f"non-positive edge length in ({li}, {lj}, {lk})")
        if li + lj <= lk or lj + lk <= li or li + lk <= lj:
            raise InvalidTriangleError(f"triangle inequality violated for ({li}, {lj}, {lk})")

    @cached_property
    def _angles(self) -> tuple[float, float, float]:
        ti, tj, tk = _angles_from_lengths(self.l_i, self.l_j, self.l_k)
        return (float(ti), float(tj), float(tk))

    @property
    def theta_i(self) -> float:
        return self._angles[0]

    @property
    def theta_j(self) -> float:
        return self._angles[1]

    @property
    def theta_k(self) -> float:
        return self._angles[2]

    def max_angle(self) -> float:
        return max(self._angles)

    def is_acute(self) -> bool:
        return self.max_angle() < math.pi / 2.0


def angles(t: Triangle) -> tuple[float, float, float]:
    """Inner angles (theta_i, theta_j, theta_k); sums to pi."""
    return t._angles


def angle_log_derivatives(t: Triangle) -> np.ndarray:
    """Matrix D[x][y] = d(theta_x)/d(u_y) with u were= log l, rows/cols (i,j,k).

    Off-diagonal entries are -cot(theta_z) for the third index z, diagonal
    entries cot(theta_y) + cot(theta_z); columns sum to zero because the
    angle sum is constant.
    """
    ti, tj, tk = angles(t)
    ci, cj, ck = 1.0 / math.tan(ti), 1.0 / math.tan(tj), 1.0 / math.tan(tk)
    return np.array([
        [cj + ck, -ck, -cj],
        [-ck, ci + ck, -ci],
        [-cj, -ci, ci + cj],
    ])


def angle_cot_bounds(theta_bound: float) -> tuple[float, float]:
    """Bounds [cot(theta), cot(pi - 2*theta)] on any cotangent seen while
    deforming between triangles whose angles all lie in [pi - 2*theta, theta]."""
    if not 0.0 < theta_bound < math.pi / 2.0:
        raise InvalidArgumentError(f"theta bound must lie in (0, pi/2), got {theta_bound}")
    return 1.0 / math.tan(theta_bound), 1.0 / math.tan(math.pi - 2.0 * theta_bound)


class PathSample(NamedTuple):
    t: float
    triangle: Triangle
    u_j: float
    u_k: float


@dataclass(frozen=True)
class DeformPath:
    """Sampled monotone deformation between two triangles sharing l_i."""

    l_i: float
    t: np.ndarray
    l_j: np.ndarray
    l_k: np.ndarray
    theta_i: np.ndarray
    theta_j: np.ndarray
    theta_k: np.ndarray
    leg_breaks: tuple[int, ...]

    @cached_property
    def u_j(self) -> np.ndarray:
        return np.log(self.l_j / self.l_j[0])

    @cached_property
    def u_k(self) -> np.ndarray:
        return np.log(self.l_k / self.l_k[0])

    @property
    def samples(self) -> list[PathSample]:
        uj, uk = self.u_j, self.u_k
        return [
            PathSample(float(self.t[p]),
                       Triangle(self.l_i, float(self.l_j[p]), float(self.l_k[p])),
                       float(uj[p]), float(uk[p]))
            for p in range(len(self.t))
        ]


@dataclass(frozen=True)
class MeanValueCoeffs:
    """Coefficients a, b with theta_i(target) - theta_i(source) = -a*u_j - b*u_k."""

    a: float
    b: float
    theta_bound: float
    lower: float
    upper: float


class _Leg:
    """One segment of the deformation; s runs over [0, 1]."""

    def lengths(self, s):
        raise NotImplementedError

    def restricted(self, s_hi: float) -> "_Leg":
        return _SubLeg(self, s_hi)


class _SubLeg(_Leg):
    def __init__(self, base: _Leg, s_hi: float):
        self.base = base
        self.s_hi = s_hi

    def lengths(self, s):
        return self.base.lengths(np.asarray(s) * self.s_hi)


class _AngleLeg(_Leg):
    """theta_j, theta_k linear in s; lengths follow by the sine law."""

    def __init__(self, l_i, tj0, tj1, tk0, tk1):
        self.l_i = l_i
        self.tj0, self.tj1 = tj0, tj1
        self.tk0, self.tk1 = tk0, tk1

    def lengths(self, s):
        s = np.asarray(s, dtype=float)
        tj = self.tj0 + (self.tj1 - self.tj0) * s
        tk = self.tk0 + (self.tk1 - self.tk0) * s
        ti = math.pi - tj - tk
        scale = self.l_i / np.sin(ti)
        return scale * np.sin(tj), scale * np.sin(tk)


class _EdgeLeg(_Leg):
    """Both lengths linear in s; one of them is (numerically) constant."""

    def __init__(self, lj0, lj1, lk0, lk1):
        self.lj0, self.lj1 = lj0, lj1
        self.lk0, self.lk1 = lk0, lk1

    def lengths(self, s):
        s = np.asarray(s, dtype=float)
        return (self.lj0 + (self.lj1 - self.lj0) * s,
                self.lk0 + (self.lk1 - self.lk0) * s)


def _sgn(x: float, eps: float) -> int:
    if x > eps:
        return 1
    if x < -eps:
        return -1
    return 0


def _bisect_event(quantity, target, tol=_EVENT_PARAM_TOL):
    """Earliest s in (0, 1] where the monotone quantity meets target, or None."""
    h0 = quantity(0.0) - target
    h1 = quantity(1.0) - target
    if abs(h0) < _ANGLE_EPS * 0.1:
        return None
    if h0 * h1 > 0.0:
        return None
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (quantity(mid) - target) * h0 > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _leg_angle(leg: _Leg, which: int):
    def q(s):
        lj, lk = leg.lengths(s)
        return float(_angles_from_lengths(_leg_li(leg), lj, lk)[which])
    return q


def _leg_li(leg: _Leg) -> float:
    while isinstance(leg, _SubLeg):
        leg = leg.base
    if isinstance(leg, _AngleLeg):
        return leg.l_i
    raise AssertionError("edge legs carry no l_i")


def _build_legs(l_i, cur, tgt):
    """Case dispatch for the monotone flow; at most three legs."""
    legs = []
    for _ in range(4):
        ljc, lkc = cur
        ljt, lkt = tgt
        scale = max(l_i, ljc, lkc, ljt, lkt)
        dlj, dlk = ljt - ljc, lkt - lkc
        if abs(dlj) <= _LENGTH_REL_EPS * scale and abs(dlk) <= _LENGTH_REL_EPS * scale:
            return legs
        if abs(dlj) <= _LENGTH_REL_EPS * scale or abs(dlk) <= _LENGTH_REL_EPS * scale:
            legs.append(_EdgeLeg(ljc, ljt, lkc, lkt))
            return legs

        tic, tjc, tkc = _angles_from_lengths(l_i, ljc, lkc)
        tit, tjt, tkt = _angles_from_lengths(l_i, ljt, lkt)
        dtj, dtk = float(tjt - tjc), float(tkt - tkc)
        sj, sk = _sgn(dtj, _ANGLE_EPS), _sgn(dtk, _ANGLE_EPS)

        if sj * sk >= 0:
            legs.append(_AngleLeg(l_i, float(tjc), float(tjt), float(tkc), float(tkt)))
            return legs

        conflict_j = sj * _sgn(dlj, _LENGTH_REL_EPS * scale) < 0
        conflict_k = sk * _sgn(dlk, _LENGTH_REL_EPS * scale) < 0
        if conflict_j and conflict_k:
            raise AssertionError("impossible sign pattern in deformation dispatch")

        if not conflict_j and not conflict_k:
            # angles trade at equal rate with theta_i pinned (circumcircle motion)
            leg = _AngleLeg(l_i, float(tjc), float(tjt), float(tkc),
                            float(math.pi - tic - tjt))
            watched = [
                (_leg_angle(leg, 2), float(tkt), None),
                (lambda s, L=leg: float(L.lengths(s)[0]), ljt, ("lj", ljt)),
                (lambda s, L=leg: float(L.lengths(s)[1]), lkt, ("lk", lkt)),
            ]
        elif conflict_j:
            # freeze l_j, march l_k toward its target
            leg = _EdgeLeg(ljc, ljc, lkc, lkt)
            watched = [
                (_leg_angle_fixed(leg, l_i, 0), float(tit), None),
                (_leg_angle_fixed(leg, l_i, 1), float(tjt), None),
                (_leg_angle_fixed(leg, l_i, 2), float(tkt), None),
            ]
        else:
            # freeze l_k, march l_j toward its target
            leg = _EdgeLeg(ljc, ljt, lkc, lkc)
            watched = [
                (_leg_angle_fixed(leg, l_i, 0), float(tit), None),
                (_leg_angle_fixed(leg, l_i, 1), float(tjt), None),
                (_leg_angle_fixed(leg, l_i, 2), float(tkt), None),
            ]

        s_star, snap = 1.0, None
        for quantity, target, snap_info in watched:
            hit = _bisect_event(quantity, target)
            if hit is not None and hit < s_star:
                s_star, snap = hit, snap_info
        if s_star >= 1.0:
            legs.append(leg)
        else:
            legs.append(leg.restricted(s_star))
        lj_new, lk_new = leg.lengths(s_star)
        lj_new, lk_new = float(lj_new), float(lk_new)
        if snap is not None:
            if snap[0] == "lj":
                lj_new = snap[1]
            else:
                lk_new = snap[1]
        cur = (lj_new, lk_new)
    raise AssertionError("deformation dispatch did not terminate in three legs")


def _leg_angle_fixed(leg: _EdgeLeg, l_i: float, which: int):
    def q(s):
        lj, lk = leg.lengths(s)
        return float(_angles_from_lengths(l_i, lj, lk)[which])
    return q


def _sample_legs(l_i, legs, cur0, tgt, steps):
    """Uniformly sample each leg, snapping shared junctions and endpoints."""
    if not legs:
        t = np.linspace(0.0, 1.0, steps + 1)
        lj = np.full(steps + 1, cur0[0])
        lk = np.full(steps + 1, cur0[1])
        return t, lj, lk, (0, steps)
    nlegs = len(legs)
    ts, ljs, lks, breaks = [], [], [], [0]
    for q, leg in enumerate(legs):
        s = np.linspace(0.0, 1.0, steps + 1)
        lj, lk = leg.lengths(s)
        lj = np.array(lj, dtype=float, copy=True)
        lk = np.array(lk, dtype=float, copy=True)
        if q == nlegs - 1:
            lj[-1], lk[-1] = tgt
        if q > 0:
            lj[0], lk[0] = ljs[-1][-1], lks[-1][-1]
        t = (q + s) / nlegs
        ts.append(t)
        ljs.append(lj)
        lks.append(lk)
        breaks.append(breaks[-1] + steps)
    t = np.concatenate([a if q == 0 else a[1:] for q, a in enumerate(ts)])
    lj = np.concatenate([a if q == 0 else a[1:] for q, a in enumerate(ljs)])
    lk = np.concatenate([a if q == 0 else a[1:] for q, a in enumerate(lks)])
    return t, lj, lk, tuple(breaks)


def _monotone_within(values: np.ndarray, tol: float) -> bool:
    d = np.diff(values)
    return bool(np.all(d >= -tol) or np.all(d <= tol))


def deform_path(source: Triangle, target: Triangle, steps: int = 512) -> DeformPath:
    """Monotone deformation from source to target at fixed l_i.

    Both l_j(t), l_k(t) and all three angles move monotonically; the path
    is a concatenation of at most three legs (angle-linear, one-edge-fixed,
    or equal-rate angle trade), with event detection stopping a leg as soon
    as any coordinate reaches its target value.
    """
    if steps < 1:
        raise InvalidArgumentError("steps must be >= 1")
    scale = max(source.l_i, target.l_i)
    if abs(source.l_i - target.l_i) > 1e-12 * scale:
        raise InvalidArgumentError(
            f"shared edge must match: {source.l_i} vs {target.l_i}")
    for tri, name in ((source, "source"), (target, "target")):
        if not tri.is_acute():
            raise NotAcuteError(f"{name} triangle has max angle {tri.max_angle():.6f} >= pi/2")

    l_i = source.l_i
    cur = (source.l_j, source.l_k)
    tgt = (target.l_j, target.l_k)
    legs = _build_legs(l_i, cur, tgt)

    n = steps
    for _ in range(4):
        t, lj, lk, breaks = _sample_legs(l_i, legs, cur, tgt, n)
        ti, tj, tk = _angles_from_lengths(l_i, lj, lk)
        ok = all(_monotone_within(v, 1e-10) for v in (lj, lk, ti, tj, tk))
        if ok:
            return DeformPath(l_i, t, lj, lk, ti, tj, tk, breaks)
        n *= 2
    raise AssertionError("deformation path failed the sampled monotonicity check")


def _stieltjes_trapezoid(values: np.ndarray, du: np.ndarray) -> float:
    return float(np.sum(0.5 * (values[1:] + values[:-1]) * np.diff(du)))


def mean_value_coeffs(source: Triangle, target: Triangle, theta_bound: float,
                      steps: int = 512, refine_tol: float = 3e-10,
                      max_steps: int = 1 << 16) -> MeanValueCoeffs:
    """Coefficients a, b in theta_i(target) - theta_i(source) = -a*u_j - b*u_k.

    a is the u_j-weighted average of cot(theta_k) along the monotone
    deformation (b symmetrically), computed by composite trapezoid over the
    path samples and refined by step doubling until both integrals settle.
    When an edge does not move at all the corresponding coefficient defaults
    to the endpoint cotangent clamped into [cot(theta), cot(pi - 2 theta)].
    """
    lower, upper = angle_cot_bounds(theta_bound)
    for tri, name in ((source, "source"), (target, "target")):
        if tri.max_angle() > theta_bound + 1e-12:
            raise NotAcuteError(
                f"{name} triangle max angle {tri.max_angle():.6f} exceeds bound {theta_bound:.6f}")

    # tolerances scale with the total log-length change so that the
    # normalized coefficients a = I/u settle to ~refine_tol themselves
    tol_a = tol_b = None
    prev = None
    n = steps
    while True:
        path = deform_path(source, target, steps=n)
        cot_j = 1.0 / np.tan(path.theta_j)
        cot_k = 1.0 / np.tan(path.theta_k)
        int_a = _stieltjes_trapezoid(cot_k, path.u_j)
        int_b = _stieltjes_trapezoid(cot_j, path.u_k)
        if tol_a is None:
            tol_a = refine_tol * abs(float(path.u_j[-1])) + 1e-13
            tol_b = refine_tol * abs(float(path.u_k[-1])) + 1e-13
        if prev is not None and abs(int_a - prev[0]) < tol_a \
                and abs(int_b - prev[1]) < tol_b:
            break
        if n >= max_steps:
            break
        prev = (int_a, int_b)
        n *= 2

    u_j_total = float(path.u_j[-1])
    u_k_total = float(path.u_k[-1])
    if abs(u_j_total) > 1e-13:
        a = int_a / u_j_total
    else:
        a = min(max(float(cot_k[-1]), lower), upper)
    if abs(u_k_total) > 1e-13:
        b = int_b / u_k_total
    else:
        b = min(max(float(cot_j[-1]), lower), upper)
    return MeanValueCoeffs(a=a, b=b, theta_bound=theta_bound, lower=lower, upper=upper)
