"""Quasi-harmonic machinery on lattice balls.

A function is quasi-harmonic with factor m if at every vertex it equals a
convex combination of its six neighbor values with all weights >= m.  The
weights are directed; nothing here assumes symmetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .errors import (
    DomainTooSmallError,
    IncompleteDataError,
    InvalidArgumentError,
    NotFlatError,
    NotFoundError,
)
from .lattice import Ball, Vertex, ball, graph_distance, neighbors, vadd
from .patch import ConformalPatch, edge_length, vertex_curvature
from .trigeom import Triangle, angle_cot_bounds, mean_value_coeffs


def harmonic_factor_bound(theta_bound: float) -> float:
    """Lower weight bound cot(theta) / (6 * cot(pi - 2*theta)) for acute patches."""
    lower, upper = angle_cot_bounds(theta_bound)
    return lower / (6.0 * upper)


@dataclass(frozen=True)
class QuasiHarmonicWeights:
    """Directed weights mu_1..mu_6 at a vertex, counter-clockwise neighbor order."""

    vertex: Vertex
    displacement: Vertex
    weights: tuple[float, ...]
    harmonic_factor_bound: float

    def reconstruct(self, delta: Mapping[Vertex, float]) -> float:
        """Sum of mu_j * delta(neighbor_j); equals delta(vertex) when flat."""
        ring = neighbors(self.vertex)
        return sum(mu * delta[nj] for mu, nj in zip(self.weights, ring))


def extract_weights(p: ConformalPatch, c: Vertex, i: Vertex, theta_bound: float,
                    flat_tol: float = 1e-9) -> QuasiHarmonicWeights:
    """Explicit averaging weights for the difference function Delta_c w at i.

    For each of the six star triangles at i, the triangle at i+c is rescaled
    so the edge opposite the apex matches, the mean-value coefficients
    (a_j, b_j) of the pair are computed, and the weights are
    mu_j = (a_j + b_{j-1}) / sum(a_j + b_j).
    """
    shifted = vadd(i, c)
    for v in (i, shifted):
        if v not in p.ball.vertex_set or any(
                u not in p.ball.vertex_set for u in neighbors(v)):
            raise InvalidArgumentError(f"star of {v} must lie inside the ball")
    for v in (i, shifted):
        k_v = vertex_curvature(p, v)
        if abs(k_v) > flat_tol:
            raise NotFlatError(f"curvature {k_v:.3e} at {v} exceeds {flat_tol:.1e}")

    ring = neighbors(i)
    a = np.zeros(6)
    b = np.zeros(6)
    for j in range(6):
        nj, nj1 = ring[j], ring[(j + 1) % 6]
        source = Triangle(
            edge_length(p, nj, nj1),
            edge_length(p, i, nj1),
            edge_length(p, i, nj),
        )
        mj, mj1 = vadd(nj, c), vadd(nj1, c)
        rescale = source.l_i / edge_length(p, mj, mj1)
        target = Triangle(
            source.l_i,
            rescale * edge_length(p, shifted, mj1),
            rescale * edge_length(p, shifted, mj),
        )
        coeffs = mean_value_coeffs(source, target, theta_bound)
        a[j], b[j] = coeffs.a, coeffs.b

    total = float(np.sum(a) + np.sum(b))
    weights = tuple(float((a[j] + b[(j - 1) % 6]) / total) for j in range(6))
    return QuasiHarmonicWeights(i, c, weights, harmonic_factor_bound(theta_bound))


@dataclass(frozen=True)
class PropagationReport:
    """Outcome of the near-maximum propagation check on one ball."""

    center: Vertex
    radius: int
    level: float
    epsilon: float
    min_over_ball: float
    holds: bool
    below_level: tuple[Vertex, ...]
    hypothesis_center: bool
    hypothesis_upper: bool
    chain_holds: bool
    chain_violations: tuple[Vertex, ...]


def verify_propagation(f: Mapping[Vertex, float], m: float, i: Vertex, R: int,
                       M: float, epsilon: float) -> PropagationReport:
    """Check f >= M - epsilon on B(i, R) plus the per-distance chain.

    The chain M - f(j) <= (M - f(i)) / m^d(i,j) is what quasi-harmonicity
    with factor m forces; for arbitrary data it is reported, not assumed.
    """
    if not 0.0 < m <= 1.0 / 6.0:
        raise InvalidArgumentError(f"factor must lie in (0, 1/6], got {m}")
    if R < 0:
        raise InvalidArgumentError(f"radius must be >= 0, got {R}")
    region = ball(i, R)
    for v in region.vertices:
        if v not in f:
            raise IncompleteDataError(f"function missing vertex {v}")

    slack = 1e-12
    values = {v: float(f[v]) for v in region.vertices}
    min_over_ball = min(values.values())
    holds = min_over_ball >= M - epsilon - slack
    below = tuple(sorted(v for v in region.vertices
                         if values[v] < M - epsilon - slack))
    hypothesis_center = values[i] >= M - epsilon * m**R - slack
    hypothesis_upper = max(values.values()) <= M + slack

    head = M - values[i]
    chain_violations = []
    for v in region.vertices:
        d = graph_distance(i, v)
        if M - values[v] > head / m**d + slack:
            chain_violations.append(v)
    chain_violations.sort()
    return PropagationReport(
        center=i, radius=R, level=M, epsilon=epsilon,
        min_over_ball=min_over_ball, holds=holds, below_level=below,
        hypothesis_center=hypothesis_center, hypothesis_upper=hypothesis_upper,
        chain_holds=not chain_violations,
        chain_violations=tuple(chain_violations),
    )


class TwoFunctionBall(NamedTuple):
    center: Vertex
    f1_level: float
    f2_level: float


def find_near_constant_ball(f1: Mapping[Vertex, float], f2: Mapping[Vertex, float],
                            m: float, R: int, epsilon: float,
                            domain: Ball) -> TwoFunctionBall:
    """Find a ball B(j0, R) where f1 and f2 are both within epsilon of a level.

    Finite-domain version of the two-function search: the supremum of f1
    becomes its maximum over the domain, and the guarantee radius n*R must
    fit inside the domain, else DomainTooSmallError reports what was needed.
    On success, M - eps <= f1 <= M and N - eps <= f2 <= N hold on B(j0, R).
    """
    if not 0.0 < m <= 1.0 / 6.0:
        raise InvalidArgumentError(f"factor must lie in (0, 1/6], got {m}")
    if R < 1 or epsilon <= 0.0:
        raise InvalidArgumentError("need R >= 1 and epsilon > 0")
    for name, func in (("f1", f1), ("f2", f2)):
        for v in domain.vertices:
            if v not in func:
                raise IncompleteDataError(f"{name} missing vertex {v}")

    M = max(f1[v] for v in domain.vertices)
    M2 = max(abs(f2[v]) for v in domain.vertices)
    gap = epsilon * m**R
    n = int(math.floor(2.0 * M2 / gap)) + 1

    if n * R > domain.radius:
        raise DomainTooSmallError(
            f"search needs B(i, {n * R}) inside the domain of radius {domain.radius}",
            required_radius=n * R)

    deep = [v for v in domain.vertices
            if graph_distance(domain.center, v) <= domain.radius - n * R]
    threshold = M - epsilon * m**(n * R)
    candidates = [v for v in deep if f1[v] >= threshold]
    if not candidates:
        raise NotFoundError(
            f"no vertex with f1 within {epsilon * m**(n * R):.3e} of the maximum "
            f"has B(., {n * R}) inside the domain")
    base = max(candidates, key=lambda v: (f1[v], v))

    # running maxima F(k) of f2 over B(base, k*R)
    dist = {v: graph_distance(base, v) for v in ball(base, n * R).vertices}
    F = np.full(n + 1, -np.inf)
    for v, d in dist.items():
        k = (d + R - 1) // R
        F[k] = max(F[k], f2[v])
    F = np.maximum.accumulate(F)

    slack = 1e-15 * max(1.0, M2)
    for k in range(1, n + 1):
        if F[k] - F[k - 1] <= gap + slack:
            inner = [v for v, d in dist.items() if d <= (k - 1) * R]
            j0 = max(inner, key=lambda v: (f2[v], v))
            return TwoFunctionBall(center=j0, f1_level=M, f2_level=float(F[k]))
    raise NotFoundError("no level gap small enough; data is not quasi-harmonic "
                        f"with factor {m}")


def random_quasi_harmonic(b: Ball, factor: float, rng: np.random.Generator,
                          boundary: Mapping[Vertex, float] | None = None,
                          low: float = 0.0, high: float = 1.0) -> dict:
    """Synthetic quasi-harmonic function on a ball.

    Every interior vertex gets random directed weights >= factor summing to
    one; boundary values are random (or given), and the interior is filled
    by a direct sparse solve of the averaging system.
    """
    if not 0.0 < factor <= 1.0 / 6.0:
        raise InvalidArgumentError(f"factor must lie in (0, 1/6], got {factor}")
    verts = b.vertices
    index = {v: q for q, v in enumerate(verts)}
    interior = sorted(b.interior)
    if boundary is None:
        boundary = {v: float(rng.uniform(low, high)) for v in sorted(b.boundary)}
    values = {v: float(boundary[v]) for v in b.boundary}

    if not interior:
        return values

    int_index = {v: q for q, v in enumerate(interior)}
    slack = 1.0 - 6.0 * factor
    rows, cols, data = [], [], []
    rhs = np.zeros(len(interior))
    for q, v in enumerate(interior):
        mu = factor + slack * rng.dirichlet(np.ones(6))
        rows.append(q)
        cols.append(q)
        data.append(1.0)
        for weight, u in zip(mu, neighbors(v)):
            if u in int_index:
                rows.append(q)
                cols.append(int_index[u])
                data.append(-weight)
            else:
                rhs[q] += weight * values[u]
    matrix = scipy.sparse.csr_matrix(
        (data, (rows, cols)), shape=(len(interior), len(interior)))
    solution = scipy.sparse.linalg.spsolve(matrix, rhs)
    for v, x in zip(interior, solution):
        values[v] = float(x)
    return values
