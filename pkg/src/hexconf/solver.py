"""Prescribed-curvature Newton solver on finite balls with Dirichlet data.

The boundary factor is fixed, the interior factor is the unknown, and each
step solves the sparse linearization of the curvature map assembled from
the cotangent derivative formulas.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .errors import InvalidArgumentError, InvalidTriangleError, SolverStuckError
from .lattice import Ball, Vertex
from .patch import ConformalPatch, _ball_arrays, _corner_angles, curvature, make_patch


@dataclass(frozen=True)
class YamabeProblem:
    """Target curvature on the interior, fixed factor on the boundary."""

    ball: Ball
    boundary_w: Mapping[Vertex, float]
    target_K: Mapping[Vertex, float]
    initial_interior_w: Mapping[Vertex, float] | None = None

    def __post_init__(self):
        missing_b = [v for v in sorted(self.ball.boundary) if v not in self.boundary_w]
        if missing_b:
            raise InvalidArgumentError(f"boundary factor missing at {missing_b[:3]}")
        missing_k = [v for v in sorted(self.ball.interior) if v not in self.target_K]
        if missing_k:
            raise InvalidArgumentError(f"target curvature missing at {missing_k[:3]}")


@dataclass(frozen=True)
class SolveTrace:
    """Residual history (inf norm, accepted step scale) and the final patch."""

    iterations: tuple[tuple[float, float], ...]
    converged: bool
    final_patch: ConformalPatch


def interior_vertices(b: Ball) -> tuple[Vertex, ...]:
    return tuple(sorted(b.interior))


def curvature_jacobian(p: ConformalPatch) -> scipy.sparse.csr_matrix:
    """Sparse dK_i/dw_j; rows are sorted interior vertices, columns all vertices.

    Per face with corners (x, y, z), the angle at x responds to the factors
    with d(theta_x)/dw_x = -(cot y + cot z), d(theta_x)/dw_y = cot z and
    d(theta_x)/dw_z = cot y; K flips the sign and sums the incident faces.
    """
    arrs = _ball_arrays(p.ball)
    _, ang_a, ang_b, ang_c = _corner_angles(p)
    cot_a = 1.0 / np.tan(ang_a)
    cot_b = 1.0 / np.tan(ang_b)
    cot_c = 1.0 / np.tan(ang_c)
    ia, ib, ic = arrs.face_corners.T

    interior = interior_vertices(p.ball)
    row_of = np.full(len(arrs.vertices), -1, dtype=np.int64)
    for r, v in enumerate(interior):
        row_of[arrs.index[v]] = r

    rows, cols, data = [], [], []

    def emit(corner, other1, other2, cot1, cot2):
        live = row_of[corner] >= 0
        rows.append(row_of[corner][live])
        cols.append(corner[live])
        data.append((cot1 + cot2)[live])
        rows.append(row_of[corner][live])
        cols.append(other1[live])
        data.append(-cot2[live])
        rows.append(row_of[corner][live])
        cols.append(other2[live])
        data.append(-cot1[live])

    # K_x = 2*pi - sum(theta_x), so the Jacobian negates the angle derivatives
    emit(ia, ib, ic, cot_b, cot_c)
    emit(ib, ia, ic, cot_a, cot_c)
    emit(ic, ia, ib, cot_a, cot_b)

    return scipy.sparse.csr_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(len(interior), len(arrs.vertices)))


def _residual(p: ConformalPatch, interior, target) -> np.ndarray:
    report = curvature(p)
    return np.array([report.K[v] - target[v] for v in interior])


def solve(prob: YamabeProblem, tol: float = 1e-10, max_iter: int = 100,
          max_halvings: int = 40) -> SolveTrace:
    """Damped Newton on the interior factor; converged when ||K - target|| <= tol.

    Steps are halved until every face is a valid triangle and the residual
    norm strictly decreases; running out of halvings raises SolverStuckError,
    running out of iterations returns the trace with converged=False.
    """
    b = prob.ball
    interior = interior_vertices(b)
    boundary = {v: float(prob.boundary_w[v]) for v in b.boundary}
    if prob.initial_interior_w is not None:
        w_int = np.array([float(prob.initial_interior_w[v]) for v in interior])
    else:
        mean_b = sum(boundary.values()) / len(boundary) if boundary else 0.0
        w_int = np.full(len(interior), mean_b)

    def build(w_vec) -> ConformalPatch:
        w = dict(boundary)
        w.update({v: float(x) for v, x in zip(interior, w_vec)})
        return make_patch(b, w)

    history: list[tuple[float, float]] = []
    patch = build(w_int)
    if not interior:
        return SolveTrace(tuple(history), True, patch)
    resid = _residual(patch, interior, prob.target_K)
    norm = float(np.max(np.abs(resid)))

    for _ in range(max_iter):
        if norm <= tol:
            history.append((norm, 0.0))
            return SolveTrace(tuple(history), True, patch)

        jac = curvature_jacobian(patch)
        col_of = {v: q for q, v in enumerate(sorted(b.vertices))}
        int_cols = [col_of[v] for v in interior]
        jac_int = jac[:, int_cols]
        step = scipy.sparse.linalg.spsolve(jac_int.tocsc(), -resid)

        scale = 1.0
        for _ in range(max_halvings):
            try:
                trial = build(w_int + scale * step)
            except (InvalidTriangleError, OverflowError):
                trial = None
            if trial is not None:
                trial_resid = _residual(trial, interior, prob.target_K)
                trial_norm = float(np.max(np.abs(trial_resid)))
                if trial_norm < norm:
                    break
            scale *= 0.5
        else:
            raise SolverStuckError(
                f"no valid decreasing step at residual {norm:.3e}")

        history.append((norm, scale))
        w_int = w_int + scale * step
        patch, resid, norm = trial, trial_resid, trial_norm

    history.append((norm, 0.0))
    return SolveTrace(tuple(history), norm <= tol, patch)
