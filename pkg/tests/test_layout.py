"""Developing map, overlap detection, similarity extraction."""

import math

import numpy as np
import pytest

from hexconf import (
    DegenerateError,
    Face,
    LayoutResult,
    NotLinearError,
    ball,
    curvature,
    develop,
    edge_length,
    extract_similarity,
    find_overlap,
    linear_factor,
    make_patch,
    overlap_radius,
    to_plane,
)
from hexconf import _overlap_py

try:
    from hexconf import _overlap as _overlap_cy
except ImportError:
    _overlap_cy = None


def test_develop_regular_matches_lattice_embedding():
    b = ball((0, 0), 4)
    layout = develop(linear_factor(0.0, 0.0, b))
    for v in b.vertices:
        assert abs(layout.positions[v] - to_plane(v)) <= 1e-12
    assert layout.holonomy_residual <= 1e-12
    assert layout.all_counter_clockwise()


def test_develop_linear_factor_flat():
    layout = develop(linear_factor(0.1, -0.05, ball((0, 0), 5)))
    assert layout.holonomy_residual <= 1e-8
    assert layout.all_counter_clockwise()


def test_develop_placed_lengths_match_metric():
    p = linear_factor(0.12, 0.05, ball((0, 0), 4))
    layout = develop(p)
    for f, tri in layout.placed_faces:
        va, vb, vc = f.vertices()
        for (x, y, za, zb) in ((va, vb, tri[0], tri[1]),
                               (vb, vc, tri[1], tri[2]),
                               (va, vc, tri[0], tri[2])):
            length = edge_length(p, x, y)
            assert abs(abs(za - zb) - length) <= 1e-9 * length


def test_develop_cone_vertex_holonomy():
    b = ball((0, 0), 3)
    w = {v: 0.0 for v in b.vertices}
    w[(0, 0)] = -0.1
    p = make_patch(b, w)
    layout = develop(p)
    k_center = curvature(p).K[(0, 0)]
    min_edge = min(edge_length(p, (0, 0), u) for u in
                   [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)])
    assert layout.holonomy_residual >= abs(k_center) * min_edge / 10.0


def test_develop_base_face_changes_by_rigid_motion_only():
    p = linear_factor(0.08, 0.02, ball((0, 0), 4))
    lay0 = develop(p)
    lay1 = develop(p, base_face=Face("down", (1, 1)))
    verts = sorted(lay0.positions)
    a, b = verts[0], verts[-1]
    rot = (lay1.positions[b] - lay1.positions[a]) / (lay0.positions[b] - lay0.positions[a])
    assert abs(abs(rot) - 1.0) <= 1e-9
    shift = lay1.positions[a] - rot * lay0.positions[a]
    for v in verts:
        assert abs(rot * lay0.positions[v] + shift - lay1.positions[v]) <= 1e-9


def test_develop_radius_zero_is_single_point():
    layout = develop(linear_factor(0.0, 0.0, ball((0, 0), 0)))
    assert layout.positions == {(0, 0): 0j}
    assert layout.placed_faces == ()
    assert layout.holonomy_residual == 0.0


def test_find_overlap_regular_empty():
    for radius in (3, 6):
        layout = develop(linear_factor(0.0, 0.0, ball((0, 0), radius)))
        assert not find_overlap(layout).pairs


def _two_triangle_layout(shift):
    """Two congruent right triangles, the second translated by shift."""
    tri_a = (0 + 0j, 2 + 0j, 0 + 2j)
    tri_b = tuple(z + shift for z in tri_a)
    fa, fb = Face("up", (0, 0)), Face("up", (10, 10))
    positions = {}
    for f, tri in ((fa, tri_a), (fb, tri_b)):
        for v, z in zip(f.vertices(), tri):
            positions[v] = z
    return LayoutResult(positions, ((fa, tri_a), (fb, tri_b)), 0.0, 1.0)


def test_find_overlap_hand_computed_area():
    # intersection of x,y >= 0, x+y <= 2 with x,y >= 1/2, x+y <= 3 is a
    # right triangle with legs 1, area 1/2
    layout = _two_triangle_layout(0.5 + 0.5j)
    report = find_overlap(layout)
    assert len(report.pairs) == 1
    assert report.pairs[0].area == pytest.approx(0.5, abs=1e-12)


def test_find_overlap_contact_is_not_overlap():
    layout = _two_triangle_layout(1.0 + 1.0j)  # hypotenuses touch on a segment
    assert not find_overlap(layout).pairs


def test_find_overlap_skips_shared_vertex_faces():
    layout = develop(linear_factor(0.0, 0.0, ball((0, 0), 2)))
    report = find_overlap(layout, area_threshold=-1.0)
    for pair in report.pairs:
        assert not set(pair.face_a.vertices()) & set(pair.face_b.vertices())


def test_extract_similarity_regular_translation():
    p = linear_factor(0.0, 0.0, ball((0, 0), 3))
    layout = develop(p)
    sim = extract_similarity(layout, p, (0, 0), (1, 0), span=3)
    assert abs(sim.k - 1.0) <= 1e-12
    assert abs(sim.b - 1.0) <= 1e-12
    assert sim.fixed_point is None


def test_extract_similarity_contraction_norm():
    p = linear_factor(0.1, 0.07, ball((0, 0), 8))
    layout = develop(p)
    for e, delta in (((-1, 0), -0.1), ((0, -1), -0.07), ((1, 1), 0.17)):
        sim = extract_similarity(layout, p, (0, 0), e, span=4)
        assert abs(sim.contraction_norm - math.exp(2 * delta)) <= 1e-9


def test_extract_similarity_round_trip():
    p = linear_factor(0.09, 0.04, ball((0, 0), 8))
    layout = develop(p)
    span = 8
    sim = extract_similarity(layout, p, (0, 0), (-1, -1), span=span)
    z = layout.positions[(0, 0)]
    for _ in range(span):
        z = sim(z)
    assert abs(z - layout.positions[(-span, -span)]) <= 1e-7


def test_extract_similarity_fixed_points_coincide():
    p = linear_factor(0.1, 0.07, ball((0, 0), 8))
    layout = develop(p)
    sims = [extract_similarity(layout, p, (0, 0), e, span=4)
            for e in ((-1, 0), (0, -1))]
    assert abs(sims[0].fixed_point - sims[1].fixed_point) <= 1e-6 * layout.diameter()


def test_extract_similarity_contraction_iteration():
    p = linear_factor(0.1, 0.0, ball((0, 0), 6))
    layout = develop(p)
    sim = extract_similarity(layout, p, (0, 0), (-1, 0), span=4)
    fixed = sim.fixed_point
    z = layout.positions[(0, 0)]
    gap = abs(z - fixed)
    for _ in range(20):
        z = sim(z)
        new_gap = abs(z - fixed)
        assert new_gap == pytest.approx(sim.contraction_norm * gap, rel=1e-9)
        gap = new_gap


def test_extract_similarity_rejects_nonlinear():
    b = ball((0, 0), 3)
    rng = np.random.default_rng(2)
    w = {v: float(rng.uniform(-0.05, 0.05)) for v in b.vertices}
    p = make_patch(b, w)
    layout = develop(p)
    with pytest.raises(NotLinearError):
        extract_similarity(layout, p, (0, 0), (1, 0), span=2)


def test_extract_similarity_degenerate_points():
    p = linear_factor(0.0, 0.0, ball((0, 0), 2))
    positions = {(t, 0): 0j for t in range(4)}
    fake = LayoutResult(positions, (), 0.0, 1.0)
    with pytest.raises(DegenerateError):
        extract_similarity(fake, p, (0, 0), (1, 0), span=2)


def test_overlap_radius_regular_none():
    assert overlap_radius(0.0, 0.0, 8) is None


def test_overlap_radius_regression_values():
    # frozen from the first verified search run
    assert overlap_radius(0.2, 0.0, 16) == 7
    assert overlap_radius(0.2, 0.2, 16) == 5


def test_overlap_radius_matches_per_radius_reports():
    radius = overlap_radius(0.2, 0.0, 16)
    below = develop(linear_factor(0.2, 0.0, ball((0, 0), radius - 1)))
    at = develop(linear_factor(0.2, 0.0, ball((0, 0), radius)))
    assert not find_overlap(below).pairs
    assert find_overlap(at).pairs


def test_overlap_report_stable_under_base_change():
    p = linear_factor(0.2, 0.0, ball((0, 0), 7))
    pairs0 = {(q.face_a, q.face_b) for q in find_overlap(develop(p)).pairs}
    pairs1 = {(q.face_a, q.face_b)
              for q in find_overlap(develop(p, base_face=Face("down", (2, 2)))).pairs}
    assert pairs0 == pairs1


def _random_layout_arrays(rng, count=260):
    tris = rng.uniform(-4.0, 4.0, size=(count, 3, 2))
    tris = np.ascontiguousarray(tris + 0.6 * rng.uniform(-1, 1, size=(count, 1, 2)))
    keys = np.arange(3 * count, dtype=np.int64).reshape(count, 3)
    for q in range(0, count - 3, 7):
        keys[q, 0] = keys[q + 3, 0]  # some shared vertices
    return tris, np.ascontiguousarray(keys)


@pytest.mark.skipif(_overlap_cy is None, reason="compiled kernel not built")
def test_backends_agree(rng):
    for _ in range(5):
        tris, keys = _random_layout_arrays(rng)
        got_py = _overlap_py.all_overlaps(tris, keys, 1e-9)
        got_cy = _overlap_cy.all_overlaps(tris, keys, 1e-9)
        assert len(got_py) == len(got_cy)
        for (ia, ib, area_py), (ja, jb, area_cy) in zip(got_py, got_cy):
            assert (ia, ib) == (ja, jb)
            assert area_py == pytest.approx(area_cy, rel=1e-12, abs=1e-15)
        thresholds = np.full(len(tris), 1e-9)
        first_py = _overlap_py.first_overlap_ordered(tris, keys, thresholds)
        first_cy = _overlap_cy.first_overlap_ordered(tris, keys, thresholds)
        assert (first_py is None) == (first_cy is None)
        if first_py is not None:
            assert first_py[:2] == first_cy[:2]
            assert first_py[2] == pytest.approx(first_cy[2], rel=1e-12)
