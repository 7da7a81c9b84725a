"""Combinatorics of the hexagonal triangulation of the plane.

Vertices are integer pairs (m, n) standing for the point m + n*omega with
omega = -1/2 + (sqrt(3)/2)i, so the regular unit lattice has six neighbor
displacements {+-(1,0), +-(0,1), +-(1,1)} and every vertex has degree 6.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from .errors import InvalidArgumentError

Vertex = tuple[int, int]

#: neighbor displacements in fixed counter-clockwise order, starting at +1
NEIGHBOR_STEPS: tuple[Vertex, ...] = (
    (1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1),
)

OMEGA = complex(-0.5, math.sqrt(3.0) / 2.0)


def to_plane(v: Vertex) -> complex:
    """Position of v in the regular unit embedding, m + n*omega."""
    return v[0] + v[1] * OMEGA


def vadd(u: Vertex, v: Vertex) -> Vertex:
    return (u[0] + v[0], u[1] + v[1])


def vsub(u: Vertex, v: Vertex) -> Vertex:
    return (u[0] - v[0], u[1] - v[1])


def neighbors(v: Vertex) -> tuple[Vertex, ...]:
    """The 6 neighbors of v in counter-clockwise order."""
    m, n = v
    return tuple((m + dm, n + dn) for dm, dn in NEIGHBOR_STEPS)


def graph_distance(u: Vertex, v: Vertex) -> int:
    """Length of a shortest edge path between u and v.

    Closed form for the generator set {+-1, +-omega, +-(1+omega)}:
    |m| + |n| when the displacement components have opposite signs,
    max(|m|, |n|) otherwise.  Validated against BFS in the test suite.
    """
    m = v[0] - u[0]
    n = v[1] - u[1]
    if m * n < 0:
        return abs(m) + abs(n)
    return max(abs(m), abs(n))


class Face(NamedTuple):
    """A lattice triangle, anchored at its lowest vertex.

    Up faces are {p, p+1, p+1+omega}; down faces are {p, p+1+omega, p+omega}.
    The vertex tuples below are counter-clockwise in the regular embedding.
    """

    kind: str  # "up" or "down"
    anchor: Vertex

    def vertices(self) -> tuple[Vertex, Vertex, Vertex]:
        m, n = self.anchor
        if self.kind == "up":
            return ((m, n), (m + 1, n), (m + 1, n + 1))
        return ((m, n), (m + 1, n + 1), (m, n + 1))


def star_triangles(v: Vertex) -> tuple[tuple[Vertex, Vertex, Vertex], ...]:
    """The 6 triangles (v, v_j, v_{j+1}) around v, counter-clockwise."""
    ring = neighbors(v)
    return tuple((v, ring[j], ring[(j + 1) % 6]) for j in range(6))


def star_faces(v: Vertex) -> tuple[Face, ...]:
    """The 6 faces incident to v, counter-clockwise from Face('up', v)."""
    m, n = v
    return (
        Face("up", (m, n)),
        Face("down", (m, n)),
        Face("up", (m - 1, n)),
        Face("down", (m - 1, n - 1)),
        Face("up", (m - 1, n - 1)),
        Face("down", (m, n - 1)),
    )


@dataclass(frozen=True)
class Ball:
    """B(center, R) = all vertices at graph distance <= R from center."""

    center: Vertex
    radius: int

    @cached_property
    def vertices(self) -> tuple[Vertex, ...]:
        cm, cn = self.center
        R = self.radius
        out = [
            (cm + dm, cn + dn)
            for dm in range(-R, R + 1)
            for dn in range(-R, R + 1)
            if graph_distance((0, 0), (dm, dn)) <= R
        ]
        out.sort()
        return tuple(out)

    @cached_property
    def vertex_set(self) -> frozenset[Vertex]:
        return frozenset(self.vertices)

    @cached_property
    def interior(self) -> frozenset[Vertex]:
        """Vertices at distance <= R-1; exactly those with a full star inside."""
        return frozenset(
            v for v in self.vertices
            if graph_distance(self.center, v) <= self.radius - 1
        )

    @cached_property
    def boundary(self) -> frozenset[Vertex]:
        return self.vertex_set - self.interior

    def __contains__(self, v: Vertex) -> bool:
        return graph_distance(self.center, v) <= self.radius

    def distance_to_center(self, v: Vertex) -> int:
        return graph_distance(self.center, v)

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        inside = self.vertex_set
        out = []
        for p in self.vertices:
            for kind in ("up", "down"):
                f = Face(kind, p)
                if all(q in inside for q in f.vertices()):
                    out.append(f)
        out.sort(key=lambda f: (f.anchor, f.kind))
        return tuple(out)


def ball(center: Vertex, radius: int) -> Ball:
    """Construct B(center, radius); radius must be a non-negative integer."""
    if radius < 0:
        raise InvalidArgumentError(f"ball radius must be >= 0, got {radius}")
    return Ball(center, int(radius))


def faces_in_ball(b: Ball) -> tuple[Face, ...]:
    """All faces whose three vertices lie in b, each listed once."""
    return b.faces


def ball_vertex_count(radius: int) -> int:
    """|B(i, R)| = 1 + 3R(R+1)."""
    return 1 + 3 * radius * (radius + 1)
