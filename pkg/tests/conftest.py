"""Shared generators and oracles for the test suite."""

from __future__ import annotations

import math
from collections import deque

import numpy as np
import pytest

from hexconf import Triangle, neighbors


def bfs_distances(origin, limit):
    """Breadth-first distances on the lattice graph, up to the given limit.

    Independent oracle for the closed-form graph distance.
    """
    dist = {origin: 0}
    queue = deque([origin])
    while queue:
        u = queue.popleft()
        if dist[u] >= limit:
            continue
        for v in neighbors(u):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def random_acute_triangle(rng, bound=math.pi / 2 - 0.05, l_i=None):
    """Random triangle with all angles in [pi - 2*bound, bound]."""
    lo = math.pi - 2 * bound
    while True:
        a = rng.uniform(lo, bound)
        b = rng.uniform(lo, bound)
        c = math.pi - a - b
        if lo + 1e-9 <= c <= bound - 1e-9:
            li = l_i if l_i is not None else rng.uniform(0.5, 2.0)
            return Triangle(li, li * math.sin(b) / math.sin(a),
                            li * math.sin(c) / math.sin(a))


def random_acute_pair(rng, bound=math.pi / 2 - 0.05):
    """Two random triangles with matching l_i and all angles <= bound."""
    first = random_acute_triangle(rng, bound)
    second = random_acute_triangle(rng, bound, l_i=first.l_i)
    return first, second


def random_valid_triangle(rng):
    """Random triangle with strict inequalities, acuteness not required."""
    while True:
        li, lj, lk = rng.uniform(0.1, 3.0, size=3)
        if li + lj > lk and lj + lk > li and li + lk > lj:
            return Triangle(float(li), float(lj), float(lk))


@pytest.fixture
def rng():
    return np.random.default_rng(0)
