"""Brute-force oracles used to cross-check the combinatorial algorithms."""
from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .chambers import BASE, Building


def bfs_distance_table(building: Building, chambers, radius: int) -> dict:
    """Graph distances between ``chambers`` (all within ``radius`` of the base).

    Geodesics between such chambers stay inside ``ball(base, 2 * radius)``,
    so breadth-first search on that finite chamber graph is exact.
    """
    ball = building.ball(BASE, 2 * radius)
    index = {c: k for k, c in enumerate(ball)}
    rows, cols = [], []
    for c in ball:
        for _, d in building.neighbours(c):
            k = index.get(d)
            if k is not None:
                rows.append(index[c])
                cols.append(k)
    n = len(ball)
    graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    chambers = list(chambers)
    src = [index[c] for c in chambers]
    table = shortest_path(graph, unweighted=True, directed=False, indices=src)
    return {
        (c, d): int(table[a, index[d]]) for a, c in enumerate(chambers) for d in chambers
    }
