"""Bottleneck distance between barcodes.

The distance is found by bisection over the finite set of candidate values
(pairwise endpoint differences and half-lengths); each candidate is decided
by a maximum bipartite matching on the usual "bars plus diagonal copies"
graph.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .persistence import Bar, Barcode
from .scalars import INF


def match_cost(x: Bar, y: Bar):
    """Sup-norm distance between endpoints; infinite bars only match infinite bars."""
    if x.infinite != y.infinite:
        return INF
    if x.infinite:
        return abs(x.birth - y.birth)
    return max(abs(x.birth - y.birth), abs(x.death - y.death))


def deletion_cost(x: Bar):
    """Half-length of a bar: the price of matching it to the diagonal."""
    if x.infinite:
        return INF
    return (x.death - x.birth) / 2


def _perfect_matching_exists(xs, ys, eps) -> bool:
    n1, n2 = len(xs), len(ys)
    n = n1 + n2
    if n == 0:
        return True
    rows, cols = [], []
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            if match_cost(x, y) <= eps:
                rows.append(i)
                cols.append(j)
        if deletion_cost(x) <= eps:
            rows.append(i)
            cols.append(n2 + i)
    for j, y in enumerate(ys):
        if deletion_cost(y) <= eps:
            rows.append(n1 + j)
            cols.append(j)
        for i in range(n1):
            rows.append(n1 + j)
            cols.append(n2 + i)
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    match = maximum_bipartite_matching(graph, perm_type="column")
    return bool(np.all(match >= 0))


def bottleneck_distance(B1: Barcode, B2: Barcode):
    """Exact bottleneck distance; ``inf`` when the infinite-bar counts differ."""
    xs, ys = B1.expanded(), B2.expanded()
    if len(B1.infinite_bars()) != len(B2.infinite_bars()):
        return INF
    candidates = {Fraction(0)}
    for x in xs:
        candidates.add(deletion_cost(x))
    for y in ys:
        candidates.add(deletion_cost(y))
    for x, y in itertools.product(xs, ys):
        candidates.add(match_cost(x, y))
    values = sorted(c for c in candidates if c != INF)
    lo, hi = 0, len(values) - 1
    # the largest finite candidate always admits a matching
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect_matching_exists(xs, ys, values[mid]):
            hi = mid
        else:
            lo = mid + 1
    return values[lo]


def brute_force_bottleneck(B1: Barcode, B2: Barcode):
    """Oracle: minimise over every partial matching (factorial time, tiny inputs only)."""
    xs, ys = B1.expanded(), B2.expanded()
    if len(xs) > 6 or len(ys) > 6:
        raise ValueError("brute force bottleneck is limited to 6 bars per side")
    best = INF
    for k in range(min(len(xs), len(ys)) + 1):
        for left in itertools.combinations(range(len(xs)), k):
            for right in itertools.permutations(range(len(ys)), k):
                cost = Fraction(0)
                for i, j in zip(left, right):
                    cost = max(cost, match_cost(xs[i], ys[j]))
                for i in set(range(len(xs))) - set(left):
                    cost = max(cost, deletion_cost(xs[i]))
                for j in set(range(len(ys))) - set(right):
                    cost = max(cost, deletion_cost(ys[j]))
                if cost < best:
                    best = cost
    return best
