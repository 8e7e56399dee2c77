"""Seeded random instances for property suites.

Everything takes a :class:`random.Random` so that a seed pins down the whole
run.  Gapped modules are built from presentations (generators and relations
born at sample points), which makes functoriality hold by construction
instead of by rejection sampling.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .gapped import GappedModule, comparable
from .linalg_ff import Matrix, extend_basis, membership
from .persistence import Bar, Barcode, PersistenceModule


def random_matrix(rng: random.Random, rows: int, cols: int, p: int = 2) -> Matrix:
    return Matrix(rows, cols, tuple(rng.randrange(p) for _ in range(rows * cols)), p)


def random_persistence_module(rng: random.Random, max_len: int = 4, max_dim: int = 3,
                              p: int = 2, colimit: Optional[bool] = None) -> PersistenceModule:
    n = rng.randint(1, max_len)
    start = rng.randint(-3, 3)
    gaps = [Fraction(rng.randint(1, 4), rng.choice([1, 2])) for _ in range(n - 1)]
    idx = [Fraction(start)]
    for g in gaps:
        idx.append(idx[-1] + g)
    dims = [rng.randint(0, max_dim) for _ in range(n)]
    steps = [random_matrix(rng, dims[i + 1], dims[i], p) for i in range(n - 1)]
    if colimit is None:
        colimit = rng.random() < 0.7
    if colimit:
        c = rng.randint(0, max_dim)
        return PersistenceModule(tuple(idx), tuple(dims), tuple(steps), c,
                                 random_matrix(rng, c, dims[-1], p), p)
    return PersistenceModule(tuple(idx), tuple(dims), tuple(steps), None, None, p)


def random_barcode(rng: random.Random, max_bars: int = 5, span: int = 6) -> Barcode:
    bars = []
    for _ in range(rng.randint(0, max_bars)):
        b = Fraction(rng.randint(0, 2 * span), 2)
        if rng.random() < 0.25:
            bars.append(Bar(b))
        else:
            bars.append(Bar(b, b + Fraction(rng.randint(0, 2 * span), 2)))
    return Barcode(tuple(bars))


# ---------------------------------------------------------------------------
# gapped modules from presentations


@dataclass(frozen=True)
class Presentation:
    gap: object
    indices: tuple
    gen_births: tuple
    relations: tuple  # (birth, coefficient vector over generators)
    p: int = 2


def _quotient_basis(gens: list, rels: list, n: int, p: int) -> tuple:
    """Basis of ``span(e_g, g in gens) / span(rels)`` as complement vectors, plus
    the matrix ``[rel basis | complement]`` used to project."""
    rel_basis, _ = extend_basis([], rels, n, p)
    full, comp = extend_basis(rel_basis, [tuple(int(i == g) for i in range(n)) for g in gens], n, p)
    return rel_basis, comp


def _project(v, rel_basis, comp, n, p) -> tuple:
    B = Matrix.from_columns(list(rel_basis) + list(comp), n, p)
    x = membership(v, B)
    if x is None:  # pragma: no cover - v always lies in the generated subspace
        raise ArithmeticError("vector outside the presented space")
    return tuple(x[len(rel_basis):])


def module_from_presentation(P: Presentation) -> GappedModule:
    n, p, lam = len(P.gen_births), P.p, P.gap
    data = {}
    for t in P.indices:
        gens = [g for g, b in enumerate(P.gen_births) if comparable(b, t, lam)]
        rels = [v for b, v in P.relations if comparable(b, t, lam)]
        data[t] = _quotient_basis(gens, rels, n, p)
    all_rels = [v for _, v in P.relations]
    inf_rel, inf_comp = _quotient_basis(list(range(n)), all_rels, n, p)
    dims = tuple(len(data[t][1]) for t in P.indices)
    maps = {}
    for s in P.indices:
        for t in P.indices:
            if s < t and comparable(s, t, lam):
                rb, cb = data[t]
                cols = [_project(v, rb, cb, n, p) for v in data[s][1]]
                maps[(s, t)] = Matrix.from_columns(cols, len(cb), p)
    cmaps = tuple(
        Matrix.from_columns([_project(v, inf_rel, inf_comp, n, p) for v in data[t][1]], len(inf_comp), p)
        for t in P.indices)
    return GappedModule(lam, tuple(P.indices), dims, maps, len(inf_comp), cmaps, p)


def random_grid(rng: random.Random, lam, max_points: int = 8) -> tuple:
    """Contiguous grid whose spacing divides lam and whose span is at least 2*lam."""
    q = rng.choice([q for q in (1, 2, 3) if 2 * q + 1 <= max_points])
    g = lam / q
    n = rng.randint(2 * q + 1, max_points)
    start = g * rng.randint(-q, 2 * q)
    return tuple(start + g * j for j in range(n)), g


def random_gapped_module(rng: random.Random, lam=None, max_points: int = 8, max_gens: int = 3,
                         p: int = 2) -> GappedModule:
    """Presentation module on a grid; every birth is at least 2*lam before the
    last sample, so each progression's last term already equals the colimit."""
    if lam is None:
        lam = rng.choice([Fraction(1, 2), Fraction(1), Fraction(2)])
    indices, _ = random_grid(rng, lam, max_points)
    early = [t for t in indices if t <= indices[-1] - 2 * lam]
    k = rng.randint(1, max_gens)
    births = tuple(rng.choice(early) for _ in range(k))
    rels = []
    for _ in range(rng.randint(0, k)):
        r = rng.choice(early)
        avail = [g for g, b in enumerate(births) if comparable(b, r, lam)]
        if not avail:
            continue
        v = tuple(rng.randrange(p) if g in avail else 0 for g in range(k))
        if any(v):
            rels.append((r, v))
    return module_from_presentation(Presentation(lam, indices, births, tuple(rels), p))


def random_total_gapped_module(rng: random.Random, lam=None, max_points: int = 8,
                               max_dim: int = 3, p: int = 2) -> GappedModule:
    """A random chain over a grid, viewed as a lam-gapped module by keeping only
    the maps between comparable samples (every pair then extends to a chain)."""
    if lam is None:
        lam = rng.choice([Fraction(1, 2), Fraction(1), Fraction(2)])
    indices, _ = random_grid(rng, lam, max_points)
    dims = [rng.randint(0, max_dim) for _ in indices]
    steps = [random_matrix(rng, dims[i + 1], dims[i], p) for i in range(len(indices) - 1)]
    c = rng.randint(0, max_dim)
    M = PersistenceModule(indices, tuple(dims), tuple(steps), c, random_matrix(rng, c, dims[-1], p), p)
    return GappedModule.from_total(M, lam)


def random_witnessed_class(rng: random.Random, G: GappedModule) -> Optional[tuple]:
    """A nonzero colimit class in the image of some sample, or None if there is none."""
    for t in rng.sample(list(G.indices), len(G.indices)):
        P = G.colimit_map(t)
        if P.cols == 0:
            continue
        for _ in range(4):
            x = tuple(rng.randrange(G.p) for _ in range(P.cols))
            a = P.apply(x)
            if any(a):
                return a
    return None


__all__ = [
    "Presentation",
    "module_from_presentation",
    "random_barcode",
    "random_gapped_module",
    "random_grid",
    "random_matrix",
    "random_persistence_module",
    "random_total_gapped_module",
    "random_witnessed_class",
]
