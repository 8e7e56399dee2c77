from __future__ import annotations

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapped.linalg_ff import Matrix, compose, rank
from gapped.persistence import (
    Bar,
    Barcode,
    InstanceTooLarge,
    PersistenceModule,
    ValidationError,
    adapted_basis,
    barcode,
    brute_force_barcode,
    composite,
    dual_module,
    interleaving_distance,
    min_appearance,
    rank_invariant,
    shift_module,
    spectral_invariant_pm,
    validate,
)
from gapped.random_models import random_persistence_module
from gapped.scalars import INF, NEG_INF

seeds = st.integers(0, 2**32 - 1)


def identity_chain(idx, d=1, colimit=True):
    steps = [Matrix.identity(d)] * (len(idx) - 1)
    col = (d, Matrix.identity(d)) if colimit else None
    return PersistenceModule.chain([F(t) for t in idx], [d] * len(idx), steps, col)


def test_validate_examples():
    validate(PersistenceModule.chain([F(0)], [1], []))
    bad = PersistenceModule((F(0), F(1)), (1, 2), (Matrix.zero(1, 1),))
    with pytest.raises(ValidationError) as err:
        validate(bad)
    assert err.value.position == 0


def test_validate_random(rng):
    for _ in range(20):
        validate(random_persistence_module(rng, max_len=5))


def test_rank_invariant_examples():
    M = identity_chain([0, 1, 2], d=2)
    assert all(rank_invariant(M, i, j) == 2 for i in range(3) for j in range(i, 4))
    Z = PersistenceModule.chain([F(0), F(1)], [1, 1], [[[0]]])
    assert rank_invariant(Z, 0, 1) == 0
    assert rank_invariant(Z, 1, 1) == 1


def test_rank_invariant_matches_product(rng):
    for _ in range(30):
        M = random_persistence_module(rng, max_len=4, colimit=False)
        n = len(M.indices)
        for i in range(n):
            for j in range(i, n):
                P = Matrix.identity(M.dims[i])
                for k in range(i, j):
                    P = compose(M.steps[k], P)
                assert rank_invariant(M, i, j) == rank(P)


def test_barcode_examples():
    assert barcode(identity_chain([0, 1, 2])) == Barcode.of((F(0), INF))
    Z = PersistenceModule.chain([F(0), F(1)], [1, 1], [[[0]]])
    assert barcode(Z) == Barcode.of((F(0), F(0)), (F(1), F(1)))
    assert brute_force_barcode(Z) == barcode(Z)
    empty = PersistenceModule((), (), ())
    assert barcode(empty) == Barcode() == brute_force_barcode(empty)
    const = identity_chain([0], colimit=False)
    assert brute_force_barcode(const) == Barcode.of((F(0), F(0)))


def test_colimit_only_classes_are_not_bars():
    M = PersistenceModule.chain([F(0)], [1], [], colimit=(2, [[1], [0]]))
    assert barcode(M) == Barcode.of((F(0), INF))


def test_brute_force_limit():
    M = identity_chain(range(6))
    with pytest.raises(InstanceTooLarge):
        brute_force_barcode(M)


@settings(max_examples=60)
@given(seeds)
def test_barcode_matches_oracle(seed):
    M = random_persistence_module(random.Random(seed), max_len=4, max_dim=3)
    assert barcode(M) == brute_force_barcode(M)


@settings(max_examples=60)
@given(seeds)
def test_rank_counting_identity(seed):
    M = random_persistence_module(random.Random(seed), max_len=4)
    B = barcode(M)
    n = len(M.indices)
    for i in range(n):
        for j in range(i, M.n_positions):
            later = INF if j == n else M.indices[j]
            alive = sum(m for b, m in B.bars if b.birth <= M.indices[i] and b.death >= later)
            assert alive == rank_invariant(M, i, j)


@settings(max_examples=40)
@given(seeds)
def test_bars_alive_match_dims(seed):
    M = random_persistence_module(random.Random(seed), max_len=4)
    B = barcode(M)
    for i, t in enumerate(M.indices):
        assert sum(m for b, m in B.bars if b.birth <= t <= b.death) == M.dims[i]


def test_shift_examples():
    M = PersistenceModule.chain([F(1), F(3)], [1, 1], [[[1]]])
    assert shift_module(M, 0) == M
    assert barcode(shift_module(M, 1)) == Barcode.of((F(0), F(2)))


@settings(max_examples=40)
@given(seeds, st.fractions(min_value=-5, max_value=5, max_denominator=4))
def test_shift_translates_barcode(seed, s):
    M = random_persistence_module(random.Random(seed))
    assert barcode(shift_module(M, s)) == barcode(M).translate(-s)


def test_dual_examples():
    M = identity_chain([0, 1], colimit=False)
    D = dual_module(M)
    assert D.indices == (F(-1), F(0))
    assert D.steps == (Matrix.identity(1),)
    N = PersistenceModule.chain([F(1), F(2), F(3)], [1, 1, 0], [[[1]], []])
    assert barcode(dual_module(N)) == Barcode.of((F(-2), F(-1)))


@settings(max_examples=60)
@given(seeds)
def test_dual_reflects_barcode(seed):
    M = random_persistence_module(random.Random(seed))
    D = dual_module(M)
    validate(D)
    assert barcode(D) == barcode(M).reflect()
    assert barcode(dual_module(D)) == barcode(M)


def test_min_appearance_examples():
    M = identity_chain([0, 1, 2])
    assert min_appearance(M, (0,)) == 0
    assert min_appearance(M, (1,)) == 0
    late = PersistenceModule.chain([F(0), F(1)], [0, 1], [Matrix.zero(1, 0)], colimit=(1, [[1]]))
    assert min_appearance(late, (1,)) == 1
    with pytest.raises(ValidationError):
        min_appearance(M, (1, 0))


def test_spectral_examples():
    M = identity_chain([0, 1, 2])
    assert spectral_invariant_pm(M, (0,)) == NEG_INF
    assert spectral_invariant_pm(M, (1,)) == 0


def basis_oracle(M, a):
    """Express a in an explicitly built basis adapted to the image filtration
    (every coefficient choice tried) and report the max birth used."""
    from gapped.linalg_ff import all_vectors

    basis = adapted_basis(M)
    best = None
    for coeffs in all_vectors(len(basis), M.p):
        v = [0] * M.colimit_dim
        for c, (w, _) in zip(coeffs, basis):
            v = [(x + c * y) % M.p for x, y in zip(v, w)]
        if tuple(v) == tuple(a):
            val = max(b for c, (_, b) in zip(coeffs, basis) if c)
            best = val if best is None else min(best, val)
    return best


@settings(max_examples=60)
@given(seeds)
def test_spectral_equals_min_appearance(seed):
    rng = random.Random(seed)
    M = random_persistence_module(rng, max_len=4, max_dim=3, colimit=True)
    for _ in range(3):
        pis = [composite(M, i, len(M.indices)) for i in range(len(M.indices))]
        if not pis:
            return
        P = rng.choice(pis)
        a = P.apply(tuple(rng.randrange(2) for _ in range(P.cols)))
        if not any(a):
            continue
        assert spectral_invariant_pm(M, a) == min_appearance(M, a) == basis_oracle(M, a)


def test_interleaving_examples():
    M = identity_chain([0, 1, 2])
    assert interleaving_distance(M, M) == 0
    Z = PersistenceModule.chain([F(0), F(1), F(2)], [1, 1, 1], [[[0]], [[0]]], colimit=(1, [[0]]))
    d = interleaving_distance(M, Z)
    assert d == INF  # one infinite bar against none
    with pytest.raises(ValidationError, match="colimit mismatch"):
        interleaving_distance(M, identity_chain([0, 1, 2], colimit=False))


@settings(max_examples=40)
@given(seeds, st.fractions(min_value=-3, max_value=3, max_denominator=2))
def test_shift_interleaving_bound(seed, s):
    M = random_persistence_module(random.Random(seed))
    assert interleaving_distance(M, shift_module(M, s)) <= abs(s)


def test_barcode_text():
    B = Barcode.of((F(1), F(2)), (F(0), INF), (F(0), INF))
    assert B.to_text() == "0 inf 2\n1 2 1\n"
    with pytest.raises(ValueError):
        Bar(F(2), F(1))
