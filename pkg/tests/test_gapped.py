from __future__ import annotations

import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapped.gapped import (
    GapError,
    GappedModule,
    InterleavingCertificate,
    NotWitnessed,
    RestrictionSequence,
    comparable,
    dual_pairing,
    enumerate_restrictions,
    gapped_dual,
    gapped_spectral_invariant,
    generalized_spectral_invariant,
    identity_certificate,
    padding_certificate,
    restrict,
    restriction_stability_report,
    stability_bound_check,
    structure_certificates,
    translate,
    translation_certificate,
    validate_gapped,
    verify_interleaving_certificate,
)
from gapped.linalg_ff import Matrix
from gapped.persistence import Barcode, PersistenceModule, ValidationError, barcode, validate
from gapped.random_models import (
    Presentation,
    module_from_presentation,
    random_gapped_module,
    random_total_gapped_module,
    random_witnessed_class,
)
from gapped.scalars import INF

seeds = st.integers(0, 2**32 - 1)


def identity_gapped(idx, lam=F(1), d=1):
    M = PersistenceModule.chain([F(t) for t in idx], [d] * len(idx),
                                [Matrix.identity(d)] * (len(idx) - 1), (d, Matrix.identity(d)))
    return GappedModule.from_total(M, lam)


def test_comparable_examples():
    assert comparable(F(0), F(0), F(1))
    assert not comparable(F(0), F(1, 2), F(1))
    assert comparable(F(0), F(1), F(1))
    with pytest.raises(GapError):
        comparable(0, 1, 0)


def test_comparable_is_partial_order():
    grid = [F(k, 2) for k in range(-4, 5)]
    for lam in (F(1, 2), F(1), F(3, 2)):
        for s, t in itertools.product(grid, repeat=2):
            if comparable(s, t, lam) and comparable(t, s, lam):
                assert s == t
        for r, s, t in itertools.product(grid, repeat=3):
            if comparable(r, s, lam) and comparable(s, t, lam):
                assert comparable(r, t, lam)


def test_validate_identity_chain():
    validate_gapped(identity_gapped(range(4)))


def test_validate_names_corrupted_pair():
    G = identity_gapped(range(4))
    maps = dict(G.maps)
    maps[(F(0), F(2))] = Matrix.zero(1, 1)
    bad = GappedModule(G.gap, G.indices, G.dims, maps, G.colimit_dim, G.colimit_maps)
    with pytest.raises(ValidationError) as err:
        validate_gapped(bad)
    assert F(2) in err.value.position and F(0) in err.value.position


def test_validate_rejects_noncomparable_map():
    G = identity_gapped([0, F(1, 2), 1], lam=F(1))
    maps = dict(G.maps)
    maps[(F(0), F(1, 2))] = Matrix.identity(1)
    with pytest.raises(ValidationError, match="non-comparable"):
        validate_gapped(GappedModule(G.gap, G.indices, G.dims, maps, G.colimit_dim, G.colimit_maps))


def test_enumerate_examples():
    G = identity_gapped(range(4))
    seqs = enumerate_restrictions(G, F(1))
    assert seqs == [RestrictionSequence(F(0), F(1), 0, 3)]
    H = identity_gapped([0, F(1, 2), 1, F(3, 2), 2], lam=F(1, 2))
    norm = enumerate_restrictions(H, F(1, 2))
    assert [s.offset for s in norm] == [0]
    allseqs = enumerate_restrictions(H, F(1, 2), normalized_only=False)
    assert len(allseqs) == 5 and sum(s.normalized for s in allseqs) == 1
    assert {tuple(s.points()) for s in allseqs} == {tuple(norm[0].points())}
    with pytest.raises(GapError, match="step below gap"):
        enumerate_restrictions(H, F(1, 4))


def test_enumerate_two_offsets():
    G = identity_gapped([0, F(1, 2), 1, F(3, 2), 2], lam=F(1))
    offs = sorted(s.offset for s in enumerate_restrictions(G, F(1)))
    assert offs == [0, F(1, 2)]


def test_negative_window_normalized():
    G = identity_gapped([-2, -1, 0, 1], lam=F(1))
    (seq,) = enumerate_restrictions(G, F(1))
    assert seq.offset == 0 and seq.i_min == -2 and seq.i_max == 1


def test_restrict_examples():
    G = identity_gapped(range(3))
    (seq,) = enumerate_restrictions(G, F(1))
    M = restrict(G, seq)
    assert M.indices == G.indices and barcode(M) == Barcode.of((F(0), INF))
    one = restrict(G, RestrictionSequence(F(0), F(1), 1, 1))
    assert one.indices == (F(1),)
    with pytest.raises(ValidationError):
        restrict(G, RestrictionSequence(F(0), F(1), 0, 5))


def test_translate_examples():
    G = identity_gapped(range(3))
    assert translate(G, 0) == G
    assert translate(translate(G, F(1)), F(2)) == translate(G, F(3))
    assert gapped_spectral_invariant(G, (1,)) == 0
    assert gapped_spectral_invariant(translate(G, F(2)), (1,)) == -2


def test_gapped_spectral_examples():
    G = identity_gapped(range(3))
    assert gapped_spectral_invariant(G, (0,)) == INF
    late = module_from_presentation(Presentation(F(1), tuple(F(k) for k in range(5)), (F(2),), ()))
    assert gapped_spectral_invariant(late, (1,)) == -2


def test_not_witnessed():
    P = Presentation(F(1), (F(0), F(1)), (F(1),), ())
    G = module_from_presentation(P)
    G = GappedModule(G.gap, G.indices, G.dims, G.maps, 1,
                     tuple(Matrix.zero(1, d) for d in G.dims))
    with pytest.raises(NotWitnessed):
        gapped_spectral_invariant(G, (1,))


@settings(max_examples=60)
@given(seeds)
def test_restrictions_validate(seed):
    G = random_gapped_module(random.Random(seed))
    validate_gapped(G)
    for seq in enumerate_restrictions(G, G.gap):
        validate(restrict(G, seq))


@settings(max_examples=60)
@given(seeds)
def test_generalized_form_agrees(seed):
    rng = random.Random(seed)
    G = random_gapped_module(rng)
    a = random_witnessed_class(rng, G)
    if a is not None:
        assert gapped_spectral_invariant(G, a, check_generalized=False) == generalized_spectral_invariant(G, a)


@settings(max_examples=60)
@given(seeds, st.integers(-4, 4))
def test_translate_shifts_invariant(seed, k):
    rng = random.Random(seed)
    G = random_gapped_module(rng)
    a = random_witnessed_class(rng, G)
    u = F(k, 2)
    if a is not None:
        assert gapped_spectral_invariant(translate(G, u), a) == gapped_spectral_invariant(G, a) - u


def test_identity_certificate():
    G = identity_gapped(range(4))
    (seq,) = enumerate_restrictions(G, F(1))
    assert verify_interleaving_certificate(G, G, 0, identity_certificate(G, seq))


def test_structure_certificate_between_restrictions():
    G = module_from_presentation(Presentation(
        F(1), tuple(F(k, 2) for k in range(10)), (F(0), F(1, 2)), ((F(1), (1, 1)),)))
    a, b = enumerate_restrictions(G, F(1))
    Va, Vb, delta, certs = structure_certificates(G, a, b)
    assert delta == 2 and certs
    assert all(verify_interleaving_certificate(Va, Vb, delta, c) for c in certs)


def test_corrupted_certificate_witness():
    G = identity_gapped(range(6))
    H, delta, certs = translation_certificate(G, F(1))
    cert = certs[0]
    assert verify_interleaving_certificate(G, H, delta, cert)
    bad = InterleavingCertificate(cert.restriction, (Matrix.zero(1, 1),) + cert.phi[1:], cert.psi)
    check = verify_interleaving_certificate(G, H, delta, bad)
    assert not check and check.family == "phi" and check.index == cert.restriction.i_min


def test_certificate_shape_mismatch():
    G = identity_gapped(range(6))
    H, delta, certs = translation_certificate(G, F(1))
    cert = certs[0]
    bad = InterleavingCertificate(cert.restriction, (Matrix.zero(2, 1),) + cert.phi[1:], cert.psi)
    with pytest.raises(ValidationError, match="shape"):
        verify_interleaving_certificate(G, H, delta, bad)


def test_stability_report_single_restriction_vacuous():
    rep = restriction_stability_report(identity_gapped(range(4)))
    assert rep.ok and not rep.pairs


@settings(max_examples=60)
@given(seeds)
def test_restriction_stability_random(seed):
    rep = restriction_stability_report(random_gapped_module(random.Random(seed)))
    assert rep.ok, rep.messages


def test_stability_bound_identity_and_translate():
    G = identity_gapped(range(8))
    (seq,) = enumerate_restrictions(G, F(1))
    rep = stability_bound_check(G, G, 0, identity_certificate(G, seq), (1,))
    assert rep.holds and rep.difference == 0
    H, delta, certs = translation_certificate(G, F(2))
    rep = stability_bound_check(G, H, delta, certs[0], (1,))
    assert delta == 3 and rep.difference == 2 and rep.holds


def test_stability_refuses_invalid_certificate():
    G = identity_gapped(range(6))
    H, delta, certs = translation_certificate(G, F(1))
    cert = certs[0]
    bad = InterleavingCertificate(cert.restriction, (Matrix.zero(1, 1),) + cert.phi[1:], cert.psi)
    with pytest.raises(ValueError, match="invalid certificate"):
        stability_bound_check(G, H, delta, bad, (1,))


@settings(max_examples=40)
@given(seeds)
def test_padding_certificates(seed):
    rng = random.Random(seed)
    G = random_gapped_module(rng, max_points=12)
    g = G.indices[1] - G.indices[0]
    u = g * rng.randint(-2, 2)
    delta = abs(u) + G.gap
    H, certs = padding_certificate(G, [rng.randint(0, 2) for _ in G.indices], u, delta)
    validate_gapped(H)
    a = random_witnessed_class(rng, G)
    for cert in certs:
        assert verify_interleaving_certificate(G, H, delta, cert)
        if a is not None:
            rep = stability_bound_check(G, H, delta, cert, a)
            assert rep.holds and rep.difference == abs(u)


def test_dual_examples():
    G = identity_gapped([0, 1])
    plain = gapped_dual(GappedModule(G.gap, G.indices, G.dims, G.maps))
    assert plain.indices == (F(-1), F(0))
    assert plain.maps[(F(-1), F(0))] == Matrix.identity(1)
    D = gapped_dual(G)
    # the infinite bar born at 0 comes back born at -0
    (seq,) = enumerate_restrictions(D, F(1))
    assert barcode(restrict(D, seq)) == Barcode.of((F(0), INF))
    DD = gapped_dual(D)
    assert DD.indices == G.indices and DD.dims == G.dims
    a_star = dual_pairing(G, (1,))
    assert gapped_spectral_invariant(D, a_star) == -gapped_spectral_invariant(G, (1,))


def test_dual_without_colimit_transposes():
    G = identity_gapped([0, 1, 2])
    G = GappedModule(G.gap, G.indices, G.dims, G.maps)
    D = gapped_dual(G)
    assert D.colimit_dim is None and D.indices == (F(-2), F(-1), F(0))


def test_pairing_absent_when_class_in_earlier_images():
    # x born at 0, y at 1/2, both reach the colimit at 1: x+y lies in their sum
    P = Presentation(F(1), (F(0), F(1, 2), F(1), F(3, 2), F(2), F(5, 2), F(3)), (F(0), F(1, 2)), ())
    G = module_from_presentation(P)
    with pytest.raises(ValueError, match="no dual pairing"):
        dual_pairing(G, (1, 1))


@settings(max_examples=60)
@given(seeds)
def test_duality_total_family(seed):
    rng = random.Random(seed)
    G = random_total_gapped_module(rng)
    a = random_witnessed_class(rng, G)
    if a is None:
        return
    D = gapped_dual(G)
    validate_gapped(D)
    assert gapped_spectral_invariant(D, dual_pairing(G, a)) == -gapped_spectral_invariant(G, a)


@settings(max_examples=60)
@given(seeds)
def test_duality_presentations_when_paired(seed):
    rng = random.Random(seed)
    G = random_gapped_module(rng)
    a = random_witnessed_class(rng, G)
    if a is None:
        return
    try:
        a_star = dual_pairing(G, a)
    except ValueError:
        return
    assert gapped_spectral_invariant(gapped_dual(G), a_star) == -gapped_spectral_invariant(G, a)
