from __future__ import annotations

from fractions import Fraction as F

import pytest

from gapped.contact_model import (
    TWO_PI,
    Candidate,
    ConstantContactHamiltonian,
    SHModelClass,
    SourcedSystem,
    anti_spectral_invariant,
    build_cosphere_model,
    constant_quasi_state,
    contact_spectral_invariant,
    cosphere_invariant,
    dual_contact_value,
    dying_source_fixture,
    eternal_check,
    hf_dimension,
    model_barcode,
    model_for_class,
    quasi_measure_eval,
    quasi_measure_monotone,
    quasi_state_estimate,
    sh_product,
    spectral_axiom_report,
    triangle_record,
)
from gapped.gapped import NotWitnessed, enumerate_restrictions, restrict, restriction_stability_report, validate_gapped
from gapped.persistence import Barcode, min_appearance
from gapped.scalars import INF, SymbolicSlope

U = SHModelClass("u", 1)
E = SHModelClass("u", 0)
A = SHModelClass("au", 0)


def ceil_half(k):
    return -(-k // 2)


def test_build_examples():
    assert build_cosphere_model(3, 3, 5).module.dims == (0, 1, 1, 1)
    assert build_cosphere_model(3, 1, 0).module.dims == (1, 1)
    for mmax in range(4):
        assert set(build_cosphere_model(3, mmax, 1).module.dims) == {0}
    with pytest.raises(ValueError):
        build_cosphere_model(4, 2, 0)


def test_dims_follow_formula():
    for n in (3, 5, 7):
        for k in range(-2, 5 * n):
            model = build_cosphere_model(n, 4, k)
            validate_gapped(model.module)
            assert model.module.dims == tuple(hf_dimension(n, m, k) for m in range(5))


def test_slopes_are_two_pi_progression():
    model = build_cosphere_model(3, 4, 5)
    assert model.module.indices == tuple(SymbolicSlope(m, F(1, 10)) for m in range(5))
    (seq,) = enumerate_restrictions(model.module, TWO_PI)
    assert seq.offset == SymbolicSlope(0, F(1, 10)) and seq.normalized


def test_restricted_barcode_degree_2n_minus_1():
    model = build_cosphere_model(3, 3, 5)
    (seq,) = enumerate_restrictions(model.module, TWO_PI)
    M = restrict(model.module, seq)
    assert min_appearance(M, (1,)) == SymbolicSlope(1, F(1, 10))
    assert model_barcode(model) == Barcode.of((TWO_PI, INF))


def test_grading():
    for n in (3, 5):
        for k in range(5):
            assert SHModelClass("u", k).degree(n) == k * (n - 1) + n
            assert SHModelClass("au", k).degree(n) == k * (n - 1)
            for cls in (SHModelClass("u", k), SHModelClass("au", k)):
                assert SHModelClass.in_degree(n, cls.degree(n)) == cls
    assert str(SHModelClass.parse("a*u^3")) == "au^3" and SHModelClass.parse("e") == E


def test_products():
    for k in range(4):
        assert sh_product(E, SHModelClass("u", k)) == SHModelClass("u", k)
    assert sh_product(SHModelClass("au", 2), SHModelClass("au", 3)) is None
    assert sh_product(SHModelClass("au", 1), SHModelClass("u", 2)) == SHModelClass("au", 3)
    n = 3
    uu = sh_product(U, U)
    assert uu == SHModelClass("u", 2)
    assert uu.degree(n) == U.degree(n) + U.degree(n) - n == 7


def test_invariants_at_zero():
    assert cosphere_invariant(3, 2, 0, E) == 0
    assert cosphere_invariant(3, 2, 0, A) == 0
    mmax = 4
    for k in range(1, 2 * mmax + 1):
        for kind in ("u", "au"):
            assert cosphere_invariant(3, mmax, 0, SHModelClass(kind, k)) == -ceil_half(k) * TWO_PI


def test_invariants_with_constants():
    for c in (F(-2), F(1, 2), F(3)):
        for k in range(5):
            assert cosphere_invariant(3, 3, c, SHModelClass("u", k)) == c - ceil_half(k) * TWO_PI


def test_constant_hamiltonian_object():
    h = ConstantContactHamiltonian("3/2")
    assert h.osc_reeb == 0
    model = model_for_class(3, 2, U)
    assert contact_spectral_invariant(model, h, U) == SymbolicSlope(-1, F(3, 2))


def test_outside_window_not_witnessed():
    with pytest.raises(NotWitnessed):
        cosphere_invariant(3, 1, 0, SHModelClass("u", 3))


def test_axiom_report_examples():
    model = model_for_class(3, 3, U)
    two_pi_shift = contact_spectral_invariant(model, TWO_PI, U) - contact_spectral_invariant(model, 0, U)
    assert two_pi_shift == TWO_PI
    rep = spectral_axiom_report(3, 4, [0, TWO_PI, F(-2), F(1, 2), F(3)], [E, A, U, SHModelClass("au", 3)])
    assert rep.ok
    assert {name for name, _, _ in rep.checks} == {"spectrality", "shift", "monotonicity", "stability", "descent"}


def test_triangle_is_reported_not_asserted():
    rec = triangle_record(3, 4, 0, 0, U, U)
    assert rec["lhs"] == -TWO_PI and rec["rhs"] == -2 * TWO_PI
    assert rec["comparison"] == "lhs > rhs"
    rep = spectral_axiom_report(3, 4, [0], [U], [(0, 0, U, U)])
    assert rep.ok and len(rep.triangle) == 1
    assert any(line.startswith("REPORT triangle") for line in rep.lines())
    zero = triangle_record(3, 4, 0, 0, A, A)
    assert zero["product"] == "0" and zero["lhs"] == INF


def test_cosphere_duality_degrees():
    n = 3
    for degree in (0, 2 * n - 2, 2 * n - 1, 3 * n - 2):
        model = build_cosphere_model(n, 4, degree)
        theta = model.generator
        for h in (F(0), F(1, 2)):
            assert dual_contact_value(model, h, theta) == contact_spectral_invariant(model, h, theta)


def test_perturbed_offsets_stability():
    model = build_cosphere_model(3, 3, 5, offsets=[F(1, 10), F(1, 5), F(1, 2)])
    rep = restriction_stability_report(model.module)
    assert rep.ok and len(rep.pairs) == 3
    assert all(d <= 2 * TWO_PI for _, _, d, _ in rep.pairs)


def test_anti_spectral():
    fx = dying_source_fixture(m_max=3, death=1)
    assert anti_spectral_invariant(fx, 0, (0,)) == 0
    assert anti_spectral_invariant(fx, 0, (1,)) == -TWO_PI
    for s in (F(-1), F(1, 2), F(2)):
        assert anti_spectral_invariant(fx, s, (1,)) == -TWO_PI + s
    assert anti_spectral_invariant(fx, F(-1), (1,)) <= anti_spectral_invariant(fx, F(1), (1,))


def test_anti_spectral_never_dies():
    fx = dying_source_fixture(m_max=2, death=5)
    with pytest.raises(NotWitnessed):
        anti_spectral_invariant(fx, 0, (1,))


def test_incompatible_source_rejected():
    fx = dying_source_fixture(m_max=2, death=5)
    from gapped.linalg_ff import Matrix

    bad = SourcedSystem(fx.module, 1, (Matrix.identity(1), Matrix.zero(1, 1), Matrix.identity(1)))
    with pytest.raises(ValueError, match="incompatible"):
        anti_spectral_invariant(bad, 0, (1,))


def test_quasi_state():
    for h in (F(0), F(1), F(-3, 2)):
        tr = quasi_state_estimate(3, 2, h, 6)
        assert tr.values == [h] * 6 and tr.estimate == h and tr.subadditive


def test_quasi_measure():
    pts = ("x", "y", "z")
    const1 = Candidate("one", tuple((p, F(1)) for p in pts))
    zeta = constant_quasi_state()
    assert quasi_measure_eval(zeta, [const1], pts).value == 1
    flagged = [Candidate(f"c{k}", tuple((p, F(1)) for p in pts), z)
               for k, z in enumerate((F(1), F(1, 2), F(1, 4)))]
    assert quasi_measure_eval(None, flagged, ("x",)).value == F(1, 4)
    family = [
        const1,
        Candidate("bump_x", (("x", F(1)), ("y", F(0)), ("z", F(0))), F(1, 3)),
        Candidate("bump_xy", (("x", F(1)), ("y", F(1)), ("z", F(1, 2))), F(2, 3)),
    ]
    assert quasi_measure_monotone(zeta, family, ("x",), ("x", "y"))
    assert quasi_measure_eval(zeta, family, ("x",)).value == F(1, 3)
    free = quasi_measure_eval(None, [Candidate("zero", (("x", F(0)),), F(0))], ("x",))
    assert free.unconstrained and free.value == INF


def test_eternal():
    model = build_cosphere_model(3, 2, 3, negative_slot=True)
    validate_gapped(model.module)
    assert eternal_check(model.module, (0,)).eternal
    res = eternal_check(model.module, (1,))
    assert not res.eternal and res.threshold == SymbolicSlope(0, F(1, 10))
    res = eternal_check(build_cosphere_model(3, 2, 5).module, (1,))
    assert not res.eternal and res.threshold == SymbolicSlope(1, F(1, 10))
    plain = eternal_check(build_cosphere_model(3, 2, 3).module, (1,))
    assert plain.eternal


def test_negative_slot_keeps_values():
    for degree in (0, 3, 5):
        model = build_cosphere_model(3, 3, degree, negative_slot=True)
        assert contact_spectral_invariant(model, 0, model.generator) == \
            contact_spectral_invariant(build_cosphere_model(3, 3, degree), 0, model.generator)
