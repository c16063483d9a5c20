from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from forge.classgroup import brute_force_class_number, class_group, is_fundamental, is_principal_class
from forge.curves import Polynomial, build_family, family_bundle
from forge.factor import squarefree_decompose
from forge.qform import is_equivalent, power_form
from forge.specialize import (
    DEGENERATE_SQUARE,
    DEGENERATE_ZERO,
    OK,
    SpecializationRecord,
    _matched_form,
    bad_prime_set,
    even_point,
    is_exceptional,
    modulus,
    pullback_classes,
    pullback_confirmed,
    shifted_value,
    specialize,
    to_fundamental_discriminant,
    total_ramification_check,
    valuation,
)

BUNDLES = {m: family_bundle(m, 2) for m in (2, 3)}


def test_bad_primes():
    for m, (fam, om, _) in BUNDLES.items():
        S = bad_prime_set(fam, om.g)
        assert 2 in S and set(S) <= {2, 3}
        assert modulus(S) == 6
    assert 2 in bad_prime_set(build_family(2, 5))


@pytest.mark.parametrize("d0,D", [(-95, -95), (31, 124), (-1, -4), (5, 5), (2, 8)])
def test_fundamental(d0, D):
    assert to_fundamental_discriminant(d0) == D
    assert is_fundamental(D)


@pytest.mark.parametrize("d0", [0, 1])
def test_fundamental_rejects(d0):
    with pytest.raises(ValueError):
        to_fundamental_discriminant(d0)


def test_ramification_examples():
    p = 3
    assert total_ramification_check(Fraction(7, p**5), p, 2)
    assert not total_ramification_check(Fraction(7, 1), p, 2)
    assert not total_ramification_check(Fraction(7, p**4), p, 2)
    with pytest.raises(ValueError):
        total_ramification_check(0, p, 2)


def test_valuation():
    assert valuation(Fraction(12, 5), 2) == 2
    assert valuation(Fraction(12, 25), 5) == -2
    with pytest.raises(ValueError):
        valuation(0, 3)


def test_shifted_value_plain_at_unit_modulus():
    F = BUNDLES[3][2].result
    for t in range(-3, 4):
        assert shifted_value(F, 1, t) == F(t + 1)


def test_degenerate_records():
    fam = build_family(3, 2)
    zero = specialize(fam, Polynomial([2, -1]), 1, 1)  # q = 2 - 2
    assert zero.status == DEGENERATE_ZERO and not zero.ok
    square = specialize(fam, Polynomial([5, -1]), 1, 3)  # q = 5 - 4
    assert square.status == DEGENERATE_SQUARE


def test_model_must_be_normalised():
    fam, om, _ = BUNDLES[3]
    with pytest.raises(ValueError):
        specialize(fam, om.g, 6, 1)


def test_sign_of_large_parameters():
    for m, (fam, _, resc) in BUNDLES.items():
        assert specialize(fam, resc.result, 6, 50).D < 0
        assert specialize(fam, resc.result, 6, -50).D > 0


def test_even_model_sanity_case():
    # y^2 = x^6 - 5x^3 + 4 at x = 5: f(5) = 15004 = 11^2 * 124, so y = 11 sqrt(124)
    fam = build_family(3, 2)
    assert squarefree_decompose(15004) == (31, 22)
    w, D = 11, 124
    assert w * w * D == fam.f(5)
    # N(y - x^3 + 2) = 123^2 - 15004 = 125 = 5^3
    assert 123**2 - 15004 == 125
    g_minus = _matched_form(D, 5, Fraction(123, w))
    assert g_minus.a == 5 and g_minus.D == D
    assert is_principal_class(power_form(g_minus, 3))


def test_exceptional_at_minus_95():
    rec = SpecializationRecord(2, 1, Fraction(2), Fraction(-95), -95, 1, -95, OK)
    cl = class_group(-95)
    assert brute_force_class_number(-95) == 8
    assert is_exceptional(rec, 3, cl)
    assert is_exceptional(rec, 2, cl)  # Z/8 has 2-rank 1, below the imaginary target 2


def test_exceptional_targets():
    imag = SpecializationRecord(1, 1, Fraction(1), Fraction(-4027), -4027, 1, -4027, OK)
    assert not is_exceptional(imag, 3, class_group(-4027))  # Z/3 x Z/3
    real = SpecializationRecord(1, 1, Fraction(1), Fraction(229), 229, 1, 229, OK)
    assert not is_exceptional(real, 3, class_group(229))  # h = 3
    with pytest.raises(ValueError):
        is_exceptional(SpecializationRecord(1, 1, Fraction(1), Fraction(0), status=DEGENERATE_ZERO),
                       3, class_group(-23))


def test_pullback_rejects_degenerate():
    fam, _, resc = BUNDLES[3]
    with pytest.raises(ValueError):
        pullback_classes(fam, resc, SpecializationRecord(1, 6, Fraction(7, 6), Fraction(0),
                                                         status=DEGENERATE_ZERO))


def test_pullback_integral_even_point():
    # t = 0 lands on x_e = 55: only numerator primes carry the classes
    fam, _, resc = BUNDLES[3]
    rec = specialize(fam, resc.result, 6, 0)
    pb = pullback_classes(fam, resc, rec)
    assert pb.x_even == 55 and pb.support == (5, 11)
    assert pb.admissible and pullback_confirmed(pb, 3)


@settings(max_examples=25)
@given(st.sampled_from([2, 3]), st.integers(-40, 40))
def test_record_invariants(m, t):
    fam, om, resc = BUNDLES[m]
    F = resc.result
    M = modulus(bad_prime_set(fam, om.g))
    q = shifted_value(F, M, t)
    for p in (2, 3):
        assert valuation(q, p) == -F.degree
        assert total_ramification_check(q, p, 2)
    rec = specialize(fam, F, M, t)
    assert rec.status == OK
    assert rec.s**2 * rec.d0 == q.numerator * q.denominator
    assert rec.D == to_fundamental_discriminant(rec.d0) and is_fundamental(rec.D)
    assert (rec.D < 0) == (q < 0)
    assert all(rec.D % p == 0 for p in (2, 3))


@settings(max_examples=15)
@given(st.sampled_from([2, 3]), st.integers(-30, 30))
def test_pullback_gamma_power_principal(m, t):
    fam, _, resc = BUNDLES[m]
    rec = specialize(fam, resc.result, 6, t)
    x_e, w = even_point(fam, resc, rec)
    assert w * w * rec.D == fam.f(x_e)
    pb = pullback_classes(fam, resc, rec)
    if pb.admissible:
        for g in (pb.gamma_plus, pb.gamma_minus):
            assert g.D == rec.D
            assert is_principal_class(power_form(g, m))
        assert pullback_confirmed(pb, m)
    else:
        assert pb.obstruction and not pullback_confirmed(pb, m)


def test_gamma_minus_is_conjugate_on_numerator_support():
    # on numerator primes gamma_minus is the conjugate of gamma_plus
    fam, _, resc = BUNDLES[3]
    pb = pullback_classes(fam, resc, specialize(fam, resc.result, 6, 0))
    assert is_equivalent(pb.gamma_minus, pb.gamma_plus.inverse())
