import math

import pytest
from hypothesis import assume, given, strategies as st

from forge.classgroup import is_fundamental
from forge.qform import (
    Form,
    InvalidForm,
    canonical,
    class_order,
    compose,
    compose_forms,
    cycle,
    cycle_minimum,
    form_class,
    is_equivalent,
    is_reduced,
    kronecker,
    power,
    power_form,
    prime_form,
    prime_form_roots,
    principal_form,
    reduce,
    rho,
    sqrt_mod_prime,
)


def test_form_validation():
    with pytest.raises(InvalidForm):
        Form(-1, 1, -6)  # negative definite
    with pytest.raises(InvalidForm):
        Form(1, 0, -4)  # square discriminant
    assert Form.parse("2,1,3") == Form(2, 1, 3)
    assert str(Form(2, -1, 3)) == "2,-1,3"


def test_reduce_definite():
    assert reduce(Form(6, 11, 6)) == Form(1, 1, 6)
    assert reduce(Form(3, -1, 2)) == Form(2, 1, 3)
    assert is_reduced(Form(2, 1, 3)) and not is_reduced(Form(3, 1, 2))


def test_class_group_of_minus_23():
    F = Form(2, 1, 3)
    assert compose_forms(F, F.inverse()) == Form(1, 1, 6)
    assert compose_forms(F, F) == Form(2, -1, 3)
    assert power(F, 3).is_principal()
    assert class_order(F) == 3


def test_prime_forms():
    assert prime_form(-23, 2) == Form(2, 1, 3)
    assert prime_form(-4, 2) == Form(2, 2, 1)
    assert prime_form_roots(-23, 3) == [1, 5]
    with pytest.raises(ValueError):
        prime_form(124, 7)  # inert
    with pytest.raises(ValueError):
        prime_form(-23, 4)


def test_indefinite_cycle():
    cyc = cycle(Form(1, 0, -31))
    assert len(cyc) == 8
    assert all(is_reduced(F) for F in cyc)
    assert cycle_minimum(Form(1, 0, -31)) == Form(-6, 2, 5)
    assert rho(cyc[-1]) == cyc[0]


def test_indefinite_class_number_one():
    # Q(sqrt 31) has class number one: the prime above 5 has principal cube and square
    F = prime_form(124, 5)
    assert power(F, 3).is_principal() or power(F, 3) == form_class(Form(-1, 0, 31))
    assert is_equivalent(Form(1, 0, -31), Form(-6, 2, 5))
    assert not is_equivalent(Form(1, 0, -31), Form(-1, 0, 31))


def test_kronecker_and_sqrt():
    assert kronecker(-23, 2) == 1 and kronecker(-20, 2) == 0 and kronecker(5, 2) == -1
    assert kronecker(124, 5) == 1 and kronecker(124, 7) == -1
    for p in (13, 17, 41, 97, 113):
        for n in range(1, p):
            if kronecker(n, p) == 1:
                r = sqrt_mod_prime(n, p)
                assert r * r % p == n


def _brute_reduced_count(D):
    h, a = 0, 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a) == 0:
                c = (b * b - D) // (4 * a)
                if c > a or (c == a and b >= 0):
                    h += 1
        a += 1
    return h


def _small_split_primes(D, k=6):
    return [p for p in range(2, 200) if all(p % q for q in range(2, p)) and kronecker(D, p) != -1][:k]


neg_disc = st.integers(3, 20000).map(lambda n: -n).filter(is_fundamental)
pos_disc = st.integers(5, 20000).filter(lambda D: is_fundamental(D) and math.isqrt(D) ** 2 != D)
unimodular = st.tuples(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6)).map(
    lambda t: (1, t[0], t[1], 1 + t[0] * t[1]))


def _act(F, mat):
    p, q, r, s = mat
    a = F(p, r)
    c = F(q, s)
    b = 2 * F.a * p * q + F.b * (p * s + q * r) + 2 * F.c * r * s
    return Form(a, b, c)


@given(neg_disc, st.data())
def test_definite_group_axioms(D, data):
    ps = _small_split_primes(D)
    F, G, H = (prime_form(D, data.draw(st.sampled_from(ps))) for _ in range(3))
    assert compose(compose(F, G), H) == compose(F, compose(G, H))
    assert compose(F, G) == compose(G, F)
    assert compose(F, principal_form(D)) == form_class(F)
    assert compose(F, F.inverse()).is_principal()


@given(neg_disc, st.data())
def test_definite_reduction_is_class_invariant(D, data):
    F = prime_form(D, data.draw(st.sampled_from(_small_split_primes(D))))
    mat = data.draw(unimodular)
    G = _act(F, mat)
    assert G.D == D
    assert reduce(G) == reduce(F)


@given(pos_disc, st.data())
def test_indefinite_equivalence_invariant(D, data):
    ps = _small_split_primes(D)
    assume(ps)
    F = prime_form(D, data.draw(st.sampled_from(ps)))
    G = _act(F, data.draw(unimodular))
    assert is_equivalent(F, G)
    assert canonical(F) == canonical(G)


@given(pos_disc, st.data())
def test_indefinite_group_axioms(D, data):
    ps = _small_split_primes(D, 4)
    assume(ps)
    F, G, H = (prime_form(D, data.draw(st.sampled_from(ps))) for _ in range(3))
    assert compose(compose(F, G), H) == compose(F, compose(G, H))
    assert compose(F, F.inverse()).is_principal()


@given(neg_disc)
def test_power_matches_repeated_composition(D):
    F = prime_form(D, _small_split_primes(D)[0])
    acc = reduce(principal_form(D))
    for k in range(1, 8):
        acc = compose_forms(acc, F)
        assert power_form(F, k) == acc
    assert power_form(F, -3) == reduce(power_form(F, 3).inverse())


@given(neg_disc)
def test_orders_divide_class_number(D):
    h = _brute_reduced_count(D)
    for p in _small_split_primes(D, 3):
        assert h % class_order(prime_form(D, p)) == 0
