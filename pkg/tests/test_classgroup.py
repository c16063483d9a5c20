import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from forge.abelian import FiniteAbelianGroup
from forge.classgroup import (
    ClassGroupBudgetExceeded,
    brute_force_class_number,
    class_group,
    class_number,
    class_rank,
    count_reduced_definite,
    is_fundamental,
    is_principal_class,
    s_class_group,
    subgroup_rank,
)
from forge.qform import Form, compose_forms, kronecker, prime_form, principal_form


def G(*d):
    return FiniteAbelianGroup(tuple(d))


# --- two pure-python oracles for real quadratic fields: reduced forms and their cycles

def _reduced_indefinite(D):
    s = math.isqrt(D)
    out = []
    for a in range(-s, s + 1):
        for b in range(1, s + 1):
            if a and (b * b - D) % (4 * a) == 0 and abs(math.sqrt(D) - 2 * abs(a)) < b:
                out.append((a, b))
    return out


def _step(a, b, D):
    c = (b * b - D) // (4 * a)
    s, m = math.isqrt(D), 2 * abs(c)
    b2 = next(x for x in range(s, s - m, -1) if (x + b) % m == 0)
    return c, b2


def _oracle_real(D):
    """(wide h, narrow h) from cycles of reduced forms."""
    forms = set(_reduced_indefinite(D))
    seen, cycles = set(), []
    for F in sorted(forms):
        if F in seen:
            continue
        cyc, cur = [], F
        while cur not in cyc:
            cyc.append(cur)
            cur = _step(*cur, D)
        seen.update(cyc)
        cycles.append(frozenset(cyc))
    b0 = 0 if D % 4 == 0 else 1
    one = next(c for c in cycles if any(a == 1 for a, _ in c) and
               _in_class(c, 1, b0, D))
    neg = next(c for c in cycles if _in_class(c, -1, b0, D))
    hn = len(cycles)
    return (hn if one == neg else hn // 2), hn


def _in_class(cyc, a, b, D):
    # reduce (a, b, .) with the same step and see which cycle it lands in
    cur, seen = (a, b), set()
    while cur not in cyc and cur not in seen:
        seen.add(cur)
        cur = _step(*cur, D)
    return cur in cyc


@pytest.mark.parametrize("D,inv", [
    (-3, ()), (-4, ()), (-23, (3,)), (-95, (8,)), (-84, (2, 2)), (-420, (2, 2, 2)),
    (-3299, (3, 9)), (-4027, (3, 3)), (-20, (2,)), (-56, (4,)),
])
def test_imaginary_structures(D, inv):
    assert class_group(D).structure == G(*inv)
    assert class_group(D, method="sylow").structure == G(*inv)


@pytest.mark.parametrize("D,h,hn", [(5, 1, 1), (12, 1, 2), (40, 2, 2), (136, 2, 4), (316, 3, 6),
                                    (229, 3, 3), (401, 5, 5)])
def test_real_frozen(D, h, hn):
    cl = class_group(D)
    assert (cl.h, cl.narrow_h) == (h, hn)
    assert (cl.h, cl.narrow_h) == _oracle_real(D)


def test_real_against_cycle_oracle():
    for D in range(5, 1500):
        if not is_fundamental(D) or math.isqrt(D) ** 2 == D:
            continue
        for method in ("closure", "sylow"):
            cl = class_group(D, method=method)
            assert (cl.h, cl.narrow_h) == _oracle_real(D), (D, method)


def test_imaginary_against_enumeration():
    for D in range(-3, -3000, -1):
        if is_fundamental(D):
            h = brute_force_class_number(D)
            assert class_number(D) == h
            assert count_reduced_definite(D) == h
            assert class_group(D, method="sylow").h == h


def test_not_fundamental():
    for D in (-12, 45, 0, 1, 100):
        with pytest.raises(ValueError):
            class_group(D)


def test_bound_enforced():
    with pytest.raises(ClassGroupBudgetExceeded):
        class_group(-(10**6) - 3, bound=10**5)


def test_closure_budget():
    with pytest.raises(ClassGroupBudgetExceeded):
        class_group(-3299, method="closure", budget=5)


def test_class_rank():
    assert class_rank(-3299, 3) == 2
    assert class_rank(-95, 3) == 0
    assert class_rank(-420, 2) == 3


def test_generators_and_logs():
    cl = class_group(-3299)
    for F, coords in cl.generators:
        assert cl.log(F) == coords
    p, q = [p for p in (3, 5, 7, 11, 13, 17, 19, 23) if kronecker(-3299, p) == 1][:2]
    F, G_ = prime_form(-3299, p), prime_form(-3299, q)
    d = cl.structure.invariant_factors
    lf, lg = cl.log(F), cl.log(G_)
    assert cl.log(compose_forms(F, G_)) == tuple((x + y) % n for x, y, n in zip(lf, lg, d))
    assert cl.log(cl.element(lf)) == lf


def test_log_rejects_other_discriminant():
    with pytest.raises(ValueError):
        class_group(-23).log(Form(1, 1, 2))


def test_s_class_group():
    # the prime above 2 generates Cl(-95) = Z/8
    assert kronecker(-95, 2) == 1
    assert s_class_group(-95, [2]).quotient == G()
    assert s_class_group(-95, []).quotient == G(8)
    # the ramified prime above 5 has order 2 in Cl(-95)
    assert s_class_group(-95, [5]).quotient == G(4)
    # inert primes change nothing
    assert s_class_group(-23, [5]).quotient == G(3)


def test_principal_and_subgroup():
    assert is_principal_class(Form(1, 1, 6))
    assert not is_principal_class(Form(2, 1, 3))
    # wide class group: -F0 counts as principal
    assert is_principal_class(Form(-1, 0, 31))
    ps = [p for p in (3, 5, 7, 11, 13, 17) if kronecker(-3299, p) == 1][:2]
    grp, r = subgroup_rank(-3299, [prime_form(-3299, p) for p in ps], 3)
    assert grp.order <= 27 and r <= 2


def test_large_discriminant_consistency():
    D = -(10**9 + 7)
    while not is_fundamental(D):
        D -= 1
    a, b = class_group(D, method="sylow"), class_group(D, method="closure")
    assert a.structure == b.structure
    assert a.h == count_reduced_definite(D)


fund_neg = st.integers(3, 200000).map(lambda n: -n).filter(is_fundamental)
fund_pos = st.integers(5, 200000).filter(lambda D: is_fundamental(D) and math.isqrt(D) ** 2 != D)


def _sylow_small_budget(D):
    try:
        return class_group(D, method="sylow", budget=50)
    except ClassGroupBudgetExceeded:
        return None  # non-cyclic Sylow subgroup larger than the budget


@given(fund_neg)
def test_sylow_matches_closure_imaginary(D):
    a, b = class_group(D, method="closure"), _sylow_small_budget(D)
    assume(b is not None)
    assert a.structure == b.structure


@settings(max_examples=30)
@given(fund_pos)
def test_sylow_matches_closure_real(D):
    a, b = class_group(D, method="closure"), _sylow_small_budget(D)
    assume(b is not None)
    assert (a.structure, a.narrow_h) == (b.structure, b.narrow_h)


@given(fund_neg, st.data())
def test_log_is_a_homomorphism(D, data):
    cl = class_group(D)
    ps = [p for p in range(2, 100) if all(p % q for q in range(2, p)) and kronecker(D, p) != -1]
    p, q = data.draw(st.sampled_from(ps)), data.draw(st.sampled_from(ps))
    F, G_ = prime_form(D, p), prime_form(D, q)
    d = cl.structure.invariant_factors
    expected = tuple((x + y) % n for x, y, n in zip(cl.log(F), cl.log(G_), d))
    assert cl.log(compose_forms(F, G_)) == expected


@given(fund_pos)
def test_real_wide_is_narrow_mod_sign(D):
    cl = class_group(D)
    assert cl.narrow_h in (cl.h, 2 * cl.h)
    F0 = principal_form(D)
    neg = Form(-F0.a, F0.b, -F0.c)
    assert is_principal_class(neg)
