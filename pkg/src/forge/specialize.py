"""Specialising the family at x = (tM + 1)/M and pulling the torsion classes back to Cl(D).

A record carries the value q of the rescaled odd model at x0, its squarefree
kernel d0 and the fundamental discriminant D of Q(sqrt(q)). The pullback maps
the point back to the even model (x_e, y_e) and reads off the ideals of the
functions y - x^m - c and y - x^m + c, which have m-th power support away from
a small screened set of primes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from forge.abelian import m_rank
from forge.classgroup import ClassGroupDescription, is_principal_class
from forge.curves import CurveFamily, Polynomial, Rescaling, evaluate
from forge.factor import FactorBudgetExceeded, factorize, squarefree_decompose
from forge.qform import Form, compose_forms, power_form, prime_form, principal_form, reduce

OK = "ok"
DEGENERATE_ZERO = "degenerate_zero"
DEGENERATE_SQUARE = "degenerate_square"
BUDGET = "factor_budget_exceeded"
STATUSES = (OK, DEGENERATE_ZERO, DEGENERATE_SQUARE, BUDGET)


def _primes_of(x: Fraction | int) -> list[int]:
    x = Fraction(x)
    out = set()
    for part in (x.numerator, x.denominator):
        if abs(part) > 1:
            out.update(factorize(part))
    return sorted(out)


def bad_prime_set(fam: CurveFamily, g: Polynomial | None = None) -> list[int]:
    """Primes dividing the discriminant of the odd model, together with 2."""
    from forge.curves import discriminant, odd_model

    g = odd_model(fam).g if g is None else g
    return sorted(set(_primes_of(discriminant(g))) | {2})


def modulus(primes) -> int:
    return math.prod(primes)


def shifted_value(f: Polynomial, M: int, t: int) -> Fraction:
    """f((tM + 1)/M)."""
    return evaluate(f, Fraction(t * M + 1, M))


def valuation(x: Fraction | int, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of 0")
    v, n, d = 0, x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def total_ramification_check(q: Fraction | int, p: int, n: int) -> bool:
    """Certificate that p is totally ramified in Q(q^(1/n)): gcd(v_p(q), n) = 1."""
    if q == 0:
        raise ValueError("q must be nonzero")
    return math.gcd(valuation(q, p), n) == 1


def to_fundamental_discriminant(d0: int) -> int:
    if d0 in (0, 1):
        raise ValueError(f"degenerate squarefree part {d0}")
    return d0 if d0 % 4 == 1 else 4 * d0


@dataclass(frozen=True)
class SpecializationRecord:
    t: int
    M: int
    x0: Fraction
    q: Fraction
    d0: int = 0
    s: int = 0
    D: int = 0
    status: str = OK

    @property
    def ok(self) -> bool:
        return self.status == OK

    @property
    def imaginary(self) -> bool:
        return self.q < 0


def specialize(fam: CurveFamily, model: Polynomial, M: int, t: int) -> SpecializationRecord:
    """Specialise the integral model y^2 = model(x) (leading -1) at x0 = (tM + 1)/M."""
    if model.leading != -1 or not model.is_integral():
        raise ValueError("model must be integral with leading coefficient -1")
    x0 = Fraction(t * M + 1, M)
    q = evaluate(model, x0)
    if q == 0:
        return SpecializationRecord(t, M, x0, q, status=DEGENERATE_ZERO)
    # q * den^2 = num * den has the square class of q; den divides M^deg
    N = q.numerator * q.denominator
    try:
        d0, s = squarefree_decompose(N)
    except FactorBudgetExceeded:
        return SpecializationRecord(t, M, x0, q, status=BUDGET)
    if d0 == 1:
        return SpecializationRecord(t, M, x0, q, d0, s, status=DEGENERATE_SQUARE)
    return SpecializationRecord(t, M, x0, q, d0, s, to_fundamental_discriminant(d0))


# ---------------------------------------------------------------- pullback

@dataclass(frozen=True)
class PullbackResult:
    gamma_plus: Form | None
    gamma_minus: Form | None
    admissible: bool
    obstruction: str | None = None
    x_even: Fraction | None = None
    support: tuple[int, ...] = field(default=())


def even_point(fam: CurveFamily, resc: Rescaling, rec: SpecializationRecord) -> tuple[Fraction, Fraction]:
    """(x_e, w) with y_e = w * sqrt(D) on y^2 = f(x) over the point of the record."""
    s_odd = rec.x0 * resc.x_scale
    x_e = 1 + 1 / s_odd
    W = resc.y_scale * Fraction(rec.s, rec.q.denominator) / s_odd**fam.m
    w = W / 2 if rec.D == 4 * rec.d0 else W
    if w * w * rec.D != evaluate(fam.f, x_e):
        raise AssertionError(f"t={rec.t}: pulled-back point is not on the even model")
    return x_e, w


def _matched_form(D: int, p: int, r: Fraction) -> Form:
    """Prime form of norm p whose ideal contains sqrt(D) - r (r a p-unit, r^2 = D mod p)."""
    root = r.numerator * pow(r.denominator, -1, p) % p
    if (root * root - D) % p:
        raise AssertionError(f"{r} is not a square root of {D} mod {p}")
    b = root if (root - D) % 2 == 0 else root + p
    return prime_form(D, p, root_choice=b)


def _screened(fam: CurveFamily, rec: SpecializationRecord, unit: Fraction, p: int) -> bool:
    """p divides 2 s d0 (b^2 - 4c^2) c, or the residue used for root matching is not a p-unit."""
    bad = Fraction(2 * rec.s * rec.d0) * (fam.b**2 - 4 * fam.c**2) * fam.c * unit
    return bad.numerator % p == 0 or bad.denominator % p == 0


def pullback_classes(fam: CurveFamily, resc: Rescaling, rec: SpecializationRecord) -> PullbackResult:
    """Form classes gamma_plus, gamma_minus with gamma^m = class of (y - x^m -/+ c)."""
    if not rec.ok:
        raise ValueError(f"record at t={rec.t} has status {rec.status}")
    D, m = rec.D, fam.m
    x_e, w = even_point(fam, resc, rec)
    support = tuple(_primes_of(x_e))
    for p in support:
        unit = w if valuation(x_e, p) > 0 else x_e**m / w
        if _screened(fam, rec, unit, p):
            return PullbackResult(None, None, False, f"prime {p} of x_e fails the coprimality screen",
                                  x_e, support)
    one = reduce(principal_form(D))
    g_plus = g_minus = one
    for p in support:
        v = valuation(x_e, p)
        if v > 0:
            # y_e = +c (resp. -c) modulo the prime dividing y - x^m - c (resp. y - x^m + c)
            Fp = _matched_form(D, p, fam.c / w)
            g_plus = compose_forms(g_plus, power_form(Fp, v))
            g_minus = compose_forms(g_minus, power_form(Fp, -v))
        else:
            # y_e / x_e^m = 1 modulo the prime where both functions lose their pole
            Fp = _matched_form(D, p, x_e**m / w)
            g = power_form(Fp, -v)
            g_plus = compose_forms(g_plus, g)
            g_minus = compose_forms(g_minus, g)
    return PullbackResult(g_plus, g_minus, True, None, x_e, support)


def pullback_confirmed(pb: PullbackResult, m: int) -> bool:
    """Both gamma^m are principal, recomputed by composition."""
    if not pb.admissible:
        return False
    return all(is_principal_class(power_form(g, m)) for g in (pb.gamma_plus, pb.gamma_minus))


def is_exceptional(rec: SpecializationRecord, m: int, cl: ClassGroupDescription) -> bool:
    """m-rank of Cl(D) below 2 (imaginary) or below 1 (real)."""
    if not rec.ok:
        raise ValueError("exceptional status is defined only for ok records")
    target = 2 if rec.D < 0 else 1
    return m_rank(cl.structure, m) < target
