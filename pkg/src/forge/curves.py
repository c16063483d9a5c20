"""Exact polynomials over Q and the hyperelliptic family y^2 = x^(2m) + b x^m + c^2.

The family is taken with b = -1 - c^2, which puts a rational root of f at
x = 1 and therefore a rational Weierstrass point. Sending x = 1 + 1/s gives
an odd-degree model y'^2 = g(s), which is then rescaled to integral
coefficients with leading coefficient -1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction | int


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


class Polynomial:
    """Dense univariate polynomial with Fraction coefficients, coefficients[i] of x^i."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable[Rational] = ()):
        cs = [_frac(c) for c in coefficients]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coefficients = tuple(cs)

    @classmethod
    def monomial(cls, n: int, coeff: Rational = 1) -> "Polynomial":
        return cls([0] * n + [coeff])

    @classmethod
    def x(cls) -> "Polynomial":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1  # -1 for the zero polynomial

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def __getitem__(self, i: int) -> Fraction:
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        return isinstance(other, Polynomial) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coefficients]})"

    def __str__(self):
        if not self.coefficients:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coefficients[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                coeff = "-" if c < 0 else ""
            else:
                coeff = str(c) + ("*" if mono else "")
            terms.append(coeff + mono)
        return " + ".join(terms).replace("+ -", "- ")

    def _coerce(self, other) -> "Polynomial":
        return other if isinstance(other, Polynomial) else Polynomial([other])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coefficients), len(other.coefficients))
        return Polynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coefficients)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.coefficients or not other.coefficients:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a:
                for j, b in enumerate(other.coefficients):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result, base = Polynomial([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if not other.coefficients:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coefficients)
        dq = other.degree
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        lead = other.leading
        for k in range(len(rem) - 1, dq - 1, -1):
            coef = rem[k] / lead
            if coef:
                quot[k - dq] = coef
                for j, b in enumerate(other.coefficients):
                    rem[k - dq + j] -= coef * b
        return Polynomial(quot), Polynomial(rem[:dq])

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def __call__(self, x0: Rational) -> Fraction:
        return evaluate(self, x0)

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coefficients) if i)

    def compose(self, other: "Polynomial") -> "Polynomial":
        result = Polynomial()
        for c in reversed(self.coefficients):
            result = result * other + c
        return result

    def scale_variable(self, lam: Rational) -> "Polynomial":
        """p(lam * x)."""
        lam = _frac(lam)
        return Polynomial(c * lam**i for i, c in enumerate(self.coefficients))

    def reversed_to(self, n: int) -> "Polynomial":
        """x^n p(1/x) for n >= deg p."""
        if n < self.degree:
            raise ValueError("n below the degree")
        cs = list(self.coefficients) + [Fraction(0)] * (n + 1 - len(self.coefficients))
        return Polynomial(reversed(cs))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients)

    def denominator_lcm(self) -> int:
        return math.lcm(1, *(c.denominator for c in self.coefficients))

    def to_json(self) -> str:
        return json.dumps([f"{c.numerator}/{c.denominator}" for c in self.coefficients])

    @classmethod
    def from_json(cls, text: str) -> "Polynomial":
        return cls(Fraction(s) for s in json.loads(text))


def evaluate(f: Polynomial, x0: Rational) -> Fraction:
    """Exact value f(x0) by Horner's rule."""
    x0 = _frac(x0)
    acc = Fraction(0)
    for c in reversed(f.coefficients):
        acc = acc * x0 + c
    return acc


def resultant(f: Polynomial, g: Polynomial) -> Fraction:
    """Res(f, g) by the Euclidean algorithm over Q."""
    if not f.coefficients or not g.coefficients:
        return Fraction(0)
    res = Fraction(1)
    while True:
        m, n = f.degree, g.degree
        if n == 0:
            return res * g.leading**m
        r = f % g
        if not r.coefficients:
            return Fraction(0)
        # Res(f, g) = (-1)^(mn) lc(g)^(m - deg r) Res(g, r)
        if (m * n) % 2:
            res = -res
        res *= g.leading ** (m - r.degree)
        f, g = g, r


def discriminant(f: Polynomial) -> Fraction:
    n = f.degree
    if n < 1:
        raise ValueError("discriminant of a constant")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.leading


# ---------------------------------------------------------------- the family

@dataclass(frozen=True)
class CurveFamily:
    m: int
    c: Fraction
    b: Fraction
    f: Polynomial

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("m must be at least 2")
        if self.c == 0 or self.b**2 == 4 * self.c**2:
            raise ValueError(f"degenerate parameters b={self.b}, c={self.c}")

    @property
    def genus(self) -> int:
        return self.m - 1


def build_family(m: int, c: Rational) -> CurveFamily:
    """y^2 = x^(2m) + b x^m + c^2 with b = -1 - c^2, so that f(1) = 0."""
    c = _frac(c)
    if m < 2:
        raise ValueError("m must be at least 2")
    if c in (0, 1, -1):
        raise ValueError(f"invalid parameter c={c}")
    b = -1 - c * c
    f = Polynomial.monomial(2 * m) + Polynomial.monomial(m, b) + c * c
    fam = CurveFamily(m, c, b, f)
    assert evaluate(f, 1) == 0
    return fam


def norm_identities(fam: CurveFamily) -> tuple[Polynomial, Polynomial]:
    """(f - (x^m + c)^2, f - (x^m - c)^2), checked against (b - 2c) x^m and (b + 2c) x^m."""
    xm = Polynomial.monomial(fam.m)
    plus = fam.f - (xm + fam.c) ** 2
    minus = fam.f - (xm - fam.c) ** 2
    if plus != Polynomial.monomial(fam.m, fam.b - 2 * fam.c):
        raise AssertionError(f"norm identity failed for y - x^m - c: {plus}")
    if minus != Polynomial.monomial(fam.m, fam.b + 2 * fam.c):
        raise AssertionError(f"norm identity failed for y - x^m + c: {minus}")
    return plus, minus


@dataclass(frozen=True)
class OddModel:
    """y'^2 = g(s) with x = 1 + 1/s and y = y' / s^m."""

    g: Polynomial
    h: Polynomial
    genus: int
    leading: Fraction

    @property
    def degree(self) -> int:
        return self.g.degree


def odd_model(fam: CurveFamily) -> OddModel:
    f = fam.f
    if evaluate(f, 1) != 0:
        raise ValueError("f(1) != 0: no rational Weierstrass point at x = 1")
    h, r = f.divmod(Polynomial([-1, 1]))
    assert not r.coefficients and h * Polynomial([-1, 1]) == f
    n = 2 * fam.m - 1
    # s^n h(1 + 1/s) = (reverse of h(1 + x)) in s
    g = h.compose(Polynomial([1, 1])).reversed_to(n)
    assert g.degree == n and g.leading == evaluate(h, 1)
    return OddModel(g, h, (n - 1) // 2, g.leading)


@dataclass(frozen=True)
class Rescaling:
    """Integral model y^n = F(X) of y^n = f(x) via x = X * x_scale, y = Y * y_scale."""

    source: Polynomial
    n: int
    result: Polynomial
    alpha: int
    gamma: int
    d: Fraction
    w: int
    sign: int

    @property
    def x_scale(self) -> Fraction:
        return 1 / (self.d**self.alpha * self.w**self.n)

    @property
    def y_scale(self) -> Fraction:
        return Fraction(self.sign) / (self.d**self.gamma * self.w**self.source.degree)


def _bezout_exponents(r: int, n: int) -> tuple[int, int]:
    """alpha, gamma >= 1 with r alpha - n gamma = 1."""
    alpha = pow(r, -1, n)
    while (r * alpha - 1) // n < 1:
        alpha += n
    return alpha, (r * alpha - 1) // n


def rescaling(f: Polynomial, n: int) -> Rescaling:
    r = f.degree
    if n < 2 or r < 1:
        raise ValueError("need n >= 2 and a nonconstant polynomial")
    if math.gcd(r, n) != 1:
        raise ValueError(f"gcd(deg f, n) = gcd({r}, {n}) != 1")
    sign = 1
    if f.leading > 0:
        if n % 2 == 0:
            raise ValueError("positive leading coefficient with even n: sign cannot be arranged")
        f_signed, sign = -f, -1
    else:
        f_signed = f
    d = -f_signed.leading
    alpha, gamma = _bezout_exponents(r, n)
    # y^n = d^(n gamma) f(x / d^alpha)
    g = Polynomial(a * d ** (n * gamma - i * alpha) for i, a in enumerate(f_signed.coefficients))
    w = g.denominator_lcm()
    g = Polynomial(a * Fraction(w) ** (n * (r - i)) for i, a in enumerate(g.coefficients))
    assert g.leading == -1 and g.is_integral()
    return Rescaling(f, n, g, alpha, gamma, d, w, sign)


def rescale_leading_minus_one(f: Polynomial, n: int) -> Polynomial:
    """Isomorphic integral model with leading coefficient exactly -1."""
    return rescaling(f, n).result


def family_bundle(m: int, c: Rational, n: int = 2):
    """(family, odd model, rescaling) for the default family."""
    fam = build_family(m, c)
    model = odd_model(fam)
    return fam, model, rescaling(model.g, n)


def coefficients_from_strings(items: Sequence[str]) -> Polynomial:
    return Polynomial(Fraction(s) for s in items)
