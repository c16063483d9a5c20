"""Binary quadratic forms a x^2 + b x y + c y^2: reduction, composition, prime forms.

Forms of negative discriminant are positive definite; a negative definite
form is rejected rather than silently negated. For positive discriminants a
class is represented by the lexicographically least reduced form on its cycle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from forge.abelian import is_prime


class InvalidForm(ValueError):
    pass


def _check_discriminant(D: int) -> None:
    if D % 4 not in (0, 1):
        raise InvalidForm(f"discriminant {D} is not 0 or 1 mod 4")
    if D >= 0 and math.isqrt(D) ** 2 == D:
        raise InvalidForm(f"discriminant {D} is a square")


@dataclass(frozen=True, order=True)
class Form:
    a: int
    b: int
    c: int

    def __post_init__(self):
        D = self.b * self.b - 4 * self.a * self.c
        _check_discriminant(D)
        if D < 0 and self.a <= 0:
            raise InvalidForm(f"negative definite form {self}")

    @property
    def D(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __str__(self):
        return f"{self.a},{self.b},{self.c}"

    @classmethod
    def parse(cls, text: str) -> "Form":
        a, b, c = (int(x) for x in text.split(","))
        return cls(a, b, c)

    def inverse(self) -> "Form":
        return Form(self.a, -self.b, self.c)

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y


def discriminant(F: Form) -> int:
    return F.b * F.b - 4 * F.a * F.c


def principal_form(D: int) -> Form:
    _check_discriminant(D)
    if D % 4 == 0:
        return Form(1, 0, -D // 4)
    return Form(1, 1, (1 - D) // 4)


# ---------------------------------------------------------------- reduction

def is_reduced(F: Form) -> bool:
    a, b, c = F.a, F.b, F.c
    D = b * b - 4 * a * c
    if D < 0:
        return abs(b) <= a <= c and (b >= 0 if (abs(b) == a or a == c) else True)
    s = math.isqrt(D)
    # 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b, with sqrt(D) irrational
    return 0 < b <= s and 2 * abs(a) + b > s and 2 * abs(a) - b <= s


def _reduce_definite(a: int, b: int, c: int) -> tuple[int, int, int]:
    while True:
        if not -a < b <= a:
            r = (a - b) // (2 * a)
            b, c = b + 2 * r * a, a * r * r + b * r + c
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return a, b, c


def _rho_indefinite(a: int, b: int, c: int, D: int, s: int) -> tuple[int, int, int]:
    """One reduction step (a, b, c) -> (c, b', c') with b' = -b mod 2|c| normalised."""
    m = 2 * abs(c)
    if abs(c) > s:
        b2 = (-b) % m  # then shift into -|c| < b2 <= |c|
        if b2 > abs(c):
            b2 -= m
    else:
        b2 = s - ((s + b) % m)  # largest b2 < sqrt(D) in the class
    return c, b2, (b2 * b2 - D) // (4 * c)


def _is_reduced_indef(a: int, b: int, s: int) -> bool:
    return 0 < b <= s and 2 * abs(a) + b > s and 2 * abs(a) - b <= s


def _reduce_indefinite(a: int, b: int, c: int, D: int) -> tuple[int, int, int]:
    s = math.isqrt(D)
    while not _is_reduced_indef(a, b, s):
        a, b, c = _rho_indefinite(a, b, c, D, s)
    return a, b, c


def reduce(F: Form) -> Form:
    """A reduced form properly equivalent to F (the unique one when D < 0)."""
    D = F.D
    if D < 0:
        return Form(*_reduce_definite(F.a, F.b, F.c))
    return Form(*_reduce_indefinite(F.a, F.b, F.c, D))


def rho(F: Form) -> Form:
    """Successor of a reduced indefinite form on its cycle."""
    D = F.D
    return Form(*_rho_indefinite(F.a, F.b, F.c, D, math.isqrt(D)))


def cycle(F: Form) -> list[Form]:
    """The rho-cycle of reduced forms through reduce(F) (D > 0)."""
    G = reduce(F)
    D = G.D
    s = math.isqrt(D)
    a, b, c = G.a, G.b, G.c
    out = []
    while True:
        out.append(Form(a, b, c))
        a, b, c = _rho_indefinite(a, b, c, D, s)
        if (a, b) == (G.a, G.b):
            return out


def cycle_minimum(F: Form) -> Form:
    """Lexicographically least reduced form equivalent to F (D > 0)."""
    G = reduce(F)
    D = G.D
    if D < 2**60:
        from forge import _kernels

        a, b = _kernels.cycle_min(G.a, G.b, D, math.isqrt(D))
        return Form(int(a), int(b), (int(b) ** 2 - D) // (4 * int(a)))
    return min(cycle(G))


# ---------------------------------------------------------------- composition

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x a + y b = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _positive_leading(a: int, b: int, c: int, D: int) -> tuple[int, int, int]:
    if a > 0:
        return a, b, c
    if c > 0:
        return c, -b, a
    a, b, c = _reduce_indefinite(a, b, c, D)
    return (a, b, c) if a > 0 else (c, -b, a)


def compose_forms(F1: Form, F2: Form) -> Form:
    """Reduced form in the class of F1 * F2 (Dirichlet composition)."""
    D = F1.D
    if F2.D != D:
        raise ValueError(f"discriminants differ: {D} and {F2.D}")
    a1, b1, c1 = _positive_leading(F1.a, F1.b, F1.c, D)
    a2, b2, c2 = _positive_leading(F2.a, F2.b, F2.c, D)
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    return reduce(Form(a3, b3, c3))


def power_form(F: Form, n: int) -> Form:
    """Reduced form in the class of F^n."""
    if n < 0:
        F, n = F.inverse(), -n
    result = reduce(principal_form(F.D))
    base = reduce(F)
    while n:
        if n & 1:
            result = compose_forms(result, base)
        n >>= 1
        if n:
            base = compose_forms(base, base)
    return result


# ---------------------------------------------------------------- classes

@dataclass(frozen=True)
class FormClass:
    representative: Form
    discriminant: int

    def __str__(self):
        return str(self.representative)

    def is_principal(self) -> bool:
        return self.representative == canonical(principal_form(self.discriminant))


def canonical(F: Form) -> Form:
    if F.D < 0:
        return reduce(F)
    return cycle_minimum(F)


def form_class(F: Form) -> FormClass:
    return FormClass(canonical(F), F.D)


def compose(F1: Form | FormClass, F2: Form | FormClass) -> FormClass:
    F1 = F1.representative if isinstance(F1, FormClass) else F1
    F2 = F2.representative if isinstance(F2, FormClass) else F2
    return form_class(compose_forms(F1, F2))


def power(F: Form | FormClass, n: int) -> FormClass:
    F = F.representative if isinstance(F, FormClass) else F
    return form_class(power_form(F, n))


def is_equivalent(F1: Form, F2: Form) -> bool:
    D = F1.D
    if F2.D != D:
        raise ValueError(f"discriminants differ: {D} and {F2.D}")
    if D < 0:
        return reduce(F1) == reduce(F2)
    target = reduce(F2)
    return any(G == target for G in cycle(F1))


def class_order(F: Form, limit: int | None = None) -> int:
    """Order of the class of F by repeated composition."""
    one = canonical(principal_form(F.D))
    base = reduce(F)
    k = 1
    cur = base
    while canonical(cur) != one:
        cur = compose_forms(cur, base)
        k += 1
        if limit is not None and k > limit:
            raise RuntimeError(f"order of {F} exceeds {limit}")
    return k


# ---------------------------------------------------------------- prime forms

def kronecker(D: int, p: int) -> int:
    """Kronecker symbol (D | p) for a prime p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = pow(D % p, (p - 1) // 2, p)
    return 0 if r == 0 else (1 if r == 1 else -1)


def sqrt_mod_prime(n: int, p: int) -> int:
    """Some x with x^2 = n mod p (p prime, n a square mod p)."""
    n %= p
    if n == 0 or p == 2:
        return n
    if p % 4 == 3:
        return pow(n, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def prime_form_roots(D: int, p: int) -> list[int]:
    """The residues b mod 2p with b^2 = D mod 4p, smallest nonnegative first."""
    return sorted(b for b in _roots_4p(D, p))


@lru_cache(maxsize=4096)
def _roots_4p(D: int, p: int) -> tuple[int, ...]:
    if p == 2:
        return tuple(b for b in range(4) if (b * b - D) % 8 == 0)
    if kronecker(D, p) == -1:
        return ()
    r = sqrt_mod_prime(D, p)
    out = set()
    for x in (r, (-r) % p):
        # lift to b mod 2p with b = D mod 2
        b = x if (x - D) % 2 == 0 else x + p
        out.add(b % (2 * p))
    return tuple(out)


def prime_form(D: int, p: int, root_choice: int | None = None) -> Form:
    """The form (p, b, (b^2 - D) / 4p) for a prime p that is not inert."""
    _check_discriminant(D)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    roots = prime_form_roots(D, p)
    if not roots:
        raise ValueError(f"inert prime {p} for discriminant {D}")
    if root_choice is None:
        b = roots[0]
        if b > p:
            b -= 2 * p
    else:
        b = root_choice
        if (b * b - D) % (4 * p):
            raise ValueError(f"{b} is not a square root of {D} mod {4 * p}")
    return Form(p, b, (b * b - D) // (4 * p))
