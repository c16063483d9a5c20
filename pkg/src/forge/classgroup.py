"""Ideal class groups of quadratic fields, recovered from binary quadratic forms.

Two regimes, both exact:

* |D| <= CLOSURE_LIMIT: saturate the subgroup generated by prime forms up to
  an unconditional generating bound; the class number is the size of the
  closure.
* larger |D|: the narrow class number comes from a compiled count of reduced
  forms (D < 0) or from a partition of the reduced forms into cycles (D > 0),
  and each Sylow subgroup is saturated separately from powers of prime forms.

Real quadratic fields get the wide class group: the narrow group modulo the
class of the negated principal form (trivial exactly when the fundamental
unit has norm -1).
"""

from __future__ import annotations

import math
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from forge import _kernels
from forge.abelian import TRIVIAL, BudgetError, FiniteAbelianGroup, Presentation, is_prime, m_rank
from forge.factor import factorize
from forge.qform import (
    Form,
    compose_forms,
    cycle_minimum,
    kronecker,
    power_form,
    prime_form,
    principal_form,
    reduce,
)

CLOSURE_LIMIT = 10**7
DEFAULT_BOUND = 10**15
CLOSURE_BUDGET = 10**6


class ClassGroupBudgetExceeded(BudgetError):
    pass


def is_fundamental(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        d0 = D
    elif D % 4 == 0 and (D // 4) % 4 in (2, 3):
        d0 = D // 4
    else:
        return False
    return all(e == 1 for e in factorize(d0).values())


# ---------------------------------------------------------------- sieve cache

_SIEVE_LOCK = threading.Lock()
_SIEVE = np.zeros(0, np.int32)


def _spf(n: int) -> np.ndarray:
    global _SIEVE
    with _SIEVE_LOCK:
        if _SIEVE.shape[0] <= n:
            _SIEVE = _kernels.spf_sieve(max(n + 1, int(_SIEVE.shape[0] * 1.5), 1000))
        return _SIEVE


def count_reduced_definite(D: int) -> int:
    """Number of reduced positive definite forms of discriminant D (the class number)."""
    a_max = math.isqrt(-D // 3) + 1
    spf = _spf(a_max)
    root = _kernels.prime_roots(D, spf, a_max)
    return int(_kernels.count_reduced_definite(D, spf, root))


class _CycleTable:
    """All cycles of reduced indefinite forms of one discriminant, indexed by small |a|."""

    def __init__(self, D: int):
        self.D = D
        self.s = s = math.isqrt(D)
        n = max(s // 2, 3)
        spf = _spf(n)
        root = _kernels.prime_roots(D, spf, n)
        self.offsets, self.bvals = _kernels.small_reduced_indefinite(D, spf, root, s)
        (self.cid_pos, self.cid_neg, self.min_a, self.min_b,
         self.lengths) = _kernels.partition_cycles(D, s, self.offsets, self.bvals)

    @property
    def narrow_class_number(self) -> int:
        return int(self.min_a.shape[0])

    def canonical(self, F: Form) -> tuple[int, int]:
        G = reduce(F)
        k = _kernels.cycle_id(G.a, G.b, self.D, self.s, self.offsets, self.bvals,
                              self.cid_pos, self.cid_neg)
        if k < 0:
            raise AssertionError(f"reduced form {G} missing from the cycle table")
        return int(self.min_a[k]), int(self.min_b[k])


_TABLES: OrderedDict[int, _CycleTable] = OrderedDict()
_TABLES_LOCK = threading.Lock()


def _cycle_table(D: int) -> _CycleTable:
    with _TABLES_LOCK:
        if D in _TABLES:
            _TABLES.move_to_end(D)
            return _TABLES[D]
    table = _CycleTable(D)
    with _TABLES_LOCK:
        _TABLES[D] = table
        while len(_TABLES) > 2:
            _TABLES.popitem(last=False)
    return table


# ---------------------------------------------------------------- group law on classes

class FormArithmetic:
    """Group law on form classes of one discriminant with hashable canonical keys."""

    def __init__(self, D: int, table: _CycleTable | None = None):
        self.D = D
        self.table = table
        self.one = reduce(principal_form(D))
        self.one_key = self.key(self.one)

    def key(self, F: Form) -> tuple[int, int]:
        if self.D < 0:
            G = reduce(F)
            return G.a, G.b
        if self.table is not None:
            return self.table.canonical(F)
        G = cycle_minimum(F)
        return G.a, G.b

    def canonical_form(self, F: Form) -> Form:
        a, b = self.key(F)
        return Form(a, b, (b * b - self.D) // (4 * a))

    def mul(self, F: Form, G: Form) -> Form:
        return compose_forms(F, G)

    def pow(self, F: Form, n: int) -> Form:
        return power_form(F, n)

    def is_one(self, F: Form) -> bool:
        return self.key(F) == self.one_key

    def order_dividing(self, F: Form, n: int) -> int:
        """Exact order of F, given that it divides n."""
        order = n
        for p, e in factorize(n).items() if n > 1 else ():
            for _ in range(e):
                if order % p == 0 and self.is_one(self.pow(F, order // p)):
                    order //= p
                else:
                    break
        return order


def generator_stream(D: int, bound: int) -> Iterator[Form]:
    """Prime forms (p, b, c) for non-inert p <= bound, preceded by -F0 when D > 0."""
    if D > 0:
        F0 = principal_form(D)
        yield Form(-F0.a, F0.b, -F0.c)
    for p in _primes_upto(bound):
        if kronecker(D, p) != -1:
            yield prime_form(D, p)


def _primes_upto(bound: int) -> Iterator[int]:
    if bound >= 2:
        yield 2
    p = 3
    while p <= bound:
        if is_prime(p):
            yield p
        p += 2


def generating_bound(D: int) -> int:
    """Prime forms up to this bound (with -F0 when D > 0) generate the narrow class group."""
    if D < 0:
        return math.isqrt(-D // 3)
    return math.isqrt(D) // 2


@dataclass
class _Closure:
    gens: list[Form]
    relations: list[list[int]]
    elements: dict  # key -> (form, coords)

    @property
    def size(self):
        return len(self.elements)


def saturate(ar: FormArithmetic, stream: Iterable[Form], target: int | None = None,
             budget: int = CLOSURE_BUDGET) -> _Closure:
    """Incremental closure of <g_1, g_2, ...>, recording a triangular relation basis."""
    elements = {ar.one_key: (ar.one, ())}
    gens: list[Form] = []
    relations: list[list[int]] = []
    for g in stream:
        if target is not None and len(elements) >= target:
            break
        cur, e = g, 1
        while True:
            k = ar.key(cur)
            if k in elements:
                break
            cur = ar.mul(cur, g)
            e += 1
        if e == 1:
            continue
        if len(elements) * e > budget:
            raise ClassGroupBudgetExceeded(
                f"closure for D={ar.D} would reach {len(elements) * e} elements (budget {budget})")
        idx = len(gens)
        gens.append(g)
        prev = elements[k][1]
        relations.append([-c for c in prev] + [0] * (idx - len(prev)) + [e])
        base = list(elements.values())
        pw = ar.one
        for j in range(1, e):
            pw = ar.mul(pw, g)
            for F, c in base:
                G = ar.mul(F, pw)
                elements[ar.key(G)] = (G, c + (0,) * (idx - len(c)) + (j,))
    if target is not None and len(elements) != target:
        raise AssertionError(f"D={ar.D}: closure stopped at {len(elements)} elements, expected {target}")
    k = len(gens)
    relations = [r + [0] * (k - len(r)) for r in relations]
    return _Closure(gens, relations, elements)


# ---------------------------------------------------------------- components

@dataclass
class _Component:
    """A subgroup with a basis of forms of orders invariants[i] and a discrete log."""

    invariants: tuple[int, ...]
    basis: list[Form]
    log: Callable[[Form], tuple[int, ...]]


def _closure_component(ar: FormArithmetic, cl: _Closure) -> _Component:
    pres = Presentation.from_relations(cl.relations, len(cl.gens))
    basis = [_form_from_coords(ar, cl.gens, pres.lift(i)) for i in range(pres.group.rank)]
    elements = cl.elements

    def log(F: Form) -> tuple[int, ...]:
        c = elements[ar.key(F)][1]
        return pres.to_structure(c + (0,) * (len(cl.gens) - len(c)))

    return _Component(pres.group.invariant_factors, basis, log)


def _form_from_coords(ar: FormArithmetic, gens: Sequence[Form], coords: Sequence[int]) -> Form:
    F = ar.one
    for g, c in zip(gens, coords):
        if c:
            F = ar.mul(F, ar.pow(g, c))
    return F


def _cyclic_prime_power_component(ar: FormArithmetic, g: Form, ell: int, v: int) -> _Component:
    """Cyclic group of order ell**v generated by g; logs by Pohlig-Hellman with BSGS."""
    n = ell**v
    step = math.isqrt(ell) + 1
    gamma = ar.pow(g, ell ** (v - 1))  # order ell
    baby = {}
    cur = ar.one
    for j in range(step):
        baby.setdefault(ar.key(cur), j)
        cur = ar.mul(cur, gamma)
    giant = ar.pow(gamma, -step)

    def log_ell(h: Form) -> int:
        cur = h
        for i in range(step + 1):
            j = baby.get(ar.key(cur))
            if j is not None:
                return (i * step + j) % ell
            cur = ar.mul(cur, giant)
        raise AssertionError("element outside the cyclic subgroup")

    def log(F: Form) -> tuple[int, ...]:
        x = 0
        for k in range(v):
            h = ar.mul(F, ar.pow(g, -x))
            h = ar.pow(h, ell ** (v - 1 - k))
            x += log_ell(h) * ell**k
        return (x % n,)

    return _Component((n,), [g], log)


def _sylow_component(ar: FormArithmetic, h: int, ell: int, v: int, D: int,
                     budget: int) -> _Component:
    n = ell**v
    cof = h // n
    bound = generating_bound(D)
    stream = (ar.pow(g, cof) for g in generator_stream(D, bound))
    if n <= budget:
        return _closure_component(ar, saturate(ar, stream, target=n, budget=budget))
    tried = 0
    for y in stream:
        if ar.is_one(ar.pow(y, n // ell)):
            tried += 1
            if v > 1 and tried > 200:
                break
            continue
        return _cyclic_prime_power_component(ar, y, ell, v)
    raise ClassGroupBudgetExceeded(
        f"Sylow {ell}-subgroup of order {n} for D={D} is too large to saturate")


def _combine(ar: FormArithmetic, comps: dict[int, _Component], h: int):
    """Merge Sylow components into invariant-factor form: (invariants, basis, log)."""
    r = max((len(c.invariants) for c in comps.values()), default=0)
    inv = [1] * r
    basis = [ar.one] * r
    slots = {}
    for ell, c in comps.items():
        off = r - len(c.invariants)
        slots[ell] = off
        for i, (d, g) in enumerate(zip(c.invariants, c.basis)):
            inv[off + i] *= d
            basis[off + i] = ar.mul(basis[off + i], g)

    def log(F: Form) -> tuple[int, ...]:
        out = [0] * r
        for ell, c in comps.items():
            n = math.prod(c.invariants)
            u = h // _full_power(ell, h)
            y = ar.pow(F, u)
            if ar.is_one(y):
                continue
            ly = c.log(y)
            off = slots[ell]
            for i, (d, x) in enumerate(zip(c.invariants, ly)):
                xi = x * pow(u, -1, d) % d
                D_i = inv[off + i]
                # CRT: out = xi mod d, unchanged mod D_i / d
                rest = D_i // d
                cur = out[off + i]
                t = ((xi - cur) * pow(rest, -1, d)) % d if rest > 1 else (xi - cur) % d
                out[off + i] = (cur + rest * t) % D_i
            del n
        return tuple(out)

    return tuple(inv), basis, log


def _full_power(ell: int, h: int) -> int:
    n = 1
    while h % (n * ell) == 0:
        n *= ell
    return n


# ---------------------------------------------------------------- public API

@dataclass(frozen=True)
class ClassGroupDescription:
    discriminant: int
    h: int
    structure: FiniteAbelianGroup
    generators: tuple[tuple[Form, tuple[int, ...]], ...]
    narrow_h: int = 0
    _log: Callable[[Form], tuple[int, ...]] | None = field(default=None, repr=False, compare=False)
    _arith: FormArithmetic | None = field(default=None, repr=False, compare=False)

    def log(self, F: Form) -> tuple[int, ...]:
        """Coordinates of the class of F with respect to the generators."""
        if F.D != self.discriminant:
            raise ValueError("form of the wrong discriminant")
        return self._log(F)

    def element(self, coords: Sequence[int]) -> Form:
        ar = self._arith
        return _form_from_coords(ar, [g for g, _ in self.generators], coords)

    def rank(self, m: int) -> int:
        return m_rank(self.structure, m)


@dataclass(frozen=True)
class SClassGroup:
    base: ClassGroupDescription
    s_primes: tuple[int, ...]
    quotient: FiniteAbelianGroup


_CACHE: dict[int, ClassGroupDescription] = {}
_CACHE_LOCK = threading.Lock()


def _validate(D: int, bound: int) -> None:
    if abs(D) > bound:
        raise ClassGroupBudgetExceeded(f"|D| = {abs(D)} exceeds the configured bound {bound}")
    if not is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant")


def class_group(D: int, bound: int = DEFAULT_BOUND, budget: int = CLOSURE_BUDGET,
                method: str = "auto") -> ClassGroupDescription:
    """Structure of Cl(O_K) for K = Q(sqrt(D)), D fundamental.

    method is "closure", "sylow" or "auto" (closure for |D| <= CLOSURE_LIMIT).
    Results for method="auto" are memoised per D.
    """
    D = int(D)
    _validate(D, bound)
    if method == "auto":
        with _CACHE_LOCK:
            hit = _CACHE.get(D)
        if hit is not None:
            return hit
        method = "closure" if abs(D) <= CLOSURE_LIMIT else "sylow"
        result = _compute(D, method, budget)
        with _CACHE_LOCK:
            _CACHE.setdefault(D, result)
        return result
    return _compute(D, method, budget)


def _compute(D: int, method: str, budget: int) -> ClassGroupDescription:
    if method == "closure":
        ar = FormArithmetic(D)
        cl = saturate(ar, generator_stream(D, generating_bound(D)), budget=budget)
        comp = _closure_component(ar, cl)
        inv, basis, log = comp.invariants, comp.basis, comp.log
        hn = cl.size
    elif method == "sylow":
        table = _cycle_table(D) if D > 0 else None
        ar = FormArithmetic(D, table)
        hn = count_reduced_definite(D) if D < 0 else table.narrow_class_number
        comps = {ell: _sylow_component(ar, hn, ell, v, D, budget)
                 for ell, v in (factorize(hn).items() if hn > 1 else ())}
        inv, basis, log = _combine(ar, comps, hn)
    else:
        raise ValueError(f"unknown method {method!r}")
    if D > 0:
        inv, basis, log = _wide_quotient(ar, inv, basis, log)
    structure = FiniteAbelianGroup(tuple(inv))
    gens = tuple((ar.canonical_form(g), tuple(int(i == j) for j in range(len(inv))))
                 for i, g in enumerate(basis))
    return ClassGroupDescription(D, structure.order, structure, gens, hn, log, ar)


def _wide_quotient(ar: FormArithmetic, inv, basis, log):
    F0 = principal_form(ar.D)
    sigma = Form(-F0.a, F0.b, -F0.c)
    return _quotient(ar, inv, basis, log, [log(sigma)])


def _quotient(ar: FormArithmetic, inv, basis, log, extra: list[Sequence[int]]):
    k = len(inv)
    if k == 0:
        return (), [], log
    rel = [[inv[i] if i == j else 0 for j in range(k)] for i in range(k)] + [list(x) for x in extra]
    pres = Presentation.from_relations(rel, k)
    new_basis = [_form_from_coords(ar, basis, pres.lift(i)) for i in range(pres.group.rank)]

    def new_log(F: Form) -> tuple[int, ...]:
        return pres.to_structure(log(F))

    return pres.group.invariant_factors, new_basis, new_log


def class_number(D: int, **kw) -> int:
    return class_group(D, **kw).h


def class_rank(D: int, m: int, **kw) -> int:
    return m_rank(class_group(D, **kw).structure, m)


def s_prime_classes(D: int, s_primes: Iterable[int]) -> list[Form]:
    """One prime form above each non-inert p in s_primes."""
    out = []
    for p in sorted(set(s_primes)):
        if kronecker(D, p) != -1:
            out.append(prime_form(D, p))
    return out


def s_class_group(D: int, s_primes: Iterable[int], **kw) -> SClassGroup:
    """Cl(O_K) modulo the classes of the primes above s_primes."""
    base = class_group(D, **kw)
    s_primes = tuple(sorted(set(int(p) for p in s_primes)))
    logs = [base.log(F) for F in s_prime_classes(D, s_primes)]
    if base.structure.rank == 0:
        return SClassGroup(base, s_primes, TRIVIAL)
    inv = base.structure.invariant_factors
    k = len(inv)
    rel = [[inv[i] if i == j else 0 for j in range(k)] for i in range(k)] + [list(x) for x in logs]
    pres = Presentation.from_relations(rel, k)
    return SClassGroup(base, s_primes, pres.group)


def subgroup_rank(D: int, forms: Sequence[Form], m: int, budget: int = CLOSURE_BUDGET,
                  arith: FormArithmetic | None = None) -> tuple[FiniteAbelianGroup, int]:
    """Structure and m-rank of the subgroup generated by forms, by direct saturation."""
    ar = arith or FormArithmetic(D)
    cl = saturate(ar, forms, budget=budget)
    pres = Presentation.from_relations(cl.relations, len(cl.gens))
    return pres.group, m_rank(pres.group, m)


def brute_force_class_number(D: int) -> int:
    """Count reduced forms of D < 0 by direct enumeration (slow oracle)."""
    if D >= 0:
        raise ValueError("oracle covers negative discriminants only")
    h, a = 0, 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a) == 0:
                c = (b * b - D) // (4 * a)
                if c > a or (c == a and b >= 0):
                    if math.gcd(math.gcd(a, b), c) == 1:
                        h += 1
        a += 1
    return h


def is_principal_class(F: Form) -> bool:
    """F is in the trivial class (of the wide class group when D > 0)."""
    D = F.D
    if D < 0:
        return reduce(F) == reduce(principal_form(D))
    with _TABLES_LOCK:
        table = _TABLES.get(D)
    ar = FormArithmetic(D, table)
    F0 = principal_form(D)
    return ar.key(F) in (ar.one_key, ar.key(Form(-F0.a, F0.b, -F0.c)))


def clear_cache() -> None:
    with _CACHE_LOCK:
        _CACHE.clear()
    with _TABLES_LOCK:
        _TABLES.clear()
