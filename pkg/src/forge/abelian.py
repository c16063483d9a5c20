"""Finite abelian groups in invariant-factor form, m-ranks and the exact-sequence harness."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

BRUTE_FORCE_LIMIT = 10**5


class BudgetError(RuntimeError):
    """A computation would exceed its configured size or iteration budget."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    # deterministic for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_power_split(m: int) -> list[tuple[int, int]]:
    """[(p, e), ...] with m = prod p**e, p ascending."""
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Z/d_1 + ... + Z/d_k with d_1 | d_2 | ... | d_k and every d_i >= 2."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        d = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", d)
        for x in d:
            if x < 2:
                raise ValueError(f"invariant factors must be >= 2, got {d}")
        for x, y in zip(d, d[1:]):
            if y % x:
                raise ValueError(f"invariant factors must form a divisibility chain, got {d}")

    @classmethod
    def from_cyclic_orders(cls, orders: Sequence[int]) -> "FiniteAbelianGroup":
        """Normalise an arbitrary direct sum of cyclic groups Z/n_1 + ... + Z/n_r."""
        orders = [abs(int(n)) for n in orders if abs(int(n)) != 1]
        if any(n == 0 for n in orders):
            raise ValueError("infinite cyclic factor")
        # pool elementary divisors per prime, then combine the k-th largest of each
        by_prime: dict[int, list[int]] = {}
        for n in orders:
            for p, e in prime_power_split(n):
                by_prime.setdefault(p, []).append(p**e)
        r = max((len(v) for v in by_prime.values()), default=0)
        inv = [1] * r
        for v in by_prime.values():
            for i, q in enumerate(sorted(v, reverse=True)):
                inv[r - 1 - i] *= q
        return cls(tuple(inv))

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def elementary_divisors(self) -> list[tuple[int, int]]:
        """Prime-power view: sorted list of (p, e) with one entry per cyclic p-factor."""
        out = []
        for d in self.invariant_factors:
            out.extend(prime_power_split(d))
        return sorted(out)

    def is_m_torsion(self, m: int) -> bool:
        return all(m % d == 0 for d in self.invariant_factors)

    def direct_sum(self, other: "FiniteAbelianGroup") -> "FiniteAbelianGroup":
        return FiniteAbelianGroup.from_cyclic_orders(self.invariant_factors + other.invariant_factors)

    def elements(self):
        return product(*(range(d) for d in self.invariant_factors))

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def scale(self, n: int, x):
        return tuple((n * a) % d for a, d in zip(x, self.invariant_factors))

    def zero(self):
        return (0,) * self.rank

    def element_order(self, x) -> int:
        o = 1
        for a, d in zip(x, self.invariant_factors):
            o = math.lcm(o, d // math.gcd(a, d))
        return o

    def __str__(self):
        if not self.invariant_factors:
            return "trivial"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


TRIVIAL = FiniteAbelianGroup(())


def _check_m(m: int) -> None:
    if int(m) != m or m < 2:
        raise ValueError(f"m must be an integer >= 2, got {m}")


def m_rank(G: FiniteAbelianGroup, m: int) -> int:
    """Largest r with (Z/m)^r inside G."""
    _check_m(m)
    return min(sum(1 for d in G.invariant_factors if d % (p**e) == 0)
               for p, e in prime_power_split(m))


def p_power_rank(G: FiniteAbelianGroup, p: int, e: int) -> int:
    """dim over F_p of p^(e-1) G[p^e]."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e < 1:
        raise ValueError("e must be >= 1")
    # on Z/d: G[p^e] = Z/gcd(d, p^e), and multiplying by p^(e-1) leaves a group of order
    # gcd(d, p^e) / gcd(d, p^(e-1)); the F_p-dimension is the log_p of the product
    size = 1
    for d in G.invariant_factors:
        size *= math.gcd(d, p**e) // math.gcd(d, p ** (e - 1))
    dim = 0
    while size > 1:
        size //= p
        dim += 1
    return dim


_BRUTE_CACHE: dict[tuple[int, tuple[int, ...]], int] = {}


def brute_force_m_rank(G: FiniteAbelianGroup, m: int) -> int:
    """m-rank by exhaustive search over elements, without using the invariant-factor formula.

    Any copy of (Z/m)^r lies in the m-torsion subgroup G[m], whose coordinates
    are x_i in (d_i/g_i) Z/d_i with g_i = gcd(d_i, m); the search runs there.
    Free Z/m-submodules are injective, so every non-extendable free subgroup
    already has maximal rank and extending one candidate at a time is exhaustive.
    """
    _check_m(m)
    if G.order > BRUTE_FORCE_LIMIT:
        raise BudgetError(f"group order {G.order} exceeds brute-force limit {BRUTE_FORCE_LIMIT}")
    key = (m, tuple(sorted(math.gcd(d, m) for d in G.invariant_factors)))
    if key not in _BRUTE_CACHE:
        _BRUTE_CACHE[key] = _greedy_free_rank([g for g in key[1] if g > 1], m)
    return _BRUTE_CACHE[key]


def _greedy_free_rank(mods: list[int], m: int) -> int:
    def add(x, y):
        return tuple((a + b) % n for a, b, n in zip(x, y, mods))

    zero = (0,) * len(mods)
    elems = list(product(*(range(n) for n in mods)))
    sub = {zero}
    r = 0
    while True:
        for x in elems:
            if x in sub:
                continue
            multiples = [zero]
            y = zero
            ok = True
            for _ in range(1, m):
                y = add(y, x)
                if y in sub:
                    ok = False
                    break
                multiples.append(y)
            if not ok or add(y, x) != zero:
                continue
            sub = {add(s, t) for s in sub for t in multiples}
            r += 1
            break
        else:
            return r


# ---------------------------------------------------------------- Smith normal form

def snf_decomposition(matrix: Sequence[Sequence[int]]):
    """Return (S, U, V) with U * A * V = S diagonal, U and V unimodular.

    S has the diagonal d_1 | d_2 | ... (nonnegative). Pivots are chosen by
    smallest absolute value, ties broken by lowest (row, column) index.
    """
    A = [list(map(int, row)) for row in matrix]
    nr = len(A)
    nc = len(A[0]) if nr else 0
    U = [[int(i == j) for j in range(nr)] for i in range(nr)]
    V = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row dst += k * row src
        if k:
            A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        if k:
            for row in A:
                row[dst] += k * row[src]
            for row in V:
                row[dst] += k * row[src]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = abs(A[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, nr):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, nc):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        done = False
            if done:
                # divisibility: fold any entry not divisible by the pivot into row t
                bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                            if A[i][j] % A[t][t]), None)
                if bad is None:
                    break
                add_row(t, bad[0], 1)
                continue
            best = None
            for i in range(t, nr):
                for j in range(t, nc):
                    if (i == t or j == t) and A[i][j]:
                        v = abs(A[i][j])
                        if best is None or v < best[0]:
                            best = (v, i, j)
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return A, U, V


def smith_normal_form(relations: Sequence[Sequence[int]]) -> FiniteAbelianGroup:
    """Cokernel Z^n / (row space of relations) as a finite abelian group."""
    relations = [list(r) for r in relations]
    if not relations or not relations[0]:
        if relations and any(len(r) for r in relations):
            raise ValueError("ragged matrix")
        return TRIVIAL
    S, _, _ = snf_decomposition(relations)
    n = len(relations[0])
    diag = [S[i][i] if i < len(S) else 0 for i in range(n)]
    if any(d == 0 for d in diag):
        raise ValueError("infinite group: relation matrix has nonzero free rank")
    return FiniteAbelianGroup(tuple(sorted(d for d in diag if d > 1)))


@dataclass(frozen=True)
class Presentation:
    """Z^n / (row space of relations) with coordinates transported to invariant-factor form.

    ``lift[i]`` is the coordinate vector (in the original generators) of the
    i-th invariant-factor generator; ``to_structure`` maps original coordinates
    to invariant-factor coordinates.
    """

    group: FiniteAbelianGroup
    V: tuple[tuple[int, ...], ...]
    Vinv: tuple[tuple[int, ...], ...]
    columns: tuple[int, ...]

    @classmethod
    def from_relations(cls, relations: Sequence[Sequence[int]], ngens: int) -> "Presentation":
        relations = [list(r) for r in relations]
        if ngens == 0:
            return cls(TRIVIAL, (), (), ())
        if not relations:
            raise ValueError("infinite group: no relations")
        S, _, V = snf_decomposition(relations)
        diag = [S[i][i] if i < len(S) else 0 for i in range(ngens)]
        if any(d == 0 for d in diag):
            raise ValueError("infinite group: relation matrix has nonzero free rank")
        cols = tuple(i for i, d in enumerate(diag) if d > 1)
        Vinv = _unimodular_inverse(V)
        group = FiniteAbelianGroup(tuple(diag[i] for i in cols))
        return cls(group, tuple(map(tuple, V)), tuple(map(tuple, Vinv)), cols)

    def to_structure(self, coords: Sequence[int]) -> tuple[int, ...]:
        # x (row vector) -> x V, keep the nontrivial columns
        d = self.group.invariant_factors
        return tuple(sum(c * self.V[r][col] for r, c in enumerate(coords)) % m
                     for col, m in zip(self.columns, d))

    def lift(self, i: int) -> tuple[int, ...]:
        """Original coordinates of the i-th invariant-factor generator (row of V^-1)."""
        return self.Vinv[self.columns[i]]


def _unimodular_inverse(V):
    return [[int(x) for x in row] for row in _inverse_rational(V)]


# ---------------------------------------------------------------- subgroups and quotients

def _hermite_basis(rows: list[list[int]], n: int) -> list[list[int]]:
    """Row-style Hermite basis (n x n, upper triangular) of a full-rank lattice in Z^n."""
    rows = [list(r) for r in rows if any(r)]
    basis = []
    for col in range(n):
        pivot_rows = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(pivot_rows) > 1:
            pivot_rows.sort(key=lambda r: abs(r[col]))
            p = pivot_rows[0]
            new = [p]
            for r in pivot_rows[1:]:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
                (new if r[col] != 0 else rest).append(r)
            pivot_rows = new
        if not pivot_rows:
            raise ValueError("lattice is not of full rank")
        p = pivot_rows[0]
        if p[col] < 0:
            p = [-a for a in p]
        basis.append(p)
        rows = [r for r in rest if any(r)]
    return basis


def subgroup_structure(G: FiniteAbelianGroup, gens: Sequence[Sequence[int]]) -> FiniteAbelianGroup:
    """Isomorphism type of the subgroup of G generated by gens (coordinate vectors)."""
    k = G.rank
    if k == 0:
        return TRIVIAL
    d = G.invariant_factors
    lattice = [list(g) for g in gens] + [[d[i] if i == j else 0 for j in range(k)] for i in range(k)]
    B = _hermite_basis(lattice, k)
    # express d_i e_i in the basis B: X = diag(d) B^-1
    Binv = _inverse_rational(B)
    X = []
    for i in range(k):
        row = [d[i] * Binv[i][j] for j in range(k)]
        if any(x.denominator != 1 for x in row):
            raise ArithmeticError("lattice does not contain d Z^k")
        X.append([int(x) for x in row])
    return smith_normal_form(X)


def quotient_structure(G: FiniteAbelianGroup, gens: Sequence[Sequence[int]]) -> FiniteAbelianGroup:
    k = G.rank
    if k == 0:
        return TRIVIAL
    d = G.invariant_factors
    rel = [[d[i] if i == j else 0 for j in range(k)] for i in range(k)] + [list(g) for g in gens]
    return smith_normal_form(rel)


def _inverse_rational(B):
    n = len(B)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(B)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


@dataclass(frozen=True)
class SubquotientWitness:
    ambient: FiniteAbelianGroup
    sub_generators: tuple[tuple[int, ...], ...]
    quotient: FiniteAbelianGroup
    sub: FiniteAbelianGroup = field(default=TRIVIAL)

    def __post_init__(self):
        if self.sub.order * self.quotient.order != self.ambient.order:
            raise ValueError("|A| * |C| != |B|")


def sample_exact_sequence(G: FiniteAbelianGroup, seed) -> SubquotientWitness:
    """Random 0 -> A -> G -> G/A -> 0, with A generated by up to three random elements."""
    if G.order > BRUTE_FORCE_LIMIT:
        raise BudgetError(f"group order {G.order} exceeds {BRUTE_FORCE_LIMIT}")
    rng = random.Random(seed)
    if G.rank == 0:
        return SubquotientWitness(G, (), TRIVIAL, TRIVIAL)
    ngen = rng.randint(1, 3)
    gens = tuple(tuple(rng.randrange(d) for d in G.invariant_factors) for _ in range(ngen))
    A = subgroup_structure(G, gens)
    C = quotient_structure(G, gens)
    return SubquotientWitness(G, gens, C, A)


@dataclass(frozen=True)
class RankVerdict:
    inequality_holds: bool
    equality_expected: bool
    equality_holds: bool


def _is_free(G: FiniteAbelianGroup, m: int) -> bool:
    return all(d == m for d in G.invariant_factors)


def check_rank_lemma(w: SubquotientWitness, m: int) -> RankVerdict:
    """Compare rk_m of the middle term with the ranks of the outer terms."""
    _check_m(m)
    A, B, C = w.sub, w.ambient, w.quotient
    for name, X in (("A", A), ("B", B), ("C", C)):
        if not X.is_m_torsion(m):
            raise ValueError(f"{name} = {X} is not {m}-torsion")
    ra, rb, rc = m_rank(A, m), m_rank(B, m), m_rank(C, m)
    return RankVerdict(
        inequality_holds=rb >= ra + rc,
        equality_expected=_is_free(A, m) or _is_free(C, m),
        equality_holds=rb == ra + rc,
    )


def random_m_torsion_group(m: int, rng: random.Random, max_rank: int = 4,
                           max_order: int = BRUTE_FORCE_LIMIT) -> FiniteAbelianGroup:
    divisors = [d for d in range(2, m + 1) if m % d == 0]
    while True:
        k = rng.randint(0, max_rank)
        G = FiniteAbelianGroup.from_cyclic_orders([rng.choice(divisors) for _ in range(k)])
        if G.order <= max_order:
            return G


def all_groups_of_order(n: int):
    """Every abelian group of order n, once each up to isomorphism."""
    parts = [[(p, lam) for lam in _partitions(e)] for p, e in prime_power_split(n)]
    for choice in product(*parts):
        cyc = [p**k for p, lam in choice for k in lam]
        yield FiniteAbelianGroup.from_cyclic_orders(cyc)


def _partitions(n, maximum=None):
    if maximum is None:
        maximum = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, maximum), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest
