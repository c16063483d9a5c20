"""Seeded property suites behind `forge verify`."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass
from typing import Callable

from forge import abelian, classgroup, curves, qform
from forge.specialize import pullback_classes, pullback_confirmed, specialize

SUITES = ("lemma25", "qform", "identities", "classgroup", "pullback")
LEMMA_MODULI = (2, 3, 4, 6, 8, 9, 12)


@dataclass
class PropertyResult:
    name: str
    passed: bool
    checked: int
    counterexample: str | None = None

    def as_dict(self) -> dict:
        return asdict(self)


def lemma25(seed: int = 0, n: int = 1000) -> list[PropertyResult]:
    rng = random.Random(seed)
    ineq = PropertyResult("rank inequality for exact sequences", True, 0)
    eq = PropertyResult("equality when an end term is free", True, 0)
    for i in range(n):
        m = LEMMA_MODULI[i % len(LEMMA_MODULI)]
        G = abelian.random_m_torsion_group(m, rng)
        w = abelian.sample_exact_sequence(G, rng.randrange(2**32))
        v = abelian.check_rank_lemma(w, m)
        ineq.checked += 1
        if not v.inequality_holds and ineq.passed:
            ineq.passed, ineq.counterexample = False, f"m={m} {w}"
        if v.equality_expected:
            eq.checked += 1
            if not v.equality_holds and eq.passed:
                eq.passed, eq.counterexample = False, f"m={m} {w}"
    return [ineq, eq]


def _random_disc(rng: random.Random, negative: bool) -> int:
    while True:
        D = rng.randrange(5, 10**6)
        D = -D if negative else D
        if classgroup.is_fundamental(D):
            return D


def qform_suite(seed: int = 0, n: int = 200) -> list[PropertyResult]:
    rng = random.Random(seed)
    out = []
    for negative in (True, False):
        label = "definite" if negative else "indefinite"
        assoc = PropertyResult(f"composition is associative ({label})", True, 0)
        inv = PropertyResult(f"F * F^-1 is principal ({label})", True, 0)
        for _ in range(n):
            D = _random_disc(rng, negative)
            F, G, H = (qform.prime_form(D, p) for p in _three_split_primes(D, rng))
            lhs = qform.compose(qform.compose(F, G), H)
            rhs = qform.compose(F, qform.compose(G, H))
            assoc.checked += 1
            if lhs != rhs and assoc.passed:
                assoc.passed, assoc.counterexample = False, f"D={D} {F} {G} {H}"
            inv.checked += 1
            if not qform.compose(F, F.inverse()).is_principal() and inv.passed:
                inv.passed, inv.counterexample = False, f"D={D} {F}"
        out += [assoc, inv]
    return out


def _three_split_primes(D: int, rng: random.Random) -> list[int]:
    ps = [p for p in range(2, 400) if abelian.is_prime(p) and qform.kronecker(D, p) != -1]
    return [rng.choice(ps) for _ in range(3)]


def identities(cs=(2, 3, 5, -2), ms=range(2, 7)) -> list[PropertyResult]:
    res = PropertyResult("norm identities and odd-model contracts", True, 0)
    x_minus_1 = curves.Polynomial([-1, 1])
    for m in ms:
        for c in cs:
            res.checked += 1
            try:
                fam = curves.build_family(m, c)
                curves.norm_identities(fam)
                mo = curves.odd_model(fam)
                assert mo.g.degree == 2 * m - 1
                assert mo.leading == m * (2 + fam.b)
                assert x_minus_1 * mo.h == fam.f
                assert mo.genus == m - 1
            except AssertionError as exc:
                if res.passed:
                    res.passed, res.counterexample = False, f"m={m} c={c}: {exc}"
    return [res]


def classgroup_suite(limit: int = 10**4) -> list[PropertyResult]:
    res = PropertyResult("structure h equals reduced-form count for -limit < D < 0", True, 0)
    for D in range(-3, -limit, -1):
        if not classgroup.is_fundamental(D):
            continue
        res.checked += 1
        cl = classgroup.class_group(D, method="closure")
        h = classgroup.brute_force_class_number(D)
        if not (cl.h == h == cl.structure.order) and res.passed:
            res.passed, res.counterexample = False, f"D={D}: structure {cl.structure}, count {h}"
    return [res]


def pullback_suite(m: int = 3, c: int = 2, ts=range(16, 26)) -> list[PropertyResult]:
    res = PropertyResult(f"gamma^m principal on admissible records (m={m}, c={c})", True, 0)
    fam, _, resc = curves.family_bundle(m, c)
    for t in ts:
        rec = specialize(fam, resc.result, 6, t)
        if not rec.ok:
            continue
        pb = pullback_classes(fam, resc, rec)
        if not pb.admissible:
            continue
        res.checked += 1
        if not pullback_confirmed(pb, m) and res.passed:
            res.passed, res.counterexample = False, f"t={t} D={rec.D}"
    return [res]


def run(suite: str, seed: int = 0) -> list[PropertyResult]:
    table: dict[str, Callable[[], list[PropertyResult]]] = {
        "lemma25": lambda: lemma25(seed),
        "qform": lambda: qform_suite(seed),
        "identities": identities,
        "classgroup": classgroup_suite,
        "pullback": pullback_suite,
    }
    if suite not in table:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    return table[suite]()

