"""Surveys over a range of parameters t: one record per t, plus aggregate counts."""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from forge.abelian import BudgetError, m_rank
from forge.classgroup import DEFAULT_BOUND, ClassGroupBudgetExceeded, class_group, subgroup_rank
from forge.curves import CurveFamily, Rescaling, family_bundle
from forge import specialize as sp

CLASSGROUP_BUDGET = "classgroup_budget_exceeded"
DEGENERATE = (sp.DEGENERATE_ZERO, sp.DEGENERATE_SQUARE)
SKIPPED = (sp.BUDGET, CLASSGROUP_BUDGET)

CSV_COLUMNS = ("t", "M", "x0", "q", "d0", "s", "D", "status", "h", "invariant_factors",
               "rk_m", "admissible", "exceptional", "confirmed", "gamma_rank")


class SurveyBudgetExhausted(BudgetError):
    pass


@dataclass(frozen=True)
class SurveyConfig:
    m: int
    c: Fraction | int = 2
    t_min: int = 1
    t_max: int = 60
    sign: str = "imag"
    modulus_override: int | None = None
    budget_ms: int | None = None
    threads: int = 1
    class_groups: bool = True
    pullbacks: bool = True
    bound: int = DEFAULT_BOUND
    seed: int = 0

    def __post_init__(self):
        if not 2 <= self.m <= 6:
            raise ValueError("m must lie in 2..6")
        if self.sign not in ("imag", "real"):
            raise ValueError("sign must be 'imag' or 'real'")
        if self.t_min > self.t_max:
            raise ValueError("empty t-range")
        if self.threads < 1:
            raise ValueError("threads must be positive")

    def parameters(self) -> list[int]:
        """The signed range: t_min..t_max, or -t_max..-t_min for real surveys."""
        if self.sign == "imag":
            return list(range(self.t_min, self.t_max + 1))
        return list(range(-self.t_max, -self.t_min + 1))


@dataclass(frozen=True)
class SurveyRecord:
    t: int
    M: int
    x0: Fraction
    q: Fraction
    d0: int
    s: int
    D: int
    status: str
    h: int | None = None
    invariant_factors: tuple[int, ...] | None = None
    rk_m: int | None = None
    admissible: bool | None = None
    exceptional: bool | None = None
    confirmed: bool | None = None
    gamma_rank: int | None = None

    @property
    def ok(self) -> bool:
        return self.status == sp.OK


@dataclass
class SurveySummary:
    m: int
    c: str
    M: int
    t_range: tuple[int, int]
    sign: str
    total: int = 0
    ok: int = 0
    degenerate: int = 0
    budget_skipped: int = 0
    exceptional: int = 0
    admissible_pullbacks: int = 0
    pullback_confirmed: int = 0
    distinct_discriminants: int = 0
    growth_exponent_estimate: float | None = None
    fields_below_X: list[tuple[int, int]] = field(default_factory=list)
    rank_target_met: int = 0
    sign_mismatch: int = 0

    def check(self) -> None:
        assert self.total == self.ok + self.degenerate + self.budget_skipped
        assert self.exceptional <= self.ok
        assert self.pullback_confirmed <= self.admissible_pullbacks <= self.ok

    def to_json(self) -> str:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["t_range"] = list(self.t_range)
        d["fields_below_X"] = [list(p) for p in self.fields_below_X]
        return json.dumps(d)


@dataclass(frozen=True)
class SurveyResult:
    config: SurveyConfig
    summary: SurveySummary
    records: list[SurveyRecord]

    def csv(self) -> str:
        return records_to_csv(self.records)


def _analyse(fam: CurveFamily, resc: Rescaling, M: int, t: int, cfg: SurveyConfig) -> SurveyRecord:
    rec = sp.specialize(fam, resc.result, M, t)
    base = dict(t=rec.t, M=rec.M, x0=rec.x0, q=rec.q, d0=rec.d0, s=rec.s, D=rec.D, status=rec.status)
    if not rec.ok:
        return SurveyRecord(**base)
    extra: dict = {}
    if cfg.class_groups:
        try:
            cl = class_group(rec.D, bound=cfg.bound)
        except ClassGroupBudgetExceeded:
            return SurveyRecord(**{**base, "status": CLASSGROUP_BUDGET})
        extra.update(h=cl.h, invariant_factors=cl.structure.invariant_factors,
                     rk_m=m_rank(cl.structure, fam.m), exceptional=sp.is_exceptional(rec, fam.m, cl))
    if cfg.pullbacks:
        pb = sp.pullback_classes(fam, resc, rec)
        extra["admissible"] = pb.admissible
        if pb.admissible:
            extra["confirmed"] = sp.pullback_confirmed(pb, fam.m)
            if cfg.class_groups:
                extra["gamma_rank"] = subgroup_rank(rec.D, [pb.gamma_plus, pb.gamma_minus], fam.m)[1]
    return SurveyRecord(**base, **extra)


def run_survey(cfg: SurveyConfig) -> SurveyResult:
    fam, model, resc = family_bundle(cfg.m, cfg.c)
    S = sp.bad_prime_set(fam, model.g)
    M = cfg.modulus_override or sp.modulus(S)
    ts = cfg.parameters()
    deadline = None if cfg.budget_ms is None else time.monotonic() + cfg.budget_ms / 1000

    def task(t: int) -> SurveyRecord:
        if deadline is not None and time.monotonic() > deadline:
            raise SurveyBudgetExhausted(f"survey budget of {cfg.budget_ms} ms exhausted before t={t}")
        return _analyse(fam, resc, M, t, cfg)

    if cfg.threads == 1:
        records = [task(t) for t in ts]
    else:
        with ThreadPoolExecutor(cfg.threads) as pool:
            records = list(pool.map(task, ts))
    summary = summarise(cfg, M, records)
    return SurveyResult(cfg, summary, records)


def summarise(cfg: SurveyConfig, M: int, records: Sequence[SurveyRecord]) -> SurveySummary:
    ts = cfg.parameters()
    summ = SurveySummary(cfg.m, str(Fraction(cfg.c)), M, (ts[0], ts[-1]), cfg.sign)
    target = 2 if cfg.sign == "imag" else 1
    for r in records:
        summ.total += 1
        if r.ok:
            summ.ok += 1
            summ.exceptional += bool(r.exceptional)
            summ.admissible_pullbacks += bool(r.admissible)
            summ.pullback_confirmed += bool(r.confirmed)
            summ.rank_target_met += r.rk_m is not None and r.rk_m >= target
            summ.sign_mismatch += (r.D < 0) != (cfg.sign == "imag")
        elif r.status in DEGENERATE:
            summ.degenerate += 1
        else:
            summ.budget_skipped += 1
    summ.distinct_discriminants = count_distinct_fields(records)
    oks = [r for r in records if r.ok and r.t != 0]
    if len(oks) >= 10:
        summ.growth_exponent_estimate, summ.fields_below_X = growth_report(oks)
    summ.check()
    return summ


def count_distinct_fields(records: Iterable[SurveyRecord]) -> int:
    return len({r.D for r in records if r.ok})


def growth_slope(points: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of y on x."""
    xs, ys = zip(*points)
    return statistics.linear_regression(xs, ys).slope


def growth_report(records: Sequence[SurveyRecord], t_min: int | None = None,
                  t_max: int | None = None) -> tuple[float, list[tuple[int, int]]]:
    """Slope of log|D_t| against log|t| and counts of distinct fields with |D| < X."""
    oks = [r for r in records if r.ok and r.t != 0
           and (t_min is None or abs(r.t) >= t_min) and (t_max is None or abs(r.t) <= t_max)]
    if len(oks) < 10:
        raise ValueError(f"growth report needs at least 10 ok records, got {len(oks)}")
    slope = growth_slope([(math.log(abs(r.t)), math.log(abs(r.D))) for r in oks])
    discs = {abs(r.D) for r in oks}
    top = max(discs)
    ladder, X = [], 10
    while True:
        ladder.append((X, sum(1 for d in discs if d < X)))
        if X > top:
            break
        X *= 10
    return slope, ladder


# ---------------------------------------------------------------- CSV

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, tuple):
        return ";".join(str(x) for x in v)
    return str(v)


def records_to_csv(records: Iterable[SurveyRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([_fmt(getattr(r, k)) for k in CSV_COLUMNS])
    return buf.getvalue()


def _opt(cast):
    return lambda s: None if s == "" else cast(s)


_PARSERS = {
    "t": int, "M": int, "x0": Fraction, "q": Fraction, "d0": int, "s": int, "D": int, "status": str,
    "h": _opt(int),
    "invariant_factors": lambda s: None if s == "" else tuple(int(x) for x in s.split(";") if x),
    "rk_m": _opt(int), "admissible": _opt(lambda s: s == "1"), "exceptional": _opt(lambda s: s == "1"),
    "confirmed": _opt(lambda s: s == "1"), "gamma_rank": _opt(int),
}


def records_from_csv(text: str) -> list[SurveyRecord]:
    rows = csv.DictReader(io.StringIO(text))
    if tuple(rows.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {rows.fieldnames}")
    out = []
    for row in rows:
        vals = {k: _PARSERS[k](row[k]) for k in CSV_COLUMNS}
        if vals["h"] is not None and vals["invariant_factors"] is None:
            vals["invariant_factors"] = ()  # trivial group
        out.append(SurveyRecord(**vals))
    return out
