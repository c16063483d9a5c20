import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from forge import classgroup
from forge.survey import (
    CSV_COLUMNS,
    SurveyBudgetExhausted,
    SurveyConfig,
    SurveyRecord,
    count_distinct_fields,
    growth_report,
    growth_slope,
    records_from_csv,
    records_to_csv,
    run_survey,
)


@pytest.fixture(scope="module")
def small():
    return run_survey(SurveyConfig(m=2, c=2, t_min=1, t_max=15))


def test_config_guards():
    for kw in (dict(m=1), dict(m=7), dict(m=2, sign="both"), dict(m=2, t_min=5, t_max=4),
               dict(m=2, threads=0)):
        with pytest.raises(ValueError):
            SurveyConfig(**kw)


def test_signed_range():
    assert SurveyConfig(m=2, t_min=2, t_max=4).parameters() == [2, 3, 4]
    assert SurveyConfig(m=2, t_min=2, t_max=4, sign="real").parameters() == [-4, -3, -2]


def test_small_survey(small):
    s = small.summary
    assert s.total == 15 == len(small.records)
    assert [r.t for r in small.records] == list(range(1, 16))
    # the model is only negative for t large enough; small t give real fields
    assert s.M == 6 and s.sign_mismatch == sum(r.D > 0 for r in small.records)
    assert all(r.D < 0 for r in small.records[-5:])
    assert s.ok + s.degenerate + s.budget_skipped == s.total
    assert s.pullback_confirmed <= s.admissible_pullbacks <= s.ok
    for r in small.records:
        assert r.ok and (r.D < 0) == (r.q < 0)
        assert r.h == math.prod(r.invariant_factors)
        assert r.exceptional == (r.rk_m < (2 if r.D < 0 else 1))
        assert r.gamma_rank is None or r.gamma_rank <= r.rk_m


def test_class_numbers_match_enumeration(small):
    for r in small.records:
        if -10**6 < r.D < 0:
            assert r.h == classgroup.brute_force_class_number(r.D)


def test_summary_json_key_order(small):
    d = json.loads(small.summary.to_json())
    assert list(d)[:5] == ["m", "c", "M", "t_range", "sign"]
    assert d["total"] == 15


def test_csv_round_trip(small):
    text = small.csv()
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert records_from_csv(text) == small.records
    assert records_to_csv(records_from_csv(text)) == text


def test_csv_rejects_bad_header():
    with pytest.raises(ValueError):
        records_from_csv("a,b\n1,2\n")


def test_determinism_across_threads():
    cfg = dict(m=3, c=2, t_min=1, t_max=8)
    classgroup.clear_cache()
    one = run_survey(SurveyConfig(**cfg)).csv()
    classgroup.clear_cache()
    four = run_survey(SurveyConfig(**cfg, threads=4)).csv()
    assert one == four == run_survey(SurveyConfig(**cfg)).csv()


def test_budget_exhaustion():
    with pytest.raises(SurveyBudgetExhausted):
        run_survey(SurveyConfig(m=3, c=2, t_min=1, t_max=200, budget_ms=0, class_groups=False))


def test_without_class_groups():
    res = run_survey(SurveyConfig(m=3, c=2, t_min=1, t_max=5, class_groups=False))
    assert all(r.h is None and r.rk_m is None and r.admissible is not None for r in res.records)


def _rec(t, D, status="ok"):
    return SurveyRecord(t, 6, Fraction(6 * t + 1, 6), Fraction(D), 0, 1, D, status)


def test_count_distinct_fields():
    assert count_distinct_fields([_rec(t, 0, "degenerate_zero") for t in range(5)]) == 0
    assert count_distinct_fields([_rec(t, -(4 * t + 3)) for t in range(1, 9)]) == 8
    assert count_distinct_fields([_rec(1, -23), _rec(2, -23)]) == 1


def test_growth_constant_is_flat():
    slope, ladder = growth_report([_rec(t, -23) for t in range(1, 20)])
    assert abs(slope) < 1e-12
    assert ladder[-1][1] == 1


def test_growth_needs_records():
    with pytest.raises(ValueError):
        growth_report([_rec(t, -23) for t in range(1, 5)])


@given(st.floats(-5, 5), st.floats(-10, 10))
def test_growth_slope_recovers_lines(a, b):
    pts = [(float(x), a * x + b) for x in range(1, 12)]
    assert growth_slope(pts) == pytest.approx(a, abs=1e-9)


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 200), st.integers(0, 6))
def test_summary_identities_random_ranges(t0, width):
    res = run_survey(SurveyConfig(m=2, c=2, t_min=t0, t_max=t0 + width, class_groups=False))
    s = res.summary
    assert s.total == width + 1 == s.ok + s.degenerate + s.budget_skipped
    assert s.distinct_discriminants == count_distinct_fields(res.records)
