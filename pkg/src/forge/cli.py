"""`forge` command line: family, survey, classgroup, mrank, verify, growth.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from forge import verify as verify_mod
from forge.abelian import BudgetError, m_rank
from forge.classgroup import class_group
from forge.curves import family_bundle
from forge.specialize import bad_prime_set, modulus
from forge.survey import SurveyConfig, growth_report, run_survey

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _family_args(p):
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--c", type=Fraction, default=Fraction(2))


def _survey_args(p):
    _family_args(p)
    p.add_argument("--t-min", type=int, default=1)
    p.add_argument("--t-max", type=int, default=60)
    p.add_argument("--sign", choices=("imag", "real"), default="imag")
    p.add_argument("--modulus-override", type=int, default=None)
    p.add_argument("--budget-ms", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default=None, help="CSV output path")
    p.add_argument("--json", action="store_true", help="print the summary as JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="forge")
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("family", help="show the family, odd model and bad primes")
    _family_args(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("survey", help="specialise over a t-range")
    _survey_args(p)
    p.add_argument("--no-classgroups", action="store_true")

    p = sub.add_parser("growth", help="discriminant growth over a t-range")
    _survey_args(p)

    p = sub.add_parser("classgroup", help="class group of a fundamental discriminant")
    p.add_argument("D", type=int)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("mrank", help="m-rank of a class group")
    p.add_argument("D", type=int)
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("--suite", choices=verify_mod.SUITES + ("all",), default="all")
    p.add_argument("--json", action="store_true")
    return parser


def _survey_config(a, **over) -> SurveyConfig:
    kw = dict(m=a.m, c=a.c, t_min=a.t_min, t_max=a.t_max, sign=a.sign,
              modulus_override=a.modulus_override, budget_ms=a.budget_ms,
              threads=a.threads, seed=a.seed)
    kw.update(over)
    return SurveyConfig(**kw)


def cmd_family(a) -> int:
    fam, model, resc = family_bundle(a.m, a.c)
    S = bad_prime_set(fam, model.g)
    info = {"m": fam.m, "b": str(fam.b), "c": str(fam.c), "f": fam.f.to_json(),
            "h": model.h.to_json(), "g": model.g.to_json(), "rescaled": resc.result.to_json(),
            "genus": model.genus, "S": S, "M": modulus(S)}
    if a.json:
        print(json.dumps(info))
    else:
        print(f"f(x)  = {fam.f}\nh(x)  = {model.h}\ng(s)  = {model.g}\n"
              f"rescaled = {resc.result}\ngenus = {model.genus}\nS = {S}  M = {modulus(S)}")
    return EXIT_OK


def cmd_survey(a, growth_only: bool = False) -> int:
    cfg = _survey_config(a, class_groups=not (growth_only or getattr(a, "no_classgroups", False)),
                         pullbacks=not growth_only)
    res = run_survey(cfg)
    if a.out:
        with open(a.out, "w", newline="") as fh:
            fh.write(res.csv())
    elif not a.json and not growth_only:
        sys.stdout.write(res.csv())
    if growth_only:
        slope, ladder = growth_report(res.records)
        out = {"slope": slope, "expected": 2 * a.m - 1, "fields_below_X": ladder}
        print(json.dumps(out) if a.json else f"slope {slope:.3f} (expected {2 * a.m - 1})\n"
              + "\n".join(f"|D| < {X}: {n}" for X, n in ladder))
    elif a.json:
        print(res.summary.to_json())
    return EXIT_OK


def cmd_classgroup(a) -> int:
    cl = class_group(a.D)
    if a.json:
        print(json.dumps({"D": cl.discriminant, "h": cl.h,
                          "invariant_factors": list(cl.structure.invariant_factors),
                          "generators": [str(F) for F, _ in cl.generators]}))
    else:
        print(f"D = {cl.discriminant}  h = {cl.h}  Cl = {cl.structure}")
        for F, coords in cl.generators:
            print(f"  generator {F}  coords {coords}")
    return EXIT_OK


def cmd_mrank(a) -> int:
    print(m_rank(class_group(a.D).structure, a.m))
    return EXIT_OK


def cmd_verify(a) -> int:
    suites = verify_mod.SUITES if a.suite == "all" else (a.suite,)
    results = [(s, r) for s in suites for r in verify_mod.run(s, seed=a.seed)]
    if a.json:
        print(json.dumps([{"suite": s, **r.as_dict()} for s, r in results]))
    else:
        for s, r in results:
            line = f"{'PASS' if r.passed else 'FAIL'} [{s}] {r.name} ({r.checked} checked)"
            if r.counterexample:
                line += f"  counterexample: {r.counterexample}"
            print(line)
    return EXIT_OK if all(r.passed for _, r in results) else EXIT_VERIFY


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    handlers = {"family": cmd_family, "survey": cmd_survey,
                "growth": lambda a: cmd_survey(a, growth_only=True),
                "classgroup": cmd_classgroup, "mrank": cmd_mrank, "verify": cmd_verify}
    try:
        return handlers[a.verb](a)
    except BudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
