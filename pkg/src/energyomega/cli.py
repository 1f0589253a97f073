"""Command-line front end.

Subcommands: reach, buchi, star, omega, eval, laws, wordcheck.  Exit
codes are stable: 0 for a positive answer (or success), 1 for a negative
answer (or failed checks), 2 for any usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import energyauto, energyfn, laws, omegaval, wordmodel
from .errors import EnergyOmegaError, ParseError, UnknownIdentity
from .extlat import format_ext, parse_ext

EXIT_YES = 0
EXIT_NO = 1
EXIT_ERROR = 2


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def _emit(args, text_lines, payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def cmd_reach(args) -> int:
    aut = energyauto.from_json(_load_json(args.automaton))
    x0 = parse_ext(args.energy)
    result = energyauto.reachable(aut, x0, verify=args.verify)
    value = format_ext(result.value)
    payload = {
        "command": "reach",
        "energy": args.energy,
        "answer": result.answer,
        "value": value,
        "verified": args.verify,
    }
    _emit(
        args,
        [f"reachable: {'yes' if result.answer else 'no'}", f"value: {value}"],
        payload,
    )
    return EXIT_YES if result.answer else EXIT_NO


def cmd_buchi(args) -> int:
    aut = energyauto.from_json(_load_json(args.automaton))
    x0 = parse_ext(args.energy)
    result = energyauto.buchi(aut, x0, verify=args.verify)
    payload = {
        "command": "buchi",
        "energy": args.energy,
        "answer": result.answer,
        "value": omegaval.to_json(result.value),
        "verified": args.verify,
    }
    _emit(
        args,
        [
            f"buchi: {'yes' if result.answer else 'no'}",
            f"value: {result.value}",
        ],
        payload,
    )
    return EXIT_YES if result.answer else EXIT_NO


def cmd_star(args) -> int:
    f = energyfn.from_json(_load_json(args.function))
    out = energyfn.star(f)
    payload = {"command": "star", "result": energyfn.to_json(out)}
    _emit(args, [f"star: {out}", json.dumps(energyfn.to_json(out))], payload)
    return EXIT_YES


def cmd_omega(args) -> int:
    f = energyfn.from_json(_load_json(args.function))
    out = omegaval.omega(f)
    payload = {"command": "omega", "result": omegaval.to_json(out)}
    _emit(args, [f"omega: {out}", json.dumps(omegaval.to_json(out))], payload)
    return EXIT_YES


def cmd_eval(args) -> int:
    f = energyfn.from_json(_load_json(args.function))
    x = parse_ext(args.energy)
    value = format_ext(f.eval(x))
    payload = {"command": "eval", "energy": args.energy, "value": value}
    _emit(args, [f"value: {value}"], payload)
    return EXIT_YES


def cmd_laws(args) -> int:
    reports = laws.run_suite(args.instance, seed=args.seed, cases=args.cases)
    bad = 0
    for report in reports:
        print(json.dumps(report.to_json(), sort_keys=True))
        if report.verdict != "Pass":
            bad += 1
    return EXIT_YES if bad == 0 else EXIT_NO


WORD_IDENTITIES = ("conway-star", "product-star", "omega-sum", "omega-product", "group-C2")


def _wordcheck_once(name: str, x, y, bound: int):
    wm = wordmodel
    if name == "conway-star":
        lhs = wm.lang_star(wm.lang_union(x, y))
        rhs = wm.lang_concat(wm.lang_star(wm.lang_concat(wm.lang_star(x), y)), wm.lang_star(x))
        return wm.lang_equal(lhs, rhs), None
    if name == "product-star":
        lhs = wm.lang_star(wm.lang_concat(x, y))
        rhs = wm.lang_union(
            wm.lang_epsilon(x.alphabet),
            wm.lang_concat(wm.lang_concat(x, wm.lang_star(wm.lang_concat(y, x))), y),
        )
        return wm.lang_equal(lhs, rhs), None
    if name == "omega-sum":
        xsy = wm.lang_concat(wm.lang_star(x), y)
        lhs = wm.omega_power(wm.lang_union(x, y))
        rhs = wm.lasso_union(
            wm.lasso_action(wm.lang_star(xsy), wm.omega_power(x)),
            wm.omega_power(xsy),
        )
        verdict = wm.lasso_equal_bounded(lhs, rhs, bound)
        return verdict.equal, verdict
    if name == "omega-product":
        lhs = wm.omega_power(wm.lang_concat(x, y))
        rhs = wm.lasso_action(x, wm.omega_power(wm.lang_concat(y, x)))
        verdict = wm.lasso_equal_bounded(lhs, rhs, bound)
        return verdict.equal, verdict
    if name == "group-C2":
        report = laws.check_group_identity("C2", [x, y], "word", bound=bound)
        return report.verdict == "Pass", None
    raise UnknownIdentity(f"unknown identity {name!r}")


def cmd_wordcheck(args) -> int:
    import random

    if args.identity not in WORD_IDENTITIES:
        raise UnknownIdentity(
            f"unknown identity {args.identity!r}; choose from {', '.join(WORD_IDENTITIES)}"
        )
    rng = random.Random(args.seed)
    failures = []
    for _ in range(args.cases):
        x = laws.random_regex(rng, args.alphabet, epsilon_free=True)
        y = laws.random_regex(rng, args.alphabet, epsilon_free=True)
        ok, verdict = _wordcheck_once(args.identity, x, y, args.bound)
        if not ok:
            failures.append(str(verdict) if verdict else "language mismatch")
    bounded = args.identity in ("omega-sum", "omega-product")
    payload = {
        "command": "wordcheck",
        "identity": args.identity,
        "cases": args.cases,
        "bound": args.bound if bounded else None,
        "verdict": "Pass" if not failures else "Fail",
        "failures": failures,
    }
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        scope = f" up to bound {args.bound}" if bounded else " exactly"
        print(f"{args.identity}: {payload['verdict']}{scope} ({args.cases} cases)")
        for f in failures:
            print(f"  counterexample: {f}")
    return EXIT_YES if not failures else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="energyomega",
        description="Energy automata queries and algebra law checking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("reach", help="reachability with an initial energy")
    p.add_argument("automaton")
    p.add_argument("--energy", required=True, help='initial energy ("bot", "top", or a rational)')
    p.add_argument("--verify", action="store_true", help="cross-check against the search oracle")
    add_common(p)
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("buchi", help="repeated-accepting acceptance with an initial energy")
    p.add_argument("automaton")
    p.add_argument("--energy", required=True)
    p.add_argument("--verify", action="store_true")
    add_common(p)
    p.set_defaults(func=cmd_buchi)

    p = sub.add_parser("star", help="star of an energy function")
    p.add_argument("function")
    add_common(p)
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("omega", help="omega value of an energy function")
    p.add_argument("function")
    add_common(p)
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("eval", help="evaluate an energy function at a point")
    p.add_argument("function")
    p.add_argument("--energy", required=True)
    add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("laws", help="run the law suite, one JSON report per line")
    p.add_argument("--instance", choices=("energy", "word"), default="energy")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=20)
    add_common(p)
    p.set_defaults(func=cmd_laws)

    p = sub.add_parser("wordcheck", help="check a named identity in the word model")
    p.add_argument("--identity", required=True)
    p.add_argument("--alphabet", default="ab")
    p.add_argument("--bound", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=20)
    add_common(p)
    p.set_defaults(func=cmd_wordcheck)

    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EnergyOmegaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
