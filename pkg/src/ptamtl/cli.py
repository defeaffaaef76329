"""Command-line front end.

Exit codes: 0 when a verdict was produced, 1 on usage or parse errors, 2 on
internal invariant violations.  Arguments holding a formula, word, or
computation may be given inline or as ``@path`` to read from a file.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import formats
from .channel import search_error_free
from .errors import ParseError, ToolkitError
from .encoding import decode, default_layout, encode, explain_membership
from .modelcheck import bounded_modelcheck
from .mtl import eval_at, satisfies
from .pta import is_deterministic, membership
from .reduction import build_bundle, check_theorem


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _maybe_file(value: str) -> str:
    if value.startswith("@"):
        return Path(value[1:]).read_text()
    return value


def _read(path: str) -> str:
    return Path(path).read_text()


def _machine_and_final(path: str, final: str):
    machine, file_final = formats.parse_machine(_read(path))
    return machine, final or file_final


def _print(payload: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")


def _cmd_eval(args) -> int:
    formula = formats.parse_formula(_maybe_file(args.formula))
    word = formats.parse_timed_word(_maybe_file(args.word))
    verdict = eval_at(word, args.at, formula) if args.at else satisfies(word, formula)
    print("true" if verdict else "false")
    return 0


def _cmd_member(args) -> int:
    automaton = formats.parse_pta(_read(args.pta))
    valuation = formats.parse_valuation(args.valuation)
    word = formats.parse_timed_word(_maybe_file(args.word))
    print("true" if membership(automaton, valuation, word) else "false")
    return 0


def _cmd_det_check(args) -> int:
    automaton = formats.parse_pta(_read(args.pta))
    print("deterministic" if is_deterministic(automaton) else "nondeterministic")
    return 0


def _cmd_reduce(args) -> int:
    machine, final = _machine_and_final(args.machine, args.final)
    bundle = build_bundle(machine, final)
    base = Path(args.out) if args.out else Path(args.machine).with_suffix("")
    pta_path = base.with_suffix(".pta")
    mtl_path = base.with_suffix(".mtl")
    alphabet_path = base.with_suffix(".alphabet")
    pta_path.write_text(formats.serialize_pta(bundle.automaton))
    mtl_path.write_text(formats.serialize_formula(bundle.formula) + "\n")
    alphabet_path.write_text(" ".join(bundle.alphabet) + "\n")
    for path in (pta_path, mtl_path, alphabet_path):
        print(path)
    return 0


def _cmd_encode(args) -> int:
    machine, final = _machine_and_final(args.machine, args.final)
    computation = formats.parse_computation(machine, _maybe_file(args.computation))
    from .channel import max_channel

    width = max_channel(computation)
    if args.slots:
        layout_slots = tuple(formats.parse_rational(s) for s in args.slots.split(","))
        from .encoding import EncodingLayout

        layout = EncodingLayout(formats.parse_rational(args.delta), layout_slots)
    else:
        layout = default_layout(width, formats.parse_rational(args.delta))
    word = encode(machine, final, computation, layout)
    print(formats.serialize_timed_word(word))
    return 0


def _cmd_check_lcn(args) -> int:
    machine, final = _machine_and_final(args.machine, args.final)
    word = formats.parse_timed_word(_maybe_file(args.word))
    reason = explain_membership(word, machine, final, args.n)
    if reason is None:
        print("true")
    else:
        print("false")
        if args.explain:
            print(reason, file=sys.stderr)
    return 0


def _cmd_decode(args) -> int:
    machine, final = _machine_and_final(args.machine, args.final)
    word = formats.parse_timed_word(_maybe_file(args.word))
    computation = decode(word, machine, final)
    print(formats.serialize_computation(computation))
    return 0


def _cmd_search(args) -> int:
    machine, final = _machine_and_final(args.machine, args.final)
    result = search_error_free(machine, final, args.steps, args.chan)
    if result.computation is not None:
        print(formats.serialize_computation(result.computation))
    else:
        scope = "bounds exhausted" if result.truncated else "explored space exhausted"
        print(f"unreachable within bounds ({scope})")
    return 0


def _cmd_mc_bounded(args) -> int:
    automaton = formats.parse_pta(_read(args.pta))
    formula = formats.parse_formula(_maybe_file(args.formula))
    if args.candidates:
        candidates = [formats.parse_valuation(part) for part in args.candidates.split(";")]
    else:
        k = args.k or 4
        if len(automaton.parameters) != 1:
            raise UsageError("--k shorthand needs exactly one parameter")
        name = automaton.parameters[0]
        candidates = [{name: Fraction(1, i)} for i in range(1, k + 1)]
    verdict = bounded_modelcheck(
        automaton,
        formula,
        candidates,
        formats.parse_rational(args.grid),
        formats.parse_rational(args.horizon),
        args.max_events,
        strict_only=args.strict_only,
    )
    payload = {
        "outcome": verdict.outcome,
        "all_candidates_refuted": verdict.all_candidates_refuted,
        "candidates": [
            {
                "valuation": formats.serialize_valuation(dict(c.valuation)),
                "counterexample": (
                    formats.serialize_timed_word(c.counterexample)
                    if c.counterexample
                    else None
                ),
                "words_checked": c.words_checked,
            }
            for c in verdict.candidates
        ],
    }
    if verdict.counterexample is not None:
        payload["valuation"] = formats.serialize_valuation(dict(verdict.valuation))
        payload["counterexample"] = formats.serialize_timed_word(verdict.counterexample)
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(f"outcome: {verdict.outcome}")
        if verdict.counterexample is not None:
            print(f"valuation: {payload['valuation']}")
            print(f"counterexample: {payload['counterexample']}")
        for entry in payload["candidates"]:
            mark = "refuted" if entry["counterexample"] else "no counterexample within bounds"
            print(f"  {entry['valuation']}: {mark} ({entry['words_checked']} words checked)")
    return 0


def _cmd_verify_reduction(args) -> int:
    machine, final = _machine_and_final(args.machine, args.final)
    report = check_theorem(machine, final, args.steps, args.chan)
    payload = {
        "outcome": report.outcome,
        "search_complete": report.search_complete,
        "mutants_total": report.mutants_total,
        "mutants_formula_kept": report.mutants_formula_kept,
        "mutants_automaton_rejected": report.mutants_automaton_rejected,
    }
    if report.computation is not None:
        payload["witness"] = formats.serialize_computation(report.computation)
    if report.forward is not None:
        payload["forward"] = {
            a.name: ("n/a" if a.holds is None else a.holds) for a in report.forward.assertions
        }
        payload["valuation"] = formats.serialize_valuation(report.forward.valuation)
    if report.backward is not None:
        payload["backward"] = (
            {a.name: a.holds for a in report.backward.assertions}
            if report.backward.applicable
            else f"inapplicable: {report.backward.reason}"
        )
    if report.notes:
        payload["notes"] = list(report.notes)
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        if report.outcome == "no-witness":
            scope = "exploration complete" if report.search_complete else "bounds exhausted"
            print(f"outcome: inconclusive (no witness within bounds; {scope})")
        else:
            print(f"outcome: {report.outcome}")
        for key, value in payload.items():
            if key != "outcome":
                print(f"{key}: {value}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="ptamtl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate an MTL formula on a timed word")
    p.add_argument("formula")
    p.add_argument("word")
    p.add_argument("--at", type=int, default=0, help="evaluate at a 1-based position")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("member", help="timed-word membership under a valuation")
    p.add_argument("pta")
    p.add_argument("valuation")
    p.add_argument("word")
    p.set_defaults(func=_cmd_member)

    p = sub.add_parser("det-check", help="check automaton determinism")
    p.add_argument("pta")
    p.set_defaults(func=_cmd_det_check)

    p = sub.add_parser("reduce", help="emit the automaton/formula pair for a machine")
    p.add_argument("machine")
    p.add_argument("final", nargs="?", default=None)
    p.add_argument("--out", default=None, help="output basename")
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("encode", help="encode an error-free computation as a timed word")
    p.add_argument("machine")
    p.add_argument("final")
    p.add_argument("computation", help="'state label state ...' or @file")
    p.add_argument("--delta", default="0")
    p.add_argument("--slots", default=None, help="comma-separated slot offsets")
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("check-lcn", help="check encoding-language membership at width n")
    p.add_argument("machine")
    p.add_argument("final")
    p.add_argument("n", type=int)
    p.add_argument("word")
    p.add_argument("--explain", action="store_true")
    p.set_defaults(func=_cmd_check_lcn)

    p = sub.add_parser("decode", help="decode a timed word back into a computation")
    p.add_argument("machine")
    p.add_argument("final")
    p.add_argument("word")
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("search", help="bounded error-free reachability search")
    p.add_argument("machine")
    p.add_argument("final")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--chan", type=int, required=True)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("mc-bounded", help="bounded counterexample search")
    p.add_argument("pta")
    p.add_argument("formula")
    p.add_argument("--candidates", default=None, help="semicolon-separated valuations")
    p.add_argument("--k", type=int, default=None, help="candidates 1/1 .. 1/K")
    p.add_argument("--grid", required=True)
    p.add_argument("--horizon", required=True)
    p.add_argument("--max-events", type=int, required=True)
    p.add_argument("--strict-only", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_mc_bounded)

    p = sub.add_parser("verify-reduction", help="end-to-end bounded reduction check")
    p.add_argument("machine")
    p.add_argument("final")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--chan", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify_reduction)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as error:
        print(f"usage error: {error}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as error:
        print(f"usage error: {error}", file=sys.stderr)
        return 1
    except (ParseError, FileNotFoundError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 1
    except ToolkitError as error:
        print(f"error: {error}", file=sys.stderr)
        return 1
    except AssertionError as error:
        print(f"internal invariant violation: {error}", file=sys.stderr)
        return 2
    except Exception as error:  # noqa: BLE001
        print(f"internal error: {type(error).__name__}: {error}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
