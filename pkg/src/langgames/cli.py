"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 no parse, 3 oracle mismatch.
Relative file names that do not exist are looked up in the directory named by
``LANGGAMES_FIXTURES`` and then among the bundled fixtures.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from .grammar import GrammarError, LexiconError, parse, render
from .oracle import builder_two_stage, compare, two_stage_equilibria
from .scenario_io import Options, ScenarioFileError, load_grammar, load_scenario
from .semantics import Scenario, builder_language_game, close_sentence, interpret, scenario_apprentice

FIXTURES_ENV = "LANGGAMES_FIXTURES"

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_PARSE = 2
EXIT_MISMATCH = 3


class InputError(Exception):
    pass


class NoParse(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not "no parse"
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def resolve(name: str) -> Path:
    p = Path(name)
    if p.exists() or p.is_absolute():
        return p
    env = os.environ.get(FIXTURES_ENV)
    if env and (Path(env) / name).exists():
        return Path(env) / name
    bundled = resources.files("langgames") / "data" / name
    if bundled.is_file():
        return Path(str(bundled))
    return p


def _load_grammar(name: str):
    try:
        return load_grammar(resolve(name))
    except ScenarioFileError as e:
        raise InputError(str(e)) from None


def _load_scenario(name: str) -> tuple[Scenario, Options]:
    try:
        return load_scenario(resolve(name))
    except ScenarioFileError as e:
        raise InputError(str(e)) from None


def _derivations(grammar, sentence: str, max_depth: int, every: bool):
    try:
        found = parse(grammar, sentence, max_depth, all=every)
    except LexiconError as e:
        raise InputError(f"unknown word {e.word!r}") from None
    if not found:
        raise NoParse(f"no parse found within depth {max_depth}")
    return found


def _dump(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def cmd_parse(args) -> str:
    grammar, options = _load_grammar(args.file)
    depth = args.max_depth or options.max_depth
    found = _derivations(grammar, args.sentence, depth, args.all or options.all_parses)
    if args.output == "json":
        return _dump({
            "sentence": args.sentence,
            "derivations": [
                {"tree": d.serialize(), "height": d.height, "size": d.size} for d in found
            ],
        })
    return "\n".join(render(d, "text") for d in found)


def cmd_diagram(args) -> str:
    grammar, options = _load_grammar(args.file)
    depth = args.max_depth or options.max_depth
    (d,) = _derivations(grammar, args.sentence, depth, False)
    return render(d, args.format)


def _sentence_result(args):
    scenario, options = _load_scenario(args.file)
    depth = args.max_depth or options.max_depth
    (d,) = _derivations(scenario.grammar, args.sentence, depth, False)
    game = interpret(d, builder_language_game(scenario))
    return scenario, close_sentence(game, scenario_apprentice(scenario))


def _strategy(scenario: Scenario, pairs) -> dict[str, str]:
    table = dict(pairs)
    return {o: str(table[o]) for o in scenario.orders}


def _profile_key(scenario: Scenario, profile):
    o, sigma = profile
    acts = {a: i for i, a in enumerate(scenario.actions)}
    table = dict(sigma.items() if hasattr(sigma, "items") else sigma)
    return scenario.orders.index(o), tuple(acts[table[x]] for x in scenario.orders)


def _profile_text(scenario: Scenario, profile) -> str:
    o, sigma = profile
    pairs = sigma.items() if hasattr(sigma, "items") else sigma
    table = _strategy(scenario, pairs)
    return f"{o} {{" + ", ".join(f"{k}: {v}" for k, v in table.items()) + "}"


def cmd_equilibria(args) -> str:
    scenario, result = _sentence_result(args)
    eqs = sorted(result.equilibria, key=lambda p: _profile_key(scenario, p))
    orders = [o for o in scenario.orders if any(p[0] == o for p in eqs)]
    if args.output == "json":
        return _dump({
            "sentence": args.sentence,
            "profiles": len(result.strategies),
            "equilibrium_count": len(eqs),
            "equilibrium_orders": orders,
            "equilibria": [
                {"order": o, "strategy": _strategy(scenario, sigma.items())} for o, sigma in eqs
            ],
        })
    lines = [
        f"sentence: {args.sentence}",
        f"profiles: {len(result.strategies)}",
        f"equilibria: {len(eqs)}",
        "equilibrium orders: " + (" ".join(orders) if orders else "(none)"),
    ]
    lines += [_profile_text(scenario, p) for p in eqs]
    return "\n".join(lines) + "\n"


def cmd_check(args) -> tuple[str, int]:
    scenario, result = _sentence_result(args)
    f = scenario.f
    similarity = (lambda o, a: -f(o, a)) if args.inject_fault else f
    game = builder_two_stage(
        args.sentence.split(),
        slabs=scenario.slabs,
        planks=scenario.planks,
        large=scenario.large,
        orders=scenario.orders,
        actions=scenario.actions,
        similarity=similarity,
    )
    report = compare(result, two_stage_equilibria(game))
    key = lambda p: _profile_key(scenario, p)  # noqa: E731
    only_c = sorted(report.compositional_only, key=key)
    only_o = sorted(report.oracle_only, key=key)
    code = EXIT_OK if report.matched else EXIT_MISMATCH
    if args.output == "json":
        return _dump({
            "sentence": args.sentence,
            "verdict": report.verdict,
            "compositional_count": report.compositional_count,
            "oracle_count": report.oracle_count,
            "compositional_only": [_profile_text(scenario, p) for p in only_c],
            "oracle_only": [_profile_text(scenario, p) for p in only_o],
        }), code
    lines = [
        f"sentence: {args.sentence}",
        f"compositional equilibria: {report.compositional_count}",
        f"oracle equilibria: {report.oracle_count}",
        f"verdict: {report.verdict}",
    ]
    lines += ["only compositional: " + _profile_text(scenario, p) for p in only_c]
    lines += ["only oracle: " + _profile_text(scenario, p) for p in only_o]
    return "\n".join(lines) + "\n", code


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="langgames", description="Parse sentences and solve their language-games.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, output=True):
        p.add_argument("file", help="grammar or scenario JSON file")
        p.add_argument("sentence", help="space-separated words")
        p.add_argument("--max-depth", type=int, default=None, metavar="N")
        if output:
            p.add_argument("--output", choices=("text", "json"), default="text")

    p = sub.add_parser("parse", help="print derivations of a sentence")
    common(p)
    p.add_argument("--all", action="store_true", help="every normal-form derivation")

    p = sub.add_parser("equilibria", help="list equilibria of the closed sentence game")
    common(p)

    p = sub.add_parser("check", help="compare compositional equilibria with the brute-force oracle")
    common(p)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("diagram", help="render the derivation tree")
    common(p, output=False)
    p.add_argument("--format", choices=("text", "dot"), default="text")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.max_depth is not None and args.max_depth < 1:
        print("langgames: error: --max-depth must be positive", file=sys.stderr)
        return EXIT_INPUT
    code = EXIT_OK
    try:
        if args.command == "parse":
            out = cmd_parse(args)
        elif args.command == "diagram":
            out = cmd_diagram(args)
        elif args.command == "equilibria":
            out = cmd_equilibria(args)
        else:
            out, code = cmd_check(args)
    except InputError as e:
        print(f"langgames: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except GrammarError as e:
        print(f"langgames: error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except NoParse as e:
        print(f"langgames: {e}", file=sys.stderr)
        return EXIT_NO_PARSE
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
