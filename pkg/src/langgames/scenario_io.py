"""JSON scenario and grammar files.

A grammar file needs only ``grammar`` (a list of ``[word, source, target]``
triples with types written like ``"s n^l"``) and optionally
``sentence_type`` and ``options``. A scenario file adds the builder world::

    {
      "grammar": [["slabs", "1", "n"], ...],
      "universe": ["s1", "s2", "p1", "p2"],
      "slabs": ["s1", "s2"], "planks": ["p1", "p2"], "large": ["s2", "p2"],
      "orders": ["o1", "o2"],
      "similarity": {"o1": {"B:s1": "1/2", ...}, ...},
      "options": {"max_depth": 12}
    }

Similarity values are integers or rational strings such as ``"3/4"``;
floats are rejected so that argmax stays exact.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .grammar import DEFAULT_MAX_DEPTH, GrammarError, ProcessGrammar, grammatical_sentences
from .semantics import Action, Scenario, SemanticsError, action_set

GRAMMAR_KEYS = {"grammar", "sentence_type", "options"}
SCENARIO_KEYS = {"universe", "slabs", "planks", "large", "orders", "similarity"}
OPTION_KEYS = {"max_depth", "all_parses", "populate_orders_from_grammar"}
POPULATED_ORDER_LENGTH = 3


class ScenarioFileError(ValueError):
    pass


@dataclass(frozen=True)
class Options:
    max_depth: int = DEFAULT_MAX_DEPTH
    all_parses: bool = False
    populate_orders_from_grammar: bool = False


class _Source:
    """Raw JSON plus enough of the text to point at fields by line."""

    def __init__(self, text: str, name: str):
        self.text = text
        self.name = name
        try:
            self.data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ScenarioFileError(f"{name}: line {e.lineno}, column {e.colno}: {e.msg}") from None
        if not isinstance(self.data, dict):
            raise ScenarioFileError(f"{name}: line 1: top level must be an object")

    def fail(self, field: str, message: str) -> ScenarioFileError:
        key = field.split(".")[-1]
        m = re.search(r'"' + re.escape(key) + r'"', self.text)
        where = f"line {self.text.count(chr(10), 0, m.start()) + 1}, " if m else ""
        return ScenarioFileError(f"{self.name}: {where}field {field!r}: {message}")


def _read(path: str | Path) -> _Source:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioFileError(f"{path}: cannot read file ({e.strerror or e})") from None
    return _Source(text, str(path))


def _strings(src: _Source, field: str, value: Any) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise src.fail(field, "expected a list of strings")
    if len(set(value)) != len(value):
        raise src.fail(field, "duplicate labels")
    return tuple(value)


def _rational(src: _Source, field: str, value: Any) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise src.fail(field, f"expected an integer or a rational string, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise src.fail(field, f"not a rational number: {value!r}") from None


def _options(src: _Source) -> Options:
    raw = src.data.get("options", {})
    if not isinstance(raw, dict):
        raise src.fail("options", "expected an object")
    unknown = sorted(set(raw) - OPTION_KEYS)
    if unknown:
        raise src.fail(f"options.{unknown[0]}", "unknown key")
    depth = raw.get("max_depth", DEFAULT_MAX_DEPTH)
    if isinstance(depth, bool) or not isinstance(depth, int) or depth < 1:
        raise src.fail("options.max_depth", "expected a positive integer")
    flags = {}
    for key in ("all_parses", "populate_orders_from_grammar"):
        v = raw.get(key, False)
        if not isinstance(v, bool):
            raise src.fail(f"options.{key}", "expected true or false")
        flags[key] = v
    return Options(depth, **flags)


def _grammar(src: _Source) -> ProcessGrammar:
    if "grammar" not in src.data:
        raise src.fail("grammar", "missing")
    entries = src.data["grammar"]
    if not isinstance(entries, list) or not entries:
        raise src.fail("grammar", "expected a nonempty list of [word, source, target] entries")
    for i, e in enumerate(entries):
        if not (isinstance(e, list) and len(e) == 3 and all(isinstance(x, str) for x in e)):
            raise src.fail("grammar", f"entry {i} is not a [word, source, target] triple of strings")
    sentence_type = src.data.get("sentence_type", "s")
    if not isinstance(sentence_type, str):
        raise src.fail("sentence_type", "expected a type string")
    try:
        return ProcessGrammar.from_entries([tuple(e) for e in entries], sentence_type)
    except GrammarError as e:
        raise src.fail("grammar", str(e)) from None


def _check_keys(src: _Source, allowed: set[str]) -> None:
    unknown = sorted(set(src.data) - allowed)
    if unknown:
        raise src.fail(unknown[0], "unknown key")


def load_grammar(path: str | Path) -> tuple[ProcessGrammar, Options]:
    """Read the grammar part of a grammar or scenario file."""
    src = _read(path)
    _check_keys(src, GRAMMAR_KEYS | SCENARIO_KEYS)
    return _grammar(src), _options(src)


def load_scenario(path: str | Path) -> tuple[Scenario, Options]:
    src = _read(path)
    _check_keys(src, GRAMMAR_KEYS | SCENARIO_KEYS)
    options = _options(src)
    required = SCENARIO_KEYS - ({"orders"} if options.populate_orders_from_grammar else set())
    for key in sorted(required):
        if key not in src.data:
            raise src.fail(key, "missing")
    grammar = _grammar(src)
    d = src.data
    universe = _strings(src, "universe", d["universe"])
    subsets = {}
    for key in ("slabs", "planks", "large"):
        labels = _strings(src, key, d[key])
        stray = [x for x in labels if x not in universe]
        if stray:
            raise src.fail(key, f"label {stray[0]!r} is not in the universe")
        subsets[key] = frozenset(labels)
    if options.populate_orders_from_grammar:
        orders = tuple(grammatical_sentences(grammar, POPULATED_ORDER_LENGTH, options.max_depth))
    else:
        orders = _strings(src, "orders", d["orders"])
    actions = action_set(universe)
    table = d["similarity"]
    if not isinstance(table, dict):
        raise src.fail("similarity", "expected an object mapping orders to rows")
    stray = sorted(set(table) - set(orders))
    if stray:
        raise src.fail(f"similarity.{stray[0]}", "not a declared order")
    similarity: dict[tuple[str, Action], Fraction] = {}
    wire = {str(a): a for a in actions}
    for o in orders:
        if o not in table:
            raise src.fail("similarity", f"no row for order {o!r}")
        row = table[o]
        if not isinstance(row, dict):
            raise src.fail(f"similarity.{o}", "expected an object mapping actions to values")
        for key in sorted(row):
            if key not in wire:
                try:
                    Action.parse(key)
                except ValueError as e:
                    raise src.fail(f"similarity.{o}.{key}", str(e)) from None
                raise src.fail(f"similarity.{o}.{key}", "action target is not in the universe")
        for a in actions:
            if str(a) not in row:
                raise src.fail(f"similarity.{o}", f"row is missing action {a}")
            similarity[o, a] = _rational(src, f"similarity.{o}.{a}", row[str(a)])
    try:
        scenario = Scenario(
            universe, subsets["slabs"], subsets["planks"], subsets["large"], orders, similarity, grammar
        )
    except SemanticsError as e:
        raise ScenarioFileError(f"{src.name}: {e}") from None
    return scenario, options
