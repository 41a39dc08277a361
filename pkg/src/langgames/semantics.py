"""Functorial language-games: derivations interpreted as open games.

A :class:`FunctorialLanguageGame` assigns a game object to every basic type
and an open game to every dictionary entry. :func:`interpret` extends that
assignment along a derivation: cut becomes composition, tensor introduction
becomes the monoidal product, and negation introduction bends a wire with a
counit.

The second half of the module builds the master/apprentice scenario: nouns
and adjectives are zero-player games over the powerset of a small universe,
imperative verbs are single-player games choosing an order, and the apprentice
is an agent maximising a similarity table.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Sequence

from .gadgets import agent, as_carrier, copy_map
from .games import (
    I,
    ClosedGameResult,
    CompositionError,
    GameConstructionError,
    GameObject,
    OpenGame,
    Table,
    compose,
    compose_all,
    counit_l,
    counit_r,
    dual,
    equilibria_closed,
    flatten_strategies,
    identity,
    lift_contra,
    lift_cov,
    overline,
    tensor,
    tensor_all,
    underline,
)
from .grammar import (
    CUT,
    ID,
    L_ID,
    L_INTRO,
    R_ID,
    R_INTRO,
    TENSOR_INTRO,
    WORD,
    Derivation,
    Entry,
    PregroupType,
    ProcessGrammar,
    parse,
)
from .sets import PAYOFF, STAR, Carrier, FinSet, as_payoff, powerset, product, splitter

MAX_UNIVERSE = 8


class SemanticsError(ValueError):
    pass


class NoParseError(SemanticsError):
    pass


@dataclass(frozen=True)
class FunctorialLanguageGame:
    grammar: ProcessGrammar
    object_assignment: Mapping[str, GameObject]
    word_assignment: Mapping[Entry, OpenGame]

    def __post_init__(self):
        missing = [t for t in self.grammar.basic_types if t not in self.object_assignment]
        if missing:
            raise SemanticsError(f"no game object assigned to basic types {missing}")
        for entry, game in self.word_assignment.items():
            dom, cod = self.object_of(entry.source), self.object_of(entry.target)
            if game.dom != dom or game.cod != cod:
                raise SemanticsError(
                    f"game for {entry} has type {game.dom!r} -> {game.cod!r}, "
                    f"expected {dom!r} -> {cod!r}"
                )

    def object_of(self, t: PregroupType) -> GameObject:
        """Even adjoint degree keeps the assigned object, odd degree dualises it."""
        out = I
        for f in t:
            base = self.object_assignment[f.base]
            out = out @ (base if f.degree % 2 == 0 else dual(base))
        return out

    def game_for(self, entry: Entry) -> OpenGame:
        try:
            return self.word_assignment[entry]
        except KeyError:
            raise SemanticsError(f"no open game assigned to dictionary entry {entry}") from None


def interpret(d: Derivation, flg: FunctorialLanguageGame) -> OpenGame:
    """The open game denoted by a derivation."""
    game = _interpret_node(d, flg)
    dom, cod = flg.object_of(d.lhs), flg.object_of(d.rhs)
    if game.dom != dom or game.cod != cod:
        raise CompositionError(
            f"derivation node {d.rule} [{d.sequent}] denotes {game.dom!r} -> {game.cod!r}, "
            f"expected {dom!r} -> {cod!r}"
        )
    return game


def _interpret_node(d: Derivation, flg: FunctorialLanguageGame) -> OpenGame:
    rule = d.rule
    if rule == WORD:
        return flg.game_for(Entry(d.word, d.lhs, d.rhs))
    if rule in (ID, L_ID, R_ID):
        return identity(flg.object_of(d.lhs))
    if rule == CUT:
        return compose(interpret(d.premises[0], flg), interpret(d.premises[1], flg))
    if rule == TENSOR_INTRO:
        return tensor(interpret(d.premises[0], flg), interpret(d.premises[1], flg))
    if rule == L_INTRO:
        p = d.premises[0]
        t = flg.object_of(p.rhs[:1])
        rest = flg.object_of(p.rhs[1:])
        return compose(
            tensor(identity(dual(t)), interpret(p, flg)),
            tensor(counit_l(t), identity(rest)),
        )
    if rule == R_INTRO:
        p = d.premises[0]
        t = flg.object_of(p.rhs[-1:])
        rest = flg.object_of(p.rhs[:-1])
        return compose(
            tensor(interpret(p, flg), identity(dual(t))),
            tensor(identity(rest), counit_r(t)),
        )
    raise SemanticsError(f"cannot interpret rule {rule!r}")


# Builder scenario


@dataclass(frozen=True, order=True)
class Action:
    """``B(x)`` brings ``x``; ``C(x)`` cuts it. Written ``B:x`` / ``C:x``."""

    kind: str
    target: str

    def __str__(self) -> str:
        return f"{self.kind}:{self.target}"

    __repr__ = __str__

    @classmethod
    def parse(cls, text: str) -> "Action":
        kind, sep, target = text.partition(":")
        if not sep or kind not in ("B", "C") or not target:
            raise ValueError(f"malformed action {text!r}; expected B:<label> or C:<label>")
        return cls(kind, target)


def bring(x: str) -> Action:
    return Action("B", x)


def cut_action(x: str) -> Action:
    return Action("C", x)


def action_set(universe: Iterable[str]) -> tuple[Action, ...]:
    universe = tuple(universe)
    return tuple(bring(x) for x in universe) + tuple(cut_action(x) for x in universe)


def acceptor(kind: str) -> Callable[[Action, frozenset], bool]:
    """Predicate accepting an action of the given kind on some member of the referent set."""

    def accepts(a: Action, referents: frozenset) -> bool:
        return a.kind == kind and a.target in referents

    accepts.__name__ = f"accepts_{kind}"
    return accepts


bring_accepts = acceptor("B")
cut_accepts = acceptor("C")


def noun_game(subsets: FinSet, denotation: Iterable[str]) -> OpenGame:
    """Zero-player ``I -> overline P(U)`` that always plays ``denotation``."""
    value = frozenset(denotation)
    if value not in subsets:
        raise SemanticsError(f"denotation {sorted(value)} is not a subset of the universe")
    return lift_cov(lambda _: value, I.fwd, subsets, label="noun")


def adjective_game(subsets: FinSet, restrictor: Iterable[str]) -> OpenGame:
    """Zero-player ``underline P(U) -> underline P(U)`` intersecting with ``restrictor``."""
    keep = frozenset(restrictor)
    if keep not in subsets:
        raise SemanticsError(f"restrictor {sorted(keep)} is not a subset of the universe")
    return lift_contra(lambda xs: xs & keep, subsets, subsets, label="adjective")


def imperative_verb_game(
    orders: Carrier | Iterable[Any],
    actions: Carrier | Iterable[Any],
    subsets: FinSet,
    accepts: Callable[[Any, frozenset], bool],
) -> OpenGame:
    """The master: ``I -> (O, A x P(U))``, choosing an order and judging the outcome."""
    O, A = as_carrier(orders), as_carrier(actions)
    if not O.elements():
        raise GameConstructionError("an imperative verb needs a nonempty set of orders")
    split = splitter(A, subsets)

    def equilibrium(h, k, o):
        a, referents = split(k(o))
        return accepts(a, referents)

    return OpenGame(
        I,
        GameObject(O, product(A, subsets)),
        tuple(O.elements()),
        lambda o, x: o,
        lambda o, x, r: STAR,
        equilibrium,
        label="verb",
    )


def apprentice_game(
    orders: Carrier | Iterable[Any],
    actions: Carrier | Iterable[Any],
    similarity: Callable[[Any, Any], Any] | Mapping,
) -> OpenGame:
    """``(O, A) -> I``: on order ``o`` choose an action maximising ``similarity(o, a)``.

    Wired as: copy the order, let an agent choose, copy the action, score the
    (order, action) pair, and bend the score and the action back.
    """
    O, A = as_carrier(orders), as_carrier(actions)
    if not A.elements():
        raise GameConstructionError("the apprentice needs a nonempty action set")
    if isinstance(similarity, Mapping):
        table = similarity
        score_of = lambda o, a: table[o, a]  # noqa: E731
    else:
        score_of = similarity
    OA = product(O, A)
    split_oa = splitter(O, A)

    def score(pair):
        o, a = split_oa(pair)
        return as_payoff(score_of(o, a))

    feedback = product(PAYOFF, A)
    wired = compose_all(
        tensor(copy_map(O), identity(underline(A))),
        tensor_all([identity(overline(O)), agent(O, A, label="apprentice"), identity(underline(A))]),
        tensor_all([identity(overline(O)), copy_map(A), identity(underline(feedback))]),
        tensor_all([
            lift_cov(score, OA, PAYOFF, label="similarity"),
            identity(overline(A)),
            identity(underline(feedback)),
        ]),
        counit_r(overline(feedback)),
    )
    return flatten_strategies(wired, label="apprentice")


def close_sentence(sentence_game: OpenGame, apprentice: OpenGame) -> ClosedGameResult:
    """Equilibria of the sentence game followed by the apprentice; profiles are ``(order, strategy)``."""
    closed = flatten_strategies(compose(sentence_game, apprentice))
    return equilibria_closed(closed)


@dataclass(frozen=True)
class Scenario:
    universe: tuple[str, ...]
    slabs: frozenset
    planks: frozenset
    large: frozenset
    orders: tuple[str, ...]
    similarity: Mapping[tuple[str, Action], Fraction]
    grammar: ProcessGrammar = field(default_factory=lambda: builder_grammar())
    max_universe: int = MAX_UNIVERSE

    def __post_init__(self):
        U = set(self.universe)
        if len(U) != len(self.universe):
            raise SemanticsError("universe labels must be distinct")
        if len(U) > self.max_universe:
            raise SemanticsError(
                f"universe has {len(U)} objects; at most {self.max_universe} are supported"
            )
        for name in ("slabs", "planks", "large"):
            stray = set(getattr(self, name)) - U
            if stray:
                raise SemanticsError(f"{name} mentions objects outside the universe: {sorted(stray)}")
        if not self.orders:
            raise SemanticsError("at least one order is required")
        if set(self.grammar.dictionary) != set(builder_grammar().dictionary):
            raise SemanticsError("scenario grammar must be exactly the five builder entries")
        for o in self.orders:
            for a in self.actions:
                if (o, a) not in self.similarity:
                    raise SemanticsError(f"similarity is missing an entry for order {o!r}, action {a}")

    @property
    def actions(self) -> tuple[Action, ...]:
        return action_set(self.universe)

    @property
    def subsets(self) -> FinSet:
        return powerset(self.universe)

    def f(self, o: str, a: Action) -> Fraction:
        return self.similarity[o, a]


BUILDER_ENTRIES = (
    ("slabs", "1", "n"),
    ("planks", "1", "n"),
    ("large", "n^l", "n^l"),
    ("bring", "1", "s n^l"),
    ("cut", "1", "s n^l"),
)


def builder_grammar() -> ProcessGrammar:
    return ProcessGrammar.from_entries(BUILDER_ENTRIES, sentence_type="s")


def builder_language_game(
    scenario: Scenario,
    actions: Sequence[Action] | None = None,
) -> FunctorialLanguageGame:
    """Semantics of the builder grammar: ``[[n]] = overline P(U)``, ``[[s]] = (O, A)``.

    ``actions`` narrows the action set (useful for small exhaustive checks).
    """
    A = FinSet(scenario.actions if actions is None else actions, name="A")
    O = FinSet(scenario.orders, name="O")
    P = scenario.subsets
    g = scenario.grammar
    entry = {e.word: e for e in g.dictionary}
    words = {
        entry["slabs"]: noun_game(P, scenario.slabs),
        entry["planks"]: noun_game(P, scenario.planks),
        entry["large"]: adjective_game(P, scenario.large),
        entry["bring"]: imperative_verb_game(O, A, P, bring_accepts),
        entry["cut"]: imperative_verb_game(O, A, P, cut_accepts),
    }
    objects = {"n": overline(P), "s": GameObject(O, A)}
    return FunctorialLanguageGame(g, objects, words)


def scenario_apprentice(scenario: Scenario, actions: Sequence[Action] | None = None) -> OpenGame:
    A = scenario.actions if actions is None else tuple(actions)
    return apprentice_game(
        FinSet(scenario.orders, name="O"), FinSet(A, name="A"), scenario.f
    )


def sentence_game(
    scenario: Scenario, sentence: str | Sequence[str], max_depth: int = 12
) -> tuple[Derivation, OpenGame]:
    derivations = parse(scenario.grammar, sentence, max_depth)
    if not derivations:
        raise NoParseError(f"no parse found within depth {max_depth}")
    d = derivations[0]
    return d, interpret(d, builder_language_game(scenario))


def scenario_equilibria(
    scenario: Scenario, sentence: str | Sequence[str], max_depth: int = 12
) -> ClosedGameResult:
    _, game = sentence_game(scenario, sentence, max_depth)
    return close_sentence(game, scenario_apprentice(scenario))


def argmax_actions(scenario: Scenario, o: str) -> tuple[Action, ...]:
    row = {a: scenario.f(o, a) for a in scenario.actions}
    best = max(row.values())
    return tuple(a for a in scenario.actions if row[a] == best)


def backward_induction(
    scenario: Scenario, good_actions: Iterable[Action]
) -> list[tuple[Table, tuple[str, ...]]]:
    """Apprentice-optimal strategies and, for each, the orders that lead to a good action.

    Ties in a row of the similarity table yield one strategy per choice of maximiser.
    """
    good = frozenset(good_actions)
    rows = [argmax_actions(scenario, o) for o in scenario.orders]
    out = []
    for choice in itertools.product(*rows):
        sigma = Table(zip(scenario.orders, choice))
        out.append((sigma, tuple(o for o in scenario.orders if sigma(o) in good)))
    return out


def forward_image(kind: str, referents: Iterable[str]) -> frozenset[Action]:
    return frozenset(Action(kind, x) for x in referents)
