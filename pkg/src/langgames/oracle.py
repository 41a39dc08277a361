"""Brute-force equilibrium enumeration, independent of the open-game machinery.

Nothing here imports the compositional modules; games are plain tables and
equilibria are found by checking every profile directly. Strategies of the
second mover are represented as ``frozenset`` of ``(order, action)`` pairs so
that they compare equal to any mapping with the same graph.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence


@dataclass(frozen=True)
class NormalFormGame:
    choice_sets: tuple[tuple, ...]
    payoff: Callable[[tuple], Sequence[Fraction]]

    def __post_init__(self):
        if not self.choice_sets:
            raise ValueError("a normal-form game needs at least one player")

    @property
    def players(self) -> int:
        return len(self.choice_sets)

    @classmethod
    def from_table(cls, choice_sets: Sequence[Iterable], table: Mapping) -> "NormalFormGame":
        sets = tuple(tuple(xs) for xs in choice_sets)
        for profile in itertools.product(*sets):
            if profile not in table:
                raise ValueError(f"payoff table has no entry for {profile}")
        return cls(sets, lambda p: table[p])


def nash_pure(g: NormalFormGame) -> list[tuple]:
    """All pure profiles from which no single player gains by deviating."""
    out = []
    for profile in itertools.product(*g.choice_sets):
        here = g.payoff(profile)
        stable = True
        for i, xs in enumerate(g.choice_sets):
            for x in xs:
                if x == profile[i]:
                    continue
                deviated = profile[:i] + (x,) + profile[i + 1 :]
                if g.payoff(deviated)[i] > here[i]:
                    stable = False
                    break
            if not stable:
                break
        if stable:
            out.append(profile)
    return out


@dataclass(frozen=True)
class TwoStageGame:
    """Leader picks an order, follower answers it with an action.

    The leader is satisfied or not; the follower maximises a utility.
    """

    leader_choices: tuple
    follower_actions: tuple
    leader_utility: Callable[[Any, Any], bool]
    follower_utility: Callable[[Any, Any], Fraction]


def follower_strategies(g: TwoStageGame) -> Iterable[frozenset]:
    for answer in itertools.product(g.follower_actions, repeat=len(g.leader_choices)):
        yield frozenset(zip(g.leader_choices, answer))


def two_stage_equilibria(g: TwoStageGame) -> list[tuple[Any, frozenset]]:
    """Profiles ``(o, sigma)`` where the leader is satisfied and the follower's answer to ``o`` is optimal."""
    best = {}
    for o in g.leader_choices:
        row = [g.follower_utility(o, a) for a in g.follower_actions]
        best[o] = max(row) if row else None
    out = []
    for o in g.leader_choices:
        for sigma in follower_strategies(g):
            a = dict(sigma)[o]
            if g.leader_utility(o, a) and g.follower_utility(o, a) == best[o]:
                out.append((o, sigma))
    return out


def read_imperative(
    words: Sequence[str],
    nouns: Mapping[str, frozenset],
    adjectives: Mapping[str, frozenset],
    verbs: Mapping[str, str],
) -> tuple[str, frozenset] | None:
    """Read ``verb adjective* noun`` directly: the action kind and the referent set.

    Returns ``None`` for any other word pattern.
    """
    if len(words) < 2 or words[0] not in verbs or words[-1] not in nouns:
        return None
    referents = frozenset(nouns[words[-1]])
    for w in words[1:-1]:
        if w not in adjectives:
            return None
        referents &= adjectives[w]
    return verbs[words[0]], referents


def builder_two_stage(
    words: Sequence[str],
    *,
    slabs: Iterable[str],
    planks: Iterable[str],
    large: Iterable[str],
    orders: Sequence[Any],
    actions: Sequence[Any],
    similarity: Callable[[Any, Any], Fraction],
) -> TwoStageGame:
    """The master/apprentice game for an imperative sentence.

    Actions are any objects with ``kind`` and ``target`` attributes.
    """
    reading = read_imperative(
        words,
        {"slabs": frozenset(slabs), "planks": frozenset(planks)},
        {"large": frozenset(large)},
        {"bring": "B", "cut": "C"},
    )
    if reading is None:
        raise ValueError(f"not an imperative of the form verb adjective* noun: {' '.join(words)!r}")
    kind, referents = reading

    def satisfied(o, a):
        return a.kind == kind and a.target in referents

    return TwoStageGame(tuple(orders), tuple(actions), satisfied, similarity)


def canonical(value: Any) -> Any:
    """Mappings become ``frozenset`` graphs, recursively through tuples."""
    if isinstance(value, Mapping):
        return frozenset((canonical(k), canonical(v)) for k, v in value.items())
    if type(value) is tuple:
        return tuple(canonical(v) for v in value)
    return value


@dataclass(frozen=True)
class ComparisonReport:
    verdict: str
    compositional_only: tuple
    oracle_only: tuple
    compositional_count: int
    oracle_count: int

    @property
    def matched(self) -> bool:
        return self.verdict == "match"


def _sort_key(value: Any) -> str:
    if isinstance(value, frozenset):
        return "{" + ",".join(sorted(_sort_key(v) for v in value)) + "}"
    if type(value) is tuple:
        return "(" + ",".join(_sort_key(v) for v in value) + ")"
    return repr(value)


def compare(compositional: Any, oracle_set: Iterable[Any]) -> ComparisonReport:
    """Set comparison of two equilibrium listings.

    ``compositional`` may be any object with an ``equilibria`` attribute, or an iterable.
    """
    found = getattr(compositional, "equilibria", compositional)
    left = {canonical(p) for p in found}
    right = {canonical(p) for p in oracle_set}
    return ComparisonReport(
        "match" if left == right else "mismatch",
        tuple(sorted(left - right, key=_sort_key)),
        tuple(sorted(right - left, key=_sort_key)),
        len(left),
        len(right),
    )
