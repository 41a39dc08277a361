"""Finite open games: objects, composition, tensor, counits and liftings.

An open game ``G : (X, S) -> (Y, R)`` carries a finite strategy set and three
functions: ``play(sigma, x) -> y``, ``coplay(sigma, x, r) -> s`` and the
equilibrium predicate ``equilibrium(h, k, sigma) -> bool`` where ``h`` is a
history in ``X`` and ``k`` a continuation ``Y -> R`` given as any callable.

Everything here is immutable; all constructors are pure.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Sequence

from .sets import (
    ONE,
    STAR,
    Carrier,
    format_element,
    joiner,
    product,
    splitter,
)


class CompositionError(ValueError):
    """Raised when the codomain of one game does not match the domain of the next."""


class GameConstructionError(ValueError):
    pass


class NotClosedError(ValueError):
    pass


@dataclass(frozen=True)
class GameObject:
    """A pair of carriers: forward information and backward (counterfactual) information."""

    fwd: Carrier
    bwd: Carrier

    def __matmul__(self, other: "GameObject") -> "GameObject":
        return tensor_objects(self, other)

    def __repr__(self) -> str:
        return f"({self.fwd!r} | {self.bwd!r})"


I = GameObject(ONE, ONE)


def overline(x: Carrier) -> GameObject:
    return GameObject(x, ONE)


def underline(x: Carrier) -> GameObject:
    return GameObject(ONE, x)


def dual(a: GameObject) -> GameObject:
    return GameObject(a.bwd, a.fwd)


def tensor_objects(a: GameObject, b: GameObject) -> GameObject:
    return GameObject(product(a.fwd, b.fwd), product(a.bwd, b.bwd))


class Table(Mapping):
    """A total function on a finite domain, stored as an ordered lookup table.

    Hashable and callable, so it serves both as a strategy and as a continuation.
    """

    __slots__ = ("_items", "_lookup", "_hash")

    def __init__(self, items: Iterable[tuple[Any, Any]]):
        self._items = tuple(items)
        self._lookup = dict(self._items)
        self._hash = hash(frozenset(self._items))

    @classmethod
    def from_function(cls, domain: Iterable[Any], fn: Callable[[Any], Any]) -> "Table":
        return cls((x, fn(x)) for x in domain)

    def __call__(self, x: Any) -> Any:
        return self._lookup[x]

    def __getitem__(self, x: Any) -> Any:
        return self._lookup[x]

    def __iter__(self) -> Iterator[Any]:
        return (k for k, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def items(self):  # type: ignore[override]
        return self._items

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Table):
            return self._lookup == other._lookup
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{format_element(k)}: {format_element(v)}" for k, v in self._items)
        return "{" + body + "}"


def all_tables(domain: Sequence[Any], codomain: Sequence[Any]) -> list[Table]:
    """Every total map ``domain -> codomain``, in lexicographic order."""
    domain = tuple(domain)
    return [Table(zip(domain, values)) for values in itertools.product(codomain, repeat=len(domain))]


class _Trivial:
    """The unique strategy profile of a zero-player game."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "*"

    def __reduce__(self):
        return (_Trivial, ())


TRIVIAL = _Trivial()


@dataclass(frozen=True)
class Joint:
    """Strategy profile of a composite game: one profile for each component."""

    first: Any
    second: Any

    def __repr__(self) -> str:
        return f"<{self.first!r}, {self.second!r}>"


def flatten_profile(profile: Any) -> tuple:
    """Leaf strategies of a (possibly nested) profile, left to right."""
    if profile is TRIVIAL:
        return ()
    if isinstance(profile, Joint):
        return flatten_profile(profile.first) + flatten_profile(profile.second)
    return (profile,)


@dataclass(frozen=True, eq=False)
class OpenGame:
    dom: GameObject
    cod: GameObject
    strategies: tuple
    play: Callable[[Any, Any], Any]
    coplay: Callable[[Any, Any, Any], Any]
    equilibrium: Callable[[Any, Callable, Any], bool]
    always_equilibrium: bool = False
    label: str = field(default="", compare=False)

    @property
    def is_zero_player(self) -> bool:
        return self.always_equilibrium and len(self.strategies) == 1

    @property
    def is_closed(self) -> bool:
        return self.dom == I and self.cod == I

    def equilibria(self, h: Any, k: Callable[[Any], Any]) -> list:
        if self.always_equilibrium:
            return list(self.strategies)
        return [s for s in self.strategies if self.equilibrium(h, k, s)]

    def __rshift__(self, other: "OpenGame") -> "OpenGame":
        return compose(self, other)

    def __matmul__(self, other: "OpenGame") -> "OpenGame":
        return tensor(self, other)

    def __repr__(self) -> str:
        name = self.label or "OpenGame"
        return f"<{name}: {self.dom!r} -> {self.cod!r}, |Σ|={len(self.strategies)}>"


def _always(h, k, s) -> bool:
    return True


def zero_player(
    dom: GameObject,
    cod: GameObject,
    play: Callable[[Any], Any],
    coplay: Callable[[Any, Any], Any],
    label: str = "",
) -> OpenGame:
    """Wrap strategy-free play/coplay maps as a zero-player open game."""
    return OpenGame(
        dom,
        cod,
        (TRIVIAL,),
        lambda s, x: play(x),
        lambda s, x, r: coplay(x, r),
        _always,
        always_equilibrium=True,
        label=label,
    )


def identity(a: GameObject) -> OpenGame:
    return zero_player(a, a, lambda x: x, lambda x, r: r, label=f"id{a!r}")


def _pairing(g: OpenGame, h: OpenGame):
    """Strategy product with the trivial profile as a strict unit."""
    g_triv = g.strategies == (TRIVIAL,)
    h_triv = h.strategies == (TRIVIAL,)
    if g_triv:
        return h.strategies, (lambda p: (TRIVIAL, p))
    if h_triv:
        return g.strategies, (lambda p: (p, TRIVIAL))
    profiles = tuple(Joint(s, t) for s in g.strategies for t in h.strategies)
    return profiles, (lambda p: (p.first, p.second))


def compose(g: OpenGame, h: OpenGame) -> OpenGame:
    """Sequential play: ``g`` first, then ``h``."""
    if g.cod != h.dom:
        raise CompositionError(
            f"cannot compose: codomain {g.cod!r} of {g.label or 'first game'} "
            f"does not match domain {h.dom!r} of {h.label or 'second game'}"
        )
    profiles, unpair = _pairing(g, h)
    gp, gc, ge = g.play, g.coplay, g.equilibrium
    hp, hc, he = h.play, h.coplay, h.equilibrium
    g_free, h_free = g.always_equilibrium, h.always_equilibrium

    def play(p, x):
        s, t = unpair(p)
        return hp(t, gp(s, x))

    def coplay(p, x, q):
        s, t = unpair(p)
        return gc(s, x, hc(t, gp(s, x), q))

    def equilibrium(x, k, p):
        s, t = unpair(p)
        if not g_free:
            def k_t(y):
                return hc(t, y, k(hp(t, y)))

            if not ge(x, k_t, s):
                return False
        return h_free or he(gp(s, x), k, t)

    return OpenGame(
        g.dom,
        h.cod,
        profiles,
        play,
        coplay,
        equilibrium,
        always_equilibrium=g_free and h_free,
        label=f"({g.label} ; {h.label})" if g.label and h.label else "",
    )


def tensor(g: OpenGame, h: OpenGame) -> OpenGame:
    """Simultaneous play of ``g`` and ``h`` side by side."""
    profiles, unpair = _pairing(g, h)
    split_x = splitter(g.dom.fwd, h.dom.fwd)
    join_y = joiner(g.cod.fwd, h.cod.fwd)
    split_r = splitter(g.cod.bwd, h.cod.bwd)
    join_s = joiner(g.dom.bwd, h.dom.bwd)
    gp, gc, ge = g.play, g.coplay, g.equilibrium
    hp, hc, he = h.play, h.coplay, h.equilibrium
    g_free, h_free = g.always_equilibrium, h.always_equilibrium

    def play(p, x):
        s, t = unpair(p)
        x1, x2 = split_x(x)
        return join_y(gp(s, x1), hp(t, x2))

    def coplay(p, x, r):
        s, t = unpair(p)
        x1, x2 = split_x(x)
        r1, r2 = split_r(r)
        return join_s(gc(s, x1, r1), hc(t, x2, r2))

    def equilibrium(x, k, p):
        s, t = unpair(p)
        x1, x2 = split_x(x)
        if not g_free:
            y2 = hp(t, x2)

            def k_g(y):
                return split_r(k(join_y(y, y2)))[0]

            if not ge(x1, k_g, s):
                return False
        if not h_free:
            y1 = gp(s, x1)

            def k_h(y):
                return split_r(k(join_y(y1, y)))[1]

            if not he(x2, k_h, t):
                return False
        return True

    return OpenGame(
        tensor_objects(g.dom, h.dom),
        tensor_objects(g.cod, h.cod),
        profiles,
        play,
        coplay,
        equilibrium,
        always_equilibrium=g_free and h_free,
        label=f"({g.label} ⊗ {h.label})" if g.label and h.label else "",
    )


def tensor_all(games: Sequence[OpenGame]) -> OpenGame:
    if not games:
        return identity(I)
    out = games[0]
    for g in games[1:]:
        out = tensor(out, g)
    return out


def compose_all(*games: OpenGame) -> OpenGame:
    out = games[0]
    for g in games[1:]:
        out = compose(out, g)
    return out


def swap(a: GameObject, b: GameObject) -> OpenGame:
    """Symmetry ``A ⊗ B -> B ⊗ A``."""
    split_x = splitter(a.fwd, b.fwd)
    join_y = joiner(b.fwd, a.fwd)
    split_r = splitter(b.bwd, a.bwd)
    join_s = joiner(a.bwd, b.bwd)

    def play(x):
        x1, x2 = split_x(x)
        return join_y(x2, x1)

    def coplay(x, r):
        r2, r1 = split_r(r)
        return join_s(r1, r2)

    return zero_player(tensor_objects(a, b), tensor_objects(b, a), play, coplay, label="swap")


def counit_r(a: GameObject) -> OpenGame:
    """``A ⊗ A* -> I``: the forward value on each side is fed back to the other."""
    split_x = splitter(a.fwd, a.bwd)
    join_s = joiner(a.bwd, a.fwd)

    def coplay(x, r):
        fwd, bwd = split_x(x)
        return join_s(bwd, fwd)

    return zero_player(tensor_objects(a, dual(a)), I, lambda x: STAR, coplay, label="counit_r")


def counit_l(a: GameObject) -> OpenGame:
    """``A* ⊗ A -> I``."""
    split_x = splitter(a.bwd, a.fwd)
    join_s = joiner(a.fwd, a.bwd)

    def coplay(x, r):
        bwd, fwd = split_x(x)
        return join_s(fwd, bwd)

    return zero_player(tensor_objects(dual(a), a), I, lambda x: STAR, coplay, label="counit_l")


def _as_function(f: Callable | Mapping) -> Callable:
    if isinstance(f, Mapping) and not isinstance(f, Table):
        return f.__getitem__
    return f


def lift_cov(f: Callable | Mapping, source: Carrier, target: Carrier, label: str = "") -> OpenGame:
    """Covariant lifting ``overline(source) -> overline(target)`` of a total map."""
    fn = _as_function(f)
    return zero_player(
        overline(source), overline(target), fn, lambda x, r: STAR, label=label or "lift"
    )


def lift_contra(f: Callable | Mapping, source: Carrier, target: Carrier, label: str = "") -> OpenGame:
    """Contravariant lifting ``underline(target) -> underline(source)`` of ``f : source -> target``."""
    fn = _as_function(f)
    return zero_player(
        underline(target), underline(source), lambda x: STAR, lambda x, r: fn(r),
        label=label or "colift",
    )


def relabel(game: OpenGame, rename: Callable[[Any], Any], label: str | None = None) -> OpenGame:
    """The same game with strategy profiles renamed by an injective map."""
    forward = {s: rename(s) for s in game.strategies}
    backward = {v: s for s, v in forward.items()}
    if len(backward) != len(forward):
        raise ValueError("strategy renaming is not injective")
    gp, gc, ge = game.play, game.coplay, game.equilibrium
    return OpenGame(
        game.dom,
        game.cod,
        tuple(forward.values()),
        lambda s, x: gp(backward[s], x),
        lambda s, x, r: gc(backward[s], x, r),
        lambda h, k, s: ge(h, k, backward[s]),
        always_equilibrium=game.always_equilibrium,
        label=game.label if label is None else label,
    )


def flatten_strategies(game: OpenGame, label: str | None = None) -> OpenGame:
    """Relabel profiles by their leaf strategies; a single leaf is left unboxed."""

    def rename(p):
        leaves = flatten_profile(p)
        if not leaves:
            return TRIVIAL
        return leaves[0] if len(leaves) == 1 else leaves

    return relabel(game, rename, label)


@dataclass(frozen=True)
class ClosedGameResult:
    strategies: tuple
    equilibria: tuple

    def __post_init__(self):
        members = set(self.strategies)
        if any(e not in members for e in self.equilibria):
            raise ValueError("equilibria must be a subset of the strategy profiles")


def _trivial_continuation(y):
    return STAR


def equilibria_closed(game: OpenGame) -> ClosedGameResult:
    if not game.is_closed:
        raise NotClosedError(f"expected a closed game I -> I, got {game.dom!r} -> {game.cod!r}")
    eq = game.equilibria(STAR, _trivial_continuation)
    return ClosedGameResult(tuple(game.strategies), tuple(eq))


# Extensional comparison


def continuations(
    cod: GameObject,
    payoff_sample: Sequence[Any] = (0, 1),
    limit: int = 4096,
    rng: random.Random | None = None,
) -> list[Table]:
    """All continuations ``cod.fwd -> cod.bwd`` as tables, or ``limit`` random ones."""
    ys = cod.fwd.elements(payoff_sample)
    rs = cod.bwd.elements(payoff_sample)
    total = len(rs) ** len(ys)
    if total <= limit:
        return all_tables(ys, rs)
    rng = rng or random.Random(0)
    return [Table((y, rng.choice(rs)) for y in ys) for _ in range(limit)]


def game_difference(
    g: OpenGame,
    h: OpenGame,
    *,
    strategy_map: Callable[[Any], Any] | None = None,
    payoff_sample: Sequence[Any] = (0, 1),
    max_continuations: int = 4096,
    seed: int = 0,
) -> str | None:
    """First observable difference between two games, or ``None`` if they agree.

    Strategies of ``g`` are matched to those of ``h`` through ``strategy_map``;
    by default profiles are matched on their flattened leaf strategies.
    Infinite payoff carriers are replaced by ``payoff_sample``.
    """
    if g.dom != h.dom:
        return f"domains differ: {g.dom!r} vs {h.dom!r}"
    if g.cod != h.cod:
        return f"codomains differ: {g.cod!r} vs {h.cod!r}"
    if len(g.strategies) != len(h.strategies):
        return f"strategy counts differ: {len(g.strategies)} vs {len(h.strategies)}"
    if strategy_map is None:
        index = {flatten_profile(t): t for t in h.strategies}
        if len(index) != len(h.strategies):
            return "second game has strategies with colliding leaves"

        def strategy_map(s):
            return index.get(flatten_profile(s))

    pairs = []
    targets = set(h.strategies)
    for s in g.strategies:
        t = strategy_map(s)
        if t is None or t not in targets:
            return f"strategy {s!r} has no counterpart"
        pairs.append((s, t))

    xs = g.dom.fwd.elements(payoff_sample)
    rs = g.cod.bwd.elements(payoff_sample)
    for s, t in pairs:
        for x in xs:
            if g.play(s, x) != h.play(t, x):
                return f"play differs at strategy {s!r}, input {format_element(x)}"
            for r in rs:
                if g.coplay(s, x, r) != h.coplay(t, x, r):
                    return (
                        f"coplay differs at strategy {s!r}, input {format_element(x)}, "
                        f"feedback {format_element(r)}"
                    )
    ks = continuations(g.cod, payoff_sample, max_continuations, random.Random(seed))
    for x in xs:
        for k in ks:
            for s, t in pairs:
                if bool(g.equilibrium(x, k, s)) != bool(h.equilibrium(x, k, t)):
                    return (
                        f"equilibrium differs at strategy {s!r}, history {format_element(x)}, "
                        f"continuation {k!r}"
                    )
    return None


def extensionally_equal(g: OpenGame, h: OpenGame, **kwargs) -> bool:
    return game_difference(g, h, **kwargs) is None


def dump(
    game: OpenGame,
    payoff_sample: Sequence[Any] = (0, 1),
    max_continuations: int = 64,
) -> str:
    """Deterministic text rendering of a game's objects and tables."""
    lines = [
        f"game {game.label or '-'}",
        f"dom {game.dom!r}",
        f"cod {game.cod!r}",
        f"strategies {len(game.strategies)}",
    ]
    lines += [f"  {s!r}" for s in game.strategies]
    xs = game.dom.fwd.elements(payoff_sample)
    rs = game.cod.bwd.elements(payoff_sample)
    lines.append("play")
    for s in game.strategies:
        for x in xs:
            lines.append(f"  {s!r} {format_element(x)} -> {format_element(game.play(s, x))}")
    lines.append("coplay")
    for s in game.strategies:
        for x in xs:
            for r in rs:
                out = game.coplay(s, x, r)
                lines.append(
                    f"  {s!r} {format_element(x)} {format_element(r)} -> {format_element(out)}"
                )
    ys = game.cod.fwd.elements(payoff_sample)
    if len(rs) ** len(ys) > max_continuations:
        lines.append(f"equilibrium omitted ({len(rs)}^{len(ys)} continuations)")
        return "\n".join(lines) + "\n"
    lines.append("equilibrium")
    for x in xs:
        for k in all_tables(ys, rs):
            eq = game.equilibria(x, k)
            lines.append(f"  {format_element(x)} {k!r} -> [{', '.join(map(repr, eq))}]")
    return "\n".join(lines) + "\n"
