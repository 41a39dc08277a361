"""Game-theoretic building blocks assembled from the open-game primitives.

Agents are the only games here defined directly; everything else is wired
from agents, liftings, identities and counits, so the equilibrium sets that
come out are computed compositionally rather than written down.
"""

from __future__ import annotations

from dataclasses import replace
from typing import Any, Callable, Iterable, Sequence

from .games import (
    GameConstructionError,
    GameObject,
    OpenGame,
    all_tables,
    compose,
    counit_r,
    flatten_profile,
    flatten_strategies,
    identity,
    lift_cov,
    overline,
    relabel,
    tensor,
    tensor_all,
    underline,
)
from .sets import (
    ONE,
    PAYOFF,
    STAR,
    Carrier,
    FinSet,
    as_payoff,
    assemble,
    components,
    joiner,
    product,
    splitter,
)


def as_carrier(values: Carrier | Iterable[Any]) -> Carrier:
    if isinstance(values, Carrier):
        return values
    return FinSet(values)


def agent(observations: Carrier | Iterable[Any], choices: Carrier | Iterable[Any], label: str = "agent") -> OpenGame:
    """A single decision ``(X, 1) -> (Y, R)`` maximising the payoff returned by its continuation."""
    X = as_carrier(observations)
    Y = as_carrier(choices)
    ys = Y.elements()
    if not ys:
        raise GameConstructionError("an agent needs a nonempty choice set")

    def equilibrium(h, k, sigma):
        best = max(k(y) for y in ys)
        return k(sigma(h)) == best

    return OpenGame(
        overline(X),
        GameObject(Y, PAYOFF),
        tuple(all_tables(X.elements(), ys)),
        lambda sigma, x: sigma(x),
        lambda sigma, x, r: STAR,
        equilibrium,
        label=label,
    )


def _agent_sets(a: OpenGame) -> tuple[Carrier, Carrier]:
    if a.dom.bwd != ONE or a.cod.bwd != PAYOFF:
        raise GameConstructionError(f"expected an agent (X, 1) -> (Y, R), got {a!r}")
    return a.dom.fwd, a.cod.fwd


def copy_map(x: Carrier) -> OpenGame:
    """The lifted diagonal ``overline X -> overline(X x X)``."""
    join = joiner(x, x)
    return lift_cov(lambda v: join(v, v), x, product(x, x), label="copy")


def copy_gadget(a: OpenGame) -> OpenGame:
    """``(X, 1) -> (X x Y, R)``: forwards the observation alongside the agent's choice."""
    X, _ = _agent_sets(a)
    wired = compose(copy_map(X), tensor(identity(overline(X)), a))
    return flatten_strategies(wired, label=f"{a.label}^copy")


def quotient_observe(f: Callable[[Any], Any], observed: Carrier, a2: OpenGame) -> OpenGame:
    """Like :func:`copy_gadget`, but the agent only sees ``f`` of the copied value.

    ``a2`` observes ``Z`` where ``f : observed -> Z``; the result has type
    ``(observed, 1) -> (observed x Y, R)``.
    """
    Z, _ = _agent_sets(a2)
    X = as_carrier(observed)
    view = compose(lift_cov(f, X, Z, label="observe"), a2)
    wired = compose(copy_map(X), tensor(identity(overline(X)), view))
    return flatten_strategies(wired, label=f"{a2.label}^observe")


def _payoff_bend(carrier: Carrier, payoff: Callable[[Any], Any], n: int) -> OpenGame:
    """Lift ``payoff : carrier -> R^n`` and bend its output back as feedback."""
    rs = product(*([PAYOFF] * n))
    lifted = lift_cov(payoff, carrier, rs, label="payoff")
    return compose(tensor(lifted, identity(underline(rs))), counit_r(overline(rs)))


def _point_strategies(profile: Any) -> tuple:
    return tuple(t(STAR) for t in flatten_profile(profile))


def simultaneous_open(choice_sets: Sequence[Carrier | Iterable[Any]]) -> OpenGame:
    """Tensor of one-shot agents ``I -> (prod X_i, R^n)``; profiles are choice tuples."""
    agents = [agent(ONE, xs, label=f"player{i + 1}") for i, xs in enumerate(choice_sets)]
    return relabel(tensor_all(agents), _point_strategies, label="simultaneous")


def simultaneous_game(
    choice_sets: Sequence[Carrier | Iterable[Any]],
    payoff: Callable[[tuple], Sequence[Any]],
) -> OpenGame:
    """Closed ``n``-player simultaneous game with the given payoff function.

    ``payoff`` takes a tuple of choices and returns a tuple of ``n`` payoffs.
    """
    carriers = [as_carrier(xs) for xs in choice_sets]
    n = len(carriers)
    rs = [PAYOFF] * n

    def lifted(x):
        values = payoff(components(carriers, x))
        return assemble(rs, tuple(as_payoff(v) for v in values))

    agents = tensor_all([agent(ONE, c, label=f"player{i + 1}") for i, c in enumerate(carriers)])
    closed = compose(agents, _payoff_bend(product(*carriers), lifted, n))
    return relabel(closed, _point_strategies, label="simultaneous")


def bimatrix(
    rows: Carrier | Iterable[Any],
    cols: Carrier | Iterable[Any],
    payoff: Callable[[Any, Any], tuple[Any, Any]],
) -> OpenGame:
    """Closed two-player game; profiles are ``(x, y)`` pairs."""
    X, Y = as_carrier(rows), as_carrier(cols)
    if not X.elements() or not Y.elements():
        raise GameConstructionError("bimatrix games need nonempty choice sets")
    game = simultaneous_game([X, Y], lambda xy: payoff(*xy))
    return replace(game, label="bimatrix")


def sequential_game(
    first: OpenGame,
    second: OpenGame,
    payoff: Callable[[Any, Any], tuple[Any, Any]],
) -> OpenGame:
    """Closed two-stage game.

    ``first`` is an agent ``I -> (X, R)``; ``second`` has type ``(X, 1) -> (X x Y, R)``
    (a copy gadget, or an imperfect-observation variant from :func:`quotient_observe`).
    Profiles are ``(first strategy, second strategy)``.
    """
    X = first.cod.fwd
    XY = second.cod.fwd
    split = splitter(X, product(*XY.leaves[X.arity:]))

    def lifted(v):
        x, y = split(v)
        r1, r2 = payoff(x, y)
        # feedback order is (second player, first player)
        return (as_payoff(r2), as_payoff(r1))

    stage = compose(first, tensor(second, identity(underline(PAYOFF))))
    closed = compose(stage, _payoff_bend(XY, lifted, 2))
    return flatten_strategies(closed, label="sequential")


def perfect_information_game(
    first_choices: Iterable[Any],
    second_choices: Iterable[Any],
    payoff: Callable[[Any, Any], tuple[Any, Any]],
) -> OpenGame:
    X = as_carrier(first_choices)
    a1 = agent(ONE, X, label="first")
    a2 = agent(X, second_choices, label="second")
    return sequential_game(a1, copy_gadget(a2), payoff)
