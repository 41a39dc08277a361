import random
import zlib
from fractions import Fraction
from pathlib import Path

from langgames.games import GameObject, OpenGame
from langgames.semantics import Scenario, action_set
from langgames.sets import FinSet

TESTS = Path(__file__).parent
GOLDEN = TESTS / "golden"
BUILDER_UNIVERSE = ("s1", "s2", "p1", "p2")


def random_carrier(rng: random.Random, prefix: str, max_size: int = 3) -> FinSet:
    return FinSet([f"{prefix}{i}" for i in range(rng.randint(1, max_size))])


def random_object(rng: random.Random, tag: str) -> GameObject:
    return GameObject(random_carrier(rng, tag + "x"), random_carrier(rng, tag + "r"))


def random_game(rng: random.Random, dom: GameObject, cod: GameObject, name: str, max_strategies: int = 4) -> OpenGame:
    """A game with random play/coplay tables and an equilibrium predicate that
    depends on the whole continuation, so composition laws are exercised fully."""
    sigma = tuple(f"{name}{i}" for i in range(rng.randint(1, max_strategies)))
    xs, ys = dom.fwd.elements(), cod.fwd.elements()
    rs, ss = cod.bwd.elements(), dom.bwd.elements()
    play = {(s, x): rng.choice(ys) for s in sigma for x in xs}
    coplay = {(s, x, r): rng.choice(ss) for s in sigma for x in xs for r in rs}
    salt = rng.getrandbits(32)

    def equilibrium(h, k, s):
        key = repr((salt, h, s, tuple(k(y) for y in ys)))
        return zlib.crc32(key.encode()) % 3 != 0

    return OpenGame(
        dom, cod, sigma,
        lambda s, x: play[s, x],
        lambda s, x, r: coplay[s, x, r],
        equilibrium,
        label=name,
    )


def make_scenario(
    *,
    universe=BUILDER_UNIVERSE,
    slabs=("s1", "s2"),
    planks=("p1", "p2"),
    large=("s2", "p2"),
    orders=("o1", "o2", "o3"),
    best=None,
    values=None,
) -> Scenario:
    """Builder scenario; ``best`` maps orders to their unique best action, or
    ``values`` gives the whole similarity table."""
    acts = action_set(universe)
    if values is None:
        best = best or {}
        values = {(o, a): Fraction(1 if best.get(o) == a else 0) for o in orders for a in acts}
    return Scenario(
        tuple(universe), frozenset(slabs), frozenset(planks), frozenset(large), tuple(orders), values
    )


def random_scenario(rng: random.Random, max_universe: int = 4, max_orders: int = 4, unique: bool = True) -> Scenario:
    n = rng.randint(1, max_universe)
    universe = tuple(f"u{i}" for i in range(n))
    pick = lambda: tuple(x for x in universe if rng.random() < 0.5)  # noqa: E731
    orders = tuple(f"o{i}" for i in range(rng.randint(1, max_orders)))
    acts = action_set(universe)
    values = {}
    for o in orders:
        if unique:
            ranks = list(range(len(acts)))
            rng.shuffle(ranks)
        else:
            ranks = [rng.randint(0, 2) for _ in acts]
        for a, v in zip(acts, ranks):
            values[o, a] = Fraction(v, rng.randint(1, 3)) if not unique else Fraction(v)
    return make_scenario(universe=universe, slabs=pick(), planks=pick(), large=pick(), orders=orders, values=values)


LAWS = ("left identity", "right identity", "associativity", "interchange",
        "covariant lifting functoriality", "contravariant lifting functoriality", "lifting duality")


def _random_map(rng: random.Random, source: FinSet, target: FinSet) -> dict:
    return {x: rng.choice(target.elements()) for x in source}


def check_laws(seed: int, max_continuations: int = 64) -> dict[str, str | None]:
    """Run every category-law comparison on one random instance; ``None`` means the law held."""
    from langgames.games import (
        compose, counit_r, dual, flatten_profile, game_difference, identity,
        lift_contra, lift_cov, overline, tensor,
    )

    rng = random.Random(seed)
    a, b, c, d = (random_object(rng, t) for t in "abcd")
    a2, b2, c2 = (random_object(rng, t) for t in ("a'", "b'", "c'"))
    g, h, k = random_game(rng, a, b, "g"), random_game(rng, b, c, "h"), random_game(rng, c, d, "k")
    g2, h2 = random_game(rng, a2, b2, "G"), random_game(rng, b2, c2, "H")
    opts = dict(max_continuations=max_continuations, seed=seed)
    out: dict[str, str | None] = {}

    out["left identity"] = game_difference(compose(identity(a), g), g, **opts)
    out["right identity"] = game_difference(compose(g, identity(b)), g, **opts)
    out["associativity"] = game_difference(compose(compose(g, h), k), compose(g, compose(h, k)), **opts)

    lhs = tensor(compose(g, h), compose(g2, h2))
    rhs = compose(tensor(g, g2), tensor(h, h2))
    index = {flatten_profile(p): p for p in rhs.strategies}

    def regroup(p):
        s, t, s2, t2 = flatten_profile(p)
        return index[(s, s2, t, t2)]

    out["interchange"] = game_difference(lhs, rhs, strategy_map=regroup, **opts)

    sizes = [FinSet([f"{n}{i}" for i in range(rng.randint(1, 4))]) for n in "xyz"]
    x, y, z = sizes
    f, f2 = _random_map(rng, x, y), _random_map(rng, y, z)
    both = {v: f2[f[v]] for v in x}
    out["covariant lifting functoriality"] = game_difference(
        lift_cov(both, x, z), compose(lift_cov(f, x, y), lift_cov(f2, y, z)), **opts
    )
    out["contravariant lifting functoriality"] = game_difference(
        lift_contra(both, x, z), compose(lift_contra(f2, y, z), lift_contra(f, x, y)), **opts
    )
    ox, oy = overline(x), overline(y)
    bent_cov = compose(tensor(lift_cov(f, x, y), identity(dual(oy))), counit_r(oy))
    bent_contra = compose(tensor(identity(ox), lift_contra(f, x, y)), counit_r(ox))
    out["lifting duality"] = game_difference(bent_cov, bent_contra, **opts)
    return out


def random_normal_form(rng: random.Random, max_players: int = 3, max_choices: int = 3):
    """Choice sets and an integer payoff table with values in [-5, 5]."""
    import itertools

    n = rng.randint(1, max_players)
    sets = [tuple(f"p{i}c{j}" for j in range(rng.randint(1, max_choices))) for i in range(n)]
    table = {
        profile: tuple(Fraction(rng.randint(-5, 5)) for _ in range(n))
        for profile in itertools.product(*sets)
    }
    return sets, table


def copy_gadget_mismatches(nx: int, ny: int, values=(0, 1, 2)) -> tuple[int, int]:
    """Compare the copy gadget's equilibria with the argmax formula for every
    tabulated continuation ``X x Y -> values``; returns (cases, mismatches)."""
    import itertools

    from langgames.gadgets import agent, copy_gadget
    from langgames.games import Table

    xs = [f"x{i}" for i in range(nx)]
    ys = [f"y{i}" for i in range(ny)]
    gadget = copy_gadget(agent(xs, ys))
    cells = list(itertools.product(xs, ys))
    cases = mismatches = 0
    for vals in itertools.product(values, repeat=len(cells)):
        k = Table(zip(cells, (Fraction(v) for v in vals)))
        for h in xs:
            best = max(k[h, y] for y in ys)
            expected = [s for s in gadget.strategies if k[h, s(h)] == best]
            cases += 1
            if gadget.equilibria(h, k) != expected:
                mismatches += 1
    return cases, mismatches


def sentence_formula_mismatches(scenario, actions, continuations, sentence="bring large slabs") -> tuple[int, list]:
    """Check play and the equilibrium set of the interpreted sentence against
    ``{o | k(o) = B(x), x in S & L}``; returns (cases checked, failures)."""
    from langgames.grammar import parse
    from langgames.semantics import builder_language_game, interpret
    from langgames.sets import STAR

    (d,) = parse(scenario.grammar, sentence)
    game = interpret(d, builder_language_game(scenario, actions))
    failures = []
    if tuple(game.strategies) != tuple(scenario.orders):
        failures.append(("strategies", game.strategies))
    for o in scenario.orders:
        if game.play(o, STAR) != o:
            failures.append(("play", o))
    good = scenario.slabs & scenario.large
    cases = 0
    for k in continuations:
        expected = [o for o in scenario.orders if k(o).kind == "B" and k(o).target in good]
        got = game.equilibria(STAR, k)
        cases += 1
        if got != expected:
            failures.append(("equilibrium", k, got, expected))
    return cases, failures
