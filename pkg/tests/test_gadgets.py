import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import copy_gadget_mismatches, random_normal_form
from langgames.gadgets import (
    agent,
    bimatrix,
    copy_gadget,
    perfect_information_game,
    quotient_observe,
    sequential_game,
    simultaneous_game,
)
from langgames.games import GameConstructionError, Table, all_tables, equilibria_closed, game_difference
from langgames.oracle import NormalFormGame, nash_pure
from langgames.sets import ONE, STAR

PD = {("C", "C"): (2, 2), ("C", "D"): (0, 3), ("D", "C"): (3, 0), ("D", "D"): (1, 1)}
PENNIES = {("H", "H"): (1, -1), ("H", "T"): (-1, 1), ("T", "H"): (-1, 1), ("T", "T"): (1, -1)}


def test_agent_unique_argmax():
    a = agent(ONE, ["a", "b"])
    k = Table([("a", Fraction(1)), ("b", Fraction(0))])
    assert [s(STAR) for s in a.equilibria(STAR, k)] == ["a"]


def test_agent_constant_payoff_accepts_every_strategy():
    a = agent(["x1", "x2"], ["a", "b"])
    k = Table([("a", Fraction(0)), ("b", Fraction(0))])
    assert len(a.equilibria("x1", k)) == 4


def test_agent_needs_choices():
    with pytest.raises(GameConstructionError):
        agent(ONE, [])


def test_copy_gadget_play_and_equilibria():
    g = copy_gadget(agent(["x1", "x2"], ["a", "b"]))
    sigma = Table([("x1", "b"), ("x2", "a")])
    assert g.play(sigma, "x1") == ("x1", "b")
    k = Table([(("x1", "a"), 1), (("x1", "b"), 0), (("x2", "a"), 0), (("x2", "b"), 1)])
    eq = g.equilibria("x1", k)
    assert sorted(s("x1") for s in eq) == ["a", "a"]
    assert {s("x2") for s in eq} == {"a", "b"}


def test_copy_gadget_formula_small_exhaustive():
    for nx, ny in [(1, 2), (2, 2), (2, 3)]:
        cases, bad = copy_gadget_mismatches(nx, ny)
        assert cases > 0 and bad == 0
    g = copy_gadget(agent(["x1", "x2"], ["a", "b", "c"]))
    assert set(g.strategies) == set(all_tables(["x1", "x2"], ["a", "b", "c"]))


def test_prisoners_dilemma():
    result = equilibria_closed(bimatrix("CD", "CD", lambda x, y: PD[x, y]))
    assert len(result.strategies) == 4
    assert result.equilibria == (("D", "D"),)


def test_matching_pennies_has_no_pure_equilibrium():
    assert equilibria_closed(bimatrix("HT", "HT", lambda x, y: PENNIES[x, y])).equilibria == ()


def test_constant_bimatrix():
    result = equilibria_closed(bimatrix("ab", "xyz", lambda x, y: (0, 0)))
    assert set(result.equilibria) == set(itertools.product("ab", "xyz"))


def test_bimatrix_rejects_empty_sets():
    with pytest.raises(GameConstructionError):
        bimatrix([], "ab", lambda x, y: (0, 0))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_simultaneous_games_match_brute_force(seed):
    sets, table = random_normal_form(random.Random(seed))
    compositional = equilibria_closed(simultaneous_game(sets, lambda p: table[p]))
    assert list(compositional.equilibria) == nash_pure(NormalFormGame.from_table(sets, table))


def _sequential_as_normal_form(xs, ys, payoff):
    taus = all_tables(xs, ys)
    return NormalFormGame(
        (tuple(xs), tuple(taus)), lambda p: payoff(p[0], p[1](p[0]))
    )


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_sequential_game_is_nash_of_its_strategic_form(seed):
    rng = random.Random(seed)
    xs = [f"x{i}" for i in range(rng.randint(1, 3))]
    ys = [f"y{i}" for i in range(rng.randint(1, 3))]
    table = {(x, y): (rng.randint(-3, 3), rng.randint(-3, 3)) for x in xs for y in ys}
    payoff = lambda x, y: table[x, y]  # noqa: E731
    result = equilibria_closed(perfect_information_game(xs, ys, payoff))
    expected = nash_pure(_sequential_as_normal_form(xs, ys, payoff))
    assert {(t(STAR), tau) for t, tau in result.equilibria} == set(expected)


def test_quotient_by_identity_is_perfect_observation():
    xs, ys = ["x1", "x2"], ["a", "b"]
    direct = copy_gadget(agent(xs, ys))
    quotient = quotient_observe(lambda x: x, xs, agent(xs, ys))
    assert game_difference(direct, quotient, payoff_sample=(0, 1, 2)) is None


def test_constant_quotient_recovers_simultaneous_play():
    xs, ys = ["C", "D"], ["C", "D"]
    payoff = lambda x, y: PD[x, y]  # noqa: E731
    blind = quotient_observe(lambda x: STAR, xs, agent(ONE, ys))
    seq = equilibria_closed(sequential_game(agent(ONE, xs), blind, payoff))
    sim = equilibria_closed(bimatrix(xs, ys, payoff))
    assert {(s(STAR), t(STAR)) for s, t in seq.equilibria} == set(sim.equilibria)
    assert len(seq.strategies) == len(sim.strategies)


def test_two_class_quotient_counts_strategies():
    xs = ["x1", "x2", "x3", "x4"]
    classes = {"x1": "z1", "x2": "z1", "x3": "z2", "x4": "z2"}
    ys = ["a", "b", "c"]
    g = quotient_observe(classes.__getitem__, xs, agent(["z1", "z2"], ys))
    assert len(g.strategies) == len(ys) ** 2
