import pytest

from helpers import make_scenario
from langgames.semantics import bring, cut_action


@pytest.fixture
def builder():
    """The reference builder world: exactly one order is answered by B(s2)."""
    return make_scenario(best={"o1": bring("s2"), "o2": bring("s1"), "o3": cut_action("p2")})
