import pytest

from monad_forge.poset import build_poset


@pytest.fixture
def flat_bool():
    """b below two incomparable truth values."""
    return build_poset(["b", "t", "f"], [("b", "t"), ("b", "f")])


@pytest.fixture
def discrete2():
    return build_poset(["x", "y"], [])


@pytest.fixture
def chain2():
    return build_poset(["0", "1"], [("0", "1")])


@pytest.fixture
def chain3():
    return build_poset(["0", "1", "2"], [("0", "1"), ("1", "2")])


@pytest.fixture
def diamond():
    return build_poset(["bot", "l", "r", "top"],
                       [("bot", "l"), ("bot", "r"), ("l", "top"), ("r", "top")])


@pytest.fixture
def antichain4():
    return build_poset(["a", "b", "c", "d"], [])
