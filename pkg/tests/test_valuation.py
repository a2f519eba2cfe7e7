from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monad_forge.errors import (
    CarrierMismatchError,
    KindError,
    NonMonotoneError,
    TableError,
    UnknownPointError,
)
from monad_forge.poset import PointSet, build_poset
from monad_forge.valuation import (
    combine_kinds,
    eval_open,
    flatten,
    integrate,
    integrate_staircase,
    monotone_grid,
    monotone_map,
    open_table,
    pushforward,
    simple_valuation,
    stochastic_leq,
    unit_valuation,
    valuation,
    valuation_from_open_table,
)


def test_unit_valuation(flat_bool):
    d = unit_valuation(flat_bool, "t")
    assert d.kind == "prob"
    assert eval_open(d, PointSet(flat_bool, frozenset({"t"}), "upper")) == 1
    assert eval_open(d, PointSet(flat_bool, frozenset({"f"}), "upper")) == 0


def test_unit_valuation_bottom_sees_only_whole_space(flat_bool):
    d = unit_valuation(flat_bool, "b")
    for u in flat_bool.upper_sets:
        expected = 1 if "b" in u else 0
        assert eval_open(d, PointSet(flat_bool, u, "upper")) == expected
        assert ("b" in u) == (u == frozenset(flat_bool.elements))


def test_unit_unknown_point(discrete2):
    with pytest.raises(UnknownPointError):
        unit_valuation(discrete2, "z")


def test_eval_open(flat_bool):
    nu = valuation(flat_bool, {"t": F(1, 2), "b": F(1, 2)}, "prob")
    assert eval_open(nu, PointSet(flat_bool, frozenset({"t"}), "upper")) == F(1, 2)
    assert eval_open(nu, PointSet(flat_bool, frozenset(), "upper")) == 0


def test_eval_open_rejects_non_upper(flat_bool):
    with pytest.raises(Exception):
        eval_open(unit_valuation(flat_bool, "t"),
                  PointSet(flat_bool, frozenset({"b"}), "plain"))


def test_modularity_instance(flat_bool):
    nu = valuation(flat_bool, {"t": F(1, 3), "f": F(1, 3), "b": F(1, 3)}, "prob")
    u = PointSet(flat_bool, frozenset({"t"}), "upper")
    v = PointSet(flat_bool, frozenset({"f"}), "upper")
    uv = PointSet(flat_bool, frozenset({"t", "f"}), "upper")
    empty = PointSet(flat_bool, frozenset(), "upper")
    assert eval_open(nu, u) + eval_open(nu, v) == eval_open(nu, uv) + eval_open(nu, empty)


def test_integrate(flat_bool):
    nu = valuation(flat_bool, {"t": F(1, 2), "b": F(1, 2)}, "prob")
    h = monotone_map(flat_bool, {"b": 0, "t": 1, "f": 0})
    assert integrate(nu, h) == F(1, 2)


def test_integrate_dirac(flat_bool):
    h = monotone_map(flat_bool, {"b": 0, "t": 2, "f": 1})
    assert integrate(unit_valuation(flat_bool, "t"), h) == 2


def test_indicator_integral_is_open_mass(flat_bool):
    import random

    from monad_forge.valuation import indicator

    rng = random.Random(5)
    for _ in range(30):
        weights = {x: F(rng.randint(0, 4), 4) for x in flat_bool.elements}
        nu = valuation(flat_bool, weights, "general")
        for u in flat_bool.upper_sets:
            ps = PointSet(flat_bool, u, "upper")
            assert integrate(nu, indicator(flat_bool, ps)) == eval_open(nu, ps)


def test_stochastic_order(flat_bool):
    assert stochastic_leq(unit_valuation(flat_bool, "b"), unit_valuation(flat_bool, "t"))
    assert not stochastic_leq(unit_valuation(flat_bool, "t"), unit_valuation(flat_bool, "f"))
    nu = valuation(flat_bool, {"t": F(1, 2)}, "sub")
    assert stochastic_leq(nu, nu)


def test_stochastic_order_matches_integral_test():
    # order holds iff every monotone grid map integrates monotonically
    import itertools
    import random

    rng = random.Random(9)
    for p in [build_poset(["a", "b"], [("a", "b")]),
              build_poset(["a", "b", "c"], [("a", "b")]),
              build_poset(["a", "b", "c"], [])]:
        grid = monotone_grid(p, 3)
        for _ in range(25):
            nu1 = valuation(p, {x: F(rng.randint(0, 3), 3) for x in p.elements}, "general")
            nu2 = valuation(p, {x: F(rng.randint(0, 3), 3) for x in p.elements}, "general")
            want = all(integrate(nu1, h) <= integrate(nu2, h) for h in grid)
            assert stochastic_leq(nu1, nu2) == want


def test_pushforward(flat_bool, chain2):
    f = {"b": "0", "t": "1", "f": "1"}
    nu = valuation(flat_bool, {"b": F(1, 4), "t": F(1, 4), "f": F(1, 2)}, "prob")
    out = pushforward(f, nu, chain2)
    assert out == valuation(chain2, {"0": F(1, 4), "1": F(3, 4)}, "prob")


def test_pushforward_identity(flat_bool):
    nu = valuation(flat_bool, {"t": F(1, 2)}, "sub")
    assert pushforward({x: x for x in flat_bool.elements}, nu, flat_bool) == nu


def test_pushforward_rejects_non_monotone(chain2):
    nu = unit_valuation(chain2, "0")
    with pytest.raises(NonMonotoneError):
        pushforward({"0": "1", "1": "0"}, nu, chain2)


def test_pushforward_change_of_variable(flat_bool, chain2):
    import random

    rng = random.Random(3)
    f = {"b": "0", "t": "1", "f": "1"}
    for _ in range(20):
        nu = valuation(flat_bool, {x: F(rng.randint(0, 3), 4) for x in flat_bool.elements},
                       "general")
        for h_vals in [(0, 1), (0, 2), (1, 1), (0, 0)]:
            h = monotone_map(chain2, dict(zip(chain2.elements, h_vals)))
            comp = monotone_map(flat_bool, {x: h(f[x]) for x in flat_bool.elements})
            assert integrate(pushforward(f, nu, chain2), h) == integrate(nu, comp)


def test_flatten_unit_law(flat_bool):
    nu = valuation(flat_bool, {"t": F(1, 2), "b": F(1, 2)}, "prob")
    assert flatten(simple_valuation([(F(1), nu)], "prob")) == nu


def test_flatten_example(flat_bool):
    xi = simple_valuation([(F(1, 2), unit_valuation(flat_bool, "t")),
                           (F(1, 2), unit_valuation(flat_bool, "f"))], "prob")
    assert flatten(xi) == valuation(flat_bool, {"t": F(1, 2), "f": F(1, 2)}, "prob")


def test_flatten_is_linear_under_integration(flat_bool):
    import random

    rng = random.Random(11)
    for _ in range(25):
        nus = [valuation(flat_bool, {x: F(rng.randint(0, 2), 3) for x in flat_bool.elements},
                         "general") for _ in range(2)]
        a = F(rng.randint(0, 4), 4)
        xi = simple_valuation([(a, nus[0]), (1 - a, nus[1])], "prob")
        h = monotone_map(flat_bool, {"b": 0, "t": rng.randint(0, 3), "f": rng.randint(0, 3)})
        assert integrate(flatten(xi), h) == a * integrate(nus[0], h) + (1 - a) * integrate(nus[1], h)


def test_kind_table():
    assert combine_kinds("prob", "prob") == "prob"
    assert combine_kinds("sub", "sub") == "sub"
    assert combine_kinds("prob", "sub") == "general"
    assert combine_kinds("general", "prob") == "general"


def test_kind_violations(flat_bool):
    with pytest.raises(KindError):
        valuation(flat_bool, {"t": F(9, 8)}, "prob")
    with pytest.raises(KindError):
        valuation(flat_bool, {"t": F(9, 8)}, "sub")
    with pytest.raises(KindError):
        valuation(flat_bool, {"t": F(-1, 8)})


def test_open_table_round_trip(flat_bool):
    nu = valuation(flat_bool, {"t": F(1, 2), "b": F(1, 3)}, "sub")
    assert valuation_from_open_table(flat_bool, open_table(nu), "sub") == nu


def test_table_of_dirac(flat_bool):
    table = open_table(unit_valuation(flat_bool, "t"))
    got = valuation_from_open_table(flat_bool, table, "prob")
    assert got.weights == ((("t"), F(1)),)


def test_zero_table(flat_bool):
    table = {u: F(0) for u in flat_bool.upper_sets}
    assert valuation_from_open_table(flat_bool, table).weights == ()


def test_table_modularity_violation(flat_bool):
    table = {u: F(1) for u in flat_bool.upper_sets}
    table[frozenset()] = F(0)
    with pytest.raises(TableError, match="modularity"):
        valuation_from_open_table(flat_bool, table)


def test_integrate_matches_staircase_everywhere():
    import random

    rng = random.Random(17)
    posets = [build_poset(["a"], []), build_poset(["a", "b"], [("a", "b")]),
              build_poset(["a", "b", "c"], [("a", "c"), ("b", "c")])]
    for p in posets:
        for _ in range(40):
            nu = valuation(p, {x: F(rng.randint(0, 5), rng.randint(1, 4))
                               for x in p.elements}, "general")
            hvals = {}
            for x in p.elements:
                lo = max((hvals[y] for y in p.elements if y in hvals and p.le(y, x)),
                         default=F(0))
                hvals[x] = lo + F(rng.randint(0, 5), rng.randint(1, 3))
            h = monotone_map(p, hvals)
            assert integrate(nu, h) == integrate_staircase(nu, h)


def test_carrier_mismatch(flat_bool, discrete2):
    with pytest.raises(CarrierMismatchError):
        integrate(unit_valuation(flat_bool, "t"),
                  monotone_map(discrete2, {"x": 0, "y": 0}))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(1, 4)), min_size=3, max_size=3))
def test_monotone_map_requires_monotonicity(vals):
    p = build_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    fr = [F(n, d) for n, d in vals]
    if fr[0] <= fr[1] <= fr[2]:
        monotone_map(p, dict(zip(p.elements, fr)))
    else:
        with pytest.raises(NonMonotoneError):
            monotone_map(p, dict(zip(p.elements, fr)))
