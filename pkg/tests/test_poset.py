from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monad_forge.errors import InvalidElementError, PosetError, RoleViolationError, UnknownPointError
from monad_forge.poset import (
    Lens,
    PointSet,
    QuasiLens,
    build_poset,
    enumerate_lenses,
    enumerate_posets,
    enumerate_upper_sets,
    lens_bridge,
    monotone_point_maps,
    order_closure,
    quasi_lens_condition_literal,
    validate_quasi_lens,
)


def test_build_flat_bool(flat_bool):
    assert flat_bool.le("b", "t") and flat_bool.le("b", "f")
    assert not flat_bool.le("t", "f")
    assert flat_bool.le("t", "t")


def test_build_discrete(discrete2):
    assert discrete2.leq == frozenset({("x", "x"), ("y", "y")})


def test_build_cycle_rejected():
    with pytest.raises(PosetError, match="cycle"):
        build_poset(["0", "1"], [("0", "1"), ("1", "0")])


def test_build_duplicate_rejected():
    with pytest.raises(PosetError, match="duplicate"):
        build_poset(["a", "a"], [])


def test_build_transitive_closure():
    p = build_poset(["0", "1", "2"], [("0", "1"), ("1", "2")])
    assert p.le("0", "2")


def brute_force_upper_sets(p):
    import itertools

    out = []
    for r in range(len(p.elements) + 1):
        for combo in itertools.combinations(p.elements, r):
            s = frozenset(combo)
            if all(y in s for x in s for y in p.elements if p.le(x, y)):
                out.append(s)
    return set(out)


def test_enumerate_upper_sets_discrete(discrete2):
    got = {ps.members for ps in enumerate_upper_sets(discrete2)}
    assert got == brute_force_upper_sets(discrete2)
    assert len(got) == 4


def test_enumerate_upper_sets_flat_bool(flat_bool):
    got = [ps.members for ps in enumerate_upper_sets(flat_bool)]
    assert set(got) == brute_force_upper_sets(flat_bool)
    assert len(got) == 5
    assert got == sorted(got, key=lambda s: (len(s), tuple(sorted(s))))


def test_enumerate_upper_sets_chain(chain2):
    got = {ps.members for ps in enumerate_upper_sets(chain2)}
    assert got == {frozenset(), frozenset({"1"}), frozenset({"0", "1"})}


def test_upper_sets_form_a_lattice(flat_bool):
    opens = {ps.members for ps in enumerate_upper_sets(flat_bool)}
    for u in opens:
        for v in opens:
            assert u | v in opens and u & v in opens


def test_order_closure(flat_bool):
    assert order_closure(flat_bool, {"b"}, "up").members == {"b", "t", "f"}
    assert order_closure(flat_bool, {"t"}, "down").members == {"b", "t"}
    assert order_closure(flat_bool, set(), "up").members == frozenset()
    with pytest.raises(UnknownPointError):
        order_closure(flat_bool, {"zzz"}, "up")


def test_order_closure_is_least(flat_bool):
    opens = brute_force_upper_sets(flat_bool)
    for a in [set(), {"b"}, {"t"}, {"t", "f"}, {"b", "f"}]:
        up = order_closure(flat_bool, a, "up").members
        assert up == min((u for u in opens if a <= u), key=len)


def test_validate_quasi_lens(flat_bool):
    up = lambda s: PointSet(flat_bool, frozenset(s), "upper")
    down = lambda s: PointSet(flat_bool, frozenset(s), "lower")
    assert validate_quasi_lens(flat_bool, up({"t"}), down({"b", "t"}))
    assert not validate_quasi_lens(flat_bool, up({"t"}), down({"b", "f"}))


def test_validate_quasi_lens_condition2(discrete2):
    q = PointSet(discrete2, frozenset({"x", "y"}), "upper")
    c = PointSet(discrete2, frozenset({"x"}), "lower")
    assert not validate_quasi_lens(discrete2, q, c)  # y not above x


def test_validate_quasi_lens_role_errors(flat_bool):
    not_upper = PointSet(flat_bool, frozenset({"b"}), "plain")
    lower = PointSet(flat_bool, frozenset({"b"}), "lower")
    with pytest.raises(RoleViolationError):
        validate_quasi_lens(flat_bool, not_upper, lower)


def test_quasi_lens_matches_literal_condition():
    # minimal-open reduction agrees with quantification over every open
    for p in enumerate_posets(4):
        if not p.elements:
            continue
        uppers = [u for u in p.upper_sets if u]
        lowers = [l for l in p.lower_sets if l]
        for q in uppers:
            for c in lowers:
                fast = validate_quasi_lens(
                    p, PointSet(p, q, "upper"), PointSet(p, c, "lower"))
                literal = quasi_lens_condition_literal(
                    p, PointSet(p, q, "upper"), PointSet(p, c, "lower"))
                assert fast == literal, (p, sorted(q), sorted(c))


def test_lens_bridge_examples(flat_bool):
    l = Lens(flat_bool, frozenset({"t"}))
    ql = lens_bridge(flat_bool, l)
    assert ql.q.members == {"t"} and ql.c.members == {"b", "t"}
    assert lens_bridge(flat_bool, ql).members == {"t"}


def test_lens_bridge_bijection_small_posets():
    # mutually inverse on every poset with at most 5 points
    for p in enumerate_posets(5):
        if not p.elements:
            continue
        lenses = enumerate_lenses(p)
        seen = set()
        for members in lenses:
            l = Lens(p, members)
            ql = lens_bridge(p, l)
            assert lens_bridge(p, ql).members == members
            seen.add((ql.q.members, ql.c.members))
        assert len(seen) == len(lenses)
        # and every valid quasi-lens arises this way
        uppers = [u for u in p.upper_sets if u]
        lowers = [l for l in p.lower_sets if l]
        total = sum(
            validate_quasi_lens(p, PointSet(p, q, "upper"), PointSet(p, c, "lower"))
            for q in uppers for c in lowers
        )
        assert total == len(lenses)


def test_enumerate_posets_counts():
    assert len(enumerate_posets(3)) == 9  # 1 + 1 + 2 + 5 up to iso
    assert len(enumerate_posets(4)) == 9 + 16


def test_quasi_lens_invariants(flat_bool):
    with pytest.raises(InvalidElementError):
        QuasiLens(PointSet(flat_bool, frozenset({"t"}), "upper"),
                  PointSet(flat_bool, frozenset({"b", "f"}), "lower"))


@st.composite
def small_posets(draw):
    n = draw(st.integers(min_value=1, max_value=4))
    names = [f"e{i}" for i in range(n)]
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                pairs.append((names[i], names[j]))
    return build_poset(names, pairs)


@settings(max_examples=60, deadline=None)
@given(small_posets(), st.data())
def test_up_closure_properties(p, data):
    pts = data.draw(st.sets(st.sampled_from(list(p.elements))))
    up = p.up(pts)
    assert pts <= up and p.is_upper(up)
    assert p.up(up) == up
    down = p.down(pts)
    assert pts <= down and p.is_lower(down)


@settings(max_examples=40, deadline=None)
@given(small_posets())
def test_monotone_maps_compose(p):
    maps = monotone_point_maps(p, p)
    ident = {x: x for x in p.elements}
    assert ident in maps
    for f in maps[:10]:
        for g in maps[:10]:
            comp = {x: g[f[x]] for x in p.elements}
            assert comp in maps
