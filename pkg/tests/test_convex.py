import random
from fractions import Fraction as F

import pytest

from monad_forge.convex import (
    GenQuasiLens,
    canonicalize_generators,
    gen_downset,
    gen_upset,
    genset_equal,
    member_convex_set,
    separating_direction,
)
from monad_forge.errors import CarrierMismatchError, EmptyAtomError
from monad_forge.valuation import (
    integrate,
    monotone_grid,
    monotone_map,
    stochastic_leq,
    unit_valuation,
    valuation,
)


def dirac(p, x):
    return unit_valuation(p, x)


def test_membership_whole_simplex(discrete2):
    half = valuation(discrete2, {"x": F(1, 2), "y": F(1, 2)}, "prob")
    ok, lam = member_convex_set(half, gen_upset([dirac(discrete2, "x"), dirac(discrete2, "y")]))
    assert ok and list(lam.entries) == [F(1, 2), F(1, 2)]


def test_membership_false_with_certificate(discrete2):
    ok, lam = member_convex_set(dirac(discrete2, "x"), gen_upset([dirac(discrete2, "y")]))
    assert not ok and lam is None
    cert = separating_direction(dirac(discrete2, "x"), gen_upset([dirac(discrete2, "y")]))
    assert cert is not None and cert["margin"] > 0


def test_generator_is_member(flat_bool):
    for x in flat_bool.elements:
        s = gen_upset([dirac(flat_bool, x), dirac(flat_bool, "b")])
        ok, lam = member_convex_set(dirac(flat_bool, x), s)
        assert ok and sum(lam.entries) == 1


def test_membership_monotone_up(flat_bool):
    # ν in an upset and ν ≤ ν' forces ν' in it; dually for downsets
    rng = random.Random(2)
    for _ in range(40):
        gens = [valuation(flat_bool, {x: F(rng.randint(0, 2), 2) for x in flat_bool.elements},
                          "general") for _ in range(2)]
        up = gen_upset(gens)
        down = gen_downset(gens)
        nu1 = valuation(flat_bool, {x: F(rng.randint(0, 2), 2) for x in flat_bool.elements},
                        "general")
        nu2 = nu1.add(valuation(flat_bool, {"t": F(rng.randint(0, 2), 2)}, "general"))
        if member_convex_set(nu1, up)[0]:
            assert member_convex_set(nu2, up)[0]
        if member_convex_set(nu2, down)[0]:
            assert member_convex_set(nu1, down)[0]


def grid_support_member(nu, s, grid):
    """Membership via the support-function test on the monotone grid."""
    if s.direction == "up":
        return all(integrate(nu, h) >= min(integrate(g, h) for g in s.generators) for h in grid)
    return all(integrate(nu, h) <= max(integrate(g, h) for g in s.generators) for h in grid)


def test_membership_matches_support_functions_prob():
    # the computational content of the section/retraction identities; on the
    # normalized regime the {0..3} integer grid is fine enough to decide
    from monad_forge.poset import build_poset

    rng = random.Random(3)
    posets = [build_poset(["a", "b"], []),
              build_poset(["a", "b", "c"], [("a", "b"), ("a", "c")]),
              build_poset(["a", "b", "c", "d"], [("a", "b"), ("c", "d")])]
    for p in posets:
        grid = monotone_grid(p, 3)
        n = len(p.elements)
        for _ in range(40):
            def rand_prob():
                d = rng.randint(1, 4)
                cuts = sorted(rng.randint(0, d) for _ in range(n - 1))
                parts = [b - a for a, b in zip([0] + cuts, cuts + [d])]
                return valuation(p, {x: F(k, d) for x, k in zip(p.elements, parts)}, "prob")

            gens = [rand_prob() for _ in range(rng.randint(1, 3))]
            nu = rand_prob()
            for s in (gen_upset(gens), gen_downset(gens)):
                assert member_convex_set(nu, s)[0] == grid_support_member(nu, s, grid), (p, nu, s)


def test_membership_support_functions_unnormalized():
    # below 1 total the {0..3} grid can miss the separating direction, but
    # membership always implies the grid inequalities, and non-membership
    # always has an exact rational separating map
    from monad_forge.poset import build_poset

    rng = random.Random(3)
    posets = [build_poset(["a", "b"], []),
              build_poset(["a", "b", "c"], [("a", "b"), ("a", "c")])]
    for p in posets:
        grid = monotone_grid(p, 3)
        for _ in range(40):
            gens = [valuation(p, {x: F(rng.randint(0, 3), 3) for x in p.elements}, "general")
                    for _ in range(rng.randint(1, 3))]
            nu = valuation(p, {x: F(rng.randint(0, 3), 3) for x in p.elements}, "general")
            for s in (gen_upset(gens), gen_downset(gens)):
                member = member_convex_set(nu, s)[0]
                if member:
                    assert grid_support_member(nu, s, grid)
                    assert separating_direction(nu, s) is None
                else:
                    cert = separating_direction(nu, s)
                    assert cert is not None and cert["margin"] > 0


def test_grid_incompleteness_below_normalization():
    # frozen counterexample: the separator needs value 4 at b, outside {0..3}
    from monad_forge.poset import build_poset

    p = build_poset(["a", "b"], [])
    gens = [valuation(p, {"b": F(1, 4)}, "sub"), valuation(p, {"a": F(1)}, "sub")]
    nu = valuation(p, {"a": F(3, 4)}, "sub")
    s = gen_upset(gens)
    assert not member_convex_set(nu, s)[0]
    assert grid_support_member(nu, s, monotone_grid(p, 3))      # grid cannot tell
    assert not grid_support_member(nu, s, monotone_grid(p, 4))  # one more level can


def test_genset_equal_redundant_mixture(discrete2):
    half = valuation(discrete2, {"x": F(1, 2), "y": F(1, 2)}, "prob")
    a = gen_upset([dirac(discrete2, "x"), dirac(discrete2, "y")])
    b = gen_upset([dirac(discrete2, "x"), dirac(discrete2, "y"), half])
    eq, cert = genset_equal(a, b)
    assert eq and cert is None


def test_genset_not_equal(discrete2):
    eq, cert = genset_equal(gen_upset([dirac(discrete2, "x")]),
                            gen_upset([dirac(discrete2, "y")]))
    assert not eq
    assert "violated_open" in cert or "separation" in cert


def test_genset_equal_reflexive(flat_bool):
    s = gen_upset([dirac(flat_bool, "t"), dirac(flat_bool, "b")])
    assert genset_equal(s, s)[0]


def test_genset_equal_soundness_derivation(discrete2):
    # generator membership suffices: once every generator of A lies in the
    # convex, directionally closed denotation of B, so does every mixture of
    # them and everything above such a mixture -- checked concretely
    dx, dy = dirac(discrete2, "x"), dirac(discrete2, "y")
    b = gen_upset([valuation(discrete2, {"x": F(1, 4)}, "general"),
                   valuation(discrete2, {"y": F(1, 4)}, "general")])
    gens_a = [valuation(discrete2, {"x": F(1, 2)}, "general"),
              valuation(discrete2, {"x": F(1, 4), "y": F(1, 4)}, "general")]
    assert all(member_convex_set(g, b)[0] for g in gens_a)
    rng = random.Random(4)
    for _ in range(25):
        k = F(rng.randint(0, 4), 4)
        mix_weights = {x: k * gens_a[0].weight(x) + (1 - k) * gens_a[1].weight(x)
                       for x in discrete2.elements}
        bump = {x: F(rng.randint(0, 2), 4) for x in discrete2.elements}
        above = valuation(discrete2,
                          {x: mix_weights[x] + bump[x] for x in discrete2.elements},
                          "general")
        assert member_convex_set(above, b)[0]
    assert genset_equal(gen_upset(gens_a + list(b.generators)), b)[0]


def test_canonicalize_examples(flat_bool, discrete2):
    dt, db = dirac(flat_bool, "t"), dirac(flat_bool, "b")
    assert canonicalize_generators(gen_upset([dt, db])).generators == (db,)
    half = valuation(discrete2, {"x": F(1, 2), "y": F(1, 2)}, "prob")
    dx, dy = dirac(discrete2, "x"), dirac(discrete2, "y")
    got = canonicalize_generators(gen_upset([dx, dy, half]))
    assert got.generators == (dx, dy)
    single = gen_upset([dx])
    assert canonicalize_generators(single) == single


def test_canonicalize_downset_keeps_top(flat_bool):
    dt, db = dirac(flat_bool, "t"), dirac(flat_bool, "b")
    # in the downset the dominated generator is the redundant one
    assert canonicalize_generators(gen_downset([dt, db])).generators == (dt,)


def test_canonicalize_idempotent_and_equal():
    from monad_forge.poset import build_poset

    rng = random.Random(5)
    p = build_poset(["a", "b", "c"], [("a", "b")])
    for _ in range(40):
        gens = [valuation(p, {x: F(rng.randint(0, 3), 3) for x in p.elements}, "general")
                for _ in range(rng.randint(1, 4))]
        for build in (gen_upset, gen_downset):
            s = build(gens)
            c1 = canonicalize_generators(s)
            assert genset_equal(s, c1)[0]
            assert canonicalize_generators(c1) == c1


def test_quasi_lens_pair_type(flat_bool):
    dt, df = dirac(flat_bool, "t"), dirac(flat_bool, "f")
    ql = GenQuasiLens(gen_upset([dt, df]), gen_downset([dt, df]))
    eq, _ = genset_equal(ql, ql)
    assert eq


def test_type_mismatch(flat_bool):
    dt = dirac(flat_bool, "t")
    with pytest.raises(CarrierMismatchError):
        genset_equal(gen_upset([dt]), gen_downset([dt]))


def test_empty_generators_rejected():
    with pytest.raises(EmptyAtomError):
        gen_upset([])


def test_kind_mismatch(flat_bool):
    dt = dirac(flat_bool, "t")
    sub = valuation(flat_bool, {"t": F(1, 2)}, "sub")
    with pytest.raises(CarrierMismatchError):
        gen_upset([dt, sub])
    with pytest.raises(CarrierMismatchError):
        member_convex_set(sub, gen_upset([dt]))
