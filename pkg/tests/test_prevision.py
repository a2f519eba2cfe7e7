import itertools
import random
from fractions import Fraction as F

import pytest

from monad_forge.convex import GenQuasiLens, gen_downset, gen_upset, genset_equal
from monad_forge.errors import CarrierMismatchError, NonMonotoneError
from monad_forge.prevision import (
    Fork,
    algebra_eval,
    algebra_eval_fork,
    algebra_mix,
    eval_prevision,
    kleisli_extend,
    prevision_equal,
    prevision_leq,
    retract_r,
    section_s,
    sub_prevision,
    super_prevision,
    unit_prevision,
    walley_check,
)
from monad_forge.valuation import (
    flatten,
    integrate,
    monotone_grid,
    monotone_map,
    simple_valuation,
    unit_valuation,
    valuation,
)


def test_eval_examples(discrete2):
    dx, dy = unit_valuation(discrete2, "x"), unit_valuation(discrete2, "y")
    h = monotone_map(discrete2, {"x": 1, "y": 0})
    assert eval_prevision(super_prevision([dx, dy]), h) == 0
    assert eval_prevision(sub_prevision([dx, dy]), h) == 1


def test_unit_prevision_evaluates_at_the_point(flat_bool):
    f = unit_prevision("DN", flat_bool, "t")
    for h in monotone_grid(flat_bool, 2):
        assert f(h) == h("t")


def test_retract_examples(flat_bool):
    db = unit_valuation(flat_bool, "b")
    f = retract_r("DN", gen_upset([db]))
    assert prevision_equal(f, unit_prevision("DN", flat_bool, "b"))

    dt, df = unit_valuation(flat_bool, "t"), unit_valuation(flat_bool, "f")
    fork = retract_r("ADN", GenQuasiLens(gen_upset([dt, df]), gen_downset([dt, df])))
    h = monotone_map(flat_bool, {"b": 0, "t": 1, "f": 0})
    h2 = monotone_map(flat_bool, {"b": 0, "t": 0, "f": 1})
    # Walley instance: 1 ≤ 0+1 ≤ 1
    assert fork.lower(h.add(h2)) == 1
    assert fork.lower(h) + fork.upper(h2) == 1
    assert fork.upper(h.add(h2)) == 1


def test_r_after_s_is_identity_randomized(flat_bool):
    rng = random.Random(7)
    grid = monotone_grid(flat_bool, 3)
    for i in range(100):
        gens = [valuation(flat_bool, {x: F(rng.randint(0, 3), 4) for x in flat_bool.elements},
                          "general") for _ in range(rng.randint(1, 3))]
        f = super_prevision(gens) if i % 2 else sub_prevision(gens)
        kind = "DN" if i % 2 else "AN"
        back = retract_r(kind, section_s(kind, f))
        assert prevision_equal(back, f)
        assert all(back(h) == f(h) for h in grid[:: max(1, len(grid) // 25)])


def test_section_of_unit_is_principal_upset(flat_bool):
    s = section_s("DN", unit_prevision("DN", flat_bool, "t"))
    assert s.generators == (unit_valuation(flat_bool, "t"),)


def test_section_canonicalizes(flat_bool):
    dt, db = unit_valuation(flat_bool, "t"), unit_valuation(flat_bool, "b")
    s = section_s("DN", super_prevision([dt, db]))
    assert s.generators == (db,)


def test_section_of_fork_is_valid_quasi_lens(flat_bool):
    # denotation-level quasi-lens conditions via membership checks
    from monad_forge.convex import member_convex_set

    rng = random.Random(8)
    for i in range(25):
        from monad_forge.harness import _rand_prevision

        fork = _rand_prevision(rng, flat_bool, "ADN", "prob")
        ql = section_s("ADN", fork)
        # every lower generator dominates something in the intersection and
        # every upper generator is dominated by something in it: witnessed by
        # the common mixtures
        for g in ql.up.generators:
            assert member_convex_set(g, ql.up)[0]
        for g in ql.down.generators:
            assert member_convex_set(g, ql.down)[0]
        assert walley_check(retract_r("ADN", ql)) is None


def test_walley_pass_on_quasi_lens(flat_bool):
    dt, df = unit_valuation(flat_bool, "t"), unit_valuation(flat_bool, "f")
    fork = retract_r("ADN", GenQuasiLens(gen_upset([dt, df]), gen_downset([dt, df])))
    assert walley_check(fork) is None


def test_walley_counterexample_for_mismatched_pair(flat_bool):
    dt, df = unit_valuation(flat_bool, "t"), unit_valuation(flat_bool, "f")
    bad = Fork(super_prevision([dt]), sub_prevision([df]))
    ce = walley_check(bad)
    assert ce is not None
    # replay the counterexample
    h = monotone_map(flat_bool, {k: F(v) for k, v in ce["h"].items()})
    h2 = monotone_map(flat_bool, {k: F(v) for k, v in ce["h_prime"].items()})
    a, b, c = bad.lower(h.add(h2)), bad.lower(h) + bad.upper(h2), bad.upper(h.add(h2))
    assert not (a <= b <= c)


def test_walley_pass_linear_fork(flat_bool):
    nu = valuation(flat_bool, {"t": F(1, 2), "b": F(1, 2)}, "prob")
    fork = Fork(super_prevision([nu]), sub_prevision([nu]))
    assert walley_check(fork) is None


def test_superlinearity_and_homogeneity(flat_bool):
    rng = random.Random(9)
    grid = monotone_grid(flat_bool, 2)
    for _ in range(10):
        gens = [valuation(flat_bool, {x: F(rng.randint(0, 2), 3) for x in flat_bool.elements},
                          "general") for _ in range(2)]
        f, g = super_prevision(gens), sub_prevision(gens)
        for h1 in grid[::5]:
            for h2 in grid[::7]:
                assert f(h1.add(h2)) >= f(h1) + f(h2)
                assert g(h1.add(h2)) <= g(h1) + g(h2)
            for a in (F(1, 2), F(2), F(3, 4)):
                assert f(h1.scale(a)) == a * f(h1)
                assert g(h1.scale(a)) == a * g(h1)


def test_kleisli_unit_laws(discrete2):
    dx = unit_valuation(discrete2, "x")
    f_cap = super_prevision([dx, unit_valuation(discrete2, "y")])
    eta = {x: unit_prevision("DN", discrete2, x) for x in discrete2.elements}
    assert prevision_equal(kleisli_extend("DN", eta, f_cap), f_cap)

    fam = {"x": super_prevision([dx]), "y": f_cap}
    got = kleisli_extend("DN", fam, unit_prevision("DN", discrete2, "y"))
    assert prevision_equal(got, f_cap)


def test_kleisli_worked_example(discrete2):
    # two-generator family against a fair-coin prevision, from first principles
    dx, dy = unit_valuation(discrete2, "x"), unit_valuation(discrete2, "y")
    half = valuation(discrete2, {"x": F(1, 2), "y": F(1, 2)}, "prob")
    fam = {"x": super_prevision([dx, dy]), "y": super_prevision([dy])}
    res = kleisli_extend("DN", fam, super_prevision([half]))
    assert set(res.generators) == {half, dy}
    h = monotone_map(discrete2, {"x": 1, "y": 0})
    inner = monotone_map(discrete2, {x: fam[x](h) for x in discrete2.elements})
    assert res(h) == super_prevision([half])(inner) == 0


def test_kleisli_defining_equation_brute_force(discrete2):
    # derivation of the choice-function expansion: compare against a dense
    # mixing grid over the generated convex sets
    dx, dy = unit_valuation(discrete2, "x"), unit_valuation(discrete2, "y")
    half = valuation(discrete2, {"x": F(1, 2), "y": F(1, 2)}, "prob")
    fam = {"x": super_prevision([dx, dy]), "y": super_prevision([dy, half])}
    f_cap = super_prevision([half, dx])
    res = kleisli_extend("DN", fam, f_cap)
    denom = 8
    grid_vals = []
    for h in monotone_grid(discrete2, 3):
        best = None
        for kf in range(denom + 1):  # mixture inside F's generator hull
            outer = flatten(simple_valuation(
                [(F(kf, denom), f_cap.generators[0]),
                 (1 - F(kf, denom), f_cap.generators[1])], "prob"))
            for kx in range(denom + 1):
                gx = flatten(simple_valuation(
                    [(F(kx, denom), fam["x"].generators[0]),
                     (1 - F(kx, denom), fam["x"].generators[1])], "prob"))
                for ky in range(denom + 1):
                    gy = flatten(simple_valuation(
                        [(F(ky, denom), fam["y"].generators[0]),
                         (1 - F(ky, denom), fam["y"].generators[1])], "prob"))
                    val = sum((outer.weight(x) * integrate({"x": gx, "y": gy}[x], h)
                               for x in discrete2.elements), F(0))
                    best = val if best is None else min(best, val)
        grid_vals.append((h, best))
    for h, best in grid_vals:
        assert res(h) == best


def test_kleisli_rejects_non_monotone(chain2):
    d0, d1 = unit_valuation(chain2, "0"), unit_valuation(chain2, "1")
    fam = {"0": super_prevision([d1]), "1": super_prevision([d0])}  # inverted
    with pytest.raises(NonMonotoneError):
        kleisli_extend("DN", fam, unit_prevision("DN", chain2, "0"))


def test_fork_kleisli_projections(flat_bool):
    # the fork bind projects to the demonic/angelic binds componentwise
    from monad_forge.harness import _rand_kleisli_family, _rand_prevision

    rng = random.Random(10)
    for i in range(15):
        fam = _rand_kleisli_family(random.Random(repr((10, i))), flat_bool, "ADN")
        fork = _rand_prevision(random.Random(repr((11, i))), flat_bool, "ADN", "prob")
        got = kleisli_extend("ADN", fam, fork)
        low = kleisli_extend("DN", {x: fam[x].lower for x in fam}, fork.lower)
        up = kleisli_extend("AN", {x: fam[x].upper for x in fam}, fork.upper)
        assert prevision_equal(got.lower, low)
        assert prevision_equal(got.upper, up)
        assert walley_check(got) is None


def test_algebra_eval(flat_bool):
    f1 = unit_prevision("DN", flat_bool, "t")
    f2 = unit_prevision("DN", flat_bool, "f")
    h = monotone_map(flat_bool, {"b": 0, "t": 2, "f": 1})
    xi = simple_valuation([(F(1), f1)], "prob")
    assert algebra_eval("DN", xi, h) == f1(h)
    xi2 = simple_valuation([(F(1, 2), f1), (F(1, 2), f2)], "prob")
    assert algebra_eval("DN", xi2, h) == F(1, 2) * f1(h) + F(1, 2) * f2(h)


def test_algebra_mix_agrees_with_eval(flat_bool):
    rng = random.Random(12)
    grid = monotone_grid(flat_bool, 2)
    for i in range(15):
        from monad_forge.harness import _rand_prevision

        kind = ("DN", "AN")[i % 2]
        fs = [_rand_prevision(random.Random(repr((13, i, j))), flat_bool, kind, "prob")
              for j in range(2)]
        a = F(rng.randint(0, 4), 4)
        xi = simple_valuation([(a, fs[0]), (1 - a, fs[1])], "prob")
        mixed = algebra_mix(kind, xi)
        for h in grid[::3]:
            assert mixed(h) == algebra_eval(kind, xi, h)


def test_algebra_law(flat_bool):
    # alpha after flattening equals alpha after the per-atom alphas
    rng = random.Random(14)
    grid = monotone_grid(flat_bool, 2)
    for i in range(10):
        from monad_forge.harness import _rand_prevision

        fs = [_rand_prevision(random.Random(repr((15, i, j))), flat_bool, "DN", "prob")
              for j in range(4)]
        inner1 = simple_valuation([(F(1, 2), fs[0]), (F(1, 2), fs[1])], "prob")
        inner2 = simple_valuation([(F(1, 4), fs[2]), (F(3, 4), fs[3])], "prob")
        a = F(rng.randint(0, 4), 4)
        # path 1: flatten the valuation tower, then evaluate
        mixed = simple_valuation(
            [(a * w, f) for w, f in inner1.atoms] + [((1 - a) * w, f) for w, f in inner2.atoms],
            "prob")
        # path 2: evaluate the inner algebras first
        outer = simple_valuation([(a, algebra_mix("DN", inner1)),
                                  (1 - a, algebra_mix("DN", inner2))], "prob")
        for h in grid[::4]:
            assert algebra_eval("DN", mixed, h) == algebra_eval("DN", outer, h)


def test_prevision_equality_iff_grid_equality(flat_bool):
    rng = random.Random(16)
    grid = monotone_grid(flat_bool, 3)
    from monad_forge.harness import _rand_prevision

    for i in range(30):
        f = _rand_prevision(random.Random(repr((17, i))), flat_bool, "DN", "prob")
        g = _rand_prevision(random.Random(repr((18, i))), flat_bool, "DN", "prob")
        want = all(f(h) == g(h) for h in grid)
        assert prevision_equal(f, g) == want


def test_fork_carrier_mismatch(flat_bool, discrete2):
    with pytest.raises(CarrierMismatchError):
        Fork(super_prevision([unit_valuation(flat_bool, "t")]),
             sub_prevision([unit_valuation(discrete2, "x")]))
