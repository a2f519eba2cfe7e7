import itertools
import random
from fractions import Fraction as F

import pytest

from monad_forge.errors import NonMonotoneError, SchemaError
from monad_forge.interp import (
    ProgramAst,
    achoice,
    dchoice,
    denote_program,
    echoice,
    oracle_bounds,
    pchoice,
    query_fork,
    seq,
    step,
)
from monad_forge.prevision import walley_check
from monad_forge.valuation import monotone_grid, monotone_map


def const(p, y):
    return step({x: y for x in p.elements})


def test_step_id_is_unit(flat_bool):
    fam = denote_program(flat_bool, step({x: x for x in flat_bool.elements}))
    h = monotone_map(flat_bool, {"b": 0, "t": 1, "f": 0})
    assert query_fork(fam, "t", h) == (1, 1)
    assert query_fork(fam, "b", h) == (0, 0)


def test_erratic_example(flat_bool):
    prog = echoice(const(flat_bool, "t"), const(flat_bool, "f"))
    fam = denote_program(flat_bool, prog)
    h = monotone_map(flat_bool, {"b": 0, "t": 1, "f": 0})
    assert query_fork(fam, "b", h) == (0, 1)
    gens = fam["b"].lower.generators
    assert {g.support for g in gens} == {frozenset({"t"}), frozenset({"f"})}


def test_pchoice_example(flat_bool):
    prog = pchoice(F(1, 2), const(flat_bool, "t"), const(flat_bool, "f"))
    fam = denote_program(flat_bool, prog)
    h = monotone_map(flat_bool, {"b": 0, "t": 1, "f": 0})
    assert query_fork(fam, "b", h) == (F(1, 2), F(1, 2))
    assert len(fam["b"].lower.generators) == 1


def test_two_coins_collapse_quarter(flat_bool):
    first = pchoice(F(1, 2), const(flat_bool, "t"), const(flat_bool, "f"))
    second = pchoice(F(1, 2), step({x: x for x in flat_bool.elements}), const(flat_bool, "f"))
    prog = seq(first, second)
    fam = denote_program(flat_bool, prog)
    h = monotone_map(flat_bool, {"b": 0, "t": 1, "f": 0})
    assert query_fork(fam, "b", h) == (F(1, 4), F(1, 4))
    assert oracle_bounds(flat_bool, prog, "b", h) == (F(1, 4), F(1, 4))


def test_no_choice_means_deterministic(flat_bool):
    rng = random.Random(0)
    from monad_forge.poset import monotone_point_maps

    maps = monotone_point_maps(flat_bool, flat_bool)
    for _ in range(20):
        prog = seq(step(rng.choice(maps)),
                   pchoice(F(1, 3), step(rng.choice(maps)), step(rng.choice(maps))))
        fam = denote_program(flat_bool, prog)
        h = monotone_map(flat_bool, {"b": 0, "t": rng.randint(0, 3), "f": rng.randint(0, 3)})
        for x in flat_bool.elements:
            lo, hi = query_fork(fam, x, h)
            assert lo == hi


def test_pure_nondeterminism_is_path_min_max(flat_bool):
    # without coins the bounds are min/max over resolved paths
    progs = [
        echoice(const(flat_bool, "t"), echoice(const(flat_bool, "f"), const(flat_bool, "b"))),
        dchoice(const(flat_bool, "t"), const(flat_bool, "b")),
        achoice(seq(const(flat_bool, "t"), step({x: x for x in flat_bool.elements})),
                const(flat_bool, "f")),
    ]
    paths = [{"t", "f", "b"}, {"t", "b"}, {"t", "f"}]
    h = monotone_map(flat_bool, {"b": 0, "t": 2, "f": 1})
    for prog, targets in zip(progs, paths):
        fam = denote_program(flat_bool, prog)
        lo, hi = query_fork(fam, "b", h)
        assert lo == min(h(t) for t in targets)
        assert hi == max(h(t) for t in targets)


def test_oracle_agreement_randomized(flat_bool):
    from monad_forge.harness import _rand_program, _rng

    for i in range(40):
        rng = _rng("interp", i)
        prog = _rand_program(rng, flat_bool, max_choices=3)
        h = monotone_map(flat_bool, {"b": 0, "t": rng.randint(0, 3), "f": rng.randint(0, 3)})
        x = rng.choice(flat_bool.elements)
        fam = denote_program(flat_bool, prog)
        assert query_fork(fam, x, h) == oracle_bounds(flat_bool, prog, x, h)


def test_denotation_is_walley(flat_bool):
    from monad_forge.harness import _rand_program, _rng

    for i in range(15):
        prog = _rand_program(_rng("walley-prog", i), flat_bool, max_choices=2)
        fam = denote_program(flat_bool, prog)
        for x in flat_bool.elements:
            assert walley_check(fam[x]) is None


def test_lower_below_upper(flat_bool):
    from monad_forge.harness import _rand_program, _rng

    grid = monotone_grid(flat_bool, 2)
    for i in range(10):
        prog = _rand_program(_rng("lu", i), flat_bool, max_choices=3)
        fam = denote_program(flat_bool, prog)
        for x in flat_bool.elements:
            for h in grid[::6]:
                lo, hi = query_fork(fam, x, h)
                assert lo <= hi


def test_monotone_family(flat_bool):
    from monad_forge.harness import _rand_program, _rng
    from monad_forge.prevision import prevision_leq

    for i in range(10):
        prog = _rand_program(_rng("mono", i), flat_bool, max_choices=2)
        fam = denote_program(flat_bool, prog)
        for (a, b) in flat_bool.leq:
            assert prevision_leq(fam[a], fam[b])


def test_step_rejects_non_monotone(chain2):
    with pytest.raises(NonMonotoneError):
        denote_program(chain2, step({"0": "1", "1": "0"}))


def test_ast_validation():
    with pytest.raises(SchemaError):
        ProgramAst("pchoice", p=F(3, 2))
    with pytest.raises(SchemaError):
        ProgramAst("mystery")
    with pytest.raises(SchemaError):
        ProgramAst("seq", left=None, right=None)


def test_choice_node_paths():
    prog = echoice(step({}), dchoice(step({}), step({})))
    assert set(prog.choice_nodes()) == {(), ("R",)}
