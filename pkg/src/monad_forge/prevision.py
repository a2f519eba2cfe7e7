"""Generator-represented previsions and forks, their monads and algebras.

A superlinear prevision is F(h) = min_j ∫h dν_j over finitely many generator
valuations (demonic reading); a sublinear prevision takes max (angelic); a
fork is a Walley-compatible pair.  Because evaluation functionals are linear,
minima/maxima over the generated convex sets are attained at generators, so
every composite operation below works at the generator level; one unit test
derives this against a dense mixing grid.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .convex import (
    GenDownset,
    GenQuasiLens,
    GenUpset,
    canonicalize_generators,
    gen_downset,
    gen_upset,
    genset_equal,
    member_convex_set,
)
from .errors import CarrierMismatchError, EmptyAtomError, NonMonotoneError
from .poset import FinitePoset
from .valuation import (
    MonotoneMap,
    SimpleValuation,
    Valuation,
    combine_kinds,
    integrate,
    monotone_grid_tuples,
    monotone_map,
    same_carrier,
    valuation,
)

DN, AN, ADN = "DN", "AN", "ADN"


def _check_gens(generators):
    gens = tuple(generators)
    if not gens:
        raise EmptyAtomError("a prevision needs at least one generator")
    base, kind = gens[0].poset, gens[0].kind
    for g in gens[1:]:
        if g.poset != base or g.kind != kind:
            raise CarrierMismatchError("generators must share carrier and kind")
    return gens


@dataclass(frozen=True)
class SuperlinearPrevision:
    generators: tuple[Valuation, ...]

    def __post_init__(self):
        _check_gens(self.generators)

    @property
    def poset(self) -> FinitePoset:
        return self.generators[0].poset

    @property
    def kind(self) -> str:
        return self.generators[0].kind

    def __call__(self, h: MonotoneMap) -> Fraction:
        return min(integrate(g, h) for g in self.generators)

    def sort_key(self):
        return ("super", tuple(g.sort_key() for g in self.generators))


@dataclass(frozen=True)
class SublinearPrevision:
    generators: tuple[Valuation, ...]

    def __post_init__(self):
        _check_gens(self.generators)

    @property
    def poset(self) -> FinitePoset:
        return self.generators[0].poset

    @property
    def kind(self) -> str:
        return self.generators[0].kind

    def __call__(self, h: MonotoneMap) -> Fraction:
        return max(integrate(g, h) for g in self.generators)

    def sort_key(self):
        return ("sub", tuple(g.sort_key() for g in self.generators))


@dataclass(frozen=True)
class Fork:
    lower: SuperlinearPrevision
    upper: SublinearPrevision

    def __post_init__(self):
        if self.lower.poset != self.upper.poset:
            raise CarrierMismatchError("fork components live on different posets")
        if self.lower.kind != self.upper.kind:
            raise CarrierMismatchError("fork components mix kinds")

    @property
    def poset(self) -> FinitePoset:
        return self.lower.poset

    @property
    def kind(self) -> str:
        return self.lower.kind

    def __call__(self, h: MonotoneMap) -> tuple[Fraction, Fraction]:
        return self.lower(h), self.upper(h)

    def sort_key(self):
        return ("fork", self.lower.sort_key(), self.upper.sort_key())


def super_prevision(gens) -> SuperlinearPrevision:
    return SuperlinearPrevision(tuple(sorted(set(gens), key=lambda g: g.sort_key())))


def sub_prevision(gens) -> SublinearPrevision:
    return SublinearPrevision(tuple(sorted(set(gens), key=lambda g: g.sort_key())))


def unit_prevision(kind: str, p: FinitePoset, x: str):
    """η at x: evaluation h ↦ h(x), i.e. the single generator δ_x."""
    from .valuation import unit_valuation

    d = unit_valuation(p, x)
    if kind == DN:
        return super_prevision([d])
    if kind == AN:
        return sub_prevision([d])
    if kind == ADN:
        return Fork(super_prevision([d]), sub_prevision([d]))
    raise CarrierMismatchError(f"unknown prevision kind {kind!r}")


def eval_prevision(f, h: MonotoneMap):
    same_carrier(f.lower if isinstance(f, Fork) else f.generators[0], h)
    return f(h)


def retract_r(kind: str, s):
    """Reinterpret a generated convex set as the functional it supports."""
    if kind == DN:
        if not isinstance(s, GenUpset):
            raise CarrierMismatchError("retract_r(DN) expects a GenUpset")
        return super_prevision(s.generators)
    if kind == AN:
        if not isinstance(s, GenDownset):
            raise CarrierMismatchError("retract_r(AN) expects a GenDownset")
        return sub_prevision(s.generators)
    if kind == ADN:
        if not isinstance(s, GenQuasiLens):
            raise CarrierMismatchError("retract_r(ADN) expects a GenQuasiLens")
        return Fork(super_prevision(s.up.generators), sub_prevision(s.down.generators))
    raise CarrierMismatchError(f"unknown prevision kind {kind!r}")


def section_s(kind: str, f):
    """The set of valuations dominating (DN) / dominated by (AN) the functional.

    Returned as a canonical generated set; its denotation is exactly the
    dominating/dominated set, which the membership tests validate.
    """
    if kind == DN:
        return canonicalize_generators(gen_upset(f.generators))
    if kind == AN:
        return canonicalize_generators(gen_downset(f.generators))
    if kind == ADN:
        return GenQuasiLens(
            canonicalize_generators(gen_upset(f.lower.generators)),
            canonicalize_generators(gen_downset(f.upper.generators)),
        )
    raise CarrierMismatchError(f"unknown prevision kind {kind!r}")


def prevision_leq(f1, f2) -> bool:
    """Pointwise order on previsions, decided exactly via genset membership."""
    if isinstance(f1, SuperlinearPrevision):
        up1 = gen_upset(f1.generators)
        return all(member_convex_set(g, up1)[0] for g in f2.generators)
    if isinstance(f1, SublinearPrevision):
        down2 = gen_downset(f2.generators)
        return all(member_convex_set(g, down2)[0] for g in f1.generators)
    return prevision_leq(f1.lower, f2.lower) and prevision_leq(f1.upper, f2.upper)


def prevision_equal(f1, f2) -> bool:
    if isinstance(f1, Fork) != isinstance(f2, Fork):
        return False
    if isinstance(f1, Fork):
        return prevision_equal(f1.lower, f2.lower) and prevision_equal(f1.upper, f2.upper)
    a = gen_upset(f1.generators) if isinstance(f1, SuperlinearPrevision) else gen_downset(f1.generators)
    b = gen_upset(f2.generators) if isinstance(f2, SuperlinearPrevision) else gen_downset(f2.generators)
    return genset_equal(a, b)[0]


# --- exact integer grid machinery -----------------------------------------

_GRID_CACHE: dict = {}


def _grid(p: FinitePoset, maxval: int):
    key = (p, maxval)
    if key not in _GRID_CACHE:
        tuples = monotone_grid_tuples(p, maxval)
        arr = np.array(tuples, dtype=np.int64).reshape(len(tuples), len(p.elements))
        _GRID_CACHE[key] = (tuples, arr)
    return _GRID_CACHE[key]


def _sum_index(p: FinitePoset, maxval: int):
    key = ("sum", p, maxval)
    if key not in _GRID_CACHE:
        tuples, _ = _grid(p, maxval)
        tuples2, _ = _grid(p, 2 * maxval)
        pos = {t: i for i, t in enumerate(tuples2)}
        n = len(tuples)
        idx = np.empty((n, n), dtype=np.int64)
        for i, a in enumerate(tuples):
            for j, b in enumerate(tuples):
                idx[i, j] = pos[tuple(x + y for x, y in zip(a, b))]
        _GRID_CACHE[key] = idx
    return _GRID_CACHE[key]


def _int_gen_matrix(p: FinitePoset, gens) -> tuple[np.ndarray, int]:
    """Generator weights as integers over a common denominator."""
    denom = lcm(*(w.denominator for g in gens for _, w in g.weights), 1)
    mat = np.zeros((len(gens), len(p.elements)), dtype=np.int64)
    order = {x: i for i, x in enumerate(p.elements)}
    for r, g in enumerate(gens):
        for pt, w in g.weights:
            mat[r, order[pt]] = int(w * denom)
    return mat, denom


def grid_prevision_values(f, maxval: int) -> tuple[np.ndarray, int]:
    """Exact scaled values of the prevision on the whole monotone grid.

    Returns (values, denom) with values[i] = denom · F(h_i) as int64.
    """
    p = f.poset
    _, grid = _grid(p, maxval)
    mat, denom = _int_gen_matrix(p, f.generators)
    dots = grid @ mat.T
    vals = dots.min(axis=1) if isinstance(f, SuperlinearPrevision) else dots.max(axis=1)
    return vals, denom


def walley_check(fork: Fork, budget: int = 4000, maxval: int = 3, seed: int = 0):
    """Check F⁻(h+h') ≤ F⁻(h) + F⁺(h') ≤ F⁺(h+h') over monotone maps.

    Exhaustive over the {0..maxval} grid (all pairs) when the carrier has at
    most 4 points, randomized within ``budget`` beyond.  Returns None on
    pass, else a counterexample dict with the violating pair.
    """
    p = fork.poset
    if len(p.elements) == 0:
        return None
    if len(p.elements) <= 4:
        denom = lcm(*(w.denominator
                      for g in fork.lower.generators + fork.upper.generators
                      for _, w in g.weights), 1)
        low_mat, _ = _int_gen_matrix(p, [g.scale(Fraction(denom)) for g in fork.lower.generators])
        up_mat, _ = _int_gen_matrix(p, [g.scale(Fraction(denom)) for g in fork.upper.generators])
        tuples, grid1 = _grid(p, maxval)
        _, grid2 = _grid(p, 2 * maxval)
        sum_idx = _sum_index(p, maxval)
        lo2 = (grid2 @ low_mat.T).min(axis=1)
        hi2 = (grid2 @ up_mat.T).max(axis=1)
        tuples2, _ = _grid(p, 2 * maxval)
        pos2 = {t: i for i, t in enumerate(tuples2)}
        emb = np.array([pos2[t] for t in tuples], dtype=np.int64)
        lo1, hi1 = lo2[emb], hi2[emb]
        mid = lo1[:, None] + hi1[None, :]
        bad = (lo2[sum_idx] > mid) | (mid > hi2[sum_idx])
        if bad.any():
            i, j = map(int, np.argwhere(bad)[0])
            h = monotone_map(p, dict(zip(p.elements, map(Fraction, tuples[i]))))
            h2 = monotone_map(p, dict(zip(p.elements, map(Fraction, tuples[j]))))
            return _walley_counterexample(fork, h, h2)
        return None
    rng = random.Random(seed)
    for _ in range(budget):
        h = _random_monotone(p, rng, maxval)
        h2 = _random_monotone(p, rng, maxval)
        ce = _walley_counterexample(fork, h, h2, only_if_bad=True)
        if ce is not None:
            return ce
    return None


def _walley_counterexample(fork: Fork, h: MonotoneMap, h2: MonotoneMap, only_if_bad: bool = False):
    hs = h.add(h2)
    a, b, c = fork.lower(hs), fork.lower(h) + fork.upper(h2), fork.upper(hs)
    if a <= b <= c:
        return None if only_if_bad else None
    return {
        "h": {x: str(h(x)) for x in fork.poset.elements},
        "h_prime": {x: str(h2(x)) for x in fork.poset.elements},
        "lower_sum": str(a),
        "mixed": str(b),
        "upper_sum": str(c),
    }


def _random_monotone(p: FinitePoset, rng: random.Random, maxval: int) -> MonotoneMap:
    vals: dict[str, int] = {}
    for x in p.elements:
        lo = max((vals[y] for y in p.elements if y in vals and p.le(y, x)), default=0)
        hi = min((vals[y] for y in p.elements if y in vals and p.le(x, y)), default=maxval)
        vals[x] = rng.randint(lo, max(lo, hi))
    return monotone_map(p, {x: Fraction(v) for x, v in vals.items()})


# --- Kleisli extension and algebra maps ------------------------------------


def _component(f_by_point, which: str):
    return {x: (getattr(v, which) if isinstance(v, Fork) else v) for x, v in f_by_point.items()}


def _check_kleisli_monotone(p: FinitePoset, f_by_point) -> None:
    for (x, y) in p.leq:
        if x != y and not prevision_leq(f_by_point[x], f_by_point[y]):
            raise NonMonotoneError(f"target family is not monotone: f({x}) ≰ f({y})")


def _extend_gens(f_gens_by_point: dict[str, tuple[Valuation, ...]], outer: Valuation):
    """{Σ_x ν(x)·ρ_{x,c(x)} : c a choice of one generator per support point}."""
    support = [pt for pt, _ in outer.weights]
    pools = [f_gens_by_point[x] for x in support]
    out = []
    for combo in itertools.product(*pools):
        acc: dict[str, Fraction] = {}
        for (pt, w), rho in zip(outer.weights, combo):
            for q, wq in rho.weights:
                acc[q] = acc.get(q, Fraction(0)) + w * wq
        out.append(acc)
    return out


def kleisli_extend(kind: str, f_by_point: dict, f):
    """Bind a prevision/fork along a monotone family of previsions/forks.

    The result's generators are the choice-function mixtures of the inner
    generators weighted by an outer generator; it satisfies the defining
    equation  eval(result, h) = F(x ↦ f(x)(h))  exactly (tested).
    """
    p = f.poset
    if set(f_by_point) != set(p.elements):
        raise CarrierMismatchError("the family must be defined on every point")
    _check_kleisli_monotone(p, f_by_point)

    def extend_side(outer_gens, side_family, target_poset, out_kind, build):
        gens_by_point = {x: side_family[x].generators for x in side_family}
        acc = []
        for outer in outer_gens:
            if not outer.weights:
                acc.append(valuation(target_poset, {}, out_kind))
                continue
            for weights in _extend_gens(gens_by_point, outer):
                acc.append(valuation(target_poset, weights, out_kind))
        return canonicalize_generators(build(acc))

    if kind == ADN:
        if not isinstance(f, Fork):
            raise CarrierMismatchError("kleisli_extend(ADN) expects a fork")
        lows = _component(f_by_point, "lower")
        ups = _component(f_by_point, "upper")
        target = next(iter(lows.values())).poset
        out_kind = combine_kinds(f.kind, next(iter(lows.values())).kind)
        low = extend_side(f.lower.generators, lows, target, out_kind, gen_upset)
        up = extend_side(f.upper.generators, ups, target, out_kind, gen_downset)
        return Fork(super_prevision(low.generators), sub_prevision(up.generators))
    target = next(iter(f_by_point.values())).poset
    out_kind = combine_kinds(f.kind, next(iter(f_by_point.values())).kind)
    if kind == DN:
        out = extend_side(f.generators, f_by_point, target, out_kind, gen_upset)
        return super_prevision(out.generators)
    if kind == AN:
        out = extend_side(f.generators, f_by_point, target, out_kind, gen_downset)
        return sub_prevision(out.generators)
    raise CarrierMismatchError(f"unknown prevision kind {kind!r}")


def algebra_eval(kind: str, xi: SimpleValuation, h: MonotoneMap) -> Fraction:
    """The valuation-algebra structure map: α(ξ)(h) = Σ_i a_i·F_i(h)."""
    if not xi.atoms:
        raise EmptyAtomError("algebra_eval needs a nonempty valuation")
    total = Fraction(0)
    for a, f in xi.atoms:
        val = f(h)
        if kind == ADN:
            raise CarrierMismatchError("use algebra_eval_fork for the pairwise version")
        total += a * val
    return total


def algebra_eval_fork(xi: SimpleValuation, h: MonotoneMap) -> tuple[Fraction, Fraction]:
    lo = sum((a * f.lower(h) for a, f in xi.atoms), Fraction(0))
    hi = sum((a * f.upper(h) for a, f in xi.atoms), Fraction(0))
    return lo, hi


def algebra_mix(kind: str, xi: SimpleValuation):
    """Generator-level realization of the algebra map: the mixture prevision.

    Its generators are the choice-function mixtures Σ_i a_i·g_{c(i)}; its
    values agree with :func:`algebra_eval` on every map (linearity of
    integration pushes the min/max to the generators).
    """
    if not xi.atoms:
        raise EmptyAtomError("algebra_mix needs a nonempty valuation")

    def mix(gen_lists, build, target, out_kind):
        out = []
        for combo in itertools.product(*gen_lists):
            acc: dict[str, Fraction] = {}
            for (a, _), rho in zip(xi.atoms, combo):
                for q, wq in rho.weights:
                    acc[q] = acc.get(q, Fraction(0)) + a * wq
            out.append(valuation(target, acc, out_kind))
        return canonicalize_generators(build(out)).generators

    first = xi.atoms[0][1]
    if kind == ADN:
        target = first.poset
        out_kind = combine_kinds(xi.kind, first.kind)
        lows = mix([f.lower.generators for _, f in xi.atoms], gen_upset, target, out_kind)
        ups = mix([f.upper.generators for _, f in xi.atoms], gen_downset, target, out_kind)
        return Fork(super_prevision(lows), sub_prevision(ups))
    target = first.poset
    out_kind = combine_kinds(xi.kind, first.kind)
    if kind == DN:
        return super_prevision(mix([f.generators for _, f in xi.atoms], gen_upset, target, out_kind))
    if kind == AN:
        return sub_prevision(mix([f.generators for _, f in xi.atoms], gen_downset, target, out_kind))
    raise CarrierMismatchError(f"unknown prevision kind {kind!r}")
