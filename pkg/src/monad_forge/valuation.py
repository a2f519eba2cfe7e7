"""Continuous valuations on finite posets, with exact rational weights.

On a finite space every continuous valuation is a finite nonnegative
combination of point masses, so a valuation is stored as a weight per point;
evaluation on opens is strict and modular by construction, and the open-set
table form is recovered by inclusion-exclusion when needed.  All arithmetic
is exact (Fraction); law checks are equalities, never tolerances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CarrierMismatchError,
    KindError,
    NonMonotoneError,
    TableError,
    UnknownPointError,
)
from .poset import PLAIN, UPPER, FinitePoset, PointSet, set_sort_key

GENERAL = "general"
SUB = "sub"
PROB = "prob"
KINDS = (GENERAL, SUB, PROB)


def as_fraction(x) -> Fraction:
    f = Fraction(x)
    if f < 0:
        raise KindError(f"negative weight {f}")
    return f


def combine_kinds(outer: str, inner: str) -> str:
    """Kind of a flattened valuation: prob∘prob=prob, sub∘sub=sub, else general."""
    if outer == inner == PROB:
        return PROB
    if outer == inner == SUB:
        return SUB
    return GENERAL


@dataclass(frozen=True)
class Valuation:
    """Nonnegative rational weights on points; kind tags the mass regime."""

    poset: FinitePoset
    weights: tuple[tuple[str, Fraction], ...]
    kind: str = GENERAL

    def __post_init__(self):
        if self.kind not in KINDS:
            raise KindError(f"unknown kind {self.kind!r}")
        pts = [p for p, _ in self.weights]
        self.poset.check_points(pts)
        if len(set(pts)) != len(pts):
            raise CarrierMismatchError("duplicate point in weights")
        total = self.total
        if self.kind == SUB and total > 1:
            raise KindError(f"sub valuation has total {total} > 1")
        if self.kind == PROB and total != 1:
            raise KindError(f"prob valuation has total {total} != 1")

    @property
    def total(self) -> Fraction:
        return sum((w for _, w in self.weights), Fraction(0))

    def weight(self, x: str) -> Fraction:
        for p, w in self.weights:
            if p == x:
                return w
        if x not in self.poset._element_set:
            raise UnknownPointError(f"unknown point {x!r}")
        return Fraction(0)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(p for p, _ in self.weights)

    def sort_key(self):
        return (self.kind, self.weights)

    def scale(self, a: Fraction) -> "Valuation":
        a = as_fraction(a)
        kind = self.kind if (a == 1 or self.kind == GENERAL) else (SUB if a < 1 and self.kind in (SUB, PROB) else GENERAL)
        return valuation(self.poset, {p: a * w for p, w in self.weights}, kind)

    def add(self, other: "Valuation") -> "Valuation":
        same_carrier(self, other)
        acc = {p: w for p, w in self.weights}
        for p, w in other.weights:
            acc[p] = acc.get(p, Fraction(0)) + w
        return valuation(self.poset, acc, GENERAL)

    def __repr__(self):
        body = " + ".join(f"{w}·δ{p}" for p, w in self.weights) or "0"
        return f"⟨{self.kind}: {body}⟩"


def valuation(p: FinitePoset, weights, kind: str = GENERAL) -> Valuation:
    """Canonical constructor: drops zero weights, sorts by point."""
    if not isinstance(weights, dict):
        weights = dict(weights)
    items = tuple(sorted((pt, as_fraction(w)) for pt, w in weights.items() if Fraction(w) != 0))
    return Valuation(p, items, kind)


def unit_valuation(p: FinitePoset, x: str) -> Valuation:
    """The point mass δ_x (the unit of the valuation monad)."""
    p.check_points([x])
    return valuation(p, {x: Fraction(1)}, PROB)


def zero_valuation(p: FinitePoset, kind: str = GENERAL) -> Valuation:
    if kind == PROB:
        raise KindError("the zero valuation is not a probability valuation")
    return valuation(p, {}, kind)


def same_carrier(a, b) -> None:
    if a.poset != b.poset:
        raise CarrierMismatchError("values live on different posets")


def eval_open(nu: Valuation, u: PointSet) -> Fraction:
    """ν(U) = total weight inside the open (upper) set U."""
    if u.role != UPPER:
        raise CarrierMismatchError("eval_open needs an upper set")
    same_carrier(nu, u)
    return sum((w for p, w in nu.weights if p in u.members), Fraction(0))


def eval_open_set(nu: Valuation, u: frozenset[str]) -> Fraction:
    return sum((w for p, w in nu.weights if p in u), Fraction(0))


@dataclass(frozen=True)
class MonotoneMap:
    """A monotone map X → Q≥0; on finite posets these are exactly the lsc maps."""

    poset: FinitePoset
    values: tuple[tuple[str, Fraction], ...]

    def __post_init__(self):
        pts = [p for p, _ in self.values]
        if sorted(pts) != sorted(self.poset.elements):
            raise UnknownPointError("values must be given on every point exactly once")
        for _, v in self.values:
            if v < 0:
                raise KindError(f"map value {v} is negative")
        for (a, b) in self.poset.leq:
            if self(a) > self(b):
                raise NonMonotoneError(f"h({a}) = {self(a)} > h({b}) = {self(b)} but {a} ≤ {b}")

    def __call__(self, x: str) -> Fraction:
        for p, v in self.values:
            if p == x:
                return v
        raise UnknownPointError(f"unknown point {x!r}")

    def sort_key(self):
        return self.values

    def add(self, other: "MonotoneMap") -> "MonotoneMap":
        same_carrier(self, other)
        return monotone_map(self.poset, {p: self(p) + other(p) for p in self.poset.elements})

    def scale(self, a) -> "MonotoneMap":
        a = as_fraction(a)
        return monotone_map(self.poset, {p: a * self(p) for p in self.poset.elements})


def monotone_map(p: FinitePoset, values) -> MonotoneMap:
    if not isinstance(values, dict):
        values = dict(values)
    return MonotoneMap(p, tuple(sorted((pt, Fraction(v)) for pt, v in values.items())))


def indicator(p: FinitePoset, u) -> MonotoneMap:
    members = u.members if isinstance(u, PointSet) else frozenset(u)
    if not p.is_upper(members):
        raise NonMonotoneError("indicator of a non-upper set is not monotone")
    return monotone_map(p, {x: Fraction(int(x in members)) for x in p.elements})


def integrate(nu: Valuation, h: MonotoneMap) -> Fraction:
    """∫ h dν as the finite weighted sum Σ w(x)·h(x)."""
    same_carrier(nu, h)
    return sum((w * h(p) for p, w in nu.weights), Fraction(0))


def integrate_staircase(nu: Valuation, h: MonotoneMap) -> Fraction:
    """The threshold form Σ (t_k − t_{k-1})·ν([h > t_{k-1}]) of the same integral.

    Independent of ``integrate``; used as a cross-check.
    """
    same_carrier(nu, h)
    thresholds = sorted({h(p) for p in nu.poset.elements} | {Fraction(0)})
    out = Fraction(0)
    for lo, hi in zip(thresholds, thresholds[1:]):
        level = frozenset(x for x in nu.poset.elements if h(x) > lo)
        out += (hi - lo) * eval_open_set(nu, level)
    return out


def stochastic_leq(nu: Valuation, nu2: Valuation) -> bool:
    """ν ≤ ν' iff ν(U) ≤ ν'(U) for every open U."""
    same_carrier(nu, nu2)
    return all(eval_open_set(nu, u) <= eval_open_set(nu2, u) for u in nu.poset.upper_sets)


def pushforward(f: dict[str, str], nu: Valuation, target: FinitePoset) -> Valuation:
    """Image valuation along a monotone point map: weight of y is Σ_{f(x)=y} w(x)."""
    from .poset import is_monotone_map

    if not is_monotone_map(nu.poset, target, f):
        raise NonMonotoneError("pushforward needs a total monotone point map")
    acc: dict[str, Fraction] = {}
    for p, w in nu.weights:
        acc[f[p]] = acc.get(f[p], Fraction(0)) + w
    return valuation(target, acc, nu.kind)


def sort_value_key(obj):
    """Total order on carrier values so simple valuations canonicalize."""
    if isinstance(obj, frozenset):
        return ("set", tuple(sorted(sort_value_key(e) for e in obj)))
    if isinstance(obj, tuple):
        return ("tuple", tuple(sort_value_key(e) for e in obj))
    if isinstance(obj, str):
        return ("str", obj)
    if isinstance(obj, Fraction):
        return ("frac", obj.numerator, obj.denominator)
    if isinstance(obj, int):
        return ("int", obj)
    if hasattr(obj, "sort_key"):
        return (type(obj).__name__, sort_value_key(obj.sort_key()))
    raise TypeError(f"no canonical order for {type(obj).__name__}")


@dataclass(frozen=True)
class SimpleValuation:
    """Finite-support rational valuation over an arbitrary hashable carrier.

    Houses nested objects like valuations over upper sets, over quasi-lenses,
    or over valuations; ``atoms`` are (weight, carrier value) with positive
    weights and pairwise distinct carriers after canonicalization.
    """

    atoms: tuple[tuple[Fraction, object], ...]
    kind: str = GENERAL

    def __post_init__(self):
        if self.kind not in KINDS:
            raise KindError(f"unknown kind {self.kind!r}")
        total = self.total
        if self.kind == SUB and total > 1:
            raise KindError(f"sub valuation has total {total} > 1")
        if self.kind == PROB and total != 1:
            raise KindError(f"prob valuation has total {total} != 1")

    @property
    def total(self) -> Fraction:
        return sum((w for w, _ in self.atoms), Fraction(0))

    def map_atoms(self, f) -> "SimpleValuation":
        return simple_valuation([(w, f(c)) for w, c in self.atoms], self.kind)

    def sort_key(self):
        return (self.kind, tuple((w, sort_value_key(c)) for w, c in self.atoms))


def simple_valuation(atoms, kind: str = GENERAL) -> SimpleValuation:
    merged: list[tuple[Fraction, object]] = []
    for w, c in atoms:
        w = as_fraction(w)
        if w == 0:
            continue
        for i, (w2, c2) in enumerate(merged):
            if c2 == c:
                merged[i] = (w2 + w, c2)
                break
        else:
            merged.append((w, c))
    merged.sort(key=lambda wc: sort_value_key(wc[1]))
    return SimpleValuation(tuple(merged), kind)


def flatten(xi: SimpleValuation) -> Valuation:
    """Monad multiplication: Σ a_i·ν_i for ξ = Σ a_i δ_{ν_i} over valuations."""
    if not xi.atoms:
        raise CarrierMismatchError("cannot flatten an empty valuation-over-valuations")
    carriers = [c for _, c in xi.atoms]
    if not all(isinstance(c, Valuation) for c in carriers):
        raise CarrierMismatchError("flatten expects atoms carried by valuations")
    base = carriers[0].poset
    inner_kind = carriers[0].kind
    for c in carriers[1:]:
        if c.poset != base:
            raise CarrierMismatchError("atom carriers live on different posets")
        if c.kind != inner_kind:
            raise CarrierMismatchError("atom carriers mix kinds")
    acc: dict[str, Fraction] = {}
    for a, nu in xi.atoms:
        for p, w in nu.weights:
            acc[p] = acc.get(p, Fraction(0)) + a * w
    return valuation(base, acc, combine_kinds(xi.kind, inner_kind))


def map_valuation(xi: SimpleValuation, f) -> SimpleValuation:
    return xi.map_atoms(f)


def valuation_from_open_table(p: FinitePoset, table: dict[frozenset[str], Fraction],
                              kind: str = GENERAL) -> Valuation:
    """Recover point weights from a full open-set table by inclusion-exclusion.

    The table must be defined on every upper set, strict, modular and
    monotone; violations raise TableError carrying the witnessing sets.
    The derived weights must be nonnegative and must reproduce the table.
    """
    table = {frozenset(u): Fraction(v) for u, v in table.items()}
    opens = p.upper_sets
    for u in opens:
        if u not in table:
            raise TableError(f"table missing open {sorted(u)}", witness=u)
    if table[frozenset()] != 0:
        raise TableError("table is not strict: value on ∅ is nonzero", witness=frozenset())
    for u, v in itertools.combinations(opens, 2):
        lhs = table[u] + table[v]
        rhs = table[u | v] + table[u & v]
        if lhs != rhs:
            raise TableError(
                f"modularity fails on U={sorted(u)}, V={sorted(v)}: {lhs} != {rhs}",
                witness=(u, v),
            )
    for u in opens:
        for v in opens:
            if u <= v and table[u] > table[v]:
                raise TableError(
                    f"monotonicity fails on {sorted(u)} ⊆ {sorted(v)}", witness=(u, v)
                )
    weights = {}
    for x in p.elements:
        upx = p.up([x])
        weights[x] = table[upx] - table[upx - {x}]
        if weights[x] < 0:
            raise TableError(f"derived weight of {x!r} is {weights[x]} < 0 (not a valuation)",
                             witness=x)
    nu = valuation(p, weights, kind)
    for u in opens:
        if eval_open_set(nu, u) != table[u]:
            raise TableError(f"table is not point-derived at {sorted(u)}", witness=u)
    return nu


def open_table(nu: Valuation) -> dict[frozenset[str], Fraction]:
    return {u: eval_open_set(nu, u) for u in nu.poset.upper_sets}


def monotone_grid(p: FinitePoset, max_value: int = 3) -> list[MonotoneMap]:
    """Every monotone map with values in {0, …, max_value}."""
    return [monotone_map(p, dict(zip(p.elements, vals)))
            for vals in monotone_grid_tuples(p, max_value)]


def monotone_grid_tuples(p: FinitePoset, max_value: int) -> list[tuple[int, ...]]:
    elems = list(p.elements)
    idx = {x: i for i, x in enumerate(elems)}
    below = {x: [idx[y] for y in elems if p.le(y, x) and y != x] for x in elems}
    out: list[tuple[int, ...]] = []

    def rec(i: int, vals: list[int]):
        if i == len(elems):
            out.append(tuple(vals))
            return
        x = elems[i]
        lo = max((vals[j] for j in below[x] if j < i), default=0)
        # successors already assigned bound from above
        hi = max_value
        for y in elems[:i]:
            if p.le(x, y):
                hi = min(hi, vals[idx[y]])
        for v in range(lo, hi + 1):
            vals.append(v)
            rec(i + 1, vals)
            vals.pop()

    rec(0, [])
    return out
