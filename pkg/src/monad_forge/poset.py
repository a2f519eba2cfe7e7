"""Finite T0 spaces as posets with the upper-set (Alexandrov) topology.

A finite T0 space is exactly a finite poset whose open sets are the
upward-closed sets.  Closure is downward closure, every subset is compact,
saturated means upward-closed.  All hypotheses needed elsewhere (sobriety,
local compactness, stable compactness, weak Hausdorffness) hold automatically
for finite posets, so no side conditions are ever checked at runtime.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import InvalidElementError, PosetError, RoleViolationError, UnknownPointError

UPPER = "upper"
LOWER = "lower"
PLAIN = "plain"


@dataclass(frozen=True)
class FinitePoset:
    """A finite partial order; ``leq`` is the full reflexive-transitive relation."""

    elements: tuple[str, ...]
    leq: frozenset[tuple[str, str]]

    def le(self, x: str, y: str) -> bool:
        return (x, y) in self.leq

    def check_points(self, pts) -> None:
        for p in pts:
            if p not in self._element_set:
                raise UnknownPointError(f"unknown point {p!r}")

    @cached_property
    def _element_set(self) -> frozenset[str]:
        return frozenset(self.elements)

    @cached_property
    def _ups(self) -> dict[str, frozenset[str]]:
        return {x: frozenset(y for y in self.elements if self.le(x, y)) for x in self.elements}

    @cached_property
    def _downs(self) -> dict[str, frozenset[str]]:
        return {x: frozenset(y for y in self.elements if self.le(y, x)) for x in self.elements}

    def up(self, pts) -> frozenset[str]:
        """Upward closure: the least upper set containing ``pts``."""
        self.check_points(pts)
        out: set[str] = set()
        for p in pts:
            out |= self._ups[p]
        return frozenset(out)

    def down(self, pts) -> frozenset[str]:
        """Downward closure; on finite posets this is topological closure."""
        self.check_points(pts)
        out: set[str] = set()
        for p in pts:
            out |= self._downs[p]
        return frozenset(out)

    def is_upper(self, s) -> bool:
        return self.up(s) == frozenset(s)

    def is_lower(self, s) -> bool:
        return self.down(s) == frozenset(s)

    @cached_property
    def upper_sets(self) -> tuple[frozenset[str], ...]:
        """All upward-closed subsets (the open sets), canonically ordered."""
        if len(self.elements) > 20:
            raise PosetError("refusing to enumerate opens beyond 20 points")
        out = [frozenset(s) for s in iter_upper_sets(self)]
        out.sort(key=set_sort_key)
        return tuple(out)

    @cached_property
    def lower_sets(self) -> tuple[frozenset[str], ...]:
        return tuple(sorted((self._element_set - u for u in self.upper_sets), key=set_sort_key))

    def minimal(self, s) -> frozenset[str]:
        return frozenset(x for x in s if not any(self.le(y, x) and y != x for y in s))

    def maximal(self, s) -> frozenset[str]:
        return frozenset(x for x in s if not any(self.le(x, y) and y != x for y in s))

    def is_order_convex(self, s) -> bool:
        ss = frozenset(s)
        return bool(ss) and (self.up(ss) & self.down(ss)) == ss

    def is_antichain_poset(self) -> bool:
        return all(x == y for (x, y) in self.leq)

    def __repr__(self) -> str:  # compact, deterministic
        strict = sorted((a, b) for (a, b) in self.leq if a != b)
        return f"FinitePoset({list(self.elements)}, {strict})"


def set_sort_key(s):
    """Canonical encoding for sets of point identifiers (lexicographic)."""
    return (len(s), tuple(sorted(s)))


def build_poset(elements, leq_pairs) -> FinitePoset:
    """Build a poset from generating pairs, closing reflexively-transitively.

    Raises PosetError on duplicate identifiers or on a cycle (the closure
    would not be antisymmetric, so the data does not describe a T0 space).
    """
    elements = list(elements)
    if len(set(elements)) != len(elements):
        dupes = sorted({e for e in elements if elements.count(e) > 1})
        raise PosetError(f"duplicate element identifier(s): {dupes}")
    elem_set = set(elements)
    rel = {(x, x) for x in elements}
    for (a, b) in leq_pairs:
        if a not in elem_set or b not in elem_set:
            raise UnknownPointError(f"leq pair ({a!r}, {b!r}) mentions an unknown point")
        rel.add((a, b))
    # Floyd-Warshall style transitive closure
    changed = True
    while changed:
        changed = False
        for (a, b) in list(rel):
            for c in elements:
                if (b, c) in rel and (a, c) not in rel:
                    rel.add((a, c))
                    changed = True
    for (a, b) in rel:
        if a != b and (b, a) in rel:
            raise PosetError(f"cycle detected through {a!r} and {b!r}: not antisymmetric")
    return FinitePoset(tuple(sorted(elements)), frozenset(rel))


def iter_upper_sets(p: FinitePoset):
    """Lazily yield every upward-closed subset of ``p`` exactly once.

    Branch on each element in a fixed order: including x forces ↑x in,
    excluding x forces ↓x out.
    """
    elems = list(p.elements)

    def rec(i: int, inside: frozenset[str], outside: frozenset[str]):
        while i < len(elems) and (elems[i] in inside or elems[i] in outside):
            i += 1
        if i == len(elems):
            yield inside
            return
        x = elems[i]
        yield from rec(i + 1, inside | p._ups[x], outside)
        yield from rec(i + 1, inside, outside | p._downs[x])

    yield from rec(0, frozenset(), frozenset())


def count_upper_sets(p: FinitePoset, cap: int | None = None) -> int:
    n = 0
    for _ in iter_upper_sets(p):
        n += 1
        if cap is not None and n > cap:
            return n
    return n


def enumerate_upper_sets(p: FinitePoset) -> list["PointSet"]:
    """All opens of ``p`` as upper PointSets, deterministic order."""
    return [PointSet(p, u, UPPER) for u in p.upper_sets]


@dataclass(frozen=True)
class PointSet:
    """A subset of a poset tagged with the role it claims (upper/lower/plain)."""

    poset: FinitePoset
    members: frozenset[str]
    role: str = PLAIN

    def __post_init__(self):
        self.poset.check_points(self.members)
        if self.role == UPPER and not self.poset.is_upper(self.members):
            raise RoleViolationError(f"{sorted(self.members)} is not upward-closed")
        if self.role == LOWER and not self.poset.is_lower(self.members):
            raise RoleViolationError(f"{sorted(self.members)} is not downward-closed")

    def __contains__(self, x) -> bool:
        return x in self.members

    def sort_key(self):
        return set_sort_key(self.members)


def order_closure(p: FinitePoset, a, direction: str) -> PointSet:
    """Smallest upper (``"up"``) or lower (``"down"``) set containing ``a``."""
    members = a.members if isinstance(a, PointSet) else frozenset(a)
    if direction == "up":
        return PointSet(p, p.up(members), UPPER)
    if direction == "down":
        return PointSet(p, p.down(members), LOWER)
    raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")


@dataclass(frozen=True)
class QuasiLens:
    """A pair (Q upper, C lower) with mutual-closure conditions.

    On a finite poset the third condition collapses to C ⊆ ↓(Q∩C) because
    Q itself is the least open neighborhood of Q and closures shrink with
    the neighborhood.
    """

    q: PointSet
    c: PointSet

    def __post_init__(self):
        if self.q.role != UPPER or not self.q.members:
            raise RoleViolationError("Q must be a nonempty upper set")
        if self.c.role != LOWER or not self.c.members:
            raise RoleViolationError("C must be a nonempty lower set")
        if self.q.poset is not self.c.poset and self.q.poset != self.c.poset:
            raise InvalidElementError("Q and C live on different posets")
        p = self.q.poset
        core = self.q.members & self.c.members
        if not core:
            raise InvalidElementError("Q and C do not intersect")
        if not (self.q.members <= p.up(core)):
            raise InvalidElementError("Q not contained in the up-closure of Q∩C")
        if not (self.c.members <= p.down(core)):
            raise InvalidElementError("C not contained in the closure of Q∩C")

    def sort_key(self):
        return (set_sort_key(self.q.members), set_sort_key(self.c.members))


@dataclass(frozen=True)
class Lens:
    """A nonempty order-convex subset (equivalently Q∩C for some quasi-lens)."""

    poset: FinitePoset
    members: frozenset[str]

    def __post_init__(self):
        self.poset.check_points(self.members)
        if not self.members:
            raise InvalidElementError("a lens is nonempty")
        if not self.poset.is_order_convex(self.members):
            raise InvalidElementError(f"{sorted(self.members)} is not order-convex")

    def sort_key(self):
        return set_sort_key(self.members)


def validate_quasi_lens(p: FinitePoset, q: PointSet, c: PointSet) -> bool:
    """True iff (Q, C) satisfies the three quasi-lens conditions.

    Role violations raise; a well-typed pair that fails the conditions
    returns False.
    """
    if q.role != UPPER:
        raise RoleViolationError("Q must carry the upper role")
    if c.role != LOWER:
        raise RoleViolationError("C must carry the lower role")
    if not q.members or not c.members:
        raise RoleViolationError("Q and C must be nonempty")
    core = q.members & c.members
    if not core:
        return False
    return q.members <= p.up(core) and c.members <= p.down(core)


def quasi_lens_condition_literal(p: FinitePoset, q: PointSet, c: PointSet) -> bool:
    """The unreduced third condition: for every open U ⊇ Q, C ⊆ ↓(U∩C).

    Used as a cross-check of the minimal-open reduction in
    ``validate_quasi_lens``; quantifies over every enumerated open.
    """
    if not (q.members and c.members and q.members & c.members):
        return False
    if not (q.members <= p.up(q.members & c.members)):
        return False
    for u in p.upper_sets:
        if q.members <= u and not (c.members <= p.down(u & c.members)):
            return False
    return True


def lens_bridge(p: FinitePoset, value):
    """Transport between lenses and quasi-lenses.

    A lens L maps to (↑L, ↓L); a quasi-lens (Q, C) maps to Q∩C.  The two
    directions are mutually inverse on finite posets.
    """
    if isinstance(value, Lens):
        return QuasiLens(
            PointSet(p, p.up(value.members), UPPER),
            PointSet(p, p.down(value.members), LOWER),
        )
    if isinstance(value, QuasiLens):
        return Lens(p, value.q.members & value.c.members)
    raise InvalidElementError(f"expected Lens or QuasiLens, got {type(value).__name__}")


def enumerate_lenses(p: FinitePoset) -> list[frozenset[str]]:
    """All nonempty order-convex subsets, canonically ordered."""
    out = []
    for r in range(1, len(p.elements) + 1):
        for combo in itertools.combinations(p.elements, r):
            s = frozenset(combo)
            if p.is_order_convex(s):
                out.append(s)
    out.sort(key=set_sort_key)
    return out


def monotone_point_maps(p: FinitePoset, q: FinitePoset) -> list[dict[str, str]]:
    """Every monotone map p -> q (intended for posets of ≤ 3-4 points)."""
    maps = []
    for values in itertools.product(q.elements, repeat=len(p.elements)):
        f = dict(zip(p.elements, values))
        if all(q.le(f[a], f[b]) for (a, b) in p.leq):
            maps.append(f)
    return maps


def is_monotone_map(p: FinitePoset, q: FinitePoset, f: dict[str, str]) -> bool:
    p.check_points(f.keys())
    q.check_points(f.values())
    if set(f.keys()) != set(p.elements):
        return False
    return all(q.le(f[a], f[b]) for (a, b) in p.leq)


def _canonical_form(n: int, strict_pairs: frozenset[tuple[int, int]]) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        img = tuple(sorted((perm[a], perm[b]) for (a, b) in strict_pairs))
        if best is None or img < best:
            best = img
    return (n, best)


def enumerate_posets(max_points: int) -> list[FinitePoset]:
    """All posets with at most ``max_points`` elements, one per iso class.

    Candidates are generated with edges only along a fixed linear order
    (every finite poset admits a linear extension, so nothing is missed),
    then deduplicated by a canonical form over all permutations.
    """
    out = []
    seen = set()
    for n in range(0, max_points + 1):
        names = [f"p{i}" for i in range(n)]
        fwd = [(i, j) for i in range(n) for j in range(i + 1, n)]
        for mask in range(1 << len(fwd)):
            pairs = {fwd[k] for k in range(len(fwd)) if mask >> k & 1}
            # transitive closure over the chosen forward edges
            changed = True
            while changed:
                changed = False
                for (a, b) in list(pairs):
                    for (c, d) in list(pairs):
                        if b == c and (a, d) not in pairs:
                            pairs.add((a, d))
                            changed = True
            key = _canonical_form(n, frozenset(pairs))
            if key in seen:
                continue
            seen.add(key)
            out.append(build_poset(names, [(names[a], names[b]) for (a, b) in pairs]))
    return out
