"""The four nondeterminism monads on finite posets.

Elements are kept in plain form over a carrier poset:

* demonic (``S``): a nonempty upper set, space ordered by reverse inclusion;
* angelic (``H``): a nonempty lower set, ordered by inclusion;
* quasi-lens (``QL``): a pair (Q upper, C lower) with the mutual-closure
  conditions, ordered by ⊇ × ⊆;
* erratic (``Lens``): a nonempty order-convex set, Egli-Milner ordered.

Nested elements (an element over a hyperspace) live over the derived poset
built by :func:`hyperspace_poset`, whose points are canonical string
encodings of the inner elements.
"""

from __future__ import annotations

from .errors import InvalidElementError, NonMonotoneError, UnknownPointError
from .poset import FinitePoset, build_poset, enumerate_lenses, is_monotone_map, set_sort_key

S, H, QL, LENS = "S", "H", "QL", "Lens"
KINDS = (S, H, QL, LENS)


def upward(p: FinitePoset, pts) -> frozenset:
    return p.up(pts)


def downward(p: FinitePoset, pts) -> frozenset:
    return p.down(pts)


def validate_element(kind: str, p: FinitePoset, e) -> None:
    if kind == S:
        if not e or not p.is_upper(e):
            raise InvalidElementError(f"not a nonempty upper set: {sorted(e)}")
    elif kind == H:
        if not e or not p.is_lower(e):
            raise InvalidElementError(f"not a nonempty lower set: {sorted(e)}")
    elif kind == QL:
        q, c = e
        if not q or not c or not p.is_upper(q) or not p.is_lower(c):
            raise InvalidElementError("quasi-lens needs a nonempty upper Q and lower C")
        core = q & c
        if not core or not (q <= p.up(core)) or not (c <= p.down(core)):
            raise InvalidElementError("pair fails the quasi-lens conditions")
    elif kind == LENS:
        if not e or not p.is_order_convex(e):
            raise InvalidElementError(f"not a nonempty order-convex set: {sorted(e)}")
    else:
        raise InvalidElementError(f"unknown hyperspace kind {kind!r}")


def hyper_unit(kind: str, p: FinitePoset, x: str):
    """↑x / ↓x / (↑x, ↓x) / {x} depending on the nondeterminism flavor."""
    p.check_points([x])
    if kind == S:
        return upward(p, [x])
    if kind == H:
        return downward(p, [x])
    if kind == QL:
        return (upward(p, [x]), downward(p, [x]))
    if kind == LENS:
        return upward(p, [x]) & downward(p, [x])
    raise InvalidElementError(f"unknown hyperspace kind {kind!r}")


def hyper_map(kind: str, src: FinitePoset, dst: FinitePoset, f: dict[str, str], e):
    """Functorial action along a monotone point map, closing as required."""
    if not is_monotone_map(src, dst, f):
        raise NonMonotoneError("hyper_map needs a total monotone point map")
    validate_element(kind, src, e)
    if kind == S:
        return upward(dst, {f[x] for x in e})
    if kind == H:
        return downward(dst, {f[x] for x in e})
    if kind == QL:
        q, c = e
        return (upward(dst, {f[x] for x in q}), downward(dst, {f[x] for x in c}))
    img = {f[x] for x in e}
    return upward(dst, img) & downward(dst, img)


def element_leq(kind: str, p: FinitePoset, e1, e2) -> bool:
    """The specialization order of the hyperspace."""
    if kind == S:
        return e1 >= e2
    if kind == H:
        return e1 <= e2
    if kind == QL:
        return e1[0] >= e2[0] and e1[1] <= e2[1]
    if kind == LENS:
        return egli_milner_leq(p, e1, e2)
    raise InvalidElementError(f"unknown hyperspace kind {kind!r}")


def egli_milner_leq(p: FinitePoset, l1, l2) -> bool:
    """L ≤ L' iff ↑L ⊇ ↑L' and ↓L ⊆ ↓L'."""
    return p.up(l1) >= p.up(l2) and p.down(l1) <= p.down(l2)


def hyper_mult(kind: str, p: FinitePoset, nested):
    """Monad multiplication: flatten an element over the hyperspace.

    ``nested`` holds inner elements in plain form; it must itself be a valid
    element for the derived space (checked against the derived order).
    """
    validate_nested(kind, p, nested)
    if kind == S:
        out: set = set()
        for q in nested:
            out |= q
        return frozenset(out)
    if kind == H:
        out = set()
        for c in nested:
            out |= c
        return downward(p, out)
    if kind == QL:
        qs, cs = nested
        q_out: set = set()
        for (q, _) in qs:
            q_out |= q
        c_out: set = set()
        for (_, c) in cs:
            c_out |= c
        return (frozenset(q_out), downward(p, c_out))
    out = set()
    for l in nested:
        out |= l
    return upward(p, out) & downward(p, out)


def validate_nested(kind: str, p: FinitePoset, nested) -> None:
    if kind in (S, H, LENS):
        if not nested:
            raise InvalidElementError("nested element is empty")
        for e in nested:
            validate_element(kind, p, e)
        members = frozenset(nested)
        if kind == S and not _order_closed(kind, p, members, up=True):
            raise InvalidElementError("nested element is not upward-closed in the derived order")
        if kind == H and not _order_closed(kind, p, members, up=False):
            raise InvalidElementError("nested element is not downward-closed in the derived order")
        if kind == LENS:
            hull = up_closure_elements(LENS, p, members) & down_closure_elements(LENS, p, members)
            if hull != members:
                raise InvalidElementError("nested element is not order-convex in the Egli-Milner order")
    elif kind == QL:
        qs, cs = nested
        qs, cs = frozenset(qs), frozenset(cs)
        if not qs or not cs:
            raise InvalidElementError("nested quasi-lens has an empty component")
        for e in list(qs) + list(cs):
            validate_element(QL, p, e)
        if not _order_closed(QL, p, qs, up=True):
            raise InvalidElementError("Q-component is not upward-closed in the derived order")
        if not _order_closed(QL, p, cs, up=False):
            raise InvalidElementError("C-component is not downward-closed in the derived order")
        core = qs & cs
        if not core:
            raise InvalidElementError("nested quasi-lens components do not intersect")
        up_ok = all(any(element_leq(QL, p, e2, e) for e2 in core) for e in qs)
        down_ok = all(any(element_leq(QL, p, e, e2) for e2 in core) for e in cs)
        if not (up_ok and down_ok):
            raise InvalidElementError("nested pair fails the quasi-lens conditions")
    else:
        raise InvalidElementError(f"unknown hyperspace kind {kind!r}")


def _order_closed(kind: str, p: FinitePoset, members: frozenset, up: bool) -> bool:
    universe = enumerate_elements(kind, p)
    for e in members:
        for e2 in universe:
            above = element_leq(kind, p, e, e2) if up else element_leq(kind, p, e2, e)
            if above and e2 not in members:
                return False
    return True


def enumerate_elements(kind: str, p: FinitePoset) -> list:
    """All elements of the hyperspace, canonically ordered."""
    if kind == S:
        return [u for u in p.upper_sets if u]
    if kind == H:
        return [c for c in p.lower_sets if c]
    if kind == LENS:
        return enumerate_lenses(p)
    if kind == QL:
        return [(p.up(l), p.down(l)) for l in enumerate_lenses(p)]
    raise InvalidElementError(f"unknown hyperspace kind {kind!r}")


def element_name(kind: str, e) -> str:
    if kind == QL:
        return "(" + _set_name(e[0]) + "|" + _set_name(e[1]) + ")"
    return _set_name(e)


def _set_name(s) -> str:
    return "{" + ",".join(sorted(s)) + "}"


def element_sort_key(kind: str, e):
    if kind == QL:
        return (set_sort_key(e[0]), set_sort_key(e[1]))
    return set_sort_key(e)


class HyperPoset:
    """A hyperspace as a finite poset with string point names."""

    def __init__(self, kind: str, base: FinitePoset):
        self.kind = kind
        self.base = base
        elems = sorted(enumerate_elements(kind, base), key=lambda e: element_sort_key(kind, e))
        self.decode = {element_name(kind, e): e for e in elems}
        names = list(self.decode)
        pairs = [
            (a, b)
            for a in names
            for b in names
            if element_leq(kind, base, self.decode[a], self.decode[b])
        ]
        self.poset = build_poset(names, pairs)

    def encode(self, e) -> str:
        name = element_name(self.kind, e)
        if name not in self.decode:
            raise UnknownPointError(f"{name} is not an element of this hyperspace")
        return name


def hyperspace_poset(kind: str, base: FinitePoset) -> HyperPoset:
    return HyperPoset(kind, base)


def up_closure_elements(kind: str, p: FinitePoset, seeds) -> frozenset:
    """Upward closure of a set of elements inside the derived order."""
    universe = enumerate_elements(kind, p)
    return frozenset(e for e in universe
                     if any(element_leq(kind, p, s, e) for s in seeds))


def down_closure_elements(kind: str, p: FinitePoset, seeds) -> frozenset:
    universe = enumerate_elements(kind, p)
    return frozenset(e for e in universe
                     if any(element_leq(kind, p, e, s) for s in seeds))
