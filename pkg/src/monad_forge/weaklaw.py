"""The three weak distributive laws at generator level, plus their oracles.

``lambda_apply`` computes the law's value on a finite-support valuation over
a hyperspace as a generated convex set: the generators are the mixtures
Σ_i a_i·δ_{x_i} with each x_i chosen inside atom i (one choice function per
generator).  ``lambda_member`` implements the independent characterization —
the defining inequalities ν(U) ≥ μ(□U) (demonic) and ν(U) ≤ μ(◇U) (angelic)
— quantified over every open set, and never goes through ``lambda_apply``;
the two are cross-checked against each other by the harness.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .convex import GenQuasiLens, canonicalize_generators, gen_downset, gen_upset
from .errors import CarrierMismatchError, EmptyAtomError, InvalidElementError
from .hyperspace import validate_element
from .poset import FinitePoset
from .valuation import MonotoneMap, SimpleValuation, Valuation, eval_open_set, valuation

SHARP, FLAT, NATURAL, LENS_LAW = "sharp", "flat", "natural", "lens"

# min for the demonic star h*, max for the angelic star h_* (patchable in tests)
STAR_OPS = {"upper": min, "lower": max}


def star_transform(direction: str, h: MonotoneMap):
    """h* (min over a compact saturated set) or h_* (max over a closed set)."""
    if direction not in STAR_OPS:
        raise InvalidElementError(f"unknown star direction {direction!r}")

    def value(e) -> Fraction:
        if not e:
            raise EmptyAtomError("star transforms are undefined on the empty set")
        return STAR_OPS[direction](h(x) for x in e)

    return value


def choice_tuples(atom_sets):
    """All choice functions through the given atoms, in deterministic order."""
    pools = [sorted(a) for a in atom_sets]
    return itertools.product(*pools)


def _mix_generators(p: FinitePoset, mu: SimpleValuation, atom_sets) -> list[Valuation]:
    gens = []
    for combo in choice_tuples(atom_sets):
        acc: dict[str, Fraction] = {}
        for (a, _), x in zip(mu.atoms, combo):
            acc[x] = acc.get(x, Fraction(0)) + a
        gens.append(valuation(p, acc, mu.kind))
    return gens


def lambda_apply(kind: str, p: FinitePoset, mu: SimpleValuation):
    """Apply a weak distributive law to μ ∈ V(hyperspace), canonically.

    sharp: upper-set atoms → GenUpset; flat: lower-set atoms → GenDownset;
    natural: quasi-lens atoms → GenQuasiLens (componentwise); lens: lens
    atoms transported through L ↦ (↑L, ↓L) and treated as natural.
    """
    if kind == SHARP:
        for _, e in mu.atoms:
            validate_element("S", p, e)
        gens = _mix_generators(p, mu, [e for _, e in mu.atoms])
        return canonicalize_generators(gen_upset(gens))
    if kind == FLAT:
        for _, e in mu.atoms:
            validate_element("H", p, e)
        gens = _mix_generators(p, mu, [e for _, e in mu.atoms])
        return canonicalize_generators(gen_downset(gens))
    if kind == NATURAL:
        for _, e in mu.atoms:
            validate_element("QL", p, e)
        up = _mix_generators(p, mu, [q for _, (q, _) in mu.atoms])
        down = _mix_generators(p, mu, [c for _, (_, c) in mu.atoms])
        return GenQuasiLens(
            canonicalize_generators(gen_upset(up)),
            canonicalize_generators(gen_downset(down)),
        )
    if kind == LENS_LAW:
        for _, e in mu.atoms:
            validate_element("Lens", p, e)
        lifted = mu.map_atoms(lambda l: (p.up(l), p.down(l)))
        return lambda_apply(NATURAL, p, lifted)
    raise InvalidElementError(f"unknown law {kind!r}")


def box_mass(p: FinitePoset, mu: SimpleValuation, u: frozenset) -> Fraction:
    """μ(□U): the mass of atoms entirely inside the open U."""
    return sum((a for a, e in mu.atoms if e <= u), Fraction(0))


def diamond_mass(p: FinitePoset, mu: SimpleValuation, u: frozenset) -> Fraction:
    """μ(◇U): the mass of atoms meeting the open U."""
    return sum((a for a, e in mu.atoms if e & u), Fraction(0))


def lambda_member(kind: str, p: FinitePoset, mu: SimpleValuation, nu: Valuation) -> bool:
    """Defining-inequality membership of ν in the law's value at μ.

    Enumerates every open set directly; intentionally independent of
    ``lambda_apply`` so the two characterizations can be compared.
    """
    if nu.poset != p:
        raise CarrierMismatchError("candidate valuation lives on a different poset")
    if kind == SHARP:
        return all(eval_open_set(nu, u) >= box_mass(p, mu, u) for u in p.upper_sets)
    if kind == FLAT:
        return all(eval_open_set(nu, u) <= diamond_mass(p, mu, u) for u in p.upper_sets)
    raise InvalidElementError(f"lambda_member is defined for sharp/flat, got {kind!r}")


def transform_eval(kind: str, p: FinitePoset, mu: SimpleValuation, h: MonotoneMap):
    """The prevision transforms Φ (weighted minima), Ψ (weighted maxima), Θ (pair)."""
    if kind == "phi":
        star = star_transform("upper", h)
        for _, e in mu.atoms:
            validate_element("S", p, e)
        return sum((a * star(e) for a, e in mu.atoms), Fraction(0))
    if kind == "psi":
        star = star_transform("lower", h)
        for _, e in mu.atoms:
            validate_element("H", p, e)
        return sum((a * star(e) for a, e in mu.atoms), Fraction(0))
    if kind == "theta":
        for _, e in mu.atoms:
            validate_element("QL", p, e)
        up = star_transform("upper", h)
        down = star_transform("lower", h)
        lo = sum((a * up(q) for a, (q, _) in mu.atoms), Fraction(0))
        hi = sum((a * down(c) for a, (_, c) in mu.atoms), Fraction(0))
        return lo, hi
    raise InvalidElementError(f"unknown transform {kind!r}")
