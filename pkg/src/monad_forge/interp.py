"""Denotational interpreter for a loop-free probabilistic/nondeterministic
language into the fork monad, plus a brute-force strategy oracle.

Grammar: ``step f`` (monotone point map), ``pchoice p P Q``, ``dchoice P Q``
(demonic), ``achoice P Q`` (angelic), ``echoice P Q`` (erratic), ``seq P Q``.
Programs are finite trees, so denotations are total and exactly checkable.

Nondeterministic choice at generator level: erratic choice unions the lower
and upper generator sets componentwise; demonic choice widens the lower set
(union of the branches' lower generators) and pairs it with the degenerate
upper side built from the same set; angelic choice dually widens the upper
set.  The pairing is non-normative and is validated against the oracle,
which resolves each choice node by an arbitrary function of the current
point (strategies may observe the state reached after earlier coin flips)
and takes exact min/max of expectations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import NonMonotoneError, SchemaError
from .poset import FinitePoset, is_monotone_map
from .prevision import Fork, prevision_leq, sub_prevision, super_prevision, unit_prevision
from .valuation import MonotoneMap, Valuation, integrate, valuation

STEP, PCHOICE, DCHOICE, ACHOICE, ECHOICE, SEQ = (
    "step", "pchoice", "dchoice", "achoice", "echoice", "seq",
)
CHOICE_OPS = (DCHOICE, ACHOICE, ECHOICE)


@dataclass(frozen=True)
class ProgramAst:
    op: str
    map: tuple[tuple[str, str], ...] | None = None      # step
    p: Fraction | None = None                           # pchoice
    left: "ProgramAst | None" = None
    right: "ProgramAst | None" = None

    def __post_init__(self):
        if self.op == STEP:
            if self.map is None:
                raise SchemaError("step needs a point map")
        elif self.op == PCHOICE:
            if self.p is None or not (0 <= self.p <= 1):
                raise SchemaError("pchoice needs a rational p in [0, 1]")
            if self.left is None or self.right is None:
                raise SchemaError("pchoice needs two branches")
        elif self.op in CHOICE_OPS or self.op == SEQ:
            if self.left is None or self.right is None:
                raise SchemaError(f"{self.op} needs two branches")
        else:
            raise SchemaError(f"unknown operator {self.op!r}")

    def choice_nodes(self) -> list[tuple]:
        """Paths of the nondeterministic nodes, for strategy enumeration."""
        out = []

        def walk(node, path):
            if node is None:
                return
            if node.op in CHOICE_OPS:
                out.append(path)
            walk(node.left, path + ("L",))
            walk(node.right, path + ("R",))

        walk(self, ())
        return out


def step(f: dict[str, str]) -> ProgramAst:
    return ProgramAst(STEP, map=tuple(sorted(f.items())))


def pchoice(p, left: ProgramAst, right: ProgramAst) -> ProgramAst:
    return ProgramAst(PCHOICE, p=Fraction(p), left=left, right=right)


def dchoice(left, right) -> ProgramAst:
    return ProgramAst(DCHOICE, left=left, right=right)


def achoice(left, right) -> ProgramAst:
    return ProgramAst(ACHOICE, left=left, right=right)


def echoice(left, right) -> ProgramAst:
    return ProgramAst(ECHOICE, left=left, right=right)


def seq(first, then) -> ProgramAst:
    return ProgramAst(SEQ, left=first, right=then)


def validate_program(p: FinitePoset, prog: ProgramAst) -> None:
    if prog.op == STEP:
        if not is_monotone_map(p, p, dict(prog.map)):
            raise NonMonotoneError(f"step map {dict(prog.map)} is not monotone")
        return
    validate_program(p, prog.left)
    validate_program(p, prog.right)


def _mix_fork(pr: Fraction, a: Fork, b: Fork) -> Fork:
    """Convex mixture at generator level (the algebra-map view of pchoice)."""
    def mix(ga, gb, build_kind):
        out = []
        for x, y in itertools.product(ga, gb):
            acc: dict[str, Fraction] = {}
            for q, w in x.weights:
                acc[q] = acc.get(q, Fraction(0)) + pr * w
            for q, w in y.weights:
                acc[q] = acc.get(q, Fraction(0)) + (1 - pr) * w
            out.append(valuation(x.poset, acc, build_kind))
        return out

    kind = a.kind if a.kind == b.kind else "general"
    if pr == 1:
        return a
    if pr == 0:
        return b
    return Fork(
        super_prevision(mix(a.lower.generators, b.lower.generators, kind)),
        sub_prevision(mix(a.upper.generators, b.upper.generators, kind)),
    )


def _union_fork(op: str, a: Fork, b: Fork) -> Fork:
    if op == ECHOICE:
        lo = a.lower.generators + b.lower.generators
        hi = a.upper.generators + b.upper.generators
    elif op == DCHOICE:
        lo = hi = a.lower.generators + b.lower.generators
    else:  # ACHOICE
        lo = hi = a.upper.generators + b.upper.generators
    return Fork(super_prevision(lo), sub_prevision(hi))


def _seq_fork(p: FinitePoset, first: Fork, then_family: dict[str, Fork]) -> Fork:
    from .prevision import kleisli_extend

    return kleisli_extend("ADN", then_family, first)


def denote_program(p: FinitePoset, prog: ProgramAst) -> dict[str, Fork]:
    """The fork family x ↦ ⟦prog⟧(x); raises with witnesses if not monotone."""
    validate_program(p, prog)

    def denote(node: ProgramAst) -> dict[str, Fork]:
        if node.op == STEP:
            f = dict(node.map)
            return {x: unit_prevision("ADN", p, f[x]) for x in p.elements}
        left = denote(node.left)
        right = denote(node.right)
        if node.op == PCHOICE:
            return {x: _mix_fork(node.p, left[x], right[x]) for x in p.elements}
        if node.op in CHOICE_OPS:
            return {x: _union_fork(node.op, left[x], right[x]) for x in p.elements}
        # seq: run left, continue with the right family from wherever it lands
        return {x: _seq_fork(p, left[x], right) for x in p.elements}

    family = denote(prog)
    for (x, y) in p.leq:
        if x != y and not prevision_leq(family[x], family[y]):
            raise NonMonotoneError(
                f"denotation not monotone: fork at {x!r} is not below fork at {y!r}"
            )
    return family


def query_fork(family: dict[str, Fork], x: str, h: MonotoneMap) -> tuple[Fraction, Fraction]:
    """(F⁻(h), F⁺(h)) at a start point; lower ≤ upper always holds."""
    fork = family[x]
    lo, hi = fork(h)
    return lo, hi


# --- brute-force oracle -----------------------------------------------------


def _strategy_distribution(p: FinitePoset, prog: ProgramAst, x: str,
                           strategy: dict[tuple, dict[str, str]], path=()) -> Valuation:
    """Distribution over final points with all nondeterminism resolved."""
    if prog.op == STEP:
        return valuation(p, {dict(prog.map)[x]: Fraction(1)}, "prob")
    if prog.op == PCHOICE:
        da = _strategy_distribution(p, prog.left, x, strategy, path + ("L",))
        db = _strategy_distribution(p, prog.right, x, strategy, path + ("R",))
        acc: dict[str, Fraction] = {}
        for q, w in da.weights:
            acc[q] = acc.get(q, Fraction(0)) + prog.p * w
        for q, w in db.weights:
            acc[q] = acc.get(q, Fraction(0)) + (1 - prog.p) * w
        return valuation(p, acc, "prob")
    if prog.op in CHOICE_OPS:
        branch = strategy[path][x]
        child = prog.left if branch == "L" else prog.right
        return _strategy_distribution(p, child, x, strategy, path + (branch,))
    # seq
    first = _strategy_distribution(p, prog.left, x, strategy, path + ("L",))
    acc = {}
    for mid, w in first.weights:
        rest = _strategy_distribution(p, prog.right, mid, strategy, path + ("R",))
        for q, wq in rest.weights:
            acc[q] = acc.get(q, Fraction(0)) + w * wq
    return valuation(p, acc, "prob")


def oracle_bounds(p: FinitePoset, prog: ProgramAst, x: str, h: MonotoneMap) -> tuple[Fraction, Fraction]:
    """Exact min/max expectation over every strategy resolving the choices.

    A strategy assigns, per choice node, a branch for each possible current
    point (so it may react to outcomes of earlier coin flips); this matches
    the choice-function semantics of sequential composition.
    """
    nodes = prog.choice_nodes()
    pts = list(p.elements)
    lo = hi = None
    assignments = itertools.product(
        *[[dict(zip(pts, combo)) for combo in itertools.product("LR", repeat=len(pts))]
          for _ in nodes]
    )
    for combo in assignments:
        strategy = dict(zip(nodes, combo))
        dist = _strategy_distribution(p, prog, x, strategy)
        val = integrate(dist, h)
        lo = val if lo is None or val < lo else lo
        hi = val if hi is None or val > hi else hi
    return lo, hi
