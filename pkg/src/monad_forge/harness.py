"""Executable verification of the monad laws, the three weak distributive
laws, the retraction identities, Walley's condition, the inverse-image
lemmas, the minimax identity, the discrete-space degeneracy, and the
interpreter oracle — randomized and exhaustive instance generation with
counterexample reporting.

Every report is replayable: failing reports carry the instance (seed plus a
human-readable description), and truncated exhaustive sweeps are recorded as
explicit skips, never silently.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import convex, weaklaw
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
from .errors import ForgeError
from .hyperspace import (
    HyperPoset,
    enumerate_elements,
    hyper_map,
    hyper_mult,
    hyper_unit,
    hyperspace_poset,
    up_closure_elements,
    down_closure_elements,
)
from .interp import (
    CHOICE_OPS,
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
from .linprog import EQ, GE, GT, LE, constraint, feasible, maximin_over_simplex, solve
from .poset import FinitePoset, enumerate_posets, iter_upper_sets, monotone_point_maps
from .prevision import (
    ADN,
    AN,
    DN,
    Fork,
    eval_prevision,
    kleisli_extend,
    prevision_equal,
    retract_r,
    section_s,
    sub_prevision,
    super_prevision,
    unit_prevision,
    walley_check,
)
from .valuation import (
    GENERAL,
    PROB,
    SUB,
    MonotoneMap,
    SimpleValuation,
    Valuation,
    combine_kinds,
    eval_open_set,
    flatten,
    integrate,
    monotone_grid,
    monotone_map,
    pushforward,
    simple_valuation,
    unit_valuation,
    valuation,
    zero_valuation,
)

MONADS = ("V", "S", "H", "QL", "Lens", "PDN", "PAN", "PADN")
WEAK_LAWS = (weaklaw.SHARP, weaklaw.FLAT, weaklaw.NATURAL)
HYPER_OF_LAW = {weaklaw.SHARP: "S", weaklaw.FLAT: "H", weaklaw.NATURAL: "QL"}


@dataclass
class LawReport:
    suite: str
    law: str
    verdict: str  # pass | fail | skip
    checks: int = 0
    instance: dict | None = None
    certificate: dict | None = None
    seed: int | None = None
    elapsed_ms: float = 0.0

    def to_json(self) -> dict:
        return {
            "schema": "monad-forge/1",
            "suite": self.suite,
            "law": self.law,
            "verdict": self.verdict,
            "checks": self.checks,
            "instance": self.instance,
            "certificate": self.certificate,
            "seed": self.seed,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }

    @staticmethod
    def from_json(d: dict) -> "LawReport":
        return LawReport(
            suite=d["suite"], law=d["law"], verdict=d["verdict"], checks=d["checks"],
            instance=d.get("instance"), certificate=d.get("certificate"),
            seed=d.get("seed"), elapsed_ms=d.get("elapsed_ms", 0.0),
        )


class _Run:
    """Aggregates one law's verdict across instances."""

    def __init__(self, suite: str, law: str, seed: int | None):
        self.report = LawReport(suite, law, "pass", seed=seed)
        self.t0 = time.perf_counter()

    def check(self, ok: bool, instance, certificate=None) -> bool:
        self.report.checks += 1
        if not ok and self.report.verdict == "pass":
            self.report.verdict = "fail"
            self.report.instance = _desc(instance)
            self.report.certificate = certificate
        return ok

    def skip(self, note: dict) -> None:
        if self.report.verdict == "pass":
            self.report.verdict = "skip"
            self.report.instance = note

    def error(self, exc: Exception, instance) -> None:
        self.check(False, instance, {"exception": f"{type(exc).__name__}: {exc}"})

    def done(self) -> LawReport:
        self.report.elapsed_ms = (time.perf_counter() - self.t0) * 1000
        return self.report


def _desc(obj) -> dict:
    def enc(x):
        if isinstance(x, Fraction):
            return str(x)
        if isinstance(x, frozenset):
            return sorted(enc(e) for e in x)
        if isinstance(x, (tuple, list)):
            return [enc(e) for e in x]
        if isinstance(x, dict):
            return {str(k): enc(v) for k, v in x.items()}
        if hasattr(x, "sort_key"):
            return repr(x)
        return x

    if isinstance(obj, dict):
        return {str(k): enc(v) for k, v in obj.items()}
    return {"instance": enc(obj)}


# --- random instance generation ---------------------------------------------


def _rng(*parts) -> random.Random:
    return random.Random(repr(parts))


def random_instance(kind: str, space: FinitePoset, seed: int, **params):
    """Deterministic-for-seed generators for every instance shape used here."""
    return _GENERATORS[kind](_rng("mf", kind, seed), space, **params)


def _rand_valuation(rng, p, kind=PROB, max_den=4, max_units=2):
    n = len(p.elements)
    if n == 0:
        return zero_valuation(p, GENERAL if kind == PROB else kind)
    d = rng.randint(1, max_den)
    if kind == PROB:
        cuts = sorted(rng.randint(0, d) for _ in range(n - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [d])]
        return valuation(p, {x: Fraction(k, d) for x, k in zip(p.elements, parts)}, PROB)
    if kind == SUB:
        t = rng.randint(0, d)
        cuts = sorted(rng.randint(0, t) for _ in range(n - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [t])]
        return valuation(p, {x: Fraction(k, d) for x, k in zip(p.elements, parts)}, SUB)
    return valuation(
        p, {x: Fraction(rng.randint(0, max_units * max_den), d) for x in p.elements}, GENERAL
    )


def _rand_point_subset(rng, p, max_size=2):
    size = rng.randint(1, min(max_size, len(p.elements)))
    return frozenset(rng.sample(list(p.elements), size))


def _rand_element(rng, p, hyper_kind, max_size=2):
    core = _rand_point_subset(rng, p, max_size)
    if hyper_kind == "S":
        return p.up(core)
    if hyper_kind == "H":
        return p.down(core)
    if hyper_kind == "Lens":
        return p.up(core) & p.down(core)
    lens = p.up(core) & p.down(core)
    return (p.up(lens), p.down(lens))


def _rand_simple(rng, p, hyper_kind="S", kind=PROB, max_atoms=2, max_den=4, max_size=2):
    n = rng.randint(1, max_atoms)
    atoms = [_rand_element(rng, p, hyper_kind, max_size) for _ in range(n)]
    d = rng.randint(1, max_den)
    if kind == PROB:
        d = max(d, n)  # a positive composition of d into n parts must exist
        cuts = sorted(rng.sample(range(1, d), n - 1))
        parts = [b - a for a, b in zip([0] + cuts, cuts + [d])]
        weights = [Fraction(k, d) for k in parts]
    else:
        weights = [Fraction(rng.randint(1, d), d) for _ in range(n)]
        if kind == SUB:
            total = sum(weights)
            if total > 1:
                weights = [w / total for w in weights]
    return simple_valuation(list(zip(weights, atoms)), kind)


def _rand_monotone_map(rng, p, max_value=3):
    vals: dict[str, int] = {}
    for x in p.elements:
        lo = max((vals[y] for y in p.elements if y in vals and p.le(y, x)), default=0)
        hi = min((vals[y] for y in p.elements if y in vals and p.le(x, y)), default=max_value)
        vals[x] = rng.randint(lo, max(lo, hi))
    return monotone_map(p, {x: Fraction(v) for x, v in vals.items()})


def _rand_monotone_point_map(rng, p, q):
    for _ in range(400):
        f = {}
        ok = True
        for x in p.elements:
            options = [
                y for y in q.elements
                if all(q.le(f[z], y) for z in f if p.le(z, x))
                and all(q.le(y, f[z]) for z in f if p.le(x, z))
            ]
            if not options:
                ok = False
                break
            f[x] = rng.choice(options)
        if ok:
            return f
    # fall back to a constant map at a maximal point
    top = sorted(q.maximal(frozenset(q.elements)))[0]
    return {x: top for x in p.elements}


def _rand_prevision(rng, p, kind=DN, val_kind=PROB, max_gens=3, max_den=4):
    gens = [_rand_valuation(rng, p, val_kind, max_den) for _ in range(rng.randint(1, max_gens))]
    if kind == DN:
        return super_prevision(gens)
    if kind == AN:
        return sub_prevision(gens)
    mu = _rand_simple(rng, p, "QL", val_kind, max_atoms=2, max_den=max_den)
    ql = weaklaw.lambda_apply(weaklaw.NATURAL, p, mu)
    return retract_r(ADN, ql)


def _rand_gen_quasi_lens(rng, p, val_kind=PROB, max_den=4, shared=False):
    if shared:
        gens = [_rand_valuation(rng, p, val_kind, max_den) for _ in range(rng.randint(1, 3))]
        return GenQuasiLens(
            canonicalize_generators(gen_upset(gens)),
            canonicalize_generators(gen_downset(gens)),
        )
    mu = _rand_simple(rng, p, "QL", val_kind, max_atoms=2, max_den=max_den)
    return weaklaw.lambda_apply(weaklaw.NATURAL, p, mu)


def _rand_kleisli_family(rng, p, kind=DN, val_kind=PROB):
    """A guaranteed-monotone family built from monotone point maps.

    Generators of f(x) are unit masses (and optionally one mixture) at the
    images of x under a few monotone self-maps; monotonicity of each map
    makes the family monotone for every prevision kind.
    """
    maps = [_rand_monotone_point_map(rng, p, p) for _ in range(rng.randint(1, 2))]
    mix = rng.random() < 0.5
    d = rng.randint(2, 4)

    def gens_at(x):
        gens = [unit_valuation(p, m[x]) for m in maps]
        if mix and len(maps) == 2:
            a = Fraction(rng.randint(1, d - 1), d)
            gens.append(flatten(simple_valuation([(a, gens[0]), (1 - a, gens[1])], PROB)))
        if val_kind == SUB:
            gens = [valuation(p, dict(g.weights), SUB) for g in gens]
        return gens

    if kind == DN:
        return {x: super_prevision(gens_at(x)) for x in p.elements}
    if kind == AN:
        return {x: sub_prevision(gens_at(x)) for x in p.elements}
    return {x: Fork(super_prevision(gens_at(x)), sub_prevision(gens_at(x)))
            for x in p.elements}


def _rand_program(rng, p, max_choices=3):
    maps = monotone_point_maps(p, p)
    nodes = {"n": 0}

    def leaf():
        return step(rng.choice(maps))

    def build(depth):
        ops = ["leaf", "seq", "pchoice"]
        if nodes["n"] < max_choices:
            ops += ["dchoice", "achoice", "echoice"]
        op = rng.choice(ops if depth < 3 else ["leaf"])
        if op == "leaf":
            return leaf()
        if op == "seq":
            return seq(build(depth + 1), build(depth + 1))
        if op == "pchoice":
            d = rng.randint(1, 4)
            return pchoice(Fraction(rng.randint(0, d), d), build(depth + 1), build(depth + 1))
        nodes["n"] += 1
        ctor = {"dchoice": dchoice, "achoice": achoice, "echoice": echoice}[op]
        return ctor(build(depth + 1), build(depth + 1))

    return build(0)


_GENERATORS = {
    "valuation": _rand_valuation,
    "simple_valuation": _rand_simple,
    "monotone_map": _rand_monotone_map,
    "prevision": _rand_prevision,
    "gen_quasi_lens": _rand_gen_quasi_lens,
    "kleisli_family": _rand_kleisli_family,
    "program": _rand_program,
    "upper_set": lambda rng, p, **kw: _rand_element(rng, p, "S", **kw),
    "lower_set": lambda rng, p, **kw: _rand_element(rng, p, "H", **kw),
    "lens": lambda rng, p, **kw: _rand_element(rng, p, "Lens", **kw),
    "quasi_lens": lambda rng, p, **kw: _rand_element(rng, p, "QL", **kw),
}


# --- exhaustive families -----------------------------------------------------


def exhaustive_valuations(p: FinitePoset, kind: str, max_den: int = 3,
                          max_units: int = 1) -> list[Valuation]:
    """All valuations with every weight k/d, d ≤ max_den, totals per kind."""
    n = len(p.elements)
    seen = set()
    out = []
    for d in range(1, max_den + 1):
        top = d if kind in (PROB, SUB) else max_units * d
        for combo in itertools.product(range(top + 1), repeat=n):
            total = sum(combo)
            if kind == PROB and total != d:
                continue
            if kind == SUB and total > d:
                continue
            nu = valuation(p, {x: Fraction(k, d) for x, k in zip(p.elements, combo)}, kind)
            if nu.weights not in seen:
                seen.add(nu.weights)
                out.append(nu)
    if kind != PROB and not any(not v.weights for v in out):
        out.append(zero_valuation(p, kind))
    return out


# --- monad law suites --------------------------------------------------------


def _exhaustive_for(space: FinitePoset) -> bool:
    return len(space.elements) <= 3


def check_monad_laws(monad: str, space: FinitePoset, budget: int = 200,
                     seed: int = 0) -> list[LawReport]:
    if monad == "V":
        return _check_valuation_monad(space, budget, seed)
    if monad in ("S", "H", "QL", "Lens"):
        return _check_hyper_monad(monad, space, budget, seed)
    if monad in ("PDN", "PAN", "PADN"):
        return _check_prevision_monad(monad, space, budget, seed)
    raise ForgeError(f"unknown monad {monad!r}")


def _check_valuation_monad(space, budget, seed) -> list[LawReport]:
    suite = "monad:V"
    rng = _rng("V", seed)
    reports = []
    kinds = [GENERAL, SUB, PROB] if space.elements else [GENERAL, SUB]
    base = []
    for kind in kinds:
        base += exhaustive_valuations(space, kind) if _exhaustive_for(space) else [
            _rand_valuation(rng, space, kind) for _ in range(max(1, budget // 3))
        ]

    # η within the regime of ν: a Dirac has total 1, valid in every regime
    def retag(nu, kind):
        return valuation(space, dict(nu.weights), kind)

    run = _Run(suite, "unit-left", seed)
    for nu in base:
        xi = simple_valuation([(Fraction(1), nu)], nu.kind)
        run.check(flatten(xi) == nu, {"nu": nu})
    reports.append(run.done())

    run = _Run(suite, "unit-right", seed)
    for nu in base:
        if not nu.weights:
            run.check(True, {"nu": nu})  # the lift of the zero valuation is zero
            continue
        xi = simple_valuation(
            [(w, retag(unit_valuation(space, x), nu.kind)) for x, w in nu.weights], nu.kind)
        got = flatten(xi)
        run.check(got == nu, {"nu": nu, "got": got})
    reports.append(run.done())

    run = _Run(suite, "assoc", seed)
    smalls = base[:6] if _exhaustive_for(space) else base[:4]
    weight_shapes = [[Fraction(1)], [Fraction(1, 2), Fraction(1, 2)],
                     [Fraction(1, 3), Fraction(2, 3)]]

    def towers():
        if _exhaustive_for(space):
            inner_pool = [
                simple_valuation(list(zip(ws, combo)), combo[0].kind)
                for ws in weight_shapes
                for combo in itertools.product(smalls, repeat=len(ws))
                if all(v.kind == combo[0].kind for v in combo)
            ]
            for ws in weight_shapes:
                for combo in itertools.product(inner_pool[:12], repeat=len(ws)):
                    inner_kinds = {x.atoms[0][1].kind for x in combo}
                    if len(inner_kinds) == 1 and all(x.kind == combo[0].kind for x in combo):
                        yield simple_valuation(list(zip(ws, combo)), combo[0].kind)
        else:
            for k in range(budget):
                inner = [
                    simple_valuation(
                        [(Fraction(1, 2), _rand_valuation(rng, space, PROB)),
                         (Fraction(1, 2), _rand_valuation(rng, space, PROB))], PROB)
                    for _ in range(2)
                ]
                yield simple_valuation(
                    [(Fraction(1, 2), inner[0]), (Fraction(1, 2), inner[1])], PROB)

    for count, top in enumerate(towers()):
        if count >= max(budget, 200):
            break
        # path 1: flatten the outer two layers first
        mixed_atoms = []
        for a, xi in top.atoms:
            for b, nu in xi.atoms:
                mixed_atoms.append((a * b, nu))
        inner_kind = top.atoms[0][1].kind
        mixed = simple_valuation(mixed_atoms, combine_kinds(top.kind, inner_kind))
        lhs = flatten(mixed)
        # path 2: flatten inside each atom first
        inner_flat = simple_valuation(
            [(a, flatten(xi)) for a, xi in top.atoms],
            top.kind,
        )
        rhs = flatten(inner_flat)
        run.check(lhs == rhs, {"tower": top})
    reports.append(run.done())

    run = _Run(suite, "map-id", seed)
    ident = {x: x for x in space.elements}
    for nu in base:
        run.check(pushforward(ident, nu, space) == nu, {"nu": nu})
    reports.append(run.done())

    run = _Run(suite, "map-comp", seed)
    targets = [q for q in enumerate_posets(3) if q.elements]
    for i in range(min(budget, 60)):
        if not space.elements:
            break
        nu = base[i % len(base)]
        q = targets[rng.randrange(len(targets))]
        r = targets[rng.randrange(len(targets))]
        f = _rand_monotone_point_map(rng, space, q)
        g = _rand_monotone_point_map(rng, q, r)
        comp = {x: g[f[x]] for x in space.elements}
        lhs = pushforward(comp, nu, r)
        rhs = pushforward(g, pushforward(f, nu, q), r)
        run.check(lhs == rhs, {"nu": nu, "f": f, "g": g})
    reports.append(run.done())
    return reports


def _mult_names(kind: str, hp: HyperPoset, elem_over_names):
    """Monad multiplication through a name-encoded hyperspace level."""
    if kind == "QL":
        qs, cs = elem_over_names
        nested = (frozenset(hp.decode[n] for n in qs), frozenset(hp.decode[n] for n in cs))
    else:
        nested = frozenset(hp.decode[n] for n in elem_over_names)
    return hyper_mult(kind, hp.base, nested)


def _nested_elements(kind: str, hp2: HyperPoset, rng, budget: int):
    """Elements of T(T(TX)) in name form over the poset of T(TX), with cap.

    Returns (elements, truncated).
    """
    p3 = hyperspace_poset(kind, hp2.poset)
    out = []
    if kind in ("S", "H"):
        cap = max(budget, 400)
        truncated = False
        count = 0
        for u in iter_upper_sets(p3.poset):
            if not u:
                continue
            count += 1
            if count > cap:
                truncated = True
                break
            out.append(u if kind == "S" else frozenset(p3.poset.elements) - u)
        if kind == "H":
            out = [c for c in out if c]
        return p3, out, truncated
    # QL / Lens towers: order-convex subsets of p3, enumerated or sampled
    n3 = len(p3.poset.elements)
    if n3 <= 14:
        from .poset import enumerate_lenses

        lenses = enumerate_lenses(p3.poset)
        truncated = False
        if len(lenses) > max(budget, 400):
            lenses = lenses[: max(budget, 400)]
            truncated = True
    else:
        lenses = []
        for _ in range(max(budget, 100)):
            core = frozenset(rng.sample(list(p3.poset.elements), rng.randint(1, 2)))
            lenses.append(p3.poset.up(core) & p3.poset.down(core))
        truncated = True
    if kind == "Lens":
        return p3, lenses, truncated
    return p3, [(p3.poset.up(l), p3.poset.down(l)) for l in lenses], truncated


def _check_hyper_monad(kind: str, space, budget, seed) -> list[LawReport]:
    suite = f"monad:{kind}"
    rng = _rng(kind, seed)
    reports = []
    if not space.elements:
        for law in ("unit-left", "unit-right", "assoc", "map-id", "map-comp"):
            r = _Run(suite, law, seed)
            reports.append(r.done())  # vacuous: the hyperspace is empty
        return reports

    hp2 = hyperspace_poset(kind, space)
    elements = enumerate_elements(kind, space)

    run = _Run(suite, "unit-left", seed)  # mult ∘ unit_{TX} = id
    for e in elements:
        name = hp2.encode(e)
        unit_elem = hyper_unit(kind, hp2.poset, name)
        got = _mult_names(kind, hp2, unit_elem)
        run.check(got == e, {"element": e})
    reports.append(run.done())

    run = _Run(suite, "unit-right", seed)  # mult ∘ T(unit_X) = id
    unit_map = {x: hp2.encode(hyper_unit(kind, space, x)) for x in space.elements}
    for e in elements:
        lifted = hyper_map(kind, space, hp2.poset, unit_map, e)
        got = _mult_names(kind, hp2, lifted)
        run.check(got == e, {"element": e})
    reports.append(run.done())

    run = _Run(suite, "assoc", seed)
    try:
        p3, nested3, truncated = _nested_elements(kind, hp2, rng, budget)
    except ForgeError as exc:
        run.error(exc, {"kind": kind})
        reports.append(run.done())
        p3 = None
        truncated = False
        nested3 = []
    if p3 is not None:
        mult_map = {}
        for name3 in p3.poset.elements:
            inner = _mult_names(kind, hp2, p3.decode[name3])
            mult_map[name3] = hp2.encode(inner)
        for e3 in nested3:
            lhs = _mult_names(kind, hp2, _mult_names(kind, p3, e3))
            mapped = hyper_map(kind, p3.poset, hp2.poset, mult_map, e3)
            rhs = _mult_names(kind, hp2, mapped)
            if not run.check(lhs == rhs, {"nested": e3}):
                break
        if truncated:
            run.skip({"note": "nested enumeration truncated at budget", "checked": run.report.checks})
    reports.append(run.done())

    run = _Run(suite, "map-id", seed)
    ident = {x: x for x in space.elements}
    for e in elements:
        run.check(hyper_map(kind, space, space, ident, e) == e, {"element": e})
    reports.append(run.done())

    run = _Run(suite, "map-comp", seed)
    targets = [q for q in enumerate_posets(3) if q.elements]
    for i in range(min(budget, 60)):
        q = targets[rng.randrange(len(targets))]
        r = targets[rng.randrange(len(targets))]
        f = _rand_monotone_point_map(rng, space, q)
        g = _rand_monotone_point_map(rng, q, r)
        comp = {x: g[f[x]] for x in space.elements}
        e = elements[i % len(elements)]
        lhs = hyper_map(kind, space, r, comp, e)
        rhs = hyper_map(kind, q, r, g, hyper_map(kind, space, q, f, e))
        run.check(lhs == rhs, {"element": e, "f": f, "g": g})
    reports.append(run.done())
    return reports


def _check_prevision_monad(monad: str, space, budget, seed) -> list[LawReport]:
    suite = f"monad:{monad}"
    kind = {"PDN": DN, "PAN": AN, "PADN": ADN}[monad]
    rng = _rng(monad, seed)
    reports = []
    if not space.elements:
        for law in ("unit-left", "unit-right", "assoc"):
            reports.append(_Run(suite, law, seed).done())
        return reports

    def rand_f(i):
        return _rand_kleisli_family(_rng(monad, seed, "f", i), space, kind)

    def rand_F(i, val_kind=PROB):
        return _rand_prevision(_rng(monad, seed, "F", i), space, kind, val_kind)

    run = _Run(suite, "unit-left", seed)  # bind(η, F) = F
    eta = {x: unit_prevision(kind, space, x) for x in space.elements}
    for i in range(budget):
        f_cap = rand_F(i)
        got = kleisli_extend(kind, eta, f_cap)
        run.check(prevision_equal(got, f_cap), {"F": f_cap, "i": i})
    reports.append(run.done())

    run = _Run(suite, "unit-right", seed)  # bind(f, η(x)) = f(x)
    for i in range(budget):
        fam = rand_f(i)
        x = space.elements[i % len(space.elements)]
        got = kleisli_extend(kind, fam, unit_prevision(kind, space, x))
        run.check(prevision_equal(got, fam[x]), {"x": x, "i": i})
    reports.append(run.done())

    run = _Run(suite, "assoc", seed)
    for i in range(budget):
        fam1 = rand_f((seed, i, 1))
        fam2 = rand_f((seed, i, 2))
        f_cap = rand_F(i)
        lhs = kleisli_extend(kind, fam2, kleisli_extend(kind, fam1, f_cap))
        composed = {x: kleisli_extend(kind, fam2, fam1[x]) for x in space.elements}
        rhs = kleisli_extend(kind, composed, f_cap)
        run.check(prevision_equal(lhs, rhs), {"i": i})
    reports.append(run.done())

    run = _Run(suite, "defining-equation", seed)  # eval(bind(f,F), h) = F(x ↦ f(x)(h))
    grid = monotone_grid(space, 2) if len(space.elements) <= 3 else [
        _rand_monotone_map(rng, space) for _ in range(12)
    ]
    for i in range(max(1, budget // 4)):
        fam = rand_f(("d", i))
        f_cap = rand_F(("d", i))
        got = kleisli_extend(kind, fam, f_cap)
        for h in grid:
            if kind == ADN:
                inner_lo = monotone_map(space, {x: fam[x].lower(h) for x in space.elements})
                inner_hi = monotone_map(space, {x: fam[x].upper(h) for x in space.elements})
                want = (f_cap.lower(inner_lo), f_cap.upper(inner_hi))
            else:
                inner = monotone_map(space, {x: fam[x](h) for x in space.elements})
                want = f_cap(inner)
            if not run.check(got(h) == want, {"i": i, "h": {x: str(h(x)) for x in space.elements}}):
                break
    reports.append(run.done())
    return reports


# --- weak distributive law suites --------------------------------------------


def _pushforward_genset(s, f, target):
    gens = [pushforward(f, g, target) for g in s.generators]
    if isinstance(s, GenUpset):
        return canonicalize_generators(gen_upset(gens))
    return canonicalize_generators(gen_downset(gens))


def _apply_law(law, p, mu):
    return weaklaw.lambda_apply(law, p, mu)


def _genset_eq_pair(law, a, b):
    if law == weaklaw.NATURAL:
        return genset_equal(a, b)
    return genset_equal(a, b)


def check_weak_laws(law: str, space: FinitePoset, budget: int = 200,
                    seed: int = 0) -> list[LawReport]:
    if law not in WEAK_LAWS:
        raise ForgeError(f"unknown weak law {law!r}")
    suite = f"weak:{law}"
    hyper = HYPER_OF_LAW[law]
    reports = []
    if not space.elements:
        for name in ("eta", "mult-hyper", "mult-val", "naturality",
                     "cross-characterization", "prevision-consistency"):
            reports.append(_Run(suite, name, seed).done())
        return reports
    kinds_cycle = [PROB, PROB, SUB, GENERAL]

    def val_kind(i):
        return kinds_cycle[i % len(kinds_cycle)]

    # η-law: λ(V(hyper unit)(ν)) = hyper unit of ν at the valuation level
    run = _Run(suite, "eta", seed)
    for i in range(budget):
        rng = _rng(law, seed, "eta", i)
        nu = _rand_valuation(rng, space, val_kind(i))
        if not nu.weights:
            continue
        atoms = [(w, hyper_unit(hyper, space, x)) for x, w in nu.weights]
        mu = simple_valuation(atoms, nu.kind)
        got = _apply_law(law, space, mu)
        if law == weaklaw.SHARP:
            want = canonicalize_generators(gen_upset([nu]))
        elif law == weaklaw.FLAT:
            want = canonicalize_generators(gen_downset([nu]))
        else:
            want = GenQuasiLens(canonicalize_generators(gen_upset([nu])),
                                canonicalize_generators(gen_downset([nu])))
        eq, cert = _genset_eq_pair(law, got, want)
        run.check(eq, {"nu": nu, "i": i}, cert)
    reports.append(run.done())

    # hyperspace-multiplication law
    run = _Run(suite, "mult-hyper", seed)
    hp2 = hyperspace_poset(hyper, space)
    for i in range(budget):
        rng = _rng(law, seed, "mh", i)
        xi = _rand_nested_simple(rng, space, hp2, hyper, val_kind(i))
        try:
            lhs, rhs = _mult_hyper_sides(law, space, hp2, xi)
        except ForgeError as exc:
            run.error(exc, {"i": i})
            continue
        eq, cert = _genset_eq_pair(law, lhs, rhs)
        run.check(eq, {"i": i, "xi": xi}, cert)
    reports.append(run.done())

    # valuation-multiplication law
    run = _Run(suite, "mult-val", seed)
    for i in range(budget):
        rng = _rng(law, seed, "mv", i)
        vk = val_kind(i)
        inner = [_rand_simple(rng, space, hyper, vk, max_atoms=2) for _ in range(rng.randint(1, 2))]
        d = rng.randint(1, 4)
        if len(inner) == 1:
            weights = [Fraction(1)]
        else:
            k = rng.randint(1, d)
            weights = [Fraction(k, d), Fraction(d - k, d)]
            if weights[1] == 0:
                inner, weights = inner[:1], [Fraction(1)]
        outer_kind = PROB
        lhs_mu_atoms = []
        for w, xi_inner in zip(weights, inner):
            for a, e in xi_inner.atoms:
                lhs_mu_atoms.append((w * a, e))
        mixed = simple_valuation(lhs_mu_atoms, combine_kinds(outer_kind, vk))
        lhs = _apply_law(law, space, mixed)
        rhs = _mult_val_rhs(law, space, list(zip(weights, inner)), mixed.kind)
        eq, cert = _genset_eq_pair(law, lhs, rhs)
        run.check(eq, {"i": i, "weights": weights}, cert)
    reports.append(run.done())

    # naturality in the base space
    run = _Run(suite, "naturality", seed)
    targets = [q for q in enumerate_posets(3) if q.elements]
    exhaustive_maps = len(space.elements) <= 3
    for i in range(budget):
        rng = _rng(law, seed, "nat", i)
        mu = _rand_simple(rng, space, hyper, val_kind(i), max_atoms=2)
        q = targets[rng.randrange(len(targets))]
        maps = monotone_point_maps(space, q) if exhaustive_maps else [
            _rand_monotone_point_map(rng, space, q)
        ]
        for f in maps:
            pushed = simple_valuation(
                [(a, hyper_map(hyper, space, q, f, e)) for a, e in mu.atoms], mu.kind)
            lhs = _apply_law(law, q, pushed)
            here = _apply_law(law, space, mu)
            if law == weaklaw.NATURAL:
                rhs = GenQuasiLens(
                    _pushforward_genset(here.up, f, q),
                    _pushforward_genset(here.down, f, q),
                )
            else:
                rhs = _pushforward_genset(here, f, q)
            eq, cert = _genset_eq_pair(law, lhs, rhs)
            if not run.check(eq, {"i": i, "f": f, "mu": mu}, cert):
                break
    reports.append(run.done())

    # cross-characterization: defining inequalities vs generator formula
    run = _Run(suite, "cross-characterization", seed)
    for i in range(budget):
        rng = _rng(law, seed, "cc", i)
        vk = val_kind(i)
        mu = _rand_simple(rng, space, hyper, vk, max_atoms=2)
        lam = _apply_law(law, space, mu)
        for _ in range(3):
            nu = _rand_valuation(rng, space, vk)
            if law == weaklaw.NATURAL:
                lhs = (weaklaw.lambda_member(weaklaw.SHARP, space, _project_mu(mu, 0), nu),
                       weaklaw.lambda_member(weaklaw.FLAT, space, _project_mu(mu, 1), nu))
                rhs = (member_convex_set(nu, lam.up)[0], member_convex_set(nu, lam.down)[0])
            else:
                which = weaklaw.SHARP if law == weaklaw.SHARP else weaklaw.FLAT
                lhs = weaklaw.lambda_member(which, space, mu, nu)
                rhs = member_convex_set(nu, lam)[0]
            if not run.check(lhs == rhs, {"i": i, "nu": nu, "mu": mu},
                             {"member": str(rhs), "defining": str(lhs)}):
                break
    reports.append(run.done())

    # prevision consistency: r(λ(μ)) agrees with the transform on the grid
    run = _Run(suite, "prevision-consistency", seed)
    grid = monotone_grid(space, 3) if len(space.elements) <= 4 else None
    for i in range(max(1, budget // 4)):
        rng = _rng(law, seed, "pc", i)
        mu = _rand_simple(rng, space, hyper, val_kind(i), max_atoms=2)
        lam = _apply_law(law, space, mu)
        hs = grid if grid is not None else [_rand_monotone_map(rng, space) for _ in range(10)]
        for h in hs:
            if law == weaklaw.SHARP:
                lhs = eval_prevision(retract_r(DN, lam), h)
                rhs = weaklaw.transform_eval("phi", space, mu, h)
            elif law == weaklaw.FLAT:
                lhs = eval_prevision(retract_r(AN, lam), h)
                rhs = weaklaw.transform_eval("psi", space, mu, h)
            else:
                fork = retract_r(ADN, lam)
                lhs = fork(h)
                rhs = weaklaw.transform_eval("theta", space, mu, h)
            if not run.check(lhs == rhs, {"i": i, "h": {x: str(h(x)) for x in space.elements}},
                             {"lhs": str(lhs), "rhs": str(rhs)}):
                break
    reports.append(run.done())
    return reports


def _project_mu(mu: SimpleValuation, which: int) -> SimpleValuation:
    return simple_valuation([(a, e[which]) for a, e in mu.atoms], mu.kind)


def _rand_nested_simple(rng, space, hp2: HyperPoset, hyper: str, vk: str) -> SimpleValuation:
    """Random μ ∈ V(T(TX)) with small nested atoms, in name form over T X."""
    def nested_atom():
        if hyper == "S":
            seeds = frozenset(rng.sample(list(hp2.poset.elements), rng.randint(1, 2)))
            return frozenset(hp2.poset.up(seeds))
        if hyper == "H":
            seeds = frozenset(rng.sample(list(hp2.poset.elements), rng.randint(1, 2)))
            return frozenset(hp2.poset.down(seeds))
        seeds = frozenset(rng.sample(list(hp2.poset.elements), rng.randint(1, 2)))
        lens = hp2.poset.up(seeds) & hp2.poset.down(seeds)
        return (hp2.poset.up(lens), hp2.poset.down(lens))

    n = rng.randint(1, 2)
    atoms = [nested_atom() for _ in range(n)]
    if vk == PROB:
        d = rng.randint(1, 4)
        k = rng.randint(1, d) if n == 2 else d
        weights = [Fraction(k, d), Fraction(d - k, d)][:n]
        if n == 2 and weights[1] == 0:
            atoms, weights = atoms[:1], [Fraction(1)]
    else:
        weights = [Fraction(rng.randint(1, 4), 4) for _ in range(n)]
        if vk == SUB and sum(weights) > 1:
            weights = [w / sum(weights) for w in weights]
    return simple_valuation(list(zip(weights, atoms)), vk)


def _mult_hyper_sides(law, space, hp2: HyperPoset, xi: SimpleValuation):
    """Both sides of λ ∘ V(mult) = mult ∘ T(λ) ∘ λ_{TX} at generator level."""
    hyper = HYPER_OF_LAW[law]
    # LHS: flatten the hyperspace level inside each atom, then apply the law
    flat_atoms = []
    for a, e in xi.atoms:
        if hyper == "QL":
            qs, cs = e
            nested = (frozenset(hp2.decode[n] for n in qs), frozenset(hp2.decode[n] for n in cs))
        else:
            nested = frozenset(hp2.decode[n] for n in e)
        flat_atoms.append((a, hyper_mult(hyper, space, nested)))
    lhs = _apply_law(law, space, simple_valuation(flat_atoms, xi.kind))

    # RHS: λ at the T X level, then λ on each generator, then union
    lam2 = weaklaw.lambda_apply(law, hp2.poset, xi)
    if law == weaklaw.NATURAL:
        up = _union_of_inner(weaklaw.SHARP, space, hp2, lam2.up.generators, 0, xi.kind)
        down = _union_of_inner(weaklaw.FLAT, space, hp2, lam2.down.generators, 1, xi.kind)
        return lhs, GenQuasiLens(up, down)
    which = weaklaw.SHARP if law == weaklaw.SHARP else weaklaw.FLAT
    side = _union_of_inner(which, space, hp2, lam2.generators, None, xi.kind)
    return lhs, side


def _union_of_inner(which, space, hp2: HyperPoset, outer_gens, project, kind):
    all_gens = []
    for g in outer_gens:
        atoms = []
        for name, w in g.weights:
            e = hp2.decode[name]
            if project is not None:
                e = e[project]
            atoms.append((w, e))
        inner = weaklaw.lambda_apply(which, space, simple_valuation(atoms, g.kind))
        all_gens.extend(inner.generators)
    build = gen_upset if which == weaklaw.SHARP else gen_downset
    return canonicalize_generators(build(all_gens))


def _mult_val_rhs(law, space, weighted_inner, out_kind):
    """Choice-function mixture of the per-atom law values."""
    hyper = HYPER_OF_LAW[law]

    def combine(side_lists):
        out = []
        for combo in itertools.product(*side_lists):
            acc: dict[str, Fraction] = {}
            for (w, _), rho in zip(weighted_inner, combo):
                for x, wx in rho.weights:
                    acc[x] = acc.get(x, Fraction(0)) + w * wx
            out.append(valuation(space, acc, out_kind))
        return out

    inners = [_apply_law(law, space, xi) for _, xi in weighted_inner]
    if law == weaklaw.NATURAL:
        up = combine([lam.up.generators for lam in inners])
        down = combine([lam.down.generators for lam in inners])
        return GenQuasiLens(canonicalize_generators(gen_upset(up)),
                            canonicalize_generators(gen_downset(down)))
    side = combine([lam.generators for lam in inners])
    build = gen_upset if law == weaklaw.SHARP else gen_downset
    return canonicalize_generators(build(side))


# --- inverse-image lemma suite ------------------------------------------------


def _integral_matrix(gens, hs):
    return [[integrate(g, h) for h in hs] for g in gens]


def check_inverse_image(lemma: str, space: FinitePoset, n: int = 2, budget: int = 200,
                        seed: int = 0, search_cap: int = 64) -> list[LawReport]:
    """Agreement of the LP-emptiness side with the maximin side, exactly.

    Demonic: the dominating set avoids every [h_i ≤ 1] iff no simplex mixture
    pushes F(Σ a_i·h_i) above 1.  Angelic: the dominated set meets every
    [h_i > 1] iff every simplex mixture keeps F strictly above 1; when true,
    a finite grid denominator N ≤ search_cap realizing it is searched and
    unresolved instances are recorded separately as skips.
    """
    if lemma not in (DN, AN):
        raise ForgeError(f"unknown inverse-image lemma {lemma!r}")
    if not (1 <= n <= 3):
        raise ForgeError("n must be between 1 and 3")
    suite = f"inverse:{lemma}"
    reports = []
    run = _Run(suite, f"n={n}", seed)
    unresolved = 0
    if not space.elements:
        reports.append(run.done())
        return reports
    for i in range(budget):
        rng = _rng(lemma, seed, n, i)
        vk = [PROB, SUB, PROB][i % 3]
        prev = _rand_prevision(rng, space, DN if lemma == DN else AN, vk)
        hs = [_rand_monotone_map(rng, space, 3) for _ in range(n)]
        gens = prev.generators
        m = _integral_matrix(gens, hs)

        wvars = {x: f"w_{x}" for x in space.elements}
        lvars = [f"l{j}" for j in range(len(gens))]
        cons = [constraint({v: Fraction(1) for v in lvars}, EQ, Fraction(1))]
        if vk == PROB:
            cons.append(constraint({v: Fraction(1) for v in wvars.values()}, EQ, Fraction(1)))
        elif vk == SUB:
            cons.append(constraint({v: Fraction(1) for v in wvars.values()}, LE, Fraction(1)))
        for u in space.upper_sets:
            row = {lvars[j]: eval_open_set(g, u) for j, g in enumerate(gens)}
            for x in u:
                row[wvars[x]] = row.get(wvars[x], Fraction(0)) - 1
            # Σλν_j(U) − ν(U) ≤ 0 (DN)  /  ≥ 0 (AN)
            cons.append(constraint(row, LE if lemma == DN else GE, Fraction(0)))

        if lemma == DN:
            for k, h in enumerate(hs):
                cons.append(constraint({wvars[x]: h(x) for x in space.elements if h(x)},
                                       LE, Fraction(1)))
            escape = feasible(cons)  # a dominating valuation outside every [h_k > 1]
            lhs = escape.status != "optimal"
            forms = [[m[j][k] for k in range(n)] for j in range(len(gens))]
            rhs, _, _ = maximin_over_simplex(forms, Fraction(1))
        else:
            for k, h in enumerate(hs):
                cons.append(constraint({wvars[x]: h(x) for x in space.elements if h(x)},
                                       GT, Fraction(1)))
            meet = feasible(cons)  # a dominated valuation inside every [h_k > 1]
            lhs = meet.status == "optimal"
            forms = [[m[j][k] for k in range(n)] for j in range(len(gens))]
            value, _ = minimax_over_simplex_forms(forms)
            rhs = value > 1
        ok = lhs == rhs
        run.check(ok, {"i": i, "n": n, "lemma": lemma},
                  None if ok else {"lp_side": str(lhs), "maximin_side": str(rhs)})
        if lemma == AN and rhs:
            found = _search_grid_denominator(m, n, search_cap)
            if found is None:
                unresolved += 1
                if n <= 2:
                    run.check(False, {"i": i, "n": n},
                              {"note": f"no grid denominator ≤ {search_cap} realizes the union"})
    if unresolved and run.report.verdict == "pass":
        run.skip({"unresolved_grid_instances": unresolved})
    reports.append(run.done())
    return reports


def minimax_over_simplex_forms(forms):
    """min over the simplex of the max of linear forms (exact LP)."""
    from .linprog import minimax_over_simplex

    return minimax_over_simplex(forms)


def _search_grid_denominator(m, n, cap):
    """Smallest N with F(Σ b_i·h_i) > 1 on the whole 1/N grid slab, if ≤ cap."""
    import numpy as np

    denom = 1
    for row in m:
        for v in row:
            denom = denom * v.denominator // __import__("math").gcd(denom, v.denominator)
    mi = np.array([[int(v * denom) for v in row] for row in m], dtype=np.int64)
    for cap_n in range(n + 1, cap + 1):
        good = True
        for total in range(cap_n - n + 1, cap_n + 1):
            for combo in itertools.combinations(range(total + n - 1), n - 1):
                parts = []
                prev = -1
                for c in combo:
                    parts.append(c - prev - 1)
                    prev = c
                parts.append(total + n - 1 - prev - 1)
                b = np.array(parts, dtype=np.int64)
                vals = mi @ b  # scaled by denom·cap_n
                if vals.max() * 1 <= cap_n * denom:
                    good = False
                    break
            if not good:
                break
        if good:
            return cap_n
    return None


# --- retraction, Walley, minimax, degeneracy, oracle suites -------------------


def check_retraction(kind: str, space: FinitePoset, budget: int = 300,
                     seed: int = 0) -> list[LawReport]:
    """r∘s = id on previsions; s∘r = canonicalization on generated sets."""
    if kind not in (DN, AN, ADN):
        raise ForgeError(f"unknown retraction kind {kind!r}")
    suite = f"retraction:{kind}"
    reports = []
    if not space.elements:
        reports.append(_Run(suite, "r-after-s", seed).done())
        reports.append(_Run(suite, "s-after-r", seed).done())
        return reports

    run = _Run(suite, "r-after-s", seed)
    grid = monotone_grid(space, 3) if len(space.elements) <= 4 else None
    for i in range(budget):
        rng = _rng(kind, seed, "rs", i)
        vk = [PROB, SUB][i % 2]
        prev = _rand_prevision(rng, space, kind, vk)
        back = retract_r(kind, section_s(kind, prev))
        ok = prevision_equal(back, prev)
        if ok and grid is not None:
            hs = grid if len(grid) <= 40 else grid[:: max(1, len(grid) // 40)]
            ok = all(back(h) == prev(h) for h in hs)
        run.check(ok, {"i": i, "kind": kind})
    reports.append(run.done())

    run = _Run(suite, "s-after-r", seed)
    for i in range(budget):
        rng = _rng(kind, seed, "sr", i)
        vk = [PROB, SUB][i % 2]
        if kind == DN:
            raw = gen_upset([_rand_valuation(rng, space, vk) for _ in range(rng.randint(1, 3))])
        elif kind == AN:
            raw = gen_downset([_rand_valuation(rng, space, vk) for _ in range(rng.randint(1, 3))])
        else:
            raw = _rand_gen_quasi_lens(rng, space, vk, shared=bool(i % 2))
        via = section_s(kind, retract_r(kind, raw))
        canon = canonicalize_generators(raw)
        eq, cert = genset_equal(via, raw)
        same = via == canon if kind != ADN else (via.up == canon.up and via.down == canon.down)
        irred = _irredundant(via)
        run.check(eq and same and irred, {"i": i, "kind": kind}, cert)
    reports.append(run.done())
    return reports


def _irredundant(s) -> bool:
    if isinstance(s, GenQuasiLens):
        return _irredundant(s.up) and _irredundant(s.down)
    gens = s.generators
    if len(gens) <= 1:
        return True
    build = gen_upset if isinstance(s, GenUpset) else gen_downset
    for i in range(len(gens)):
        rest = gens[:i] + gens[i + 1:]
        if member_convex_set(gens[i], build(rest))[0]:
            return False
    return True


def check_walley(space: FinitePoset, budget: int = 500, seed: int = 0) -> list[LawReport]:
    """Walley's condition for the fork of every generated quasi-lens."""
    suite = "walley"
    reports = []
    run = _Run(suite, "quasi-lens-forks", seed)
    if not space.elements:
        reports.append(run.done())
        return reports
    for i in range(budget):
        rng = _rng("walley", seed, i)
        vk = [PROB, SUB][i % 2]
        ql = _rand_gen_quasi_lens(rng, space, vk, shared=bool(i % 3 == 0))
        fork = retract_r(ADN, ql)
        ce = walley_check(fork, seed=i)
        run.check(ce is None, {"i": i}, ce)
    reports.append(run.done())

    run = _Run(suite, "generated-quasi-lenses-valid", seed)
    from .poset import PointSet, validate_quasi_lens

    for i in range(min(budget, 1000)):
        rng = _rng("wql", seed, i)
        q, c = _rand_element(rng, space, "QL")
        ok = validate_quasi_lens(space, PointSet(space, q, "upper"), PointSet(space, c, "lower"))
        run.check(ok, {"i": i, "Q": sorted(q), "C": sorted(c)})
    reports.append(run.done())
    return reports


def check_minimax(space: FinitePoset, budget: int = 200, seed: int = 0,
                  max_forms: int = 3) -> list[LawReport]:
    """sup_a min over a generated polytope equals min over it of sup_a, exactly."""
    suite = "minimax"
    run = _Run(suite, "sup-inf-exchange", seed)
    if not space.elements:
        return [run.done()]
    for i in range(budget):
        rng = _rng("minimax", seed, i)
        vk = [PROB, SUB][i % 2]
        gens = [_rand_valuation(rng, space, vk) for _ in range(rng.randint(1, 3))]
        n = rng.randint(1, max_forms)
        hs = [_rand_monotone_map(rng, space, 3) for _ in range(n)]
        m = _integral_matrix(gens, hs)
        # sup over Δ_n of min over the polytope: minima sit at generators
        _, _, lhs = maximin_over_simplex([[m[j][k] for k in range(n)] for j in range(len(gens))],
                                         Fraction(0))
        # min over the polytope of the max over Δ_n (= max coordinate)
        lvars = [f"l{j}" for j in range(len(gens))]
        cons = [constraint({v: Fraction(1) for v in lvars}, EQ, Fraction(1))]
        for k in range(n):
            row = {lvars[j]: m[j][k] for j in range(len(gens))}
            row["z"] = Fraction(-1)
            cons.append(constraint(row, LE, Fraction(0)))
        res = solve({"z": Fraction(1)}, cons, maximize=False)
        rhs = res.value
        run.check(lhs == rhs, {"i": i}, None if lhs == rhs else {"lhs": str(lhs), "rhs": str(rhs)})
    return [run.done()]


def check_goy_degeneracy(space: FinitePoset, max_atom_size: int = 3, max_den: int = 4,
                         seed: int = 0, budget: int = 100000) -> list[LawReport]:
    """On antichains the law's two sides and the plain convex mixture coincide."""
    suite = "degeneracy"
    run = _Run(suite, "antichain-collapse", seed)
    if not space.is_antichain_poset():
        run.skip({"note": "space is not an antichain; degeneracy does not apply"})
        return [run.done()]
    if not space.elements:
        return [run.done()]
    subsets = [frozenset(c)
               for r in range(1, min(max_atom_size, len(space.elements)) + 1)
               for c in itertools.combinations(space.elements, r)]
    count = 0
    for atoms, weights in _degeneracy_instances(subsets, max_den):
        if count >= budget:
            run.skip({"note": "degeneracy sweep truncated at budget"})
            break
        count += 1
        mu = simple_valuation(list(zip(weights, atoms)), PROB)
        ql = weaklaw.lambda_apply(weaklaw.LENS_LAW, space, mu)
        plain = _plain_convex_canonical(space, mu)
        same_updown = ql.up.generators == ql.down.generators
        same_plain = ql.up.generators == plain
        run.check(same_updown and same_plain, {"atoms": [sorted(a) for a in atoms],
                                               "weights": [str(w) for w in weights]})
    return [run.done()]


def _degeneracy_instances(subsets, max_den):
    for a in subsets:
        yield [a], [Fraction(1)]
    for a, b in itertools.combinations(subsets, 2):
        for d in range(2, max_den + 1):
            for k in range(1, d):
                yield [a, b], [Fraction(k, d), Fraction(d - k, d)]


def _plain_convex_canonical(space, mu: SimpleValuation):
    """Canonical generators of the plain convex hull of the atom mixtures."""
    gens = weaklaw._mix_generators(space, mu, [e for _, e in mu.atoms])
    gens = sorted(set(gens), key=lambda g: g.sort_key())
    i = 0
    while len(gens) > 1 and i < len(gens):
        rest = gens[:i] + gens[i + 1:]
        if _in_plain_hull(space, gens[i], rest):
            gens = rest
        else:
            i += 1
    return tuple(gens)


def _in_plain_hull(space, nu, gens) -> bool:
    lvars = [f"l{j}" for j in range(len(gens))]
    cons = [constraint({v: Fraction(1) for v in lvars}, EQ, Fraction(1))]
    for x in space.elements:
        row = {lvars[j]: g.weight(x) for j, g in enumerate(gens)}
        cons.append(constraint(row, EQ, nu.weight(x)))
    return feasible(cons).status == "optimal"


def check_interp_oracle(space: FinitePoset, budget: int = 100, seed: int = 0,
                        max_choices: int = 3) -> list[LawReport]:
    """Interpreter bounds equal strategy-enumeration min/max, exactly."""
    suite = "interp"
    run = _Run(suite, "strategy-oracle", seed)
    if not space.elements:
        return [run.done()]
    for i in range(budget):
        rng = _rng("prog", seed, i)
        prog = _rand_program(rng, space, max_choices)
        fam = denote_program(space, prog)
        h = _rand_monotone_map(rng, space, 3)
        x = rng.choice(space.elements)
        got = query_fork(fam, x, h)
        want = oracle_bounds(space, prog, x, h)
        run.check(got == want, {"i": i, "start": x},
                  None if got == want else {"fork": [str(v) for v in got],
                                            "oracle": [str(v) for v in want]})
    return [run.done()]


# --- suite registry ------------------------------------------------------------


def run_suites(laws, space: FinitePoset, budget: int, seed: int) -> list[LawReport]:
    out: list[LawReport] = []
    for law in laws:
        if law in MONADS:
            out += check_monad_laws(law, space, budget=budget, seed=seed)
        elif law in WEAK_LAWS:
            out += check_weak_laws(law, space, budget=budget, seed=seed)
        elif law == "inverse-dn":
            for n in (1, 2, 3):
                out += check_inverse_image(DN, space, n=n, budget=budget, seed=seed)
        elif law == "inverse-an":
            for n in (1, 2, 3):
                out += check_inverse_image(AN, space, n=n, budget=budget, seed=seed)
        elif law == "retraction":
            for kind in (DN, AN, ADN):
                out += check_retraction(kind, space, budget=budget, seed=seed)
        elif law == "walley":
            out += check_walley(space, budget=budget, seed=seed)
        elif law == "minimax":
            out += check_minimax(space, budget=budget, seed=seed)
        elif law == "degeneracy":
            out += check_goy_degeneracy(space, seed=seed)
        elif law == "interp":
            out += check_interp_oracle(space, budget=budget, seed=seed)
        else:
            raise ForgeError(f"unknown law {law!r}")
    return out


ALL_LAWS = list(MONADS) + list(WEAK_LAWS) + [
    "inverse-dn", "inverse-an", "retraction", "walley", "minimax", "degeneracy", "interp",
]
