"""Exact rational linear programming (two-phase simplex, Bland's rule).

All variables are nonnegative; coefficients, bounds and solutions are
Fractions.  Strict inequalities are decided without tolerances by maximizing
a margin variable and comparing the exact optimum against zero.  Infeasible
verdicts carry a Farkas certificate (verified before being returned).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import LPError

try:  # exact rationals; gmpy2 pivots are ~10x faster than Fraction
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

_ZERO, _ONE = _Q(0), _Q(1)


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))

LE, GE, EQ, LT, GT = "<=", ">=", "==", "<", ">"
_RELS = (LE, GE, EQ, LT, GT)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[tuple[str, Fraction], ...]
    rel: str
    rhs: Fraction

    def __post_init__(self):
        if self.rel not in _RELS:
            raise LPError(f"unknown relation {self.rel!r}")


def constraint(coeffs, rel: str, rhs) -> Constraint:
    if not isinstance(coeffs, dict):
        coeffs = dict(coeffs)
    try:
        items = tuple(sorted((str(v), Fraction(c)) for v, c in coeffs.items()))
        return Constraint(items, rel, Fraction(rhs))
    except (TypeError, ValueError) as exc:
        raise LPError(f"malformed constraint: {exc}") from exc


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    point: dict[str, Fraction] | None = None
    certificate: dict[int, Fraction] | None = None


def _collect_vars(objective, constraints) -> list[str]:
    names = set(objective)
    for c in constraints:
        names.update(v for v, _ in c.coeffs)
    return sorted(names)


class _Tableau:
    """Dense simplex tableau over Fractions."""

    def __init__(self, rows: list[list[Fraction]], basis: list[int], ncols: int):
        self.rows = rows
        self.basis = basis
        self.ncols = ncols  # structural columns (rhs is the extra last entry)

    def pivot(self, r: int, c: int) -> None:
        piv = self.rows[r][c]
        self.rows[r] = [v / piv for v in self.rows[r]]
        for i, row in enumerate(self.rows):
            if i != r and row[c] != 0:
                f = row[c]
                prow = self.rows[r]
                self.rows[i] = [v - f * pv for v, pv in zip(row, prow)]
        self.basis[r] = c

    def solve(self, cost: list[Fraction]) -> tuple[str, list[Fraction], Fraction]:
        """Maximize cost·x from the current basic feasible point.

        Returns (status, reduced-cost row, objective value); the reduced-cost
        row is the fully updated cost row including the initial-identity
        columns (used for dual extraction).
        """
        z = list(cost) + [_ZERO]
        for i, b in enumerate(self.basis):
            if z[b] != 0:
                f = z[b]
                z = [v - f * rv for v, rv in zip(z, self.rows[i])]
        while True:
            enter = -1
            for j in range(self.ncols):
                if z[j] > 0:
                    enter = j
                    break  # Bland: smallest eligible index
            if enter < 0:
                return OPTIMAL, z, -z[-1]
            leave, best = -1, None
            for i, row in enumerate(self.rows):
                if row[enter] > 0:
                    ratio = row[-1] / row[enter]
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        leave, best = i, ratio
            if leave < 0:
                return UNBOUNDED, z, Fraction(0)
            self.pivot(leave, enter)
            z = list(z)
            if z[enter] != 0:
                f = z[enter]
                z = [v - f * rv for v, rv in zip(z, self.rows[leave])]


def _build(constraints: list[Constraint], names: list[str]):
    """Normalize to equalities with rhs ≥ 0 and an identity starting basis.

    Returns (tableau, n_struct, slack_cols, art_cols, row_signs, row_rel)
    where row_signs[i] is ±1 recording whether original row i was negated.
    """
    nvar = len(names)
    index = {v: i for i, v in enumerate(names)}
    raw = []
    for c in constraints:
        a = [_ZERO] * nvar
        for v, coef in c.coeffs:
            a[index[v]] += _Q(coef)
        if c.rel in (LT, GT):
            raise LPError("strict relations must go through feasible()/solve() wrappers")
        if c.rel == GE:
            a, rel, b = [-x for x in a], LE, -_Q(c.rhs)
        else:
            rel, b = c.rel, _Q(c.rhs)
        raw.append((a, rel, b))

    m = len(raw)
    nslack = sum(1 for _, rel, _ in raw if rel == LE)
    nstruct = nvar + nslack
    total = nvar + nslack + m  # worst case: artificial per row
    rows: list[list[Fraction]] = []
    basis: list[int] = []
    slack_cols: list[int | None] = []
    art_cols: list[int | None] = []
    signs: list[int] = []
    rels: list[str] = []
    s_at = nvar
    a_at = nvar + nslack
    art_used: list[int] = []
    for (a, rel, b) in raw:
        row = list(a) + [_ZERO] * (total - nvar) + [b]
        sign = 1
        scol = None
        if rel == LE:
            scol = s_at
            row[s_at] = _ONE
            s_at += 1
        if b < 0:
            row = [-v for v in row]
            sign = -1
        # basic column: the slack if it survived with +1, else a fresh artificial
        if scol is not None and row[scol] == 1:
            basis.append(scol)
            acol = None
        else:
            acol = a_at
            row[a_at] = _ONE
            basis.append(a_at)
            art_used.append(a_at)
            a_at += 1
        rows.append(row)
        slack_cols.append(scol)
        art_cols.append(acol)
        signs.append(sign)
        rels.append(rel)
    # trim allocated-but-unused artificial columns so they cannot re-enter
    ncols = nstruct + len(art_used)
    rows = [r[:ncols] + [r[-1]] for r in rows]
    return _Tableau(rows, basis, ncols), nvar, slack_cols, art_cols, signs, rels, art_used, nstruct


def solve(objective: dict[str, Fraction], constraints, maximize: bool = True) -> LPResult:
    """Optimize a linear objective over {x ≥ 0 : constraints} exactly.

    Only non-strict relations are allowed here; use :func:`feasible` for
    systems with strict inequalities.
    """
    constraints = list(constraints)
    names = _collect_vars(objective, constraints)
    if not names:
        return LPResult(OPTIMAL, Fraction(0), {})
    tab, nvar, slack_cols, art_cols, signs, rels, art_used, nstruct = _build(constraints, names)

    # phase 1: drive artificial mass to zero
    if art_used:
        art_set = set(art_used)
        cost1 = [_ZERO] * tab.ncols
        for c in art_used:
            cost1[c] = -_ONE
        status, zrow, val = tab.solve(cost1)
        if status != OPTIMAL:  # cannot happen: phase-1 objective is bounded
            raise LPError("phase 1 did not terminate at an optimum")
        if val != 0:
            cert = _farkas(constraints, names, tab, zrow, slack_cols, art_cols, signs, rels)
            return LPResult(INFEASIBLE, certificate=cert)
        # pivot any artificial still basic (at zero value) out of the basis
        for i in range(len(tab.basis)):
            if tab.basis[i] in art_set:
                for j in range(nstruct):
                    if tab.rows[i][j] != 0:
                        tab.pivot(i, j)
                        break
        # drop redundant rows whose artificial could not leave, then the columns
        keep = [i for i in range(len(tab.basis)) if tab.basis[i] not in art_set]
        tab.rows = [tab.rows[i][:nstruct] + [tab.rows[i][-1]] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]
        tab.ncols = nstruct

    sense = 1 if maximize else -1
    cost2 = [_ZERO] * tab.ncols
    for v, c in objective.items():
        cost2[names.index(v)] = sense * _Q(c)
    status, _, val = tab.solve(cost2)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    point = {v: Fraction(0) for v in names}
    for i, b in enumerate(tab.basis):
        if b < nvar:
            point[names[b]] = _to_fraction(tab.rows[i][-1])
    return LPResult(OPTIMAL, _to_fraction(sense * val), point)


def _farkas(constraints, names, tab, zrow, slack_cols, art_cols, signs, rels):
    """Extract and verify a Farkas vector from the phase-1 reduced costs.

    For the normalized system {a_i·x ≤/= b_i, x ≥ 0} a certificate is y with
    y_i ≥ 0 on ≤-rows, Σ_i y_i·a_i ≥ 0 componentwise and Σ_i y_i·b_i < 0.
    """
    y: dict[int, Fraction] = {}
    for i in range(len(tab.rows)):
        col = art_cols[i]
        base_cost = _Q(-1)
        if col is None:
            col = slack_cols[i]
            base_cost = _ZERO
        # reduced cost r = c_col - y·e_i  =>  dual of normalized row i
        dual = base_cost - zrow[col]
        y[i] = Fraction(signs[i]) * _to_fraction(dual)
    # verify against the ≤/= normalized original rows
    index = {v: j for j, v in enumerate(names)}
    combo = [Fraction(0)] * len(names)
    rhs = Fraction(0)
    for i, c in enumerate(constraints):
        a = [Fraction(0)] * len(names)
        for v, coef in c.coeffs:
            a[index[v]] += coef
        if c.rel == GE:
            a, b = [-x for x in a], -c.rhs
        else:
            b = c.rhs
        combo = [acc + y[i] * av for acc, av in zip(combo, a)]
        rhs += y[i] * b
    for cand in (y, {i: -v for i, v in y.items()}):
        ok = all(cand[i] >= 0 for i, c in enumerate(constraints) if c.rel != EQ)
        sgn = 1 if cand is y else -1
        if ok and all(sgn * v >= 0 for v in combo) and sgn * rhs < 0:
            return cand
    return None


_MARGIN = "__margin__"


def feasible(constraints) -> LPResult:
    """Decide feasibility of a mixed strict/non-strict rational system.

    Strict rows get a shared margin variable t: the system is feasible iff
    the maximum of t (capped at 1) is strictly positive; without strict rows
    this is plain phase-1 feasibility.  The witness point is exact.
    """
    constraints = list(constraints)
    strict = [c for c in constraints if c.rel in (LT, GT)]
    soft = [c for c in constraints if c.rel not in (LT, GT)]
    if not strict:
        res = solve({}, soft)
        if res.status == OPTIMAL:
            return LPResult(OPTIMAL, Fraction(0), res.point)
        return res
    adjusted = list(soft)
    for c in strict:
        coeffs = dict(c.coeffs)
        if c.rel == GT:  # a·x > b  ≡  a·x − t ≥ b with t > 0
            coeffs[_MARGIN] = coeffs.get(_MARGIN, Fraction(0)) - 1
            adjusted.append(constraint(coeffs, GE, c.rhs))
        else:  # a·x < b  ≡  a·x + t ≤ b
            coeffs[_MARGIN] = coeffs.get(_MARGIN, Fraction(0)) + 1
            adjusted.append(constraint(coeffs, LE, c.rhs))
    adjusted.append(constraint({_MARGIN: Fraction(1)}, LE, Fraction(1)))
    res = solve({_MARGIN: Fraction(1)}, adjusted)
    if res.status == INFEASIBLE:
        return res
    if res.status != OPTIMAL:  # margin is capped, cannot be unbounded
        raise LPError("margin LP did not reach an optimum")
    if res.value > 0:
        point = dict(res.point)
        point.pop(_MARGIN, None)
        return LPResult(OPTIMAL, Fraction(0), point)
    return LPResult(INFEASIBLE)


def lp_feasible(variables, constraints) -> LPResult:
    """Spec-facing wrapper: ``variables`` may mention vars absent from constraints."""
    res = feasible(constraints)
    if res.status == OPTIMAL:
        point = dict(res.point or {})
        for v in variables:
            point.setdefault(str(v), Fraction(0))
        return LPResult(OPTIMAL, res.value, point)
    return res


def maximin_over_simplex(forms: list[list[Fraction]], threshold) -> tuple[bool, list[Fraction], Fraction]:
    """Decide sup_{a∈Δ_n} min_j forms_j·a > threshold, exactly.

    Returns (verdict, maximizing weights, optimal value).  The optimum is
    attained (the simplex is compact), so the strict comparison is sound.
    """
    if not forms:
        raise LPError("empty form list")
    n = len(forms[0])
    if n < 1 or any(len(f) != n for f in forms):
        raise LPError("forms must share an arity of at least 1")
    avars = [f"a{i}" for i in range(n)]
    cons = [constraint({v: Fraction(1) for v in avars}, EQ, Fraction(1))]
    for f in forms:
        row = {v: Fraction(c) for v, c in zip(avars, f)}
        row["zp"] = Fraction(-1)
        row["zn"] = Fraction(1)
        cons.append(constraint(row, GE, Fraction(0)))
    res = solve({"zp": Fraction(1), "zn": Fraction(-1)}, cons)
    if res.status != OPTIMAL:
        raise LPError(f"maximin LP ended with status {res.status}")
    weights = [res.point.get(v, Fraction(0)) for v in avars]
    return res.value > Fraction(threshold), weights, res.value


def minimax_over_simplex(forms: list[list[Fraction]]) -> tuple[Fraction, list[Fraction]]:
    """inf_{a∈Δ_n} max_j forms_j·a with an attaining weight vector."""
    if not forms:
        raise LPError("empty form list")
    neg = [[-c for c in f] for f in forms]
    _, weights, value = maximin_over_simplex(neg, Fraction(0))
    return -value, weights
