"""Exact rational linear programming.

Two-phase tableau simplex over :class:`fractions.Fraction` with Bland's
pivoting rule.  Every optimal answer comes with a dual vector, and the
primal and dual objectives agree exactly.

Dual sign convention (for the program returned by :func:`dual_of`):

* minimize:  ``>=`` rows get ``y >= 0``, ``<=`` rows get ``y <= 0``, ``==`` rows free.
* maximize:  ``<=`` rows get ``y >= 0``, ``>=`` rows get ``y <= 0``, ``==`` rows free.

Variable bounds other than ``x >= 0``, ``x <= 0`` or free are turned into
explicit constraint rows appended after the user constraints; the dual
vector therefore has one entry per user constraint followed by one entry
per such bound row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import InputError

Rational = Fraction

MINIMIZE = "min"
MAXIMIZE = "max"
LE, GE, EQ = "<=", ">=", "=="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_RELATIONS = (LE, GE, EQ)


def _q(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise InputError(f"not a number: {v!r}")
    try:
        return Fraction(v)
    except (TypeError, ValueError) as exc:
        raise InputError(f"not a rational number: {v!r}") from exc


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in _RELATIONS:
            raise InputError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "coeffs", tuple(_q(a) for a in self.coeffs))
        object.__setattr__(self, "rhs", _q(self.rhs))


@dataclass(frozen=True)
class LinearProgramSpec:
    """A linear program ``sense c.x`` subject to rows and per-variable bounds.

    ``bounds[j] = (lower, upper)`` with ``None`` meaning unbounded on that side.
    Omitting ``bounds`` gives ``x >= 0`` for every variable.
    """

    sense: str
    objective: tuple
    constraints: tuple = ()
    bounds: Optional[tuple] = None

    def __post_init__(self):
        if self.sense not in (MINIMIZE, MAXIMIZE):
            raise InputError(f"unknown sense {self.sense!r}")
        obj = tuple(_q(c) for c in self.objective)
        rows = []
        for con in self.constraints:
            if not isinstance(con, Constraint):
                con = Constraint(*con)
            if len(con.coeffs) != len(obj):
                raise InputError(
                    f"constraint row has {len(con.coeffs)} coefficients, expected {len(obj)}"
                )
            rows.append(con)
        if self.bounds is None:
            bounds = tuple((Fraction(0), None) for _ in obj)
        else:
            if len(self.bounds) != len(obj):
                raise InputError("bounds length differs from objective length")
            bounds = tuple(
                (None if lo is None else _q(lo), None if hi is None else _q(hi))
                for lo, hi in self.bounds
            )
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "constraints", tuple(rows))
        object.__setattr__(self, "bounds", bounds)

    @property
    def n_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpSolution:
    status: str
    value: Optional[Fraction] = None
    primal: tuple = ()
    dual: tuple = ()

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


@dataclass
class _Canonical:
    # every variable is nonneg (+1), nonpos (-1) or free (0); other bounds became rows
    sense: str
    c: list
    rows: list  # (coeffs, relation, rhs)
    signs: list = field(default_factory=list)


def _canonical(spec: LinearProgramSpec) -> _Canonical:
    n = spec.n_vars
    rows = [(list(con.coeffs), con.relation, con.rhs) for con in spec.constraints]
    signs = []
    for j, (lo, hi) in enumerate(spec.bounds):
        unit = [Fraction(0)] * n
        unit[j] = Fraction(1)
        if lo == 0:
            signs.append(1)
            if hi is not None:
                rows.append((unit, LE, hi))
        elif lo is None and hi == 0:
            signs.append(-1)
        else:
            signs.append(0)
            if lo is not None:
                rows.append((unit, GE, lo))
            if hi is not None:
                rows.append((list(unit), LE, hi))
    return _Canonical(spec.sense, list(spec.objective), rows, signs)


def dual_of(spec: LinearProgramSpec) -> LinearProgramSpec:
    """Return the LP dual, one dual variable per (canonical) constraint row."""
    can = _canonical(spec)
    m, n = len(can.rows), len(can.c)
    minimize = can.sense == MINIMIZE
    bounds = []
    for _, rel, _ in can.rows:
        if rel == EQ:
            bounds.append((None, None))
        elif (rel == GE) == minimize:
            bounds.append((Fraction(0), None))
        else:
            bounds.append((None, Fraction(0)))
    constraints = []
    for j in range(n):
        col = [can.rows[i][0][j] for i in range(m)]
        s = can.signs[j]
        if s == 0:
            rel = EQ
        elif (s == 1) == minimize:
            rel = LE
        else:
            rel = GE
        constraints.append(Constraint(tuple(col), rel, can.c[j]))
    return LinearProgramSpec(
        MAXIMIZE if minimize else MINIMIZE,
        tuple(r[2] for r in can.rows),
        tuple(constraints),
        tuple(bounds),
    )


def _pivot(tab: list, objs: Sequence[list], r: int, c: int) -> None:
    prow = tab[r]
    piv = prow[c]
    if piv != 1:
        prow = [v / piv for v in prow]
        tab[r] = prow
    nz = [j for j, v in enumerate(prow) if v]
    for i, row in enumerate(tab):
        if i == r:
            continue
        f = row[c]
        if f:
            for j in nz:
                row[j] -= f * prow[j]
    for row in objs:
        f = row[c]
        if f:
            for j in nz:
                row[j] -= f * prow[j]


def _ratio_row(tab: list, basis: list, c: int) -> Optional[int]:
    best = None
    best_ratio = None
    for i, row in enumerate(tab):
        a = row[c]
        if a > 0:
            ratio = row[-1] / a
            if (
                best is None
                or ratio < best_ratio
                or (ratio == best_ratio and basis[i] < basis[best])
            ):
                best, best_ratio = i, ratio
    return best


def _run_simplex(tab, basis, objs, allowed: int) -> bool:
    """Bland-rule iterations on ``objs[0]``; returns False on unboundedness."""
    d = objs[0]
    while True:
        enter = next((j for j in range(allowed) if d[j] < 0), None)
        if enter is None:
            return True
        leave = _ratio_row(tab, basis, enter)
        if leave is None:
            return False
        _pivot(tab, objs, leave, enter)
        basis[leave] = enter


def solve_lp(spec: LinearProgramSpec) -> LpSolution:
    """Solve ``spec`` exactly.

    Returns status ``optimal`` with primal and dual vectors satisfying strong
    duality exactly, or ``infeasible`` / ``unbounded``.
    """
    can = _canonical(spec)
    sign = 1 if can.sense == MINIMIZE else -1
    n, m = len(can.c), len(can.rows)

    # standard form columns: x split by sign type, then one slack per inequality row
    col_of = []  # per canonical var: list of (std column, multiplier)
    ncols = 0
    for s in can.signs:
        if s == 1:
            col_of.append([(ncols, 1)])
            ncols += 1
        elif s == -1:
            col_of.append([(ncols, -1)])
            ncols += 1
        else:
            col_of.append([(ncols, 1), (ncols + 1, -1)])
            ncols += 2
    slack_of = {}
    for i, (_, rel, _) in enumerate(can.rows):
        if rel != EQ:
            slack_of[i] = ncols
            ncols += 1
    n_real = ncols
    width = n_real + m + 1

    cost = [Fraction(0)] * width
    for j in range(n):
        for col, mult in col_of[j]:
            cost[col] = sign * mult * can.c[j]

    tab = []
    row_sign = []
    for i, (coeffs, rel, rhs) in enumerate(can.rows):
        row = [Fraction(0)] * width
        for j in range(n):
            a = coeffs[j]
            if a:
                for col, mult in col_of[j]:
                    row[col] = mult * a
        if rel == LE:
            row[slack_of[i]] = Fraction(1)
        elif rel == GE:
            row[slack_of[i]] = Fraction(-1)
        row[-1] = rhs
        s = 1
        if rhs < 0:
            s = -1
            row = [-v for v in row]
        row[n_real + i] = Fraction(1)
        tab.append(row)
        row_sign.append(s)
    basis = [n_real + i for i in range(m)]

    phase1 = [Fraction(0)] * width
    for row in tab:
        for j in range(n_real):
            if row[j]:
                phase1[j] -= row[j]
        phase1[-1] -= row[-1]
    phase2 = list(cost)

    _run_simplex(tab, basis, [phase1, phase2], width - 1)
    if phase1[-1] != 0:
        return LpSolution(INFEASIBLE)

    for i in range(m):
        if basis[i] >= n_real:
            j = next((j for j in range(n_real) if tab[i][j] != 0), None)
            if j is not None:
                _pivot(tab, [phase1, phase2], i, j)
                basis[i] = j

    if not _run_simplex(tab, basis, [phase2], n_real):
        return LpSolution(UNBOUNDED)

    std_x = [Fraction(0)] * n_real
    for i, b in enumerate(basis):
        if b < n_real:
            std_x[b] = tab[i][-1]
    primal = []
    for j in range(n):
        primal.append(sum((mult * std_x[col] for col, mult in col_of[j]), Fraction(0)))
    value = sum((c * x for c, x in zip(can.c, primal)), Fraction(0))
    # reduced cost of artificial i is -y_i; undo the row sign flip and the max->min negation
    dual = tuple(sign * row_sign[i] * -phase2[n_real + i] for i in range(m))
    return LpSolution(OPTIMAL, value, tuple(primal), dual)


def objective_value(spec: LinearProgramSpec, x: Iterable) -> Fraction:
    return sum((c * _q(v) for c, v in zip(spec.objective, x)), Fraction(0))


def is_feasible(spec: LinearProgramSpec, x: Sequence) -> bool:
    """Exact feasibility test of ``x`` against rows and bounds."""
    x = [_q(v) for v in x]
    if len(x) != spec.n_vars:
        return False
    for (lo, hi), v in zip(spec.bounds, x):
        if (lo is not None and v < lo) or (hi is not None and v > hi):
            return False
    for con in spec.constraints:
        lhs = sum((a * v for a, v in zip(con.coeffs, x)), Fraction(0))
        if con.relation == LE and lhs > con.rhs:
            return False
        if con.relation == GE and lhs < con.rhs:
            return False
        if con.relation == EQ and lhs != con.rhs:
            return False
    return True
