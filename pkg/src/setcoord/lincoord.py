"""Linear coordination over GF(p).

Node one sees ``x1`` in a support subspace V, sends ``S x1`` (t symbols),
and the actions ``y1 = A x1``, ``y2 = B S x1`` must satisfy
``K1 x1 + K3 y1 + K4 y2 = 0``.  The smallest workable t is

    min dim U  over  U <= Im K4  with  K1 V <= Im K3 + U,

which equals ``dim(K1 V + Im K3) - dim Im K3``.  Both the closed form
(:func:`linear_capacity`) and exhaustive search (:func:`brute_force_linear_capacity`)
are provided so each can check the other.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .cover import disjoint_neighborhood_packing, fractional_cover_lp, min_cover_ip
from .errors import InputError, PreconditionError, ResourceError, UncoordinatableError
from .fflinalg import (
    DEFAULT_ENUM_CAP,
    FfMatrix,
    PrimeField,
    Subspace,
    block_diag,
    contains,
    enumerate_subspaces,
    image,
    is_subspace_of,
    kron_identity,
    map_subspace,
    rref,
    solve,
    subspace_sum,
)
from .graph import DEFAULT_CAP, CoordinationGraph


def _support(field: PrimeField, n: int, support) -> tuple[Subspace, Optional[tuple]]:
    if support is None or support == "full":
        return Subspace.full(field, n), None
    if isinstance(support, Subspace):
        return support, None
    vecs = tuple(tuple(int(a) % field.p for a in v) for v in support)
    return Subspace.span(field, n, vecs), vecs


@dataclass(frozen=True)
class LinearCoordProblem:
    field: PrimeField
    K1: FfMatrix
    K3: FfMatrix
    K4: FfMatrix
    support: Subspace
    # raw support points when given as a list; V is their span
    support_points: Optional[tuple] = None

    def __post_init__(self):
        mats = (self.K1, self.K3, self.K4)
        if any(m.field != self.field for m in mats):
            raise InputError("K matrices must share the problem's field")
        if len({m.rows for m in mats}) != 1:
            raise InputError("K1, K3, K4 must have the same number of rows")
        if self.support.field != self.field or self.support.ambient_dim != self.K1.cols:
            raise InputError("support must be a subspace of F^r1")
        if not is_subspace_of(self.image_k1v, subspace_sum(image(self.K3), image(self.K4))):
            raise UncoordinatableError("K1 V is not contained in Im(K3) + Im(K4)")

    @classmethod
    def of(cls, p, K1, K3, K4, support="full") -> "LinearCoordProblem":
        f = PrimeField(p) if not isinstance(p, PrimeField) else p
        K1 = K1 if isinstance(K1, FfMatrix) else FfMatrix.of(f, K1)
        c = K1.rows
        K3 = K3 if isinstance(K3, FfMatrix) else _matrix(f, K3, c)
        K4 = K4 if isinstance(K4, FfMatrix) else _matrix(f, K4, c)
        V, pts = _support(f, K1.cols, support)
        return cls(f, K1, K3, K4, V, pts)

    @classmethod
    def from_json(cls, obj) -> "LinearCoordProblem":
        f, mats = _parse_matrices(obj, ("K1", "K3", "K4"))
        V, pts = _support(f, mats["K1"].cols, obj.get("support", "full"))
        return cls(f, mats["K1"], mats["K3"], mats["K4"], V, pts)

    @property
    def c(self) -> int:
        return self.K1.rows

    @property
    def r1(self) -> int:
        return self.K1.cols

    @property
    def s1(self) -> int:
        return self.K3.cols

    @property
    def s2(self) -> int:
        return self.K4.cols

    @property
    def image_k1v(self) -> Subspace:
        return map_subspace(self.K1, self.support)


def _matrix(f: PrimeField, rows, n_rows: int) -> FfMatrix:
    rows = list(rows)
    if not rows or all(len(r) == 0 for r in rows):
        return FfMatrix.zeros(f, n_rows, 0)
    m = FfMatrix.of(f, rows)
    if m.rows != n_rows:
        raise InputError(f"matrix has {m.rows} rows, expected {n_rows}")
    return m


def _parse_matrices(obj, names) -> tuple[PrimeField, dict]:
    if not isinstance(obj, dict) or "prime" not in obj:
        raise InputError('linear problem JSON needs "prime"')
    try:
        f = PrimeField(int(obj["prime"]))
        missing = [k for k in names if k not in obj]
        if missing:
            raise InputError(f"missing matrices: {missing}")
        c = next((len(obj[k]) for k in names if obj[k] and len(obj[k][0]) > 0), None)
        if c is None:
            raise InputError("cannot infer the number of constraint rows")
        return f, {k: _matrix(f, obj[k], c) for k in names}
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad matrix entries ({exc})") from exc


def load_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from exc


# ---------------------------------------------------------------------------
# capacity


@dataclass(frozen=True)
class LinearCapacity:
    t: int
    U: Subspace  # U <= Im K4, U meets Im K3 trivially, K1 V <= Im K3 + U


def linear_capacity(p: LinearCoordProblem) -> LinearCapacity:
    """Closed-form capacity with an explicit witness subspace.

    A basis of K1 V is reduced modulo Im K3; each vector that is new modulo
    Im K3 is split as ``w + u`` with ``w`` in Im K3 and ``u`` in Im K4, and
    the ``u`` parts span the witness.
    """
    im3 = image(p.K3)
    current = im3
    reps = []
    for q in p.image_k1v.basis.data:
        if not contains(current, q):
            reps.append(q)
            current = subspace_sum(current, Subspace.span(p.field, p.c, [q]))
    t = current.dim - im3.dim
    M = p.K3.hstack(p.K4)
    us = []
    for q in reps:
        sol = solve(M, FfMatrix.from_columns(p.field, [q], p.c))
        if sol is None:
            raise UncoordinatableError("K1 V is not contained in Im(K3) + Im(K4)")
        b = FfMatrix(p.field, p.s2, 1, sol.data[p.s1:])
        us.append((p.K4 @ b).column(0))
    U = Subspace.span(p.field, p.c, us)
    assert U.dim == t == len(reps)
    return LinearCapacity(t, U)


def brute_force_linear_capacity(p: LinearCoordProblem, cap: int = DEFAULT_ENUM_CAP) -> int:
    """Smallest dim U over all subspaces U of Im K4, by enumeration."""
    im3, im4, kv = image(p.K3), image(p.K4), p.image_k1v
    for d in range(im4.dim + 1):
        for U in enumerate_subspaces(im4, d, cap):
            if is_subspace_of(kv, subspace_sum(im3, U)):
                return d
    raise UncoordinatableError("no subspace of Im(K4) works")


# ---------------------------------------------------------------------------
# codes


@dataclass(frozen=True)
class LinearCode:
    S: FfMatrix  # t x r1
    A: FfMatrix  # s1 x r1
    B: FfMatrix  # s2 x t

    @property
    def t(self) -> int:
        return self.S.rows


def verify_code(p: LinearCoordProblem, code: LinearCode) -> bool:
    """``(K1 + K3 A + K4 B S) v = 0`` for every basis vector v of V."""
    if code.S.cols != p.r1 or code.A.shape != (p.s1, p.r1) or code.B.shape != (p.s2, code.S.rows):
        raise InputError("code matrices have the wrong shapes")
    M = p.K1 + p.K3 @ code.A + p.K4 @ (code.B @ code.S)
    return all(not any(M.apply(v)) for v in p.support.basis.data)


def synthesize_code(p: LinearCoordProblem) -> LinearCode:
    """Build ``(S, A, B)`` with ``t = linear_capacity(p)`` rows in S.

    With V the matrix of basis columns of the support, each ``K1 v_i`` is
    split into an Im K3 part and a U part.  A solves ``K3 A V = -W``; the U
    part is pulled back through K4 on its pivot columns (a complement of
    ker K4), which keeps the rank of the pulled-back matrix L' at most t;
    S V is then a row basis of L' padded to t rows and B expresses L' in it.
    """
    cap = linear_capacity(p)
    f, t = p.field, cap.t
    basis = p.support.basis.data
    l = len(basis)
    if l == 0:
        return LinearCode(FfMatrix.zeros(f, t, p.r1), FfMatrix.zeros(f, p.s1, p.r1), FfMatrix.zeros(f, p.s2, t))
    V = FfMatrix.from_columns(f, basis, p.r1)
    Q = p.K1 @ V
    Ut = FfMatrix.from_columns(f, cap.U.basis.data, p.c)
    split = solve(p.K3.hstack(Ut), Q)
    if split is None:
        raise UncoordinatableError("K1 V is not contained in Im(K3) + U")
    La = FfMatrix(f, p.s1, l, split.data[: p.s1])
    R = Ut @ FfMatrix(f, t, l, split.data[p.s1:])

    At = solve(V.T, (-La).T)
    Lp = solve(p.K4, -R)
    assert At is not None and Lp is not None
    rows = rref(Lp).data
    assert len(rows) <= t
    Tm = FfMatrix(f, t, l, rows + ((0,) * l,) * (t - len(rows)))
    St = solve(V.T, Tm.T)
    Bt = solve(Tm.T, Lp.T)
    assert St is not None and Bt is not None
    return LinearCode(St.T, At.T, Bt.T)


def stacked_problem(p: LinearCoordProblem, n: int) -> LinearCoordProblem:
    """The n-letter problem with ``I_n (x) K`` matrices and support ``V^n``."""
    f = p.field
    Vb = FfMatrix(f, p.support.dim, p.r1, p.support.basis.data)
    V = Subspace(f, n * p.r1, block_diag(*([Vb] * n)))
    return LinearCoordProblem(f, kron_identity(n, p.K1), kron_identity(n, p.K3), kron_identity(n, p.K4), V)


# ---------------------------------------------------------------------------
# linear vs nonlinear


def _vec_label(v) -> str:
    return "".join(map(str, v)) if all(a < 10 for a in v) else ",".join(map(str, v))


def induced_graph(p: LinearCoordProblem, cap: int = DEFAULT_CAP) -> CoordinationGraph:
    """x side: all vectors of V; y side: all of F^s2; ``x ~ y`` iff some y1 completes the constraint."""
    nx, ny = len(p.support), p.field.p ** p.s2
    if max(nx, ny) > cap:
        raise ResourceError(f"induced graph would have {max(nx, ny)} vertices on a side (cap {cap})")
    im3 = image(p.K3)
    xs = list(p.support.vectors())
    ys = list(itertools.product(range(p.field.p), repeat=p.s2))
    k4y = [p.K4.apply(y) for y in ys]
    P = p.field.p
    adj = []
    for x in xs:
        k1x = p.K1.apply(x)
        mask = 0
        for j, w in enumerate(k4y):
            if contains(im3, tuple((a + b) % P for a, b in zip(k1x, w))):
                mask |= 1 << j
        adj.append(mask)
    return CoordinationGraph(tuple(_vec_label(x) for x in xs), tuple(_vec_label(y) for y in ys), tuple(adj))


@dataclass(frozen=True)
class NonlinearCheck:
    t: int
    field_size: int
    ip: int
    lp: Fraction
    ip_dagger: int
    equalities: dict  # name -> bool
    witnesses: tuple  # all vectors of U
    witnesses_ok: bool
    support_differs: bool  # support points do not exhaust their span
    bits: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.equalities.values()) and self.witnesses_ok


def satisfies_nl(p: LinearCoordProblem, vectors) -> bool:
    """Each vector in Im K1 and pairwise differences outside Im K3."""
    im1, im3 = image(p.K1), image(p.K3)
    P = p.field.p
    if not all(contains(im1, v) for v in vectors):
        return False
    for a, b in itertools.combinations(vectors, 2):
        if contains(im3, tuple((x - y) % P for x, y in zip(a, b))):
            return False
    return True


def nonlinear_equals_linear_check(p: LinearCoordProblem, cap: int = DEFAULT_CAP) -> NonlinearCheck:
    """Compare ``|F|^C_L`` with IP, LP and IP-dagger of the induced graph.

    Requires Im K4 <= Im K1; otherwise raises :class:`PreconditionError`.
    """
    if not is_subspace_of(image(p.K4), image(p.K1)):
        raise PreconditionError("Im(K4) is not contained in Im(K1)")
    g = induced_graph(p, cap)
    capacity = linear_capacity(p)
    ip = min_cover_ip(g, cap).size
    lp = fractional_cover_lp(g).value
    ipd = disjoint_neighborhood_packing(g, cap).size
    q = p.field.p
    lin = q ** capacity.t
    eq = {
        "C_L*log|F| = log IP": lin == ip,
        "log IP = log LP": lp == ip,
        "log LP = log IP_dagger": lp == ipd,
    }
    witnesses = tuple(capacity.U.vectors())
    differs = p.support_points is not None and len(set(p.support_points) | {(0,) * p.r1}) < len(p.support)
    bits = {
        "C_L*log|F|": capacity.t * math.log2(q),
        "log IP": math.log2(ip),
        "log LP": math.log2(lp.numerator) - math.log2(lp.denominator),
        "log IP_dagger": math.log2(ipd),
    }
    return NonlinearCheck(capacity.t, q, ip, lp, ipd, eq, witnesses, satisfies_nl(p, witnesses), differs, bits)


# ---------------------------------------------------------------------------
# multi-terminal


@dataclass(frozen=True)
class MacProblem:
    """Two transmitters with independent inputs, one receiver (node three)."""

    field: PrimeField
    K1: FfMatrix
    K2: FfMatrix
    K4: FfMatrix
    K5: FfMatrix
    K6: FfMatrix
    support1: Subspace
    support2: Subspace

    def components(self) -> tuple[LinearCoordProblem, LinearCoordProblem]:
        # constraints separate: (K1 + K4 A + K6 C S) V1 = 0 and (K2 + K5 B + K6 D T) V2 = 0
        return (
            LinearCoordProblem(self.field, self.K1, self.K4, self.K6, self.support1),
            LinearCoordProblem(self.field, self.K2, self.K5, self.K6, self.support2),
        )

    @classmethod
    def from_json(cls, obj) -> "MacProblem":
        f, m = _parse_matrices(obj, ("K1", "K2", "K4", "K5", "K6"))
        V1, _ = _support(f, m["K1"].cols, obj.get("support1", "full"))
        V2, _ = _support(f, m["K2"].cols, obj.get("support2", "full"))
        return cls(f, m["K1"], m["K2"], m["K4"], m["K5"], m["K6"], V1, V2)


def mac_capacities(p: MacProblem) -> tuple[LinearCapacity, LinearCapacity]:
    a, b = p.components()
    return linear_capacity(a), linear_capacity(b)


def mac_region_check(p: MacProblem, t1: int, t2: int) -> bool:
    f1, f2 = mac_capacities(p)
    return t1 >= f1.t and t2 >= f2.t


@dataclass(frozen=True)
class BcProblem:
    """One transmitter sending ``S x1`` to node two and ``T x1`` to node three."""

    field: PrimeField
    K1: FfMatrix
    K4: FfMatrix
    K5: FfMatrix
    K6: FfMatrix
    support: Subspace

    def __post_init__(self):
        mats = (self.K1, self.K4, self.K5, self.K6)
        if any(m.field != self.field for m in mats) or len({m.rows for m in mats}) != 1:
            raise InputError("K matrices must share the field and the row count")
        if self.support.ambient_dim != self.K1.cols:
            raise InputError("support must be a subspace of F^r1")
        total = subspace_sum(subspace_sum(image(self.K4), image(self.K5)), image(self.K6))
        if not is_subspace_of(map_subspace(self.K1, self.support), total):
            raise UncoordinatableError("K1 V is not contained in Im(K4) + Im(K5) + Im(K6)")

    @classmethod
    def from_json(cls, obj) -> "BcProblem":
        f, m = _parse_matrices(obj, ("K1", "K4", "K5", "K6"))
        V, _ = _support(f, m["K1"].cols, obj.get("support", "full"))
        return cls(f, m["K1"], m["K4"], m["K5"], m["K6"], V)


def bc_region_witness(p: BcProblem, t1: int, t2: int, cap: int = DEFAULT_ENUM_CAP):
    """``(U1, U2)`` with dims at most (t1, t2) satisfying the BC constraints, or None.

    Searches dimension pairs in ascending order, so a returned witness has
    the smallest dims found first.
    """
    im4, im5, im6 = image(p.K4), image(p.K5), image(p.K6)
    kv = map_subspace(p.K1, p.support)
    for d1 in range(min(t1, im5.dim) + 1):
        for d2 in range(min(t2, im6.dim) + 1):
            for U1 in enumerate_subspaces(im5, d1, cap):
                base = subspace_sum(im4, U1)
                for U2 in enumerate_subspaces(im6, d2, cap):
                    if is_subspace_of(kv, subspace_sum(base, U2)):
                        return U1, U2
    return None


def bc_region_check(p: BcProblem, t1: int, t2: int, cap: int = DEFAULT_ENUM_CAP) -> bool:
    return bc_region_witness(p, t1, t2, cap) is not None
