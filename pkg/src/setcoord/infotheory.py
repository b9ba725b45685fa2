"""Rényi information quantities and the max-min characterizations of the
asymptotic coordination capacity.

All logarithms are base 2.  The order-1 inner problem

    min over channels supported on the graph's edges of I(X;Y)

is solved by alternating minimization; orders 0 and infinity reduce to
exact linear programs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from .cover import fractional_cover_lp, log2_fraction
from .errors import InputError
from .exactlp import EQ, GE, LE, MAXIMIZE, MINIMIZE, LinearProgramSpec, solve_lp
from .graph import CoordinationGraph

LN2 = math.log(2.0)
INF = math.inf

MAX_ITER = 10_000
TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Pmf:
    labels: tuple
    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        labels = tuple(self.labels)
        if p.ndim != 1 or len(labels) != p.size:
            raise InputError("pmf needs one probability per label")
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
            raise InputError("pmf entries must be nonnegative and sum to 1")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def of(cls, probs, labels=None) -> "Pmf":
        probs = np.asarray([float(v) for v in probs])
        return cls(tuple(range(probs.size)) if labels is None else tuple(labels), probs)

    @classmethod
    def uniform(cls, labels) -> "Pmf":
        labels = tuple(labels)
        return cls(labels, np.full(len(labels), 1.0 / len(labels)))

    @classmethod
    def from_json(cls, obj) -> "Pmf":
        try:
            return cls(tuple(str(v) for v in obj["labels"]), np.asarray(obj["p"], dtype=float))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError('pmf JSON needs "labels" and "p"') from exc


@dataclass(frozen=True, eq=False)
class Channel:
    inputs: tuple
    outputs: tuple
    rows: np.ndarray  # shape (len(inputs), len(outputs))

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.shape != (len(self.inputs), len(self.outputs)):
            raise InputError(f"channel rows have shape {rows.shape}")
        if np.any(rows < 0) or np.any(np.abs(rows.sum(axis=1) - 1.0) > 1e-12):
            raise InputError("every channel row must be a pmf")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))

    @classmethod
    def of(cls, rows) -> "Channel":
        rows = np.asarray(rows, dtype=float)
        return cls(tuple(range(rows.shape[0])), tuple(range(rows.shape[1])), rows)

    @classmethod
    def from_json(cls, obj) -> "Channel":
        try:
            return cls(tuple(obj["in"]), tuple(obj["out"]), np.asarray(obj["rows"], dtype=float))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError('channel JSON needs "in", "out" and "rows"') from exc

    def is_allowed(self, g: CoordinationGraph) -> bool:
        """Support of every row lies inside the corresponding action set."""
        if self.rows.shape != (g.nx, g.ny):
            return False
        return not np.any((self.rows > 0) & ~edge_mask(g))


def load_json(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from exc


def _vec(p) -> np.ndarray:
    return p.p if isinstance(p, Pmf) else np.asarray(p, dtype=float)


def _mat(ch) -> np.ndarray:
    return ch.rows if isinstance(ch, Channel) else np.asarray(ch, dtype=float)


def _pair(q_x, ch):
    q, W = _vec(q_x), _mat(ch)
    if W.ndim != 2 or W.shape[0] != q.size:
        raise InputError(f"pmf of length {q.size} does not match channel of shape {W.shape}")
    return q, W


def edge_mask(g: CoordinationGraph) -> np.ndarray:
    mask = np.zeros((g.nx, g.ny), dtype=bool)
    for i, j in g.edges():
        mask[i, j] = True
    return mask


def uniform_allowed_channel(g: CoordinationGraph) -> Channel:
    mask = edge_mask(g).astype(float)
    return Channel(g.x_labels, g.y_labels, mask / mask.sum(axis=1, keepdims=True))


# ---------------------------------------------------------------------------
# divergences and mutual informations


def kl_divergence(p, q) -> float:
    p, q = _vec(p), _vec(q)
    if p.shape != q.shape:
        raise InputError("pmfs have different lengths")
    s = p > 0
    if np.any(q[s] == 0):
        return INF
    return float(np.sum(p[s] * np.log2(p[s] / q[s])))


def renyi_divergence(p, q, alpha: float) -> float:
    """Rényi divergence of order ``alpha`` in bits (``alpha = 1`` gives KL)."""
    p, q = _vec(p), _vec(q)
    if p.shape != q.shape:
        raise InputError("pmfs have different lengths")
    if alpha < 0:
        raise InputError("alpha must be nonnegative")
    if alpha == 1:
        return kl_divergence(p, q)
    s = p > 0
    if alpha == INF:
        if np.any(q[s] == 0):
            return INF
        return float(np.log2(np.max(p[s] / q[s])))
    if alpha == 0:
        mass = float(q[s].sum())
        return INF if mass == 0 else -math.log2(mass)
    ps, qs = p[s], q[s]
    if alpha > 1 and np.any(qs == 0):
        return INF
    keep = qs > 0
    if not np.any(keep):
        return INF
    log_terms = alpha * np.log(ps[keep]) + (1 - alpha) * np.log(qs[keep])
    return float(logsumexp(log_terms) / (alpha - 1) / LN2)


def shannon_mutual_information(q_x, ch) -> float:
    q, W = _pair(q_x, ch)
    r = q @ W
    # rows with q(x) = 0 may put mass where r(y) = 0
    s = q > 0
    q, W = q[s], W[s]
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(W > 0, W * np.log2(W / r[None, :]), 0.0)
    return float(q @ terms.sum(axis=1))


def mi_order_zero(q_x, ch) -> float:
    """``-log2 max_y sum_{x: p(y|x) > 0} q(x)``."""
    q, W = _pair(q_x, ch)
    return -math.log2(float(np.max(q @ (W > 0))))


def mi_order_infinity(q_x, ch) -> float:
    """``log2 sum_y max_{x: q(x) > 0} p(y|x)``."""
    q, W = _pair(q_x, ch)
    return math.log2(float(W[q > 0].max(axis=0).sum()))


def renyi_mutual_information(q_x, ch, alpha: float) -> float:
    """Order-``alpha`` mutual information in the closed form

        alpha/(alpha-1) * log2 sum_y [ sum_x q(x) p(y|x)^alpha ]^(1/alpha)

    evaluated in the log domain so that orders near 0 and large orders are
    stable.
    """
    q, W = _pair(q_x, ch)
    if alpha < 0:
        raise InputError("alpha must be nonnegative")
    if alpha == 0:
        return mi_order_zero(q, W)
    if alpha == INF:
        return mi_order_infinity(q, W)
    if alpha == 1:
        return shannon_mutual_information(q, W)
    s = q > 0
    lq, Ws = np.log(q[s]), W[s]
    with np.errstate(divide="ignore"):
        lw = np.where(Ws > 0, np.log(np.where(Ws > 0, Ws, 1.0)), -np.inf)
    inner = logsumexp(lq[:, None] + alpha * lw, axis=0)
    inner = inner[np.isfinite(inner)]
    return float(alpha / (alpha - 1) * logsumexp(inner / alpha) / LN2)


def winter_rate(ch) -> float:
    """``log2 sum_y max_x p(y|x)``: zero-error channel simulation rate with
    unlimited common randomness."""
    W = _mat(ch)
    return math.log2(float(W.max(axis=0).sum()))


# ---------------------------------------------------------------------------
# order-1 inner problem


@dataclass(frozen=True, eq=False)
class AlternatingResult:
    bits: float  # I(q, channel) at the final channel
    lower_bound: float  # certified by the portfolio-style duality gap
    channel: np.ndarray
    output: np.ndarray
    iterations: int


def _check_q(g: CoordinationGraph, q_x) -> np.ndarray:
    q = _vec(q_x)
    if q.ndim != 1 or q.size != g.nx:
        raise InputError(f"pmf has {q.size} entries but the graph has {g.nx} x vertices")
    if isinstance(q_x, Pmf) and q_x.labels != tuple(range(g.nx)):
        if [str(v) for v in q_x.labels] != [str(v) for v in g.x_labels]:
            raise InputError("pmf labels do not match the graph's x labels")
    if np.any(q < 0) or abs(q.sum() - 1.0) > 1e-12:
        raise InputError("not a pmf")
    return q


def min_mutual_information(g: CoordinationGraph, q_x, tol: float = TOL,
                           max_iter: int = MAX_ITER) -> AlternatingResult:
    """Minimize Shannon I(X;Y) over channels supported on the edges of ``g``.

    Starts from the channel uniform on each action set and alternates
    between the optimal output marginal and the optimal restricted channel
    ``p(y|x) = r(y) / sum_{y' in A_x} r(y')``.  Stops when successive
    objective values differ by less than ``tol`` or after ``max_iter`` rounds.
    """
    q = _check_q(g, q_x)
    full_mask = edge_mask(g).astype(float)
    uniform = full_mask / full_mask.sum(axis=1, keepdims=True)
    s = q > 0
    qs, mask = q[s], full_mask[s]
    P = uniform[s]
    r = qs @ P
    prev = None
    it = 0
    bits = math.nan
    for it in range(1, max_iter + 1):
        R = mask @ r
        P = mask * r[None, :] / R[:, None]
        r = qs @ P
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(P > 0, P * np.log2(P / r[None, :]), 0.0)
        bits = float(qs @ terms.sum(axis=1))
        if prev is not None and abs(prev - bits) < tol:
            break
        prev = bits
    R = mask @ r
    f_r = float(-(qs @ np.log2(R)))
    lower = f_r - math.log2(float(((qs / R) @ mask).max()))
    channel = uniform.copy()
    channel[s] = P
    return AlternatingResult(bits, lower, channel, r, it)


def rate_distortion_zero(q_x, g: CoordinationGraph) -> float:
    """Shannon rate-distortion function at D = 0 for the 0/1 distortion that
    vanishes exactly on the graph's edges."""
    return min_mutual_information(g, q_x).bits


# ---------------------------------------------------------------------------
# exact LPs for orders 0 and infinity


def hider_lp_spec(g: CoordinationGraph, support: Optional[Sequence[int]] = None) -> LinearProgramSpec:
    """min t s.t. sum_{x ~ y} q(x) <= t for every y, q a pmf (variables q..., t)."""
    n = g.nx
    rows = []
    for j in range(g.ny):
        row = [0] * (n + 1)
        for i in g.y_neighbors(j):
            row[i] = 1
        row[n] = -1
        rows.append((row, LE, 0))
    rows.append(([1] * n + [0], EQ, 1))
    bounds = [(0, None)] * n + [(None, None)]
    if support is not None:
        keep = set(support)
        bounds = [(0, None) if i in keep else (0, 0) for i in range(n)] + [(None, None)]
    return LinearProgramSpec(MINIMIZE, (0,) * n + (1,), tuple(rows), tuple(bounds))


def seeker_lp_spec(g: CoordinationGraph) -> LinearProgramSpec:
    """max v s.t. sum_{y in A_x} s(y) >= v for every x, s a pmf (variables s..., v)."""
    m = g.ny
    rows = []
    for i in range(g.nx):
        row = [0] * (m + 1)
        for j in g.neighbors(i):
            row[j] = 1
        row[m] = -1
        rows.append((row, GE, 0))
    rows.append(([1] * m + [0], EQ, 1))
    return LinearProgramSpec(MAXIMIZE, (0,) * m + (1,), tuple(rows),
                             tuple([(0, None)] * m + [(None, None)]))


def lp2_spec(g: CoordinationGraph, support: Optional[Sequence[int]] = None):
    """The channel-form LP: min sum_y a(y) s.t. a(y) >= p(y|x) on edges,
    rows of p sum to one.  Variables are a(y) for every y followed by p(y|x)
    for every edge with x in ``support``.  Returns (spec, edge list)."""
    xs = range(g.nx) if support is None else sorted(set(support))
    edges = [(i, j) for i in xs for j in g.neighbors(i)]
    m, k = g.ny, len(edges)
    rows = []
    for e, (i, j) in enumerate(edges):
        row = [0] * (m + k)
        row[j] = 1
        row[m + e] = -1
        rows.append((row, GE, 0))
    for i in xs:
        row = [0] * (m + k)
        for e, (i2, _) in enumerate(edges):
            if i2 == i:
                row[m + e] = 1
        rows.append((row, EQ, 1))
    return LinearProgramSpec(MINIMIZE, (1,) * m + (0,) * k, tuple(rows)), edges


def lp2_value(g: CoordinationGraph, support: Optional[Sequence[int]] = None) -> Fraction:
    spec, _ = lp2_spec(g, support)
    sol = solve_lp(spec)
    assert sol.optimal, sol.status
    return sol.value


def min_information_over_allowed_channels(g: CoordinationGraph, q_x, alpha) -> float:
    """``min over allowed channels of I_alpha(X;Y)`` for alpha in {0, 1, inf}."""
    q = _check_q(g, q_x)
    if alpha == 0:
        return -math.log2(float(np.max(q @ edge_mask(g))))
    if alpha == INF:
        return log2_fraction(lp2_value(g, np.flatnonzero(q > 0).tolist()))
    if alpha == 1:
        return min_mutual_information(g, q).bits
    raise InputError("alpha must be 0, 1 or inf")


@dataclass(frozen=True, eq=False)
class MaxMinResult:
    alpha: float
    bits: float
    exact: Optional[Fraction]  # the count whose log2 is ``bits`` (orders 0 and inf)
    q: Optional[tuple] = None  # maximizing input pmf (exact) for orders 0 and 1
    lp_bits: Optional[float] = None  # log2 LP(G), for certification of order 1
    lower_bound: Optional[float] = None
    details: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.lp_bits is None or abs(self.bits - self.lp_bits) <= 1e-6


def max_hider_strategy(g: CoordinationGraph) -> tuple[Fraction, tuple]:
    """Exact maximizer of the order-0 objective; returns (t*, q*) where
    ``-log2 t*`` is the optimum."""
    sol = solve_lp(hider_lp_spec(g))
    assert sol.optimal, sol.status
    return sol.value, sol.primal[: g.nx]


def maxmin_characterization(g: CoordinationGraph, alpha) -> MaxMinResult:
    """``max_q min_{allowed channels} I_alpha`` for alpha in {0, 1, inf}.

    Order 0 is an exact LP over q; order infinity does not depend on a
    full-support q and is the channel-form LP; order 1 is evaluated at the
    order-0 maximizer and compared against ``log2 LP(G)``.
    """
    if alpha == 0:
        t, q = max_hider_strategy(g)
        return MaxMinResult(0, -log2_fraction(t), 1 / t, q)
    if alpha == INF:
        v = lp2_value(g)
        return MaxMinResult(INF, log2_fraction(v), v)
    if alpha == 1:
        t, q = max_hider_strategy(g)
        res = min_mutual_information(g, np.array([float(v) for v in q]))
        lp = fractional_cover_lp(g).value
        return MaxMinResult(1, res.bits, None, q, log2_fraction(lp), res.lower_bound,
                            {"iterations": res.iterations})
    raise InputError("alpha must be 0, 1 or inf")


@dataclass(frozen=True)
class OptimalityDiagnostic:
    c: float
    deviation: float
    mutual_information: float
    n_pairs: int


def shannon_optimality_diagnostic(g: CoordinationGraph, q_x, support_tol: float = 1e-9) -> OptimalityDiagnostic:
    """How far the inner-optimal joint is from ``q(x,y) = c q(x) q(y)``.

    Over pairs with joint mass above ``support_tol`` the ratio
    ``q(x,y) / (q(x) q(y))`` is compared to the best single constant ``c``
    (the midrange); ``deviation`` is the largest absolute difference.
    """
    q = _check_q(g, q_x)
    res = min_mutual_information(g, q)
    joint = q[:, None] * res.channel
    pairs = joint > support_tol
    ratio = joint[pairs] / (q[:, None] * res.output[None, :])[pairs]
    lo, hi = float(ratio.min()), float(ratio.max())
    return OptimalityDiagnostic((lo + hi) / 2, (hi - lo) / 2, res.bits, int(pairs.sum()))


# ---------------------------------------------------------------------------
# Hide and Seek


@dataclass(frozen=True)
class GameValue:
    value: Fraction
    hider_strategy: dict  # x label -> Fraction
    seeker_strategy: dict  # y label -> Fraction


def hide_and_seek_value(g: CoordinationGraph) -> GameValue:
    """Nash value of the game where the seeker wins iff it picks y in A_x.

    Both players' LPs are solved exactly; their optimal values must agree.
    """
    seek = solve_lp(seeker_lp_spec(g))
    hide = solve_lp(hider_lp_spec(g))
    assert seek.optimal and hide.optimal
    if seek.value != hide.value:
        raise AssertionError(f"minimax mismatch: {seek.value} != {hide.value}")
    return GameValue(
        seek.value,
        {x: v for x, v in zip(g.x_labels, hide.primal[: g.nx])},
        {y: v for y, v in zip(g.y_labels, seek.primal[: g.ny])},
    )
