"""Covers, fractional covers and packings of coordination graphs.

``IP(G)`` is the minimum number of y vertices meeting every x neighbourhood
(one-shot message count), ``LP(G)`` its linear relaxation (asymptotic
message count per letter), and ``IP_dagger(G)`` the largest set of x
vertices with pairwise disjoint neighbourhoods (integer packing).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import ResourceError
from .exactlp import GE, MINIMIZE, LinearProgramSpec, solve_lp
from .graph import DEFAULT_CAP, CoordinationGraph, _bits, tensor_power


@dataclass(frozen=True)
class CoverResult:
    size: int
    cover: tuple  # y labels, in graph order
    lower_bound: int = 0  # ceil(LP) used for pruning
    nodes: int = 0  # branch-and-bound nodes visited


@dataclass(frozen=True)
class FractionalCoverResult:
    value: Fraction
    weights: dict  # y label -> Fraction
    dual_weights: dict  # x label -> Fraction


@dataclass(frozen=True)
class PackingResult:
    size: int
    vertices: tuple  # x labels


@dataclass(frozen=True)
class Capacity:
    """``bits = log2(exact) / n``; ``exact`` is the IP or LP count."""

    bits: float
    exact: Fraction
    n: int = 1
    certificate: object = None


def log2_fraction(q) -> float:
    q = Fraction(q)
    return math.log2(q.numerator) - math.log2(q.denominator)


def _check_cap(g: CoordinationGraph, cap: int) -> None:
    if max(g.nx, g.ny) > cap:
        raise ResourceError(f"graph has {max(g.nx, g.ny)} vertices on a side (cap {cap})")


def cover_lp_spec(g: CoordinationGraph) -> LinearProgramSpec:
    rows = []
    for i in range(g.nx):
        row = [0] * g.ny
        for j in g.neighbors(i):
            row[j] = 1
        rows.append((row, GE, 1))
    return LinearProgramSpec(MINIMIZE, (1,) * g.ny, tuple(rows))


def fractional_cover_lp(g: CoordinationGraph) -> FractionalCoverResult:
    """Exact fractional cover with its packing certificate."""
    sol = solve_lp(cover_lp_spec(g))
    # always feasible (every x has a neighbour) and bounded below by 0
    assert sol.optimal, sol.status
    return FractionalCoverResult(
        sol.value,
        {y: w for y, w in zip(g.y_labels, sol.primal)},
        {x: w for x, w in zip(g.x_labels, sol.dual)},
    )


def _reduce(rows: list[int], ny: int) -> tuple[list[int], list[int]]:
    """Drop dominated rows and columns of a set-cover instance.

    ``rows`` are x neighbourhoods as y bitmasks.  Returns the surviving rows
    (as masks over the original y indices) and the surviving y indices.
    An x whose neighbourhood contains another's is implied; a y whose
    coverage is contained in another's can be swapped for it.
    """
    live_y = (1 << ny) - 1
    rows = sorted(set(rows), key=lambda m: (bin(m).count("1"), m))
    while True:
        kept = []
        for m in rows:
            m &= live_y
            if not any(k & m == k for k in kept):
                kept = [k for k in kept if k & m != m]
                kept.append(m)
        rows = sorted(set(kept), key=lambda m: (bin(m).count("1"), m))
        cov = {}
        for j in _bits(live_y):
            bit = 1 << j
            cov[j] = sum(1 << i for i, m in enumerate(rows) if m & bit)
        drop = 0
        ys = _bits(live_y)
        for j in ys:
            cj = cov[j]
            for k in ys:
                if k == j or drop >> k & 1:
                    continue
                ck = cov[k]
                # j dominated by k; on ties keep the lower index
                if cj & ck == cj and (cj != ck or k < j):
                    drop |= 1 << j
                    break
        if not drop:
            return rows, _bits(live_y)
        live_y &= ~drop


def _greedy_cover(cov: list[int], full: int) -> list[int]:
    chosen, left = [], full
    while left:
        j = max(range(len(cov)), key=lambda k: (bin(cov[k] & left).count("1"), -k))
        chosen.append(j)
        left &= ~cov[j]
    return chosen


@dataclass(frozen=True)
class CoverBounds:
    lower: int
    upper: int
    cover: tuple  # achieves ``upper``
    exact: bool  # search finished, so lower == upper
    nodes: int = 0
    lp_bound: int = 0  # ceil(LP) of the reduced instance


class _OutOfNodes(Exception):
    pass


def min_cover_ip(
    g: CoordinationGraph,
    cap: int = DEFAULT_CAP,
    node_limit: Optional[int] = None,
) -> CoverResult:
    """Exact minimum cover by branch-and-bound.

    Branches on the uncovered x with the fewest usable neighbours, trying
    them in label order.  Pruning uses ceil(LP) at the root plus a disjoint
    neighbourhood bound at each node.
    """
    res = cover_bounds(g, cap, node_limit)
    if not res.exact:
        raise ResourceError(f"branch-and-bound exceeded {node_limit} nodes")
    return CoverResult(res.upper, res.cover, res.lp_bound, res.nodes)


def cover_bounds(g: CoordinationGraph, cap: int = DEFAULT_CAP, node_limit: Optional[int] = None) -> CoverBounds:
    """Branch-and-bound that may stop early after ``node_limit`` nodes.

    On early stop the lower bound is ceil(LP) and the upper bound is the best
    cover found so far.
    """
    _check_cap(g, cap)
    rows, ys = _reduce(list(g.adj), g.ny)
    nr = len(rows)
    full = (1 << nr) - 1
    # work on compressed y indices 0..len(ys)-1
    cov = [sum(1 << i for i, m in enumerate(rows) if m >> j & 1) for j in ys]
    nbrs = [[k for k, c in enumerate(cov) if c >> i & 1] for i in range(nr)]

    sub = CoordinationGraph(tuple(range(nr)), tuple(range(len(ys))),
                            tuple(sum(1 << k for k in nb) for nb in nbrs))
    lp_value = fractional_cover_lp(sub).value
    root_lb = math.ceil(lp_value)

    best = _greedy_cover(cov, full)
    nodes = 0

    def bound(left: int, allowed: int) -> int:
        used, count, most = 0, 0, 0
        order = []
        for i in _bits(left):
            a = 0
            for k in nbrs[i]:
                if allowed >> k & 1:
                    a |= 1 << k
            order.append((bin(a).count("1"), i, a))
        order.sort()
        for _, _, a in order:
            if a & used == 0:
                used |= a
                count += 1
        n_left = bin(left).count("1")
        for k in _bits(allowed):
            most = max(most, bin(cov[k] & left).count("1"))
        if most == 0:
            return nr + 1
        return max(count, -(-n_left // most))

    def search(left: int, allowed: int, chosen: list[int]) -> None:
        nonlocal best, nodes
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            raise _OutOfNodes
        if left == 0:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        if len(best) <= root_lb:
            return
        if len(chosen) + bound(left, allowed) >= len(best):
            return
        pick, pick_nb = None, None
        for i in _bits(left):
            nb = [k for k in nbrs[i] if allowed >> k & 1]
            if pick is None or len(nb) < len(pick_nb):
                pick, pick_nb = i, nb
                if len(nb) <= 1:
                    break
        for k in pick_nb:
            chosen.append(k)
            search(left & ~cov[k], allowed, chosen)
            chosen.pop()
            allowed &= ~(1 << k)
            if len(best) <= root_lb:
                return

    try:
        search(full, (1 << len(ys)) - 1, [])
        done = True
    except _OutOfNodes:
        done = False
    picked = sorted(ys[k] for k in best)
    cover = tuple(g.y_labels[j] for j in picked)
    return CoverBounds(len(picked) if done else root_lb, len(picked), cover, done, nodes, root_lb)


def disjoint_neighborhood_packing(g: CoordinationGraph, cap: int = DEFAULT_CAP) -> PackingResult:
    """Maximum set of x vertices with pairwise disjoint neighbourhoods."""
    _check_cap(g, cap)
    n = g.nx
    conflict = [0] * n
    for i in range(n):
        for k in range(n):
            if i != k and g.adj[i] & g.adj[k]:
                conflict[i] |= 1 << k
    best: list[int] = []

    def color_bound(cand: int) -> int:
        # partition into conflict cliques; a packing meets each clique at most once
        classes = 0
        rest = cand
        while rest:
            classes += 1
            clique = 0
            for i in _bits(rest):
                if clique & ~conflict[i] == 0:
                    clique |= 1 << i
            rest &= ~clique
        return classes

    def search(cand: int, chosen: list[int]) -> None:
        nonlocal best
        if cand == 0:
            if len(chosen) > len(best):
                best = list(chosen)
            return
        if len(chosen) + color_bound(cand) <= len(best):
            return
        v = min(_bits(cand), key=lambda i: (bin(conflict[i] & cand).count("1"), i))
        chosen.append(v)
        search(cand & ~conflict[v] & ~(1 << v), chosen)
        chosen.pop()
        if conflict[v] & cand:
            search(cand & ~(1 << v), chosen)

    search((1 << n) - 1, [])
    return PackingResult(len(best), tuple(g.x_labels[i] for i in sorted(best)))


def one_shot_capacity(g: CoordinationGraph, cap: int = DEFAULT_CAP) -> Capacity:
    res = min_cover_ip(g, cap)
    return Capacity(log2_fraction(res.size), Fraction(res.size), 1, res)


def asymptotic_capacity(g: CoordinationGraph) -> Capacity:
    res = fractional_cover_lp(g)
    return Capacity(log2_fraction(res.value), res.value, 1, res)


def n_letter_rate(g: CoordinationGraph, n: int, cap: int = DEFAULT_CAP) -> Capacity:
    """``(1/n) log2 IP(g^{(x)n})`` from the explicit tensor power."""
    res = min_cover_ip(tensor_power(g, n, cap), cap)
    return Capacity(log2_fraction(res.size) / n, Fraction(res.size), n, res)
