"""Built-in invariant suites, run by ``setcoord verify``.

Each suite draws seeded random instances and checks properties that must
hold exactly (or within a stated float slack).  Failures are collected as
messages; a suite with none passes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .cover import cover_lp_spec, disjoint_neighborhood_packing, fractional_cover_lp, min_cover_ip
from .errors import UncoordinatableError
from .exactlp import dual_of, solve_lp
from .fflinalg import PrimeField, Subspace, random_matrix
from .graph import pentagon, random_graph, tensor_product
from .infotheory import (
    INF,
    Channel,
    hide_and_seek_value,
    maxmin_characterization,
    renyi_mutual_information,
)
from .lincoord import (
    LinearCoordProblem,
    brute_force_linear_capacity,
    linear_capacity,
    stacked_problem,
    synthesize_code,
    verify_code,
)

SUITES = ("lp", "cover", "renyi", "linear")


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _graphs(rng: random.Random, count: int, max_side: int):
    for _ in range(count):
        yield random_graph(rng, rng.randint(1, max_side), rng.randint(1, max_side), rng.uniform(0.3, 0.8))


def suite_lp(rng: random.Random, scale: int) -> SuiteResult:
    res = SuiteResult("lp")
    for k, g in enumerate(_graphs(rng, 10 * scale, 6)):
        res.cases += 1
        spec = cover_lp_spec(g)
        primal = solve_lp(spec)
        dual = solve_lp(dual_of(spec))
        if primal.value != dual.value:
            res.failures.append(f"graph {k}: primal {primal.value} != dual {dual.value}")
        if sum(primal.dual) != primal.value:
            res.failures.append(f"graph {k}: packing weights sum to {sum(primal.dual)}")
    return res


def suite_cover(rng: random.Random, scale: int) -> SuiteResult:
    res = SuiteResult("cover")
    g = pentagon()
    gg = tensor_product(g, g)
    if (min_cover_ip(g).size, fractional_cover_lp(g).value, min_cover_ip(gg).size) != (3, Fraction(5, 2), 8):
        res.failures.append("pentagon values wrong")
    res.cases += 1
    for k in range(5 * scale):
        g1, g2 = list(_graphs(rng, 2, 4))
        prod = tensor_product(g1, g2)
        res.cases += 1
        lp1, lp2, lpp = (fractional_cover_lp(h).value for h in (g1, g2, prod))
        ip1, ip2, ipp = (min_cover_ip(h).size for h in (g1, g2, prod))
        if lpp != lp1 * lp2:
            res.failures.append(f"pair {k}: LP not multiplicative")
        if ipp > ip1 * ip2:
            res.failures.append(f"pair {k}: IP not submultiplicative")
        pk = disjoint_neighborhood_packing(prod).size
        if not pk <= lpp <= ipp:
            res.failures.append(f"pair {k}: packing/LP/IP sandwich broken")
    return res


def suite_renyi(rng: random.Random, scale: int) -> SuiteResult:
    res = SuiteResult("renyi")
    alphas = (0, 0.25, 0.5, 1, 2, 8, INF)
    for k in range(10 * scale):
        nx, ny = rng.randint(1, 4), rng.randint(1, 4)
        q = np.array([rng.random() for _ in range(nx)])
        q /= q.sum()
        rows = np.array([[rng.random() ** 2 for _ in range(ny)] for _ in range(nx)])
        rows /= rows.sum(axis=1, keepdims=True)
        vals = [renyi_mutual_information(q, Channel.of(rows), a) for a in alphas]
        res.cases += 1
        if any(b < a - 1e-9 for a, b in zip(vals, vals[1:])):
            res.failures.append(f"pair {k}: not monotone in alpha {vals}")
    for k, g in enumerate(_graphs(rng, 3 * scale, 5)):
        res.cases += 1
        lp = fractional_cover_lp(g).value
        m0, minf = maxmin_characterization(g, 0), maxmin_characterization(g, INF)
        if not (m0.exact == minf.exact == lp):
            res.failures.append(f"graph {k}: orders 0/inf give {m0.exact}, {minf.exact}; LP {lp}")
        m1 = maxmin_characterization(g, 1)
        if not m1.certified:
            res.failures.append(f"graph {k}: order 1 gives {m1.bits}, log LP {m1.lp_bits}")
        if hide_and_seek_value(g).value * lp != 1:
            res.failures.append(f"graph {k}: game value times LP != 1")
    return res


def random_linear_problem(rng: random.Random, p: int, max_dim: int = 4) -> LinearCoordProblem:
    """Random feasible instance; retries until K1 V fits in Im K3 + Im K4."""
    f = PrimeField(p)
    while True:
        c, r1 = rng.randint(1, max_dim), rng.randint(1, max_dim)
        # a small Im K3 keeps t away from 0 most of the time
        s1 = rng.randint(0, c - 1) if rng.random() < 0.7 else rng.randint(0, max_dim)
        s2 = rng.randint(1, max_dim)
        K1 = random_matrix(rng, f, c, r1)
        K3 = random_matrix(rng, f, c, s1)
        K4 = random_matrix(rng, f, c, s2)
        if rng.random() < 0.5:
            V = Subspace.full(f, r1)
        else:
            V = Subspace.span(f, r1, [tuple(rng.randrange(p) for _ in range(r1)) for _ in range(rng.randint(0, r1))])
        try:
            return LinearCoordProblem(f, K1, K3, K4, V)
        except UncoordinatableError:
            continue


def suite_linear(rng: random.Random, scale: int) -> SuiteResult:
    res = SuiteResult("linear")
    for k in range(10 * scale):
        prob = random_linear_problem(rng, rng.choice((2, 3)))
        res.cases += 1
        t = linear_capacity(prob).t
        if brute_force_linear_capacity(prob) != t:
            res.failures.append(f"instance {k}: closed form disagrees with enumeration")
        code = synthesize_code(prob)
        if code.t != t or not verify_code(prob, code):
            res.failures.append(f"instance {k}: synthesized code invalid")
        if linear_capacity(stacked_problem(prob, 2)).t != 2 * t:
            res.failures.append(f"instance {k}: two-letter capacity is not 2t")
    return res


_RUNNERS: dict[str, Callable[[random.Random, int], SuiteResult]] = {
    "lp": suite_lp,
    "cover": suite_cover,
    "renyi": suite_renyi,
    "linear": suite_linear,
}


def run_suites(names=SUITES, seed: int = 0, scale: int = 1) -> list[SuiteResult]:
    return [_RUNNERS[n](random.Random(f"{seed}:{n}"), scale) for n in names]
