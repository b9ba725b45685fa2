"""Per-letter one-shot rates of the pentagon for n = 1..3 against log2 LP.

n = 1, 2 are exact. n = 3 (125 x 125) is past the exact branch-and-bound, so
anytime bounds are printed; pass --milp to cross-check with scipy's MILP solver.
"""

import argparse
import math
import time
from dataclasses import dataclass

import numpy as np

from setcoord.cover import cover_bounds, fractional_cover_lp, log2_fraction
from setcoord.graph import pentagon, tensor_power


@dataclass
class Config:
    max_n: int = 3
    node_limit: int = 20_000
    milp: bool = False


def milp_cover(g) -> int:
    from scipy.optimize import Bounds, LinearConstraint, milp

    A = np.zeros((g.nx, g.ny))
    for x in range(g.nx):
        A[x, g.neighbors(x)] = 1
    res = milp(np.ones(g.ny), constraints=LinearConstraint(A, lb=1), integrality=np.ones(g.ny),
               bounds=Bounds(0, 1))
    return round(res.fun)


def main(cfg: Config) -> None:
    g = pentagon()
    lp = fractional_cover_lp(g).value
    print(f"log2 LP = log2({lp}) = {log2_fraction(lp):.6f}")
    print(f"{'n':>2} {'IP lower':>9} {'IP upper':>9} {'exact':>6} {'rate lo':>8} {'rate hi':>8} {'secs':>6}")
    for n in range(1, cfg.max_n + 1):
        gn = tensor_power(g, n)
        t0 = time.perf_counter()
        b = cover_bounds(gn, node_limit=cfg.node_limit)
        dt = time.perf_counter() - t0
        print(f"{n:2d} {b.lower:9d} {b.upper:9d} {str(b.exact):>6} "
              f"{math.log2(b.lower) / n:8.4f} {math.log2(b.upper) / n:8.4f} {dt:6.2f}")
        if cfg.milp:
            print(f"   scipy milp IP = {milp_cover(gn)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=Config.max_n)
    ap.add_argument("--node-limit", type=int, default=Config.node_limit)
    ap.add_argument("--milp", action="store_true")
    a = ap.parse_args()
    main(Config(a.max_n, a.node_limit, a.milp))
