"""Random linear coordination instances: closed-form capacity, code synthesis and the
one-shot graph chain, tallied by capacity."""

import argparse
import random
from collections import Counter
from dataclasses import dataclass

from setcoord.errors import PreconditionError, UncoordinatableError
from setcoord.fflinalg import PrimeField, Subspace, random_matrix
from setcoord.lincoord import (
    LinearCoordProblem,
    linear_capacity,
    nonlinear_equals_linear_check,
    synthesize_code,
    verify_code,
)


@dataclass
class Config:
    seed: int = 0
    instances: int = 100
    p: int = 2
    max_dim: int = 3


def instance(rng: random.Random, cfg: Config) -> LinearCoordProblem:
    """K4 is built as K1 M so that the chain's hypothesis holds."""
    f = PrimeField(cfg.p)
    c = rng.randint(1, cfg.max_dim)
    K1 = random_matrix(rng, f, c, rng.randint(1, cfg.max_dim))
    K3 = random_matrix(rng, f, c, rng.randint(0, c - 1))
    K4 = K1 @ random_matrix(rng, f, K1.cols, rng.randint(1, cfg.max_dim))
    return LinearCoordProblem(f, K1, K3, K4, Subspace.full(f, K1.cols))


def main(cfg: Config) -> None:
    rng = random.Random(cfg.seed)
    by_t, failures, skipped = Counter(), 0, 0
    for _ in range(cfg.instances):
        try:
            prob = instance(rng, cfg)
        except UncoordinatableError:
            skipped += 1
            continue
        t = linear_capacity(prob).t
        ok = verify_code(prob, synthesize_code(prob))
        try:
            ok &= nonlinear_equals_linear_check(prob).passed
        except PreconditionError:
            skipped += 1
            continue
        by_t[t] += 1
        failures += not ok
    print(f"GF({cfg.p}), {cfg.instances} draws, {skipped} skipped")
    for t in sorted(by_t):
        print(f"  t={t}: {by_t[t]} instances")
    print(f"failures: {failures}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--instances", type=int, default=Config.instances)
    ap.add_argument("--p", type=int, default=Config.p)
    a = ap.parse_args()
    main(Config(a.seed, a.instances, a.p))
