"""Which side-information type maximizes the n-letter cover as n grows.

Class "pent" is the pentagon (IP 3, LP 5/2); class "fano" has the lines of the
Fano plane as action sets over its points (IP 3, LP 7/3). They tie at n = 1, so
the printout shows how the maximizing type moves toward the larger-LP class.
"""

import argparse
from dataclasses import dataclass

from setcoord.cover import log2_fraction
from setcoord.sideinfo import SideInfoProblem, asymptotic_capacity_side, class_graphs, n_letter_rate_side

FANO_LINES = [(0, 1, 2), (0, 3, 4), (0, 5, 6), (1, 3, 5), (1, 4, 6), (2, 3, 6), (2, 4, 5)]


@dataclass
class Config:
    max_n: int = 2


def problem() -> SideInfoProblem:
    x1, owner, actions = [], {}, {}
    for i in range(5):
        x = f"p{i}"
        x1.append(x)
        owner[x] = "pent"
        actions[x] = [f"y{i}", f"y{(i + 1) % 5}"]
    for i, line in enumerate(FANO_LINES):
        x = f"f{i}"
        x1.append(x)
        owner[x] = "fano"
        actions[x] = [f"y{j}" for j in line]
    return SideInfoProblem(tuple(x1), ("fano", "pent"), owner, tuple(f"y{j}" for j in range(7)), actions)


def main(cfg: Config) -> None:
    p = problem()
    asym = asymptotic_capacity_side(p)
    print("per-class LP:", {k: str(v) for k, v in asym.certificate.items()})
    print(f"asymptotic rate = {asym.bits:.6f}")
    for n in range(1, cfg.max_n + 1):
        r = n_letter_rate_side(p, n)
        share = r.best_type[p.x2_labels.index("pent")] / n
        print(f"n={n}: rate {r.bits:.6f}, best type {dict(zip(p.x2_labels, r.best_type))}, pentagon share {share:.2f}")
        for t, ip in sorted(r.per_type.items()):
            print(f"    type {dict(zip(p.x2_labels, t))}: IP {ip}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=Config.max_n)
    main(Config(ap.parse_args().max_n))
