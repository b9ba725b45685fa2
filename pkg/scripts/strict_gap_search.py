"""Random search for graphs whose two-letter cover beats the squared one-shot cover."""

import argparse
import random
from dataclasses import dataclass

from setcoord.cover import fractional_cover_lp, min_cover_ip
from setcoord.graph import random_graph, tensor_product


@dataclass
class Config:
    seed: int = 0
    draws: int = 2000
    max_side: int = 5
    show: int = 5


def main(cfg: Config) -> None:
    rng = random.Random(cfg.seed)
    hits = []
    for i in range(cfg.draws):
        g = random_graph(rng, rng.randint(2, cfg.max_side), rng.randint(2, cfg.max_side), rng.uniform(0.3, 0.8))
        ip = min_cover_ip(g).size
        ip2 = min_cover_ip(tensor_product(g, g)).size
        if ip2 < ip * ip:
            hits.append((i, g, ip, ip2))
    print(f"{len(hits)} strict gaps in {cfg.draws} draws ({100 * len(hits) / cfg.draws:.1f}%)")
    for i, g, ip, ip2 in hits[: cfg.show]:
        lp = fractional_cover_lp(g).value
        print(f"draw {i}: {g.nx}x{g.ny}, {g.n_edges} edges, IP={ip}, IP(G^2)={ip2}, LP={lp}")
        for x in range(g.nx):
            print(f"    x{x} -> {g.neighbors(x)}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--draws", type=int, default=Config.draws)
    ap.add_argument("--max-side", type=int, default=Config.max_side)
    a = ap.parse_args()
    main(Config(a.seed, a.draws, a.max_side))
