"""Two-node coordination when node two's input is a function of node one's.

Only supports matter, so a problem is a map ``x1 -> x2`` plus one action
set per ``x1``.  Each value of ``x2`` induces a class graph on its
preimage; capacities are maxima over classes, and the n-letter rate is a
maximum over x2 sequences, which by commutativity of the tensor product
only depends on the sequence's type.
"""

from __future__ import annotations

import itertools
import json
import warnings
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping

from .cover import Capacity, fractional_cover_lp, log2_fraction, min_cover_ip
from .errors import InfeasibleError, InputError
from .graph import DEFAULT_CAP, CoordinationGraph, from_action_sets, tensor_chain


@dataclass(frozen=True)
class SideInfoProblem:
    x1_labels: tuple
    x2_labels: tuple
    x2_of_x1: Mapping
    y2_labels: tuple
    actions: Mapping

    def __post_init__(self):
        x1 = tuple(self.x1_labels)
        if len(set(x1)) != len(x1):
            raise InputError("duplicate x1 labels")
        declared = tuple(self.x2_labels)
        y2 = set(self.y2_labels)
        for a in x1:
            if a not in self.x2_of_x1:
                raise InputError(f"x1 {a!r} has no x2 value")
            if self.x2_of_x1[a] not in declared:
                raise InputError(f"x1 {a!r} maps to undeclared x2 {self.x2_of_x1[a]!r}")
            acts = self.actions.get(a, ())
            if not acts:
                raise InfeasibleError(f"x1 {a!r} has an empty action set")
            bad = [y for y in acts if y not in y2]
            if bad:
                raise InputError(f"x1 {a!r} has undeclared actions {bad}")
        used = {self.x2_of_x1[a] for a in x1}
        kept = tuple(v for v in declared if v in used)
        if len(kept) < len(declared):
            dropped = [v for v in declared if v not in used]
            warnings.warn(f"dropping x2 values with no preimage: {dropped}", stacklevel=3)
        object.__setattr__(self, "x1_labels", x1)
        object.__setattr__(self, "x2_labels", kept)
        object.__setattr__(self, "y2_labels", tuple(self.y2_labels))
        object.__setattr__(self, "x2_of_x1", dict(self.x2_of_x1))
        object.__setattr__(self, "actions", {k: tuple(v) for k, v in self.actions.items()})

    @classmethod
    def from_json(cls, obj) -> "SideInfoProblem":
        try:
            return cls(
                tuple(str(v) for v in obj["x1"]),
                tuple(str(v) for v in obj.get("x2", sorted({str(v) for v in obj["x2_of_x1"].values()}))),
                {str(k): str(v) for k, v in obj["x2_of_x1"].items()},
                tuple(str(v) for v in obj["y2"]),
                {str(k): [str(v) for v in vs] for k, vs in obj["actions"].items()},
            )
        except (KeyError, TypeError, AttributeError) as exc:
            raise InputError('side-information JSON needs "x1", "x2_of_x1", "y2", "actions"') from exc

    @classmethod
    def load(cls, path) -> "SideInfoProblem":
        with open(path) as fh:
            try:
                return cls.from_json(json.load(fh))
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}: invalid JSON ({exc})") from exc


def conditional_graph(p: SideInfoProblem, x2: Hashable) -> CoordinationGraph:
    """Coordination graph on ``{x1 : x2(x1) = x2}`` against all of ``y2``."""
    if x2 not in p.x2_labels:
        raise InputError(f"x2 value {x2!r} is undeclared or has no preimage")
    xs = [a for a in p.x1_labels if p.x2_of_x1[a] == x2]
    return from_action_sets(xs, p.y2_labels, {a: p.actions[a] for a in xs})


def class_graphs(p: SideInfoProblem) -> dict:
    return {v: conditional_graph(p, v) for v in p.x2_labels}


def one_shot_capacity_side(p: SideInfoProblem, cap: int = DEFAULT_CAP) -> Capacity:
    sizes = {v: min_cover_ip(g, cap).size for v, g in class_graphs(p).items()}
    worst = max(sizes.values())
    return Capacity(log2_fraction(worst), Fraction(worst), 1, sizes)


def asymptotic_capacity_side(p: SideInfoProblem) -> Capacity:
    """``max over x2 of log2 LP(G_x2)``; the certificate maps each class to its exact LP."""
    lps = {v: fractional_cover_lp(g).value for v, g in class_graphs(p).items()}
    worst = max(lps.values())
    return Capacity(log2_fraction(worst), worst, 1, lps)


@dataclass(frozen=True)
class NLetterSide:
    bits: float
    exact: Fraction  # IP of the maximizing product
    n: int
    best_type: tuple  # letter counts per x2 class, in x2 label order
    per_type: dict = field(default_factory=dict)  # type -> IP


def type_product(p: SideInfoProblem, counts, graphs=None, cap: int = DEFAULT_CAP) -> CoordinationGraph:
    graphs = graphs or class_graphs(p)
    seq = [v for v, k in zip(p.x2_labels, counts) for _ in range(k)]
    return tensor_chain([graphs[v] for v in seq], cap)


def n_letter_rate_side(p: SideInfoProblem, n: int, cap: int = DEFAULT_CAP) -> NLetterSide:
    """``(1/n) max over x2^n of log2 IP(G_x21 (x) ... (x) G_x2n)``, one product per type."""
    if n < 1:
        raise InputError("n must be >= 1")
    graphs = class_graphs(p)
    per_type = {}
    for combo in itertools.combinations_with_replacement(range(len(p.x2_labels)), n):
        c = Counter(combo)
        counts = tuple(c.get(k, 0) for k in range(len(p.x2_labels)))
        per_type[counts] = min_cover_ip(type_product(p, counts, graphs, cap), cap).size
    best = max(per_type, key=lambda t: (per_type[t], t))
    ip = per_type[best]
    return NLetterSide(log2_fraction(ip) / n, Fraction(ip), n, best, per_type)


def ip_of_sequence(p: SideInfoProblem, seq, cap: int = DEFAULT_CAP) -> int:
    """IP of the product in the given letter order (for permutation checks)."""
    graphs = class_graphs(p)
    return min_cover_ip(tensor_chain([graphs[v] for v in seq], cap), cap).size
