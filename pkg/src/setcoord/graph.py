"""Bipartite coordination graphs and their tensor products.

A coordination graph has the inputs of node one on the x side and the
actions of node two on the y side, with ``x ~ y`` iff ``y`` is a permissible
action for ``x``.  Adjacency is stored as one integer bitmask per x vertex
(bit ``j`` set iff x is adjacent to ``y_labels[j]``).
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import InfeasibleError, InputError, ResourceError

DEFAULT_CAP = 5000


def _bits(mask: int) -> list[int]:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return out


@dataclass(frozen=True)
class CoordinationGraph:
    x_labels: tuple
    y_labels: tuple
    adj: tuple  # one bitmask over y indices per x

    def __post_init__(self):
        object.__setattr__(self, "x_labels", tuple(self.x_labels))
        object.__setattr__(self, "y_labels", tuple(self.y_labels))
        object.__setattr__(self, "adj", tuple(int(a) for a in self.adj))
        if len(set(self.x_labels)) != len(self.x_labels):
            raise InputError("duplicate x labels")
        if len(set(self.y_labels)) != len(self.y_labels):
            raise InputError("duplicate y labels")
        if len(self.adj) != len(self.x_labels):
            raise InputError("adjacency length differs from number of x labels")
        full = (1 << len(self.y_labels)) - 1
        for x, mask in zip(self.x_labels, self.adj):
            if mask & ~full:
                raise InputError(f"x {x!r} adjacent to an undeclared y index")
            if mask == 0:
                raise InfeasibleError(f"x {x!r} has an empty action set")

    @property
    def nx(self) -> int:
        return len(self.x_labels)

    @property
    def ny(self) -> int:
        return len(self.y_labels)

    def neighbors(self, i: int) -> list[int]:
        """y indices adjacent to x index ``i``, ascending."""
        return _bits(self.adj[i])

    def y_neighbors(self, j: int) -> list[int]:
        """x indices adjacent to y index ``j``, ascending."""
        bit = 1 << j
        return [i for i, mask in enumerate(self.adj) if mask & bit]

    def x_degree(self, i: int) -> int:
        return bin(self.adj[i]).count("1")

    def y_degree(self, j: int) -> int:
        return len(self.y_neighbors(j))

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.nx) for j in self.neighbors(i)]

    @property
    def n_edges(self) -> int:
        return sum(bin(a).count("1") for a in self.adj)

    def action_sets(self) -> dict:
        return {x: [self.y_labels[j] for j in self.neighbors(i)] for i, x in enumerate(self.x_labels)}

    def restrict_x(self, keep: Iterable[int]) -> "CoordinationGraph":
        keep = sorted(set(keep))
        return CoordinationGraph(
            tuple(self.x_labels[i] for i in keep), self.y_labels, tuple(self.adj[i] for i in keep)
        )

    def to_json(self) -> dict:
        return {
            "x": [label_str(x) for x in self.x_labels],
            "y": [label_str(y) for y in self.y_labels],
            "actions": {
                label_str(x): [label_str(self.y_labels[j]) for j in self.neighbors(i)]
                for i, x in enumerate(self.x_labels)
            },
        }


def label_str(label) -> str:
    if isinstance(label, tuple):
        return "(" + ",".join(label_str(v) for v in label) + ")"
    return str(label)


def from_action_sets(
    x_labels: Sequence[Hashable],
    y_labels: Sequence[Hashable],
    actions: Mapping[Hashable, Iterable[Hashable]],
) -> CoordinationGraph:
    """Build the graph with an edge ``(x, y)`` iff ``y`` is in ``actions[x]``."""
    y_index = {y: j for j, y in enumerate(y_labels)}
    if len(y_index) != len(y_labels):
        raise InputError("duplicate y labels")
    unknown_x = set(actions) - set(x_labels)
    if unknown_x:
        raise InputError(f"actions given for undeclared x labels: {sorted(map(str, unknown_x))}")
    adj = []
    for x in x_labels:
        mask = 0
        for y in actions.get(x, ()):
            if y not in y_index:
                raise InputError(f"action {y!r} of x {x!r} is not a declared y label")
            mask |= 1 << y_index[y]
        if mask == 0:
            raise InfeasibleError(f"x {x!r} has an empty action set")
        adj.append(mask)
    return CoordinationGraph(tuple(x_labels), tuple(y_labels), tuple(adj))


def from_edges(x_labels, y_labels, edges: Iterable[tuple]) -> CoordinationGraph:
    actions: dict = {x: [] for x in x_labels}
    for x, y in edges:
        if x not in actions:
            raise InputError(f"edge endpoint {x!r} is not a declared x label")
        actions[x].append(y)
    return from_action_sets(x_labels, y_labels, actions)


def from_json(obj: Mapping) -> CoordinationGraph:
    """Parse ``{"x", "y", "edges"}`` or ``{"x", "y", "actions"}``."""
    if not isinstance(obj, Mapping) or "x" not in obj or "y" not in obj:
        raise InputError('graph JSON needs keys "x" and "y"')
    has_edges, has_actions = "edges" in obj, "actions" in obj
    if has_edges == has_actions:
        raise InputError('graph JSON needs exactly one of "edges" / "actions"')
    xs = [str(v) for v in obj["x"]]
    ys = [str(v) for v in obj["y"]]
    if has_edges:
        try:
            edges = [(str(x), str(y)) for x, y in obj["edges"]]
        except (TypeError, ValueError) as exc:
            raise InputError("edges must be [x, y] pairs") from exc
        return from_edges(xs, ys, edges)
    actions = obj["actions"]
    if not isinstance(actions, Mapping):
        raise InputError('"actions" must map x labels to lists of y labels')
    return from_action_sets(xs, ys, {str(k): [str(v) for v in vs] for k, vs in actions.items()})


def load(path) -> CoordinationGraph:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from exc
    return from_json(obj)


def tensor_product(g1: CoordinationGraph, g2: CoordinationGraph, cap: int = DEFAULT_CAP) -> CoordinationGraph:
    """Categorical product: ``(u1,u2) ~ (v1,v2)`` iff ``u1 ~ v1`` and ``u2 ~ v2``.

    Product vertices are ordered lexicographically by factor index and
    labelled by the pair of factor labels.
    """
    nx, ny = g1.nx * g2.nx, g1.ny * g2.ny
    if max(nx, ny) > cap:
        raise ResourceError(f"tensor product would have {max(nx, ny)} vertices on a side (cap {cap})")
    m2 = g2.ny
    # y index of (j1, j2) is j1*m2 + j2, so a g1 bit j1 expands to the g2 mask shifted by j1*m2
    adj = []
    for a1 in g1.adj:
        js = _bits(a1)
        for a2 in g2.adj:
            mask = 0
            for j1 in js:
                mask |= a2 << (j1 * m2)
            adj.append(mask)
    xs = tuple((u, v) for u in g1.x_labels for v in g2.x_labels)
    ys = tuple((u, v) for u in g1.y_labels for v in g2.y_labels)
    return CoordinationGraph(xs, ys, tuple(adj))


def tensor_power(g: CoordinationGraph, n: int, cap: int = DEFAULT_CAP) -> CoordinationGraph:
    if n < 1:
        raise InputError("tensor power needs n >= 1")
    if max(g.nx, g.ny) ** n > cap:
        raise ResourceError(f"{n}-fold tensor power exceeds the cap of {cap} vertices per side")
    out = g
    for _ in range(n - 1):
        out = tensor_product(out, g, cap)
    return out


def tensor_chain(graphs: Sequence[CoordinationGraph], cap: int = DEFAULT_CAP) -> CoordinationGraph:
    if not graphs:
        raise InputError("empty tensor chain")
    nx = ny = 1
    for g in graphs:
        nx, ny = nx * g.nx, ny * g.ny
    if max(nx, ny) > cap:
        raise ResourceError(f"tensor chain would have {max(nx, ny)} vertices on a side (cap {cap})")
    out = graphs[0]
    for g in graphs[1:]:
        out = tensor_product(out, g, cap)
    return out


# ---------------------------------------------------------------------------
# standard instances


def cycle_graph(n: int = 5) -> CoordinationGraph:
    """``A_i = {i, i+1 mod n}``; ``n = 5`` is the pentagon."""
    return from_action_sets(range(n), range(n), {i: [i, (i + 1) % n] for i in range(n)})


def pentagon() -> CoordinationGraph:
    return cycle_graph(5)


def identity_graph(n: int) -> CoordinationGraph:
    return from_action_sets(range(n), range(n), {i: [i] for i in range(n)})


def complete_graph(nx: int, ny: int = 1) -> CoordinationGraph:
    return from_action_sets(range(nx), range(ny), {i: list(range(ny)) for i in range(nx)})


def random_graph(rng: random.Random, nx: int, ny: int, p: float) -> CoordinationGraph:
    """Each edge present with probability ``p``; empty rows get one random edge."""
    adj = []
    for _ in range(nx):
        mask = 0
        for j in range(ny):
            if rng.random() < p:
                mask |= 1 << j
        if mask == 0:
            mask = 1 << rng.randrange(ny)
        adj.append(mask)
    return CoordinationGraph(tuple(range(nx)), tuple(range(ny)), tuple(adj))
