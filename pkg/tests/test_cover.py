import math
from fractions import Fraction

import pytest
from hypothesis import given, settings

import oracles
from setcoord.cover import (
    cover_bounds,
    asymptotic_capacity,
    disjoint_neighborhood_packing,
    fractional_cover_lp,
    min_cover_ip,
    n_letter_rate,
    one_shot_capacity,
)
from setcoord.errors import ResourceError
from setcoord.graph import complete_graph, identity_graph, pentagon, tensor_power, tensor_product
from test_graph import coordination_graphs


@pytest.mark.parametrize("g, ip, lp, packing", [
    (complete_graph(4), 1, 1, 1),
    (identity_graph(4), 4, 4, 4),
    (pentagon(), 3, Fraction(5, 2), 2),
])
def test_named_instances(g, ip, lp, packing):
    assert min_cover_ip(g).size == ip
    assert fractional_cover_lp(g).value == lp
    assert disjoint_neighborhood_packing(g).size == packing


def test_complete_cover_vertex():
    assert min_cover_ip(complete_graph(3)).cover == (0,)


def test_pentagon_weights():
    res = fractional_cover_lp(pentagon())
    assert set(res.weights.values()) == {Fraction(1, 2)}
    assert sum(res.dual_weights.values()) == Fraction(5, 2)


def test_identity_weights():
    assert set(fractional_cover_lp(identity_graph(3)).weights.values()) == {1}


def test_capacities():
    assert one_shot_capacity(identity_graph(4)).bits == 2.0
    assert one_shot_capacity(pentagon()).bits == pytest.approx(math.log2(3))
    assert one_shot_capacity(complete_graph(2)).bits == 0
    cap = asymptotic_capacity(pentagon())
    assert cap.exact == Fraction(5, 2) and cap.bits == pytest.approx(1.321928094887)
    assert asymptotic_capacity(complete_graph(3)).bits == 0


def test_n_letter():
    g = pentagon()
    assert n_letter_rate(g, 1).bits == one_shot_capacity(g).bits
    two = n_letter_rate(g, 2)
    assert 7 <= two.exact <= 9
    assert n_letter_rate(identity_graph(2), 3).bits == pytest.approx(1.0)


def test_pentagon_cube_bounds():
    # exact search on the 125x125 cube is out of reach; bounds must still bracket
    b = cover_bounds(tensor_power(pentagon(), 3), node_limit=2000)
    assert not b.exact
    assert b.lower == 16  # ceil((5/2)^3)
    assert b.lower <= b.upper <= 24  # IP(G) * IP(G (x) G)
    g = tensor_power(pentagon(), 3)
    chosen = {g.y_labels.index(y) for y in b.cover}
    assert all(set(g.neighbors(i)) & chosen for i in range(g.nx))


def test_cap():
    with pytest.raises(ResourceError):
        min_cover_ip(identity_graph(6), cap=5)
    with pytest.raises(ResourceError):
        min_cover_ip(tensor_product(pentagon(), pentagon()), node_limit=1)


@settings(max_examples=150)
@given(coordination_graphs(max_side=5))
def test_against_exhaustive_oracles(g):
    cov = min_cover_ip(g)
    assert cov.size == oracles.cover_ip(g)
    assert cov.lower_bound <= cov.size
    chosen = {g.y_labels.index(y) for y in cov.cover}
    assert all(set(g.neighbors(i)) & chosen for i in range(g.nx))
    pk = disjoint_neighborhood_packing(g)
    assert pk.size == oracles.packing_ip(g)
    idx = [g.x_labels.index(x) for x in pk.vertices]
    assert all(not (g.adj[a] & g.adj[b]) for a in idx for b in idx if a != b)
    lp = fractional_cover_lp(g).value
    assert pk.size <= lp <= cov.size


@settings(max_examples=40)
@given(coordination_graphs(max_side=3))
def test_lp_vertex_oracle(g):
    assert fractional_cover_lp(g).value == oracles.cover_lp_by_vertices(g)


@settings(max_examples=40)
@given(coordination_graphs(max_side=4), coordination_graphs(max_side=4))
def test_product_laws(g1, g2):
    a, b = tensor_product(g1, g2), tensor_product(g2, g1)
    assert min_cover_ip(a).size == min_cover_ip(b).size <= min_cover_ip(g1).size * min_cover_ip(g2).size
    assert fractional_cover_lp(a).value == fractional_cover_lp(b).value
    assert fractional_cover_lp(a).value == fractional_cover_lp(g1).value * fractional_cover_lp(g2).value
