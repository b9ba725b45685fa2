import itertools
import math
import random
from fractions import Fraction

import pytest

import oracles
from setcoord.cover import asymptotic_capacity, min_cover_ip, n_letter_rate, one_shot_capacity
from setcoord.errors import InfeasibleError, InputError
from setcoord.graph import pentagon, tensor_chain
from setcoord.sideinfo import (
    SideInfoProblem,
    asymptotic_capacity_side,
    class_graphs,
    conditional_graph,
    ip_of_sequence,
    n_letter_rate_side,
    one_shot_capacity_side,
)

PENT_ACTIONS = {i: [i, (i + 1) % 5] for i in range(5)}


def pentagon_problem(classes):
    x2 = {i: c for i, c in enumerate(classes)}
    return SideInfoProblem(tuple(range(5)), tuple(sorted(set(classes))), x2, tuple(range(5)), PENT_ACTIONS)


def test_single_class_reduces_to_unconditional():
    p = pentagon_problem("aaaaa")
    g = conditional_graph(p, "a")
    assert g.adj == pentagon().adj
    assert one_shot_capacity_side(p).exact == one_shot_capacity(pentagon()).exact
    assert asymptotic_capacity_side(p).exact == asymptotic_capacity(pentagon()).exact
    assert n_letter_rate_side(p, 2).exact == n_letter_rate(pentagon(), 2).exact


def test_split_pentagon():
    p = pentagon_problem("aaabb")
    ga, gb = conditional_graph(p, "a"), conditional_graph(p, "b")
    assert ga.x_labels == (0, 1, 2) and gb.x_labels == (3, 4)
    assert [list(ga.neighbors(i)) for i in range(3)] == [[0, 1], [1, 2], [2, 3]]
    assert [list(gb.neighbors(i)) for i in range(2)] == [[3, 4], [0, 4]]
    # x = 3 and x = 4 share y = 4
    assert one_shot_capacity_side(p).certificate == {"a": 2, "b": 1}


def test_unknown_class():
    with pytest.raises(InputError):
        conditional_graph(pentagon_problem("aaabb"), "c")


def test_empty_preimage_dropped_with_warning():
    with pytest.warns(UserWarning):
        p = SideInfoProblem((0,), ("a", "b"), {0: "a"}, (0,), {0: [0]})
    assert p.x2_labels == ("a",)


def test_construction_errors():
    with pytest.raises(InfeasibleError):
        SideInfoProblem((0,), ("a",), {0: "a"}, (0,), {0: []})
    with pytest.raises(InputError):
        SideInfoProblem((0,), ("a",), {0: "z"}, (0,), {0: [0]})
    with pytest.raises(InputError):
        SideInfoProblem((0,), ("a",), {0: "a"}, (0,), {0: [7]})
    with pytest.raises(InputError):
        SideInfoProblem.from_json({"x1": [0]})


def test_class_maxima():
    # class a is the pentagon (IP 3, LP 5/2); class b is a 2-matching (IP = LP = 2)
    actions = dict(PENT_ACTIONS)
    actions.update({5: [5], 6: [6]})
    x2 = {i: "a" for i in range(5)} | {5: "b", 6: "b"}
    p = SideInfoProblem(tuple(range(7)), ("a", "b"), x2, tuple(range(7)), actions)
    assert one_shot_capacity_side(p).bits == pytest.approx(math.log2(3))
    asym = asymptotic_capacity_side(p)
    assert asym.exact == Fraction(5, 2) and asym.certificate == {"a": Fraction(5, 2), "b": 2}
    two = n_letter_rate_side(p, 2)
    assert set(two.per_type) == {(2, 0), (1, 1), (0, 2)}
    assert two.per_type[(0, 2)] == 4 and two.per_type[(1, 1)] == 6
    assert two.per_type[(2, 0)] == min_cover_ip(conditional_graph(p, "a")).size ** 2 - 1


def test_all_singletons_zero():
    p = SideInfoProblem((0, 1), ("a", "b"), {0: "a", 1: "b"}, ("u", "v"), {0: ["u"], 1: ["v"]})
    assert one_shot_capacity_side(p).bits == 0
    assert asymptotic_capacity_side(p).bits == 0


def test_complete_classes_zero():
    p = SideInfoProblem((0, 1, 2), ("a", "b"), {0: "a", 1: "a", 2: "b"}, ("u",), {0: ["u"], 1: ["u"], 2: ["u"]})
    assert asymptotic_capacity_side(p).bits == 0


def test_n_equals_one():
    p = pentagon_problem("aabbb")
    assert n_letter_rate_side(p, 1).exact == one_shot_capacity_side(p).exact
    with pytest.raises(InputError):
        n_letter_rate_side(p, 0)


def random_problem(rng):
    k = rng.randint(1, 3)
    x1 = list(range(rng.randint(k, 2 * k + 1)))
    x2 = {a: f"c{a % k}" for a in x1}
    y2 = list(range(rng.randint(2, 3)))
    actions = {a: [y for y in y2 if rng.random() < 0.5] or [rng.choice(y2)] for a in x1}
    return SideInfoProblem(tuple(x1), tuple(f"c{i}" for i in range(k)), x2, tuple(y2), actions)


def test_letter_order_invariance_and_type_oracle():
    rng = random.Random(3)
    for _ in range(15):
        p = random_problem(rng)
        res = n_letter_rate_side(p, 2)
        # every ordered sequence (not just types) gives the per-type value
        for seq in itertools.product(p.x2_labels, repeat=2):
            counts = tuple(seq.count(c) for c in p.x2_labels)
            assert ip_of_sequence(p, seq) == res.per_type[counts]
        # brute-force cover on the product for the best type
        best_seq = [c for c, k in zip(p.x2_labels, res.best_type) for _ in range(k)]
        g = tensor_chain([class_graphs(p)[c] for c in best_seq])
        assert oracles.cover_ip(g) == res.exact


def test_json_round_trip():
    obj = {"x1": [0, 1, 2], "x2_of_x1": {"0": "a", "1": "a", "2": "b"}, "y2": ["u", "v"],
           "actions": {"0": ["u"], "1": ["v"], "2": ["u", "v"]}}
    p = SideInfoProblem.from_json(obj)
    assert p.x2_labels == ("a", "b")
    assert one_shot_capacity_side(p).certificate == {"a": 2, "b": 1}
