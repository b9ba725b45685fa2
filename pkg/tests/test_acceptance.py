"""Acceptance criteria, one test group per criterion (see conftest for the summary lines)."""

import io
import json
import math
import random
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from scipy.optimize import linprog

import oracles
from setcoord import cli
from setcoord.cover import fractional_cover_lp, min_cover_ip, n_letter_rate
from setcoord.errors import UncoordinatableError
from setcoord.exactlp import LE, MAXIMIZE, LinearProgramSpec, solve_lp
from setcoord.fflinalg import PrimeField, Subspace, random_matrix
from setcoord.graph import CoordinationGraph, identity_graph, pentagon, random_graph, tensor_product
from setcoord.infotheory import (
    INF,
    Channel,
    hide_and_seek_value,
    maxmin_characterization,
    mi_order_infinity,
    mi_order_zero,
    renyi_mutual_information,
)
from setcoord.lincoord import (
    BcProblem,
    LinearCoordProblem,
    MacProblem,
    bc_region_check,
    brute_force_linear_capacity,
    induced_graph,
    linear_capacity,
    mac_region_check,
    nonlinear_equals_linear_check,
    stacked_problem,
    synthesize_code,
    verify_code,
)
from setcoord.sideinfo import (
    SideInfoProblem,
    asymptotic_capacity_side,
    n_letter_rate_side,
    one_shot_capacity_side,
)
from setcoord.verify import random_linear_problem

FIXTURES = Path(__file__).parent / "fixtures"


def graphs(seed, count, max_side):
    rng = random.Random(seed)
    return [random_graph(rng, rng.randint(1, max_side), rng.randint(1, max_side), rng.uniform(0.3, 0.8))
            for _ in range(count)]


def pairs(seed, count, max_side):
    gs = graphs(seed, 2 * count, max_side)
    return list(zip(gs[::2], gs[1::2]))


# ---------------------------------------------------------------------------
# 1


def packing_lp_spec(g):
    rows = []
    for j in range(g.ny):
        rows.append(([int(g.has_edge(i, j)) for i in range(g.nx)], LE, 1))
    return LinearProgramSpec(MAXIMIZE, (1,) * g.nx, tuple(rows))


@pytest.mark.criterion(1)
def test_lp_duality_exact():
    for g in graphs(1, 200, 8):
        res = fractional_cover_lp(g)
        w = [res.weights[y] for y in g.y_labels]
        z = [res.dual_weights[x] for x in g.x_labels]
        # both certificates are exactly feasible and have equal value
        assert all(v >= 0 for v in w) and all(v >= 0 for v in z)
        assert all(sum(w[j] for j in g.neighbors(i)) >= 1 for i in range(g.nx))
        assert all(sum(z[i] for i in g.y_neighbors(j)) <= 1 for j in range(g.ny))
        assert sum(w) == sum(z) == res.value
        # the packing LP solved on its own reaches the same value
        assert solve_lp(packing_lp_spec(g)).value == res.value
        # float oracle
        A = np.array([[1.0 if g.has_edge(i, j) else 0.0 for j in range(g.ny)] for i in range(g.nx)])
        ref = linprog(np.ones(g.ny), A_ub=-A, b_ub=-np.ones(g.nx), bounds=(0, None), method="highs")
        assert abs(ref.fun - float(res.value)) < 1e-9


@pytest.mark.criterion(1)
def test_lp_matches_vertex_enumeration():
    for g in graphs(11, 60, 4):
        assert fractional_cover_lp(g).value == oracles.cover_lp_by_vertices(g)


# ---------------------------------------------------------------------------
# 2, 3


PAIRS = pairs(2, 50, 5)


@pytest.mark.criterion(2)
def test_lp_multiplicative():
    for g1, g2 in PAIRS:
        lp = fractional_cover_lp(tensor_product(g1, g2)).value
        assert lp == fractional_cover_lp(g1).value * fractional_cover_lp(g2).value


@pytest.mark.criterion(3)
def test_ip_submultiplicative():
    for g1, g2 in PAIRS:
        ip1, ip2 = min_cover_ip(g1).size, min_cover_ip(g2).size
        assert (ip1, ip2) == (oracles.cover_ip(g1), oracles.cover_ip(g2))
        prod = tensor_product(g1, g2)
        ipp = min_cover_ip(prod).size
        assert ipp <= ip1 * ip2
        assert ipp >= fractional_cover_lp(prod).value


@pytest.mark.criterion(3)
def test_pentagon_sandwich():
    g = pentagon()
    assert min_cover_ip(g).size == 3
    assert fractional_cover_lp(g).value == Fraction(5, 2)
    two = tensor_product(g, g)
    ip2 = min_cover_ip(two)
    assert 7 <= ip2.size <= 9
    rate = n_letter_rate(g, 2)
    assert math.log2(2.5) <= rate.bits <= math.log2(3)
    # oracle: the returned cover is a cover and nothing smaller is
    chosen = {two.y_labels.index(y) for y in ip2.cover}
    assert all(set(two.neighbors(i)) & chosen for i in range(two.nx))
    assert oracles.no_cover_of_size(two, ip2.size - 1)


# ---------------------------------------------------------------------------
# 4


@pytest.mark.criterion(4)
def test_strict_gap_search():
    rng = random.Random(4)
    found = None
    for _ in range(500):
        g = random_graph(rng, rng.randint(2, 5), rng.randint(2, 5), rng.uniform(0.3, 0.8))
        ip = min_cover_ip(g).size
        ip2 = min_cover_ip(tensor_product(g, g)).size
        if ip2 < ip * ip:
            found = (g, ip, ip2)
            break
    assert found is not None, "no strict-gap graph among 500 random draws"
    g, ip, ip2 = found
    assert oracles.cover_ip(g) == ip
    assert oracles.no_cover_of_size(tensor_product(g, g), ip * ip - 1) is False


@pytest.mark.criterion(4)
def test_pentagon_has_strict_gap():
    g = pentagon()
    assert min_cover_ip(tensor_product(g, g)).size <= 8 < min_cover_ip(g).size ** 2


# ---------------------------------------------------------------------------
# 5, 6


SMALL = graphs(5, 20, 5)


@pytest.mark.criterion(5)
def test_renyi_orders_match_lp():
    for g in SMALL:
        lp = fractional_cover_lp(g).value
        m0, minf = maxmin_characterization(g, 0), maxmin_characterization(g, INF)
        assert m0.exact == minf.exact == lp
        assert m0.bits == minf.bits == math.log2(lp.numerator) - math.log2(lp.denominator)
        m1 = maxmin_characterization(g, 1)
        assert abs(m1.bits - m0.bits) <= 1e-6


@pytest.mark.criterion(6)
def test_game_value():
    for g in SMALL + [pentagon(), identity_graph(3), identity_graph(1)]:
        gv = hide_and_seek_value(g)
        assert gv.value * fractional_cover_lp(g).value == 1
        assert gv.value >= Fraction(1, min_cover_ip(g).size)


# ---------------------------------------------------------------------------
# 7


def random_pair(rng):
    nx, ny = rng.randint(1, 4), rng.randint(1, 4)
    q = np.array([rng.random() for _ in range(nx)])
    if nx > 1 and rng.random() < 0.3:
        q[0] = 0.0
    q /= q.sum()
    rows = np.array([[rng.random() ** 2 if rng.random() < 0.7 else 0.0 for _ in range(ny)] for _ in range(nx)])
    for r in rows:
        if r.sum() == 0:
            r[rng.randrange(ny)] = 1.0
    rows /= rows.sum(axis=1, keepdims=True)
    return q, Channel.of(rows)


@pytest.mark.criterion(7)
def test_renyi_monotone_and_limits():
    rng = random.Random(7)
    alphas = (0, 0.25, 0.5, 1, 2, 8, INF)
    for _ in range(100):
        q, ch = random_pair(rng)
        vals = [renyi_mutual_information(q, ch, a) for a in alphas]
        assert all(b >= a - 1e-9 for a, b in zip(vals, vals[1:])), vals
        assert abs(renyi_mutual_information(q, ch, 1e-6) - mi_order_zero(q, ch)) <= 1e-4
        assert abs(renyi_mutual_information(q, ch, 1e6) - mi_order_infinity(q, ch)) <= 1e-4


# ---------------------------------------------------------------------------
# 8


def random_side_problem(rng):
    k = rng.randint(1, 3)
    x1 = [f"a{i}" for i in range(rng.randint(k, 3 * k))]
    classes = [f"c{i}" for i in range(k)]
    x2_of_x1 = {a: classes[i % k] for i, a in enumerate(x1)}
    y2 = [f"y{j}" for j in range(rng.randint(2, 4))]
    actions = {a: [y for y in y2 if rng.random() < 0.5] or [rng.choice(y2)] for a in x1}
    return SideInfoProblem(tuple(x1), tuple(classes), x2_of_x1, tuple(y2), actions)


@pytest.mark.criterion(8)
def test_side_information():
    rng = random.Random(8)
    for _ in range(20):
        p = random_side_problem(rng)
        asym = asymptotic_capacity_side(p)
        # oracle: per-class graphs built here, LPs by vertex enumeration
        per_class = []
        for c in p.x2_labels:
            xs = [a for a in p.x1_labels if p.x2_of_x1[a] == c]
            adj = tuple(sum(1 << p.y2_labels.index(y) for y in p.actions[a]) for a in xs)
            per_class.append(oracles.cover_lp_by_vertices(CoordinationGraph(tuple(xs), p.y2_labels, adj)))
        assert asym.exact == max(per_class)
        one = one_shot_capacity_side(p)
        two = n_letter_rate_side(p, 2)
        assert asym.exact ** 2 <= two.exact <= one.exact ** 2
        assert asym.bits - 1e-12 <= two.bits <= one.bits + 1e-12


# ---------------------------------------------------------------------------
# 9, 10


LINEAR = [random_linear_problem(random.Random(900 + k), 2) for k in range(200)] + \
         [random_linear_problem(random.Random(950 + k), 3) for k in range(50)]


@pytest.mark.criterion(9)
def test_linear_capacity_oracle_equivalence():
    for prob in LINEAR:
        cap = linear_capacity(prob)
        assert cap.t == brute_force_linear_capacity(prob)
        assert cap.t == oracles.linear_capacity_by_sets(prob)
        code = synthesize_code(prob)
        assert code.t == cap.t
        assert verify_code(prob, code)


@pytest.mark.criterion(10)
def test_block_coding_invariance():
    for prob in LINEAR[:25] + LINEAR[200:225]:
        t = linear_capacity(prob).t
        two = stacked_problem(prob, 2)
        assert linear_capacity(two).t == 2 * t
        assert verify_code(two, synthesize_code(two))


# ---------------------------------------------------------------------------
# 11


def chain_instance(rng):
    f = PrimeField(2)
    while True:
        c, r1 = rng.randint(1, 4), rng.randint(1, 4)
        s1, s2 = rng.randint(0, 3), rng.randint(1, 4)
        K1 = random_matrix(rng, f, c, r1)
        K4 = K1 @ random_matrix(rng, f, r1, s2)  # Im K4 inside Im K1
        K3 = random_matrix(rng, f, c, s1)
        try:
            return LinearCoordProblem(f, K1, K3, K4, Subspace.full(f, r1))
        except UncoordinatableError:
            continue


@pytest.mark.criterion(11)
def test_linear_equals_nonlinear_chain():
    rng = random.Random(11)
    for _ in range(50):
        prob = chain_instance(rng)
        rep = nonlinear_equals_linear_check(prob)
        assert rep.passed, rep
        assert 2 ** rep.t == rep.ip == rep.lp == rep.ip_dagger
        # oracle graph from explicit y1 search, solved exhaustively
        g = induced_graph(prob)
        assert [list(g.neighbors(i)) for i in range(g.nx)] == oracles.induced_edges(prob)
        assert oracles.cover_ip(g) == rep.ip
        assert oracles.packing_ip(g) == rep.ip_dagger
        # witnesses: all of U, in Im K1, differences outside Im K3
        assert len(rep.witnesses) == 2 ** rep.t
        im1 = oracles.image_set(prob.K1, 2)
        im3 = oracles.image_set(prob.K3, 2)
        assert all(w in im1 for w in rep.witnesses)
        for a in rep.witnesses:
            for b in rep.witnesses:
                if a != b:
                    assert tuple((x - y) % 2 for x, y in zip(a, b)) not in im3


# ---------------------------------------------------------------------------
# 12


def random_mac(rng):
    p = rng.choice((2, 3))
    f = PrimeField(p)
    while True:
        c = rng.randint(1, 3)
        dims = [rng.randint(1, 3) for _ in range(2)] + [rng.randint(0, 3) for _ in range(2)] + [rng.randint(1, 3)]
        K1, K2, K4, K5, K6 = (random_matrix(rng, f, c, d) for d in dims)
        m = MacProblem(f, K1, K2, K4, K5, K6, Subspace.full(f, K1.cols), Subspace.full(f, K2.cols))
        try:
            m.components()
        except UncoordinatableError:
            continue
        return m


def random_bc(rng):
    f = PrimeField(2)
    while True:
        c, r1 = rng.randint(1, 3), rng.randint(1, 3)
        K1 = random_matrix(rng, f, c, r1)
        K4, K5, K6 = (random_matrix(rng, f, c, rng.randint(0, d)) for d in (1, 2, 2))
        try:
            return BcProblem(f, K1, K4, K5, K6, Subspace.full(f, r1))
        except UncoordinatableError:
            continue


@pytest.mark.criterion(12)
def test_mac_separability():
    rng = random.Random(12)
    for _ in range(50):
        m = random_mac(rng)
        a = LinearCoordProblem(m.field, m.K1, m.K4, m.K6, m.support1)
        b = LinearCoordProblem(m.field, m.K2, m.K5, m.K6, m.support2)
        f1, f2 = brute_force_linear_capacity(a), brute_force_linear_capacity(b)
        for t1 in range(4):
            for t2 in range(4):
                assert mac_region_check(m, t1, t2) == (t1 >= f1 and t2 >= f2)


@pytest.mark.criterion(12)
def test_bc_enumeration_agreement_and_monotone():
    rng = random.Random(120)
    for _ in range(30):
        bc = random_bc(rng)
        table = {(t1, t2): bc_region_check(bc, t1, t2) for t1 in range(4) for t2 in range(4)}
        for (t1, t2), ok in table.items():
            assert ok == oracles.bc_feasible_by_sets(bc, t1, t2)
            if ok and t1 < 3:
                assert table[t1 + 1, t2]
            if ok and t2 < 3:
                assert table[t1, t2 + 1]


# ---------------------------------------------------------------------------
# 13


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "setcoord", *args], capture_output=True)


@pytest.mark.criterion(13)
def test_cli_deterministic():
    fixture = str(FIXTURES / "pentagon.json")
    for cmd in (["capacity", "--mode", "asymptotic"], ["capacity", "--mode", "oneshot"], ["game"],
                ["renyi", "--alpha", "1"]):
        a = run_cli(*cmd, "--input", fixture)
        b = run_cli(*cmd, "--input", fixture)
        assert a.returncode == b.returncode == 0
        assert a.stdout == b.stdout
    report = json.loads(run_cli("capacity", "--mode", "asymptotic", "--input", fixture).stdout)
    assert report["results"]["LP"] == "5/2"


@pytest.mark.criterion(13)
def test_cli_exit_codes(tmp_path, monkeypatch):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)

    empty_action = write("empty.json", {"x": [0, 1], "y": [0], "actions": {"0": [0], "1": []}})
    uncoord = write("uncoord.json", {"prime": 2, "K1": [[1, 0], [0, 1]], "K3": [[1], [0]], "K4": [[1], [0]]})
    garbage = write("garbage.json", "{not json")
    pent = str(FIXTURES / "pentagon.json")
    quiet = io.StringIO()
    cases = [
        (["capacity", "--mode", "oneshot", "--input", empty_action], 1),
        (["linear", "--input", uncoord], 1),
        (["capacity", "--mode", "oneshot", "--input", garbage], 2),
        (["capacity", "--mode", "oneshot", "--input", str(tmp_path / "missing.json")], 2),
        (["game"], 2),
        (["capacity", "--mode", "nletter", "--n", "6", "--input", pent], 3),
        (["capacity", "--mode", "nletter", "--n", "2", "--cap-graph", "10", "--input", pent], 3),
    ]
    for argv, code in cases:
        assert cli.run(argv, stdout=quiet, stderr=quiet) == code, argv
    # a failing self-check maps to 4
    monkeypatch.setattr(cli, "verify_code", lambda p, c: False)
    gf2 = str(FIXTURES / "gf2_t1.json")
    assert cli.run(["linear", "--synthesize", "--input", gf2], stdout=quiet, stderr=quiet) == 4
