from math import comb

import networkx as nx
import pytest

from oujordan.dag import (
    VertexNotFound,
    build_dag,
    distance,
    export_dot,
    node_id,
    reachable,
    remark_distance_report,
    symmetry_check,
)
from oujordan.hermite import HermitePoly
from oujordan.jordan3d import height
from oujordan.ou_operator import OUContext, apply_projected

# reference adjacency for n=3 and n=4
FIGURE_N3 = "300-210 210-120 210-201 120-030 120-111 201-111 030-021 111-021 111-102 021-012 102-012 012-003"
FIGURE_N4 = (
    "400-310 310-220 310-301 220-130 220-211 301-211 130-040 130-121 211-121 211-202 "
    "040-031 121-031 121-112 202-112 031-022 112-022 112-103 022-013 103-013 013-004"
)


def figure_edges(text):
    return {tuple(e.split("-")) for e in text.split()}


def dag_edges(n):
    return {(node_id(a, n), node_id(b, n)) for a, b, _ in build_dag(n).edges}


@pytest.mark.parametrize("n,text", [(3, FIGURE_N3), (4, FIGURE_N4)])
def test_matches_reference_graphs(n, text):
    assert dag_edges(n) == figure_edges(text)
    assert len(build_dag(n).vertices) == {3: 10, 4: 15}[n]


def test_trivial():
    dag = build_dag(0)
    assert dag.vertices == ((0, 0, 0),) and dag.edges == ()
    assert export_dot(dag).count("->") == 0 and '"000"' in export_dot(dag)


@pytest.mark.parametrize("n", range(13))
def test_structure(n):
    dag = build_dag(n)
    assert len(dag.vertices) == comb(n + 2, 2)
    assert dag.vertices[0] == (n, 0, 0) and dag.vertices[-1] == (0, 0, n)
    assert all(height(b) == height(a) + 1 for a, b, _ in dag.edges)
    assert all(w == -(a[0] if b[0] == a[0] - 1 else a[1]) for a, b, w in dag.edges)
    assert symmetry_check(dag)
    assert len(dag.by_height().get(n, [])) == n // 2 + 1
    g = dag.graph()
    assert nx.is_directed_acyclic_graph(g)
    order = list(nx.topological_sort(g))
    assert len(order) == len(dag.vertices)


@pytest.mark.parametrize("n", range(9))
def test_weights_match_operator(n):
    dag, ctx = build_dag(n), OUContext(3, n)
    for v in dag.vertices:
        assert apply_projected(ctx.basis(v), n, ctx) == HermitePoly(3, ctx.rho, dict(dag.out_edges(v)))


def test_distance():
    n = 4
    dag = build_dag(n)
    assert distance(dag, (n, 0, 0), (0, 0, n)) == 2 * n
    assert distance(dag, (2, 1, 1), (2, 1, 1)) == 0
    assert distance(dag, (0, 0, n), (n, 0, 0)) is None
    assert distance(dag, (0, 4, 0), (1, 0, 3)) is None
    with pytest.raises(VertexNotFound):
        distance(dag, (1, 1, 1), (0, 0, 4))


@pytest.mark.parametrize("n", range(7))
def test_reachable_closed_form(n):
    dag = build_dag(n)
    g = dag.graph()
    for u in dag.vertices:
        for v in dag.vertices:
            assert reachable(u, v) == nx.has_path(g, u, v)


def test_dot_n1():
    text = export_dot(build_dag(1))
    for node in ("100", "010", "001"):
        assert f'"{node}" [label="{node}"];' in text
    assert text.count('[label="-1"]') == 2 and text.count("->") == 2
    assert "rankdir=LR" in text and text.endswith("}\n")


def test_dot_large_ids():
    assert node_id((10, 0, 0), 10) == "10_0_0"
    assert '"10_0_0"' in export_dot(build_dag(10))


def test_remark_report():
    two = remark_distance_report(2)[0]
    assert two["q"] == 5 and two["endpoint_one_plus_distance"] == 5
    four = remark_distance_report(4)[1]
    assert four["q"] == 5 and four["endpoint_one_plus_distance"] == 5
    three = remark_distance_report(3)[1]
    assert three["q"] == 3 and three["remark_height_gap"] == 4
    assert not three["remark_pair_in_graph"] and three["remark_one_plus_distance"] is None
    for n in range(1, 11):
        rows = remark_distance_report(n)
        assert all(row["endpoint_matches_q"] for row in rows)
        if n % 2 == 0:
            assert all(row["remark_matches_q_reversed"] for row in rows)
    with pytest.raises(ValueError):
        remark_distance_report(0)
