"""The weighted DAG of grade-n triples under the nilpotent grade-n operator.

Vertex ``(i, j, k)`` with ``i + j + k = n`` has two out-edges:
``(i-1, j+1, k)`` with weight ``-i`` and ``(i, j-1, k+1)`` with weight ``-j``.
Both raise the height ``j + 2k`` by one, so every path between two vertices
has the same length and distance is just a height difference.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil

import networkx as nx

from .hermite import MultiIndex, basis_of_grade
from .jordan3d import height

__all__ = [
    "BasisDag",
    "VertexNotFound",
    "build_dag",
    "distance",
    "reachable",
    "symmetry_check",
    "export_dot",
    "node_id",
    "remark_distance_report",
]


class VertexNotFound(KeyError):
    pass


@dataclass(frozen=True)
class BasisDag:
    n: int
    vertices: tuple[MultiIndex, ...]
    edges: tuple[tuple[MultiIndex, MultiIndex, int], ...]

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.vertices)
        g.add_weighted_edges_from(self.edges)
        return g

    def by_height(self) -> dict[int, list[MultiIndex]]:
        out: dict[int, list[MultiIndex]] = {}
        for v in self.vertices:
            out.setdefault(height(v), []).append(v)
        return out

    def out_edges(self, v: MultiIndex) -> list[tuple[MultiIndex, int]]:
        return [(b, w) for a, b, w in self.edges if a == v]


def build_dag(n: int) -> BasisDag:
    # listed by height, then decreasing lexicographic within a height
    vertices = sorted(basis_of_grade(3, n), key=lambda v: (height(v), tuple(-x for x in v)))
    edges = []
    for i, j, k in vertices:
        if i:
            edges.append(((i, j, k), (i - 1, j + 1, k), -i))
        if j:
            edges.append(((i, j, k), (i, j - 1, k + 1), -j))
    return BasisDag(n, tuple(vertices), tuple(edges))


def reachable(u: MultiIndex, v: MultiIndex) -> bool:
    """Closed form: moves only push mass from x to y and from y to z."""
    return v[0] <= u[0] and v[2] >= u[2]


def distance(dag: BasisDag, u: MultiIndex, v: MultiIndex) -> int | None:
    """Path length from u to v, or None when v is unreachable."""
    u, v = tuple(u), tuple(v)
    for w in (u, v):
        if w not in dag.vertices:
            raise VertexNotFound(w)
    if not nx.has_path(dag.graph(), u, v):
        return None
    return height(v) - height(u)


def symmetry_check(dag: BasisDag) -> bool:
    """(i, j, k) <-> (k, j, i) pairs vertices symmetrically about height n."""
    verts = set(dag.vertices)
    for i, j, k in dag.vertices:
        mirror = (k, j, i)
        if mirror not in verts or height((i, j, k)) + height(mirror) != 2 * dag.n:
            return False
    return True


def node_id(v: MultiIndex, n: int) -> str:
    return "".join(str(x) for x in v) if n <= 9 else "_".join(str(x) for x in v)


def export_dot(dag: BasisDag) -> str:
    """DOT digraph ranked by height, nodes labelled as concatenated indices."""
    lines = [f"digraph dag_n{dag.n} {{", "  rankdir=LR;", "  node [shape=circle];"]
    for v in dag.vertices:
        nid = node_id(v, dag.n)
        lines.append(f'  "{nid}" [label="{nid}"];')
    for h, verts in sorted(dag.by_height().items()):
        ids = " ".join(f'"{node_id(v, dag.n)}";' for v in verts)
        lines.append(f"  {{ rank=same; {ids} }}")
    for a, b, w in dag.edges:
        lines.append(f'  "{node_id(a, dag.n)}" -> "{node_id(b, dag.n)}" [label="{w}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def remark_distance_report(n: int) -> list[dict]:
    """Compare q_k with distances between two candidate vertex pairs.

    The "remark" pair is ``(ceil(n/2)+k, 0, ceil(n/2)-k) -> (ceil(n/2)-k, 0, ceil(n/2)+k)``;
    for odd n those triples do not sum to n. The "endpoint" pair is
    ``(n-k, 0, k) -> (k, 0, n-k)``, at heights 2k and 2(n-k).
    """
    if n < 1:
        raise ValueError("report needs n >= 1")
    dag = build_dag(n)
    verts = set(dag.vertices)
    half = ceil(n / 2)
    out = []
    for k in range(n // 2 + 1):
        u, v = (half + k, 0, half - k), (half - k, 0, half + k)
        in_graph = u in verts and v in verts
        remark_dist = distance(dag, u, v) if in_graph else None
        a, b = (n - k, 0, k), (k, 0, n - k)
        end_dist = distance(dag, a, b)
        q = 2 * n + 1 - 4 * k
        out.append(
            {
                "k": k,
                "q": q,
                "remark_pair": [list(u), list(v)],
                "remark_pair_in_graph": in_graph,
                "remark_height_gap": height(v) - height(u),
                "remark_one_plus_distance": None if remark_dist is None else 1 + remark_dist,
                "endpoint_pair": [list(a), list(b)],
                "endpoint_one_plus_distance": 1 + end_dist,
                "endpoint_matches_q": 1 + end_dist == q,
                "remark_matches_q": remark_dist is not None and 1 + remark_dist == q,
                "remark_matches_q_reversed": remark_dist is not None
                and 1 + remark_dist == 2 * n + 1 - 4 * (n // 2 - k),
            }
        )
    return out
