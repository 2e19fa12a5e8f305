"""Citation graph construction and network statistics.

Graphs are directed multigraphs: parallel edge records between the same
(citing, cited) pair collapse into a multiplicity.  Betweenness centrality is
computed with the dependency-accumulation algorithm over the simple digraph
(unweighted shortest paths, ordered pairs, endpoints excluded, unnormalized);
the approximate variant accumulates from a seeded uniform sample of pivot
sources and scales by n/k.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .highlight import VerbatimEdge


class DegenerateGraphError(ValueError):
    """Graph too small for the requested statistic."""


class GraphTooLargeError(ValueError):
    """Exact betweenness requested above the configured node limit."""


class TooFewBucketsError(ValueError):
    """Degree histogram has fewer than three usable buckets."""


@dataclass
class CitationGraph:
    nodes: list[int]  # sorted opinion ids
    multiplicity: dict[tuple[int, int], int]
    successors: dict[int, list[int]] = field(repr=False)

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def simple_edge_count(self) -> int:
        return len(self.multiplicity)

    @property
    def total_multiplicity(self) -> int:
        return sum(self.multiplicity.values())


@dataclass
class CentralityReport:
    values: dict[int, float]
    method: str  # "exact" or "approximate(k=..., seed=...)"


def build_graph(edges: list[VerbatimEdge]) -> CitationGraph:
    """Collapse edge records into a multigraph; self-loops are skipped."""
    multiplicity: dict[tuple[int, int], int] = {}
    nodes = set()
    for edge in edges:
        u, v = edge.citing_opinion_id, edge.cited_opinion_id
        if u == v:
            continue
        nodes.add(u)
        nodes.add(v)
        multiplicity[(u, v)] = multiplicity.get((u, v), 0) + 1
    successors: dict[int, list[int]] = {n: [] for n in nodes}
    for u, v in sorted(multiplicity):
        successors[u].append(v)
    return CitationGraph(sorted(nodes), multiplicity, successors)


def find_cycles(g: CitationGraph) -> tuple[int, int]:
    """(number of non-trivial strongly connected components, nodes in them).

    A citation graph over dated documents should be acyclic; cycles are
    reported, not rejected.
    """
    # Iterative Tarjan SCC.
    index_of: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    counter = 0
    scc_count = 0
    nodes_in_cycles = 0

    for root in g.nodes:
        if root in index_of:
            continue
        work = [(root, iter(g.successors[root]))]
        index_of[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, successors = work[-1]
            advanced = False
            for w in successors:
                if w not in index_of:
                    index_of[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(g.successors[w])))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index_of[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index_of[v]:
                size = 0
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    size += 1
                    if w == v:
                        break
                if size > 1:
                    scc_count += 1
                    nodes_in_cycles += size
    return scc_count, nodes_in_cycles


def degree_histogram(g: CitationGraph, direction: str) -> dict[int, int]:
    """Map degree -> node count; multiplicities count toward the degree."""
    if direction not in ("in", "out"):
        raise ValueError("direction must be 'in' or 'out'")
    degrees = {n: 0 for n in g.nodes}
    for (u, v), mult in g.multiplicity.items():
        key = v if direction == "in" else u
        degrees[key] += mult
    hist: dict[int, int] = {}
    for d in degrees.values():
        hist[d] = hist.get(d, 0) + 1
    return hist


def node_degrees(g: CitationGraph, direction: str) -> dict[int, int]:
    if direction not in ("in", "out"):
        raise ValueError("direction must be 'in' or 'out'")
    degrees = {n: 0 for n in g.nodes}
    for (u, v), mult in g.multiplicity.items():
        key = v if direction == "in" else u
        degrees[key] += mult
    return degrees


def density(g: CitationGraph) -> float:
    """Distinct-edge count over n*(n-1)."""
    n = g.n_nodes
    if n < 2:
        raise DegenerateGraphError("density needs at least 2 nodes")
    return g.simple_edge_count / (n * (n - 1))


def _accumulate_from_source(g: CitationGraph, s: int, centrality: dict[int, float]):
    """One single-source dependency accumulation (BFS shortest paths)."""
    sigma = {n: 0 for n in g.nodes}
    dist = {}
    preds: dict[int, list[int]] = {n: [] for n in g.nodes}
    sigma[s] = 1
    dist[s] = 0
    order = []
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in g.successors[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)
    delta = {n: 0.0 for n in order}
    for w in reversed(order):
        for v in preds[w]:
            delta[v] += sigma[v] / sigma[w] * (1 + delta[w])
        if w != s:
            centrality[w] += delta[w]


def betweenness_exact(g: CitationGraph, node_limit: int = 5000) -> CentralityReport:
    if g.n_nodes > node_limit:
        raise GraphTooLargeError(
            f"{g.n_nodes} nodes exceed exact-mode limit {node_limit}"
        )
    centrality = {n: 0.0 for n in g.nodes}
    for s in g.nodes:
        _accumulate_from_source(g, s, centrality)
    return CentralityReport(centrality, "exact")


def betweenness_approx(g: CitationGraph, k: int, seed: int = 0) -> CentralityReport:
    """Pivot-sampling approximation: k uniform sources, scaled by n/k."""
    n = g.n_nodes
    if not 1 <= k <= n:
        raise ValueError("pivot count must be in [1, n]")
    rng = random.Random(seed)
    # Sorted so accumulation order (and thus float rounding) is reproducible
    # and k = n coincides bitwise with the exact computation.
    pivots = sorted(rng.sample(g.nodes, k))
    centrality = {node: 0.0 for node in g.nodes}
    for s in pivots:
        _accumulate_from_source(g, s, centrality)
    scale = n / k
    centrality = {node: value * scale for node, value in centrality.items()}
    return CentralityReport(centrality, f"approximate(k={k}, seed={seed})")


def rank_correlation(
    ranking_a: dict[int, float], ranking_b: dict[int, float]
) -> tuple[float | None, float | None]:
    """Kendall tau-b and Spearman rho over two value maps with equal keys.

    Returns ``(None, None)`` when a correlation is undefined (constant input).
    """
    if set(ranking_a) != set(ranking_b):
        raise ValueError("rankings must cover the same key set")
    keys = sorted(ranking_a)
    if len(keys) < 2:
        raise ValueError("rank correlation needs at least 2 keys")
    a = np.array([ranking_a[k] for k in keys], dtype=float)
    b = np.array([ranking_b[k] for k in keys], dtype=float)
    if np.all(a == a[0]) or np.all(b == b[0]):
        return None, None
    tau = stats.kendalltau(a, b).statistic
    rho = stats.spearmanr(a, b).statistic
    tau = None if np.isnan(tau) else float(tau)
    rho = None if np.isnan(rho) else float(rho)
    return tau, rho


def powerlaw_slope(hist: dict[int, float]) -> float:
    """Least-squares slope of log(count) vs log(degree) over degrees >= 1."""
    points = [(d, c) for d, c in hist.items() if d >= 1 and c > 0]
    if len(points) < 3:
        raise TooFewBucketsError(f"{len(points)} usable buckets, need >= 3")
    x = np.log([d for d, _ in points])
    y = np.log([c for _, c in points])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def _quantiles(values: list[float]) -> dict[str, float]:
    arr = np.array(values, dtype=float)
    return {
        "min": float(arr.min()),
        "q25": float(np.quantile(arr, 0.25)),
        "median": float(np.quantile(arr, 0.5)),
        "q75": float(np.quantile(arr, 0.75)),
        "max": float(arr.max()),
    }


def graph_stats(
    g: CitationGraph,
    approx_pivots: int | None = None,
    seed: int = 0,
    exact_limit: int = 5000,
) -> dict:
    """Full statistics report for the stats command."""
    in_hist = degree_histogram(g, "in")
    out_hist = degree_histogram(g, "out")

    report: dict = {
        "nodes": g.n_nodes,
        "distinct_edges": g.simple_edge_count,
        "total_edge_records": g.total_multiplicity,
        "in_degree_histogram": {str(k): v for k, v in sorted(in_hist.items())},
        "out_degree_histogram": {str(k): v for k, v in sorted(out_hist.items())},
    }

    scc_count, cyc_nodes = find_cycles(g)
    report["cycle_count"] = scc_count
    report["nodes_in_cycles"] = cyc_nodes

    try:
        report["density"] = density(g)
    except DegenerateGraphError:
        report["density"] = None

    try:
        report["in_degree_powerlaw_slope"] = powerlaw_slope(in_hist)
    except TooFewBucketsError:
        report["in_degree_powerlaw_slope"] = None

    if g.n_nodes == 0:
        report["betweenness"] = None
        return report

    if approx_pivots is not None and approx_pivots < g.n_nodes:
        cent = betweenness_approx(g, approx_pivots, seed)
    else:
        cent = betweenness_exact(g, node_limit=max(exact_limit, g.n_nodes))
    values = list(cent.values.values())
    report["betweenness"] = {
        "method": cent.method,
        "summary": _quantiles(values),
    }

    if g.n_nodes >= 2:
        in_deg = {n: float(d) for n, d in node_degrees(g, "in").items()}
        out_deg = {n: float(d) for n, d in node_degrees(g, "out").items()}
        tau_in, rho_in = rank_correlation(cent.values, in_deg)
        tau_out, rho_out = rank_correlation(cent.values, out_deg)
        report["rank_correlation"] = {
            "centrality_vs_in_degree": {"kendall_tau": tau_in, "spearman_rho": rho_in},
            "centrality_vs_out_degree": {
                "kendall_tau": tau_out,
                "spearman_rho": rho_out,
            },
        }
    return report
