"""Signed regulation graph and bounded pathway search.

Full path construction over a regulation network is intractable, so the
browser bounds node-length at 5 and additionally estimates result volume
with an exact dynamic-programming walk count, shrinking the search depth
while the estimate exceeds a budget. Walks over-count simple paths, so the
estimate is a cheap, deterministic upper bound; direct regulators
(depth 2) are always searched regardless of budget.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .errors import ConfigError, QueryError
from .indexing import Index
from .ingest import EvidenceDoc
from .taxonomy import Polarity, compose_polarity

MAX_PATHWAY_NODES = 5
DEFAULT_WALK_BUDGET = 10_000
DEFAULT_RELATION_FILTER = frozenset({"Activation"})


@dataclass(frozen=True)
class GraphEdge:
    src: str
    dst: str
    relation: str
    polarity: Polarity
    record_ids: tuple[str, ...]


@dataclass(frozen=True)
class RegulationGraph:
    nodes: tuple[str, ...]
    node_set: frozenset[str]
    in_adjacency: dict[str, tuple[GraphEdge, ...]]

    def in_edges(self, node: str) -> tuple[GraphEdge, ...]:
        return self.in_adjacency.get(node, ())

    def edge_count(self) -> int:
        return sum(len(edges) for edges in self.in_adjacency.values())

    def has_node(self, node: str) -> bool:
        return node in self.node_set


@dataclass(frozen=True)
class Pathway:
    """Simple directed chain (v_k, ..., v_1) ending at the target v_1."""

    nodes: tuple[str, ...]
    edges: tuple[GraphEdge, ...]
    net_polarity: Polarity

    @property
    def length(self) -> int:
        return len(self.nodes)


def build_graph(
    index: Index, relation_filter: frozenset[str] | set[str] = DEFAULT_RELATION_FILTER
) -> RegulationGraph:
    """Directed multigraph over records whose relation type is in the filter.

    Parallel records with the same (subject, object, relation) merge into a
    single edge carrying all their record ids.
    """
    wanted = {name.strip().casefold() for name in relation_filter}
    if not wanted:
        raise ConfigError("relation filter must name at least one relation type")
    merged: dict[tuple[str, str, str], set[str]] = {}
    labels: dict[tuple[str, str, str], tuple[str, Polarity]] = {}
    for rec in index.records():
        rel_key = rec.relation.casefold()
        if rel_key not in wanted:
            continue
        key = (rec.subject, rec.object, rel_key)
        merged.setdefault(key, set()).add(rec.id)
        if key not in labels:
            rt = index.taxonomy.lookup(rec.relation)
            display = rt.name if index.taxonomy.known(rec.relation) else rec.relation
            labels[key] = (display, rt.polarity)

    in_adjacency: dict[str, list[GraphEdge]] = {}
    nodes: set[str] = set()
    for (src, dst, rel_key), record_ids in merged.items():
        display, polarity = labels[(src, dst, rel_key)]
        edge = GraphEdge(src, dst, display, polarity, tuple(sorted(record_ids)))
        in_adjacency.setdefault(dst, []).append(edge)
        nodes.update((src, dst))
    frozen = {
        dst: tuple(sorted(edges, key=lambda e: (e.src, e.relation)))
        for dst, edges in in_adjacency.items()
    }
    ordered = tuple(sorted(nodes))
    return RegulationGraph(nodes=ordered, node_set=frozenset(ordered), in_adjacency=frozen)


def _walk_totals(graph: RegulationGraph, target: str, max_depth: int) -> dict[int, int]:
    """Cumulative walk counts per depth in one DP sweep: totals[d] is the
    number of walks of node-length <= d ending at target."""
    totals: dict[int, int] = {}
    frontier = {target: 1} if graph.has_node(target) else {}
    running = 0
    for depth in range(2, max_depth + 1):
        step: dict[str, int] = {}
        for node, ways in frontier.items():
            for edge in graph.in_edges(node):
                step[edge.src] = step.get(edge.src, 0) + ways
        running += sum(step.values())
        totals[depth] = running
        frontier = step
        if not frontier:
            for rest in range(depth + 1, max_depth + 1):
                totals[rest] = running
            break
    return totals


def walk_count_estimate(graph: RegulationGraph, target: str, depth: int) -> int:
    """Exact count of directed walks of node-length <= depth ending at target.

    Repetition is allowed, so this upper-bounds the simple-path count.
    O(depth * |E|) by dynamic programming over in-edges.
    """
    if depth < 2:
        raise QueryError("walk estimate needs depth >= 2", field="depth")
    return _walk_totals(graph, target, depth).get(depth, 0)


def effective_depth(
    graph: RegulationGraph,
    target: str,
    max_depth: int = MAX_PATHWAY_NODES,
    budget: int = DEFAULT_WALK_BUDGET,
) -> int:
    """Largest depth in [2, max_depth] whose walk estimate fits the budget.

    Falls back to 2 even when direct in-edges alone exceed the budget:
    direct regulators are always searchable.
    """
    if max_depth < 2:
        raise QueryError("max_depth must be >= 2", field="max_depth")
    totals = _walk_totals(graph, target, max_depth)
    for depth in range(max_depth, 1, -1):
        if totals.get(depth, 0) <= budget:
            return depth
    return 2


def enumerate_pathways(graph: RegulationGraph, target: str, depth: int) -> list[Pathway]:
    """All simple directed paths of node-length <= depth ending at target.

    Ordered by (length, node sequence, relation sequence) for determinism.
    """
    if depth < 2:
        raise QueryError("pathway enumeration needs depth >= 2", field="depth")
    if not graph.has_node(target):
        return []
    found: list[Pathway] = []
    visited = {target}
    # rev_* run v_1 .. v_k; pathway tuples are emitted reversed.
    rev_nodes = [target]
    rev_edges: list[GraphEdge] = []

    def extend(front: str) -> None:
        if len(rev_nodes) >= 2:
            edges = tuple(reversed(rev_edges))
            net = reduce(compose_polarity, (e.polarity for e in edges))
            found.append(Pathway(tuple(reversed(rev_nodes)), edges, net))
        if len(rev_nodes) >= depth:
            return
        for edge in graph.in_edges(front):
            if edge.src in visited:
                continue
            visited.add(edge.src)
            rev_nodes.append(edge.src)
            rev_edges.append(edge)
            extend(edge.src)
            rev_edges.pop()
            rev_nodes.pop()
            visited.discard(edge.src)

    extend(target)
    found.sort(key=lambda p: (p.length, p.nodes, tuple(e.relation for e in p.edges)))
    return found


def _article_count(index: Index, record_ids: set[str]) -> int:
    pmids = set()
    for doc_id in index.evidence_of(record_ids):
        pmid = index.get_document(doc_id).pmid
        if pmid:
            pmids.add(pmid)
    return len(pmids)


def top_members(
    graph: RegulationGraph,
    target: str,
    k: int = 10,
    upstream: bool = False,
    index: Index | None = None,
    by_articles: bool = False,
) -> list[tuple[str, int]]:
    """Rank direct regulators (or the upstream set) of a target.

    Default ranking is supporting-record count, ties broken by entity name;
    ``by_articles`` switches to distinct-article count and needs the index
    to chase evidence provenance.
    """
    if k < 1:
        raise QueryError("k must be >= 1", field="k")
    if by_articles and index is None:
        raise QueryError("article ranking requires the index", field="by_articles")
    support: dict[str, set[str]] = {}
    if not upstream:
        for edge in graph.in_edges(target):
            support.setdefault(edge.src, set()).update(edge.record_ids)
    else:
        members = {edge.src for edge in graph.in_edges(target)}
        for member in members:
            for edge in graph.in_edges(member):
                support.setdefault(edge.src, set()).update(edge.record_ids)
    if by_articles:
        counted = {entity: _article_count(index, rids) for entity, rids in support.items()}
    else:
        counted = {entity: len(rids) for entity, rids in support.items()}
    ranked = sorted(counted.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:k]


def first_edge_evidence(index: Index, pathway: Pathway) -> list[EvidenceDoc]:
    """Evidence docs of the pathway's first edge (v_k -> v_{k-1}), id order."""
    if not pathway.edges:
        raise QueryError("degenerate pathway has no edges")
    first = pathway.edges[0]
    return [index.get_document(d) for d in index.evidence_of(first.record_ids)]
