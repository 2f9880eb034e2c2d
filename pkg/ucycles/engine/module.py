"""Transition digraph construction, Eulerian audit and circuit extraction."""

import logging
import time
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np

import ucycles
from ucycles.classes.module import predicted_degree
from ucycles.core.models import UnsupportedWordLength, Verdict, WordClass
from ucycles.core.module import member_codes

from .models import (
    ComponentSummary,
    DegreeAudit,
    DegreeMismatch,
    DegreeViolation,
    ExistenceReport,
    MalformedCircuit,
    NotEulerianError,
    TransitionDigraph,
    UCycle,
)

log = logging.getLogger("ucycles.engine")

EDGE_ORDER = "lexicographic-greedy"
CENSUS_EDGE_LIMIT = 64
# Min-hooking passes before the remaining quotient graph goes to networkx.
HOOK_ROUNDS = 3


def build_digraph(
    word_class: WordClass, *, cap: Optional[int] = None
) -> TransitionDigraph:
    """Build the transition digraph of a class.

    An edge ``prefix(w) -> suffix(w)`` labeled ``w`` is added for every
    member ``w``; vertices are exactly the windows incident to some edge.

    :raises UnsupportedWordLength: n < 2.
    :raises EnumerationCapExceeded: k^n above the cap.
    """
    n, k = word_class.n, word_class.k
    if n < 2:
        raise UnsupportedWordLength(
            f"The engine needs words of length at least 2, got n={n}."
        )

    now = time.time()
    labels = member_codes(word_class, cap=cap)

    prefixes = labels // k
    suffixes = labels % (k ** (n - 1))
    vertices = np.unique(np.concatenate([prefixes, suffixes]))
    tails = np.searchsorted(vertices, prefixes)
    heads = np.searchsorted(vertices, suffixes)

    out_degrees = np.bincount(tails, minlength=len(vertices))
    in_degrees = np.bincount(heads, minlength=len(vertices))
    # labels are sorted, so tails are too: out-edges are contiguous
    offsets = np.concatenate([[0], np.cumsum(out_degrees)]).astype(np.int64)

    graph = TransitionDigraph(
        word_class=word_class,
        vertices=vertices,
        labels=labels,
        tails=tails,
        heads=heads,
        offsets=offsets,
        in_degrees=in_degrees,
        out_degrees=out_degrees,
    )
    log.debug(
        f"Digraph for {word_class.label} has {graph.vertex_count} vertices "
        f"and {graph.edge_count} edges ({time.time() - now:.3f} s)."
    )
    return graph


def degree_audit(graph: TransitionDigraph) -> List[DegreeViolation]:
    """Vertices whose in-degree differs from their out-degree."""
    unbalanced = np.flatnonzero(graph.in_degrees != graph.out_degrees)
    return [
        DegreeViolation(
            graph.vertex_word(index),
            int(graph.in_degrees[index]),
            int(graph.out_degrees[index]),
        )
        for index in unbalanced
    ]


def _contract(graph: TransitionDigraph) -> np.ndarray:
    """Partial union of the endpoints of every edge, by repeated min-hooking.

    Every vertex ends up pointing at the smallest vertex of a connected
    tree inside its weak component.
    """
    parent = np.arange(graph.vertex_count)
    for _ in range(HOOK_ROUNDS):
        tails, heads = parent[graph.tails], parent[graph.heads]
        low = np.minimum(tails, heads)
        np.minimum.at(parent, tails, low)
        np.minimum.at(parent, heads, low)
        while True:
            jumped = parent[parent]
            if np.array_equal(jumped, parent):
                break
            parent = jumped
    return parent


def weak_components(graph: TransitionDigraph) -> Tuple[int, np.ndarray]:
    """Count the weak components that contain an edge.

    :return: The count and the component id of every vertex; ids are
        numbered by the smallest vertex they contain.
    """
    size = graph.vertex_count
    parent = _contract(graph)
    roots = np.flatnonzero(parent == np.arange(size))
    tails, heads = parent[graph.tails], parent[graph.heads]
    cross = tails != heads
    crossing = np.unique(tails[cross] * size + heads[cross])

    digraph = nx.DiGraph()
    digraph.add_nodes_from(roots.tolist())
    digraph.add_edges_from(zip((crossing // size).tolist(), (crossing % size).tolist()))

    root_component = np.full(size, -1, dtype=np.int64)
    components = sorted(nx.weakly_connected_components(digraph), key=min)
    for index, component in enumerate(components):
        root_component[list(component)] = index
    component_of = root_component[parent]

    with_edges = np.zeros(len(components), dtype=bool)
    with_edges[component_of[graph.tails]] = True
    return int(with_edges.sum()), component_of


def _census(
    graph: TransitionDigraph, component_of: np.ndarray
) -> List[ComponentSummary]:
    edge_component = component_of[graph.tails]
    return [
        ComponentSummary(
            index,
            tuple(graph.vertices[component_of == index].tolist()),
            tuple(graph.labels[edge_component == index].tolist()),
        )
        for index in np.unique(edge_component).tolist()
    ]


def eulerian_check(graph: TransitionDigraph) -> ExistenceReport:
    """Balanced, at most one nontrivial weak component and at least one edge."""
    violations = degree_audit(graph)
    count, component_of = weak_components(graph)
    verdict = not violations and count <= 1 and graph.edge_count >= 1

    report = ExistenceReport(
        word_class=graph.word_class,
        verdict=verdict,
        degree_violations=tuple(violations),
        nontrivial_component_count=count,
        edge_count=graph.edge_count,
        components=tuple(_census(graph, component_of)),
    )
    log.info(
        f"{graph.word_class.label}: Eulerian={verdict}, "
        f"{len(violations)} unbalanced vertices, {count} components."
    )
    return report


def hierholzer(
    graph: TransitionDigraph, report: Optional[ExistenceReport] = None
) -> List[int]:
    """Euler circuit as a list of edge indices.

    Starts at the smallest vertex with an out-edge and always leaves a
    vertex by its smallest unused edge; sub-tours are spliced in the order
    they are closed.

    :param report: ``eulerian_check(graph)`` when the caller already has it.
    :raises NotEulerianError: The digraph has no Euler circuit.
    """
    if report is None:
        report = eulerian_check(graph)
    elif report.word_class != graph.word_class:
        raise ValueError(
            f"Report of {report.word_class.label} given for {graph.word_class.label}."
        )
    if not report.verdict:
        raise NotEulerianError(report)

    heads = graph.heads.tolist()
    ends = graph.offsets[1:].tolist()
    cursor = graph.offsets[:-1].tolist()
    start = int(np.flatnonzero(graph.out_degrees)[0])

    now = time.time()
    circuit: List[int] = []
    stack: List[Tuple[int, int]] = [(start, -1)]
    while stack:
        vertex, via = stack[-1]
        if cursor[vertex] < ends[vertex]:
            edge = cursor[vertex]
            cursor[vertex] += 1
            stack.append((heads[edge], edge))
        else:
            stack.pop()
            if via >= 0:
                circuit.append(via)
    circuit.reverse()

    if len(circuit) != graph.edge_count:
        raise MalformedCircuit(
            f"Circuit covers {len(circuit)} of {graph.edge_count} edges."
        )
    log.debug(
        f"Euler circuit of {graph.word_class.label} with {len(circuit)} edges "
        f"({time.time() - now:.3f} s)."
    )
    return circuit


def emit_cycle(circuit: List[int], graph: TransitionDigraph) -> UCycle:
    """Read the U-cycle off an Euler circuit: first letter of every edge.

    :raises MalformedCircuit: ``circuit`` is not an Euler circuit of ``graph``.
    """
    if len(circuit) != graph.edge_count or not circuit:
        raise MalformedCircuit(
            f"Circuit has {len(circuit)} edges, the digraph has {graph.edge_count}."
        )
    order = np.asarray(circuit, dtype=np.int64)
    if not np.array_equal(np.sort(order), np.arange(graph.edge_count)):
        raise MalformedCircuit("Circuit does not use every edge exactly once.")
    if not np.array_equal(graph.heads[order], graph.tails[np.roll(order, -1)]):
        raise MalformedCircuit("Consecutive circuit edges do not share a vertex.")

    n, k = graph.n, graph.k
    letters = (graph.labels[order] // k ** (n - 1)).tolist()
    return UCycle(
        letters=tuple(letters),
        word_class=graph.word_class,
        start_vertex=graph.vertex_word(int(graph.tails[order[0]])),
        edge_order=EDGE_ORDER,
        engine_version=ucycles.__version__,
    )


def generate(word_class: WordClass, *, cap: Optional[int] = None) -> UCycle:
    """Build, check and traverse in one go.

    :raises NotEulerianError: The class has no U-cycle.
    """
    graph = build_digraph(word_class, cap=cap)
    report = eulerian_check(graph)
    return emit_cycle(hierholzer(graph, report), graph)


def degree_formula_audit(graph: TransitionDigraph) -> DegreeAudit:
    """Compare every realized vertex with the predicted degree formula."""
    mismatches = []
    checked = skipped = 0
    for index in range(graph.vertex_count):
        vertex = graph.vertex_word(index)
        predicted = predicted_degree(graph.word_class, vertex)
        if predicted is None:
            skipped += 1
            continue
        checked += 1
        in_degree = int(graph.in_degrees[index])
        out_degree = int(graph.out_degrees[index])
        if in_degree != predicted or out_degree != predicted:
            mismatches.append(DegreeMismatch(vertex, in_degree, out_degree, predicted))
    if mismatches:
        log.warning(
            f"{graph.word_class.label}: {len(mismatches)} vertices "
            "differ from the degree formula."
        )
    return DegreeAudit(graph.word_class, tuple(mismatches), checked, skipped)


def concordant(word_class: WordClass, report: ExistenceReport) -> bool:
    """Theorem verdict and engine verdict agree, or the theorem is silent."""
    verdict = word_class.theorem_verdict.verdict
    if verdict is Verdict.UNSETTLED:
        return True
    return (verdict is Verdict.EXISTS) == report.verdict
