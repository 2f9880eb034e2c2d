import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ucycles.core.models import UnsupportedWordLength
from ucycles.classes.module import parameter_grid
from ucycles.core.module import count_class, make_class
from ucycles.engine.dot_utils import DotUtils
from ucycles.engine.models import MalformedCircuit, NotEulerianError, least_rotation
from ucycles.engine.module import (
    EDGE_ORDER,
    build_digraph,
    concordant,
    degree_audit,
    degree_formula_audit,
    emit_cycle,
    eulerian_check,
    generate,
    hierholzer,
    weak_components,
)
from ucycles.verifier.module import same_windows, verify_ucycle


def test_de_bruijn_digraph(de_bruijn_class):
    graph = build_digraph(de_bruijn_class)
    assert graph.vertex_count == 4
    assert graph.edge_count == 8
    assert graph.offsets.tolist() == [0, 2, 4, 6, 8]
    assert graph.in_degrees.tolist() == [2, 2, 2, 2]
    assert [graph.edge_word(i) for i in graph.out_edges(1)] == [(0, 1, 0), (0, 1, 1)]
    assert not degree_audit(graph)


def test_digraph_is_read_only(de_bruijn_class):
    graph = build_digraph(de_bruijn_class)
    with pytest.raises(ValueError):
        graph.labels[0] = 7


def test_engine_needs_two_letters():
    with pytest.raises(UnsupportedWordLength):
        build_digraph(make_class("all_words", 1, 3))


def test_de_bruijn_cycle(de_bruijn_class):
    cycle = generate(de_bruijn_class)
    assert cycle.format() == "00010111"
    assert cycle.start_vertex == (0, 0)
    assert cycle.edge_order == EDGE_ORDER
    assert same_windows(cycle.letters, de_bruijn_class.alphabet.parse("11101000"), 3)


def test_noninjective_cycle(noninjective_class):
    cycle = generate(noninjective_class)
    assert len(cycle) == 21
    assert verify_ucycle(cycle.letters, noninjective_class).valid


def test_generation_is_deterministic(noninjective_class):
    assert generate(noninjective_class) == generate(noninjective_class)


def test_cycle_dump(de_bruijn_class):
    assert generate(de_bruijn_class).dump() == {
        "class": "all_words",
        "n": 3,
        "k": 2,
        "params": {},
        "length": 8,
        "cycle": "00010111",
        "start_vertex": "00",
        "edge_order": EDGE_ORDER,
        "engine_version": "0.0.1",
    }


def test_illegal_rankings_split_off_a_triangle():
    word_class = make_class("illegal_ranking", 3)
    report = eulerian_check(build_digraph(word_class))
    assert not report.verdict
    assert report.reasons == ["disconnected"]
    assert report.nontrivial_component_count > 1
    edge_sets = [set(c["edges"]) for c in report.dump()["components"]]
    assert {"112", "121", "211"} in edge_sets


@pytest.mark.parametrize(
    "name, n, k, kwargs, reasons",
    [
        ("injective", 3, 3, {}, ["disconnected"]),
        ("surjective", 3, 3, {}, ["disconnected"]),
        ("nonsurjective", 3, 2, {}, ["disconnected"]),
        ("nonsurjective", 4, 2, {}, ["disconnected"]),
        ("nonsurjective", 5, 2, {}, ["disconnected"]),
        ("nonpassword", 3, None, {"categories": (1, 1)}, ["disconnected"]),
        ("alternating", 5, None, {"kv": 2, "kc": 1}, ["degree_imbalance"]),
        ("injective", 4, 3, {}, ["empty_class"]),
    ],
)
def test_non_existence(name, n, k, kwargs, reasons):
    report = eulerian_check(build_digraph(make_class(name, n, k, **kwargs)))
    assert not report.verdict
    assert report.reasons == reasons


def test_degree_violations_are_reported():
    word_class = make_class("alternating", 3, kv=2, kc=1)
    report = eulerian_check(build_digraph(word_class))
    violation = report.degree_violations[0].dump(word_class)
    assert violation == {"vertex": "AC", "in": 1, "out": 2}


def test_weak_components(de_bruijn_class):
    count, component_of = weak_components(build_digraph(de_bruijn_class))
    assert count == 1
    assert component_of.tolist() == [0, 0, 0, 0]


def test_census_is_truncated():
    word_class = make_class("nonsurjective", 3, 2)
    report = eulerian_check(build_digraph(word_class))
    components = report.dump(edge_limit=0)["components"]
    assert [c["edge_count"] for c in components] == [1, 1]
    assert all(c["truncated"] and c["edges"] == [] for c in components)


def test_hierholzer_refuses_non_eulerian():
    graph = build_digraph(make_class("injective", 3, 3))
    with pytest.raises(NotEulerianError) as info:
        hierholzer(graph)
    assert info.value.report.reasons == ["disconnected"]


def test_hierholzer_reuses_a_given_report(noninjective_class):
    graph = build_digraph(noninjective_class)
    report = eulerian_check(graph)
    assert hierholzer(graph, report) == hierholzer(graph)


def test_hierholzer_refuses_a_negative_report():
    graph = build_digraph(make_class("illegal_ranking", 3))
    with pytest.raises(NotEulerianError):
        hierholzer(graph, eulerian_check(graph))


def test_hierholzer_refuses_a_foreign_report(de_bruijn_class, noninjective_class):
    report = eulerian_check(build_digraph(noninjective_class))
    with pytest.raises(ValueError):
        hierholzer(build_digraph(de_bruijn_class), report)


def reference_components(graph):
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(graph.vertex_count))
    digraph.add_edges_from(zip(graph.tails.tolist(), graph.heads.tolist()))
    component_of = np.zeros(graph.vertex_count, dtype=np.int64)
    components = sorted(nx.weakly_connected_components(digraph), key=min)
    for index, component in enumerate(components):
        component_of[list(component)] = index
    return component_of.tolist()


@pytest.mark.parametrize(
    "names", [["injective", "surjective"], ["nonsurjective", "illegal_ranking"]]
)
def test_weak_components_match_plain_traversal(names):
    for word_class in parameter_grid(names, range(2, 6), range(2, 6), cap=2000):
        graph = build_digraph(word_class)
        _, component_of = weak_components(graph)
        assert component_of.tolist() == reference_components(graph), word_class.label


def test_emit_rejects_malformed_circuits(de_bruijn_class):
    graph = build_digraph(de_bruijn_class)
    with pytest.raises(MalformedCircuit):
        emit_cycle([], graph)
    with pytest.raises(MalformedCircuit):
        emit_cycle([0] * 8, graph)
    with pytest.raises(MalformedCircuit):
        emit_cycle(list(range(8)), graph)


def test_canonical_rotation():
    word_class = make_class("noninjective", 3, 3)
    cycle = generate(word_class).canonical()
    rotations = [
        cycle.letters[i:] + cycle.letters[:i] for i in range(len(cycle.letters))
    ]
    assert cycle.letters == min(rotations)
    assert cycle.start_vertex == cycle.letters[:2]
    assert verify_ucycle(cycle.letters, word_class).valid


@given(st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=12))
def test_least_rotation(letters):
    letters = tuple(letters)
    shift = least_rotation(letters)
    rotations = [letters[i:] + letters[:i] for i in range(len(letters))]
    assert letters[shift:] + letters[:shift] == min(rotations)


@pytest.mark.parametrize(
    "name, n, k, kwargs",
    [
        ("noninjective", 4, 3, {}),
        ("noninjective", 4, 4, {}),
        ("noninjective", 5, 3, {}),
        ("noninjective", 5, 4, {}),
        ("nonsurjective", 3, 3, {}),
        ("nonsurjective", 4, 3, {}),
        ("nonsurjective", 5, 3, {}),
        ("illegal_ranking", 4, None, {}),
        ("illegal_ranking", 5, None, {}),
        ("nonpassword", 4, None, {"categories": (2, 1, 1)}),
        ("nonpassword", 5, None, {"categories": (1, 2, 1)}),
        ("nonpassword", 5, None, {"categories": (1, 1, 2)}),
        ("alternating", 4, None, {"kv": 2, "kc": 1}),
        ("alternating", 6, None, {"kv": 2, "kc": 1}),
        ("alternating", 5, None, {"kv": 2, "kc": 2}),
    ],
)
def test_degree_formula_audit(name, n, k, kwargs):
    audit = degree_formula_audit(build_digraph(make_class(name, n, k, **kwargs)))
    assert audit.ok
    assert audit.checked > 0
    assert audit.skipped == 0


def test_audit_skips_classes_without_formula(de_bruijn_class):
    audit = degree_formula_audit(build_digraph(de_bruijn_class))
    assert audit.ok
    assert audit.checked == 0
    assert audit.skipped == 4


@pytest.mark.parametrize(
    "name, n, k, kwargs",
    [
        ("noninjective", 4, 3, {}),
        ("illegal_ranking", 4, None, {}),
        ("alternating", 5, None, {"kv": 2, "kc": 2}),
        ("nonpassword", 3, None, {"categories": (1, 1, 1)}),
        ("surjective", 4, 3, {}),
    ],
)
def test_generated_cycles_verify(name, n, k, kwargs):
    word_class = make_class(name, n, k, **kwargs)
    cycle = generate(word_class)
    assert len(cycle) == count_class(word_class)
    assert verify_ucycle(cycle.letters, word_class).valid
    assert concordant(word_class, eulerian_check(build_digraph(word_class)))


def test_dot_export():
    graph = build_digraph(make_class("all_words", 2, 2))
    dot = DotUtils.to_dot(graph)
    assert dot.splitlines() == [
        'digraph "all_words_n2_k2" {',
        '  "A";',
        '  "B";',
        '  "A" -> "A" [label="AA"];',
        '  "A" -> "B" [label="AB"];',
        '  "B" -> "A" [label="BA"];',
        '  "B" -> "B" [label="BB"];',
        "}",
    ]


def test_dot_quoting():
    assert DotUtils.quote('a"b') == '"a\\"b"'
    assert DotUtils.graph_name(
        build_digraph(make_class("nonpassword", 2, categories=(1, 1, 1)))
    ) == "nonpassword_n2_k3_categories1-1-1"
