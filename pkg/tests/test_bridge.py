from hypothesis import given, settings

from src.bridge.checks import (
    BRIDGE_COLUMNS,
    ConvergenceBound,
    bridge_row,
    check_convergence_bound,
    check_depth_sufficiency,
    check_graph_theorem,
    check_node_theorem,
    check_stepwise_correspondence,
)
from src.graph.graph import make_graph
from src.harness.corpus import CorpusSpec, build_corpus, constructed_equivalent_pairs
from src.harness.generators import gen_cycle
from src.harness.mutants import CollidingColorDictionary, SetChildrenCodeTable

from .strategies import graphs

TRIANGLE = make_graph([[0]] * 3, [(0, 1), (1, 2), (0, 2)])
PATH3 = make_graph([[0]] * 3, [(0, 1), (1, 2)])
# centre à deux feuilles et arête isolée : seule la multiplicité les distingue
CHERRY_AND_EDGE = make_graph([[0]] * 5, [(0, 1), (0, 2), (3, 4)])


@settings(max_examples=200)
@given(graphs(max_nodes=10))
def test_stepwise_correspondence(g):
    report = check_stepwise_correspondence(g, max(1, g.node_count))
    assert report.ok
    assert all(report.step_matches)
    assert report.bound_satisfied


@given(graphs(max_nodes=10))
def test_node_theorem(g):
    assert check_node_theorem(g)


@given(graphs(max_nodes=7), graphs(max_nodes=7))
def test_graph_theorem_on_random_pairs(g1, g2):
    assert check_graph_theorem(g1, g2)


def test_graph_theorem_on_constructed_pairs():
    corpus = build_corpus(CorpusSpec(count=20, seed=11))
    for g1, g2 in constructed_equivalent_pairs(corpus, 20, seed=5):
        assert check_graph_theorem(g1, g2)


def test_convergence_examples():
    assert check_convergence_bound(TRIANGLE) == ConvergenceBound(1, 1, True, True)
    assert check_convergence_bound(PATH3) == ConvergenceBound(2, 2, True, True)
    marked = check_convergence_bound(gen_cycle(6, "one"))
    assert marked.r == 3
    assert marked.steps <= 4
    assert marked.within_r_plus_1


@given(graphs(max_nodes=10))
def test_convergence_within_diameter_plus_one(g):
    assert check_convergence_bound(g).within_r_plus_1


@given(graphs(max_nodes=10))
def test_depth_sufficiency(g):
    assert check_depth_sufficiency(g)


def test_bridge_row_columns():
    row = bridge_row(3, gen_cycle(6, "one"))
    assert list(row) == BRIDGE_COLUMNS
    assert row["graph_id"] == 3
    assert row["classes_wl"] == row["classes_unfold"] == 4
    assert row["match"]


def test_colliding_hash_is_caught():
    report = check_stepwise_correspondence(
        gen_cycle(6, "all-distinct"), 6, dictionary_factory=CollidingColorDictionary
    )
    assert not report.ok
    t, u, v = report.counterexample
    assert t == 0
    assert u != v


def test_set_children_is_caught():
    report = check_stepwise_correspondence(
        CHERRY_AND_EDGE, 3, table_factory=SetChildrenCodeTable
    )
    assert report.counterexample is not None
    assert report.counterexample[0] == 1
    assert not check_node_theorem(CHERRY_AND_EDGE, table_factory=SetChildrenCodeTable)
