import json

import pytest

from src.bin.errors import ConfigError, GraphFormatError
from src.constructive.gnn import validate_target
from src.graph.graph import diameter
from src.harness.corpus import (
    CorpusSpec,
    build_corpus,
    constructed_equivalent_pairs,
    dump_corpus,
    load_corpus,
    random_pairs,
)
from src.harness.generators import (
    distance_targets,
    enumerate_labeled_trees,
    gen_circulant,
    gen_cycle,
    gen_equivalence_respecting_targets,
    gen_random_labeled,
)
from src.harness.mutants import MUTANTS, REFERENCE, get_mutant
from src.harness.prng import SplitMix64
from src.unfolding.codec import canonical_code
from src.unfolding.equivalence import graphs_unfolding_equivalent
from src.wl.coloring import wl_graphs_equivalent


def test_splitmix_reference_values():
    rng = SplitMix64(0)
    assert rng.next_u64() == 0xE220A8397B1DCDAF
    assert rng.next_u64() == 0x6E789E6AA1B965F4


def test_splitmix_helpers_stay_in_range():
    rng = SplitMix64(42)
    values = [rng.random() for _ in range(200)]
    assert all(0.0 <= x < 1.0 for x in values)
    assert {rng.below(3) for _ in range(200)} == {0, 1, 2}
    items = list(range(10))
    rng.shuffle(items)
    assert sorted(items) == list(range(10))
    with pytest.raises(ValueError):
        rng.below(0)


@pytest.mark.parametrize("marking", ["none", "one", "all-distinct"])
def test_cycle_structure(marking):
    g = gen_cycle(7, marking)
    assert g.node_count == g.edge_count == 7
    assert diameter(g) == 3


def test_cycle_rejects_bad_arguments():
    with pytest.raises(ConfigError):
        gen_cycle(2)
    with pytest.raises(ConfigError):
        gen_cycle(5, "two")


def test_random_graph_is_reproducible():
    a = gen_random_labeled(9, 0.4, 3, 17)
    b = gen_random_labeled(9, 0.4, 3, 17)
    assert a == b
    assert gen_random_labeled(9, 0.0, 3, 17).edge_count == 0
    assert gen_random_labeled(9, 1.0, 3, 17).edge_count == 36
    with pytest.raises(ConfigError):
        gen_random_labeled(4, 1.5, 3, 0)


@pytest.mark.parametrize("n, degree", [(6, 2), (8, 3), (9, 4), (1, 0)])
def test_circulant_is_regular(n, degree):
    g = gen_circulant(n, degree, 2, 3)
    assert g.node_count == n
    degrees = [0] * n
    for u, v in g.edges:
        degrees[u] += 1
        degrees[v] += 1
    assert set(degrees) == {degree}


def test_circulant_rejects_impossible_degree():
    with pytest.raises(ConfigError):
        gen_circulant(5, 3, 2, 0)
    with pytest.raises(ConfigError):
        gen_circulant(4, 4, 2, 0)


def test_targets_respect_equivalence():
    g = gen_cycle(8, "one")
    items = gen_equivalence_respecting_targets(g, 3)
    assert validate_target(items) is None
    assert items[1].target == items[7].target
    assert all(abs(item.target[0]) <= 10 for item in items)


def test_distance_targets():
    assert distance_targets(gen_cycle(6, "one"), 0) == [0.0, 1.0, 2.0, 3.0, 2.0, 1.0]


def test_enumerated_trees_are_distinct():
    trees = enumerate_labeled_trees(4, 2)
    assert len(trees) == 2 + 4 + 14 + 52
    assert len({canonical_code(t) for t in trees}) == len(trees)


def test_corpus_is_reproducible():
    spec = CorpusSpec(count=25, size=8, seed=123)
    first, second = build_corpus(spec), build_corpus(spec)
    assert first == second
    assert [gid for gid, _ in first] == list(range(25))
    assert all(1 <= g.node_count <= 8 for _, g in first)
    assert build_corpus(CorpusSpec(count=25, size=8, seed=124)) != first


@pytest.mark.parametrize("generator", ["circulant", "cycle"])
def test_other_generators(generator):
    corpus = build_corpus(CorpusSpec(generator=generator, count=10, degree=2))
    assert len(corpus) == 10
    assert all(g.node_count >= 3 for _, g in corpus)


def test_corpus_json_round_trip():
    corpus = build_corpus(CorpusSpec(count=5, size=6, seed=1))
    assert load_corpus(dump_corpus(corpus)) == corpus


def test_single_graph_document_is_a_corpus():
    g = gen_cycle(3)
    document = json.dumps(json.loads(dump_corpus([(0, g)]))["graphs"][0]["graph"])
    assert load_corpus(document) == [(0, g)]


def test_malformed_corpus():
    with pytest.raises(GraphFormatError):
        load_corpus("{")
    with pytest.raises(GraphFormatError):
        load_corpus('{"graphs":[{"graph":{}}]}')


def test_corpus_spec_validation():
    with pytest.raises(ConfigError):
        CorpusSpec(generator="grid")
    with pytest.raises(ConfigError):
        CorpusSpec(edge_prob=2.0)


def test_random_pairs_share_size():
    corpus = build_corpus(CorpusSpec(count=30, seed=9))
    pairs = random_pairs(corpus, 20, 4)
    assert len(pairs) == 20
    assert all(a.node_count == b.node_count for a, b in pairs)
    assert random_pairs([], 5, 0) == []


def test_constructed_pairs_are_equivalent():
    corpus = build_corpus(CorpusSpec(count=10, seed=2))
    for g1, g2 in constructed_equivalent_pairs(corpus, 12, 5):
        assert wl_graphs_equivalent(g1, g2)
        assert graphs_unfolding_equivalent(g1, g2)


def test_mutant_registry():
    assert get_mutant(None) is REFERENCE
    assert get_mutant("none") is REFERENCE
    assert get_mutant("set-children") is MUTANTS["set-children"]
    with pytest.raises(ConfigError):
        get_mutant("off-by-one")
