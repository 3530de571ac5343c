from .corpus import (
    CorpusSpec,
    build_corpus,
    constructed_equivalent_pairs,
    dump_corpus,
    load_corpus,
    random_pairs,
)
from .generators import (
    enumerate_labeled_trees,
    gen_circulant,
    gen_cycle,
    gen_equivalence_respecting_targets,
    gen_random_labeled,
)
from .mutants import MUTANTS, CollidingColorDictionary, SetChildrenCodeTable
from .prng import SplitMix64
from .suite import CHECKS, SuiteReport, run_suite

__all__ = [
    "CHECKS",
    "MUTANTS",
    "CollidingColorDictionary",
    "CorpusSpec",
    "SetChildrenCodeTable",
    "SplitMix64",
    "SuiteReport",
    "build_corpus",
    "constructed_equivalent_pairs",
    "dump_corpus",
    "enumerate_labeled_trees",
    "gen_circulant",
    "gen_cycle",
    "gen_equivalence_respecting_targets",
    "gen_random_labeled",
    "load_corpus",
    "random_pairs",
    "run_suite",
]
