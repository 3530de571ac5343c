"""
Suite de propriétés : chaque vérification parcourt le corpus (ou un jeu de
cas fixe) et consigne ses échecs avec un contre-exemple.
"""

import random
import time
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

from beartype import beartype

from ..bin.errors import ConfigError
from ..bin.log import logger
from ..bridge.checks import (
    check_convergence_bound,
    check_depth_sufficiency,
    check_graph_theorem,
    check_node_theorem,
    check_stepwise_correspondence,
)
from ..constructive.gnn import construct_gnn, evaluate, exact_gnn_trace
from ..graph.graph import Graph, diameter, to_numeric
from ..numeric.gradcheck import grad_check
from ..numeric.model import NumericConfig, NumericItem, forward, init_params
from ..numeric.perturb import perturb_experiment
from ..numeric.train import TrainConfig, train
from ..unfolding.codec import canonical_code, decode_tree, encode_tree
from ..unfolding.equivalence import (
    graphs_unfolding_equivalent,
    node_classes_by_unfolding,
)
from ..unfolding.tree import UnfoldingTree, unfold
from ..wl.coloring import color_partition, wl_graphs_equivalent, wl_run
from .corpus import (
    Corpus,
    CorpusSpec,
    build_corpus,
    constructed_equivalent_pairs,
    random_pairs,
)
from .generators import (
    distance_targets,
    enumerate_labeled_trees,
    gen_cycle,
    gen_equivalence_respecting_targets,
)
from .mutants import Mutant, get_mutant

CHECKS = (
    "stepwise",
    "node-theorem",
    "graph-theorem",
    "convergence",
    "depth-sufficiency",
    "coding",
    "constructive",
    "fig3",
    "gradient",
    "perturbation",
    "training",
)

SUITE_COLUMNS = ["check", "passed", "failed", "seconds"]
FAILURE_COLUMNS = ["check", "graph_id", "detail"]

# classes attendues sur le 6-cycle selon le marquage
FIG3_CLASSES = {"none": 1, "one": 4, "all-distinct": 6}


@dataclass(frozen=True)
class SuiteFailure:
    check: str
    graph_id: int
    detail: str


@dataclass
class SuiteReport:
    """
    Compteurs de succès par vérification, échecs avec contre-exemples et
    durées. Le rapport passe si et seulement s'il ne contient aucun échec.
    """

    spec: CorpusSpec
    checks: tuple[str, ...]
    mutant: str
    passed: dict[str, int] = field(default_factory=dict)
    failures: list[SuiteFailure] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    within_r: int = 0
    graph_count: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def failed(self, check: str) -> int:
        return sum(1 for f in self.failures if f.check == check)


@dataclass(frozen=True)
class _Context:
    spec: CorpusSpec
    corpus: Corpus
    mutant: Mutant
    trials: int


Outcome = tuple[int, list[SuiteFailure]]


def _per_graph(
    name: str, ctx: _Context, test: Callable[[int, Graph], str | None]
) -> Outcome:
    passed, failures = 0, []
    for graph_id, g in ctx.corpus:
        detail = test(graph_id, g)
        if detail is None:
            passed += 1
        else:
            failures.append(SuiteFailure(name, graph_id, detail))
    return passed, failures


def _stepwise(ctx: _Context) -> Outcome:
    def test(graph_id: int, g: Graph) -> str | None:
        report = check_stepwise_correspondence(
            g,
            max(1, g.node_count),
            graph_id,
            ctx.mutant.dictionary_factory,
            ctx.mutant.table_factory,
        )
        if report.counterexample is None:
            return None
        t, u, v = report.counterexample
        return f"étape {t} : nœuds {u} et {v}"

    return _per_graph("stepwise", ctx, test)


def _node_theorem(ctx: _Context) -> Outcome:
    def test(graph_id: int, g: Graph) -> str | None:
        mutant = ctx.mutant
        if check_node_theorem(g, mutant.dictionary_factory, mutant.table_factory):
            return None
        return "partition WL finale différente de la partition de dépliage"

    return _per_graph("node-theorem", ctx, test)


def _graph_theorem(ctx: _Context) -> Outcome:
    random_count = len(ctx.corpus) // 2
    constructed_count = len(ctx.corpus) // 10
    pairs = random_pairs(ctx.corpus, random_count, ctx.spec.seed + 1)
    constructed = constructed_equivalent_pairs(
        ctx.corpus, constructed_count, ctx.spec.seed + 2, ctx.spec.alphabet
    )
    passed, failures = 0, []
    for pair_id, (g1, g2) in enumerate(pairs + constructed):
        agree = check_graph_theorem(
            g1, g2, ctx.mutant.dictionary_factory, ctx.mutant.table_factory
        )
        if pair_id >= len(pairs) and agree:
            # paire équivalente par construction : les deux verdicts doivent être vrais
            dictionary = ctx.mutant.dictionary_factory()
            agree = wl_graphs_equivalent(g1, g2, dictionary=dictionary)
            agree = agree and graphs_unfolding_equivalent(
                g1, g2, ctx.mutant.table_factory()
            )
        if agree:
            passed += 1
        else:
            failures.append(
                SuiteFailure("graph-theorem", pair_id, "verdicts en désaccord")
            )
    return passed, failures


def _convergence(ctx: _Context, report: SuiteReport) -> Outcome:
    def test(graph_id: int, g: Graph) -> str | None:
        bound = check_convergence_bound(g, ctx.mutant.dictionary_factory)
        report.within_r += int(bound.within_r)
        if bound.within_r_plus_1:
            return None
        return f"{bound.steps} étapes pour un diamètre {bound.r}"

    return _per_graph("convergence", ctx, test)


def _depth_sufficiency(ctx: _Context) -> Outcome:
    def test(graph_id: int, g: Graph) -> str | None:
        if check_depth_sufficiency(g, ctx.mutant.table_factory):
            return None
        return "partition de profondeur r+1 différente de r+2 ou r+3"

    return _per_graph("depth-sufficiency", ctx, test)


def _shuffled(t: UnfoldingTree, rng: random.Random) -> UnfoldingTree:
    children = [_shuffled(c, rng) for c in t.children]
    rng.shuffle(children)
    return UnfoldingTree(t.label, tuple(children))


def _coding(ctx: _Context) -> Outcome:
    trees = enumerate_labeled_trees(6, 2)
    rng = random.Random(ctx.spec.seed)
    seen: dict[int, int] = {}
    passed, failures = 0, []
    for index, t in enumerate(trees):
        code = encode_tree(t)
        if code in seen:
            detail = f"collision avec l'arbre {seen[code]}"
            failures.append(SuiteFailure("coding", index, detail))
            continue
        seen[code] = index
        back = decode_tree(code)
        if encode_tree(back) != code or back.size != t.size:
            failures.append(SuiteFailure("coding", index, "décodage non réversible"))
        elif encode_tree(_shuffled(t, rng)) != code:
            detail = "code dépendant de l'ordre des enfants"
            failures.append(SuiteFailure("coding", index, detail))
        else:
            passed += 1
    return passed, failures


def _constructive(ctx: _Context) -> Outcome:
    def test(graph_id: int, g: Graph) -> str | None:
        trace = exact_gnn_trace(g, diameter(g) + 1)
        for t, codes in enumerate(trace):
            direct = [canonical_code(unfold(g, v, t)) for v in range(g.node_count)]
            if codes != direct:
                return f"codes du GNN exact différents des arbres à l'étape {t}"
        return None

    passed, failures = _per_graph("constructive", ctx, test)

    # jeux de données : un graphe du corpus, cibles respectant l'équivalence
    for index, (graph_id, g) in enumerate(ctx.corpus[: len(ctx.corpus) // 10]):
        items = gen_equivalence_respecting_targets(g, ctx.spec.seed + index)
        program = construct_gnn(items)
        errors = [
            i
            for i, item in enumerate(items)
            if evaluate(program, g, item.node) != item.target
        ]
        if errors:
            failures.append(
                SuiteFailure(
                    "constructive", graph_id, f"cibles non reproduites : {errors}"
                )
            )
        else:
            passed += 1
    return passed, failures


def _fig3(ctx: _Context) -> Outcome:
    passed, failures = 0, []
    for index, (marking, expected) in enumerate(FIG3_CLASSES.items()):
        g = gen_cycle(6, marking)
        trace = wl_run([g], dictionary=ctx.mutant.dictionary_factory())
        wl = len(color_partition(trace))
        table = ctx.mutant.table_factory()
        ue = len(node_classes_by_unfolding(g, diameter(g) + 1, table))
        if wl == ue == expected:
            passed += 1
        else:
            failures.append(
                SuiteFailure(
                    "fig3",
                    index,
                    f"{marking} : WL {wl}, dépliage {ue}, attendu {expected}",
                )
            )
    return passed, failures


def _distance_dataset(g: Graph) -> list[NumericItem]:
    targets = distance_targets(g, 0)
    numeric = to_numeric(g)
    return [(numeric, v, (targets[v],)) for v in range(g.node_count)]


def _gradient(ctx: _Context) -> Outcome:
    ds = _distance_dataset(gen_cycle(6, "one"))
    passed, failures = 0, []
    for m in (1, 4, 8):
        cfg = NumericConfig(feature_dim=m, layers=2, combine_hidden=6, readout_hidden=6)
        report = grad_check(ds, init_params(cfg, ctx.spec.seed + m), cfg, step=1e-6)
        if report.ok(1e-5):
            passed += 1
        else:
            failures.append(
                SuiteFailure(
                    "gradient", m, f"erreur relative {report.max_relative_error:.3e}"
                )
            )
    return passed, failures


PERTURB_CONFIGS = tuple(
    NumericConfig(
        feature_dim=4,
        layers=3,
        combine_hidden=6,
        readout_hidden=6,
        activation=activation,
    )
    for activation in ("identity", "tanh")
)


def _perturbation(ctx: _Context) -> Outcome:
    passed, failures = 0, []
    for graph_id, g in ctx.corpus[:10]:
        numeric = to_numeric(g)
        for cfg in PERTURB_CONFIGS:
            p = init_params(cfg, ctx.spec.seed + graph_id)
            for eta in (1e-3, 1e-2):
                report = perturb_experiment(
                    numeric, p, cfg, eta, ctx.trials, ctx.spec.seed
                )
                if report.ok:
                    passed += 1
                else:
                    failures.append(
                        SuiteFailure(
                            "perturbation",
                            graph_id,
                            f"{cfg.activation}, η={eta} : "
                            f"{report.violations} violation(s)",
                        )
                    )
    return passed, failures


def _training(ctx: _Context) -> Outcome:
    passed, failures = 0, []
    g = gen_cycle(6, "one")
    ds = _distance_dataset(g)
    cfg = NumericConfig(feature_dim=8, layers=4)
    hyper = TrainConfig(
        lr=0.01, steps=10_000, seed=ctx.spec.seed, optimizer="adam", tol=1e-3
    )
    _, history = train(ds, cfg, hyper)
    if history[-1] <= 1e-3:
        passed += 1
    else:
        failures.append(SuiteFailure("training", 0, f"mse finale {history[-1]:.3e}"))

    # nœuds 1 et 5 équivalents : sorties identiques, donc erreur plancher
    numeric = to_numeric(g)
    gap = 1.0
    bad: list[NumericItem] = [(numeric, 1, (0.0,)), (numeric, 5, (gap,))]
    p, history = train(bad, cfg, TrainConfig(lr=0.01, steps=500, seed=ctx.spec.seed))
    outputs = forward(numeric, p, cfg).outputs
    floor = gap**2 / 2
    if outputs[1, 0] == outputs[5, 0] and 2 * history[-1] >= floor * (1 - 1e-12):
        passed += 1
    else:
        failures.append(
            SuiteFailure(
                "training", 1, f"erreur {2 * history[-1]:.3e} sous le plancher {floor}"
            )
        )
    return passed, failures


@beartype
def run_suite(
    spec: CorpusSpec,
    checks: Sequence[str] | None = None,
    mutant: str | None = None,
    trials: int = 100,
) -> SuiteReport:
    """
    Exécute les vérifications choisies sur le corpus décrit par ``spec``.

    Les échecs ne lèvent pas d'exception : ils sont consignés dans le rapport,
    triés par vérification puis par ``graph_id``.

    :param spec: Description du corpus.
    :type spec: CorpusSpec

    :param checks: Sous-ensemble de :data:`CHECKS` (toutes par défaut).
    :type checks: Sequence[str] | None

    :param mutant: ``colliding-hash`` ou ``set-children`` pour injecter une
        variante fautive des dictionnaires de couleurs ou de la table des arbres.
    :type mutant: str | None

    :param trials: Nombre d'essais par expérience de perturbation.
    :type trials: int

    :return: Rapport de suite.
    :rtype: SuiteReport

    :raises ConfigError: Vérification ou mutant inconnu.
    """
    selected = tuple(checks) if checks is not None else CHECKS
    unknown = [c for c in selected if c not in CHECKS]
    if unknown:
        raise ConfigError(f"vérification(s) inconnue(s) : {unknown}")
    chosen = get_mutant(mutant)
    corpus = build_corpus(spec)
    ctx = _Context(spec, corpus, chosen, trials)
    report = SuiteReport(
        spec=spec, checks=selected, mutant=chosen.name, graph_count=len(corpus)
    )

    runners: dict[str, Callable[[], Outcome]] = {
        "stepwise": lambda: _stepwise(ctx),
        "node-theorem": lambda: _node_theorem(ctx),
        "graph-theorem": lambda: _graph_theorem(ctx),
        "convergence": lambda: _convergence(ctx, report),
        "depth-sufficiency": lambda: _depth_sufficiency(ctx),
        "coding": lambda: _coding(ctx),
        "constructive": lambda: _constructive(ctx),
        "fig3": lambda: _fig3(ctx),
        "gradient": lambda: _gradient(ctx),
        "perturbation": lambda: _perturbation(ctx),
        "training": lambda: _training(ctx),
    }

    logger.info(
        f"🚀 Suite : {len(corpus)} graphe(s), {len(selected)} vérification(s), "
        f"mutant {chosen.name}"
    )
    for name in selected:
        start = time.perf_counter()
        passed, failures = runners[name]()
        report.timings[name] = time.perf_counter() - start
        report.passed[name] = passed
        report.failures.extend(sorted(failures, key=lambda f: f.graph_id))
        if failures:
            logger.warning(f"⚠️ {name} : {len(failures)} échec(s)")
        else:
            logger.info(f"✅ {name} : {passed} succès")
    outcome = "sans échec" if report.ok else "avec des échecs"
    logger.info(f"🏁 Suite terminée {outcome}")
    return report


def suite_report_rows(report: SuiteReport) -> list[dict[str, Any]]:
    return [
        {
            "check": name,
            "passed": report.passed.get(name, 0),
            "failed": report.failed(name),
            "seconds": round(report.timings.get(name, 0.0), 6),
        }
        for name in report.checks
    ]


def failure_rows(report: SuiteReport) -> list[dict[str, Any]]:
    return [
        {"check": f.check, "graph_id": f.graph_id, "detail": f.detail}
        for f in report.failures
    ]


def suite_report_to_json(report: SuiteReport) -> dict[str, Any]:
    """Contenu déterministe du rapport (sans les durées)."""
    return {
        "ok": report.ok,
        "mutant": report.mutant,
        "graphs": report.graph_count,
        "within_r": report.within_r,
        "passed": {name: report.passed.get(name, 0) for name in report.checks},
        "failures": failure_rows(report),
    }
