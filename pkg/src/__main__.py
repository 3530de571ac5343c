"""
Interface en ligne de commande ``wl-unfolding``.

Codes de sortie : 0 si toutes les vérifications passent, 1 en cas d'échec
d'une vérification, 2 pour une erreur d'usage ou de lecture.
"""

import argparse
import json
import sys
from collections.abc import Callable, Sequence
from fractions import Fraction
from typing import Any

from .bin.config import DEFAULT_SEED
from .bin.errors import WlUnfoldingError
from .bin.log import logger
from .bin.utils import (
    dumps,
    int_to_decimal,
    read_text,
    rows_to_csv_text,
    write_rows_to_csv,
    write_text,
)
from .bridge.checks import BRIDGE_COLUMNS, bridge_row
from .constructive.gnn import (
    DatasetItem,
    construct_gnn,
    evaluate,
    program_from_json,
    program_to_json,
)
from .graph.graph import Graph, diameter, to_numeric
from .harness.corpus import (
    GENERATORS,
    Corpus,
    CorpusSpec,
    build_corpus,
    dump_corpus,
    load_corpus,
)
from .harness.generators import MARKINGS, gen_cycle, gen_equivalence_respecting_targets
from .harness.mutants import MUTANTS
from .harness.suite import (
    CHECKS,
    FAILURE_COLUMNS,
    SUITE_COLUMNS,
    failure_rows,
    run_suite,
    suite_report_rows,
    suite_report_to_json,
)
from .numeric.model import (
    ACTIVATIONS,
    AGGREGATES,
    NumericConfig,
    NumericItem,
    init_params,
    params_from_json,
    params_to_json,
)
from .numeric.perturb import (
    OFFSET_MODES,
    PERTURB_COLUMNS,
    perturb_experiment,
    perturb_report_rows,
    perturb_report_to_json,
)
from .numeric.train import OPTIMIZERS, TrainConfig, train
from .unfolding.codec import canonical_code, tree_to_debug
from .unfolding.equivalence import (
    graphs_unfolding_equivalent,
    node_classes_by_unfolding,
    unfolding_equivalent,
)
from .unfolding.tree import unfold
from .wl.coloring import (
    color_partition,
    trace_to_json,
    wl_graphs_equivalent,
    wl_node_equivalent,
    wl_run,
)

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


def _emit(
    args: argparse.Namespace,
    payload: Any,
    rows: Sequence[dict[str, Any]] | None = None,
    columns: Sequence[str] | None = None,
) -> None:
    """Écrit ``payload`` en JSON ou ``rows`` en CSV selon ``--format``."""
    if args.format == "csv" and rows is not None:
        if args.output is None:
            write_text(rows_to_csv_text(rows, columns), None)
        else:
            write_rows_to_csv(rows, args.output, columns)
        return
    write_text(dumps(payload), args.output)


def _require_input(args: argparse.Namespace) -> str:
    if args.input is None:
        raise WlUnfoldingError("--input est requis pour cette commande")
    return read_text(args.input)


def _corpus_spec(args: argparse.Namespace) -> CorpusSpec:
    return CorpusSpec(
        generator=args.generator,
        size=args.size,
        count=args.count,
        edge_prob=args.edge_prob,
        degree=args.degree,
        alphabet=args.alphabet,
        seed=args.seed,
    )


def _input_corpus(args: argparse.Namespace, exact: bool = True) -> Corpus:
    """Corpus lu depuis ``--input``, sinon généré à partir des options de corpus."""
    if args.input is not None:
        return load_corpus(read_text(args.input), exact)
    return build_corpus(_corpus_spec(args))


def _first_graph(args: argparse.Namespace, exact: bool = True) -> Graph:
    corpus = load_corpus(_require_input(args), exact)
    if not corpus:
        raise WlUnfoldingError("aucun graphe dans le document")
    return corpus[0][1]


# ---------------------------------------------------------------------------
# sous-commandes
# ---------------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    if args.marking is not None:
        corpus: Corpus = [(0, gen_cycle(args.size, args.marking))]
    else:
        corpus = build_corpus(_corpus_spec(args))
    rows = [
        {"graph_id": gid, "n": g.node_count, "m": g.edge_count} for gid, g in corpus
    ]
    if args.format == "csv":
        _emit(args, None, rows, ["graph_id", "n", "m"])
    else:
        write_text(dump_corpus(corpus), args.output)
    logger.info(f"✅ {len(corpus)} graphe(s) généré(s)")
    return EXIT_OK


def cmd_wl(args: argparse.Namespace) -> int:
    graphs = [g for _, g in load_corpus(_require_input(args))]
    trace = wl_run(graphs, max_steps=args.max_steps)
    rows = [
        {"step": t, "graph": gi, "node": v, "color": c}
        for t, step in enumerate(trace.steps)
        for gi, colors in enumerate(step)
        for v, c in enumerate(colors)
    ]
    _emit(args, trace_to_json(trace), rows, ["step", "graph", "node", "color"])
    return EXIT_OK


def cmd_unfold(args: argparse.Namespace) -> int:
    g = _first_graph(args)
    depth = args.depth if args.depth is not None else diameter(g) + 1
    tree = unfold(g, args.node, depth)
    payload = {
        "node": args.node,
        "depth": depth,
        "code": int_to_decimal(canonical_code(tree)),
        "tree": tree_to_debug(tree),
    }
    _emit(args, payload)
    return EXIT_OK


def cmd_equiv_nodes(args: argparse.Namespace) -> int:
    g = _first_graph(args)
    wl = wl_node_equivalent(g, args.u, args.v)
    ue = unfolding_equivalent(g, args.u, args.v)
    payload = {
        "u": args.u,
        "v": args.v,
        "wl": wl,
        "unfolding": ue,
        "agree": wl == ue,
        "wl_classes": color_partition(wl_run([g])).to_json(),
        "unfolding_classes": node_classes_by_unfolding(g, diameter(g) + 1).to_json(),
    }
    _emit(args, payload)
    return EXIT_OK if wl == ue else EXIT_FAILURE


def cmd_equiv_graphs(args: argparse.Namespace) -> int:
    corpus = load_corpus(_require_input(args))
    if args.other is not None:
        corpus = corpus[:1] + load_corpus(read_text(args.other))[:1]
    if len(corpus) < 2:
        raise WlUnfoldingError("deux graphes sont requis (corpus ou --other)")
    g1, g2 = corpus[0][1], corpus[1][1]
    wl = wl_graphs_equivalent(g1, g2)
    ue = graphs_unfolding_equivalent(g1, g2)
    _emit(args, {"wl": wl, "unfolding": ue, "agree": wl == ue})
    return EXIT_OK if wl == ue else EXIT_FAILURE


def cmd_converge_report(args: argparse.Namespace) -> int:
    corpus = sorted(_input_corpus(args), key=lambda e: e[0])
    rows = [bridge_row(gid, g) for gid, g in corpus]
    _emit(args, rows, rows, BRIDGE_COLUMNS)
    within_r = sum(1 for r in rows if r["bound_r"])
    logger.info(f"🔎 {within_r}/{len(rows)} graphe(s) convergent en au plus r étapes")
    ok = all(r["match"] and r["bound_r1"] for r in rows)
    return EXIT_OK if ok else EXIT_FAILURE


def _dataset_items(
    document: str, exact: bool = True
) -> tuple[Corpus, list[tuple[int, int, list[Any]]]]:
    """
    Jeu de données ``{"graphs":[...], "items":[{"graph_id","node","target"}]}``.

    Sans clé ``items``, la liste est vide et les cibles seront générées.
    """
    corpus = load_corpus(document, exact)
    data = json.loads(document)
    raw_items = data.get("items", []) if isinstance(data, dict) else []
    try:
        items = [
            (int(it["graph_id"]), int(it["node"]), list(it["target"]))
            for it in raw_items
        ]
    except (KeyError, TypeError, ValueError) as e:
        raise WlUnfoldingError(f"élément de jeu de données mal formé : {e}") from e
    return corpus, items


def _resolve(corpus: Corpus, graph_id: int) -> Graph:
    for gid, g in corpus:
        if gid == graph_id:
            return g
    raise WlUnfoldingError(f"graph_id inconnu : {graph_id}")


def cmd_gnn_construct(args: argparse.Namespace) -> int:
    corpus, raw = _dataset_items(_require_input(args))
    if raw:
        items = [
            DatasetItem(_resolve(corpus, gid), node, tuple(Fraction(x) for x in target))
            for gid, node, target in raw
        ]
    else:
        # cibles générées, profondeur commune à tous les graphes
        depth = args.depth
        if depth is None:
            depth = max((diameter(g) for _, g in corpus), default=0) + 1
        items = [
            item
            for gid, g in corpus
            for item in gen_equivalence_respecting_targets(g, args.seed + gid, depth)
        ]
    program = construct_gnn(items)
    write_text(program_to_json(program), args.output)
    return EXIT_OK


def cmd_gnn_eval(args: argparse.Namespace) -> int:
    if args.program is None:
        raise WlUnfoldingError("--program est requis")
    program = program_from_json(read_text(args.program))
    corpus = load_corpus(_require_input(args), exact=program.quantizer is None)
    rows = []
    for gid, g in corpus:
        for v in range(g.node_count):
            out = evaluate(program, g, v)
            output = " ".join(str(x) for x in out)
            rows.append({"graph_id": gid, "node": v, "output": output})
    _emit(args, rows, rows, ["graph_id", "node", "output"])
    return EXIT_OK


def _numeric_config(
    args: argparse.Namespace, input_dim: int, output_dim: int = 1
) -> NumericConfig:
    return NumericConfig(
        input_dim=input_dim,
        output_dim=output_dim,
        feature_dim=args.feature_dim,
        layers=args.layers,
        aggregate=args.aggregate,
        activation=args.activation,
        combine_hidden=args.hidden,
        readout_hidden=args.hidden,
    )


def cmd_gnn_train(args: argparse.Namespace) -> int:
    corpus, raw = _dataset_items(_require_input(args), exact=False)
    numeric = {gid: to_numeric(g) for gid, g in corpus}
    ds: list[NumericItem] = [
        (numeric[gid], node, tuple(float(Fraction(x)) for x in target))
        for gid, node, target in raw
    ]
    if not ds:
        raise WlUnfoldingError("le jeu de données d'entraînement est vide")
    cfg = _numeric_config(args, ds[0][0].label_dim, len(ds[0][2]))
    hyper = TrainConfig(
        lr=args.lr,
        steps=args.max_steps if args.max_steps is not None else 1000,
        seed=args.seed,
        optimizer=args.optimizer,
        tol=args.tol,
    )
    params, history = train(ds, cfg, hyper)
    if args.format == "csv":
        rows = [{"step": t, "mse": loss} for t, loss in enumerate(history)]
        _emit(args, None, rows, ["step", "mse"])
    else:
        write_text(params_to_json(params, cfg), args.output)
    return EXIT_OK


def cmd_gnn_perturb(args: argparse.Namespace) -> int:
    g = _first_graph(args, exact=False)
    if args.params is not None:
        params, cfg = params_from_json(read_text(args.params))
    else:
        cfg = _numeric_config(args, g.label_dim or 1)
        params = init_params(cfg, args.seed)
    report = perturb_experiment(
        g, params, cfg, args.eta, args.trials, args.seed, offset_mode=args.offset_mode
    )
    rows = perturb_report_rows(report)
    _emit(args, perturb_report_to_json(report), rows, PERTURB_COLUMNS)
    return EXIT_OK if report.ok else EXIT_FAILURE


def cmd_suite(args: argparse.Namespace) -> int:
    checks = args.checks.split(",") if args.checks else None
    report = run_suite(_corpus_spec(args), checks, args.mutant, args.trials)
    rows = suite_report_rows(report)
    _emit(args, suite_report_to_json(report), rows, SUITE_COLUMNS)
    if args.failures is not None:
        write_rows_to_csv(failure_rows(report), args.failures, FAILURE_COLUMNS)
    return EXIT_OK if report.ok else EXIT_FAILURE


# ---------------------------------------------------------------------------
# analyseur
# ---------------------------------------------------------------------------


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--input", help="fichier JSON d'entrée (graphe, corpus ou jeu de données)"
    )
    common.add_argument(
        "--output", help="fichier de sortie (sortie standard par défaut)"
    )
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--depth", type=int, default=None)
    common.add_argument("--max-steps", type=int, default=None)
    return common


def _add_corpus_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--generator", choices=GENERATORS, default="random")
    parser.add_argument("--size", type=int, default=10)
    parser.add_argument("--count", type=int, default=CorpusSpec().count)
    parser.add_argument("--edge-prob", type=float, default=0.3)
    parser.add_argument("--degree", type=int, default=2)
    parser.add_argument("--alphabet", type=int, default=3)


def _add_numeric_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--feature-dim", type=int, default=8)
    parser.add_argument("--layers", type=int, default=4)
    parser.add_argument("--hidden", type=int, default=16)
    parser.add_argument("--aggregate", choices=AGGREGATES, default="sum")
    parser.add_argument("--activation", choices=ACTIVATIONS, default="tanh")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="wl-unfolding",
        description="Test 1-WL, arbres de dépliage et GNN : vérifications sur corpus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(
        name: str, handler: Callable[[argparse.Namespace], int], help_text: str
    ) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = add("gen", cmd_gen, "générer un corpus de graphes")
    _add_corpus_options(p)
    p.add_argument(
        "--marking", choices=MARKINGS, default=None, help="un seul cycle marqué"
    )

    add("wl", cmd_wl, "trace du test 1-WL")

    p = add("unfold", cmd_unfold, "arbre de dépliage d'un nœud")
    p.add_argument("--node", type=int, required=True)

    p = add("equiv-nodes", cmd_equiv_nodes, "équivalence de deux nœuds")
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)

    p = add("equiv-graphs", cmd_equiv_graphs, "équivalence de deux graphes")
    p.add_argument("--other", help="second graphe (sinon les deux premiers du corpus)")

    p = add("converge-report", cmd_converge_report, "rapport WL / dépliage par graphe")
    _add_corpus_options(p)

    add("gnn-construct", cmd_gnn_construct, "construire le GNN exact")

    p = add("gnn-eval", cmd_gnn_eval, "évaluer un GNN exact")
    p.add_argument("--program", help="programme JSON produit par gnn-construct")

    p = add("gnn-train", cmd_gnn_train, "entraîner le GNN numérique")
    _add_numeric_options(p)
    p.add_argument("--lr", type=float, default=0.01)
    p.add_argument("--optimizer", choices=OPTIMIZERS, default="gd")
    p.add_argument("--tol", type=float, default=0.0)

    p = add("gnn-perturb", cmd_gnn_perturb, "expérience de perturbation")
    _add_numeric_options(p)
    p.add_argument("--params", help="paramètres JSON produits par gnn-train")
    p.add_argument("--eta", type=float, default=1e-3)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--offset-mode", choices=OFFSET_MODES, default="uniform")

    p = add("suite", cmd_suite, "suite de propriétés sur un corpus")
    _add_corpus_options(p)
    p.add_argument(
        "--checks", help=f"liste séparée par des virgules parmi {','.join(CHECKS)}"
    )
    p.add_argument("--mutant", choices=sorted(MUTANTS), default=None)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--failures", help="fichier CSV des échecs")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """
    Point d'entrée : analyse les arguments et exécute la sous-commande.

    :param argv: Arguments (``sys.argv[1:]`` par défaut).
    :type argv: Sequence[str] | None

    :return: Code de sortie 0, 1 ou 2.
    :rtype: int
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse sort avec 0 pour --help, 2 pour une erreur d'usage
        return int(e.code or 0)

    try:
        return int(args.handler(args))
    except (WlUnfoldingError, OSError, json.JSONDecodeError) as e:
        logger.error(f"❌ {args.command} : {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
