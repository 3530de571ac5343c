from hypothesis import strategies as st

from src.graph.graph import Graph, make_graph


@st.composite
def graphs(
    draw: st.DrawFn,
    min_nodes: int = 1,
    max_nodes: int = 8,
    alphabet: int = 3,
    self_loops: bool = False,
) -> Graph:
    """Graphes simples étiquetés en mode exact (étiquettes de dimension 1)."""
    n = draw(st.integers(min_value=min_nodes, max_value=max_nodes))
    labels = draw(
        st.lists(
            st.integers(min_value=0, max_value=alphabet - 1), min_size=n, max_size=n
        )
    )
    pairs = [
        (u, v) for u in range(n) for v in range(u if self_loops else u + 1, n)
    ]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return make_graph([[x] for x in labels], chosen)


@st.composite
def permutations_of(draw: st.DrawFn, n: int) -> list[int]:
    return draw(st.permutations(list(range(n))))


@st.composite
def connected_graphs(
    draw: st.DrawFn, max_nodes: int = 8, alphabet: int = 3
) -> Graph:
    """Arbre couvrant aléatoire complété par des arêtes supplémentaires."""
    n = draw(st.integers(min_value=1, max_value=max_nodes))
    labels = draw(
        st.lists(
            st.integers(min_value=0, max_value=alphabet - 1), min_size=n, max_size=n
        )
    )
    tree = {(draw(st.integers(min_value=0, max_value=v - 1)), v) for v in range(1, n)}
    others = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in tree]
    extra = draw(st.lists(st.sampled_from(others), unique=True)) if others else []
    return make_graph([[x] for x in labels], sorted(tree) + extra)
