import math
from dataclasses import dataclass
from fractions import Fraction

from beartype import beartype

from ..bin.errors import ConfigError, QuantizeBoundError
from .graph import Graph, make_graph


@dataclass(frozen=True)
class QuantizerConfig:
    """
    Grille du quantificateur sur ``[-bound, bound]``.

    L'intervalle d'indice ``i`` est fermé, de largeur ``width``, centré en
    ``c_i = -bound + 2*i*width`` : ``[c_i - width/2, c_i + width/2]``. Deux
    intervalles voisins sont séparés par un trou ouvert de largeur ``width`` ;
    ils ne se chevauchent pas et ne sont pas contigus.
    """

    bound: float
    width: float

    def __post_init__(self) -> None:
        if not self.bound > 0 or not self.width > 0:
            raise ConfigError("bound et width doivent être strictement positifs")

    @property
    def interval_count(self) -> int:
        """
        Nombre d'intervalles qui rencontrent ``[-bound, bound]``.

        >>> QuantizerConfig(bound=1.0, width=0.5).interval_count
        3
        """
        span = 2 * Fraction(self.bound) + Fraction(self.width) / 2
        return math.floor(span / (2 * Fraction(self.width))) + 1


@beartype
def quantize_value(z: int | float, cfg: QuantizerConfig) -> int:
    """
    Indice de l'intervalle contenant ``z``.

    >>> cfg = QuantizerConfig(bound=1.0, width=0.25)
    >>> [quantize_value(z, cfg) for z in (-0.9, 0.1, 0.9)]
    [0, 2, 4]

    :raises QuantizeBoundError: ``|z| > bound`` ou ``z`` tombe dans un trou
        entre deux intervalles.
    """
    if abs(z) > cfg.bound:
        raise QuantizeBoundError(f"valeur {z} hors de la borne {cfg.bound}")
    # arithmétique exacte sur les flottants pour un découpage déterministe
    offset = Fraction(z) + Fraction(cfg.bound)
    width = Fraction(cfg.width)
    index = math.floor((offset + width / 2) / (2 * width))
    if abs(offset - 2 * index * width) > width / 2:
        raise QuantizeBoundError(f"valeur {z} entre deux intervalles de la grille")
    return index


@beartype
def quantize_labels(g: Graph, cfg: QuantizerConfig) -> Graph:
    """
    Remplace chaque composante réelle d'étiquette par l'indice de son intervalle.

    Deux valeurs d'un même intervalle reçoivent le même entier, deux
    intervalles distincts des entiers distincts. Le graphe produit est en
    mode exact.

    :param g: Graphe à étiquettes réelles (ou entières).
    :type g: Graph

    :param cfg: Grille du quantificateur.
    :type cfg: QuantizerConfig

    :return: Graphe de même structure à étiquettes entières.
    :rtype: Graph

    :raises QuantizeBoundError: Si une composante dépasse ``cfg.bound`` en
        valeur absolue ou tombe entre deux intervalles.
    """
    labels = [[quantize_value(z, cfg) for z in label] for label in g.labels]
    return make_graph(labels, sorted(g.edges), exact=True)
