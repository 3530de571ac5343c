"""Exceptions de la bibliothèque."""


class WlUnfoldingError(Exception):
    """Racine de toutes les erreurs levées par la bibliothèque."""


class GraphFormatError(WlUnfoldingError, ValueError):
    """Document graphe invalide (JSON, arête dupliquée, dimension d'étiquette)."""


class NodeIdError(WlUnfoldingError, IndexError):
    """Identifiant de nœud hors de l'intervalle 0..n-1."""


class QuantizeBoundError(WlUnfoldingError, ValueError):
    """Une composante d'étiquette dépasse la borne du quantificateur."""


class TreeDecodeError(WlUnfoldingError, ValueError):
    """Code d'arbre mal formé."""


class AttachError(WlUnfoldingError, ValueError):
    """ATTACH appelé sur un arbre agrégé dont la racine n'est pas VOID."""


class InvalidTargetError(WlUnfoldingError, ValueError):
    """La cible ne préserve pas l'équivalence par dépliage."""

    def __init__(self, message: str, violation: object = None) -> None:
        super().__init__(message)
        self.violation = violation


class DimensionMismatchError(WlUnfoldingError, ValueError):
    """Dimensions incohérentes (étiquettes, paramètres, cibles)."""


class ConfigError(WlUnfoldingError, ValueError):
    """Configuration ou arguments de générateur invalides."""


class DivergenceError(WlUnfoldingError, ArithmeticError):
    """L'entraînement a divergé (mse NaN)."""
