"""
Variantes volontairement fausses, utilisées pour vérifier que la suite de
propriétés échoue quand un invariant est cassé.
"""

from collections.abc import Hashable, Sequence
from dataclasses import dataclass

from ..bin.errors import ConfigError
from ..bridge.checks import DictionaryFactory, TableFactory
from ..unfolding.equivalence import CodeTable
from ..wl.coloring import ColorDictionary


class CollidingColorDictionary(ColorDictionary):
    """HASH non injectif : deux couleurs seulement, attribuées en alternance."""

    def _assign(self, table: dict[Hashable, int], key: Hashable) -> int:
        found = table.get(key)
        if found is None:
            found = len(table) % 2
            table[key] = found
        return found


class SetChildrenCodeTable(CodeTable):
    """Enfants comparés comme un ensemble : les multiplicités sont perdues."""

    def key(self, label: Hashable, child_ids: Sequence[int]) -> Hashable:
        return (label, tuple(sorted(set(child_ids))))


@dataclass(frozen=True)
class Mutant:
    name: str
    dictionary_factory: DictionaryFactory = ColorDictionary
    table_factory: TableFactory = CodeTable


MUTANTS = {
    "colliding-hash": Mutant(
        "colliding-hash", dictionary_factory=CollidingColorDictionary
    ),
    "set-children": Mutant("set-children", table_factory=SetChildrenCodeTable),
}

REFERENCE = Mutant("none")


def get_mutant(name: str | None) -> Mutant:
    if name is None or name == "none":
        return REFERENCE
    try:
        return MUTANTS[name]
    except KeyError:
        raise ConfigError(f"mutant inconnu : {name}") from None
