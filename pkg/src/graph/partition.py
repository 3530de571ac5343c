from collections.abc import Hashable, Sequence
from dataclasses import dataclass


@dataclass(frozen=True)
class Partition:
    """
    Partition des nœuds ``0..n-1`` en blocs disjoints.

    Forme normale : chaque bloc est un tuple trié, les blocs sont ordonnés par
    leur plus petit élément. Deux partitions égales ont donc la même
    représentation.
    """

    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def from_keys(cls, keys: Sequence[Hashable]) -> "Partition":
        """Regroupe les nœuds de même clé (``keys[v]`` est la clé du nœud ``v``)."""
        groups: dict[Hashable, list[int]] = {}
        for v, key in enumerate(keys):
            groups.setdefault(key, []).append(v)
        return cls(tuple(sorted(tuple(b) for b in groups.values())))

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def node_count(self) -> int:
        return sum(len(b) for b in self.blocks)

    def block_of(self, v: int) -> tuple[int, ...]:
        for block in self.blocks:
            if v in block:
                return block
        raise KeyError(v)

    def same_block(self, u: int, v: int) -> bool:
        return v in self.block_of(u)

    def refines(self, other: "Partition") -> bool:
        """Vrai si chaque bloc de ``self`` est inclus dans un bloc de ``other``."""
        owner = {v: i for i, block in enumerate(other.blocks) for v in block}
        return all(len({owner[v] for v in block}) == 1 for block in self.blocks)

    def first_difference(self, other: "Partition") -> tuple[int, int] | None:
        """
        Une paire ``(u, v)`` groupée par une partition et séparée par l'autre,
        ou ``None`` si les partitions sont égales.
        """
        if self == other:
            return None
        for a, b in ((self, other), (other, self)):
            owner = {v: i for i, block in enumerate(b.blocks) for v in block}
            for block in a.blocks:
                for v in block[1:]:
                    if owner[v] != owner[block[0]]:
                        return (block[0], v)
        return None

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]
