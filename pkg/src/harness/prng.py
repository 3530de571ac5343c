"""
Générateur pseudo-aléatoire SplitMix64.

État 64 bits ; chaque tirage ajoute ``0x9E3779B97F4A7C15`` à l'état puis
mélange le résultat :

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z = z ^ (z >> 31)

(toutes les opérations modulo 2^64). Les corpus ne dépendent que de ces
constantes, indépendamment de la version de Python ou de numpy.
"""

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_1 = 0xBF58476D1CE4E5B9
MIX_2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """
    Fonction de mélange de SplitMix64 (bijective sur 64 bits).

    >>> hex(mix64(GOLDEN_GAMMA))
    '0xe220a8397b1dcdaf'
    """
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_2) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def random(self) -> float:
        """Flottant uniforme dans ``[0, 1)`` (53 bits de poids fort)."""
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        """Entier uniforme dans ``[0, n)`` par multiplication 64 x 64 -> 128 bits."""
        if n <= 0:
            raise ValueError("n doit être > 0")
        return (self.next_u64() * n) >> 64

    def shuffle(self, items: list[int]) -> None:
        # Fisher-Yates
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
