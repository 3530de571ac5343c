"""
Codage canonique injectif des arbres de dépliage en entiers.

Un arbre est sérialisé récursivement en une suite d'entiers naturels :
l'étiquette (``0`` pour VOID, sinon la dimension ``L`` suivie des ``L``
composantes en zigzag), le nombre d'enfants, puis la sérialisation de chaque
enfant dans l'ordre croissant de leurs codes. Chaque naturel est écrit en
varint LEB128 (code préfixe), et la suite d'octets, précédée de l'octet
sentinelle ``0x01``, est lue comme un entier big-endian.

Le code d'un enfant se compare en comparant ``(longueur, octets)`` de sa
sérialisation, ce qui évite de construire les grands entiers intermédiaires.
"""

from typing import Any

from beartype import beartype

from ..bin.errors import GraphFormatError, TreeDecodeError
from .tree import VOID, RootLabel, UnfoldingTree

TreeCode = int

_SENTINEL = b"\x01"


def _zigzag(n: int) -> int:
    return 2 * n if n >= 0 else -2 * n - 1


def _unzigzag(z: int) -> int:
    return z // 2 if z % 2 == 0 else -(z + 1) // 2


def _write_varint(out: bytearray, n: int) -> None:
    while True:
        byte = n & 0x7F
        n >>= 7
        if n:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def _read_varint(raw: bytes, pos: int) -> tuple[int, int]:
    value, shift, start = 0, 0, pos
    while True:
        if pos >= len(raw):
            raise TreeDecodeError("code tronqué")
        byte = raw[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        shift += 7
        if not byte & 0x80:
            # encodage minimal uniquement
            if byte == 0 and pos - start > 1:
                raise TreeDecodeError("varint non minimal")
            return value, pos


def _label_bytes(out: bytearray, label: RootLabel) -> None:
    if label is VOID:
        _write_varint(out, 0)
        return
    _write_varint(out, len(label))
    for entry in label:
        if isinstance(entry, bool) or not isinstance(entry, int):
            raise GraphFormatError("le codage canonique exige des étiquettes entières")
        _write_varint(out, _zigzag(entry))


def _sort_key(serialized: bytes) -> tuple[int, bytes]:
    return (len(serialized), serialized)


def _serialize(t: UnfoldingTree, memo: dict[int, bytes]) -> bytes:
    key = id(t)
    cached = memo.get(key)
    if cached is not None:
        return cached
    kids = sorted((_serialize(c, memo) for c in t.children), key=_sort_key)
    out = bytearray()
    _label_bytes(out, t.label)
    _write_varint(out, len(kids))
    for k in kids:
        out += k
    result = bytes(out)
    memo[key] = result
    return result


@beartype
def canonical_code(t: UnfoldingTree) -> TreeCode:
    """
    Code canonique de ``t`` : deux arbres ont le même code si et seulement si
    ils sont isomorphes (étiquettes comprises, enfants en multi-ensemble).

    >>> from src.unfolding.tree import leaf
    >>> a = UnfoldingTree((0,), (leaf((1,)), leaf((2,))))
    >>> b = UnfoldingTree((0,), (leaf((2,)), leaf((1,))))
    >>> canonical_code(a) == canonical_code(b)
    True
    """
    return int.from_bytes(_SENTINEL + _serialize(t, {}), "big")


encode_tree = canonical_code


def _parse(raw: bytes, pos: int) -> tuple[UnfoldingTree, bytes, int]:
    start = pos
    tag, pos = _read_varint(raw, pos)
    label: RootLabel
    if tag == 0:
        label = VOID
    else:
        entries = []
        for _ in range(tag):
            z, pos = _read_varint(raw, pos)
            entries.append(_unzigzag(z))
        label = tuple(entries)
    count, pos = _read_varint(raw, pos)
    kids: list[UnfoldingTree] = []
    previous: bytes | None = None
    for _ in range(count):
        child, child_raw, pos = _parse(raw, pos)
        if previous is not None and _sort_key(child_raw) < _sort_key(previous):
            raise TreeDecodeError("enfants hors de l'ordre canonique")
        previous = child_raw
        kids.append(child)
    return UnfoldingTree(label, tuple(kids)), raw[start:pos], pos


@beartype
def decode_tree(code: TreeCode) -> UnfoldingTree:
    """
    Inverse de :func:`encode_tree` : renvoie la forme canonique de l'arbre.

    :param code: Code produit par :func:`encode_tree`.
    :type code: int

    :return: Arbre canonique (enfants triés par code croissant).
    :rtype: UnfoldingTree

    :raises TreeDecodeError: Si le code est mal formé ou non canonique.
    """
    if code <= 0:
        raise TreeDecodeError("un code d'arbre est un entier strictement positif")
    raw = code.to_bytes((code.bit_length() + 7) // 8, "big")
    if raw[:1] != _SENTINEL:
        raise TreeDecodeError("octet sentinelle absent")
    tree, _, pos = _parse(raw, 1)
    if pos != len(raw):
        raise TreeDecodeError("octets superflus après l'arbre")
    return tree


@beartype
def canonical_form(t: UnfoldingTree) -> UnfoldingTree:
    """Forme canonique : enfants triés récursivement par code croissant."""
    return decode_tree(canonical_code(t))


@beartype
def tree_to_debug(t: UnfoldingTree) -> dict[str, Any]:
    """Sérialisation de débogage ``{"label": [...] | "VOID", "children": [...]}``."""

    def to_dict(node: UnfoldingTree) -> dict[str, Any]:
        label: Any = "VOID" if node.label is VOID else list(node.label)
        return {"label": label, "children": [to_dict(c) for c in node.children]}

    return to_dict(canonical_form(t))
