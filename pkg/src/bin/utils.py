import json
import os
import sys
from collections.abc import Mapping, Sequence
from typing import Any

import polars as pl

from .errors import GraphFormatError


def write_rows_to_csv(
    rows: Sequence[Mapping[str, Any]],
    file_path: str,
    columns: Sequence[str] | None = None,
) -> None:
    """
    Écrit une liste de lignes (dictionnaires) dans un fichier CSV via polars.

    Les colonnes suivent l'ordre de ``columns`` si fourni, sinon l'ordre des
    clés de la première ligne. Une liste vide produit un fichier avec le seul
    en-tête (si ``columns`` est connu).

    :param rows: Lignes à écrire.
    :type rows: Sequence[Mapping[str, Any]]

    :param file_path: Chemin du fichier de sortie.
    :type file_path: str

    :param columns: Ordre explicite des colonnes.
    :type columns: Sequence[str] | None
    """
    frame = rows_to_frame(rows, columns)
    parent = os.path.dirname(os.path.abspath(file_path))
    os.makedirs(parent, exist_ok=True)
    frame.write_csv(file_path)


def rows_to_frame(
    rows: Sequence[Mapping[str, Any]], columns: Sequence[str] | None = None
) -> pl.DataFrame:
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    data = {col: [row[col] for row in rows] for col in columns}
    return pl.DataFrame(data)


def rows_to_csv_text(
    rows: Sequence[Mapping[str, Any]], columns: Sequence[str] | None = None
) -> str:
    return rows_to_frame(rows, columns).write_csv()


def write_text(text: str, file_path: str | None) -> None:
    """Écrit ``text`` dans ``file_path`` ou sur la sortie standard si ``None``."""
    if file_path is None:
        # le CSV de polars se termine déjà par un saut de ligne
        print(text, end="" if text.endswith("\n") else "\n")
        return
    parent = os.path.dirname(os.path.abspath(file_path))
    os.makedirs(parent, exist_ok=True)
    with open(file_path, "w", encoding="utf-8") as f:
        f.write(text)


def read_text(file_path: str) -> str:
    """
    Contenu texte UTF-8 de ``file_path``.

    :raises GraphFormatError: Si le fichier n'est pas de l'UTF-8 valide.
    """
    try:
        with open(file_path, encoding="utf-8") as f:
            return f.read()
    except UnicodeDecodeError as e:
        raise GraphFormatError(f"{file_path} n'est pas encodé en UTF-8 : {e}") from e


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False)


def int_to_decimal(n: int) -> str:
    """Écriture décimale d'un entier sans la limite ``sys.int_info`` de CPython."""
    previous = sys.get_int_max_str_digits()
    sys.set_int_max_str_digits(0)
    try:
        return str(n)
    finally:
        sys.set_int_max_str_digits(previous)


def decimal_to_int(text: str) -> int:
    previous = sys.get_int_max_str_digits()
    sys.set_int_max_str_digits(0)
    try:
        return int(text)
    finally:
        sys.set_int_max_str_digits(previous)
