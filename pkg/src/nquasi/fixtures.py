"""Bundled example tables.

``irreducible4`` is a 4-ary quasigroup of order 4 that is irreducible while
all of its ternary retracts are reducible. Its published layout is four lines
of four blocks of four 4-digit words; the value at ``(x1, x2, x3, x4)`` is
digit ``x4`` of word ``x3`` of block ``x2`` of line ``x1``, which is plain
lexicographic order. That reading passes the Latin check.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .core import QTable, validate
from .errors import ConsistencyError
from .io import parse_qtable

PRINTED_LAYOUT = """\
0123 1032 2310 3201  1032 0123 3201 2310  2301 3210 1023 0132  3210 2301 0132 1023
1032 0123 3201 2310  0123 1032 2310 3201  3210 2301 0132 1023  2301 3210 1023 0132
2310 3201 0123 1032  3201 2310 1032 0123  0132 1023 3210 2301  1023 0132 2301 3210
3201 2310 1032 0123  2310 3201 0123 1032  1023 0132 2301 3210  0132 1023 3210 2301
"""

# sha256 of the 256 values as bytes, lexicographic order
IRREDUCIBLE4_SHA256 = "97756fb236aa5a78a3b72c405d38dae2e7fb53a9b5b8e7c7580fc4e295445086"


@dataclass(frozen=True)
class Fixture:
    name: str
    table: QTable
    provenance: str


def parse_printed_layout(text: str, order: int = 4, arity: int = 4) -> QTable:
    digits = [int(c) for c in text if c.isdigit()]
    return QTable(order, arity, np.array(digits))


def digest(table: QTable) -> str:
    return hashlib.sha256(table.values.tobytes()).hexdigest()


def irreducible4() -> Fixture:
    text = resources.files("nquasi").joinpath("data/irreducible4.qtable").read_text()
    table = parse_qtable(text)
    if digest(table) != IRREDUCIBLE4_SHA256:
        raise ConsistencyError("bundled irreducible4 table does not match its checksum")
    if table != parse_printed_layout(PRINTED_LAYOUT) or not validate(table):
        raise ConsistencyError("bundled irreducible4 table disagrees with the printed layout")
    return Fixture(
        "irreducible4",
        table,
        "printed example of an irreducible 4-ary quasigroup of order 4 with all ternary retracts reducible",
    )


FIXTURES = {"irreducible4": irreducible4}
