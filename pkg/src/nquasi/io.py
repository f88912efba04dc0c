"""Text formats.

``qtable v1``   header ``qtable v1 order=<s> arity=<m>`` then ``s**m`` integers
                in lexicographic index order (any whitespace; written ``s`` per line).
``mdscode v1``  header ``mdscode v1 order=<s> length=<n>`` then one member
                tuple per line, sorted lexicographically.
``dtree v1``    header ``dtree v1 order=<s> arity=<m>`` then one node:

                    leaf order=<s> arity=<a> irreducible
                    <s**a values>
                  | outer order=<s> arity=<a>
                    <s**a values>
                    groups <g_1> ... <g_a>          (comma-separated positions)
                    <child_1> ... <child_a>          (``var`` or a node)

``theorem1 v1`` header ``theorem1 v1 order=<s> arity=<n> k=<k> groupmap=<j_0,...>``
                then ``relation order=<s> arity=<k>`` with the ``s**(k-1)`` values
                of the outer predicate's table, a ``groups`` line, and one
                ``table order=<s> arity=<a>`` block per group.

All positions are 0-based.
"""

from __future__ import annotations

import re
from typing import Iterator

import numpy as np

from .core import QPredicate, QTable, from_codewords
from .decompose import DecompositionTree
from .errors import ParseError, StructureError
from .isotopy import IsotopyMap
from .theorem import GroupMap, TheoremDecomposition

_HEADER = re.compile(r"^(\w+) v1((?: \w+=\S+)*)$")


def _fields(line: str, kind: str) -> dict:
    m = _HEADER.match(line.strip())
    if not m or m.group(1) != kind:
        raise ParseError(f"expected a '{kind} v1' header, got {line.strip()!r}")
    return dict(kv.split("=", 1) for kv in m.group(2).split())


def _int(fields: dict, key: str) -> int:
    try:
        return int(fields[key])
    except (KeyError, ValueError):
        raise ParseError(f"header field {key} missing or not an integer") from None


def _values_text(values: np.ndarray, per_line: int) -> str:
    vals = [str(int(v)) for v in values]
    if per_line < 1:
        per_line = max(len(vals), 1)
    return "\n".join(" ".join(vals[i:i + per_line]) for i in range(0, len(vals), per_line))


def format_qtable(table: QTable) -> str:
    body = _values_text(table.values, table.order if table.arity else 1)
    return f"qtable v1 order={table.order} arity={table.arity}\n{body}\n"


def parse_qtable(text: str) -> QTable:
    lines = text.strip().splitlines()
    if not lines:
        raise ParseError("empty input")
    f = _fields(lines[0], "qtable")
    order, arity = _int(f, "order"), _int(f, "arity")
    try:
        values = [int(tok) for tok in " ".join(lines[1:]).split()]
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    try:
        return QTable(order, arity, np.array(values, dtype=np.int64))
    except StructureError as exc:
        raise ParseError(str(exc)) from None


def format_mdscode(pred: QPredicate) -> str:
    rows = "\n".join(" ".join(map(str, w)) for w in np.asarray(pred.codewords).tolist())
    return f"mdscode v1 order={pred.order} length={pred.arity}\n{rows}\n"


def parse_mdscode(text: str, check: bool = True) -> QPredicate:
    lines = text.strip().splitlines()
    if not lines:
        raise ParseError("empty input")
    f = _fields(lines[0], "mdscode")
    order, length = _int(f, "order"), _int(f, "length")
    rows = [line.split() for line in lines[1:] if line.strip()]
    try:
        words = np.array([[int(t) for t in r] for r in rows], dtype=np.int64).reshape(-1, length)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    return from_codewords(order, words, check=check)


class _Lines:
    def __init__(self, text: str):
        self.lines = [line.strip() for line in text.strip().splitlines() if line.strip()]
        self.pos = 0

    def next(self) -> str:
        if self.pos >= len(self.lines):
            raise ParseError("unexpected end of input")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def done(self) -> bool:
        return self.pos >= len(self.lines)


def _node_lines(tree: DecompositionTree) -> Iterator[str]:
    t = tree.outer
    if tree.is_leaf and tree.groups == tuple((i,) for i in range(t.arity)):
        yield f"leaf order={t.order} arity={t.arity} irreducible"
        yield _values_text(t.values, 0)
        return
    yield f"outer order={t.order} arity={t.arity}"
    yield _values_text(t.values, 0)
    yield "groups " + " ".join(",".join(map(str, g)) for g in tree.groups)
    for child in tree.children:
        if child is None:
            yield "var"
        else:
            yield from _node_lines(child)


def format_tree(tree: DecompositionTree) -> str:
    lines = [f"dtree v1 order={tree.order} arity={tree.arity}", *_node_lines(tree)]
    return "\n".join(lines) + "\n"


def _read_table(src: _Lines, order: int, arity: int) -> QTable:
    try:
        values = [int(tok) for tok in src.next().split()]
        return QTable(order, arity, np.array(values, dtype=np.int64))
    except (ValueError, StructureError) as exc:
        raise ParseError(str(exc)) from None


def _read_groups(src: _Lines, count: int) -> tuple:
    line = src.next()
    if not line.startswith("groups"):
        raise ParseError(f"expected a groups line, got {line!r}")
    try:
        groups = tuple(tuple(int(p) for p in tok.split(",")) for tok in line.split()[1:])
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    if len(groups) != count:
        raise ParseError(f"expected {count} groups, got {len(groups)}")
    return groups


def _read_node(src: _Lines) -> DecompositionTree:
    head = src.next()
    kind = head.split()[0]
    m = re.match(r"^(leaf|outer) order=(\d+) arity=(\d+)( irreducible)?$", head)
    if not m:
        raise ParseError(f"bad node header {head!r}")
    order, arity = int(m.group(2)), int(m.group(3))
    table = _read_table(src, order, arity)
    if kind == "leaf":
        return DecompositionTree.leaf(table)
    groups = _read_groups(src, arity)
    children = []
    for g in groups:
        if src.lines[src.pos:src.pos + 1] == ["var"]:
            if len(g) != 1:
                raise ParseError(f"'var' child for group {g} of size {len(g)}")
            src.next()
            children.append(None)
        else:
            children.append(_read_node(src))
    return DecompositionTree(table, groups, tuple(children))


def parse_tree(text: str) -> DecompositionTree:
    src = _Lines(text)
    f = _fields(src.next(), "dtree")
    tree = _read_node(src)
    if not src.done():
        raise ParseError("trailing content after tree")
    if tree.order != _int(f, "order") or tree.arity != _int(f, "arity"):
        raise ParseError("header does not match the tree")
    return tree


def format_theorem(dec: TheoremDecomposition) -> str:
    K = dec.outer
    n = sum(len(g) for g in dec.groups)
    lines = [
        f"theorem1 v1 order={K.order} arity={n} k={K.arity} groupmap={dec.group_map}",
        f"relation order={K.order} arity={K.arity}",
        _values_text(K.table.values, 0),
        "groups " + " ".join(",".join(map(str, g)) for g in dec.groups),
    ]
    for q in dec.inners:
        lines.append(f"table order={q.order} arity={q.arity}")
        lines.append(_values_text(q.values, 0))
    return "\n".join(lines) + "\n"


def parse_theorem(text: str) -> TheoremDecomposition:
    """Read a theorem decomposition; the alignment witness is not stored and comes back as identity."""
    src = _Lines(text)
    f = _fields(src.next(), "theorem1")
    k = _int(f, "k")
    head = src.next()
    m = re.match(r"^relation order=(\d+) arity=(\d+)$", head)
    if not m or int(m.group(2)) != k:
        raise ParseError(f"bad relation header {head!r}")
    order = int(m.group(1))
    K = QPredicate(_read_table(src, order, k - 1))
    groups = _read_groups(src, k)
    inners = []
    for g in groups:
        m = re.match(r"^table order=(\d+) arity=(\d+)$", src.next())
        if not m or int(m.group(2)) != len(g):
            raise ParseError(f"bad inner table header for group {g}")
        inners.append(_read_table(src, order, len(g)))
    try:
        j = tuple(int(v) for v in f.get("groupmap", "").split(",") if v != "")
    except ValueError:
        raise ParseError("bad groupmap") from None
    return TheoremDecomposition(K, tuple(inners), groups, GroupMap(j, k), IsotopyMap.identity(order, k))


def read_predicate(text: str, fmt: str = "auto") -> QPredicate:
    """Parse either format into a predicate (a ``qtable`` is read as its graph)."""
    if fmt == "auto":
        first = text.lstrip().split(None, 1)[0] if text.strip() else ""
        fmt = first if first in ("qtable", "mdscode") else "qtable"
    if fmt == "qtable":
        return QPredicate(parse_qtable(text))
    if fmt == "mdscode":
        return parse_mdscode(text, check=False)
    raise ParseError(f"unknown format {fmt}")
