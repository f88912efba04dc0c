"""Permutable reducibility: grouping extraction, reducibility search, decomposition trees."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import (
    QPredicate,
    QTable,
    RetractSpec,
    SuperpositionSpec,
    invert,
    retract,
    superpose,
    superpose_predicate,
)
from .errors import ConsistencyError, StructureError
from .isotopy import IsotopyMap, apply


@dataclass(frozen=True)
class GroupingDecomposition:
    """``M<z> <=> outer<..., inner(z[group]) at slot, ...>``.

    The outer predicate's coordinates are the positions outside ``group`` plus
    the slot, which sits where ``min(group)`` was. ``positions[c]`` is the
    original position behind outer coordinate ``c`` (``min(group)`` for the slot).
    """

    group: tuple
    inner: QTable
    outer: QPredicate
    positions: tuple
    pivot: int

    @property
    def slot(self) -> int:
        return self.positions.index(self.group[0])

    def groups(self) -> list[tuple]:
        return [self.group if c == self.slot else (p,) for c, p in enumerate(self.positions)]

    def reconstruct(self) -> QPredicate:
        s = self.outer.order
        inners = [self.inner if c == self.slot else QTable.identity(s) for c in range(self.outer.arity)]
        return superpose_predicate(self.outer, self.groups(), inners)


def candidate_groups(arity: int, positions: Iterable[int] | None = None) -> Iterator[tuple]:
    """Subsets of size 2..arity-2 by size, then lexicographically."""
    pool = list(range(arity)) if positions is None else list(positions)
    for size in range(2, arity - 1):
        yield from itertools.combinations(pool, size)


def try_group(M: QPredicate, group: Sequence[int]) -> GroupingDecomposition | None:
    """Split off ``group`` as an inner quasigroup, or return None if impossible.

    The inner is read off at the smallest outside position with every other
    outside position fixed to 0; the outer through the representative
    ``(a, 0, ..., 0)`` of each inner value. Success is verified on every member
    of ``M``: the candidate superposition is itself a quasigroup predicate of
    the same size, so containing ``M`` means equalling it.
    """
    n = M.arity
    A = tuple(sorted(int(p) for p in group))
    if len(set(A)) != len(A) or not all(0 <= p < n for p in A):
        raise StructureError(f"bad group {group} for arity {n}")
    if not 2 <= len(A) <= n - 2:
        raise StructureError(f"group size must lie in 2..{n - 2}, got {len(A)}")
    B = tuple(p for p in range(n) if p not in A)
    pivot = B[0]
    inner_pred = retract(M, RetractSpec(A + (pivot,), {p: 0 for p in B[1:]}))
    inner = inner_pred.table
    # slot coordinate reuses min(A); its value is the inner value of (a, 0, ..., 0)
    kept = tuple(sorted(B + (A[0],)))
    section = retract(M, RetractSpec(kept, {p: 0 for p in A[1:]}))
    first_col = inner.cube[(slice(None),) + (0,) * (len(A) - 1)]
    maps = [tuple(range(M.order))] * len(kept)
    slot = kept.index(A[0])
    maps[slot] = tuple(int(v) for v in first_col)
    outer = apply(section, IsotopyMap(tuple(maps)))

    words = M.codewords
    u = inner.evaluate(words[:, list(A)])
    image = np.stack([u if p == A[0] else words[:, p] for p in kept], axis=1)
    if not outer.contains_many(image).all():
        return None
    return GroupingDecomposition(A, inner, outer, kept, pivot)


@dataclass(frozen=True)
class Reducibility:
    reducible: bool
    witness: GroupingDecomposition | None = None

    def __bool__(self):
        return self.reducible


def is_reducible(M: QPredicate) -> Reducibility:
    """First separable group in canonical order, if any."""
    for A in candidate_groups(M.arity):
        dec = try_group(M, A)
        if dec is not None:
            return Reducibility(True, dec)
    return Reducibility(False)


@dataclass(frozen=True)
class DecompositionTree:
    """Function-level decomposition ``outer(child_0(z[g_0]), ...)``.

    Each ``outer`` is irreducible. A ``None`` child marks a plain variable and
    only occurs for singleton groups; a node without children is a leaf.
    """

    outer: QTable
    groups: tuple
    children: tuple

    @property
    def arity(self) -> int:
        return sum(len(g) for g in self.groups)

    @property
    def order(self) -> int:
        return self.outer.order

    @property
    def is_leaf(self) -> bool:
        return all(c is None for c in self.children)

    def evaluate(self) -> QTable:
        if self.is_leaf and self.groups == tuple((i,) for i in range(self.outer.arity)):
            return self.outer
        inners = [QTable.identity(self.order) if c is None else c.evaluate() for c in self.children]
        return superpose(SuperpositionSpec(self.outer, self.groups, inners))

    def factors(self) -> Iterator[QTable]:
        """Every irreducible outer table, preorder."""
        yield self.outer
        for c in self.children:
            if c is not None:
                yield from c.factors()

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children if c is not None), default=0)

    @classmethod
    def leaf(cls, table: QTable) -> DecompositionTree:
        return cls(table, tuple((i,) for i in range(table.arity)), (None,) * table.arity)


def decomposition_tree(M: QPredicate) -> DecompositionTree:
    """Greedy recursive decomposition of the table of ``M`` (output last)."""
    return _build(M.table)


def _build(f: QTable) -> DecompositionTree:
    m = f.arity
    if m < 3:
        return DecompositionTree.leaf(f)
    pred = f.to_predicate()
    # groups inside the inputs suffice: a group and its complement split together
    for A in candidate_groups(m + 1, range(m)):
        dec = try_group(pred, A)
        if dec is not None:
            break
    else:
        return DecompositionTree.leaf(f)
    outer_fn = dec.outer.table
    argmap = {c: dec.positions[c] for c in range(outer_fn.arity) if c != dec.slot}
    return _substitute(_build(outer_fn), dec.slot, _build(dec.inner), dec.group, argmap)


def _substitute(T: DecompositionTree, slot: int, S: DecompositionTree, slot_args: tuple, argmap: dict) -> DecompositionTree:
    """Plug ``S`` into argument ``slot`` of ``T``; other arguments are renamed by ``argmap``."""
    groups, children = [], []
    for g, child in zip(T.groups, T.children):
        if slot not in g:
            groups.append(tuple(argmap[c] for c in g))
            children.append(child)
        elif child is None:
            groups.append(tuple(slot_args))
            children.append(S)
        else:
            local = g.index(slot)
            width = len(slot_args)
            new_group = tuple(argmap[c] for c in g[:local]) + tuple(slot_args) + tuple(argmap[c] for c in g[local + 1:])
            child_map = {c: (c if c < local else c + width - 1) for c in range(len(g)) if c != local}
            groups.append(new_group)
            children.append(_substitute(child, local, S, tuple(range(local, local + width)), child_map))
    return DecompositionTree(T.outer, tuple(groups), tuple(children))


@dataclass(frozen=True)
class Normalization:
    c0: QTable
    b0: QTable
    a: QTable


def lemma3_normalize(c: QTable, b: QTable) -> Normalization:
    """Restrictions of ``f(al, be, ga) = c(b(al, be), ga)`` to zero blocks.

    Returns ``c0(al, ga) = f(al, 0, ga)``, ``b0(al, be) = f(al, be, 0)`` and
    ``a(al) = f(al, 0, 0)``, after checking ``f == c0(a^-1(b0(al, be)), ga)``
    at every point.
    """
    if c.arity < 1 or b.arity < 1:
        raise StructureError("both tables need arity at least 1")
    if c.order != b.order:
        raise StructureError("order mismatch")
    s, k, l = c.order, c.arity, b.arity
    ident = QTable.identity(s)
    f = superpose(SuperpositionSpec(c, [tuple(range(l))] + [(l + i,) for i in range(k - 1)], [b] + [ident] * (k - 1)))
    cube = f.cube
    zeros_b = (0,) * (l - 1)
    zeros_c = (0,) * (k - 1)
    c0 = QTable(s, k, cube[(slice(None),) + zeros_b].ravel())
    b0 = QTable(s, l, cube[(Ellipsis,) + zeros_c].ravel())
    a = QTable(s, 1, cube[(slice(None),) + zeros_b + zeros_c].ravel())
    a_inv = invert(a, 0)
    inner = QTable(s, l, a_inv.values[b0.values])
    rebuilt = superpose(SuperpositionSpec(c0, [tuple(range(l))] + [(l + i,) for i in range(k - 1)], [inner] + [ident] * (k - 1)))
    if rebuilt != f:
        bad = int(np.argmax(rebuilt.values != f.values))
        raise ConsistencyError(f"normalization identity fails at flat index {bad}")
    return Normalization(c0, b0, a)


def lemma4_agreement(C: QPredicate, C_alt: QPredicate, b: QTable, b_alt: QTable) -> bool:
    """Whether ``C<b(al, be), ga, de>`` and its counterpart agree everywhere.

    Only the two slices ``be = 0`` and ``ga = 0`` are compared; when both
    agree, agreement everywhere is then asserted, and ConsistencyError is
    raised if it fails.
    """
    if C.arity != C_alt.arity or b.arity != b_alt.arity:
        raise StructureError("arity mismatch")
    if C.arity < 2 or b.arity < 1:
        raise StructureError("need a predicate of arity >= 2 and an inner of arity >= 1")
    l, k = b.arity, C.arity - 1
    full = _plug(C, b)
    full_alt = _plug(C_alt, b_alt)
    n = l + k
    for fixed in (range(1, l), range(l, l + k - 1)):
        fixed = list(fixed)
        if not fixed:
            if full != full_alt:
                return False
            continue
        spec = RetractSpec([p for p in range(n) if p not in fixed], {p: 0 for p in fixed})
        if retract(full, spec) != retract(full_alt, spec):
            return False
    if full != full_alt:
        raise ConsistencyError("slices agree but the full relations differ")
    return True


def _plug(C: QPredicate, b: QTable) -> QPredicate:
    l, k = b.arity, C.arity - 1
    groups = [tuple(range(l))] + [(l + i,) for i in range(k)]
    return superpose_predicate(C, groups, [b] + [QTable.identity(C.order)] * k)


def mismatches(p1: QPredicate, p2: QPredicate) -> int:
    """Number of tuples of ``order**arity`` on which membership differs."""
    return int(np.count_nonzero(p1.member_mask() != p2.member_mask()))

