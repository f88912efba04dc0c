"""Seeded instance generators: group tables, random quasigroups, planted superpositions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import QPredicate, QTable, SuperpositionSpec, all_words, superpose, superpose_predicate
from .decompose import is_reducible


class SearchExhausted(RuntimeError):
    pass


def cyclic_table(order: int, arity: int, shift: int = 0) -> QTable:
    """``x_0 + ... + x_{arity-1} + shift (mod order)``."""
    words = all_words(order, arity)
    return QTable(order, arity, (words.sum(axis=1) + shift) % order)


def random_permutation(order: int, rng: np.random.Generator) -> np.ndarray:
    return rng.permutation(order)


def random_isotope(table: QTable, rng: np.random.Generator) -> QTable:
    """Independent random relabelling of every argument and of the value."""
    s, m = table.order, table.arity
    arg_perms = [rng.permutation(s) for _ in range(m)]
    out = rng.permutation(s)
    cube = table.cube
    for p, perm in enumerate(arg_perms):
        cube = np.take(cube, perm, axis=p)
    return QTable(s, m, out[cube.ravel()])


def _latin_fill(order: int, arity: int, rng: np.random.Generator, max_nodes: int) -> np.ndarray | None:
    # cells in lexicographic order; used[p][c] is the symbol mask of the line of c along p
    total = order**arity
    strides = [order ** (arity - 1 - p) for p in range(arity)]
    bases = [[c - ((c // st) % order) * st for c in range(total)] for st in strides]
    used = [[0] * total for _ in range(arity)]
    values = [-1] * total
    frames: list[list] = []
    cell = 0
    nodes = 0
    while cell < total:
        if len(frames) == cell:
            mask = 0
            for p in range(arity):
                mask |= used[p][bases[p][cell]]
            allowed = [v for v in range(order) if not mask >> v & 1]
            rng.shuffle(allowed)
            frames.append([allowed, 0])
        frame = frames[-1]
        if frame[1] < len(frame[0]):
            v = frame[0][frame[1]]
            frame[1] += 1
            values[cell] = v
            for p in range(arity):
                used[p][bases[p][cell]] |= 1 << v
            cell += 1
            nodes += 1
            if nodes > max_nodes:
                return None
        else:
            frames.pop()
            cell -= 1
            if cell < 0:
                return None
            v = values[cell]
            for p in range(arity):
                used[p][bases[p][cell]] &= ~(1 << v)
            values[cell] = -1
    return np.array(values)


def random_quasigroup(order: int, arity: int, rng: np.random.Generator, max_nodes: int = 100_000) -> QTable:
    """A random ``arity``-ary quasigroup (not uniformly distributed).

    Small tables are filled cell by cell with randomized backtracking; larger
    ones are random isotopes of a random binary operation applied to a smaller
    random quasigroup.
    """
    if arity == 0:
        return QTable(order, 0, [int(rng.integers(order))])
    if arity == 1:
        return QTable(order, 1, rng.permutation(order))
    if order**arity <= 256:
        for _ in range(100):
            values = _latin_fill(order, arity, rng, max_nodes)
            if values is not None:
                return QTable(order, arity, values)
        raise SearchExhausted("Latin hypercube fill kept dead-ending")
    head = random_quasigroup(order, arity - 1, rng, max_nodes)
    glue = random_quasigroup(order, 2, rng, max_nodes)
    spec = SuperpositionSpec(glue, [tuple(range(arity - 1)), (arity - 1,)], [head, QTable.identity(order)])
    return random_isotope(superpose(spec), rng)


def random_irreducible(order: int, arity: int, rng: np.random.Generator, budget: int = 2000) -> QTable:
    """Random quasigroups until one is irreducible; SearchExhausted after ``budget`` tries."""
    for _ in range(budget):
        q = random_quasigroup(order, arity, rng)
        if not is_reducible(q.to_predicate()):
            return q
    raise SearchExhausted(f"no irreducible {arity}-ary quasigroup of order {order} in {budget} candidates")


@dataclass(frozen=True)
class Planted:
    """A predicate built as ``outer<inners[t](z[groups[t]])>`` with known ground truth."""

    predicate: QPredicate
    outer: QPredicate
    groups: tuple
    inners: tuple


def plant(outer: QPredicate, groups, inners) -> Planted:
    groups = tuple(tuple(int(p) for p in g) for g in groups)
    return Planted(superpose_predicate(outer, groups, inners), outer, groups, tuple(inners))


def random_planted(order: int, arity: int, rng: np.random.Generator, n_groups: int | None = None) -> Planted:
    """Random outer predicate of ``n_groups`` coordinates over a random partition of ``arity`` positions.

    ``n_groups`` defaults to a random value in ``3..arity-1``, so at least one
    group has two or more positions and none has more than ``arity - 2``.
    """
    if arity < 4:
        raise ValueError("planted instances need predicate arity >= 4")
    if n_groups is None:
        n_groups = int(rng.integers(3, arity))
    if not 3 <= n_groups < arity:
        raise ValueError(f"n_groups must lie in 3..{arity - 1}")
    labels = np.concatenate([np.arange(n_groups), rng.integers(0, n_groups, arity - n_groups)])
    rng.shuffle(labels)
    groups = [tuple(int(p) for p in np.flatnonzero(labels == t)) for t in range(n_groups)]
    outer = random_quasigroup(order, n_groups - 1, rng).to_predicate()
    inners = [random_quasigroup(order, len(g), rng) for g in groups]
    return plant(outer, groups, inners)


def seven_instance(K: QTable, rng: np.random.Generator) -> Planted:
    """``M<x1..x4, y1..y3> <=> K<q1(x1, y1, y2), q2(x2, y3), x3, x4>``.

    ``K`` is a ternary quasigroup (predicate arity 4); ``q1`` and ``q2`` are
    random ternary and binary quasigroups of the same order.
    """
    if K.arity != 3:
        raise ValueError("K must be ternary")
    s = K.order
    q1 = random_quasigroup(s, 3, rng)
    q2 = random_quasigroup(s, 2, rng)
    ident = QTable.identity(s)
    return plant(K.to_predicate(), [(0, 4, 5), (1, 6), (2,), (3,)], [q1, q2, ident, ident])
