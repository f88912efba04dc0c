"""Finite multary quasigroups as dense value tables and as graph predicates.

Symbols are the integers ``0..order-1``. Tables are indexed lexicographically
with the first argument most significant. Positions (arguments of a table,
coordinates of a predicate) are 0-based throughout.

A table of arity ``m`` is an ``m``-ary operation; its predicate is the
``(m+1)``-ary relation ``{(x_0, ..., x_{m-1}, q(x)) }``, which is also a
distance-2 MDS code of length ``m+1``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .errors import PredicateError, StructureError

# dense membership bitsets are only materialized up to this many tuples
BITSET_LIMIT = 2**28


def lex_weights(order: int, length: int) -> np.ndarray:
    return order ** np.arange(length - 1, -1, -1, dtype=np.int64)


def encode(words: np.ndarray, order: int) -> np.ndarray:
    """Lexicographic index of each row of ``words``."""
    words = np.asarray(words, dtype=np.int64)
    if words.shape[-1] == 0:
        return np.zeros(words.shape[:-1], dtype=np.int64)
    return words @ lex_weights(order, words.shape[-1])


def all_words(order: int, length: int) -> np.ndarray:
    """Every word of the given length, one per row, in lexicographic order."""
    if length == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.indices((order,) * length, dtype=np.int64)
    return grid.reshape(length, -1).T


@dataclass(frozen=True, eq=False)
class QTable:
    """Value array of an ``arity``-ary operation on ``range(order)``."""

    order: int
    arity: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.order < 1 or self.order > 255:
            raise StructureError(f"order must be in 1..255, got {self.order}")
        if self.arity < 0:
            raise StructureError(f"arity must be non-negative, got {self.arity}")
        raw = np.asarray(self.values).ravel()
        expected = self.order**self.arity
        if raw.size != expected:
            raise StructureError(f"expected {expected} values for order {self.order} arity {self.arity}, got {raw.size}")
        if raw.size and (raw.min() < 0 or raw.max() >= self.order):
            raise StructureError(f"values must lie in 0..{self.order - 1}")
        arr = raw.astype(np.uint8)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def cube(self) -> np.ndarray:
        return self.values.reshape((self.order,) * self.arity)

    def __call__(self, *args: int) -> int:
        if len(args) != self.arity:
            raise TypeError(f"expected {self.arity} arguments, got {len(args)}")
        return int(self.values[int(encode(np.array(args), self.order))])

    def __eq__(self, other):
        if not isinstance(other, QTable):
            return NotImplemented
        return (self.order, self.arity) == (other.order, other.arity) and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.order, self.arity, self.values.tobytes()))

    def evaluate(self, args: np.ndarray) -> np.ndarray:
        """Vectorized evaluation on an (L, arity) array of argument rows."""
        return self.values[encode(args, self.order)].astype(np.int64)

    def is_valid(self) -> bool:
        return validate(self).ok

    def to_predicate(self) -> QPredicate:
        return to_predicate(self)

    @classmethod
    def identity(cls, order: int) -> QTable:
        return cls(order, 1, np.arange(order))

    @classmethod
    def from_function(cls, order: int, arity: int, fn) -> QTable:
        values = [fn(*w) for w in itertools.product(range(order), repeat=arity)]
        return cls(order, arity, np.array(values))


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a Latin-property check.

    On failure, ``fixed`` lists the arguments of the offending line with
    ``None`` at ``position``, and ``duplicate`` is the repeated symbol.
    """

    ok: bool
    position: int | None = None
    fixed: tuple | None = None
    duplicate: int | None = None

    def __bool__(self):
        return self.ok


def validate(table: QTable) -> ValidationReport:
    """Check that every line of the table is a permutation of the symbols."""
    hit = kernels.latin_violation(table.values, table.order, table.arity)
    if hit is None:
        return ValidationReport(True)
    position, cell, symbol = hit
    coords = [int(c) for c in np.unravel_index(cell, (table.order,) * table.arity)]
    coords[position] = None
    return ValidationReport(False, position, tuple(coords), symbol)


def invert(table: QTable, place: int) -> QTable:
    """Inverse in the given argument place.

    The result ``r`` satisfies ``r(..., y at place, ...) = z`` iff
    ``table(..., z at place, ...) = y``.
    """
    if not 0 <= place < table.arity:
        raise IndexError(f"place {place} out of range for arity {table.arity}")
    solved = to_predicate(table).solve(place)
    cube = np.moveaxis(solved.cube, table.arity - 1, place)
    return QTable(table.order, table.arity, np.ascontiguousarray(cube).ravel())


@dataclass(frozen=True, eq=False)
class QPredicate:
    """Graph relation of a quasigroup, stored through its defining table.

    Coordinate ``arity - 1`` is the output of ``table``; all other
    coordinate roles are recovered with :meth:`solve`.
    """

    table: QTable

    @property
    def order(self) -> int:
        return self.table.order

    @property
    def arity(self) -> int:
        return self.table.arity + 1

    def __len__(self):
        return self.order**self.table.arity

    def __eq__(self, other):
        if not isinstance(other, QPredicate):
            return NotImplemented
        return self.table == other.table

    def __hash__(self):
        return hash(self.table)

    @cached_property
    def codewords(self) -> np.ndarray:
        """Member tuples, one per row, sorted lexicographically."""
        args = all_words(self.order, self.table.arity)
        words = np.concatenate([args, self.table.values.astype(np.int64)[:, None]], axis=1)
        words.setflags(write=False)
        return words

    def contains(self, word: Sequence[int]) -> bool:
        if len(word) != self.arity:
            raise StructureError(f"expected a tuple of length {self.arity}")
        return self.table(*word[:-1]) == word[-1]

    def contains_many(self, words: np.ndarray) -> np.ndarray:
        words = np.asarray(words, dtype=np.int64)
        return self.table.evaluate(words[:, :-1]) == words[:, -1]

    def member_mask(self) -> np.ndarray:
        """Boolean membership of every tuple of ``order**arity``, lexicographic."""
        total = self.order**self.arity
        if total > BITSET_LIMIT:
            raise MemoryError(f"{total} tuples exceed the dense bitset limit")
        mask = np.zeros(total, dtype=bool)
        mask[encode(self.codewords, self.order)] = True
        return mask

    def bitset(self) -> np.ndarray:
        """Membership packed eight tuples per byte (big-endian bit order)."""
        return np.packbits(self.member_mask())

    def solve(self, place: int) -> QTable:
        """The table giving coordinate ``place`` from the others, in their order."""
        if not 0 <= place < self.arity:
            raise IndexError(f"place {place} out of range for predicate arity {self.arity}")
        if place == self.arity - 1:
            return self.table
        words = self.codewords
        rest = np.delete(words, place, axis=1)
        values = np.empty(len(self), dtype=np.uint8)
        values[encode(rest, self.order)] = words[:, place]
        return QTable(self.order, self.table.arity, values)

    def permute(self, order: Sequence[int]) -> QPredicate:
        """Reorder coordinates: new coordinate ``i`` is old coordinate ``order[i]``."""
        if sorted(order) != list(range(self.arity)):
            raise StructureError(f"{order} is not a permutation of the coordinates")
        return from_codewords(self.order, self.codewords[:, list(order)], check=False)

    @classmethod
    def from_codewords(cls, order: int, words, check: bool = True) -> QPredicate:
        return from_codewords(order, words, check)


def from_codewords(order: int, words, check: bool = True) -> QPredicate:
    """Build a predicate from its member tuples.

    Raises PredicateError unless every line meets the set in exactly one point.
    """
    words = np.asarray(words, dtype=np.int64)
    if words.ndim != 2 or words.shape[1] < 1:
        raise StructureError("codewords must be a 2-d array with at least one column")
    n = words.shape[1] - 1
    if words.shape[0] != order**n:
        raise PredicateError(f"expected {order ** n} member tuples, got {words.shape[0]}")
    if words.size and (words.min() < 0 or words.max() >= order):
        raise StructureError(f"symbols must lie in 0..{order - 1}")
    idx = encode(words[:, :-1], order)
    if np.bincount(idx, minlength=order**n).max(initial=1) != 1:
        raise PredicateError("some line through the last coordinate misses the relation")
    values = np.empty(order**n, dtype=np.uint8)
    values[idx] = words[:, -1]
    table = QTable(order, n, values)
    if check:
        report = validate(table)
        if not report:
            raise PredicateError(f"line through position {report.position} at {report.fixed} repeats {report.duplicate}")
    return QPredicate(table)


def to_predicate(table: QTable) -> QPredicate:
    return QPredicate(table)


def from_predicate(pred: QPredicate, output_place: int) -> QTable:
    """Read the predicate as a function with output at ``output_place``."""
    return pred.solve(output_place)


def min_distance(pred: QPredicate) -> float:
    """Minimum Hamming distance between distinct members.

    Equals the smallest number of coordinates whose deletion makes the
    projection non-injective; ``inf`` when there is a single member.
    """
    words = pred.codewords
    if len(words) < 2:
        return float("inf")
    n = pred.arity
    for r in range(1, n + 1):
        for drop in itertools.combinations(range(n), r):
            rest = np.delete(words, drop, axis=1)
            if len(np.unique(encode(rest, pred.order))) < len(words):
                return r
    return float("inf")


@dataclass(frozen=True)
class RetractSpec:
    """Keep ``kept`` coordinates (in this order) and fix all others."""

    kept: tuple
    fixed: Mapping[int, int]

    def __post_init__(self):
        object.__setattr__(self, "kept", tuple(int(k) for k in self.kept))
        object.__setattr__(self, "fixed", {int(k): int(v) for k, v in dict(self.fixed).items()})

    def check(self, arity: int, order: int):
        positions = set(self.kept) | set(self.fixed)
        if len(self.kept) < 2:
            raise StructureError("a retract keeps at least two coordinates")
        if len(set(self.kept)) != len(self.kept) or set(self.kept) & set(self.fixed):
            raise StructureError("kept and fixed coordinates must be disjoint")
        if positions != set(range(arity)):
            raise StructureError(f"kept and fixed must partition 0..{arity - 1}")
        if any(not 0 <= v < order for v in self.fixed.values()):
            raise StructureError("fixed symbols out of range")

    @classmethod
    def leading(cls, arity: int, k: int, symbols: Sequence[int] | None = None) -> RetractSpec:
        """Keep coordinates ``0..k-1``; fix the rest to ``symbols`` (zeros by default)."""
        symbols = [0] * (arity - k) if symbols is None else list(symbols)
        return cls(tuple(range(k)), dict(zip(range(k, arity), symbols)))


def retract(pred: QPredicate, spec: RetractSpec) -> QPredicate:
    spec.check(pred.arity, pred.order)
    words = pred.codewords
    mask = np.ones(len(words), dtype=bool)
    for pos, sym in spec.fixed.items():
        mask &= words[:, pos] == sym
    return from_codewords(pred.order, words[mask][:, list(spec.kept)])


@dataclass(frozen=True)
class SuperpositionSpec:
    """``outer(inners[0](z[groups[0]]), ..., inners[k-1](z[groups[k-1]]))``."""

    outer: QTable
    groups: tuple
    inners: tuple

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(tuple(int(p) for p in g) for g in self.groups))
        object.__setattr__(self, "inners", tuple(self.inners))

    @property
    def arity(self) -> int:
        return sum(len(g) for g in self.groups)

    def check(self):
        _check_groups(self.groups, self.inners, self.outer.order)
        if len(self.groups) != self.outer.arity:
            raise StructureError(f"outer arity {self.outer.arity} needs {self.outer.arity} groups, got {len(self.groups)}")


def _check_groups(groups, inners, order):
    flat = [p for g in groups for p in g]
    if any(len(g) == 0 for g in groups):
        raise StructureError("groups must be nonempty")
    if sorted(flat) != list(range(len(flat))):
        raise StructureError("groups must be disjoint and cover 0..N-1")
    if len(inners) != len(groups):
        raise StructureError("one inner table per group")
    for g, q in zip(groups, inners):
        if q.arity != len(g):
            raise StructureError(f"inner of arity {q.arity} cannot take group {g}")
        if q.order != order:
            raise StructureError("order mismatch between outer and inner")


def superpose(spec: SuperpositionSpec) -> QTable:
    """Value table of the superposition described by ``spec``."""
    spec.check()
    args = all_words(spec.outer.order, spec.arity)
    slots = np.stack([q.evaluate(args[:, list(g)]) for g, q in zip(spec.groups, spec.inners)], axis=1)
    table = QTable(spec.outer.order, spec.arity, spec.outer.evaluate(slots))
    _assert_valid(table, "superposition")
    return table


def superpose_predicate(outer: QPredicate, groups: Sequence[Sequence[int]], inners: Sequence[QTable]) -> QPredicate:
    """Predicate ``M<z> <=> outer<inners[0](z[groups[0]]), ...>``.

    ``groups`` partition the coordinates of the result; each inner reads its
    group's coordinates in the listed order.
    """
    groups = [tuple(int(p) for p in g) for g in groups]
    if len(groups) != outer.arity:
        raise StructureError(f"outer predicate arity {outer.arity} needs {outer.arity} groups")
    _check_groups(groups, inners, outer.order)
    s = outer.order
    n = sum(len(g) for g in groups)
    last = n - 1
    t_out = next(t for t, g in enumerate(groups) if last in g)
    args = all_words(s, last)
    slots = [None] * len(groups)
    for t, (g, q) in enumerate(zip(groups, inners)):
        if t != t_out:
            slots[t] = q.evaluate(args[:, list(g)])
    others = np.stack([slots[t] for t in range(len(groups)) if t != t_out], axis=1)
    required = outer.solve(t_out).evaluate(others)
    g = groups[t_out]
    local = g.index(last)
    solver = invert(inners[t_out], local)
    inner_args = np.stack([required if p == last else args[:, p] for p in g], axis=1)
    table = QTable(s, last, solver.evaluate(inner_args))
    _assert_valid(table, "superposition")
    return QPredicate(table)


def _assert_valid(table: QTable, what: str):
    report = validate(table)
    if not report:
        raise StructureError(f"{what} is not a quasigroup: position {report.position} at {report.fixed} repeats {report.duplicate}")
