"""Isotopy of quasigroup predicates: applying and searching for witnesses."""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import QPredicate, RetractSpec, from_codewords, retract
from .errors import StructureError


@dataclass(frozen=True)
class IsotopyMap:
    """One permutation of the symbols per predicate coordinate.

    ``maps[i][a]`` is the image of symbol ``a`` at coordinate ``i``.
    """

    maps: tuple

    def __post_init__(self):
        maps = tuple(tuple(int(b) for b in m) for m in self.maps)
        for m in maps:
            if sorted(m) != list(range(len(m))):
                raise StructureError(f"{m} is not a permutation")
        if len({len(m) for m in maps}) > 1:
            raise StructureError("all maps must act on the same symbol set")
        object.__setattr__(self, "maps", maps)

    @property
    def arity(self) -> int:
        return len(self.maps)

    def inverse(self) -> IsotopyMap:
        return IsotopyMap(tuple(np.argsort(m).tolist() for m in self.maps))

    def compose(self, other: IsotopyMap) -> IsotopyMap:
        """Apply ``self`` first, then ``other``."""
        return IsotopyMap(tuple(tuple(o[a] for a in m) for m, o in zip(self.maps, other.maps)))

    def is_identity(self) -> bool:
        return all(m == tuple(range(len(m))) for m in self.maps)

    @classmethod
    def identity(cls, order: int, arity: int) -> IsotopyMap:
        return cls((tuple(range(order)),) * arity)


def apply(pred: QPredicate, iso: IsotopyMap) -> QPredicate:
    """Image of ``pred`` under ``iso``: ``{iso(w) : w in pred}``."""
    if iso.arity != pred.arity:
        raise StructureError(f"isotopy has {iso.arity} maps, predicate arity is {pred.arity}")
    words = pred.codewords
    maps = np.array(iso.maps, dtype=np.int64)
    moved = np.stack([maps[i][words[:, i]] for i in range(pred.arity)], axis=1)
    return from_codewords(pred.order, moved, check=False)


def find_isotopy(p1: QPredicate, p2: QPredicate) -> IsotopyMap | None:
    """First witness ``iso`` with ``apply(p1, iso) == p2`` in canonical search order."""
    if p1.order != p2.order or p1.arity != p2.arity:
        raise StructureError("isotopy needs equal order and arity")
    solvers = np.stack([p2.solve(j).values for j in range(p2.arity)]).astype(np.int64)
    found = kernels.isotopy_search(p1.codewords, solvers, p1.order)
    if found is None:
        return None
    return IsotopyMap(tuple(map(tuple, found.tolist())))


def are_isotopic(p1: QPredicate, p2: QPredicate) -> bool:
    return find_isotopy(p1, p2) is not None


@dataclass
class RetractFamily:
    """Result of checking that all retracts over the trailing coordinates are isotopic."""

    ok: bool
    base: QPredicate
    witnesses: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def retract_family_isotopy_check(M: QPredicate, k: int, threads: int = 1) -> RetractFamily:
    """Check every ``M<x, y>`` with ``y`` fixed is isotopic to the one at ``y = 0``.

    Coordinates ``0..k-1`` are kept; ``witnesses[y]`` maps the base retract
    onto the retract at ``y``.
    """
    n = M.arity
    if not 2 <= k < n:
        raise StructureError(f"k must lie in 2..{n - 1}")
    fixings = list(itertools.product(range(M.order), repeat=n - k))
    base = retract(M, RetractSpec.leading(n, k))

    def check(y):
        return find_isotopy(base, retract(M, RetractSpec.leading(n, k, y)))

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            found = list(pool.map(check, fixings))
    else:
        found = [check(y) for y in fixings]
    result = RetractFamily(True, base)
    for y, iso in zip(fixings, found):
        if iso is None:
            result.failures.append(y)
            result.ok = False
        else:
            result.witnesses[y] = iso
    return result


def format_witness(iso: IsotopyMap) -> str:
    return "".join(" ".join(map(str, m)) + "\n" for m in iso.maps)


def parse_witness(text: str) -> IsotopyMap:
    rows = [line.split() for line in text.splitlines() if line.strip()]
    return IsotopyMap(tuple(tuple(int(v) for v in r) for r in rows))
