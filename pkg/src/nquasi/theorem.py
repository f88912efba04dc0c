"""Reducibility through a maximal irreducible retract.

Conventions: in a :class:`TheoremInstance` the predicate ``M`` has arity
``n``; coordinates ``0..k-1`` are the retract variables ``x`` and
coordinates ``k..n-1`` are the remaining variables ``y`` (``y``-index ``i``
lives at coordinate ``k + i``). The retract ``K`` is ``M<x, 0, ..., 0>``.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .core import QPredicate, QTable, RetractSpec, retract, superpose_predicate
from .decompose import GroupingDecomposition, is_reducible, try_group
from .errors import StructureError, TheoremViolation
from .isotopy import IsotopyMap, apply, find_isotopy


@dataclass(frozen=True)
class TheoremInstance:
    M: QPredicate
    k: int

    def __post_init__(self):
        if not 2 <= self.k < self.M.arity:
            raise StructureError(f"k must lie in 2..{self.M.arity - 1}")

    @property
    def n(self) -> int:
        return self.M.arity

    @property
    def m(self) -> int:
        return self.n - self.k

    @property
    def K_spec(self) -> RetractSpec:
        return RetractSpec.leading(self.n, self.k)

    @cached_property
    def K(self) -> QPredicate:
        return retract(self.M, self.K_spec)

    def y_position(self, i: int) -> int:
        return self.k + i

    def hypothesis_met(self) -> bool:
        return 4 <= self.k <= self.n - 3


@dataclass(frozen=True)
class MaxRetract:
    """Largest irreducible retract and the relabelling that puts it in front.

    ``spec`` is the witness in the coordinates of the input. ``instance.M`` is
    the input with coordinates reordered by ``coordinate_order`` (kept ones
    first) and then moved by ``relabel`` so that the fixed symbols become 0.
    """

    k: int
    spec: RetractSpec
    instance: TheoremInstance
    coordinate_order: tuple
    relabel: IsotopyMap


def _first(items, test, threads):
    """First item (in order) passing ``test``; the answer does not depend on ``threads``."""
    if threads <= 1:
        return next((it for it in items if test(it)), None)
    items = list(items)
    with ThreadPoolExecutor(threads) as pool:
        for start in range(0, len(items), 4 * threads):
            chunk = items[start:start + 4 * threads]
            for it, ok in zip(chunk, pool.map(test, chunk)):
                if ok:
                    return it
    return None


def max_irreducible_retract(M: QPredicate, threads: int = 1) -> MaxRetract:
    """Scan retracts by arity descending, kept set and fixing lexicographic.

    Retracts of arity 3 (binary quasigroups) are irreducible by definition,
    so the scan always ends by arity 3.
    """
    n = M.arity
    if n < 4:
        raise StructureError(f"predicate arity must be at least 4, got {n}")
    s = M.order
    hit = None
    for r in range(n - 1, 2, -1):
        candidates = (
            RetractSpec(kept, dict(zip(sorted(set(range(n)) - set(kept)), vals)))
            for kept in itertools.combinations(range(n), r)
            for vals in itertools.product(range(s), repeat=n - r)
        )
        if r == 3:
            hit = next(candidates)
        else:
            hit = _first(candidates, lambda spec: not is_reducible(retract(M, spec)), threads)
        if hit is not None:
            break
    k = len(hit.kept)
    fixed_positions = sorted(hit.fixed)
    order = tuple(hit.kept) + tuple(fixed_positions)
    moved = M.permute(order)
    maps = [tuple(range(s))] * n
    for c, p in enumerate(fixed_positions, start=k):
        sym = hit.fixed[p]
        swap = list(range(s))
        swap[0], swap[sym] = sym, 0
        maps[c] = tuple(swap)
    relabel = IsotopyMap(tuple(maps))
    return MaxRetract(k, hit, TheoremInstance(apply(moved, relabel), k), order, relabel)


@dataclass(frozen=True)
class GroupMap:
    """``j[i]`` is the ``x``-coordinate grouped with ``y``-index ``i``."""

    j: tuple
    k: int

    def group(self, t: int) -> tuple:
        return tuple(i for i, jt in enumerate(self.j) if jt == t)

    @property
    def groups(self) -> tuple:
        return tuple(self.group(t) for t in range(self.k))

    def __str__(self):
        return ",".join(map(str, self.j))


def _partners(inst: TheoremInstance, i: int, ys: dict) -> list[int]:
    """x-coordinates that separate together with ``y_i`` in the retract over ``x, y_i``."""
    k = inst.k
    fixed = {inst.y_position(t): ys.get(t, 0) for t in range(inst.m) if t != i}
    L = retract(inst.M, RetractSpec(tuple(range(k)) + (inst.y_position(i),), fixed))
    return [j for j in range(k) if try_group(L, (j, k)) is not None]


def group_map(inst: TheoremInstance, strict: bool = False) -> GroupMap:
    """Assign each ``y``-index the unique ``x`` it is grouped with.

    With ``strict`` the assignment is recomputed for every fixing of the
    other ``y`` variables and must not change.
    """
    if inst.k < 4:
        raise StructureError(f"group map needs k >= 4, got {inst.k}")
    if inst.m < 1:
        raise StructureError("no y variables")
    j = []
    for i in range(inst.m):
        found = _partners(inst, i, {})
        if len(found) != 1:
            raise TheoremViolation(f"y{i}: expected exactly one separating x, found {found}")
        j.append(found[0])
        if strict:
            others = [t for t in range(inst.m) if t != i]
            for vals in itertools.product(range(inst.M.order), repeat=len(others)):
                again = _partners(inst, i, dict(zip(others, vals)))
                if again != found:
                    raise TheoremViolation(f"y{i}: partner changes to {again} at fixing {dict(zip(others, vals))}")
    return GroupMap(tuple(j), inst.k)


@dataclass(frozen=True)
class TwoGroupCheck:
    ok: bool
    stage: str
    witness: IsotopyMap | None = None

    def __bool__(self):
        return self.ok


def check_two_group_retract(inst: TheoremInstance, gmap: GroupMap, i1: int, i2: int, fixing: dict) -> TwoGroupCheck:
    """Check ``N<x, v, w> <=> K<o1(x_a, v), o2(x_b, w), ...>`` up to isotopy.

    ``v = y_i1`` and ``w = y_i2`` with ``a = j(i1) != b = j(i2)``; ``fixing``
    gives the remaining ``y`` values by ``y``-index.
    """
    if inst.m < 2:
        raise StructureError("needs at least two y variables")
    if i1 == i2 or gmap.j[i1] == gmap.j[i2]:
        raise StructureError("y indices must lie in different groups")
    rest = [t for t in range(inst.m) if t not in (i1, i2)]
    if sorted(fixing) != rest:
        raise StructureError(f"fixing must assign exactly y indices {rest}")
    k = inst.k
    spec = RetractSpec(tuple(range(k)) + (inst.y_position(i1), inst.y_position(i2)), {inst.y_position(t): fixing[t] for t in rest})
    N = retract(inst.M, spec)
    first = try_group(N, (gmap.j[i1], k))
    if first is None:
        return TwoGroupCheck(False, "v does not separate with its x")
    # slot replaces x_{j(i1)}, w now sits at coordinate k
    second = try_group(first.outer, (gmap.j[i2], k))
    if second is None:
        return TwoGroupCheck(False, "w does not separate with its x")
    witness = find_isotopy(second.outer, inst.K)
    if witness is None:
        return TwoGroupCheck(False, "residual outer not isotopic to K")
    return TwoGroupCheck(True, "ok", witness)


@dataclass(frozen=True)
class TheoremDecomposition:
    """``M<x, y> <=> K<inners[0](x_0, y[i^0]), ..., inners[k-1](x_{k-1}, y[i^{k-1}])>``.

    ``groups[t]`` lists the coordinates of ``M`` read by ``inners[t]``, in
    argument order. Inners satisfy ``inners[t](x, 0, ..., 0) = x``.
    """

    outer: QPredicate
    inners: tuple
    groups: tuple
    group_map: GroupMap
    alignment: IsotopyMap

    def predicate(self) -> QPredicate:
        return superpose_predicate(self.outer, self.groups, self.inners)


def reconstruct(inst: TheoremInstance, gmap: GroupMap | None = None) -> TheoremDecomposition:
    """Rebuild ``M`` over ``K`` by extracting one group per ``x`` and aligning the rest.

    Raises TheoremViolation if any extraction or the final alignment fails,
    or if the result differs from ``M``.
    """
    if not inst.hypothesis_met():
        raise StructureError(f"needs 4 <= k <= n - 3, got k={inst.k}, n={inst.n}")
    if gmap is None:
        gmap = group_map(inst)
    s, k = inst.M.order, inst.k
    current = inst.M
    labels = list(range(inst.n))
    inners: list[QTable] = []
    groups: list[tuple] = []
    for t in range(k):
        members = (t,) + tuple(inst.y_position(i) for i in gmap.group(t))
        groups.append(members)
        if len(members) == 1:
            inners.append(QTable.identity(s))
            continue
        dec: GroupingDecomposition | None = try_group(current, [labels.index(p) for p in members])
        if dec is None:
            raise TheoremViolation(f"group {t} ({members}) does not separate")
        inners.append(dec.inner)
        labels = [labels[c] for c in dec.positions]
        current = dec.outer
    if labels != list(range(k)):
        raise TheoremViolation(f"residual coordinates {labels} are not x_0..x_{k - 1}")
    rho = find_isotopy(current, inst.K)
    if rho is None:
        raise TheoremViolation("residual outer is not isotopic to K")
    aligned = []
    for t, q in enumerate(inners):
        q = QTable(s, q.arity, np.array(rho.maps[t])[q.values])
        base = q.cube[(slice(None),) + (0,) * (q.arity - 1)]
        back = np.argsort(base)
        aligned.append(QTable(s, q.arity, back[q.values]))
    result = TheoremDecomposition(inst.K, tuple(aligned), tuple(groups), gmap, rho)
    if result.predicate() != inst.M:
        raise TheoremViolation("reconstruction differs from M")
    return result


@dataclass
class CorollaryReport:
    k: int
    n: int
    hypothesis_met: bool
    max_retract: MaxRetract
    reducible: bool | None = None
    decomposition: TheoremDecomposition | None = None
    notes: list = field(default_factory=list)

    def summary(self) -> str:
        lines = [f"predicate arity n={self.n}", f"max irreducible retract arity k={self.k}"]
        if not self.hypothesis_met:
            lines.append(f"hypothesis not met: k={self.k} outside 4..{self.n - 3}")
        else:
            lines.append(f"hypothesis met: 4 <= k={self.k} <= {self.n - 3}")
            lines.append(f"reducible: {'yes' if self.reducible else 'no'}")
            if self.decomposition is not None:
                gm = self.decomposition.group_map
                lines.append("group map: " + " ".join(f"y{i}->x{jt}" for i, jt in enumerate(gm.j)))
                lines.append("groups: " + " ".join(",".join(map(str, g)) for g in self.decomposition.groups))
        lines.extend(self.notes)
        return "\n".join(lines)


def corollary_check(M: QPredicate, threads: int = 1, strict: bool = False) -> CorollaryReport:
    """Compute ``k``; when ``4 <= k <= n - 3`` confirm reducibility and rebuild ``M``."""
    mr = max_irreducible_retract(M, threads=threads)
    n = M.arity
    report = CorollaryReport(mr.k, n, mr.instance.hypothesis_met(), mr)
    if not report.hypothesis_met:
        return report
    inst = mr.instance
    if not is_reducible(inst.M):
        raise TheoremViolation(f"k={mr.k} meets the hypothesis but M is irreducible")
    report.reducible = True
    report.decomposition = reconstruct(inst, group_map(inst, strict=strict))
    return report


def to_original(mr: MaxRetract, pred: QPredicate) -> QPredicate:
    """Undo the relabelling of :func:`max_irreducible_retract` on a predicate over the instance coordinates."""
    back = apply(pred, mr.relabel.inverse())
    inverse_order = tuple(int(i) for i in np.argsort(mr.coordinate_order))
    return back.permute(inverse_order)

