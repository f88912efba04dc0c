"""Shared fixtures and brute-force oracles.

The oracles deliberately avoid the library's vectorized paths: they walk
every tuple with plain Python and index tables by hand.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

from nquasi import QPredicate, QTable
from nquasi.cli import main as cli_main
from nquasi.fixtures import irreducible4
from nquasi.generate import seven_instance
from nquasi.io import parse_qtable

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def flat_index(args, order):
    idx = 0
    for a in args:
        idx = idx * order + int(a)
    return idx


def table_value(table: QTable, args) -> int:
    return int(table.values[flat_index(args, table.order)])


def brute_latin(table: QTable) -> bool:
    s, m = table.order, table.arity
    for p in range(m):
        for rest in itertools.product(range(s), repeat=m - 1):
            seen = {table_value(table, rest[:p] + (x,) + rest[p:]) for x in range(s)}
            if len(seen) != s:
                return False
    return True


def brute_members(table: QTable) -> set:
    return {w + (table_value(table, w),) for w in itertools.product(range(table.order), repeat=table.arity)}


def brute_mask(pred: QPredicate) -> np.ndarray:
    """Membership over all tuples, read straight off the defining table."""
    s, n = pred.order, pred.arity
    return np.array(
        [table_value(pred.table, w[:-1]) == w[-1] for w in itertools.product(range(s), repeat=n)],
        dtype=bool,
    )


def brute_superposition_mask(outer: QPredicate, groups, inners, order: int) -> np.ndarray:
    """``outer<inners[t](z[groups[t]])>`` evaluated tuple by tuple."""
    n = sum(len(g) for g in groups)
    out = []
    for z in itertools.product(range(order), repeat=n):
        u = [table_value(q, [z[p] for p in g]) for g, q in zip(groups, inners)]
        out.append(table_value(outer.table, u[:-1]) == u[-1])
    return np.array(out, dtype=bool)


def brute_min_distance(words) -> int:
    words = np.asarray(words)
    best = math.inf
    for i in range(len(words)):
        d = np.count_nonzero(words[i + 1:] != words[i], axis=1)
        if d.size:
            best = min(best, int(d.min()))
    return best


def brute_isotopic(p1: QPredicate, p2: QPredicate) -> bool:
    """Try every tuple of coordinate permutations."""
    s, n = p1.order, p1.arity
    target = brute_members(p2.table)
    source = sorted(brute_members(p1.table))
    perms = list(itertools.permutations(range(s)))
    for maps in itertools.product(perms, repeat=n):
        if all(tuple(maps[i][w[i]] for i in range(n)) in target for w in source):
            return True
    return False


@pytest.fixture(scope="session")
def irr4_table() -> QTable:
    return irreducible4().table


@pytest.fixture(scope="session")
def irr4_pred(irr4_table) -> QPredicate:
    return irr4_table.to_predicate()


# seed for the irreducible ternary outer and for the inners of the worked instance
SEVEN_K_SEED = 7
SEVEN_INNER_SEED = 11


@pytest.fixture(scope="session")
def seven_K(tmp_path_factory) -> QTable:
    out = tmp_path_factory.mktemp("gen") / "K.qtable"
    code = cli_main(["gen", "random-search-irreducible", "--order", "4", "--arity", "3",
                     "--seed", str(SEVEN_K_SEED), "--out", str(out)])
    assert code == 0
    return parse_qtable(out.read_text())


@pytest.fixture(scope="session")
def seven(seven_K):
    return seven_instance(seven_K, np.random.default_rng(SEVEN_INNER_SEED))
