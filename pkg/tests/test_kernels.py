import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nquasi import QTable, find_isotopy, validate
from nquasi.generate import random_isotope, random_quasigroup
from nquasi.kernels import BACKEND, available_backends

BACKENDS = available_backends()


def test_compiled_backend_built():
    # the extension is part of the package build; the fallback is for environments without a compiler
    assert "cython" in BACKENDS
    assert BACKEND in BACKENDS


def _solvers(pred):
    return np.stack([pred.solve(j).values for j in range(pred.arity)]).astype(np.int64)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_latin_violation_on_fixture(name, irr4_table):
    assert BACKENDS[name].latin_violation(irr4_table.values, 4, 4) is None


@settings(max_examples=60)
@given(st.integers(2, 4), st.integers(1, 3), st.integers(0, 2**32 - 1), st.booleans())
def test_backends_agree_on_latin_check(s, m, seed, corrupt):
    rng = np.random.default_rng(seed)
    values = random_quasigroup(s, m, rng).values.copy()
    if corrupt:
        i = int(rng.integers(len(values)))
        values[i] = (values[i] + 1) % s
    results = {name: mod.latin_violation(values, s, m) for name, mod in BACKENDS.items()}
    first = next(iter(results.values()))
    assert all(r == first for r in results.values())
    assert (first is None) == (not corrupt)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.integers(2, 3), st.integers(0, 2**32 - 1))
def test_backends_agree_on_isotopy(s, m, seed):
    rng = np.random.default_rng(seed)
    a = random_quasigroup(s, m, rng).to_predicate()
    b = random_isotope(a.table, rng).to_predicate() if rng.random() < 0.5 else random_quasigroup(s, m, rng).to_predicate()
    found = {}
    for name, mod in BACKENDS.items():
        r = mod.isotopy_search(a.codewords, _solvers(b), s)
        found[name] = None if r is None else np.asarray(r).tolist()
    first = next(iter(found.values()))
    assert all(r == first for r in found.values())


def test_isotopy_search_returns_witness_for_isotope(irr4_table):
    rng = np.random.default_rng(5)
    other = QTable(4, 4, random_isotope(irr4_table, rng).values)
    assert validate(other)
    iso = find_isotopy(irr4_table.to_predicate(), other.to_predicate())
    assert iso is not None
