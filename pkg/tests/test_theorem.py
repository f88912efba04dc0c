import itertools

import numpy as np
import pytest

from nquasi import (
    IsotopyMap,
    QTable,
    TheoremInstance,
    apply,
    check_two_group_retract,
    corollary_check,
    find_isotopy,
    group_map,
    is_reducible,
    max_irreducible_retract,
    reconstruct,
    retract,
    validate,
)
from nquasi.core import RetractSpec
from nquasi.errors import StructureError, TheoremViolation
from nquasi.generate import cyclic_table, plant, random_irreducible, random_quasigroup
from nquasi.theorem import GroupMap, to_original

from conftest import brute_mask, brute_superposition_mask


@pytest.fixture(scope="module")
def K4():
    return random_irreducible(4, 3, np.random.default_rng(2))


def planted(K, groups, seed):
    rng = np.random.default_rng(seed)
    s = K.order
    inners = [QTable.identity(s) if len(g) == 1 else random_quasigroup(s, len(g), rng) for g in groups]
    return plant(K.to_predicate(), groups, inners)


def test_sum_of_three_has_binary_retracts_only():
    mr = max_irreducible_retract(cyclic_table(4, 3).to_predicate())
    assert mr.k == 3


def test_arity_too_small():
    with pytest.raises(StructureError):
        max_irreducible_retract(cyclic_table(3, 2).to_predicate())


def test_irr4_max_retract(irr4_pred):
    mr = max_irreducible_retract(irr4_pred)
    assert mr.k == 3
    for kept in itertools.combinations(range(5), 4):
        for sym in range(4):
            other = next(p for p in range(5) if p not in kept)
            assert is_reducible(retract(irr4_pred, RetractSpec(kept, {other: sym})))


def test_retract_normalization_is_an_isotopy(irr4_pred):
    mr = max_irreducible_retract(irr4_pred)
    inst = mr.instance
    assert to_original(mr, inst.M) == irr4_pred
    assert inst.K == apply(retract(irr4_pred, mr.spec), IsotopyMap(mr.relabel.maps[: mr.k]))
    assert not is_reducible(inst.K)


def test_threads_do_not_change_scan(seven):
    a = max_irreducible_retract(seven.predicate)
    b = max_irreducible_retract(seven.predicate, threads=4)
    assert a.spec == b.spec and a.k == b.k


def test_seven_pipeline(seven, seven_K):
    M = seven.predicate
    mr = max_irreducible_retract(M)
    assert mr.k == 4
    assert find_isotopy(mr.instance.K, seven_K.to_predicate()) is not None
    inst = mr.instance
    assert inst.hypothesis_met()
    gmap = group_map(inst, strict=True)
    assert gmap.j == (0, 0, 1)
    assert gmap.groups == ((0, 1), (2,), (), ())
    dec = reconstruct(inst, gmap)
    assert dec.groups == ((0, 4, 5), (1, 6), (2,), (3,))
    for q in dec.inners:
        assert validate(q)
        assert np.array_equal(q.cube[(slice(None),) + (0,) * (q.arity - 1)], np.arange(4))
    oracle = brute_superposition_mask(dec.outer, dec.groups, dec.inners, 4)
    assert np.array_equal(oracle, brute_mask(inst.M))


def test_planted_single_y(K4):
    # k = 4, one y grouped with x_2: hypothesis 4 <= k <= n - 3 fails, group map still applies
    p = planted(K4, [(0,), (1,), (2, 4), (3,)], 0)
    inst = TheoremInstance(p.predicate, 4)
    assert not inst.hypothesis_met()
    gmap = group_map(inst)
    assert gmap.j == (2,)
    with pytest.raises(StructureError):
        reconstruct(inst, gmap)


def test_planted_two_groups(K4):
    p = planted(K4, [(0, 4), (1, 5), (2,), (3,)], 1)
    inst = TheoremInstance(p.predicate, 4)
    gmap = group_map(inst, strict=True)
    assert gmap.j == (0, 1)
    assert check_two_group_retract(inst, gmap, 0, 1, {})
    assert check_two_group_retract(inst, gmap, 1, 0, {})


@pytest.mark.parametrize("seed", range(3))
def test_planted_order4_seven_reconstructs(K4, seed):
    groups = [(0, 4), (1,), (2, 5, 6), (3,)]
    p = planted(K4, groups, 10 + seed)
    report = corollary_check(p.predicate)
    assert report.hypothesis_met and report.reducible
    dec = report.decomposition
    assert dec.group_map.j == (0, 2, 2)
    assert dec.groups == tuple(groups)
    assert np.array_equal(brute_superposition_mask(dec.outer, dec.groups, dec.inners, 4), brute_mask(p.predicate))


def test_two_group_preconditions(seven):
    inst = max_irreducible_retract(seven.predicate).instance
    gmap = group_map(inst)
    with pytest.raises(StructureError):
        check_two_group_retract(inst, gmap, 0, 1, {2: 0})
    with pytest.raises(StructureError):
        check_two_group_retract(inst, gmap, 0, 2, {})


def test_two_group_needs_two_y(K4):
    p = planted(K4, [(0,), (1,), (2, 4), (3,)], 0)
    inst = TheoremInstance(p.predicate, 4)
    with pytest.raises(StructureError):
        check_two_group_retract(inst, GroupMap((2,), 4), 0, 0, {})


def test_group_map_requires_k4():
    inst = TheoremInstance(cyclic_table(3, 4).to_predicate(), 3)
    with pytest.raises(StructureError):
        group_map(inst)


def test_reconstruct_rejects_m0(K4):
    with pytest.raises(StructureError):
        TheoremInstance(K4.to_predicate(), 4)


def test_group_map_violation_reported():
    # the zero retract of a group table is reducible, so the y separates with every x
    inst = TheoremInstance(cyclic_table(3, 5).to_predicate(), 4)
    with pytest.raises(TheoremViolation):
        group_map(inst)


def test_corollary_fixture(irr4_pred):
    report = corollary_check(irr4_pred)
    assert report.k == 3 and not report.hypothesis_met
    assert "hypothesis not met" in report.summary()
    assert report.decomposition is None


def test_corollary_group_table():
    report = corollary_check(cyclic_table(2, 6).to_predicate())
    assert report.k == 3 and not report.hypothesis_met


def test_corollary_seven_summary(seven):
    report = corollary_check(seven.predicate)
    text = report.summary()
    assert "hypothesis met" in text and "reducible: yes" in text
    assert "y0->x0 y1->x0 y2->x1" in text
