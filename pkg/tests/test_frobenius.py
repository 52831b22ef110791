import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_frobenius import frobenius
from toric_frobenius.classgroup import compute_class_group
from toric_frobenius.fan import Fan, builtin_fan
from toric_frobenius.frobenius import (
    AlgorithmMismatch,
    BudgetExceeded,
    _cube_pointwise,
    class_distribution,
    class_distribution_convolution,
    class_distribution_cube,
    decompose,
    multiplicity,
    shift,
)

from conftest import classgroup_of
from oracles import sum_distribution


def as_ints(dist):
    """Distribution keyed by the single free coordinate."""
    return {c.free[0]: n for c, n in dist.items()}


@pytest.mark.parametrize("n, ell", [(1, 2), (2, 2), (1, 5), (2, 3), (3, 3)])
def test_projective_space_matches_coordinate_sums(n, ell):
    _, cg = classgroup_of(f"projective_space({n})")
    expected = sum_distribution(n + 1, ell)
    assert as_ints(class_distribution_cube(cg, ell)) == expected
    assert as_ints(class_distribution_convolution(cg, ell)) == expected


def test_spec_distributions():
    _, p1 = classgroup_of("projective_space(1)")
    assert as_ints(class_distribution_cube(p1, 2)) == {0: 1, 1: 2, 2: 1}
    _, p2 = classgroup_of("projective_space(2)")
    assert as_ints(class_distribution_cube(p2, 2)) == {0: 1, 1: 3, 2: 3, 3: 1}
    _, qc = classgroup_of("quadric_cone")
    dist = class_distribution_convolution(qc, 2)
    assert {c.torsion: n for c, n in dist.items()} == {(0,): 2, (1,): 2}


def test_ell_one_is_point_mass(builtin):
    _, cg = builtin
    for algo in (class_distribution_cube, class_distribution_convolution):
        dist = algo(cg, 1)
        assert dict(dist.counts) == {cg.zero(): 1}


@pytest.mark.parametrize("ell", [1, 2, 3, 4])
def test_algorithms_agree_with_pointwise(builtin, ell):
    _, cg = builtin
    reference = _cube_pointwise(cg, ell)
    assert class_distribution_cube(cg, ell) == reference
    assert class_distribution_convolution(cg, ell) == reference
    assert reference.total == ell ** cg.n_rays


def test_hirzebruch_ell_three():
    _, cg = classgroup_of("hirzebruch(1)")
    cube = class_distribution_cube(cg, 3)
    assert cube.total == 81
    assert cube == class_distribution_convolution(cg, 3)


def test_distribution_symmetry(builtin):
    _, cg = builtin
    for ell in (2, 3, 4):
        dist = class_distribution_convolution(cg, ell)
        sigma = cg.class_of([ell - 1] * cg.n_rays)
        for c, n in dist.items():
            assert dist[cg.sub(sigma, c)] == n


def test_factor_order_irrelevant():
    fan = builtin_fan("hirzebruch(2)")
    cg = compute_class_group(fan)
    perm = [2, 0, 3, 1]
    fan2 = Fan.from_lists(2, [fan.rays[i] for i in perm],
                          [[perm.index(i) for i in c] for c in fan.max_cones])
    cg2 = compute_class_group(fan2)
    # same group coordinates because the Hermite form of the free rows is canonical
    d1 = class_distribution_convolution(cg, 3)
    d2 = class_distribution_convolution(cg2, 3)
    assert sorted(d1.counts.values()) == sorted(d2.counts.values())
    assert d2 == class_distribution_cube(cg2, 3)


def test_budget():
    _, cg = classgroup_of("projective_space(3)")
    with pytest.raises(BudgetExceeded):
        class_distribution_cube(cg, 10, budget=9999)
    assert class_distribution_cube(cg, 10, budget=10000).total == 10000


def test_invalid_ell():
    _, cg = classgroup_of("projective_space(1)")
    for bad in (0, -2):
        with pytest.raises(ValueError):
            class_distribution_convolution(cg, bad)
        with pytest.raises(ValueError):
            class_distribution_cube(cg, bad)


def test_sparse_paths(monkeypatch):
    # weighted P(1,100,1): a wide free box, so the cube falls back to np.unique
    fan = Fan.from_lists(2, [(1, 0), (0, 1), (-1, -100)], [(0, 1), (1, 2), (0, 2)])
    cg = compute_class_group(fan)
    reference = _cube_pointwise(cg, 2)
    monkeypatch.setattr(frobenius, "_CHUNK", 1)
    monkeypatch.setattr(frobenius, "_DENSE_CELL_LIMIT", 0)
    assert class_distribution_cube(cg, 2) == reference
    assert class_distribution_convolution(cg, 2) == reference
    _, qc = classgroup_of("quadric_cone")
    assert class_distribution_convolution(qc, 3) == _cube_pointwise(qc, 3)


def test_huge_counts_stay_exact():
    # 7^23 > 2^63: the convolution switches to Python integers
    fan = builtin_fan("projective_space(22)")
    cg = compute_class_group(fan)
    dist = class_distribution_convolution(cg, 7)
    assert dist.total == 7 ** 23
    assert dist[cg.zero()] == 1
    assert dist[cg.element([1])] == 23


def test_both_algorithms_dispatch(monkeypatch):
    _, cg = classgroup_of("hirzebruch(1)")
    assert class_distribution(cg, 2, "both") == class_distribution(cg, 2, "cube")
    with pytest.raises(ValueError):
        class_distribution(cg, 2, "fft")
    broken = class_distribution_cube(cg, 3)
    monkeypatch.setattr(frobenius, "class_distribution_convolution", lambda cg, ell: broken)
    with pytest.raises(AlgorithmMismatch):
        class_distribution(cg, 2, "both")


# -- multiplicities and decompositions ----------------------------------------

def test_multiplicity_examples():
    _, cg = classgroup_of("projective_space(1)")
    dist = class_distribution_cube(cg, 2)
    assert multiplicity(cg, dist, cg.zero(), cg.zero(), 2) == 1
    assert multiplicity(cg, dist, cg.zero(), cg.element([-1]), 2) == 1
    assert multiplicity(cg, dist, cg.zero(), cg.element([1]), 2) == 0
    dist1 = class_distribution_cube(cg, 1)
    D = cg.element([4])
    assert multiplicity(cg, dist1, D, D, 1) == 1
    assert multiplicity(cg, dist1, D, cg.element([3]), 1) == 0
    with pytest.raises(ValueError):
        multiplicity(cg, dist, D, D, 3)


def sheaves(dec):
    return {E.free[0]: m for E, m in dec.summands.items()}


@pytest.mark.parametrize("n, D, ell, expected", [
    (1, 0, 2, {0: 1, -1: 1}),
    (1, 1, 3, {0: 2, -1: 1}),
    (2, 0, 2, {0: 1, -1: 3}),
    (1, 0, 4, {0: 1, -1: 3}),
])
def test_decompose_examples(n, D, ell, expected):
    _, cg = classgroup_of(f"projective_space({n})")
    dec = decompose(cg, cg.element([D]), ell, algorithm="cube")
    assert sheaves(dec) == expected
    assert dec.rank == ell ** n


def test_decompose_quadric_cone():
    _, cg = classgroup_of("quadric_cone")
    dec = decompose(cg, cg.zero(), 2)
    assert dict(dec.summands) == {cg.element((), (0,)): 2, cg.element((), (1,)): 2}
    assert dec.rank == 4
    assert dec.ell_shares_torsion
    assert not decompose(cg, cg.zero(), 3).ell_shares_torsion


@pytest.mark.parametrize("ell", [2, 3])
def test_rank_law_and_unit_summand(builtin, ell):
    fan, cg = builtin
    dist = class_distribution_convolution(cg, ell)
    for D in cg.classes_in_box(3):
        dec = decompose(cg, D, ell, dist)
        assert dec.rank == ell ** fan.dim
        assert all(m > 0 for m in dec.summands.values())
        # the cube point 0 lies in the zero class, so O(E) is a summand of F_* O(ell*E)
        assert decompose(cg, cg.scale(D, ell), ell, dist)[D] >= 1


def test_projection_formula_shift(builtin):
    _, cg = builtin
    rng = random.Random(5)
    grid = cg.classes_in_box(2)
    for ell in (2, 3):
        dist = class_distribution_convolution(cg, ell)
        for _ in range(15):
            D, E0 = rng.choice(grid), rng.choice(grid)
            lhs = shift(cg, decompose(cg, D, ell, dist), E0)
            rhs = dict(decompose(cg, cg.add(D, cg.scale(E0, ell)), ell, dist).summands)
            assert lhs == rhs


def test_identity_for_ell_one(builtin):
    _, cg = builtin
    for D in cg.classes_in_box(2):
        assert dict(decompose(cg, D, 1).summands) == {D: 1}


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["projective_space(1)", "projective_space(2)", "hirzebruch(1)",
                        "weighted_p112"]),
       st.integers(1, 3), st.integers(1, 3), st.lists(st.integers(-2, 2), min_size=2, max_size=2))
def test_composition_law(name, ell1, ell2, coords):
    _, cg = classgroup_of(name)
    D = cg.from_flat(coords[:cg.rank])
    lhs = dict(decompose(cg, D, ell1 * ell2).summands)
    rhs = {}
    for E, m in decompose(cg, D, ell2).summands.items():
        for E2, m2 in decompose(cg, E, ell1).summands.items():
            rhs[E2] = rhs.get(E2, 0) + m * m2
    assert lhs == rhs


def test_json_is_sorted_and_stable():
    _, cg = classgroup_of("hirzebruch(1)")
    dec = decompose(cg, cg.element([1, -2]), 3)
    doc = dec.to_json()
    assert set(doc) >= {"ell", "source", "rank", "summands"}
    keys = [(s["class"]["free"], s["class"]["torsion"]) for s in doc["summands"]]
    assert keys == sorted(keys)
    assert json.dumps(doc, sort_keys=True) == json.dumps(
        decompose(cg, cg.element([1, -2]), 3, algorithm="cube").to_json(), sort_keys=True)
    assert doc["rank"] == 9


def test_source_need_not_be_a_summand():
    _, cg = classgroup_of("projective_space(1)")
    dec = decompose(cg, cg.element([3]), 2)
    assert sheaves(dec) == {1: 2}
    assert dec[cg.element([3])] == 0
