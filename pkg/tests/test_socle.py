import pytest

from app.core.exceptions import NotMinimalNormalError
from app.services.group_core import center, normal_closure
from app.services.socle import (
    classify_foot,
    is_simple,
    minimal_normal_subgroups,
    minisocle_decomposition,
    socle,
)


@pytest.mark.parametrize("n, order", [(3, 3), (4, 4), (5, 60)])
def test_socle_of_symmetric_group_is_alternating_or_vierergruppe(group, n, order):
    G = group(f"symmetric {n}")
    S = socle(G)
    assert S.order == order
    if n != 4:
        assert S == G.inner_action.closure([x for x in range(G.order) if G.element_orders[x] == 3][:1])


def test_alt4_has_unique_foot_the_vierergruppe(alt4):
    feet = minimal_normal_subgroups(alt4)
    assert len(feet) == 1
    V = feet[0]
    assert V.order == 4
    assert sorted(alt4.element_orders[V.array].tolist()) == [1, 2, 2, 2]


def test_classify_abelian_foot(sym4):
    (V,) = minimal_normal_subgroups(sym4)
    foot = classify_foot(sym4, V)
    assert foot.is_abelian
    assert foot.kind.p == 2
    assert foot.kind.rank == 2
    assert len(foot.kind.basis) == 2


def test_classify_rejects_non_minimal(sym4):
    three_cycle = next(x for x in range(sym4.order) if sym4.element_orders[x] == 3)
    A4 = normal_closure(sym4, [three_cycle])
    with pytest.raises(NotMinimalNormalError) as info:
        classify_foot(sym4, A4)
    assert info.value.details["certificate_order"] == 4


def test_nonabelian_foot_splits_into_simple_feet(group):
    G = group("product (cyclic 3) (alternating 5)")
    feet = [classify_foot(G, M) for M in minimal_normal_subgroups(G)]
    kinds = sorted((f.order, f.is_abelian) for f in feet)
    assert kinds == [(3, True), (60, False)]
    nonabelian = next(f for f in feet if not f.is_abelian)
    assert len(nonabelian.kind.simple_feet) == 1
    assert is_simple(G, nonabelian.kind.simple_feet[0])


def test_direct_sum_of_simple_groups_is_its_own_minisocle(group):
    G = group("product (cyclic 3) (alternating 5)")
    deco = minisocle_decomposition(G)
    assert deco.ma.order == 3
    assert deco.mh.order == 60
    assert deco.ms.order == G.order


def test_minisocle_of_quaternion_group_is_its_centre(quaternion8):
    deco = minisocle_decomposition(quaternion8)
    assert deco.ma.order == 2
    assert deco.mh.order == 1
    assert deco.ms == center(quaternion8)


def test_sym4_minisocle(sym4):
    deco = minisocle_decomposition(sym4)
    assert (deco.ma.order, deco.mh.order, deco.ms.order) == (4, 1, 4)
    assert len(deco.ma_summands) == 1


def test_klein4_abelian_part_is_assembled_from_two_feet(klein4):
    deco = minisocle_decomposition(klein4)
    assert len(deco.feet) == 3
    assert len(deco.ma_summands) == 2
    assert deco.ma.order == 4


def test_factorization_is_unique_and_multiplies_back(group):
    G = group("product (cyclic 3) (alternating 5)")
    deco = minisocle_decomposition(G)
    for x in deco.ms.members[::17]:
        factors = deco.factor(x)
        product = G.identity
        for y in factors:
            product = int(G.mul[product, y])
        assert product == x
    deco3 = minisocle_decomposition(group("symmetric 3"))
    outside = next(x for x in range(6) if x not in deco3.ms)
    with pytest.raises(ValueError):
        deco3.factor(outside)


@pytest.mark.parametrize(
    "text", ["cyclic 16", "cyclic 27", "dihedral 8", "quaternion 8", "product (cyclic 2) (cyclic 4)"]
)
def test_nilpotent_socle_lies_in_centre(group, text):
    G = group(text)
    assert socle(G).issubset(center(G))


def test_socle_of_semidirect_is_the_normal_subgroup(group):
    G = group("semidirect 2 2 (symmetric 3) [0 1; 1 0], [0 1; 1 1]")
    assert socle(G).members == G.metadata["normal_subgroup"]


def test_simplicity(group, alt4):
    A5 = group("alternating 5")
    assert is_simple(A5, A5.inner_action.closure([1]))
    whole = alt4.inner_action.closure([x for x in range(alt4.order) if alt4.element_orders[x] == 3][:1])
    assert whole.order == 12
    assert not is_simple(alt4, whole)
