from __future__ import annotations

import pytest

from mergedecomp import corpus
from mergedecomp.errors import PreconditionError, ResourceError
from mergedecomp.psat import (
    SubsetFamily,
    downward_closure,
    format_subset,
    henckell_pointlikes,
    is_saturated,
    omega_star,
    power_semigroup,
    replay_derivation,
    saturate,
    saturate_traced,
    saturation_failure,
    subgroup_union_check,
    submasks,
    subset_product,
)
from mergedecomp.sgcore import SubsetOfS

from oracles import nonempty_subsets, omega_star as oracle_omega_star, pointlikes, set_mul, table_of


def bits(X) -> int:
    return sum(1 << x for x in X)


def as_sets(F: SubsetFamily) -> set[frozenset]:
    return {frozenset(X.elements()) for X in F}


@pytest.mark.parametrize("name,S", [(n, S) for n, S in corpus.corpus() if S.n <= 5])
def test_pointlikes_match_naive_fixpoint(name, S):
    assert as_sets(henckell_pointlikes(S)) == pointlikes(table_of(S))


def test_pointlikes_s3_is_everything():
    S3 = corpus.symmetric_group(3)
    assert len(henckell_pointlikes(S3)) == 2**6 - 1


def test_pointlikes_of_aperiodic_are_singletons():
    for name in ("U1", "chain3", "LZ2", "RZ2", "C21"):
        S = corpus.get(name)
        assert henckell_pointlikes(S) == SubsetFamily.singletons(S)


def test_pointlikes_z2_example():
    Z2 = corpus.cyclic_group(2)
    assert henckell_pointlikes(Z2).format() == "{e}\n{g}\n{e,g}\n"


def test_subset_product_and_omega_star_match_oracle():
    S = corpus.full_transformation_monoid(2)
    t = table_of(S)
    for X in nonempty_subsets(range(S.n)):
        for Y in nonempty_subsets(range(S.n)):
            got = subset_product(SubsetOfS.of(S, X), SubsetOfS.of(S, Y))
            assert set(got.elements()) == set_mul(t, X, Y)
        assert set(omega_star(SubsetOfS.of(S, X)).elements()) == oracle_omega_star(t, X)


def test_omega_star_generator_of_z3():
    Z3 = corpus.cyclic_group(3)
    assert omega_star(SubsetOfS.of(Z3, [1])).bits == 0b111
    assert omega_star(SubsetOfS.of(Z3, [0])).bits == 0b001


def test_omega_star_rejects_empty():
    with pytest.raises(PreconditionError):
        omega_star(SubsetOfS(corpus.u1(), 0))


def test_power_semigroup_omega_is_idempotent():
    S = corpus.cyclic_semigroup(3, 2)
    ps = power_semigroup(S)
    for X in range(1, 1 << S.n):
        e = ps.omega(X)
        assert ps.mul(e, e) == e


def test_submasks():
    assert sorted(submasks(0b101)) == [0b001, 0b100, 0b101]
    assert list(submasks(0)) == []


def test_family_rejects_empty_and_foreign_subsets():
    U1 = corpus.u1()
    with pytest.raises(PreconditionError):
        SubsetFamily.of(U1, [0])
    with pytest.raises(PreconditionError):
        SubsetFamily.of(U1, [0b100])


def test_family_order_and_format():
    Z3 = corpus.cyclic_group(3)
    F = SubsetFamily.of(Z3, [[1, 2], [0], [2], [0, 1]])
    assert F.ordered() == [0b001, 0b100, 0b011, 0b110]
    assert F.maximal() == [0b011, 0b110]
    assert format_subset(Z3, 0b101) == "{e,g2}"


def test_downward_closure():
    Z3 = corpus.cyclic_group(3)
    F = downward_closure(SubsetFamily.of(Z3, [[0, 1, 2]]))
    assert len(F) == 7


def test_saturation_failure_messages():
    Z2 = corpus.cyclic_group(2)
    assert "downward" in saturation_failure(SubsetFamily.of(Z2, [[0, 1]]))
    assert "omega_star" in saturation_failure(SubsetFamily.of(Z2, [[0], [1]]))
    assert is_saturated(SubsetFamily.all_nonempty(Z2))


def test_saturate_is_least():
    # the oracle fixpoint from the same seeds gives exactly the same family
    S = corpus.full_transformation_monoid(2)
    seeds = [[0, 1], [3]]
    got = saturate(SubsetFamily.of(S, seeds))
    from oracles import naive_saturation

    assert as_sets(got) == naive_saturation(table_of(S), seeds)


def test_saturate_traced_replays():
    S = corpus.cyclic_group(4)
    sat = saturate_traced(SubsetFamily.singletons(S))
    seeds = [1 << s for s in range(S.n)]
    assert sat.replay(seeds)
    assert list(sat.derivation.values())[0] == ("seed",)


def test_replay_rejects_tampered_derivation():
    S = corpus.cyclic_group(2)
    sat = saturate_traced(SubsetFamily.singletons(S))
    d = dict(sat.derivation)
    d[0b11] = ("product", 0b01, 0b01)
    assert not replay_derivation(S, d, [0b01, 0b10])
    assert not sat.replay([0b01])


def test_saturate_cap():
    S3 = corpus.symmetric_group(3)
    with pytest.raises(ResourceError):
        saturate(SubsetFamily.singletons(S3), cap=10)


def test_subgroup_union_check_z3():
    Z3 = corpus.cyclic_group(3)
    G = [SubsetOfS.of(Z3, [x]) for x in range(3)]
    c = subgroup_union_check(Z3, G)
    assert c.ok and c.union == 0b111 and c.order == 3


def test_subgroup_union_check_klein():
    K4 = corpus.get("K4")
    c = subgroup_union_check(K4, [1 << x for x in range(4)])
    assert c.ok and c.union == 0b1111
    # three cyclic subgroups of order 2 plus the trivial one
    assert len(c.cyclic) == 4


def test_subgroup_union_check_rejects_non_group():
    U1 = corpus.u1()
    with pytest.raises(PreconditionError):
        subgroup_union_check(U1, [0b01, 0b10])


def test_subgroup_union_of_nonsingleton_group():
    # {{e,g2},{g,g3}} is a copy of Z2 inside 2^Z4
    Z4 = corpus.cyclic_group(4)
    c = subgroup_union_check(Z4, [bits([0, 2]), bits([1, 3])])
    assert c.ok and c.union == 0b1111 and c.order == 2
