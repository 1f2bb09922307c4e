from __future__ import annotations

import itertools

import pytest

from mergedecomp import corpus
from mergedecomp.errors import PreconditionError, ResourceError
from mergedecomp.sgcore.constructions import (
    ActionPair,
    Kind,
    Side,
    WreathProduct,
    adjoin,
    augment,
    direct_product,
    flat_division,
    flat_embed,
    formal_flat,
    subset_actions,
    tilde,
    triple_product,
    with_identity,
    wreath_product,
    zero_adjunction_witness,
)
from mergedecomp.sgcore.groups import (
    composition_factors,
    cyclic_subgroups,
    is_normal,
    is_simple,
    kk_embed,
    normal_subgroups,
    quotient,
    subgroups,
)
from mergedecomp.sgcore.semigroup import opposite

from oracles import is_associative, is_hom, is_isomorphic_brute, table_of, wreath_mul


def test_adjoin_identity_and_zero():
    Z2 = corpus.cyclic_group(2)
    P = adjoin(Z2, "identity")
    assert P.kind is Kind.IDENTITY and P.semigroup.identity() == 0
    assert P.semigroup.labels == ("I", "e", "g")
    Q = adjoin(Z2, Kind.ZERO)
    assert Q.semigroup.zero() == 0
    assert is_associative(table_of(Q.semigroup))


def test_adjoin_fresh_label():
    U1 = corpus.u1().with_labels(["I", "0"])
    assert with_identity(U1).labels[0] == "I'"


def test_tilde_numbering():
    T = corpus.left_zero()
    Tt = tilde(T)
    assert Tt.n == 4 and Tt.identity() == 0 and Tt.zero() == 1
    for a, b in itertools.product(range(T.n), repeat=2):
        assert Tt.table[a + 2][b + 2] == T.table[a][b] + 2


def test_direct_product_indexing():
    A, B = corpus.cyclic_group(2), corpus.cyclic_group(3)
    P = direct_product(A, B)
    assert P.n == 6
    assert is_isomorphic_brute(table_of(P), table_of(corpus.cyclic_group(6)))


@pytest.mark.parametrize("name,S", corpus.corpus())
def test_zero_adjunction_witness(name, S):
    h = zero_adjunction_witness(S)
    assert h.is_surjective() and h.hom_failure() is None


@pytest.mark.parametrize(
    "name,side,size",
    [("LZ2", "sharp", 5), ("U1", "sharp", 4), ("trivial", "sharp", 2), ("LZ2", "flat", 3), ("U1", "flat", 4)],
)
def test_augment_sizes(name, side, size):
    assert augment(corpus.get(name), side).semigroup.n == size


@pytest.mark.parametrize("name,S", corpus.corpus())
def test_augment_flat_is_opposite_of_sharp(name, S):
    flat = augment(S, Side.FLAT)
    sharp = augment(opposite(S), Side.SHARP)
    assert flat.maps == sharp.maps
    assert flat.semigroup.table == opposite(sharp.semigroup).table


def test_augment_maps_act_correctly():
    T = corpus.full_transformation_monoid(2)
    aug = augment(T, Side.SHARP)
    for t in range(T.n):
        for x in range(T.n):
            assert aug.apply(aug.mult(t), x + 1) == T.table[x][t] + 1
    assert aug.apply(aug.const(2), 0) == 2


def test_wreath_product_matches_oracle():
    M, T = corpus.u1(), corpus.cyclic_group(2)
    W = WreathProduct(M, T)
    S = W.materialize()
    assert S.n == 8
    Mt, Tt = table_of(M), table_of(T)
    for i in range(S.n):
        for j in range(S.n):
            assert W.decode(S.table[i][j]) == wreath_mul(Mt, Tt, W.decode(i), W.decode(j))


def test_wreath_encoding_is_most_significant_first():
    W = WreathProduct(corpus.cyclic_group(3), corpus.cyclic_group(2))
    assert W.encode((1, 0), 1) == (1 * 3 + 0) * 2 + 1
    assert W.decode(W.encode((2, 1), 0)) == ((2, 1), 0)


def test_wreath_requires_monoid_and_cap():
    with pytest.raises(PreconditionError):
        wreath_product(corpus.left_zero(), corpus.u1())
    with pytest.raises(ResourceError):
        wreath_product(corpus.cyclic_group(3), corpus.full_transformation_monoid(2), cap=100)


def test_formal_flat_is_associative():
    for name in ("trivial", "U1", "LZ2", "Z2"):
        F = formal_flat(corpus.get(name))
        assert is_associative(table_of(F))


@pytest.mark.parametrize("name", ["trivial", "U1", "LZ2", "RZ2", "Z2"])
def test_flat_embed_is_injective_hom(name):
    T = corpus.get(name)
    M = corpus.chain(T.n + 1)
    h = flat_embed(T, M)
    assert h.is_injective()
    assert is_hom(table_of(h.dom), table_of(h.cod), h.map)
    assert flat_division(T, M, h=h).check()


def test_flat_embed_needs_big_enough_monoid():
    with pytest.raises(PreconditionError):
        flat_embed(corpus.u1(), corpus.u1())


def test_triple_product_projections():
    S = corpus.left_zero()
    acts = subset_actions(S)
    assert acts.failure() is None
    T = triple_product(acts)
    assert is_associative(table_of(T))
    nc, nl = acts.carrier.n, S.n
    right = [i // (nc * nl) for i in range(T.n)]
    left = [i % nl for i in range(T.n)]
    assert is_hom(table_of(T), table_of(S), right)
    assert is_hom(table_of(T), table_of(S), left)


def test_triple_product_rejects_bad_actions():
    U1 = corpus.u1()
    bad = ActionPair(U1, U1, U1, ((1, 0), (1, 0)), ((0, 0), (1, 1)))
    with pytest.raises(PreconditionError):
        triple_product(bad)


# -- groups -----------------------------------------------------------------


def test_cyclic_subgroups_z4():
    Z4 = corpus.cyclic_group(4)
    got = sorted(tuple(H.elements()) for H in cyclic_subgroups(Z4))
    assert got == [(0,), (0, 1, 2, 3), (0, 2)]


def test_subgroups_and_normality_s3():
    S3 = corpus.symmetric_group(3)
    subs = subgroups(S3)
    assert sorted(bin(h).count("1") for h in subs) == [1, 2, 2, 2, 3, 6]
    assert sorted(bin(h).count("1") for h in normal_subgroups(S3)) == [1, 3, 6]
    assert not is_simple(S3) and is_simple(corpus.cyclic_group(3))


def test_composition_factors():
    assert [F.n for F in composition_factors(corpus.cyclic_group(4)).factors] == [2, 2]
    assert sorted(F.n for F in composition_factors(corpus.symmetric_group(3)).factors) == [2, 3]
    assert composition_factors(corpus.trivial()).factors == ()
    with pytest.raises(PreconditionError):
        composition_factors(corpus.u1())


def test_quotient_z4_by_z2():
    Z4 = corpus.cyclic_group(4)
    q = quotient(Z4, 0b0101)
    assert q.group.n == 2 and q.group.is_group()
    assert q.of == (0, 1, 0, 1)


@pytest.mark.parametrize("name,N", [("Z4", 0b0101), ("S3", None), ("K4", 0b0011)])
def test_kk_embed(name, N):
    G = corpus.get(name)
    if N is None:
        N = next(h for h in normal_subgroups(G) if bin(h).count("1") == 3)
    assert is_normal(G, N)
    kk = kk_embed(G, N)
    assert kk.hom.is_injective()
    assert is_hom(table_of(G), table_of(kk.hom.cod), kk.hom.map)
    assert kk.hom.cod.n == kk.normal.n ** kk.quotient.group.n * kk.quotient.group.n
