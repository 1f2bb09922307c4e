from __future__ import annotations

from dataclasses import replace

import pytest

from mergedecomp import corpus
from mergedecomp.errors import PreconditionError
from mergedecomp.psat import henckell_pointlikes
from mergedecomp.sgcore.homs import FreeHom
from mergedecomp.sgcore.semigroup import is_aperiodic
from mergedecomp.witness import (
    PhiHom,
    RelMorphism,
    aperiodic_cyclic,
    bound_check_phi0,
    case_split,
    construct_witness,
    format_witness,
    generator_phi,
    k_bound,
    k_statement,
    k_value,
    pointlikes_with_certificate,
    preimage_union_map,
    witness_failures,
)

from oracles import eval_set_word, eval_word, is_aperiodic_table, k_formula, pointlikes, table_of, words


def test_k_formula_values():
    assert k_value(2, 3) == k_formula(2, 3) == 15
    assert k_value(1, 1) == 1
    assert k_value(3, 2) == 2 * 2 + 3
    assert k_statement(1, 2) == 1


def test_k_bound_for_z3_on_two_letters():
    Z3 = corpus.cyclic_group(3)
    phi = PhiHom(("a", "b"), Z3, {"a": 0b001, "b": 0b010})
    assert phi.S_phi == 0b111 and phi.image_count == 2
    assert k_bound(phi) == 15


def test_phihom_validation_and_evaluation():
    Z3 = corpus.cyclic_group(3)
    with pytest.raises(PreconditionError):
        PhiHom(("a",), Z3, {"a": 0})
    with pytest.raises(PreconditionError):
        PhiHom((), Z3, {})
    phi = PhiHom(("a", "b"), Z3, {"a": 0b010, "b": 0b011})
    t = table_of(Z3)
    images = {"a": {1}, "b": {0, 1}}
    for w in words("ab", 4):
        got = phi(w)
        assert {x for x in range(3) if got >> x & 1} == eval_set_word(t, images, w)


def test_aperiodic_cyclic():
    C = aperiodic_cyclic(4)
    assert is_aperiodic_table(table_of(C))
    assert C.labels == ("x", "x2", "x3", "x4")


def test_case_split_examples():
    Z2 = corpus.cyclic_group(2)
    assert case_split(PhiHom(("a",), Z2, {"a": 0b10}))[0] == "case1"
    C21 = corpus.cyclic_semigroup(2, 1)
    assert case_split(generator_phi(C21))[0] == "case2"
    LZ2 = corpus.left_zero()
    tag = case_split(generator_phi(LZ2))
    assert tag[0] == "case3"


def test_preimage_union_map_against_words():
    S = corpus.full_transformation_monoid(2)
    phi = generator_phi(S)
    res = construct_witness(phi)
    t = table_of(S)
    images = {a: {x for x in range(S.n) if phi.images[a] >> x & 1} for a in phi.alphabet}
    Tt = table_of(res.T)
    gens = dict(res.psi.gen_map)
    brute = [set() for _ in range(res.T.n)]
    for w in words(phi.alphabet, 7):
        brute[eval_word(Tt, gens, w)] |= eval_set_word(t, images, w)
    P = preimage_union_map(res.psi, phi)
    assert [{x for x in range(S.n) if X >> x & 1} for X in P] == brute


def test_preimage_union_map_alphabet_mismatch():
    U1 = corpus.u1()
    psi = FreeHom(("z",), U1, {"z": 0})
    with pytest.raises(PreconditionError):
        preimage_union_map(psi, generator_phi(U1))


@pytest.mark.parametrize("name,S", corpus.corpus())
def test_certificate_on_corpus(name, S):
    cert = pointlikes_with_certificate(S)
    assert cert.ok, cert.checks
    w = cert.witness
    assert is_aperiodic(w.T)
    assert w.depth <= k_bound(w.phi)
    if S.n <= 5:
        assert {frozenset(X.elements()) for X in cert.family} == pointlikes(table_of(S))
    assert cert.family == henckell_pointlikes(S)


def test_every_fiber_is_pointlike_and_covers():
    S = corpus.cyclic_group(3)
    cert = pointlikes_with_certificate(S)
    sat = henckell_pointlikes(S).members
    assert all(F in sat for F in cert.witness.P)
    assert 0b111 in cert.witness.P


def test_case3_bound_check():
    LZ2 = corpus.left_zero()
    res = construct_witness(generator_phi(LZ2))
    assert res.case == "case3" and res.bound_ok
    assert bound_check_phi0(res.phi, res.phi0)
    with pytest.raises(PreconditionError):
        bound_check_phi0(generator_phi(corpus.cyclic_group(2)), res.phi0)


def test_case1_records_local_group():
    Z3 = corpus.cyclic_group(3)
    res = construct_witness(PhiHom(("a",), Z3, {"a": 0b010}))
    assert res.case == "case1" and res.local_group.ok
    assert res.T.n == 1 and res.P == (0b111,)
    assert any(c.order == 3 for c in res.union_checks)


def test_witness_failures_detects_tampering():
    res = construct_witness(generator_phi(corpus.u1()))
    assert witness_failures(res)[0] == []
    bad = replace(res, P=tuple(0b11 for _ in res.P))
    assert witness_failures(bad)[0]
    deep = replace(res, depth=res.k + 1)
    assert any("exceeds" in f for f in witness_failures(deep)[0])


def test_relmorphism_failure():
    U1 = corpus.u1()
    rho = RelMorphism(U1, U1, (0b01, 0b10))
    assert rho.ok
    # fibers must cover S
    assert not RelMorphism(U1, U1, (0b01, 0b01)).ok


def test_c21_statement_bound_differs():
    cert = pointlikes_with_certificate(corpus.cyclic_semigroup(2, 1))
    assert cert.witness.depth <= cert.k
    assert cert.k_statement < cert.witness.depth


def test_format_witness_mentions_case():
    text = format_witness(construct_witness(generator_phi(corpus.left_zero())))
    assert "case3" in text
