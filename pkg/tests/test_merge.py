from __future__ import annotations

import itertools
import random

import pytest

from mergedecomp import corpus
from mergedecomp.errors import PreconditionError
from mergedecomp.merge import (
    MergeInput,
    build_merge,
    cover_input,
    division_from_cover,
    f_map,
    generator_images,
    lz2_input,
    mu,
    psi0,
    random_merge_input,
    s_table,
    tau,
    u1_input,
    verify_merge,
    words_upto,
)
from mergedecomp.sgcore.homs import FreeHom

from oracles import divides_by_map, generated, table_of, words


def oracle_tau(w, inp):
    """Factor ``w = v2 u v1`` greedily and evaluate each part letter by letter."""
    A1 = set(inp.A1)
    w = list(w)
    v2 = list(itertools.takewhile(lambda a: a not in A1, w))
    rest = w[len(v2):]
    v1 = list(itertools.takewhile(lambda a: a in A1, reversed(rest)))[::-1]
    u = rest[: len(rest) - len(v1)]

    def ev(hom, word):
        T = hom.cod
        acc = hom.gen_map[word[0]]
        for a in word[1:]:
            acc = T.table[acc][hom.gen_map[a]]
        return acc

    p0 = 0
    if u:
        pairs = []
        for is1, grp in itertools.groupby(u, key=lambda a: a in A1):
            grp = list(grp)
            if is1:
                pairs.append([ev(inp.psi1, grp)])
            else:
                pairs[-1].append(ev(inp.psi2, grp))
        p0 = ev(inp.chi, [tuple(p) for p in pairs]) + 1
    return (
        ev(inp.psi2, v2) + 1 if v2 else 0,
        p0,
        ev(inp.psi1, v1) + 1 if v1 else 0,
    )


def test_s_table_lz2_example():
    assert s_table(("a",), lz2_input()) == (0, 1, 0, 1)


def test_s_table_rejects_bad_words():
    with pytest.raises(PreconditionError):
        s_table((), lz2_input())
    with pytest.raises(PreconditionError):
        s_table(("b",), lz2_input())


def test_lz2_tau_examples():
    inp = lz2_input()
    assert tau(("a",), inp) == (0, 0, 1)
    assert tau(("b",), inp) == (1, 0, 0)
    assert tau(("a", "b"), inp) == (0, 1, 0)
    assert tau(("b", "a", "b", "a"), inp) == (1, 1, 1)


def test_mu_blocks():
    inp = u1_input()
    (a,), (b,) = inp.A1, inp.A2
    assert mu((a, b, a, a, b), inp) == [(0, 0), (0, 0)]
    with pytest.raises(PreconditionError):
        mu((b, a), inp)
    with pytest.raises(PreconditionError):
        psi0((a,), inp)
    with pytest.raises(PreconditionError):
        mu(("zz",), inp)


def test_generator_images_have_expected_f():
    inp = lz2_input()
    im = generator_images(inp)
    assert f_map(im["a"]) == (0, 0, 1)
    assert f_map(im["b"]) == (1, 0, 0)


@pytest.mark.parametrize("make", [lz2_input, u1_input])
def test_fixture_merge_against_oracle(make):
    inp = make()
    md = build_merge(inp)
    for w in words(inp.alphabet, 5):
        assert md.f(md.image_of(w)) == oracle_tau(w, inp) == tau(w, inp)


def test_verify_merge_counts_words():
    inp = lz2_input()
    rep = verify_merge(inp, 4)
    assert rep.ok
    assert rep.words_checked == 2 + 4 + 8 + 16
    assert sum(1 for _ in words_upto(inp.alphabet, 4)) == rep.words_checked


def test_verify_merge_rejects_zero_length():
    with pytest.raises(PreconditionError):
        verify_merge(lz2_input(), 0)


def test_random_inputs_against_oracle():
    rng = random.Random(7)
    for _ in range(15):
        inp = random_merge_input(rng, 3, 2)
        md = build_merge(inp)
        for w in words(inp.alphabet, 4):
            assert md.f(md.image_of(w)) == oracle_tau(w, inp)


def test_merge_input_validation():
    inp = lz2_input()
    with pytest.raises(PreconditionError, match="disjoint"):
        MergeInput(("a",), ("a",), inp.psi1, inp.psi1, inp.chi)
    empty_chi = FreeHom(((0, 0),), inp.T0, {(0, 0): 0})
    T2 = corpus.left_zero()
    psi2 = FreeHom(("b",), T2, {"b": 0})
    with pytest.raises(PreconditionError, match="chi undefined"):
        MergeInput(("a",), ("b",), inp.psi1, psi2, empty_chi)


def test_cover_input_requires_generation():
    S = corpus.chain(3)
    with pytest.raises(PreconditionError):
        cover_input(S, [0], [1])


def oracle_covers(t):
    """Pairs of proper subsemigroups that together generate everything."""
    n = len(t)
    full = frozenset(range(n))
    subs = [X for X in map(frozenset, (c for k in range(1, n) for c in itertools.combinations(range(n), k))) if generated(t, X) == X]
    return [(X, Y) for X in subs for Y in subs if generated(t, X | Y) == full]


@pytest.mark.parametrize("name", ["U1", "LZ2", "RZ2", "chain3", "K4", "T2"])
def test_division_from_cover_oracle(name):
    S = corpus.get(name)
    t = table_of(S)
    covers = oracle_covers(t)
    assert covers
    for X, Y in covers:
        d = division_from_cover(S, sorted(X), sorted(Y)).division
        assert divides_by_map(t, table_of(d.host), d.sub, d.map)
