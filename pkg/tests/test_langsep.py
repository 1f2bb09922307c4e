from __future__ import annotations

import pytest

from mergedecomp.errors import FormatError, PreconditionError
from mergedecomp.langsep import (
    Dfa,
    build_recognizer,
    common_word,
    decide_fo_separability,
    fixture_dfa,
    fixture_recognizers,
    format_dfa,
    parse_dfa,
)
from mergedecomp.sgcore.semigroup import is_aperiodic

from oracles import run_dfa, words


def test_parse_format_roundtrip():
    for name in ("even_a", "odd_a", "a_first", "b_first"):
        d = fixture_dfa(name)
        assert parse_dfa(format_dfa(d)) == d


def test_fixture_languages():
    even, odd = fixture_dfa("even_a"), fixture_dfa("odd_a")
    for k in range(0, 7):
        w = "a" * k
        assert even.accepts(w) == (k > 0 and k % 2 == 0)
        assert odd.accepts(w) == (k % 2 == 1)
    af, bf = fixture_dfa("a_first"), fixture_dfa("b_first")
    for w in words("ab", 4):
        assert af.accepts(w) == (w[0] == "a")
        assert bf.accepts(w) == (w[0] == "b")


@pytest.mark.parametrize(
    "text,msg,line",
    [
        ("states 1\nalphabet a\ninit 0\nfinal 0\n", "missing transition", None),
        ("states 1\nalphabet a\ninit 0\nfinal 0\ntrans 0 a 0\ntrans 0 a 0\n", "duplicate", 6),
        ("states 1\nalphabet a\ninit 0\nfinal 0\nbogus\n", "unknown directive", 5),
        ("states 1\nalphabet a\ninit 0\nfinal 0\ntrans 0 b 0\n", "unknown letter", 5),
        ("states 1\nalphabet a\nfinal 0\ntrans 0 a 0\n", "missing 'init'", None),
        ("states 2\nalphabet a\ninit 0\nfinal 0\ntrans 0 a 5\n", "out of range", 5),
    ],
)
def test_parse_errors(text, msg, line):
    with pytest.raises(FormatError, match=msg) as ei:
        parse_dfa(text)
    assert ei.value.line == line


def test_dfa_validation():
    with pytest.raises(PreconditionError):
        Dfa(1, ("a",), 0, frozenset({0}), ((0, 0),))


def test_common_word():
    af, bf = fixture_dfa("a_first"), fixture_dfa("b_first")
    assert common_word(af, bf) is None
    assert common_word(af, af) == ("a",)
    ends_a = parse_dfa("states 2\nalphabet a b\ninit 0\nfinal 1\ntrans 0 a 1\ntrans 0 b 0\ntrans 1 a 1\ntrans 1 b 0\n")
    assert common_word(bf, ends_a) == ("b", "a")


def test_recognizer_recognizes_both_languages():
    for _, rec in fixture_recognizers():
        for w in words(rec.d1.alphabet, 6):
            assert rec.accepts(1, w) == rec.d1.accepts(w)
            assert rec.accepts(2, w) == rec.d2.accepts(w)


def test_recognizer_semigroups():
    recs = dict(fixture_recognizers())
    assert recs["parity"].S.n == 2 and recs["parity"].S.is_group()
    assert recs["parity"].S.labels == ("a", "aa")
    assert is_aperiodic(recs["first_letter"].S)


def test_recognizer_matches_oracle_runs():
    d1, d2 = fixture_dfa("a_first"), fixture_dfa("b_first")
    rec = build_recognizer(d1, d2)
    delta = [list(r) for r in d1.delta]
    for w in words("ab", 5):
        assert (run_dfa(delta, list(d1.alphabet), d1.init, w) in d1.finals) == rec.accepts(1, w)


def test_parity_is_inseparable():
    v = decide_fo_separability(fixture_dfa("even_a"), fixture_dfa("odd_a"))
    assert not v.separable
    assert v.format() == "INSEPARABLE witness={aa,a}"


def test_first_letter_is_separable():
    v = decide_fo_separability(fixture_dfa("a_first"), fixture_dfa("b_first"))
    assert v.separable and v.format() == "SEPARABLE"


def test_overlapping_languages_are_inseparable_by_word():
    af = fixture_dfa("a_first")
    v = decide_fo_separability(af, af)
    assert v.format() == "INSEPARABLE witness=word:a"


def test_empty_word_rejected():
    eps = parse_dfa("states 1\nalphabet a\ninit 0\nfinal 0\ntrans 0 a 0\n")
    with pytest.raises(PreconditionError, match="empty word"):
        decide_fo_separability(eps, fixture_dfa("odd_a"))


def test_alphabet_mismatch():
    with pytest.raises(PreconditionError, match="alphabet"):
        decide_fo_separability(fixture_dfa("odd_a"), fixture_dfa("a_first"))
