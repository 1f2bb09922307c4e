from __future__ import annotations

import io

import pytest

from mergedecomp import corpus
from mergedecomp.cli import EXIT_ERROR, EXIT_INSEPARABLE, EXIT_OK, main, parse_args, run
from mergedecomp.sgcore.io import parse_sg

from oracles import is_isomorphic_brute, table_of


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(parse_args([str(a) for a in argv]), out, err)
    return code, out.getvalue(), err.getvalue()


def test_pointlikes_z2(data_dir):
    code, out, _ = call("pointlikes", data_dir / "z2.sg")
    assert code == EXIT_OK
    assert out == "{e}\n{g}\n{e,g}\n"


def test_gen_t2(data_dir):
    code, out, _ = call("gen", data_dir / "t2.tgen")
    assert code == EXIT_OK
    S = parse_sg(out)
    assert S.n == 4
    ref = parse_sg((data_dir / "t2.sg").read_text())
    assert is_isomorphic_brute(table_of(S), table_of(ref))


@pytest.mark.parametrize("name", ["u1", "lz2", "z4", "c32", "t2"])
def test_corpus_files_parse(data_dir, name):
    S = parse_sg((data_dir / f"{name}.sg").read_text())
    assert S.n == corpus.get({"u1": "U1", "lz2": "LZ2", "z4": "Z4", "c32": "C32", "t2": "T2"}[name]).n


def test_decompose_z4(data_dir):
    code, out, _ = call("decompose", data_dir / "z4.sg")
    assert code == EXIT_OK
    assert "leaves: group[2] x2" in out
    assert out.rstrip().endswith("verify: ok")


def test_witness_c21(data_dir):
    code, out, _ = call("witness", data_dir / "c21.sg")
    assert code == EXIT_OK
    assert "k(phi) = 3" in out and "cross-validation: agree" in out


def test_merge_check_fixture():
    code, out, _ = call("merge-check", "--fixture", "lz2", "--max-len", "3")
    assert code == EXIT_OK
    assert "fixture: lz2" in out and "words checked: 14" in out and "counterexamples: 0" in out


def test_merge_check_file_with_generators(data_dir):
    code, out, _ = call("merge-check", data_dir / "u1.sg", "--t1", "1", "--t2", "0", "--max-len", "3")
    assert code == EXIT_OK
    assert "input: u1.sg" in out and "division of S into the merge image: ok" in out


def test_merge_check_cyclic_needs_generators(data_dir):
    code, _, err = call("merge-check", data_dir / "c21.sg")
    assert code == EXIT_ERROR and "cyclic" in err


def test_separate_verdicts(data_dir):
    code, out, _ = call("separate", data_dir / "even.dfa", data_dir / "odd.dfa")
    assert (code, out) == (EXIT_INSEPARABLE, "INSEPARABLE witness={aa,a}\n")
    code, out, _ = call("separate", data_dir / "a_first.dfa", data_dir / "b_first.dfa")
    assert (code, out) == (EXIT_OK, "SEPARABLE\n")


def test_separate_rejects_empty_word(data_dir):
    code, _, err = call("separate", data_dir / "eps.dfa", data_dir / "odd.dfa")
    assert code == EXIT_ERROR and "empty word" in err


def test_cap_error_exit_code(data_dir):
    code, _, err = call("gen", data_dir / "t2.tgen", "--cap", "2")
    assert code == EXIT_ERROR and "cap" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["pointlikes"],
        ["pointlikes", "no/such/file.sg"],
        ["merge-check"],
        ["merge-check", "--fixture", "lz2", "--t1", "a"],
        ["separate", "data/even.dfa"],
        ["bogus"],
        ["pointlikes", "data/z2.sg", "--cap", "0"],
    ],
)
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as ei:
        parse_args(argv)
    assert ei.value.code == EXIT_ERROR


def test_bad_sg_file(tmp_path):
    p = tmp_path / "bad.sg"
    p.write_text("n 2\n0 1\n")
    code, _, err = call("pointlikes", p)
    assert code == EXIT_ERROR and "error:" in err


def test_selftest_subset():
    code, out, _ = call("selftest", "--only", "8")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "1/1 criteria passed"


def test_main_entry(data_dir, capsys):
    assert main(["pointlikes", str(data_dir / "u1.sg")]) == EXIT_OK
    assert capsys.readouterr().out == "{1}\n{0}\n"
