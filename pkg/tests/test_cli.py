import json

import pytest

from treeiso.bijections import parse_chain, parse_vef, ptuples
from treeiso.cli import main
from treeiso.derivations import check_derivation, parse_derivation
from treeiso.patterns import parse_ptuple, render_ppattern
from treeiso.semiring import normal_form, parse_poly
from treeiso.tree import parse_tree


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_equiv(capsys):
    assert run(capsys, "equiv", "X^7", "X") == (0, "true\n", "")
    assert run(capsys, "equiv", "X^2", "X")[1] == "false\n"


def test_nf_output_reparses(capsys):
    code, out, _ = run(capsys, "nf", "X^6")
    assert (code, out) == (0, "X^4 + X^2 + 2\n")
    assert normal_form(parse_poly(out)) == normal_form(parse_poly("X^6"))


def test_seven(capsys):
    assert run(capsys, "seven", "encode", *["0"] * 7)[:2] == (0, "0\n")
    code, out, _ = run(capsys, "seven", "decode", "[[[[0,0],0],0],0]")
    assert code == 0 and [parse_tree(t) for t in out.split()] == [parse_tree(t) for t in "0 0 0 0 [0,0] 0 0".split()]
    assert run(capsys, "seven", "encode", "0")[0] == 2
    assert run(capsys, "seven", "decode", "[0,")[0] == 2


def test_derive(capsys):
    code, out, _ = run(capsys, "derive", "X^7", "X")
    assert code == 0
    d = parse_derivation(out)
    assert check_derivation(d, parse_poly("X"))
    assert run(capsys, "derive", "X^2", "X")[:2] == (1, "NotEquivalent\n")


@pytest.mark.parametrize("p,q", [("X^7", "X"), ("X^13", "X"), ("1 + X^2", "X")])
def test_compile_verify_apply_end_to_end(capsys, tmp_path, p, q):
    chain_file, vef_file = tmp_path / "chain.txt", tmp_path / "vef.txt"
    assert run(capsys, "compile", p, q, "-o", str(chain_file))[0] == 0
    assert run(capsys, "compile", p, q, "--flatten", "-o", str(vef_file))[0] == 0
    parse_chain(chain_file.read_text())
    parse_vef(vef_file.read_text())
    code, out, _ = run(capsys, "verify", str(vef_file))
    assert code == 0 and out.startswith("PASS")
    for x in ptuples(parse_poly(p), 2):
        for f in (chain_file, vef_file):
            code, out, _ = run(capsys, "apply", str(f), render_ppattern(x))
            assert code == 0
            code, back, _ = run(capsys, "apply", str(f), out.strip(), "--inverse")
            assert code == 0 and parse_ptuple(back) == x


def test_compile_to_stdout_and_not_equivalent(capsys):
    code, out, _ = run(capsys, "compile", "X", "1 + X^2")
    assert code == 0 and out.startswith("chain\n")
    assert run(capsys, "compile", "X^2", "X")[0] == 1


def test_apply_outside_domain(capsys, tmp_path):
    f = tmp_path / "c.txt"
    run(capsys, "compile", "X^7", "X", "-o", str(f))
    assert run(capsys, "apply", str(f), "1:1:(0)")[0] == 1
    assert run(capsys, "apply", str(f), "1:1:(?a)")[0] == 2
    assert run(capsys, "apply", str(tmp_path / "missing.txt"), "1:1:(0)")[0] == 2


def test_verify_failure(capsys, tmp_path):
    f = tmp_path / "inj.txt"
    f.write_text("P: X^2\nQ: X\n2:1:(?a,?b) => 1:1:([?a,?b])\n")
    code, out, _ = run(capsys, "verify", str(f))
    assert code == 1 and out.startswith("FAIL at codomain gap")
    code, out, _ = run(capsys, "--json", "verify", str(f))
    data = json.loads(out)
    assert data["passed"] is False and parse_ptuple(data["counterexample"]) == parse_ptuple("1:1:(0)")
    deep = tmp_path / "deep.txt"
    deep.write_text("P: X\nQ: X\n1:1:([[?a,0],?b]) => 1:1:([[?a,0],?b])\n")
    assert run(capsys, "verify", str(deep), "--depth", "1")[0] == 2


def test_present(capsys, tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("gens: a b\n[a,0] = [0,b]\n")
    code, out, _ = run(capsys, "--json", "present", "simplify", str(f))
    assert code == 0 and json.loads(out) == {"basis": [], "elimination": {"a": "0", "b": "0"}, "result": "Free"}
    f.write_text("gens: a\na = [a,0]\n")
    code, out, _ = run(capsys, "present", "simplify", str(f))
    assert code == 0 and out.startswith("Inconsistent (axiom 5)")
    assert run(capsys, "present", "simplify")[0] == 2


def test_present_random_is_seeded(capsys, tmp_path):
    a = run(capsys, "--seed", "4", "present", "random")[1]
    b = run(capsys, "present", "random", "--seed", "4")[1]
    c = run(capsys, "present", "random", "--seed", "5")[1]
    assert a == b != c
    f = tmp_path / "r.txt"
    f.write_text(a)
    assert run(capsys, "present", "simplify", str(f))[1].startswith("Free")


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--size", "3")
    assert code == 0 and len(out.split()) == 5
    assert all(parse_tree(t) for t in out.split())
    data = json.loads(run(capsys, "enumerate", "--size", "2", "--json")[1])
    assert data["count"] == 2
    assert run(capsys, "enumerate", "--size", "-1")[0] == 2


def test_gm(capsys, monkeypatch):
    monkeypatch.setenv("TREEISO_MAX_ITER", "500")
    code, out, _ = run(capsys, "--json", "gm")
    assert code == 1 and json.loads(out)["result"] == "NonTerminated"
    monkeypatch.setenv("TREEISO_MAX_ITER", "lots")
    assert run(capsys, "gm")[0] == 2


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "nf", "X-1")[0] == 2
    assert run(capsys, "--help")[0] == 0
