import json
import subprocess
import sys

import pytest

from conftest import GOLDEN, PROGRAMS
from pilang.cli import main


def pi(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def prog(name):
    return PROGRAMS / name


class TestRun:
    def test_value(self, capsys):
        assert pi(capsys, "run", prog("not.pi"), "--value", "inl ()") == (0, "inr ()\n", "")

    def test_reverse(self, capsys):
        code, out, _ = pi(capsys, "run", prog("if_not.pi"), "--value", "(inl (), inl ())", "--reverse")
        assert code == 0 and out == "(inl (), inr ())\n"

    def test_trace_golden(self, capsys):
        t = "1 + (1 + 1)"
        code, out, _ = pi(
            capsys, "run", prog("reverse.pi"), "--in", f"({t}) * (({t}) * ({t}))",
            "--value", "(inl (), (inr inl (), inr inr ()))", "--trace",
        )
        assert code == 0
        assert out == (GOLDEN / "reverse_trace_slots.txt").read_text()

    def test_trace_json(self, capsys):
        code, out, _ = pi(
            capsys, "run", prog("reverse.pi"), "--value", "(inl (), (inl (), inr ()))", "--trace", "--format", "json"
        )
        steps = json.loads(out)
        assert [s["combinator"] for s in steps] == ["swap*", "(swap* * id)", "assocr*"]
        assert steps[-1]["value"] == "(inr (), (inl (), inl ()))"

    def test_ill_typed_value(self, capsys):
        code, out, err = pi(capsys, "run", prog("not.pi"), "--value", "()")
        assert code == 1 and out == ""
        assert err.startswith("ERROR IllTypedValue:")

    def test_parse_error(self, capsys):
        code, _, err = pi(capsys, "run", prog("not.pi"), "--value", "inl (")
        assert code == 1 and err.startswith("ERROR ParseError:")

    def test_type_error(self, capsys, tmp_path):
        f = tmp_path / "bad.pi"
        f.write_text("type: 1 + 1 <-> 1 + 1\nswap*\n")
        code, _, err = pi(capsys, "run", f, "--value", "inl ()")
        assert code == 1 and err.startswith("ERROR TypeError:")

    def test_missing_file(self, capsys):
        code, _, err = pi(capsys, "run", "/nonexistent.pi", "--value", "()")
        assert code == 2 and "cannot read" in err

    def test_usage(self, capsys):
        assert pi(capsys, "run", prog("not.pi"))[0] == 2
        assert pi(capsys)[0] == 2
        assert pi(capsys, "frobnicate")[0] == 2


class TestOtherCommands:
    def test_invert(self, capsys):
        code, out, _ = pi(capsys, "invert", prog("reverse.pi"))
        assert code == 0
        assert out.splitlines()[1] == "((assocl* ; (swap* * id)) ; swap*)"

    def test_perm(self, capsys):
        assert pi(capsys, "perm", prog("not.pi"))[:2] == (0, "[1 0]\n")
        assert pi(capsys, "perm", prog("cnot.perm"))[:2] == (0, "[0 1 3 2]\n")
        code, out, _ = pi(capsys, "perm", prog("toffoli.perm"), "--format", "json")
        assert json.loads(out) == {"arity": 8, "image": [0, 1, 2, 3, 4, 5, 7, 6]}

    def test_perm_needs_type(self, capsys, tmp_path):
        f = tmp_path / "p.pi"
        f.write_text("swap+\n")
        assert pi(capsys, "perm", f)[0] == 2
        assert pi(capsys, "perm", f, "--in", "1 + 0")[:2] == (0, "[0]\n")

    def test_equiv(self, capsys):
        code, out, _ = pi(capsys, "equiv", prog("swapfl1.pi"), prog("swapfl2.pi"))
        assert code == 0 and out == "equivalent (3/3 values agree)\n"

    def test_not_equivalent(self, capsys, tmp_path):
        f = tmp_path / "id.pi"
        f.write_text("type: 1 + 1 <-> 1 + 1\nid\n")
        code, out, err = pi(capsys, "equiv", f, prog("not.pi"))
        assert code == 1 and out.startswith("not equivalent (0/2 values agree)")
        assert err.startswith("ERROR NotEquivalent:")

    def test_equiv_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("PI_BRUTE_FORCE_CAP", "2")
        code, _, err = pi(capsys, "equiv", prog("swapfl1.pi"), prog("swapfl2.pi"))
        assert code == 1 and err.startswith("ERROR RefusedTooLarge:")
        monkeypatch.setenv("PI_BRUTE_FORCE_CAP", "lots")
        assert pi(capsys, "equiv", prog("swapfl1.pi"), prog("swapfl2.pi"))[0] == 2

    def test_normalize(self, capsys):
        code, out, _ = pi(capsys, "normalize", "--type", "1 * (1 + 1)")
        assert code == 0
        assert out.splitlines()[1] == ": 1 * (1 + 1) <-> 1 + (1 + 0)"

    def test_prove(self, capsys):
        assert pi(capsys, "prove", prog("swapfl.piproof"))[:2] == (0, "accepted (10 steps)\n")

    def test_prove_rejects(self, capsys, tmp_path):
        text = prog("swapfl.piproof").read_text().replace("by hexagonl_plus_r ; id2", "by id2 ; id2")
        f = tmp_path / "bad.piproof"
        f.write_text(text)
        code, out, err = pi(capsys, "prove", f)
        assert code == 1 and out.startswith("rejected at step 5: NotExact:")
        assert err.startswith("ERROR ProofRejected:")

    def test_rules(self, capsys):
        code, out, _ = pi(capsys, "rules")
        assert code == 0 and "idl_seq_l" in out
        code, out, _ = pi(capsys, "rules", "--dump")
        records = json.loads(out)
        assert len(records) == 108
        assert {"name", "base", "group", "line", "direction", "lhs", "rhs", "roles", "partner"} <= set(records[0])


@pytest.mark.parametrize(
    "argv",
    [
        ["rules", "--format", "json"],
        ["normalize", "--type", "(1 + 1) * (1 + 1)", "--format", "json"],
        ["perm", str(PROGRAMS / "if_cnot.pi"), "--format", "json"],
        ["prove", str(PROGRAMS / "swapfl.piproof"), "--format", "json"],
    ],
)
def test_json_is_deterministic(capsys, argv):
    first = pi(capsys, *argv)
    second = pi(capsys, *argv)
    assert first == second and first[0] == 0
    json.loads(first[1])


def test_console_script_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "pilang.cli", "perm", str(PROGRAMS / "not.pi")],
        capture_output=True, text=True, check=True,
    )
    assert out.stdout == "[1 0]\n"
