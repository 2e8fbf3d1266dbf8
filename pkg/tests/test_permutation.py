import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PROGRAMS, typed_combs
from pilang.errors import ArityMismatch, IndexOutOfRange, ParseError, RefusedTooLarge
from pilang.normalize import size
from pilang.permutation import (
    AdderWiring,
    PermDense,
    PId,
    PSeq,
    PSwap,
    adder_table,
    adder_wirings,
    bits,
    compile,
    complement,
    dense_inverse,
    format_perm,
    from_bits,
    gate_library,
    identity,
    is_full_adder,
    papply,
    parse_perm,
    pcompose,
    pinvert,
    relabel,
    seq_prog,
    to_dense,
    transpositions,
)
from pilang.semantics import enumerate_values, evaluate, rank
from pilang.syntax import ONE, Prod, Sum, adjoint, annotate, parse_comb, parse_type

B = Sum(ONE, ONE)


def dense(*xs):
    return PermDense(tuple(xs))


class TestPrograms:
    def test_to_dense_composes_left_to_right(self):
        assert to_dense(PSeq(PSwap(4, 0, 1), PSwap(4, 1, 2))) == dense(2, 0, 1, 3)

    def test_papply(self):
        p = PSeq(PSwap(4, 0, 1), PSwap(4, 1, 2))
        assert [papply(p, k) for k in range(4)] == list(to_dense(p).image)
        with pytest.raises(IndexOutOfRange):
            papply(p, 4)

    def test_validation(self):
        with pytest.raises(IndexOutOfRange):
            PSwap(2, 0, 2)
        with pytest.raises(IndexOutOfRange):
            PSwap(2, 1, 1)
        with pytest.raises(ArityMismatch):
            PSeq(PSwap(2, 0, 1), PId(3))
        with pytest.raises(ValueError):
            dense(0, 0)

    def test_invert(self):
        p = seq_prog(5, [(0, 1), (1, 4), (2, 3)])
        assert pcompose(to_dense(p), to_dense(pinvert(p))) == identity(5)
        assert to_dense(pinvert(p)) == dense_inverse(to_dense(p))

    def test_text_round_trip(self):
        p = seq_prog(4, [(0, 1), (2, 3)])
        assert parse_perm(format_perm(p)) == p
        assert parse_perm("arity: 3\n(swap 0 1 ; id) ; swap 1 2") == PSeq(
            PSeq(PSwap(3, 0, 1), PId(3)), PSwap(3, 1, 2)
        )

    def test_parse_errors(self):
        with pytest.raises(ParseError):
            parse_perm("swap 0 1")
        with pytest.raises(ParseError):
            parse_perm("arity: 2\nswap 0 2")

    def test_bundled_files(self):
        assert to_dense(parse_perm((PROGRAMS / "not.perm").read_text())) == dense(1, 0)
        assert to_dense(parse_perm((PROGRAMS / "toffoli.perm").read_text())) == dense(0, 1, 2, 3, 4, 5, 7, 6)
        lib = gate_library()
        for name in ("fulladder", "fulladder_corrected"):
            prog = parse_perm((PROGRAMS / f"{name}.perm").read_text())
            assert to_dense(prog) == to_dense(lib[name])
        assert len(transpositions(lib["fulladder"])) == 12

    @given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)).filter(lambda t: t[0] != t[1]), max_size=10))
    def test_dense_matches_apply(self, swaps):
        p = seq_prog(6, swaps)
        d = to_dense(p)
        assert [papply(p, k) for k in range(6)] == list(d.image)
        assert pcompose(d, dense_inverse(d)) == identity(6)

    def test_relabel_and_complement(self):
        p = dense(1, 2, 0, 3)
        rev = dense(3, 2, 1, 0)
        assert relabel(p, rev) == complement(p)
        assert complement(complement(p)) == p


class TestCompile:
    def test_constants(self):
        assert compile(parse_comb("swap+"), parse_type("1 + (1 + 1)")) == dense(2, 0, 1)
        assert compile(parse_comb("swap*"), parse_type("(1 + 1) * (1 + 1 + 1)")) == dense(0, 2, 4, 1, 3, 5)
        assert compile(parse_comb("distl"), parse_type("(1 + 1) * (1 + 1)")) == dense(0, 2, 1, 3)

    def test_cap(self):
        with pytest.raises(RefusedTooLarge):
            compile(parse_comb("id"), parse_type("(1 + 1) * (1 + 1)"), cap=3)

    @settings(max_examples=200, deadline=None)
    @given(typed_combs())
    def test_agrees_with_evaluation(self, cd):
        comb, dom = cd
        cod = annotate(comb, dom).cod
        perm = compile(comb, dom)
        for i, v in enumerate(enumerate_values(dom)):
            assert rank(cod, evaluate(comb, v, dom)) == perm(i)

    @settings(max_examples=100, deadline=None)
    @given(typed_combs())
    def test_adjoint_compiles_to_inverse(self, cd):
        comb, dom = cd
        cod = annotate(comb, dom).cod
        assert compile(adjoint(comb), cod) == dense_inverse(compile(comb, dom))


class TestGates:
    def test_not(self):
        assert compile(gate_library()["not"], B) == dense(1, 0)

    def test_conditionals_match_gates_after_relabelling(self):
        g = gate_library()
        assert complement(compile(g["if_not"], Prod(B, B))) == to_dense(g["cnot_perm"])
        three = Prod(B, Prod(B, B))
        assert complement(compile(g["if_cnot"], three)) == to_dense(g["toffoli_perm"])
        # without relabelling the true branch lands on the low indices
        assert compile(g["if_not"], Prod(B, B)) == dense(1, 0, 2, 3)

    def test_swap_fl_programs_agree(self):
        g = gate_library()
        t = parse_type("1 + (1 + 1)")
        assert compile(g["swap_fl1"], t) == compile(g["swap_fl2"], t)


class TestAdder:
    def test_bits(self):
        assert bits(6, 4) == (0, 1, 1, 0)
        assert from_bits((1, 0, 1, 1)) == 11

    def test_twelve_swap_circuit_has_no_adder_wiring(self):
        p = to_dense(gate_library()["fulladder"])
        assert adder_wirings(p, "B") == []
        assert adder_wirings(p, "AxB") == []

    def test_corrected_circuit(self):
        p = to_dense(gate_library()["fulladder_corrected"])
        assert is_full_adder(p, (0, 1, 2, 3), (0, 1, 2, 3), "AxB")
        assert AdderWiring((0, 1, 2, 3), (0, 1, 2, 3)) in adder_wirings(p, "AxB")
        rows = adder_table(p, (0, 1, 2, 3), (0, 1, 2, 3))
        assert len(rows) == 8
        for a, b, ci, (o1, o2, s, co) in rows:
            assert (o1, o2) == (a, a ^ b)
            assert s == a ^ b ^ ci
            assert co == (a + b + ci >= 2)
