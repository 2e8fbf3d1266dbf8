import random

import pytest
from hypothesis import given, settings

from conftest import typed_combs, types
from pilang.errors import IllTypedValue, IndexOutOfRange, RefusedTooLarge, TypeCheckError
from pilang.normalize import size
from pilang.syntax import (
    ONE,
    UNIT,
    ZERO,
    Const,
    InL,
    InR,
    Pair,
    Prod,
    Sum,
    adjoint,
    annotate,
    parse_comb,
    parse_type,
    parse_value,
)
from pilang.semantics import (
    compare,
    enumerate_values,
    evaluate,
    evaluate_rev,
    obs_equiv,
    rank,
    seq_components,
    trace,
    unrank,
)

B = Sum(ONE, ONE)
T, F = InL(UNIT), InR(UNIT)


def run(text, value, ty=None):
    return evaluate(parse_comb(text), parse_value(value), None if ty is None else parse_type(ty))


class TestReductions:
    @pytest.mark.parametrize(
        "comb, value, out",
        [
            ("id", "inl ()", "inl ()"),
            ("swap+", "inl ()", "inr ()"),
            ("unite+l", "inr ()", "()"),
            ("uniti+l", "()", "inr ()"),
            ("unite+r", "inl ()", "()"),
            ("assocl+", "inr inl ()", "inl inr ()"),
            ("assocl+", "inr inr ()", "inr ()"),
            ("assocr+", "inl inr ()", "inr inl ()"),
            ("unite*l", "((), inl ())", "inl ()"),
            ("uniti*r", "inl ()", "(inl (), ())"),
            ("swap*", "(inl (), inr ())", "(inr (), inl ())"),
            ("assocl*", "((), (inl (), inr ()))", "(((), inl ()), inr ())"),
            ("dist", "(inr (), inl ())", "inr ((), inl ())"),
            ("factor", "inl ((), ())", "(inl (), ())"),
            ("distl", "(inl (), inr ())", "inr (inl (), ())"),
            ("factorl", "inl ((), ())", "((), inl ())"),
        ],
    )
    def test_constant(self, comb, value, out):
        assert evaluate(parse_comb(comb), parse_value(value)) == parse_value(out)

    def test_combinators(self):
        assert run("swap+ ; swap+", "inl ()") == T
        assert run("swap+ + id", "inl inl ()", "(1 + 1) + 1") == InL(F)
        assert run("swap+ * id", "(inl (), inl ())") == Pair(F, T)

    def test_not_word(self):
        assert run("swap+ * (swap+ * swap+)", "(inl (), (inr (), inl ()))") == Pair(F, Pair(T, F))

    def test_ill_typed_value(self):
        with pytest.raises(IllTypedValue):
            run("swap+", "()", "1 + 1")

    def test_ill_typed_program(self):
        with pytest.raises(TypeCheckError):
            run("swap*", "inl ()")

    def test_reverse(self):
        assert evaluate_rev(parse_comb("uniti+l"), InR(UNIT)) == UNIT


class TestEnumeration:
    def test_order(self):
        t = parse_type("(1 + 1) * (1 + 1 + 1)")
        vals = enumerate_values(t)
        assert len(vals) == 6
        assert vals[0] == Pair(T, InL(UNIT))
        assert vals[1] == Pair(T, InR(InL(UNIT)))
        assert vals[3] == Pair(F, InL(UNIT))

    def test_empty(self):
        assert enumerate_values(ZERO) == []
        assert enumerate_values(Prod(ZERO, B)) == []

    def test_unrank_bounds(self):
        with pytest.raises(IndexOutOfRange):
            unrank(B, 2)
        with pytest.raises(IndexOutOfRange):
            unrank(ZERO, 0)

    @given(types)
    def test_rank_unrank_bijection(self, t):
        vals = enumerate_values(t)
        assert len(vals) == size(t)
        for i, v in enumerate(vals):
            assert rank(t, v) == i
            assert unrank(t, i) == v


class TestEquivalence:
    def test_not_equal_automorphisms(self):
        report = compare(Const("id"), Const("swap+"), B)
        assert not report.equivalent
        assert (report.agree, report.total) == (0, 2)
        assert report.counterexample == (T, T, F)
        assert not obs_equiv(Const("id"), Const("swap+"), B)

    def test_double_swap_is_id(self):
        assert obs_equiv(parse_comb("swap+ ; swap+"), Const("id"), B)

    def test_cap(self):
        big = parse_type("(1 + 1) * ((1 + 1) * (1 + 1))")
        with pytest.raises(RefusedTooLarge):
            compare(Const("id"), Const("id"), big, cap=4)

    def test_codomains_must_agree(self):
        with pytest.raises(TypeCheckError):
            compare(Const("id"), Const("uniti+l"), B)

    def test_open_codomains_unify(self):
        assert obs_equiv(Const("factorzl"), parse_comb("factorzr ; swap*"), ZERO)


class TestTrace:
    def test_reverse_bits(self):
        t = trace(parse_comb("swap* ; (swap* * id) ; assocr*"), parse_value("(inl (), (inl (), inr ()))"))
        assert [str(c) for c, _ in t.steps] == ["swap*", "(swap* * id)", "assocr*"]
        assert t.result == Pair(F, Pair(T, T))

    def test_flattens_any_association(self):
        c = parse_comb("(swap+ ; swap+) ; swap+")
        assert len(seq_components(c)) == 3

    def test_no_seq(self):
        t = trace(Const("swap+"), T)
        assert len(t.steps) == 1 and t.result == F


@settings(max_examples=150, deadline=None)
@given(typed_combs())
def test_adjoint_inverts(cd):
    comb, dom = cd
    cod = annotate(comb, dom).cod
    back = adjoint(comb)
    for v in enumerate_values(dom):
        w = evaluate(comb, v, dom)
        assert evaluate(back, w, cod) == v
        assert evaluate_rev(comb, w, cod) == v


@settings(max_examples=150, deadline=None)
@given(typed_combs())
def test_trace_matches_evaluate(cd):
    comb, dom = cd
    for v in enumerate_values(dom)[:4]:
        assert trace(comb, v, dom).result == evaluate(comb, v, dom)
