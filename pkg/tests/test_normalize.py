import pytest
from hypothesis import given, settings

from conftest import types
from pilang.normalize import canonical_type, iso_witness, normalizer, sharp, size
from pilang.permutation import compile
from pilang.semantics import enumerate_values, evaluate
from pilang.syntax import ONE, ZERO, Prod, Sum, TVar, check, parse_comb, parse_type


def test_size():
    assert size(ZERO) == 0 and size(ONE) == 1
    assert size(parse_type("(1 + 1) * (1 + 1 + 1)")) == 6
    assert size(Prod(ZERO, TVar("x"))) == 0


def test_size_of_open_type():
    with pytest.raises(ValueError):
        size(Sum(ONE, TVar("x")))


def test_canonical_type():
    assert canonical_type(0) == ZERO
    assert canonical_type(3) == parse_type("1 + (1 + (1 + 0))")
    assert sharp(parse_type("(1 + 1) * 1")) == canonical_type(2)
    with pytest.raises(ValueError):
        canonical_type(-1)


@pytest.mark.parametrize(
    "text, comb",
    [
        ("0", "id"),
        ("1", "uniti+r"),
        ("0 + 1", "unite+l ; uniti+r"),
        ("1 + 0", "id + id"),
        ("0 * 1", "absorbr"),
        ("1 * 0", "unite*l ; id"),
    ],
)
def test_normalizer_clauses(text, comb):
    assert normalizer(parse_type(text)) == parse_comb(comb)


def test_normalizer_rejects_variables():
    with pytest.raises(ValueError):
        normalizer(TVar("x"))


@settings(max_examples=300, deadline=None)
@given(types)
def test_normalizer_types_and_is_bijection(b):
    n = size(b)
    c = normalizer(b)
    check(c, b, canonical_type(n))
    assert sorted(compile(c, b).image) == list(range(n))


@settings(max_examples=100, deadline=None)
@given(types, types)
def test_iso_witness(b1, b2):
    if size(b1) != size(b2):
        with pytest.raises(ValueError):
            iso_witness(b1, b2)
        return
    c = iso_witness(b1, b2)
    check(c, b1, b2)
    outs = {evaluate(c, v, b1) for v in enumerate_values(b1)}
    assert len(outs) == size(b1)
