import random

from hypothesis import given
from hypothesis import strategies as st

from pilang.gen import applicable_constants, instantiate_rule, random_between, random_comb, random_type, random_value
from pilang.normalize import size
from pilang.rewrite import lookup
from pilang.syntax import ONE, ZERO, Prod, Sum, check, comb_depth, has_type, is_ground, parse_type

seeds = st.integers(0, 2**32 - 1)


@given(seeds)
def test_random_type_bounded(seed):
    t = random_type(random.Random(seed), 8, 3)
    assert is_ground(t) and size(t) <= 8


@given(seeds)
def test_random_value_has_type(seed):
    rng = random.Random(seed)
    t = random_type(rng, 8, 3)
    if size(t):
        assert has_type(random_value(rng, t), t)


@given(seeds)
def test_random_comb_well_typed(seed):
    rng = random.Random(seed)
    t = random_type(rng, 8, 3)
    c, cod = random_comb(rng, t, 5)
    check(c, t, cod)
    assert comb_depth(c) <= 5 and size(cod) == size(t)


@given(seeds)
def test_random_between(seed):
    rng = random.Random(seed)
    t1 = random_type(rng, 6, 3)
    t2 = random_type_of_same_size(rng, t1)
    check(random_between(rng, t1, t2), t1, t2)


def random_type_of_same_size(rng, t):
    from pilang.gen import random_type_of_size

    return random_type_of_size(rng, size(t), 3)


def test_applicable_constants():
    names = applicable_constants(ZERO)
    assert "factorzl" in names and "swap+" not in names
    assert "dist" in applicable_constants(parse_type("(1 + 1) * 1"))
    assert "unite*l" in applicable_constants(Prod(ONE, Sum(ONE, ONE)))


def test_instantiate_rule_respects_bounds():
    rng = random.Random(3)
    for name in ("dist_nat_l", "linv_seq_r", "hom_plus_l", "absorbr_nat_r"):
        lhs, rhs, dom, bindings = instantiate_rule(rng, lookup(name), max_size=8)
        assert size(dom) <= 8
        assert set(bindings) == set(lookup(name).metavariables)
