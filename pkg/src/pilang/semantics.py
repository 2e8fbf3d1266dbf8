"""Forward/backward evaluation, value enumeration and observational equivalence."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .errors import IllTypedValue, ImpossibleValue, IndexOutOfRange, RefusedTooLarge, TypeCheckError
from .normalize import size
from .syntax import (
    UNIT,
    Comb,
    Const,
    InL,
    InR,
    One,
    Pair,
    Plus,
    Prod,
    Seq,
    Sum,
    Times,
    Ty,
    Unifier,
    Unit,
    Val,
    Zero,
    adjoint,
    has_type,
    infer_term,
    value_type,
)

DEFAULT_CAP = 4096


def _step(name: str, v: Val) -> Val:
    match name, v:
        case "id", _:
            return v
        case "unite+l", InR(x):
            return x
        case "uniti+l", _:
            return InR(v)
        case "unite+r", InL(x):
            return x
        case "uniti+r", _:
            return InL(v)
        case "swap+", InL(x):
            return InR(x)
        case "swap+", InR(x):
            return InL(x)
        case "assocl+", InL(x):
            return InL(InL(x))
        case "assocl+", InR(InL(x)):
            return InL(InR(x))
        case "assocl+", InR(InR(x)):
            return InR(x)
        case "assocr+", InL(InL(x)):
            return InL(x)
        case "assocr+", InL(InR(x)):
            return InR(InL(x))
        case "assocr+", InR(x):
            return InR(InR(x))
        case "unite*l", Pair(Unit(), x):
            return x
        case "uniti*l", _:
            return Pair(UNIT, v)
        case "unite*r", Pair(x, Unit()):
            return x
        case "uniti*r", _:
            return Pair(v, UNIT)
        case "swap*", Pair(x, y):
            return Pair(y, x)
        case "assocl*", Pair(x, Pair(y, z)):
            return Pair(Pair(x, y), z)
        case "assocr*", Pair(Pair(x, y), z):
            return Pair(x, Pair(y, z))
        # no closed value reaches these two, the clauses are kept regardless
        case "absorbr", Pair(x, _):
            return x
        case "absorbl", Pair(_, y):
            return y
        case "dist", Pair(InL(x), z):
            return InL(Pair(x, z))
        case "dist", Pair(InR(y), z):
            return InR(Pair(y, z))
        case "factor", InL(Pair(x, z)):
            return Pair(InL(x), z)
        case "factor", InR(Pair(y, z)):
            return Pair(InR(y), z)
        case "distl", Pair(x, InL(y)):
            return InL(Pair(x, y))
        case "distl", Pair(x, InR(z)):
            return InR(Pair(x, z))
        case "factorl", InL(Pair(x, y)):
            return Pair(x, InL(y))
        case "factorl", InR(Pair(x, z)):
            return Pair(x, InR(z))
    raise ImpossibleValue(f"{name} has no reduction for {v}")


def _run(c: Comb, v: Val) -> Val:
    """Evaluate without type checking."""
    match c, v:
        case Const(name), _:
            return _step(name, v)
        case Seq(c1, c2), _:
            return _run(c2, _run(c1, v))
        case Plus(c1, _), InL(x):
            return InL(_run(c1, x))
        case Plus(_, c2), InR(y):
            return InR(_run(c2, y))
        case Times(c1, c2), Pair(x, y):
            return Pair(_run(c1, x), _run(c2, y))
    raise ImpossibleValue(f"{c} has no reduction for {v}")


def _check_input(c: Comb, v: Val, ty: Optional[Ty]) -> None:
    if ty is None:
        u = Unifier()
        infer_term(c, value_type(v, u), u)
        return
    if not has_type(v, ty):
        raise IllTypedValue(f"{v} is not a value of type {ty}")
    u = Unifier()
    infer_term(c, ty, u)


def evaluate(c: Comb, v: Val, ty: Optional[Ty] = None) -> Val:
    """Run ``c`` forwards on ``v``.

    ``ty`` is the domain to check against; when omitted the most general
    type of ``v`` is used, which suffices for type checking since every
    combinator's reductions only inspect the parts of ``v`` that exist.
    """
    _check_input(c, v, ty)
    return _run(c, v)


def evaluate_rev(c: Comb, v: Val, ty: Optional[Ty] = None) -> Val:
    """Run ``c`` backwards; ``ty`` is the codomain of ``c``."""
    return evaluate(adjoint(c), v, ty)


eval = evaluate  # noqa: A001
eval_rev = evaluate_rev


# --------------------------------------------------------------------------
# enumeration


def iter_values(b: Ty) -> Iterator[Val]:
    match b:
        case Zero():
            return
        case One():
            yield UNIT
        case Sum(l, r):
            for x in iter_values(l):
                yield InL(x)
            for y in iter_values(r):
                yield InR(y)
        case Prod(l, r):
            rights = list(iter_values(r))
            for x in iter_values(l):
                for y in rights:
                    yield Pair(x, y)
        case _:
            raise TypeError(f"cannot enumerate {b}")


def enumerate_values(b: Ty) -> list[Val]:
    """All values of ``b``: sums left block first, products row-major."""
    return list(iter_values(b))


def rank(b: Ty, v: Val) -> int:
    match b, v:
        case One(), Unit():
            return 0
        case Sum(l, _), InL(x):
            return rank(l, x)
        case Sum(l, r), InR(y):
            return size(l) + rank(r, y)
        case Prod(l, r), Pair(x, y):
            return rank(l, x) * size(r) + rank(r, y)
    raise IllTypedValue(f"{v} is not a value of type {b}")


def unrank(b: Ty, i: int) -> Val:
    n = size(b)
    if not 0 <= i < n:
        raise IndexOutOfRange(f"index {i} out of range for type {b} of size {n}")
    match b:
        case One():
            return UNIT
        case Sum(l, r):
            m = size(l)
            return InL(unrank(l, i)) if i < m else InR(unrank(r, i - m))
        case Prod(l, r):
            q, k = divmod(i, size(r))
            return Pair(unrank(l, q), unrank(r, k))
    raise IndexOutOfRange(f"type {b} has no values")


# --------------------------------------------------------------------------
# equivalence


@dataclass(frozen=True)
class EquivReport:
    agree: int
    total: int
    counterexample: Optional[tuple] = None  # (input, output1, output2)

    @property
    def equivalent(self) -> bool:
        return self.agree == self.total


def compare(c1: Comb, c2: Comb, b: Ty, cap: int = DEFAULT_CAP) -> EquivReport:
    """Evaluate both combinators on every value of ``b`` and count agreements."""
    u = Unifier()
    cod1 = infer_term(c1, b, u).cod
    cod2 = infer_term(c2, b, u).cod
    if not u.unify(cod1, cod2):
        raise TypeCheckError("", u.show(cod1), u.show(cod2), "codomains differ")
    n = size(b)
    if n > cap:
        raise RefusedTooLarge(f"domain {b} has {n} values, above the cap of {cap}")
    agree = 0
    first = None
    for v in iter_values(b):
        w1, w2 = _run(c1, v), _run(c2, v)
        if w1 == w2:
            agree += 1
        elif first is None:
            first = (v, w1, w2)
    return EquivReport(agree, n, first)


def obs_equiv(c1: Comb, c2: Comb, b: Ty, cap: int = DEFAULT_CAP) -> bool:
    return compare(c1, c2, b, cap).equivalent


# --------------------------------------------------------------------------
# tracing


@dataclass(frozen=True)
class EvalTrace:
    initial: Val
    steps: tuple = field(default_factory=tuple)  # of (Comb, Val)

    @property
    def result(self) -> Val:
        return self.steps[-1][1] if self.steps else self.initial


def seq_components(c: Comb) -> list[Comb]:
    """Flatten the top-level ``;`` spine, whatever its association."""
    if isinstance(c, Seq):
        return seq_components(c.c1) + seq_components(c.c2)
    return [c]


def trace(c: Comb, v: Val, ty: Optional[Ty] = None) -> EvalTrace:
    """Evaluate step by step, one entry per top-level sequential component."""
    _check_input(c, v, ty)
    steps = []
    cur = v
    for part in seq_components(c):
        cur = _run(part, cur)
        steps.append((part, cur))
    return EvalTrace(v, tuple(steps))
