"""Type sizes, canonical types and the normalizing isomorphism ``b <-> #b``."""
from __future__ import annotations

from functools import lru_cache

from .syntax import (
    ONE,
    ZERO,
    Comb,
    Const,
    One,
    Plus,
    Prod,
    Seq,
    Sum,
    TVar,
    Ty,
    Zero,
    adjoint,
)


def size(b: Ty) -> int:
    """Number of values of ``b``.

    A product with an empty factor is empty even when the other factor is
    still a type variable, which is what ``factorzl`` leaves behind.
    """
    match b:
        case Zero():
            return 0
        case One():
            return 1
        case Sum(l, r):
            return size(l) + size(r)
        case Prod(l, r):
            if _surely_empty(l) or _surely_empty(r):
                return 0
            return size(l) * size(r)
    raise ValueError(f"size of non-ground type {b}")


def _surely_empty(b: Ty) -> bool:
    match b:
        case Zero():
            return True
        case Sum(l, r):
            return _surely_empty(l) and _surely_empty(r)
        case Prod(l, r):
            return _surely_empty(l) or _surely_empty(r)
    return False


@lru_cache(maxsize=256)
def canonical_type(n: int) -> Ty:
    """``0`` for n = 0, otherwise ``1 + canonical_type(n - 1)``."""
    if n < 0:
        raise ValueError("negative size")
    out: Ty = ZERO
    for _ in range(n):
        out = Sum(ONE, out)
    return out


def sharp(b: Ty) -> Ty:
    return canonical_type(size(b))


ID = Const("id")


def normalizer(b: Ty) -> Comb:
    """A combinator ``b <-> sharp(b)``, built clause by clause on the shape of ``b``."""
    match b:
        case Zero():
            return ID
        case One():
            return Const("uniti+r")
        case Sum(Zero(), rest):
            return Seq(Const("unite+l"), normalizer(rest))
        case Sum(One(), rest):
            return Plus(ID, normalizer(rest))
        case Sum(Sum(s, t), rest):
            return Seq(Const("assocr+"), normalizer(Sum(s, Sum(t, rest))))
        case Sum(Prod() as p, rest):
            return Seq(Plus(normalizer(p), ID), normalizer(Sum(sharp(p), rest)))
        case Prod(Zero(), _):
            return Const("absorbr")
        case Prod(One(), rest):
            return Seq(Const("unite*l"), normalizer(rest))
        case Prod(Sum(s, t), rest):
            return Seq(Const("dist"), normalizer(Sum(Prod(s, rest), Prod(t, rest))))
        case Prod(Prod(s, t), rest):
            return Seq(Const("assocr*"), normalizer(Prod(s, Prod(t, rest))))
        case TVar():
            raise ValueError(f"cannot normalize type variable {b}")
    raise TypeError(f"not a type: {b!r}")


def iso_witness(b1: Ty, b2: Ty) -> Comb:
    """A combinator ``b1 <-> b2``; exists exactly when the sizes agree."""
    if size(b1) != size(b2):
        raise ValueError(f"{b1} and {b2} have different sizes")
    return Seq(normalizer(b1), adjoint(normalizer(b2)))
