"""Permutations on ``[n]`` and the compiler from combinators to them.

A permutation is written either as a transposition program::

    arity: 4
    swap 2 3 ; id

or densely as its one-line image array ``[p(0) ... p(n-1)]``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import ArityMismatch, IndexOutOfRange, ParseError, RefusedTooLarge
from .normalize import size
from .syntax import (
    Comb,
    Const,
    Parser,
    Plus,
    Seq,
    Times,
    Ty,
    Typed,
    annotate,
    parse_comb,
    strip_comments,
)

COMPILE_CAP = 1 << 20


@dataclass(frozen=True)
class PId:
    n: int

    def __str__(self) -> str:
        return "id"


@dataclass(frozen=True)
class PSwap:
    n: int
    i: int
    j: int

    def __post_init__(self):
        if self.i == self.j or not (0 <= self.i < self.n and 0 <= self.j < self.n):
            raise IndexOutOfRange(f"swap {self.i} {self.j} is not a transposition of [{self.n}]")

    def __str__(self) -> str:
        return f"swap {self.i} {self.j}"


@dataclass(frozen=True)
class PSeq:
    p1: "PermProg"
    p2: "PermProg"

    def __post_init__(self):
        if arity(self.p1) != arity(self.p2):
            raise ArityMismatch(f"cannot sequence arities {arity(self.p1)} and {arity(self.p2)}")

    def __str__(self) -> str:
        return f"{self.p1} ; {self.p2}"


PermProg = Union[PId, PSwap, PSeq]


@dataclass(frozen=True)
class PermDense:
    image: tuple

    def __post_init__(self):
        if sorted(self.image) != list(range(len(self.image))):
            raise ValueError(f"not a bijection: {list(self.image)}")

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, k: int) -> int:
        return self.image[k]

    def __str__(self) -> str:
        return "[" + " ".join(map(str, self.image)) + "]"


def arity(p: PermProg) -> int:
    return arity(p.p1) if isinstance(p, PSeq) else p.n


def papply(p: PermProg, k: int) -> int:
    n = arity(p)
    if not 0 <= k < n:
        raise IndexOutOfRange(f"index {k} out of range for arity {n}")
    return _apply(p, k)


def _apply(p: PermProg, k: int) -> int:
    if isinstance(p, PSwap):
        return p.j if k == p.i else p.i if k == p.j else k
    if isinstance(p, PSeq):
        return _apply(p.p2, _apply(p.p1, k))
    return k


def transpositions(p: PermProg) -> list[PSwap]:
    if isinstance(p, PSeq):
        return transpositions(p.p1) + transpositions(p.p2)
    return [p] if isinstance(p, PSwap) else []


def seq_prog(n: int, swaps: Iterable[tuple[int, int]]) -> PermProg:
    """Left-to-right sequence of transpositions (``id`` when empty)."""
    out: Optional[PermProg] = None
    for i, j in swaps:
        s = PSwap(n, i, j)
        out = s if out is None else PSeq(out, s)
    return PId(n) if out is None else out


def to_dense(p: PermProg) -> PermDense:
    img = list(range(arity(p)))
    for s in transpositions(p):
        img = [s.j if x == s.i else s.i if x == s.j else x for x in img]
    return PermDense(tuple(img))


def pcompose(p1: PermDense, p2: PermDense) -> PermDense:
    """Apply ``p1`` then ``p2``."""
    if p1.n != p2.n:
        raise ArityMismatch(f"cannot compose arities {p1.n} and {p2.n}")
    return PermDense(tuple(p2.image[x] for x in p1.image))


def pinvert(p: PermProg) -> PermProg:
    if isinstance(p, PSeq):
        return PSeq(pinvert(p.p2), pinvert(p.p1))
    return p


def dense_inverse(p: PermDense) -> PermDense:
    inv = [0] * p.n
    for k, x in enumerate(p.image):
        inv[x] = k
    return PermDense(tuple(inv))


def identity(n: int) -> PermDense:
    return PermDense(tuple(range(n)))


def complement(p: PermDense) -> PermDense:
    """Conjugate by ``k -> n-1-k``."""
    n = p.n
    return PermDense(tuple(n - 1 - p.image[n - 1 - k] for k in range(n)))


def relabel(p: PermDense, sigma: PermDense) -> PermDense:
    """Conjugate ``p`` by the relabelling ``sigma``: sigma^-1 ; p ; sigma."""
    return pcompose(pcompose(dense_inverse(sigma), p), sigma)


# --------------------------------------------------------------------------
# text format


def parse_perm(text: str) -> PermProg:
    """Parse ``arity: n`` followed by ``id | swap i j | p ; p``."""
    p = Parser(strip_comments(text))
    tok = p.peek()
    if tok.text != "arity":
        p.fail("'arity:' header")
    p.advance()
    p.expect(":")
    n = _number(p)
    prog = _perm_seq(p, n)
    p.done()
    return prog


def _number(p: Parser) -> int:
    tok = p.peek()
    if tok.kind != "num":
        p.fail("a number")
    p.advance()
    return int(tok.text)


def _perm_seq(p: Parser, n: int) -> PermProg:
    left = _perm_atom(p, n)
    if p.at(";"):
        p.advance()
        return PSeq(left, _perm_seq(p, n))
    return left


def _perm_atom(p: Parser, n: int) -> PermProg:
    tok = p.peek()
    if tok.text == "id":
        p.advance()
        return PId(n)
    if tok.text == "swap":
        p.advance()
        i, j = _number(p), _number(p)
        try:
            return PSwap(n, i, j)
        except IndexOutOfRange as e:
            raise ParseError(tok.pos, f"a valid transposition ({e.message})", p.text) from None
    if tok.text == "(":
        p.advance()
        inner = _perm_seq(p, n)
        p.expect(")")
        return inner
    p.fail("'id', 'swap i j' or '('")


def format_perm(p: PermProg) -> str:
    return f"arity: {arity(p)}\n{p}\n"


def is_perm_text(text: str) -> bool:
    return strip_comments(text).lstrip().startswith("arity")


# --------------------------------------------------------------------------
# compiling combinators


def compile(c: Comb, b_in: Ty, cap: int = COMPILE_CAP) -> PermDense:  # noqa: A001
    """Index map of ``c`` on ``[size(b_in)]``, built from closed forms per node."""
    n = size(b_in)
    if n > cap:
        raise RefusedTooLarge(f"type {b_in} has {n} values, above the cap of {cap}")
    return PermDense(tuple(_compile(annotate(c, b_in))))


_IDENTITY_MAPS = {
    "id", "unite+l", "uniti+l", "unite+r", "uniti+r", "assocl+", "assocr+",
    "unite*l", "uniti*l", "unite*r", "uniti*r", "assocl*", "assocr*",
    "dist", "factor", "absorbr", "absorbl", "factorzl", "factorzr",
}


def _compile(t: Typed) -> list[int]:
    term = t.term
    if isinstance(term, Const):
        return _compile_const(term.name, t.dom)
    k1, k2 = t.kids
    p1, p2 = _compile(k1), _compile(k2)
    if isinstance(term, Seq):
        return [p2[x] for x in p1]
    if isinstance(term, Plus):
        m = len(p1)
        return p1 + [m + x for x in p2]
    if isinstance(term, Times):
        n = len(p2)
        return [a * n + b for a in p1 for b in p2]
    raise TypeError(f"cannot compile {term!r}")


def _compile_const(name: str, dom: Ty) -> list[int]:
    if name in _IDENTITY_MAPS:
        # the empty-type cases all have size 0 on both sides
        return list(range(size(dom)))
    if name == "swap+":
        m, n = size(dom.left), size(dom.right)
        return [n + k if k < m else k - m for k in range(m + n)]
    if name == "swap*":
        m, n = size(dom.left), size(dom.right)
        return [j * m + i for i in range(m) for j in range(n)]
    if name == "distl":
        return _distl_map(size(dom.left), size(dom.right.left), size(dom.right.right))
    if name == "factorl":
        a, b = size(dom.left.left), size(dom.left.right)
        c = size(dom.right.right)
        fwd = _distl_map(a, b, c)
        inv = [0] * len(fwd)
        for k, x in enumerate(fwd):
            inv[x] = k
        return inv
    raise ValueError(f"unknown constant {name}")


def _distl_map(a: int, b: int, c: int) -> list[int]:
    out = []
    for i in range(a):
        out.extend(i * b + j for j in range(b))
        out.extend(a * b + i * c + k for k in range(c))
    return out


# --------------------------------------------------------------------------
# gate corpus

BOOL = "1 + 1"


def make_if(c1: Comb, c2: Comb) -> Comb:
    """Run ``c1`` on the second component when the first is true, else ``c2``."""
    ident = Const("id")
    return Seq(Const("dist"), Seq(Plus(Times(ident, c1), Times(ident, c2)), Const("factor")))


def make_if1(c: Comb) -> Comb:
    return make_if(c, Const("id"))


FULL_ADDER_SWAPS = (
    (12, 14), (13, 15),
    (8, 12), (9, 14), (10, 13), (11, 15),
    (6, 7), (14, 15),
    (4, 6), (5, 7), (12, 14), (13, 15),
)

# the second row replaced by a real cnot (bit 3 onto bit 2) followed by an
# unconditional exchange of bits 1 and 0
CORRECTED_ADDER_SWAPS = (
    (12, 14), (13, 15),
    (8, 12), (9, 13), (10, 14), (11, 15),
    (1, 2), (5, 6), (9, 10), (13, 14),
    (6, 7), (14, 15),
    (4, 6), (5, 7), (12, 14), (13, 15),
)


def gate_library() -> dict:
    """Named permutation programs and combinators."""
    not_c = Const("swap+")
    if_not = make_if1(not_c)
    return {
        "not_perm": PSwap(2, 0, 1),
        "cnot_perm": PSwap(4, 2, 3),
        "toffoli_perm": PSwap(8, 6, 7),
        "fulladder": seq_prog(16, FULL_ADDER_SWAPS),
        "fulladder_corrected": seq_prog(16, CORRECTED_ADDER_SWAPS),
        "not": not_c,
        "not_word3": parse_comb("swap+ * (swap+ * swap+)"),
        "reverse": parse_comb("swap* ; (swap* * id) ; assocr*"),
        "if_not": if_not,
        "if_cnot": make_if1(if_not),
        "swap_fl1": parse_comb("assocl+ ; swap+ ; (id + swap+)"),
        "swap_fl2": parse_comb(
            "(id + swap+) ; assocl+ ; (swap+ + id) ; assocr+ ; (id + swap+)"
        ),
    }


# --------------------------------------------------------------------------
# bit-level view of 4-wire permutations


def bits(k: int, width: int) -> tuple:
    """Most significant bit first."""
    return tuple((k >> (width - 1 - w)) & 1 for w in range(width))


def from_bits(bs: Iterable[int]) -> int:
    out = 0
    for b in bs:
        out = out * 2 + b
    return out


@dataclass(frozen=True)
class AdderWiring:
    """Which bit position carries each of A, B, C_i and the heap line."""

    inputs: tuple  # positions of (A, B, heap, C_i)
    outputs: tuple  # positions of (out1, out2, S, C_o)


def adder_table(p: PermDense, inputs: tuple, outputs: tuple) -> list[tuple]:
    """Rows ``(A, B, C_i, outputs)`` with the heap line fixed at 0."""
    rows = []
    for a, b, ci in itertools.product((0, 1), repeat=3):
        word = [0] * 4
        for pos, bit in zip(inputs, (a, b, 0, ci)):
            word[pos] = bit
        out = bits(p(from_bits(word)), 4)
        rows.append((a, b, ci, tuple(out[pos] for pos in outputs)))
    return rows


def is_full_adder(p: PermDense, inputs: tuple, outputs: tuple, second: str = "B") -> bool:
    for a, b, ci, (o1, o2, s, co) in adder_table(p, inputs, outputs):
        want2 = b if second == "B" else a ^ b
        if (o1, o2, s, co) != (a, want2, a ^ b ^ ci, (a & b) | (a & ci) | (b & ci)):
            return False
    return True


def adder_wirings(p: PermDense, second: str = "B") -> list[AdderWiring]:
    """Every wire assignment under which ``p`` acts as a full adder.

    Input and output positions are searched independently, all 24 x 24
    combinations.  ``second`` selects whether the second output should
    echo B or carry A xor B.
    """
    found = []
    for order in itertools.permutations(range(4)):
        for out_order in itertools.permutations(range(4)):
            if is_full_adder(p, order, out_order, second):
                found.append(AdderWiring(order, out_order))
    return found
