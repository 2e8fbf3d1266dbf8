"""Types, values and level-1 combinator terms.

Concrete syntax::

    type  := 0 | 1 | type + type | type * type | ( type )
    comb  := CONST | comb ; comb | comb + comb | comb * comb | ! comb | ( comb )
    value := () | inl value | inr value | ( value , value )

``!`` binds tightest, then ``*``, ``+`` and ``;``; every binary operator is
right associative.  ``! c`` never reaches the AST: the parser replaces it by
``adjoint(c)``.

Type inference is unification based.  Every constant has a schematic
signature and an input type drives the result, with one exception: the
codomain of ``factorzl`` / ``factorzr`` mentions a type that the domain does
not determine.  Such leftovers stay as :class:`TVar` in the principal
codomain returned by :func:`infer`; use :func:`check` to test a combinator
against a fully known signature.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .errors import ParseError, TypeCheckError

# --------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class Zero:
    def __str__(self) -> str:
        return "0"


@dataclass(frozen=True)
class One:
    def __str__(self) -> str:
        return "1"


@dataclass(frozen=True)
class Sum:
    left: "Ty"
    right: "Ty"

    def __str__(self) -> str:
        return f"{_ty_operand(self.left)} + {_ty_operand(self.right)}"


@dataclass(frozen=True)
class Prod:
    left: "Ty"
    right: "Ty"

    def __str__(self) -> str:
        return f"{_ty_operand(self.left)} * {_ty_operand(self.right)}"


@dataclass(frozen=True)
class TVar:
    """Type variable; appears in signatures, rule roles and principal types."""

    name: str

    def __str__(self) -> str:
        return "?" + self.name if self.name[0].isdigit() else self.name


Ty = Union[Zero, One, Sum, Prod, TVar]

ZERO = Zero()
ONE = One()


def _ty_operand(t: Ty) -> str:
    return f"({t})" if isinstance(t, (Sum, Prod)) else str(t)


def is_ground(t: Ty) -> bool:
    if isinstance(t, TVar):
        return False
    if isinstance(t, (Sum, Prod)):
        return is_ground(t.left) and is_ground(t.right)
    return True


# --------------------------------------------------------------------------
# values


@dataclass(frozen=True)
class Unit:
    def __str__(self) -> str:
        return "()"


@dataclass(frozen=True)
class InL:
    v: "Val"

    def __str__(self) -> str:
        return f"inl {self.v}"


@dataclass(frozen=True)
class InR:
    v: "Val"

    def __str__(self) -> str:
        return f"inr {self.v}"


@dataclass(frozen=True)
class Pair:
    fst: "Val"
    snd: "Val"

    def __str__(self) -> str:
        return f"({self.fst}, {self.snd})"


Val = Union[Unit, InL, InR, Pair]

UNIT = Unit()


def has_type(v: Val, b: Ty) -> bool:
    """Decide ``v : b``.  A type variable accepts any value."""
    if isinstance(b, TVar):
        return True
    if isinstance(v, Unit):
        return isinstance(b, One)
    if isinstance(v, InL):
        return isinstance(b, Sum) and has_type(v.v, b.left)
    if isinstance(v, InR):
        return isinstance(b, Sum) and has_type(v.v, b.right)
    if isinstance(v, Pair):
        return isinstance(b, Prod) and has_type(v.fst, b.left) and has_type(v.snd, b.right)
    return False


# --------------------------------------------------------------------------
# combinators


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Seq:
    c1: "Comb"
    c2: "Comb"

    def __str__(self) -> str:
        return f"({self.c1} ; {self.c2})"


@dataclass(frozen=True)
class Plus:
    c1: "Comb"
    c2: "Comb"

    def __str__(self) -> str:
        return f"({self.c1} + {self.c2})"


@dataclass(frozen=True)
class Times:
    c1: "Comb"
    c2: "Comb"

    def __str__(self) -> str:
        return f"({self.c1} * {self.c2})"


# Pattern-only nodes used by the rewrite rules; never produced by parse_comb
# unless metavariables are explicitly enabled.
@dataclass(frozen=True)
class Meta:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class AdjMeta:
    name: str

    def __str__(self) -> str:
        return f"!{self.name}"


Comb = Union[Const, Seq, Plus, Times]

# name: (domain, codomain); lower-case identifiers are type variables
_SIGNATURE_TEXT = {
    "id": ("a", "a"),
    "unite+l": ("0 + a", "a"),
    "uniti+l": ("a", "0 + a"),
    "unite+r": ("a + 0", "a"),
    "uniti+r": ("a", "a + 0"),
    "swap+": ("a + b", "b + a"),
    "assocl+": ("a + (b + c)", "(a + b) + c"),
    "assocr+": ("(a + b) + c", "a + (b + c)"),
    "unite*l": ("1 * a", "a"),
    "uniti*l": ("a", "1 * a"),
    "unite*r": ("a * 1", "a"),
    "uniti*r": ("a", "a * 1"),
    "swap*": ("a * b", "b * a"),
    "assocl*": ("a * (b * c)", "(a * b) * c"),
    "assocr*": ("(a * b) * c", "a * (b * c)"),
    "absorbr": ("0 * a", "0"),
    "factorzl": ("0", "0 * a"),
    "absorbl": ("a * 0", "0"),
    "factorzr": ("0", "a * 0"),
    "dist": ("(a + b) * c", "(a * c) + (b * c)"),
    "factor": ("(a * c) + (b * c)", "(a + b) * c"),
    "distl": ("a * (b + c)", "(a * b) + (a * c)"),
    "factorl": ("(a * b) + (a * c)", "a * (b + c)"),
}

CONSTANTS = tuple(_SIGNATURE_TEXT)

INVERSE = {
    "id": "id",
    "unite+l": "uniti+l",
    "unite+r": "uniti+r",
    "swap+": "swap+",
    "assocl+": "assocr+",
    "unite*l": "uniti*l",
    "unite*r": "uniti*r",
    "swap*": "swap*",
    "assocl*": "assocr*",
    "absorbr": "factorzl",
    "absorbl": "factorzr",
    "dist": "factor",
    "distl": "factorl",
}
INVERSE.update({v: k for k, v in list(INVERSE.items())})


def adjoint(c):
    """Syntactic inverse: constants swap with their partner, ``;`` reverses."""
    if isinstance(c, Const):
        return Const(INVERSE[c.name])
    if isinstance(c, Seq):
        return Seq(adjoint(c.c2), adjoint(c.c1))
    if isinstance(c, Plus):
        return Plus(adjoint(c.c1), adjoint(c.c2))
    if isinstance(c, Times):
        return Times(adjoint(c.c1), adjoint(c.c2))
    if isinstance(c, Meta):
        return AdjMeta(c.name)
    if isinstance(c, AdjMeta):
        return Meta(c.name)
    raise TypeError(f"not a combinator: {c!r}")


def comb_equal(c1, c2) -> bool:
    """Structural equality; no quotienting by any law."""
    return c1 == c2


def comb_size(c) -> int:
    if isinstance(c, (Seq, Plus, Times)):
        return 1 + comb_size(c.c1) + comb_size(c.c2)
    return 1


def comb_depth(c) -> int:
    if isinstance(c, (Seq, Plus, Times)):
        return 1 + max(comb_depth(c.c1), comb_depth(c.c2))
    return 1


def seq_all(*cs):
    """Right-nested sequential composition of one or more combinators."""
    out = cs[-1]
    for c in reversed(cs[:-1]):
        out = Seq(c, out)
    return out


# --------------------------------------------------------------------------
# lexing and parsing

_CONST_ALT = "|".join(re.escape(n) for n in sorted(CONSTANTS, key=len, reverse=True))
_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>\s+)
  | (?P<const>(?:{_CONST_ALT})(?![A-Za-z0-9_]))
  | (?P<sym><=>|<->|\|->|\(\+\)|\(\*\)|[()\[\],;+*!=.:])
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

_META_RE = re.compile(r"c\d*|a\d+")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(pos, f"a token, not {text[pos]!r}", text)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


class Parser:
    """Recursive-descent parser over a token list; one grammar per method."""

    def __init__(self, text: str, allow_vars: bool = False, allow_meta: bool = False):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.allow_vars = allow_vars
        self.allow_meta = allow_meta

    # token helpers
    def peek(self) -> Token:
        return self.toks[self.i]

    def at(self, text: str) -> bool:
        return self.toks[self.i].text == text and self.toks[self.i].kind != "eof"

    def advance(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        return self.advance()

    def fail(self, expected: str):
        tok = self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(tok.pos, f"{expected}, found {found}", self.text)

    def done(self):
        if self.peek().kind != "eof":
            self.fail("end of input")

    # types
    def type(self) -> Ty:
        left = self.type_prod()
        if self.at("+"):
            self.advance()
            return Sum(left, self.type())
        return left

    def type_prod(self) -> Ty:
        left = self.type_atom()
        if self.at("*"):
            self.advance()
            return Prod(left, self.type_prod())
        return left

    def type_atom(self) -> Ty:
        tok = self.peek()
        if tok.kind == "num" and tok.text in ("0", "1"):
            self.advance()
            return ZERO if tok.text == "0" else ONE
        if tok.text == "(":
            self.advance()
            t = self.type()
            self.expect(")")
            return t
        if tok.kind == "ident" and self.allow_vars:
            self.advance()
            return TVar(tok.text)
        self.fail("a type (0, 1 or '(')")

    # combinators
    def comb(self):
        left = self.comb_plus()
        if self.at(";"):
            self.advance()
            return Seq(left, self.comb())
        return left

    def comb_plus(self):
        left = self.comb_times()
        if self.at("+"):
            self.advance()
            return Plus(left, self.comb_plus())
        return left

    def comb_times(self):
        left = self.comb_unary()
        if self.at("*"):
            self.advance()
            return Times(left, self.comb_times())
        return left

    def comb_unary(self):
        if self.at("!"):
            self.advance()
            return adjoint(self.comb_unary())
        tok = self.peek()
        if tok.kind == "const":
            self.advance()
            return Const(tok.text)
        if tok.text == "(" and tok.kind == "sym":
            self.advance()
            c = self.comb()
            self.expect(")")
            return c
        if tok.kind == "ident" and self.allow_meta and _META_RE.fullmatch(tok.text):
            self.advance()
            return Meta(tok.text)
        self.fail("a combinator")

    # values
    def value(self) -> Val:
        tok = self.peek()
        if tok.text in ("inl", "inr") and tok.kind == "ident":
            self.advance()
            inner = self.value()
            return InL(inner) if tok.text == "inl" else InR(inner)
        if tok.text == "(":
            self.advance()
            if self.at(")"):
                self.advance()
                return UNIT
            first = self.value()
            if self.at(")"):
                self.advance()
                return first
            self.expect(",")
            second = self.value()
            self.expect(")")
            return Pair(first, second)
        self.fail("a value ('()', 'inl', 'inr' or a pair)")


def parse_type(text: str, allow_vars: bool = False) -> Ty:
    p = Parser(text, allow_vars=allow_vars)
    t = p.type()
    p.done()
    return t


def parse_comb(text: str, allow_meta: bool = False):
    p = Parser(text, allow_meta=allow_meta)
    c = p.comb()
    p.done()
    return c


def parse_value(text: str) -> Val:
    p = Parser(text)
    v = p.value()
    p.done()
    return v


def strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


@dataclass(frozen=True)
class Program:
    """Contents of a ``.pi`` file."""

    comb: Comb
    dom: Optional[Ty] = None
    cod: Optional[Ty] = None

    def __str__(self) -> str:
        head = f"type: {self.dom} <-> {self.cod}\n" if self.dom is not None else ""
        return head + str(self.comb) + "\n"


def parse_program(text: str) -> Program:
    """Parse ``[type: A <-> B]`` followed by one combinator expression."""
    body = strip_comments(text)
    p = Parser(body)
    dom = cod = None
    if p.peek().text == "type" and p.toks[p.i + 1].text == ":":
        p.advance()
        p.advance()
        dom = p.type()
        p.expect("<->")
        cod = p.type()
    c = p.comb()
    p.done()
    return Program(c, dom, cod)


# --------------------------------------------------------------------------
# inference


# fresh names are unique across unifiers, so types may flow between them
_FRESH = itertools.count(1)


class Unifier:
    """Substitution over type variables with first-order unification."""

    def __init__(self):
        self.subst: dict[str, Ty] = {}
        self._shown: dict[str, str] = {}

    def fresh(self) -> TVar:
        return TVar(str(next(_FRESH)))

    def show(self, t: Ty) -> str:
        """Print ``t`` with its variables named ?a, ?b, ... in order of appearance."""
        return str(self._rename(self.zonk(t)))

    def _rename(self, t: Ty) -> Ty:
        if isinstance(t, TVar):
            if t.name not in self._shown:
                k = len(self._shown)
                self._shown[t.name] = "?" + (chr(ord("a") + k) if k < 26 else f"t{k}")
            return TVar(self._shown[t.name])
        if isinstance(t, Sum):
            return Sum(self._rename(t.left), self._rename(t.right))
        if isinstance(t, Prod):
            return Prod(self._rename(t.left), self._rename(t.right))
        return t

    def instantiate(self, t: Ty, renaming: dict) -> Ty:
        if isinstance(t, TVar):
            if t.name not in renaming:
                renaming[t.name] = self.fresh()
            return renaming[t.name]
        if isinstance(t, Sum):
            return Sum(self.instantiate(t.left, renaming), self.instantiate(t.right, renaming))
        if isinstance(t, Prod):
            return Prod(self.instantiate(t.left, renaming), self.instantiate(t.right, renaming))
        return t

    def walk(self, t: Ty) -> Ty:
        while isinstance(t, TVar) and t.name in self.subst:
            t = self.subst[t.name]
        return t

    def zonk(self, t: Ty, default: Optional[Ty] = None) -> Ty:
        t = self.walk(t)
        if isinstance(t, TVar):
            return t if default is None else default
        if isinstance(t, Sum):
            return Sum(self.zonk(t.left, default), self.zonk(t.right, default))
        if isinstance(t, Prod):
            return Prod(self.zonk(t.left, default), self.zonk(t.right, default))
        return t

    def _occurs(self, name: str, t: Ty) -> bool:
        t = self.walk(t)
        if isinstance(t, TVar):
            return t.name == name
        if isinstance(t, (Sum, Prod)):
            return self._occurs(name, t.left) or self._occurs(name, t.right)
        return False

    def unify(self, a: Ty, b: Ty) -> bool:
        """Unify in place; on failure the substitution is left untouched."""
        saved = dict(self.subst)
        if self._unify(a, b):
            return True
        self.subst = saved
        return False

    def _unify(self, a: Ty, b: Ty) -> bool:
        a, b = self.walk(a), self.walk(b)
        if a == b:
            return True
        if isinstance(a, TVar):
            if self._occurs(a.name, b):
                return False
            self.subst[a.name] = b
            return True
        if isinstance(b, TVar):
            return self._unify(b, a)
        if type(a) is not type(b):
            return False
        if isinstance(a, (Sum, Prod)):
            return self._unify(a.left, b.left) and self._unify(a.right, b.right)
        return True


SIGNATURES = {
    name: (parse_type(d, allow_vars=True), parse_type(c, allow_vars=True))
    for name, (d, c) in _SIGNATURE_TEXT.items()
}


@dataclass
class Typed:
    """A term annotated with its domain and codomain, children included."""

    term: object
    dom: Ty
    cod: Ty
    kids: tuple = ()

    def zonked(self, u: Unifier, default: Optional[Ty] = None) -> "Typed":
        return Typed(
            self.term,
            u.zonk(self.dom, default),
            u.zonk(self.cod, default),
            tuple(k.zonked(u, default) for k in self.kids),
        )


def _join(path: str, step: str) -> str:
    return f"{path}.{step}" if path else step


MetaHook = Callable[[object, Ty, Unifier, str], Ty]


def infer_term(term, ty: Ty, u: Unifier, path: str = "", hook: Optional[MetaHook] = None) -> Typed:
    """Infer ``term`` at input ``ty`` under ``u``; returns an annotated tree.

    Paths name children ``1``/``2`` joined by dots.  ``hook`` types
    metavariable nodes when checking rewrite schemas.
    """
    if isinstance(term, Const):
        dom, cod = SIGNATURES[term.name]
        ren: dict = {}
        dom, cod = u.instantiate(dom, ren), u.instantiate(cod, ren)
        if not u.unify(ty, dom):
            raise TypeCheckError(path, f"{term.name} : {_pretty(u, dom)}", _pretty(u, ty))
        return Typed(term, ty, cod)
    if isinstance(term, Seq):
        k1 = infer_term(term.c1, ty, u, _join(path, "1"), hook)
        k2 = infer_term(term.c2, k1.cod, u, _join(path, "2"), hook)
        return Typed(term, ty, k2.cod, (k1, k2))
    if isinstance(term, (Plus, Times)):
        a, b = u.fresh(), u.fresh()
        shape = Sum(a, b) if isinstance(term, Plus) else Prod(a, b)
        if not u.unify(ty, shape):
            what = "a sum" if isinstance(term, Plus) else "a product"
            raise TypeCheckError(path, what, _pretty(u, ty))
        k1 = infer_term(term.c1, a, u, _join(path, "1"), hook)
        k2 = infer_term(term.c2, b, u, _join(path, "2"), hook)
        cod = Sum(k1.cod, k2.cod) if isinstance(term, Plus) else Prod(k1.cod, k2.cod)
        return Typed(term, ty, cod, (k1, k2))
    if isinstance(term, (Meta, AdjMeta)) and hook is not None:
        return Typed(term, ty, hook(term, ty, u, path))
    raise TypeCheckError(path, "a combinator", repr(term))


def _pretty(u: Unifier, t: Ty) -> str:
    return u.show(t)


class _NoFastPath(Exception):
    pass


def _ground_step(name: str, t: Ty) -> Ty:
    """Codomain of a constant at a ground domain, without unification."""
    match name, t:
        case "id", _:
            return t
        case ("unite+l", Sum(Zero(), x)) | ("unite+r", Sum(x, Zero())):
            return x
        case "uniti+l", _:
            return Sum(ZERO, t)
        case "uniti+r", _:
            return Sum(t, ZERO)
        case "swap+", Sum(a, b):
            return Sum(b, a)
        case "assocl+", Sum(a, Sum(b, c)):
            return Sum(Sum(a, b), c)
        case "assocr+", Sum(Sum(a, b), c):
            return Sum(a, Sum(b, c))
        case ("unite*l", Prod(One(), x)) | ("unite*r", Prod(x, One())):
            return x
        case "uniti*l", _:
            return Prod(ONE, t)
        case "uniti*r", _:
            return Prod(t, ONE)
        case "swap*", Prod(a, b):
            return Prod(b, a)
        case "assocl*", Prod(a, Prod(b, c)):
            return Prod(Prod(a, b), c)
        case "assocr*", Prod(Prod(a, b), c):
            return Prod(a, Prod(b, c))
        case ("absorbr", Prod(Zero(), _)) | ("absorbl", Prod(_, Zero())):
            return ZERO
        case "dist", Prod(Sum(a, b), c):
            return Sum(Prod(a, c), Prod(b, c))
        case "factor", Sum(Prod(a, c), Prod(b, c2)) if c == c2:
            return Prod(Sum(a, b), c)
        case "distl", Prod(a, Sum(b, c)):
            return Sum(Prod(a, b), Prod(a, c))
        case "factorl", Sum(Prod(a, b), Prod(a2, c)) if a == a2:
            return Prod(a, Sum(b, c))
    # factorzl/factorzr invent a type; errors get reported by the slow path
    raise _NoFastPath


def _ground_annotate(c, t: Ty) -> Typed:
    match c:
        case Const(name):
            return Typed(c, t, _ground_step(name, t))
        case Seq(c1, c2):
            k1 = _ground_annotate(c1, t)
            k2 = _ground_annotate(c2, k1.cod)
            return Typed(c, t, k2.cod, (k1, k2))
        case Plus(c1, c2) if isinstance(t, Sum):
            k1, k2 = _ground_annotate(c1, t.left), _ground_annotate(c2, t.right)
            return Typed(c, t, Sum(k1.cod, k2.cod), (k1, k2))
        case Times(c1, c2) if isinstance(t, Prod):
            k1, k2 = _ground_annotate(c1, t.left), _ground_annotate(c2, t.right)
            return Typed(c, t, Prod(k1.cod, k2.cod), (k1, k2))
    raise _NoFastPath


def _fast(c, b: Ty) -> Optional[Typed]:
    if not is_ground(b):
        return None
    try:
        return _ground_annotate(c, b)
    except _NoFastPath:
        return None


def infer(c: Comb, b_in: Ty) -> Ty:
    """Principal output type of ``c`` at input ``b_in``."""
    typed = _fast(c, b_in)
    if typed is not None:
        return typed.cod
    u = Unifier()
    return u.zonk(infer_term(c, b_in, u).cod)


def check(c: Comb, b1: Ty, b2: Ty) -> None:
    """Raise :class:`TypeCheckError` unless ``c : b1 <-> b2``."""
    typed = _fast(c, b1)
    if typed is not None and typed.cod == b2:
        return
    u = Unifier()
    cod = infer_term(c, b1, u).cod
    if not u.unify(cod, b2):
        raise TypeCheckError("", str(b2), u.show(cod), "codomain mismatch")


def well_typed(c: Comb, b1: Ty, b2: Optional[Ty] = None) -> bool:
    try:
        if b2 is None:
            infer(c, b1)
        else:
            check(c, b1, b2)
    except TypeCheckError:
        return False
    return True


def annotate(c: Comb, b_in: Ty, b_out: Optional[Ty] = None) -> Typed:
    """Ground typing of every node; undetermined types default to ``0``."""
    typed = _fast(c, b_in)
    if typed is not None and (b_out is None or typed.cod == b_out):
        return typed
    u = Unifier()
    typed = infer_term(c, b_in, u)
    if b_out is not None and not u.unify(typed.cod, b_out):
        raise TypeCheckError("", str(b_out), u.show(typed.cod), "codomain mismatch")
    return typed.zonked(u, ZERO)


def value_type(v: Val, u: Unifier) -> Ty:
    """Most general type inhabited by ``v``."""
    if isinstance(v, Unit):
        return ONE
    if isinstance(v, InL):
        return Sum(value_type(v.v, u), u.fresh())
    if isinstance(v, InR):
        return Sum(u.fresh(), value_type(v.v, u))
    return Prod(value_type(v.fst, u), value_type(v.snd, u))
