"""Level-2 rewriting: the catalog of equivalence laws, their evaluator and
the proof-script checker.

Each law ``lhs <=> rhs`` yields two rules, ``NAME_l`` rewriting left to
right and ``NAME_r`` right to left; a bare ``NAME`` refers to ``NAME_l``.
Rules match at the root only.  Rewriting inside a term goes through the
congruence nodes :class:`RespSeq`, :class:`RespPlus` and :class:`RespTimes`
and :class:`Id2` leaves a subterm alone.

Metavariables follow the naming used by the laws (``c0``..``c5`` and
``a1``..``a4``) and each carries a typing role such as ``c0 : 0 <-> 0``.  A
metavariable that occurs only on the produced side cannot be read off the
input; it comes from explicit bindings on the rule (``rule[c0 = id]``) or
from the expected result handed in as ``hint``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import (
    NonLinearMismatch,
    ParseError,
    RewriteError,
    RewriteMismatch,
    RewriteTypeError,
    TypeCheckError,
    UnboundMetavariable,
)
from .syntax import (
    AdjMeta,
    Comb,
    Const,
    Meta,
    Parser,
    Plus,
    Prod,
    Seq,
    Sum,
    Times,
    TVar,
    Ty,
    Unifier,
    _join,
    adjoint,
    comb_equal,
    infer_term,
    parse_comb,
    parse_type,
    strip_comments,
)

# --------------------------------------------------------------------------
# the catalog

# (group, base name, lhs, rhs, roles)
_F = "c1 : t1 <-> t2, c2 : t3 <-> t4, c3 : t5 <-> t6"
_ASSOC = "c1 : t1 <-> t2, c2 : t3 <-> t4, c3 : t5 <-> t6"
_UNIT = "c0 : 0 <-> 0, c1 : 1 <-> 1, c3 : t1 <-> t2"
_ZERO = "c : t1 <-> t2"
_SWAP = "c1 : t1 <-> t2, c2 : t3 <-> t4"
_HOM = "a1 : t5 <-> t1, a2 : t6 <-> t2, a3 : t1 <-> t3, a4 : t2 <-> t4"

LAWS = [
    ("functor", "hom_plus", "(a1 ; a3) + (a2 ; a4)", "(a1 + a2) ; (a3 + a4)", _HOM),
    ("functor", "hom_times", "(a1 ; a3) * (a2 ; a4)", "(a1 * a2) ; (a3 * a4)", _HOM),
    ("associativity", "assoc_seq", "c1 ; (c2 ; c3)", "(c1 ; c2) ; c3",
     "c1 : t1 <-> t2, c2 : t2 <-> t3, c3 : t3 <-> t4"),
    ("associativity", "assocl_plus_nat",
     "(c1 + (c2 + c3)) ; assocl+", "assocl+ ; ((c1 + c2) + c3)", _ASSOC),
    ("associativity", "assocl_times_nat",
     "(c1 * (c2 * c3)) ; assocl*", "assocl* ; ((c1 * c2) * c3)", _ASSOC),
    ("associativity", "assocr_plus_nat",
     "((c1 + c2) + c3) ; assocr+", "assocr+ ; (c1 + (c2 + c3))", _ASSOC),
    ("associativity", "assocr_times_nat",
     "((c1 * c2) * c3) ; assocr*", "assocr* ; (c1 * (c2 * c3))", _ASSOC),
    ("associativity", "pentagon_plus",
     "assocr+ ; assocr+", "((assocr+ + id) ; assocr+) ; (id + assocr+)", ""),
    ("associativity", "pentagon_times",
     "assocr* ; assocr*", "((assocr* * id) ; assocr*) ; (id * assocr*)", ""),
    ("distributivity", "dist_nat",
     "((c1 + c2) * c3) ; dist", "dist ; ((c1 * c3) + (c2 * c3))", _F),
    ("distributivity", "distl_nat",
     "(c1 * (c2 + c3)) ; distl", "distl ; ((c1 * c2) + (c1 * c3))", _F),
    ("distributivity", "factor_nat",
     "((c1 * c3) + (c2 * c3)) ; factor", "factor ; ((c1 + c2) * c3)", _F),
    ("distributivity", "factorl_nat",
     "((c1 * c2) + (c1 * c3)) ; factorl", "factorl ; (c1 * (c2 + c3))", _F),
    ("identity", "idl_seq", "id ; c0", "c0", "c0 : t1 <-> t2"),
    ("identity", "idr_seq", "c0 ; id", "c0", "c0 : t1 <-> t2"),
    ("identity", "linv_seq", "c0 ; !c0", "id", "c0 : t1 <-> t2"),
    ("identity", "rinv_seq", "!c0 ; c0", "id", "c0 : t1 <-> t2"),
    ("identity", "id_plus", "id + id", "id", ""),
    ("identity", "id_times", "id * id", "id", ""),
    ("unit", "unite_plus_l_nat", "unite+l ; c3", "(c0 + c3) ; unite+l", _UNIT),
    ("unit", "uniti_plus_l_nat", "uniti+l ; (c0 + c3)", "c3 ; uniti+l", _UNIT),
    ("unit", "unite_plus_r_nat", "unite+r ; c3", "(c3 + c0) ; unite+r", _UNIT),
    ("unit", "uniti_plus_r_nat", "uniti+r ; (c3 + c0)", "c3 ; uniti+r", _UNIT),
    ("unit", "unite_times_l_nat", "unite*l ; c3", "(c1 * c3) ; unite*l", _UNIT),
    ("unit", "uniti_times_l_nat", "uniti*l ; (c1 * c3)", "c3 ; uniti*l", _UNIT),
    ("unit", "unite_times_r_nat", "unite*r ; c3", "(c3 * c1) ; unite*r", _UNIT),
    ("unit", "uniti_times_r_nat", "uniti*r ; (c3 * c1)", "c3 ; uniti*r", _UNIT),
    ("unit", "unite_times_l_distl", "unite*l", "distl ; (unite*l + unite*l)", ""),
    ("unit", "unite_plus_l_swap", "unite+l", "swap+ ; unite+r", ""),
    ("unit", "unite_times_l_swap", "unite*l", "swap* ; unite*r", ""),
    ("commutativity", "swapl_plus_nat", "swap+ ; (c1 + c2)", "(c2 + c1) ; swap+", _SWAP),
    ("commutativity", "swapl_times_nat", "swap* ; (c1 * c2)", "(c2 * c1) ; swap*", _SWAP),
    ("commutativity", "hexagonr_plus",
     "(assocr+ ; swap+) ; assocr+", "((swap+ + id) ; assocr+) ; (id + swap+)", ""),
    ("commutativity", "hexagonl_plus",
     "(assocl+ ; swap+) ; assocl+", "((id + swap+) ; assocl+) ; (swap+ + id)", ""),
    ("commutativity", "hexagonr_times",
     "(assocr* ; swap*) ; assocr*", "((swap* * id) ; assocr*) ; (id * swap*)", ""),
    ("commutativity", "hexagonl_times",
     "(assocl* ; swap*) ; assocl*", "((id * swap*) ; assocl*) ; (swap* * id)", ""),
    ("unit-associativity", "unite_plus_r_assoc", "unite+r + id", "assocr+ ; (id + unite+l)", ""),
    ("unit-associativity", "unite_times_r_assoc", "unite*r * id", "assocr* ; (id * unite*l)", ""),
    ("zero", "absorbl_nat", "(c * id) ; absorbl", "absorbl ; id", _ZERO),
    ("zero", "absorbr_nat", "(id * c) ; absorbr", "absorbr ; id", _ZERO),
    ("zero", "factorzl_nat", "id ; factorzl", "factorzl ; (id * c)", _ZERO),
    ("zero", "factorzr_nat", "id ; factorzr", "factorzr ; (c * id)", _ZERO),
    ("zero", "absorbr_is_absorbl", "absorbr", "absorbl", ""),
    ("zero", "absorbr_distl", "absorbr", "(distl ; (absorbr + absorbr)) ; unite+l", ""),
    ("zero", "unite_times_r_absorbr", "unite*r", "absorbr", ""),
    ("zero", "absorbl_swap", "absorbl", "swap* ; absorbr", ""),
    ("zero", "absorbr_assoc", "absorbr", "(assocl* ; (absorbr * id)) ; absorbr", ""),
    ("zero", "absorb_assoc_mixed",
     "(id * absorbr) ; absorbl", "(assocl* ; (absorbl * id)) ; absorbr", ""),
    ("zero", "unite_plus_l_distl_absorbl",
     "id * unite+l", "(distl ; (absorbl + id)) ; unite+l", ""),
    ("associativity-distributivity", "assocl_plus_dist",
     "((assocl+ * id) ; dist) ; (dist + id)", "(dist ; (id + dist)) ; assocl+", ""),
    ("associativity-distributivity", "assocl_times_distl",
     "assocl* ; distl", "((id * distl) ; distl) ; (assocl* + assocl*)", ""),
    ("associativity-distributivity", "distl_dist_assoc",
     "(distl ; (dist + dist)) ; assocl+",
     "dist ; (distl + distl) ; assocl+ ; (assocr+ + id)"
     " ; ((id + swap+) + id) ; (assocl+ + id)", ""),
    ("commutativity-distributivity", "swap_plus_distl", "(id * swap+) ; distl", "distl ; swap+", ""),
    ("commutativity-distributivity", "dist_swap_times", "dist ; (swap* + swap*)", "swap* ; distl", ""),
]

GROUPS = (
    "functor", "associativity", "distributivity", "identity", "unit", "commutativity",
    "unit-associativity", "zero", "associativity-distributivity", "commutativity-distributivity",
)

L2R = "L2R"
R2L = "R2L"


@dataclass(frozen=True)
class Rule:
    name: str
    base: str
    group: str
    line: int  # position of the law within its group, from 1
    direction: str
    lhs: object
    rhs: object
    roles: tuple = ()  # of (metavariable, domain, codomain)

    @property
    def partner_name(self) -> str:
        return self.base + ("_r" if self.direction == L2R else "_l")

    @property
    def metavariables(self) -> tuple:
        return tuple(m for m, _, _ in self.roles)

    def __str__(self) -> str:
        return f"{self.name}: {self.lhs} => {self.rhs}"


def _parse_roles(text: str) -> tuple:
    roles = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        name, sig = (s.strip() for s in part.split(":"))
        dom, cod = (parse_type(s, allow_vars=True) for s in sig.split("<->"))
        roles.append((name, dom, cod))
    return tuple(roles)


def _build_registry() -> dict:
    reg = {}
    lines: dict = {}
    for group, base, lhs_text, rhs_text, roles_text in LAWS:
        lines[group] = lines.get(group, 0) + 1
        lhs = parse_comb(lhs_text, allow_meta=True)
        rhs = parse_comb(rhs_text, allow_meta=True)
        roles = _parse_roles(roles_text)
        used = _metas(lhs) | _metas(rhs)
        roles = tuple(r for r in roles if r[0] in used)
        for suffix, d, a, b in (("_l", L2R, lhs, rhs), ("_r", R2L, rhs, lhs)):
            reg[base + suffix] = Rule(base + suffix, base, group, lines[group], d, a, b, roles)
    return reg


def _metas(c) -> set:
    if isinstance(c, (Meta, AdjMeta)):
        return {c.name}
    if isinstance(c, (Seq, Plus, Times)):
        return _metas(c.c1) | _metas(c.c2)
    return set()


REGISTRY = _build_registry()


def rule_registry() -> list[Rule]:
    return list(REGISTRY.values())


def lookup(name: str) -> Rule:
    if name in REGISTRY:
        return REGISTRY[name]
    if name + "_l" in REGISTRY:
        return REGISTRY[name + "_l"]
    raise RewriteError(f"unknown rule {name}")


def partner(rule: Rule) -> Rule:
    return REGISTRY[rule.partner_name]


def group_counts() -> dict:
    counts: dict = {}
    for group, *_ in LAWS:
        counts[group] = counts.get(group, 0) + 1
    return counts


# --------------------------------------------------------------------------
# level-2 terms


@dataclass(frozen=True)
class Prim:
    rule: Rule
    bindings: tuple = ()  # sorted (metavariable, Comb) pairs given explicitly

    def binding_map(self) -> dict:
        return dict(self.bindings)

    def __str__(self) -> str:
        if not self.bindings:
            return self.rule.name
        inner = ", ".join(f"{m} = {c}" for m, c in self.bindings)
        return f"{self.rule.name}[{inner}]"


@dataclass(frozen=True)
class Id2:
    def __str__(self) -> str:
        return "id2"


@dataclass(frozen=True)
class Trans2:
    r1: "Rw"
    r2: "Rw"

    def __str__(self) -> str:
        return f"({self.r1} . {self.r2})"


@dataclass(frozen=True)
class RespSeq:
    r1: "Rw"
    r2: "Rw"

    def __str__(self) -> str:
        return f"({self.r1} ; {self.r2})"


@dataclass(frozen=True)
class RespPlus:
    r1: "Rw"
    r2: "Rw"

    def __str__(self) -> str:
        return f"({self.r1} (+) {self.r2})"


@dataclass(frozen=True)
class RespTimes:
    r1: "Rw"
    r2: "Rw"

    def __str__(self) -> str:
        return f"({self.r1} (*) {self.r2})"


Rw = Union[Prim, Id2, Trans2, RespSeq, RespPlus, RespTimes]

_RESP = {RespSeq: Seq, RespPlus: Plus, RespTimes: Times}


def prim(name: str, **bindings) -> Prim:
    return Prim(lookup(name), tuple(sorted(bindings.items())))


def rw_flip(r: Rw) -> Rw:
    if isinstance(r, Prim):
        return Prim(partner(r.rule), r.bindings)
    if isinstance(r, Trans2):
        return Trans2(rw_flip(r.r2), rw_flip(r.r1))
    if isinstance(r, (RespSeq, RespPlus, RespTimes)):
        return type(r)(rw_flip(r.r1), rw_flip(r.r2))
    return r


# --------------------------------------------------------------------------
# matching


def match(pattern, c, bindings: dict, where: dict, path: str = "") -> bool:
    """Extend ``bindings`` so that ``pattern`` instantiates to ``c``.

    Returns False on a shape mismatch; raises :class:`NonLinearMismatch`
    when a repeated metavariable would need two different values.
    """
    if isinstance(pattern, (Meta, AdjMeta)):
        value = c if isinstance(pattern, Meta) else adjoint(c)
        name = pattern.name
        if name in bindings:
            if not comb_equal(bindings[name], value):
                raise NonLinearMismatch(name, (where.get(name, "binding"), path))
            return True
        bindings[name] = value
        where[name] = path
        return True
    if isinstance(pattern, Const):
        return pattern == c
    if type(pattern) is not type(c):
        return False
    return match(pattern.c1, c.c1, bindings, where, _join(path, "1")) and match(
        pattern.c2, c.c2, bindings, where, _join(path, "2")
    )


def substitute(pattern, bindings: dict):
    if isinstance(pattern, Meta):
        return bindings[pattern.name]
    if isinstance(pattern, AdjMeta):
        return adjoint(bindings[pattern.name])
    if isinstance(pattern, (Seq, Plus, Times)):
        return type(pattern)(substitute(pattern.c1, bindings), substitute(pattern.c2, bindings))
    return pattern


def _first_mismatch(pattern, c, path: str = "") -> tuple:
    if isinstance(pattern, (Meta, AdjMeta)):
        return path, c
    if isinstance(pattern, Const) or type(pattern) is not type(c):
        return path, c
    for k, (p, s) in enumerate(((pattern.c1, c.c1), (pattern.c2, c.c2)), 1):
        if not _matches_shape(p, s):
            return _first_mismatch(p, s, _join(path, str(k)))
    return path, c


def _matches_shape(pattern, c) -> bool:
    if isinstance(pattern, (Meta, AdjMeta)):
        return True
    if isinstance(pattern, Const):
        return pattern == c
    return type(pattern) is type(c) and _matches_shape(pattern.c1, c.c1) and _matches_shape(
        pattern.c2, c.c2
    )


def _head(c) -> str:
    if isinstance(c, Const):
        return c.name
    return {Seq: "_ ; _", Plus: "_ + _", Times: "_ * _"}.get(type(c), str(c))


# --------------------------------------------------------------------------
# typing of a rewrite step


def _is_variant(a: tuple, b: tuple) -> bool:
    """Equal up to a bijective renaming of type variables."""
    fwd: dict = {}
    back: dict = {}

    def go(x, y) -> bool:
        if isinstance(x, TVar) and isinstance(y, TVar):
            if fwd.setdefault(x.name, y.name) != y.name:
                return False
            return back.setdefault(y.name, x.name) == x.name
        if isinstance(x, TVar) or isinstance(y, TVar) or type(x) is not type(y):
            return False
        if isinstance(x, (Sum, Prod)):
            return go(x.left, y.left) and go(x.right, y.right)
        return True

    return all(go(x, y) for x, y in zip(a, b))


def _check_step(rule: Rule, c, bindings: dict, dom: Optional[Ty], cod: Optional[Ty]) -> None:
    """Both sides must type at the context's typing of ``c`` without narrowing it."""
    u = Unifier()
    d = dom if dom is not None else u.fresh()
    try:
        before = infer_term(c, d, u).cod
    except TypeCheckError as e:
        raise RewriteTypeError(f"source does not type check: {e.message}") from None
    if cod is not None and not u.unify(before, cod):
        raise RewriteTypeError(f"source codomain {u.show(before)} is not {cod}")
    baseline = (u.zonk(d), u.zonk(before))
    shown = f"{u.show(d)} <-> {u.show(before)}"

    ren: dict = {}
    typed_meta = {}
    for name, rdom, rcod in rule.roles:
        if name not in bindings:
            continue
        md = u.fresh()
        try:
            mc = infer_term(bindings[name], md, u).cod
        except TypeCheckError as e:
            raise RewriteTypeError(f"{name} := {bindings[name]} does not type check: {e.message}") from None
        if not (u.unify(md, u.instantiate(rdom, ren)) and u.unify(mc, u.instantiate(rcod, ren))):
            raise RewriteTypeError(
                f"{name} := {bindings[name]} has type {u.show(md)} <-> {u.show(mc)},"
                f" not the role {rdom} <-> {rcod}"
            )
        typed_meta[name] = (md, mc)

    def hook(term, ty, uu, path):
        md, mc = typed_meta[term.name]
        if isinstance(term, AdjMeta):
            md, mc = mc, md
        if not uu.unify(ty, md):
            raise TypeCheckError(path, uu.show(md), uu.show(ty))
        return mc

    try:
        lhs_cod = infer_term(rule.lhs, d, u, hook=hook).cod
        rhs_cod = infer_term(rule.rhs, d, u, hook=hook).cod
    except TypeCheckError as e:
        raise RewriteTypeError(f"{rule.name} does not type check here: {e.message}") from None
    if not (u.unify(lhs_cod, before) and u.unify(rhs_cod, before)):
        raise RewriteTypeError(
            f"{rule.name} changes the codomain from {u.show(before)} to {u.show(rhs_cod)}"
        )
    after = (u.zonk(baseline[0]), u.zonk(baseline[1]))
    if not _is_variant(baseline, after):
        need = "a more specific domain" if dom is None else "more specific types"
        raise RewriteTypeError(
            f"{rule.name} only holds at {u.show(after[0])} <-> {u.show(after[1])}; the"
            f" rewritten term has type {shown}"
            f" ({need} required)"
        )


# --------------------------------------------------------------------------
# evaluation


def _apply_prim(r: Prim, c, dom, cod, hint):
    rule = r.rule
    bindings: dict = {}
    where: dict = {}
    if not match(rule.lhs, c, bindings, where):
        path, found = _first_mismatch(rule.lhs, c)
        raise RewriteMismatch(path, rule.name, _head(found))
    for name, value in r.bindings:
        if name not in rule.metavariables:
            raise RewriteError(f"{rule.name} has no metavariable {name}")
        if name in bindings and not comb_equal(bindings[name], value):
            raise NonLinearMismatch(name, ("explicit binding", where[name]))
        bindings.setdefault(name, value)
    missing = _metas(rule.rhs) - set(bindings)
    if missing and hint is not None:
        from_hint = dict(bindings)
        try:
            if match(rule.rhs, hint, from_hint, {}):
                for name in missing:
                    bindings[name] = from_hint[name]
        except NonLinearMismatch:
            pass
    missing = _metas(rule.rhs) - set(bindings)
    if missing:
        names = ", ".join(sorted(missing))
        raise UnboundMetavariable(
            f"{rule.name} needs {names}, which the source does not determine;"
            f" give it as {rule.name}[{sorted(missing)[0]} = ...]"
        )
    out = substitute(rule.rhs, bindings)
    _check_step(rule, c, bindings, dom, cod)
    return out


def eval1(
    r: Rw,
    c: Comb,
    dom: Optional[Ty] = None,
    cod: Optional[Ty] = None,
    hint: Optional[Comb] = None,
    trace: Optional[list] = None,
) -> Comb:
    """Rewrite ``c`` by ``r``.

    ``dom``/``cod`` give the typing of ``c`` in its context; rules whose two
    sides agree only on narrower types are refused when that typing is too
    general.  ``hint`` is the expected result, used to pick metavariables
    that only the result side mentions.  ``trace`` collects the
    intermediate combinators of transitivity steps.
    """
    if isinstance(r, Id2):
        return c
    if isinstance(r, Prim):
        return _apply_prim(r, c, dom, cod, hint)
    if isinstance(r, Trans2):
        mid = eval1(r.r1, c, dom, cod, None, trace)
        if trace is not None:
            trace.append(mid)
        return eval1(r.r2, mid, dom, cod, hint, trace)
    node = _RESP.get(type(r))
    if node is None:
        raise TypeError(f"not a rewrite: {r!r}")
    if not isinstance(c, node):
        raise RewriteMismatch("", str(r), _head(c))
    u = Unifier()
    d = dom if dom is not None else u.fresh()
    try:
        typed = infer_term(c, d, u)
    except TypeCheckError as e:
        raise RewriteTypeError(f"source does not type check: {e.message}") from None
    if cod is not None and not u.unify(typed.cod, cod):
        raise RewriteTypeError(f"source codomain {u.show(typed.cod)} is not {cod}")
    k1, k2 = (k.zonked(u) for k in typed.kids)
    h1 = h2 = None
    if isinstance(hint, node):
        h1, h2 = hint.c1, hint.c2
    try:
        out1 = eval1(r.r1, c.c1, k1.dom, k1.cod, h1, trace)
    except RewriteMismatch as e:
        raise RewriteMismatch(_join("1", e.path), e.rule, e.found) from None
    try:
        out2 = eval1(r.r2, c.c2, k2.dom, k2.cod, h2, trace)
    except RewriteMismatch as e:
        raise RewriteMismatch(_join("2", e.path), e.rule, e.found) from None
    return node(out1, out2)


def exact(
    r: Rw, c: Comb, expected: Comb, dom: Optional[Ty] = None, cod: Optional[Ty] = None
) -> bool:
    return comb_equal(eval1(r, c, dom, cod, hint=expected), expected)


# --------------------------------------------------------------------------
# text syntax for rewrites and proofs


def _rw_expr(p: Parser) -> Rw:
    left = _rw_seq(p)
    if p.at("."):
        p.advance()
        return Trans2(left, _rw_expr(p))
    return left


def _rw_seq(p: Parser) -> Rw:
    left = _rw_plus(p)
    if p.at(";"):
        p.advance()
        return RespSeq(left, _rw_seq(p))
    return left


def _rw_plus(p: Parser) -> Rw:
    left = _rw_times(p)
    if p.at("(+)"):
        p.advance()
        return RespPlus(left, _rw_plus(p))
    return left


def _rw_times(p: Parser) -> Rw:
    left = _rw_atom(p)
    if p.at("(*)"):
        p.advance()
        return RespTimes(left, _rw_times(p))
    return left


def _rw_atom(p: Parser) -> Rw:
    tok = p.peek()
    if tok.kind == "ident" and tok.text == "id2":
        p.advance()
        return Id2()
    if tok.kind == "ident":
        p.advance()
        try:
            rule = lookup(tok.text)
        except RewriteError:
            raise ParseError(tok.pos, f"a rule name, not {tok.text!r}", p.text) from None
        bindings = []
        if p.at("["):
            p.advance()
            while True:
                name = p.peek()
                if name.kind != "ident":
                    p.fail("a metavariable name")
                p.advance()
                p.expect("=")
                bindings.append((name.text, p.comb()))
                if p.at(","):
                    p.advance()
                    continue
                p.expect("]")
                break
        return Prim(rule, tuple(sorted(bindings)))
    if tok.text == "(":
        p.advance()
        inner = _rw_expr(p)
        p.expect(")")
        return inner
    p.fail("a rewrite ('id2', a rule name or '(')")


def parse_rw(text: str) -> Rw:
    p = Parser(text)
    r = _rw_expr(p)
    p.done()
    return r


@dataclass(frozen=True)
class ProofStep:
    rw: Rw
    expected: Comb
    line: int = field(default=0, compare=False)  # source line, for messages


@dataclass(frozen=True)
class ProofScript:
    start: Comb
    end: Comb
    domain: Ty
    steps: tuple = field(default_factory=tuple)

    def __str__(self) -> str:
        out = [f"claim: {self.start} <=> {self.end} at {self.domain}"]
        out += [f"step: {s.expected} by {s.rw}" for s in self.steps]
        return "\n".join(out) + "\n"


def parse_proof(text: str) -> ProofScript:
    """Parse a ``.piproof`` script.

    ::

        claim: <comb> <=> <comb> at <type>
        step: <comb> by <rewrite>
        ...
    """
    body = strip_comments(text)
    p = Parser(body)
    _keyword(p, "claim")
    p.expect(":")
    start = p.comb()
    p.expect("<=>")
    end = p.comb()
    _keyword(p, "at")
    dom = p.type()
    steps = []
    while p.peek().kind != "eof":
        tok = _keyword(p, "step")
        p.expect(":")
        expected = p.comb()
        _keyword(p, "by")
        rw = _rw_expr(p)
        steps.append(ProofStep(rw, expected, body.count("\n", 0, tok.pos) + 1))
    return ProofScript(start, end, dom, tuple(steps))


def _keyword(p: Parser, word: str):
    tok = p.peek()
    if tok.kind != "ident" or tok.text != word:
        p.fail(repr(word))
    return p.advance()


@dataclass(frozen=True)
class ProofReport:
    accepted: bool
    steps: int
    failed_step: Optional[int] = None  # 1-based
    kind: str = ""
    message: str = ""

    def __str__(self) -> str:
        if self.accepted:
            return f"accepted ({self.steps} steps)"
        where = f"step {self.failed_step}" if self.failed_step else "claim"
        return f"rejected at {where}: {self.kind}: {self.message}"


def check_proof(s: ProofScript) -> ProofReport:
    """Replay every step from the claim's start; see :class:`ProofReport`."""
    n = len(s.steps)
    u = Unifier()
    try:
        cod_start = infer_term(s.start, s.domain, u).cod
        cod_end = infer_term(s.end, s.domain, u).cod
    except TypeCheckError as e:
        return ProofReport(False, n, None, e.kind, e.message)
    if not u.unify(cod_start, cod_end):
        return ProofReport(
            False, n, None, "TypeError",
            f"sides have codomains {u.show(cod_start)} and {u.show(cod_end)}",
        )
    cod = u.zonk(cod_start)
    cur = s.start
    for i, step in enumerate(s.steps, 1):
        try:
            got = eval1(step.rw, cur, s.domain, cod, hint=step.expected)
        except (RewriteError, TypeCheckError) as e:
            return ProofReport(False, n, i, e.kind, e.message)
        if not comb_equal(got, step.expected):
            return ProofReport(
                False, n, i, "NotExact", f"{step.rw} produces {got}, not {step.expected}"
            )
        cur = got
    if not comb_equal(cur, s.end):
        return ProofReport(False, n, n or None, "NotExact", f"proof ends at {cur}, not {s.end}")
    return ProofReport(True, n)


def proof_as_rw(s: ProofScript) -> Rw:
    """The whole script as one transitivity chain."""
    if not s.steps:
        return Id2()
    out = s.steps[-1].rw
    for step in reversed(s.steps[:-1]):
        out = Trans2(step.rw, out)
    return out
