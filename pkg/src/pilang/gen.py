"""Random types, values and well-typed combinators for property testing.

Everything takes an explicit :class:`random.Random` so runs are
reproducible from a seed.
"""
from __future__ import annotations

import random
from typing import Optional

from .errors import TypeCheckError
from .normalize import canonical_type, normalizer, size
from .rewrite import _metas, substitute
from .syntax import (
    AdjMeta,
    CONSTANTS,
    ONE,
    SIGNATURES,
    UNIT,
    ZERO,
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
    TVar,
    Ty,
    Unifier,
    Val,
    Zero,
    adjoint,
    infer_term,
    is_ground,
)


def random_type(rng: random.Random, max_size: int = 8, depth: int = 3) -> Ty:
    """A type of at most ``max_size`` values and tree depth ``depth``."""
    return random_type_of_size(rng, rng.randint(0, max_size), depth)


def random_type_of_size(rng: random.Random, n: int, depth: int = 3) -> Ty:
    if depth <= 0 or rng.random() < 0.25:
        if n == 0:
            return ZERO
        if n == 1:
            return ONE
        if depth <= 0:
            return canonical_type(n)
    options = ["sum"]
    factors = [k for k in range(2, n) if n % k == 0]
    if factors or n <= 1:
        options.append("prod")
    if rng.choice(options) == "prod":
        if n == 0:
            return Prod(random_type_of_size(rng, 0, depth - 1), random_type(rng, 3, depth - 1)) \
                if rng.random() < 0.5 else \
                Prod(random_type(rng, 3, depth - 1), random_type_of_size(rng, 0, depth - 1))
        if n == 1:
            return Prod(random_type_of_size(rng, 1, depth - 1), random_type_of_size(rng, 1, depth - 1))
        k = rng.choice(factors)
        return Prod(random_type_of_size(rng, k, depth - 1), random_type_of_size(rng, n // k, depth - 1))
    k = rng.randint(0, n)
    return Sum(random_type_of_size(rng, k, depth - 1), random_type_of_size(rng, n - k, depth - 1))


def random_value(rng: random.Random, b: Ty) -> Val:
    match b:
        case One():
            return UNIT
        case Sum(l, r):
            m, n = size(l), size(r)
            if m + n == 0:
                raise ValueError(f"{b} is empty")
            return InL(random_value(rng, l)) if rng.randrange(m + n) < m else InR(random_value(rng, r))
        case Prod(l, r):
            return Pair(random_value(rng, l), random_value(rng, r))
    raise ValueError(f"{b} is empty")


def _ground(rng: random.Random, t: Ty, u: Unifier) -> Ty:
    """Replace the unconstrained variables of ``t`` by small random types."""
    t = u.zonk(t)
    if is_ground(t):
        return t
    for name in _vars(t):
        u.unify(TVar(name), random_type(rng, 2, 2))
    return u.zonk(t)


def _vars(t: Ty) -> list:
    if isinstance(t, TVar):
        return [t.name]
    if isinstance(t, (Sum, Prod)):
        return _vars(t.left) + [v for v in _vars(t.right) if v not in _vars(t.left)]
    return []


def applicable_constants(dom: Ty) -> list[str]:
    out = []
    for name in CONSTANTS:
        u = Unifier()
        sd, _ = SIGNATURES[name]
        if u.unify(dom, u.instantiate(sd, {})):
            out.append(name)
    return out


def random_comb(rng: random.Random, dom: Ty, depth: int = 4) -> tuple[Comb, Ty]:
    """A combinator well typed at ``dom`` with term depth at most ``depth``.

    Returns the combinator and the ground codomain it was built towards.
    """
    kinds = ["const"]
    if depth > 1:
        kinds += ["seq", "seq"]
        if isinstance(dom, Sum):
            kinds += ["plus", "plus"]
        if isinstance(dom, Prod):
            kinds += ["times", "times"]
    kind = rng.choice(kinds)
    if kind == "seq":
        c1, mid = random_comb(rng, dom, depth - 1)
        c2, cod = random_comb(rng, mid, depth - 1)
        return Seq(c1, c2), cod
    if kind in ("plus", "times"):
        c1, t1 = random_comb(rng, dom.left, depth - 1)
        c2, t2 = random_comb(rng, dom.right, depth - 1)
        node, ty = (Plus, Sum) if kind == "plus" else (Times, Prod)
        return node(c1, c2), ty(t1, t2)
    name = rng.choice(applicable_constants(dom))
    u = Unifier()
    cod = infer_term(Const(name), dom, u).cod
    return Const(name), _ground(rng, cod, u)


def random_between(rng: random.Random, b1: Ty, b2: Ty, depth: int = 3) -> Comb:
    """A random combinator ``b1 <-> b2``; the two types must have equal size."""
    n = size(b1)
    if n != size(b2):
        raise ValueError(f"{b1} and {b2} have different sizes")
    for _ in range(4):
        c, cod = random_comb(rng, b1, depth)
        if cod == b2 and rng.random() < 0.7:
            return c
    w1, x1 = random_comb(rng, b1, depth)
    w2, x2 = random_comb(rng, b2, depth)
    mid, y = random_comb(rng, canonical_type(n), depth)
    parts = [w1, normalizer(x1), mid, normalizer(y), adjoint(normalizer(x2)), adjoint(w2)]
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Seq(p, out)
    return out


# --------------------------------------------------------------------------
# rule instances


class _Classes:
    """Union-find over type variable names."""

    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def instantiate_rule(rng: random.Random, rule, max_size: int = 8, depth: int = 3, tries: int = 200):
    """Random ``(lhs, rhs, domain, bindings)`` instance of a rule.

    Metavariables are bound to random combinators at their roles and the
    remaining type variables are chosen so the domain has at most
    ``max_size`` values.
    """
    for _ in range(tries):
        got = _try_instance(rng, rule, max_size, depth)
        if got is not None:
            return got
    raise RuntimeError(f"no instance of {rule.name} found")


def _try_instance(rng, rule, max_size, depth):
    u = Unifier()
    ren: dict = {}
    roles = {m: (u.instantiate(d, ren), u.instantiate(c, ren)) for m, d, c in rule.roles}

    def hook(term, ty, uu, path):
        md, mc = roles[term.name]
        if isinstance(term, AdjMeta):
            md, mc = mc, md
        if not uu.unify(ty, md):
            raise TypeCheckError(path, str(md), str(ty))
        return mc

    d = u.fresh()
    lhs_cod = infer_term(rule.lhs, d, u, hook=hook).cod
    rhs_cod = infer_term(rule.rhs, d, u, hook=hook).cod
    if not u.unify(lhs_cod, rhs_cod):
        raise RuntimeError(f"{rule.name} has sides of different types")

    # metavariables must be isomorphisms, so each role relates equal sizes
    classes = _Classes()
    for md, mc in roles.values():
        zd, zc = u.zonk(md), u.zonk(mc)
        if isinstance(zd, TVar) and isinstance(zc, TVar):
            classes.union(zd.name, zc.name)
    sizes: dict = {}
    for md, mc in roles.values():
        for t in (u.zonk(md), u.zonk(mc)):
            for v in _vars(t):
                root = classes.find(v)
                if root not in sizes:
                    sizes[root] = rng.choice([0, 1, 1, 2, 2, 3, 4])
                if not u.unify(TVar(v), random_type_of_size(rng, sizes[root], 2)):
                    return None
    for md, mc in roles.values():
        if size(u.zonk(md)) != size(u.zonk(mc)):
            return None
    bindings = {
        m: random_between(rng, u.zonk(md), u.zonk(mc), depth)
        for m, (md, mc) in roles.items()
        if m in _metas(rule.lhs) | _metas(rule.rhs)
    }
    dom = _ground_small(rng, u.zonk(d), u)
    if dom is None or size(dom) > max_size:
        return None
    lhs = substitute(rule.lhs, bindings)
    rhs = substitute(rule.rhs, bindings)
    return lhs, rhs, dom, bindings


def _ground_small(rng, t: Ty, u: Unifier) -> Optional[Ty]:
    for name in _vars(t):
        if not u.unify(TVar(name), random_type(rng, 2, 2)):
            return None
    return u.zonk(t)
