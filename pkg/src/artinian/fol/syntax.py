"""Abstract syntax for the ring language <+, *, -, 0, 1> with parameters."""

from __future__ import annotations

from dataclasses import dataclass, field


class Term:
    __slots__ = ()

    def __add__(self, o):
        return Add(self, _t(o))

    def __radd__(self, o):
        return Add(_t(o), self)

    def __mul__(self, o):
        return Mul(self, _t(o))

    def __rmul__(self, o):
        return Mul(_t(o), self)

    def __neg__(self):
        return Neg(self)

    def __sub__(self, o):
        return Add(self, Neg(_t(o)))


def _t(x):
    if isinstance(x, Term):
        return x
    if isinstance(x, str):
        return Var(x)
    if x == 0:
        return ZERO
    if x == 1:
        return ONE
    raise TypeError(f"cannot use {x!r} as a term")


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class One(Term):
    pass


ZERO = Zero()
ONE = One()


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Param(Term):
    """A named ring element; ``value`` is bound when the formula is evaluated."""

    name: str
    value: object = field(default=None, compare=False, hash=False)


@dataclass(frozen=True)
class Add(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Neg(Term):
    arg: Term


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term
    tag: object = field(default=None, compare=False, hash=False)


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula
    tag: object = field(default=None, compare=False, hash=False)


@dataclass(frozen=True)
class And(Formula):
    args: tuple
    tag: object = field(default=None, compare=False, hash=False)


@dataclass(frozen=True)
class Or(Formula):
    args: tuple
    tag: object = field(default=None, compare=False, hash=False)


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula
    tag: object = field(default=None, compare=False, hash=False)


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula
    tag: object = field(default=None, compare=False, hash=False)


TRUE = And(())
FALSE = Or(())


def with_tag(f, tag):
    """Copy of ``f`` carrying a semantic tag (ignored by equality)."""
    return type(f)(*[getattr(f, n) for n in f.__dataclass_fields__ if n != "tag"], tag=tag)


def conj(*fs):
    out = []
    for f in fs:
        if isinstance(f, And) and f.tag is None:
            out.extend(f.args)
        else:
            out.append(f)
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(*fs):
    out = []
    for f in fs:
        if isinstance(f, Or) and f.tag is None:
            out.extend(f.args)
        else:
            out.append(f)
    return out[0] if len(out) == 1 else Or(tuple(out))


def implies(a, b):
    return disj(Not(a), b)


def iff(a, b):
    return conj(implies(a, b), implies(b, a))


def neq(a, b):
    return Not(Eq(_t(a), _t(b)))


def eq(a, b):
    return Eq(_t(a), _t(b))


def exists(names, body):
    if isinstance(names, str):
        names = [names]
    for n in reversed(list(names)):
        body = Exists(n, body)
    return body


def forall(names, body):
    if isinstance(names, str):
        names = [names]
    for n in reversed(list(names)):
        body = Forall(n, body)
    return body


def add_all(terms):
    terms = list(terms)
    if not terms:
        return ZERO
    acc = terms[0]
    for t in terms[1:]:
        acc = Add(acc, t)
    return acc


def mul_all(terms):
    terms = list(terms)
    if not terms:
        return ONE
    acc = terms[0]
    for t in terms[1:]:
        acc = Mul(acc, t)
    return acc


def times(n, t):
    """n-fold sum t + ... + t (0 for n = 0)."""
    return add_all([t] * n)


# ---------------------------------------------------------------------------
# traversal


def term_vars(t, acc=None):
    acc = set() if acc is None else acc
    stack = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            acc.add(t.name)
        elif isinstance(t, (Add, Mul)):
            stack.append(t.left)
            stack.append(t.right)
        elif isinstance(t, Neg):
            stack.append(t.arg)
    return acc


def term_params(t, acc=None):
    acc = {} if acc is None else acc
    stack = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, Param):
            acc.setdefault(t.name, t)
        elif isinstance(t, (Add, Mul)):
            stack.append(t.left)
            stack.append(t.right)
        elif isinstance(t, Neg):
            stack.append(t.arg)
    return acc


def free_vars(f):
    if isinstance(f, Eq):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, (And, Or)):
        out = set()
        for a in f.args:
            out |= free_vars(a)
        return out
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f)


def all_names(f, acc=None):
    """Every variable name occurring in ``f``, bound or free."""
    acc = set() if acc is None else acc
    if isinstance(f, Eq):
        term_vars(f.left, acc)
        term_vars(f.right, acc)
    elif isinstance(f, Not):
        all_names(f.arg, acc)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            all_names(a, acc)
    elif isinstance(f, (Exists, Forall)):
        acc.add(f.var)
        all_names(f.body, acc)
    _tag_names(getattr(f, "tag", None), acc)
    return acc


def _tag_names(tag, acc):
    if not tag:
        return
    for item in tag[1:]:
        if isinstance(item, Term):
            term_vars(item, acc)
        elif isinstance(item, tuple):
            for t in item:
                if isinstance(t, Term):
                    term_vars(t, acc)


def params(f, acc=None):
    acc = {} if acc is None else acc
    if isinstance(f, Eq):
        term_params(f.left, acc)
        term_params(f.right, acc)
    elif isinstance(f, Not):
        params(f.arg, acc)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            params(a, acc)
    elif isinstance(f, (Exists, Forall)):
        params(f.body, acc)
    return acc


def quantifier_depth(f):
    if isinstance(f, Eq):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.arg)
    if isinstance(f, (And, Or)):
        return max((quantifier_depth(a) for a in f.args), default=0)
    return 1 + quantifier_depth(f.body)


def size(f):
    if isinstance(f, Eq):
        return 1
    if isinstance(f, Not):
        return 1 + size(f.arg)
    if isinstance(f, (And, Or)):
        return 1 + sum(size(a) for a in f.args)
    return 1 + size(f.body)


def substitute_term(t, mapping):
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Add):
        return Add(substitute_term(t.left, mapping), substitute_term(t.right, mapping))
    if isinstance(t, Mul):
        return Mul(substitute_term(t.left, mapping), substitute_term(t.right, mapping))
    if isinstance(t, Neg):
        return Neg(substitute_term(t.arg, mapping))
    return t


def substitute(f, mapping):
    """Replace free variables by terms (no capture checks: callers use fresh names)."""
    if isinstance(f, Eq):
        return Eq(substitute_term(f.left, mapping), substitute_term(f.right, mapping), tag=_sub_tag(f.tag, mapping))
    if isinstance(f, Not):
        return Not(substitute(f.arg, mapping), tag=_sub_tag(f.tag, mapping))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(substitute(a, mapping) for a in f.args), tag=_sub_tag(f.tag, mapping))
    inner = {k: v for k, v in mapping.items() if k != f.var}
    return type(f)(f.var, substitute(f.body, inner), tag=_sub_tag(f.tag, inner))


def _sub_tag(tag, mapping):
    if not tag:
        return tag
    out = [tag[0]]
    for item in tag[1:]:
        if isinstance(item, Term):
            out.append(substitute_term(item, mapping))
        elif isinstance(item, tuple):
            out.append(tuple(substitute_term(t, mapping) if isinstance(t, Term) else t for t in item))
        else:
            out.append(item)
    return tuple(out)


def bind_params(f, values):
    """Attach ring values to Param nodes by name."""

    def bt(t):
        if isinstance(t, Param):
            return Param(t.name, values.get(t.name, t.value))
        if isinstance(t, Add):
            return Add(bt(t.left), bt(t.right))
        if isinstance(t, Mul):
            return Mul(bt(t.left), bt(t.right))
        if isinstance(t, Neg):
            return Neg(bt(t.arg))
        return t

    def btag(tag):
        if not tag:
            return tag
        return tuple(bt(x) if isinstance(x, Term) else
                     (tuple(bt(y) if isinstance(y, Term) else y for y in x) if isinstance(x, tuple) else x)
                     for x in tag)

    def bf(g):
        if isinstance(g, Eq):
            return Eq(bt(g.left), bt(g.right), tag=btag(g.tag))
        if isinstance(g, Not):
            return Not(bf(g.arg), tag=btag(g.tag))
        if isinstance(g, (And, Or)):
            return type(g)(tuple(bf(a) for a in g.args), tag=btag(g.tag))
        return type(g)(g.var, bf(g.body), tag=btag(g.tag))

    return bf(f)


def fresh_names(avoid, prefix, count, start=1):
    out = []
    i = start
    while len(out) < count:
        name = f"{prefix}{i}"
        if name not in avoid:
            out.append(name)
        i += 1
    return out
