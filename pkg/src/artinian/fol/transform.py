"""Syntactic transforms: desugaring, the Red_a reduction, prenex shape."""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (ZERO, Add, And, Eq, Exists, Forall, Mul, Neg, Not, Or, Param, Term,
                     Var, Zero, add_all, all_names, fresh_names)


class CaptureError(ValueError):
    pass


def desugar(f):
    """Rewrite Or and Forall into Not / And / Exists.  Tags are kept."""
    if isinstance(f, Eq):
        return f
    if isinstance(f, Not):
        return Not(desugar(f.arg), tag=f.tag)
    if isinstance(f, And):
        return And(tuple(desugar(a) for a in f.args), tag=f.tag)
    if isinstance(f, Or):
        return Not(And(tuple(Not(desugar(a)) for a in f.args)), tag=f.tag)
    if isinstance(f, Exists):
        return Exists(f.var, desugar(f.body), tag=f.tag)
    if isinstance(f, Forall):
        return Not(Exists(f.var, Not(desugar(f.body))), tag=f.tag)
    raise TypeError(f)


def _gen_terms(gens):
    out = []
    for i, g in enumerate(gens):
        if isinstance(g, Term):
            out.append(g)
        elif isinstance(g, str):
            out.append(Var(g))
        else:  # a ring element
            out.append(Param(f"a{i + 1}", g))
    return out


def _red_tag(tag, gens):
    if not tag or tag[0] not in ("mass", "nu"):
        return None
    kind, x, old = tag
    return (kind, x, tuple(old) + tuple(gens))


def reduce_modulo(f, n=None, gens=None, *, avoid=()):
    """Red_a f: true in R at x iff f holds in R/(a_1..a_n) at the image of x.

    ``gens`` may be variable names, terms, or ring elements (wrapped into
    parameters).  With only ``n`` given the generators are ``a1..an``.
    """
    if gens is None:
        if n is None:
            raise ValueError("give n or gens")
        gens = [f"a{i}" for i in range(1, n + 1)]
    gens = _gen_terms(gens)
    if n is not None and n != len(gens):
        raise ValueError(f"n={n} but {len(gens)} generators given")
    g = desugar(f)
    names = all_names(g)
    gen_vars = set()
    for t in gens:
        from .syntax import term_vars

        term_vars(t, gen_vars)
    bound = _bound_names(g)
    clash = gen_vars & bound
    if clash:
        raise CaptureError(f"generator names {sorted(clash)} are bound in the formula")
    taken = names | gen_vars | set(avoid)
    k = len(gens)
    ys = fresh_names(taken, "y", k)
    return _red(g, gens, ys)


def _bound_names(f, acc=None):
    acc = set() if acc is None else acc
    if isinstance(f, Not):
        _bound_names(f.arg, acc)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            _bound_names(a, acc)
    elif isinstance(f, (Exists, Forall)):
        acc.add(f.var)
        _bound_names(f.body, acc)
    return acc


def _red(f, gens, ys):
    if isinstance(f, Eq):
        diff = f.left if isinstance(f.right, Zero) else Add(f.left, Neg(f.right))
        rhs = add_all([Mul(a, Var(y)) for a, y in zip(gens, ys)])
        body = Eq(diff, rhs)
        for y in reversed(ys):
            body = Exists(y, body)
        return body
    if isinstance(f, Not):
        return Not(_red(f.arg, gens, ys), tag=_red_tag(f.tag, gens))
    if isinstance(f, And):
        return And(tuple(_red(a, gens, ys) for a in f.args), tag=_red_tag(f.tag, gens))
    if isinstance(f, Exists):
        return Exists(f.var, _red(f.body, gens, ys), tag=_red_tag(f.tag, gens))
    raise TypeError(f"not desugared: {type(f).__name__}")


# ---------------------------------------------------------------------------
# prenex shape


@dataclass(frozen=True)
class QuantifierShape:
    kind: str  # "qf", "exists", "forall"
    k: int

    def __str__(self):
        if self.kind == "qf":
            return "quantifier-free"
        return ("∃" if self.kind == "exists" else "∀") + f"_{self.k}"


def _ranks(f):
    """(E, A): least n with f equivalent, by prenexing, to an ∃_n resp. ∀_n formula."""
    if isinstance(f, Eq):
        return 0, 0
    if isinstance(f, Not):
        e, a = _ranks(f.arg)
        return a, e
    if isinstance(f, (And, Or)):
        e = a = 0
        for x in f.args:
            ex, ax = _ranks(x)
            e, a = max(e, ex), max(a, ax)
        return _norm(e, a)
    if isinstance(f, Exists):
        e, a = _ranks(f.body)
        e = max(e, 1)
        return _norm(e, e + 1)
    if isinstance(f, Forall):
        e, a = _ranks(f.body)
        a = max(a, 1)
        return _norm(a + 1, a)
    raise TypeError(f)


def _norm(e, a):
    return min(e, a + 1), min(a, e + 1)


def shape(f):
    e, a = _ranks(f)
    if e == 0 and a == 0:
        return QuantifierShape("qf", 0)
    if e < a:
        return QuantifierShape("exists", e)
    if a < e:
        return QuantifierShape("forall", a)
    return QuantifierShape("forall", a)


def prenex_string(f):
    """Naive prenex quantifier prefix (for cross-checking ``shape``): e.g. '∀∀∃'."""
    return "".join(q for q, _ in _prefix(f))


def _prefix(f, neg=False):
    # returns list of (quantifier symbol, var) after pushing negations inward,
    # pulling quantifiers of each conjunct/disjunct out left to right
    if isinstance(f, Eq):
        return []
    if isinstance(f, Not):
        return _prefix(f.arg, not neg)
    if isinstance(f, (And, Or)):
        out = []
        for a in f.args:
            out.extend(_prefix(a, neg))
        return out
    q = "∃" if isinstance(f, Exists) != neg else "∀"
    return [(q, f.var)] + _prefix(f.body, neg)


def alternations(prefix):
    """Number of quantifier blocks in a prefix string."""
    blocks = 0
    last = None
    for q in prefix:
        if q != last:
            blocks += 1
            last = q
    return blocks


def atom_polarities(f, neg=False, acc=None):
    """Set of polarities (True = positive) with which atoms occur."""
    acc = set() if acc is None else acc
    if isinstance(f, Eq):
        acc.add(not neg)
    elif isinstance(f, Not):
        atom_polarities(f.arg, not neg, acc)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            atom_polarities(a, neg, acc)
    else:
        atom_polarities(f.body, neg, acc)
    return acc
