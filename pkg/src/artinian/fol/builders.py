"""The named sentences: local rings, length, depth zero, Gorenstein axioms.

Macros that the fast evaluator can decide directly carry a tag:
``("nu", r, gens)`` on Nu(r), ``("mass", x, gens)`` on Mass(x) (``gens`` are
the ideal generators a Red transform has pushed through the macro) and
``("len", l)`` on Len_l.
"""

from __future__ import annotations

from functools import lru_cache

from .syntax import (ONE, ZERO, Add, And, Eq, Exists, Forall, Mul, Not, Or, Var, conj, disj,
                     eq, exists, forall, iff, implies, mul_all, neq, times, with_tag)
from .transform import reduce_modulo


def _v(x):
    return Var(x) if isinstance(x, str) else x


def nu(r="r", s="s"):
    """Nu(r): r is not a unit."""
    r = _v(r)
    return with_tag(Forall(s, neq(Mul(Var(s), r), ONE)), ("nu", r, ()))


def loc():
    """Loc: the non-units are closed under addition."""
    body = implies(conj(nu("r", "u"), nu("s", "u")), nu(Add(Var("r"), Var("s")), "u"))
    return forall(["r", "s"], body)


def ass(x="x"):
    x = _v(x)
    a, b = Var("a"), Var("b")
    return conj(neq(x, ZERO),
                forall(["a", "b"], implies(eq(mul_all([a, b, x]), ZERO),
                                           disj(eq(Mul(a, x), ZERO), eq(Mul(b, x), ZERO)))))


def mass(x="x"):
    """Mass(x): Ann(x) is a maximal ideal."""
    x = _v(x)
    s, r, t = Var("s"), Var("r"), Var("t")
    second = forall("s", implies(neq(Mul(s, x), ZERO),
                                 exists(["r", "t"], conj(eq(Mul(t, x), ZERO),
                                                         eq(Add(t, Mul(r, s)), ONE)))))
    f = conj(ass(x), second)
    return with_tag(f if isinstance(f, And) else And((f,)), ("mass", x, ()))


def ar1():
    s, t = Var("s"), Var("t")
    return forall("s", disj(eq(s, ZERO), exists("t", eq(Mul(s, t), ONE))))


@lru_cache(maxsize=None)
def ar(l):
    """Ar_l, built through Red exactly as in the recursion."""
    if l < 1:
        raise ValueError("Ar_l needs l >= 1")
    if l == 1:
        return ar1()
    xl = f"x{l}"
    inner = reduce_modulo(ar(l - 1), gens=[xl])
    return Exists(xl, conj(mass(xl), inner))


def art(l):
    """Loc and Ar_1 or ... or Ar_l: length at most l."""
    if l < 1:
        raise ValueError("Art_l needs l >= 1")
    return conj(loc(), disj(*[ar(i) for i in range(1, l + 1)]))


def art_exact(l):
    """Length exactly l: Art_l without Art_{l-1}.

    ``Loc and Ar_l`` alone is not enough: Ar_1 holds in the zero ring, so a
    field satisfies Ar_2 with x = 1, and a ring of length l-1 satisfies Ar_l.
    """
    if l < 1:
        raise ValueError("Art'_l needs l >= 1")
    if l == 1:
        return conj(loc(), ar(1))
    return conj(loc(), ar(l), Not(disj(*[ar(i) for i in range(1, l)])))


def depth_zero():
    return conj(loc(), Exists("x", mass("x")))


def _chi(l):
    """chi_l(a_1..a_l, b_1..b_{l-1}): the chain condition of Len_l."""
    parts = [neq(Var("a1"), ZERO)]
    for k in range(1, l):
        b = Var(f"b{k}")
        parts.append(neq(Mul(b, Var(f"a{k + 1}")), ZERO))
        for i in range(1, k + 1):
            parts.append(eq(Mul(b, Var(f"a{i}")), ZERO))
    return conj(*parts)


def len_(l):
    """Len_l = exists a, b. chi_l(a, b)."""
    if l < 1:
        raise ValueError("Len_l needs l >= 1")
    names = [f"a{i}" for i in range(1, l + 1)] + [f"b{i}" for i in range(1, l)]
    return with_tag(exists(names, _chi(l)), ("len", l))


def ec(n):
    """Ec_n: local, depth zero, and n = 0 in R iff n = 0 in the residue field."""
    if n < 1:
        raise ValueError("Ec_n needs n >= 1")
    x = Var("x")
    cond = iff(eq(times(n, ONE), ZERO), eq(times(n, x), ZERO))
    return conj(loc(), Exists("x", conj(mass("x"), cond)))


def root(d, x="x"):
    """Root_d(x): every monic degree-d polynomial has a root modulo Ann(x)."""
    if d < 1:
        raise ValueError("Root_d needs d >= 1")
    x = _v(x)
    y = Var("y")
    a = [Var(f"a{i}") for i in range(1, d + 1)]
    poly = mul_all([y] * d)
    for i in range(1, d + 1):
        poly = Add(poly, Mul(a[i - 1], mul_all([y] * (d - i))) if d - i else a[i - 1])
    return forall([t.name for t in a], Exists("y", eq(Mul(x, poly), ZERO)))


def root_sentence(d):
    return Exists("x", conj(mass("x"), root(d, "x")))


def min_(x="x"):
    """Min(x): xR is the unique minimal ideal."""
    x = _v(x)
    a, b = Var("a"), Var("b")
    return Forall("a", Exists("b", conj(neq(x, ZERO), disj(eq(a, ZERO), eq(x, Mul(b, a))))))


def min_sentence():
    return Exists("x", min_("x"))


def char_axioms(char_spec):
    """Sentences fixing the characteristic: ``char_spec`` is an int n (n*1 = 0,
    and m*1 != 0 for proper divisors m of n), or None."""
    if char_spec is None:
        return []
    n = int(char_spec)
    out = [eq(times(n, ONE), ZERO)]
    for m in range(1, n):
        if n % m == 0:
            out.append(neq(times(m, ONE), ZERO))
    return out


def gor_axioms(l, d_max, char_spec=None):
    """Finite part of the Gor_l axioms: Loc, length exactly l, a unique minimal
    ideal, root sentences up to degree d_max, optional characteristic."""
    if l < 1:
        raise ValueError("Gor_l needs l >= 1")
    axioms = [loc(), art_exact(l), min_sentence()]
    axioms += [root_sentence(d) for d in range(1, d_max + 1)]
    axioms += char_axioms(char_spec)
    return axioms


CATALOGUE_NAMES = ("nu", "loc", "ass", "mass", "ar", "art", "art_exact", "depth_zero",
                   "len", "ec", "root", "min", "gor")
