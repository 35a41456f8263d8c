"""Finite fields F_{p^k} as towers of simple extensions over F_p.

Every tower is flattened to a single extension F_p[t]/(m) where ``m`` is the
first monic primitive polynomial of its degree (lexicographic in the
coefficient list).  An element is an ``int`` encoding its coefficient
vector in base ``p``: ``sum(c_j * p**j)`` for ``sum(c_j t^j)``.  The prime
field elements 0..p-1 therefore have the same code in every tower.

Towers remember how they were built (``defining_polys``, ``parent`` and
the embedding of the parent), which is what ``split`` and ``extend``
report back.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .poly import format_polynomial, parse_polynomial

TABLE_LIMIT = 2048  # largest field with dense add/mul tables


class FieldError(ValueError):
    pass


class NotPrimeError(FieldError):
    pass


class ReducibleError(FieldError):
    def __init__(self, message, factor, factorization=None):
        super().__init__(message)
        self.factor = factor
        self.factorization = factorization or [factor]


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def p_log(q, p):
    """Return N with p**N == q, or None."""
    if q < 1:
        return None
    n = 0
    while q % p == 0:
        q //= p
        n += 1
    return n if q == 1 else None


# ---------------------------------------------------------------------------
# flat fields


@dataclass(frozen=True)
class _Flat:
    p: int
    k: int
    modulus: tuple  # monic, low -> high, length k + 1
    exp: np.ndarray
    log: np.ndarray
    digits: np.ndarray
    add_table: np.ndarray | None
    mul_table: np.ndarray | None


def _times_t(code_digits, modulus, p):
    # multiply sum d_j t^j by t and reduce by the monic modulus
    k = len(code_digits)
    top = code_digits[-1]
    out = [0] + list(code_digits[:-1])
    if top:
        for j in range(k):
            out[j] = (out[j] - top * modulus[j]) % p
    return out


def _encode(digs, p):
    v = 0
    for d in reversed(digs):
        v = v * p + d
    return v


@lru_cache(maxsize=None)
def _flat_field(p, k):
    q = p**k
    if k == 1:
        # smallest primitive root g; modulus t - g
        for g in range(1, p):
            if p == 2 or len({pow(g, i, p) for i in range(p - 1)}) == p - 1:
                break
        modulus = ((-g) % p, 1)
    else:
        modulus = None
        for low in itertools.product(range(p), repeat=k):
            low = tuple(reversed(low))
            if low[0] == 0:
                continue
            mod = low + (1,)
            cur = [1] + [0] * (k - 1)
            order = None
            for i in range(1, q):
                cur = _times_t(cur, mod, p)
                if cur == [1] + [0] * (k - 1):
                    order = i
                    break
            if order == q - 1:
                modulus = mod
                break
        assert modulus is not None
    exp = np.zeros(2 * (q - 1), dtype=np.int64)
    log = np.full(q, -1, dtype=np.int64)
    if k == 1:
        g = (-modulus[0]) % p
        cur = 1
        for i in range(q - 1):
            exp[i] = cur
            log[cur] = i
            cur = cur * g % p
    else:
        cur = [1] + [0] * (k - 1)
        for i in range(q - 1):
            code = _encode(cur, p)
            exp[i] = code
            log[code] = i
            cur = _times_t(cur, modulus, p)
    exp[q - 1:] = exp[: q - 1]
    digits = np.zeros((q, k), dtype=np.int64)
    rest = np.arange(q)
    for j in range(k):
        digits[:, j] = rest % p
        rest //= p
    add_t = mul_t = None
    if q <= TABLE_LIMIT:
        pw = p ** np.arange(k)
        add_t = (((digits[:, None, :] + digits[None, :, :]) % p) @ pw).astype(np.int32)
        la, lb = np.meshgrid(log, log, indexing="ij")
        mul_t = np.where((la < 0) | (lb < 0), 0, exp[np.maximum(la, 0) + np.maximum(lb, 0)]).astype(np.int32)
    return _Flat(p, k, modulus, exp, log, digits, add_t, mul_t)


# ---------------------------------------------------------------------------


class FieldTower:
    """The field F_{p^k}, together with the history of how it was built."""

    def __init__(self, p, k=1, *, parent=None, parent_embedding=None,
                 defining_polys=(), adjoined=None):
        if not is_prime(p):
            raise NotPrimeError(f"{p} is not prime")
        self.p = p
        self.degree = k
        self.size = p**k
        self._flat = _flat_field(p, k)
        self.parent = parent
        self.parent_embedding = parent_embedding
        self.defining_polys = tuple(defining_polys)
        self.adjoined = adjoined
        self._emb_cache = {}

    # -- identity -----------------------------------------------------------
    @property
    def modulus(self):
        return self._flat.modulus

    @property
    def characteristic(self):
        return self.p

    def same_field(self, other):
        return self.p == other.p and self.degree == other.degree

    def __repr__(self):
        return f"FieldTower(F_{self.p}^{self.degree}, stages={len(self.defining_polys)})"

    # -- scalar / vector arithmetic on codes --------------------------------
    def add(self, a, b):
        f = self._flat
        if f.add_table is not None:
            return f.add_table[a, b]
        pw = self.p ** np.arange(self.degree)
        return ((f.digits[a] + f.digits[b]) % self.p) @ pw

    def neg(self, a):
        f = self._flat
        pw = self.p ** np.arange(self.degree)
        return ((-f.digits[a]) % self.p) @ pw

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        f = self._flat
        if f.mul_table is not None:
            return f.mul_table[a, b]
        la, lb = f.log[a], f.log[b]
        return np.where((la < 0) | (lb < 0), 0, f.exp[np.maximum(la, 0) + np.maximum(lb, 0)])

    def inv(self, a):
        la = int(self._flat.log[a])
        if la < 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return int(self._flat.exp[(self.size - 1 - la) % (self.size - 1)])

    def power(self, a, n):
        a = int(a)
        if n == 0:
            return 1
        la = int(self._flat.log[a])
        if la < 0:
            return 0
        return int(self._flat.exp[(la * n) % (self.size - 1)])

    def from_int(self, n):
        return int(n) % self.p

    def generator(self):
        """The class of t in F_p[t]/(m) (a primitive element)."""
        return int(self._flat.exp[1]) if self.size > 2 else 1

    def digits(self, a):
        return self._flat.digits[a]

    def from_digits(self, d):
        return int(np.dot(np.asarray(d) % self.p, self.p ** np.arange(self.degree)))

    def elements(self):
        return np.arange(self.size, dtype=np.int64)

    def element(self, v):
        return FieldElement(self, int(v))

    def format(self, a):
        d = self.digits(int(a))
        if self.degree == 1:
            return str(int(d[0]))
        poly = {(j,): int(c) for j, c in enumerate(d) if c}
        return format_polynomial(poly, ["t"]) if poly else "0"

    # -- polynomials over this field (coefficient lists, low -> high) -------
    def poly(self, f):
        """Coerce text, ints or FieldElements into a trimmed coefficient list."""
        if isinstance(f, str):
            parsed, names = parse_polynomial(f)
            if len(names) > 1:
                raise FieldError(f"univariate polynomial expected, got {names}")
            deg = max((e[0] for e in parsed), default=0) if names else 0
            out = [0] * (deg + 1)
            for e, c in parsed.items():
                out[e[0] if names else 0] = self.from_int(c)
            return _trim(out)
        out = []
        for c in f:
            if isinstance(c, FieldElement):
                out.append(self.embed(c))
            else:
                out.append(int(c) % self.p if self.degree == 1 else int(c))
        return _trim(out)

    def poly_eval(self, f, x):
        acc = np.zeros_like(np.asarray(x)) if np.ndim(x) else 0
        for c in reversed(f):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def poly_mul(self, f, g):
        if not f or not g:
            return []
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a:
                for j, b in enumerate(g):
                    if b:
                        out[i + j] = int(self.add(out[i + j], self.mul(a, b)))
        return _trim(out)

    def poly_divmod(self, f, g):
        f = list(f)
        g = _trim(list(g))
        if not g:
            raise ZeroDivisionError("polynomial division by zero")
        inv_lead = self.inv(g[-1])
        quot = [0] * max(len(f) - len(g) + 1, 0)
        while len(f) >= len(g) and f:
            c = int(self.mul(f[-1], inv_lead))
            shift = len(f) - len(g)
            quot[shift] = c
            for j, b in enumerate(g):
                f[shift + j] = int(self.sub(f[shift + j], self.mul(c, b)))
            f = _trim(f)
        return _trim(quot), f

    def format_poly(self, f, var="t"):
        terms = []
        for j in range(len(f) - 1, -1, -1):
            c = int(f[j])
            if not c:
                continue
            cs = self.format(c)
            if self.degree > 1 and "+" in cs:
                cs = f"({cs})"
            mono = "" if j == 0 else (var if j == 1 else f"{var}^{j}")
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            else:
                terms.append(f"{cs}*{mono}")
        return "+".join(terms) if terms else "0"

    # -- embeddings -----------------------------------------------------------
    def embedding_from(self, src):
        """Array mapping codes of ``src`` into ``self`` (a field inclusion)."""
        if src is self or self.same_field(src):
            return np.arange(self.size, dtype=np.int64)
        key = id(src)
        if key in self._emb_cache:
            return self._emb_cache[key][1]
        chain = []
        node = self
        while node is not None and node is not src:
            chain.append(node)
            node = node.parent
        if node is src:
            emb = np.arange(src.size, dtype=np.int64)
            for stage in reversed(chain):
                emb = stage.parent_embedding[emb]
        else:
            if src.p != self.p or self.degree % src.degree:
                raise FieldError(f"{src!r} does not embed into {self!r}")
            theta = find_root(list(src.modulus), self)
            if theta is None:  # pragma: no cover - impossible for dividing degrees
                raise FieldError("no root of the source modulus")
            powers = [1]
            for _ in range(src.degree - 1):
                powers.append(int(self.mul(powers[-1], theta.value)))
            emb = np.zeros(src.size, dtype=np.int64)
            for code in range(src.size):
                acc = 0
                for j, c in enumerate(src.digits(code)):
                    if c:
                        acc = int(self.add(acc, self.mul(int(c), powers[j])))
                emb[code] = acc
        self._emb_cache[key] = (src, emb)
        return emb

    def embed(self, x):
        if isinstance(x, FieldElement):
            if x.tower is self or self.same_field(x.tower):
                return x.value
            return int(self.embedding_from(x.tower)[x.value])
        return int(x)


def _trim(f):
    f = [int(c) for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


@dataclass(frozen=True, eq=False)
class FieldElement:
    tower: FieldTower
    value: int

    def _other(self, o):
        if isinstance(o, FieldElement):
            return self.tower.embed(o)
        return self.tower.from_int(o)

    def __add__(self, o):
        return FieldElement(self.tower, int(self.tower.add(self.value, self._other(o))))

    __radd__ = __add__

    def __sub__(self, o):
        return FieldElement(self.tower, int(self.tower.sub(self.value, self._other(o))))

    def __rsub__(self, o):
        return FieldElement(self.tower, int(self.tower.sub(self._other(o), self.value)))

    def __neg__(self):
        return FieldElement(self.tower, int(self.tower.neg(self.value)))

    def __mul__(self, o):
        return FieldElement(self.tower, int(self.tower.mul(self.value, self._other(o))))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return FieldElement(self.tower, int(self.tower.mul(self.value, self.tower.inv(self._other(o)))))

    def __pow__(self, n):
        if n < 0:
            return FieldElement(self.tower, self.tower.power(self.tower.inv(self.value), -n))
        return FieldElement(self.tower, self.tower.power(self.value, n))

    def __eq__(self, o):
        if isinstance(o, FieldElement):
            return self.tower.same_field(o.tower) and self.value == o.value
        if isinstance(o, int):
            return self.value == self.tower.from_int(o) and self.value < self.tower.p
        return NotImplemented

    def __hash__(self):
        return hash((self.tower.p, self.tower.degree, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElement({self.tower.format(self.value)} in F_{self.tower.size})"


# ---------------------------------------------------------------------------
# operations


def make_prime_field(p):
    """The prime field F_p."""
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    return FieldTower(p, 1)


def _monic_polys(F, d):
    for low in itertools.product(range(F.size), repeat=d):
        yield list(low) + [1]


def _find_factor(F, f):
    n = len(f) - 1
    for d in range(1, n // 2 + 1):
        if d == 1:
            r = find_root(f, F)
            if r is not None:
                return [int(F.neg(r.value)), 1]
            continue
        for g in _monic_polys(F, d):
            if not F.poly_divmod(f, g)[1]:
                return g
    return None


def factorization(F, f):
    """Monic irreducible factors of ``f`` over ``F`` by exhaustive search."""
    f = F.poly(f)
    lead = f[-1]
    f = [int(F.mul(c, F.inv(lead))) for c in f]
    out = []
    while len(f) > 1:
        g = _find_factor(F, f)
        if g is None:
            out.append(f)
            break
        out.append(g)
        f = F.poly_divmod(f, g)[0]
    return out


def is_irreducible(F, f):
    f = F.poly(f)
    return len(f) > 1 and _find_factor(F, f) is None


def extend(F, f):
    """Adjoin a root of the monic irreducible ``f`` (over ``F``) to ``F``."""
    f = F.poly(f)
    if len(f) < 2:
        raise FieldError("extension polynomial must be nonconstant")
    if f[-1] != 1:
        raise FieldError("extension polynomial must be monic")
    g = _find_factor(F, f)
    if g is not None:
        facs = factorization(F, f)
        shown = "*".join(f"({F.format_poly(h)})" for h in facs)
        raise ReducibleError(
            f"{F.format_poly(f)} is reducible over F_{F.size}: {shown}", g, facs)
    d = len(f) - 1
    G = FieldTower(F.p, F.degree * d)
    emb = G.embedding_from(F)
    fg = [int(emb[c]) for c in f]
    root = find_root(fg, G)
    return FieldTower(F.p, F.degree * d, parent=F, parent_embedding=emb,
                      defining_polys=F.defining_polys + (tuple(f),),
                      adjoined=root.value)


def find_root(f, F):
    """First root of ``f`` in ``F`` in code order, or None."""
    f = F.poly(f)
    if len(f) < 2:
        raise FieldError("find_root needs a nonconstant polynomial")
    xs = F.elements()
    vals = F.poly_eval(f, xs)
    hits = np.flatnonzero(np.asarray(vals) == 0)
    return FieldElement(F, int(xs[hits[0]])) if hits.size else None


def roots(f, F):
    f = F.poly(f)
    xs = F.elements()
    vals = np.asarray(F.poly_eval(f, xs))
    return [int(x) for x in xs[vals == 0]]


def split(f, F):
    """Smallest tower over ``F`` in which ``f`` is a product of linear factors."""
    f = F.poly(f)
    if len(f) < 2:
        raise FieldError("split needs a nonconstant polynomial")
    cur = F
    while True:
        g = [int(cur.embedding_from(F)[c]) for c in f]
        rest = g
        while len(rest) > 1:
            r = find_root(rest, cur)
            if r is None:
                break
            rest = cur.poly_divmod(rest, [int(cur.neg(r.value)), 1])[0]
        if len(rest) <= 1:
            return cur
        lead_inv = cur.inv(rest[-1])
        rest = [int(cur.mul(c, lead_inv)) for c in rest]
        facs = factorization(cur, rest)
        smallest = min(facs, key=len)
        cur = extend(cur, smallest)


def frobenius_inverse_power(x, q):
    """The unique ``v`` with ``v**q == x``; ``q`` must be a power of p."""
    F = x.tower
    n = p_log(q, F.p)
    if n is None:
        raise FieldError(f"{q} is not a power of {F.p}")
    e = pow(F.p, (-n) % F.degree)
    v = F.power(x.value, e) if x.value else 0
    assert F.power(v, q) == x.value or x.value == 0
    return FieldElement(F, v)


def minimal_polynomial(x):
    """Minimal polynomial of ``x`` over F_p, as a coefficient list of ints."""
    F = x.tower
    conj = [x.value]
    while True:
        nxt = F.power(conj[-1], F.p)
        if nxt == conj[0]:
            break
        conj.append(nxt)
    poly = [1]
    for c in conj:
        poly = F.poly_mul(poly, [int(F.neg(c)), 1])
    assert all(c < F.p for c in poly)
    return poly
