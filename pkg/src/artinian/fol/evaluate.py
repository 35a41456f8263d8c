"""Satisfaction of formulas in finite rings.

``eval_reference`` is plain Tarskian recursion over Python ints and exists to
certify ``eval_fast``.  ``eval_fast`` works on rows: each row is an assignment
of the variables in scope, a quantifier multiplies every live row by the ring
(in blocks that respect the cell budget), and connectives only evaluate their
later arguments on rows that are still undecided.  On top of that it recognises

* existential blocks over a linear equation, ``exists y. s + sum c_i y_i = 0``,
  decided as ``-s in (c_1, ..., c_k)`` from precomputed ideal masks;
* conjuncts that do not mention the quantified variable (miniscoping);
* cheap conjuncts (atoms and tagged macros) used to pre-filter witnesses;
* tagged macros: Nu (non-unit test), Mass (``x not in a`` and ``m x in a``)
  and Len_l (search over chains of ideals).
"""

from __future__ import annotations

import numpy as np

from .syntax import (Add, And, Eq, Exists, Forall, Formula, Mul, Neg, Not, One, Or, Param,
                     Term, Var, Zero, free_vars, quantifier_depth, term_vars)

DEFAULT_BUDGET = 1 << 22
REFERENCE_GATE = 10**8


class EvaluationError(ValueError):
    pass


class EvaluationBudgetError(EvaluationError):
    pass


# ---------------------------------------------------------------------------
# model adapter


class Model:
    """Table-driven view of a finite ring for the evaluators."""

    def __init__(self, ring):
        self.ring = ring
        self.n = ring.size
        t = getattr(ring, "tables", None)
        self.tables = t
        self.is_local = bool(getattr(ring, "is_local", False))
        self.zero = int(ring.zero_code)
        self.one = int(ring.one_code)
        self._ids = {}
        self._masks = []
        self._gens = []
        self._join = {}
        self._pids = None
        self._jt = np.full((0, 0), -1, dtype=np.int64)
        zero = np.zeros(self.n, dtype=bool)
        zero[self.zero] = True
        self.zero_id = self._intern(zero, ())
        if hasattr(ring, "unit_mask"):
            self.unit_mask = np.asarray(ring.unit_mask, dtype=bool)
        else:
            self.unit_mask = ring.residue_codes != 0

    # arithmetic on code arrays
    def add(self, a, b):
        if self.tables is not None:
            return self.tables[0][a, b]
        return self.ring.add_codes(a, b)

    def mul(self, a, b):
        if self.tables is not None:
            return self.tables[1][a, b]
        return self.ring.mul_codes(a, b)

    def neg(self, a):
        if self.tables is not None:
            return self.tables[2][a]
        return self.ring.neg_codes(a)

    def code(self, value):
        if value is None:
            raise EvaluationError("unbound parameter")
        return self.ring.code_of(value)

    # ideals, interned as integer ids with boolean member masks
    def _intern(self, mask, gens):
        key = mask.tobytes()
        i = self._ids.get(key)
        if i is None:
            i = len(self._masks)
            self._ids[key] = i
            self._masks.append(mask)
            self._gens.append(tuple(gens))
        return i

    @property
    def principal_ids(self):
        if self._pids is None:
            pids = np.empty(self.n, dtype=np.int64)
            for c in range(self.n):
                if self.tables is not None:
                    mask = np.zeros(self.n, dtype=bool)
                    mask[self.tables[1][c]] = True
                else:
                    mask = self.ring.ideal([self.ring.decode(c)]).member_mask()
                pids[c] = self._intern(mask, (c,) if c != self.zero else ())
            self._pids = pids
        return self._pids

    def join(self, i, j):
        key = (i, j) if i <= j else (j, i)
        hit = self._join.get(key)
        if hit is not None:
            return hit
        A, B = self._masks[i], self._masks[j]
        if not (B & ~A).any():
            out = i
        elif not (A & ~B).any():
            out = j
        else:
            gens = self._gens[i] + self._gens[j]
            if self.tables is not None:
                S = self.add(np.flatnonzero(A)[:, None], np.flatnonzero(B)[None, :])
                mask = np.zeros(self.n, dtype=bool)
                mask[S.ravel()] = True
            else:
                mask = self.ring.ideal([self.ring.decode(c) for c in gens]).member_mask()
            out = self._intern(mask, gens)
        self._join[key] = out
        return out

    def _join_table(self):
        k = len(self._masks)
        if self._jt.shape[0] < k:
            cap = max(2 * self._jt.shape[0], k)
            jt = np.full((cap, cap), -1, dtype=np.int64)
            old = self._jt.shape[0]
            jt[:old, :old] = self._jt
            self._jt = jt
        return self._jt

    def join_ids(self, ids, other):
        """Elementwise join of two broadcastable arrays of ideal ids."""
        ids, other = np.broadcast_arrays(np.asarray(ids), np.asarray(other))
        while True:
            jt = self._join_table()
            out = jt[ids, other]
            missing = out < 0
            if not missing.any():
                return out
            width = jt.shape[0]
            keys = np.unique(ids[missing] * width + other[missing])
            for key in keys:
                a, b = int(key // width), int(key % width)
                c = self.join(a, b)
                jt = self._join_table()
                jt[a, b] = jt[b, a] = c

    def ideal_id_array(self, coefs):
        """Ideal ids of (c_1, ..., c_k) for broadcastable code arrays c_j."""
        pids = self.principal_ids
        coefs = sorted((np.asarray(c) for c in coefs), key=np.size)
        ids = np.asarray(self.zero_id)
        for c in coefs:
            ids = self.join_ids(ids, pids[c])
        return ids

    def ideal_ids(self, C):
        """Ideal ids for the rows of the code matrix ``C`` (shape (U, k))."""
        C = np.asarray(C, dtype=np.int64)
        return np.broadcast_to(self.ideal_id_array([C[:, j] for j in range(C.shape[1])]), C.shape[:1])

    def mask_table(self):
        return np.stack(self._masks)

    def ideal_mask(self, codes):
        codes = np.asarray(list(codes), dtype=np.int64).reshape(1, -1)
        return self._masks[int(self.ideal_ids(codes)[0])]

    def ann_mask(self, mask):
        S = np.flatnonzero(mask)
        if self.tables is not None:
            return np.all(self.tables[1][:, S] == self.zero, axis=1)
        out = np.ones(self.n, dtype=bool)
        allc = np.arange(self.n)
        for s in S:
            out &= self.mul(allc, np.full(self.n, s)) == self.zero
        return out

    @property
    def nonunits(self):
        return np.flatnonzero(~self.unit_mask)


# ---------------------------------------------------------------------------
# reference evaluator


def _ref_term(M, t, env):
    if isinstance(t, Zero):
        return M.zero
    if isinstance(t, One):
        return M.one
    if isinstance(t, Var):
        if t.name not in env:
            raise EvaluationError(f"unassigned free variable {t.name!r}")
        return env[t.name]
    if isinstance(t, Param):
        return M.code(t.value)
    if isinstance(t, Add):
        return int(M.add(_ref_term(M, t.left, env), _ref_term(M, t.right, env)))
    if isinstance(t, Mul):
        return int(M.mul(_ref_term(M, t.left, env), _ref_term(M, t.right, env)))
    if isinstance(t, Neg):
        return int(M.neg(_ref_term(M, t.arg, env)))
    raise TypeError(t)


def _ref(M, f, env):
    if isinstance(f, Eq):
        return _ref_term(M, f.left, env) == _ref_term(M, f.right, env)
    if isinstance(f, Not):
        return not _ref(M, f.arg, env)
    if isinstance(f, And):
        return all(_ref(M, a, env) for a in f.args)
    if isinstance(f, Or):
        return any(_ref(M, a, env) for a in f.args)
    if isinstance(f, Exists):
        for c in range(M.n):
            env2 = dict(env)
            env2[f.var] = c
            if _ref(M, f.body, env2):
                return True
        return False
    if isinstance(f, Forall):
        for c in range(M.n):
            env2 = dict(env)
            env2[f.var] = c
            if not _ref(M, f.body, env2):
                return False
        return True
    raise TypeError(f)


def _model(ring):
    return ring if isinstance(ring, Model) else Model(ring)


def _assignment(M, f, sigma):
    sigma = dict(sigma or {})
    env = {}
    for name in free_vars(f):
        if name not in sigma:
            raise EvaluationError(f"unassigned free variable {name!r}")
    for name, val in sigma.items():
        env[name] = M.code(val) if not isinstance(val, (int, np.integer)) else int(val)
    return env


def eval_reference(ring, f, sigma=None, gate=REFERENCE_GATE):
    """Naive satisfaction; refuses inputs with |R|^depth above ``gate``."""
    M = _model(ring)
    env = _assignment(M, f, sigma)
    depth = quantifier_depth(f)
    if float(M.n) ** depth > gate:
        raise EvaluationBudgetError(f"|R|^depth = {M.n}^{depth} exceeds the reference gate {gate:g}")
    return bool(_ref(M, f, env))


# ---------------------------------------------------------------------------
# fast evaluator


def _linear_form(t, ys):
    """Decompose a term as const + sum_y coef_y * y; None if not linear in ys.

    Parts are lists of (sign, term-or-None) where None stands for 1.
    """
    if isinstance(t, Var) and t.name in ys:
        return [], {t.name: [(1, None)]}
    if not (term_vars(t) & ys):
        return [(1, t)], {}
    if isinstance(t, Add):
        a = _linear_form(t.left, ys)
        b = _linear_form(t.right, ys)
        if a is None or b is None:
            return None
        coefs = {k: list(v) for k, v in a[1].items()}
        for k, v in b[1].items():
            coefs.setdefault(k, []).extend(v)
        return a[0] + b[0], coefs
    if isinstance(t, Neg):
        a = _linear_form(t.arg, ys)
        if a is None:
            return None
        return [(-s, x) for s, x in a[0]], {k: [(-s, x) for s, x in v] for k, v in a[1].items()}
    if isinstance(t, Mul):
        lv, rv = term_vars(t.left) & ys, term_vars(t.right) & ys
        if lv and rv:
            return None
        scal, lin = (t.left, t.right) if not lv else (t.right, t.left)
        a = _linear_form(lin, ys)
        if a is None:
            return None

        def sc(parts):
            return [(s, scal if x is None else Mul(scal, x)) for s, x in parts]

        return sc(a[0]), {k: sc(v) for k, v in a[1].items()}
    return None


def _take(env, idx):
    return {k: (v[idx] if np.ndim(v) else v) for k, v in env.items()}


def _rows(x, K):
    return np.broadcast_to(np.asarray(x), (K,))


class _Fast:
    """Row-wise evaluator: ``env`` maps variables to code arrays of length K
    (one row per assignment of the enclosing variables) and every formula
    evaluates to a boolean array of length K."""

    def __init__(self, M, budget, use_tags=True):
        self.M = M
        self.budget = max(int(budget), M.n)
        self.use_tags = use_tags

    # terms ----------------------------------------------------------------
    def term(self, t, env):
        M = self.M
        if isinstance(t, Zero):
            return np.int64(M.zero)
        if isinstance(t, One):
            return np.int64(M.one)
        if isinstance(t, Var):
            if t.name not in env:
                raise EvaluationError(f"unassigned free variable {t.name!r}")
            return env[t.name]
        if isinstance(t, Param):
            return np.int64(M.code(t.value))
        if isinstance(t, Add):
            return M.add(self.term(t.left, env), self.term(t.right, env))
        if isinstance(t, Mul):
            return M.mul(self.term(t.left, env), self.term(t.right, env))
        if isinstance(t, Neg):
            return M.neg(self.term(t.arg, env))
        raise TypeError(t)

    def parts(self, parts, env):
        M = self.M
        acc = np.int64(M.zero)
        for s, x in parts:
            v = np.int64(M.one) if x is None else self.term(x, env)
            acc = M.add(acc, v if s > 0 else M.neg(v))
        return acc

    # formulas ---------------------------------------------------------------
    def formula(self, f, env, K):
        return _rows(self._formula(f, env, K), K)

    def _formula(self, f, env, K):
        if self.use_tags and getattr(f, "tag", None):
            r = self.tagged(f, env, K)
            if r is not None:
                return r
        if isinstance(f, Eq):
            return self.term(f.left, env) == self.term(f.right, env)
        if isinstance(f, Not):
            return ~self.formula(f.arg, env, K)
        if isinstance(f, (And, Or)):
            return self.junction([(a, False) for a in f.args], env, K, isinstance(f, And))
        if isinstance(f, Exists):
            return self.quant(f, env, K, True)
        if isinstance(f, Forall):
            return self.quant(f, env, K, False)
        raise TypeError(f)

    def junction(self, items, env, K, conjunctive):
        """And (or Or) of (formula, negated) items, evaluating each item only
        on the rows that are still undecided."""
        items = sorted(items, key=lambda it: not _is_cheap(it[0]))
        acc = np.full(K, conjunctive)
        live = np.arange(K)
        for f, neg in items:
            if live.size == 0:
                break
            sub = _take(env, live) if live.size < K else env
            r = self.formula(f, sub, live.size)
            if neg:
                r = ~r
            if conjunctive:
                acc[live[~r]] = False
                live = live[r]
            else:
                acc[live[r]] = True
                live = live[~r]
        return acc

    def quant(self, f, env, K, existential):
        names = [f.var]
        body = f.body
        cls = Exists if existential else Forall
        while isinstance(body, cls) and not (self.use_tags and body.tag):
            names.append(body.var)
            body = body.body
        lin = self.linear(names, body, env, existential)
        if lin is not None:
            return lin
        inner = body
        for n in reversed(names[1:]):
            inner = cls(n, inner)
        return self.single(names[0], inner, env, K, existential)

    def linear(self, names, body, env, existential):
        target = body
        if not existential:
            if not isinstance(body, Not) or not isinstance(body.arg, Eq):
                return None
            target = body.arg
        elif not isinstance(body, Eq):
            return None
        ys = set(names)
        form = _linear_form(Add(target.left, Neg(target.right)), ys)
        if form is None:
            return None
        const, coefs = form
        M = self.M
        s = M.neg(self.parts(const, env))
        cs = [self.parts(coefs[y], env) for y in names if y in coefs]
        if cs:
            ids = M.ideal_id_array(cs)
            res = M.mask_table()[ids, s]
        else:
            res = np.asarray(s == M.zero)
        return res if existential else ~res

    def single(self, v, body, env, K, existential):
        """exists v. body (or forall v. body, as not exists v. not body)."""
        M = self.M
        n = M.n
        if existential:
            args = body.args if isinstance(body, And) and not (self.use_tags and body.tag) else [body]
            items = [(a, False) for a in args]
        else:
            args = body.args if isinstance(body, Or) and not (self.use_tags and body.tag) else [body]
            items = [(a, True) for a in args]
        indep = [it for it in items if v not in free_vars(it[0])]
        dep = [it for it in items if v in free_vars(it[0])]
        found = self.junction(indep, env, K, True) if indep else np.ones(K, dtype=bool)
        if dep:
            rows = np.flatnonzero(found)
            hit = np.zeros(K, dtype=bool)
            block = max(1, self.budget // n)
            for lo in range(0, rows.size, block):
                chunk = rows[lo:lo + block]
                b = chunk.size
                sub = {k: (np.repeat(x[chunk], n) if np.ndim(x) else x) for k, x in env.items()}
                sub[v] = np.tile(np.arange(n, dtype=np.int64), b)
                ok = self.junction(dep, sub, b * n, True)
                hit[chunk] = ok.reshape(b, n).any(axis=1)
            found = hit
        return found if existential else ~found

    # tagged macros ---------------------------------------------------------------
    def tagged(self, f, env, K):
        tag = f.tag
        kind = tag[0]
        M = self.M
        if kind == "nu":
            _, r, gens = tag
            rv = self.term(r, env)
            if not gens:
                return ~M.unit_mask[rv]
            if not M.is_local:
                return None
            return self._by_ideal(gens, env, lambda amask: (~M.unit_mask) & (not amask[M.one]), rv)
        if kind == "mass":
            if not M.is_local:
                return None
            _, x, gens = tag
            xv = self.term(x, env)
            nonunits = M.nonunits

            def good(amask):
                prods = M.mul(nonunits[:, None], np.arange(M.n)[None, :])
                return (~amask) & np.all(amask[prods], axis=0)

            return self._by_ideal(gens, env, good, xv)
        if kind == "len":
            return np.asarray(self.len_search(tag[1]))
        return None

    def _by_ideal(self, gens, env, fn, idx):
        M = self.M
        if not gens:
            return fn(M.ideal_mask(()))[idx]
        ids = M.ideal_id_array([np.asarray(self.term(g, env)) for g in gens])
        uniq, inv = np.unique(ids, return_inverse=True)
        table = np.stack([fn(M._masks[int(i)]) for i in uniq])
        return table[inv.reshape(ids.shape), idx]

    def len_search(self, l):
        """Is there a chain a_1, ..., a_l with a_1 != 0 and a_{i+1} outside Ann(Ann(a_1..a_i))?"""
        M = self.M
        seen = set()

        def rec(codes, depth):
            if depth == l:
                return True
            if depth == 0:
                allowed = np.arange(M.n) != M.zero
            else:
                I = M.ideal_mask(codes)
                allowed = ~M.ann_mask(M.ann_mask(I))
            children = {}
            for a in np.flatnonzero(allowed):
                J = M.ideal_mask(codes + (int(a),))
                key = J.tobytes()
                if key not in children:
                    children[key] = codes + (int(a),)
            for key, nxt in children.items():
                if (key, depth + 1) in seen:
                    continue
                seen.add((key, depth + 1))
                if rec(nxt, depth + 1):
                    return True
            return False

        return rec((), 0)


def _is_cheap(f):
    if getattr(f, "tag", None):
        return True
    if isinstance(f, Eq):
        return True
    return isinstance(f, Not) and isinstance(f.arg, Eq)


def eval_fast(ring, f, sigma=None, budget=DEFAULT_BUDGET, use_tags=True):
    """Satisfaction with row-wise vectorisation and the accelerators listed above."""
    M = _model(ring)
    env = {k: np.int64(v) for k, v in _assignment(M, f, sigma).items()}
    return bool(_Fast(M, budget, use_tags).formula(f, env, 1)[0])


def truth_table(ring, f, variables=None, budget=DEFAULT_BUDGET, use_tags=True, sigma=None):
    """Boolean array over all assignments of ``variables`` (default: the free
    variables, sorted), one axis per variable in that order."""
    M = _model(ring)
    fixed = dict(sigma or {})
    variables = list(variables) if variables is not None else sorted(free_vars(f) - set(fixed))
    k = len(variables)
    env = {n: np.int64(M.code(v) if not isinstance(v, (int, np.integer)) else v) for n, v in fixed.items()}
    grids = np.indices((M.n,) * k).reshape(k, -1) if k else np.zeros((0, 1), dtype=np.int64)
    for i, name in enumerate(variables):
        env[name] = grids[i].astype(np.int64)
    res = _Fast(M, budget, use_tags).formula(f, env, grids.shape[1])
    return variables, res.reshape((M.n,) * k)
