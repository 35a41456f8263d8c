"""Hot inner loops, each with a numba and a pure-numpy implementation.

The backend is chosen once at import time from ``ARTINIAN_BACKEND``
(``numba`` or ``numpy``).  When unset, numba is used if it imports.
Both paths compute identical results; ``benchmarks/bench_kernels.py``
times them against each other.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised implicitly by the backend switch
    import numba
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

_requested = os.environ.get("ARTINIAN_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ImportError(f"ARTINIAN_BACKEND must be 'numba' or 'numpy', got {_requested!r}")
BACKEND = "numba" if (NUMBA_AVAILABLE and _requested != "numpy") else "numpy"


# ---------------------------------------------------------------------------
# Howell residue of a batch of vectors


def reduce_batch_numpy(V, H, pivcols, pivvals, modulus):
    V = np.array(V, dtype=np.int64, copy=True) % modulus
    for r in range(H.shape[0]):
        c = pivcols[r]
        q = V[:, c] // pivvals[r]
        nz = q != 0
        if nz.any():
            V[nz] = (V[nz] - q[nz, None] * H[r]) % modulus
    return V


def bilinear_batch_numpy(A, B, T, modulus):
    # out[b, k] = sum_ij A[b, i] B[b, j] T[i, j, k]
    out = np.einsum("bi,ijk->bjk", A, T) % modulus
    out = np.einsum("bjk,bj->bk", out, B) % modulus
    return out


def _digits(idx, size, nvars):
    out = np.empty((idx.shape[0], nvars), dtype=np.int64)
    rest = idx.copy()
    for v in range(nvars - 1, -1, -1):
        out[:, v] = rest % size
        rest //= size
    return out


def poly_scan_numpy(add, mul, pows, coeffs, exps, term_ptr, n_eq, size, start, stop,
                    chunk=1 << 16):
    """Return the first assignment index in [start, stop) solving the system, or -1.

    Assignment ``i`` gives variable ``v`` the base-``size`` digit of ``i`` at
    position ``v`` (variable 0 most significant).  Polys ``j < n_eq`` must
    vanish, the rest must not.
    """
    nvars = exps.shape[1]
    npoly = term_ptr.shape[0] - 1
    for lo in range(start, stop, chunk):
        hi = min(stop, lo + chunk)
        idx = np.arange(lo, hi, dtype=np.int64)
        X = _digits(idx, size, nvars) if nvars else np.zeros((hi - lo, 0), np.int64)
        ok = np.ones(hi - lo, dtype=bool)
        for j in range(npoly):
            val = np.zeros(hi - lo, dtype=np.int64)
            for k in range(term_ptr[j], term_ptr[j + 1]):
                t = np.full(hi - lo, coeffs[k], dtype=np.int64)
                for v in range(nvars):
                    e = exps[k, v]
                    if e:
                        t = mul[t, pows[e, X[:, v]]]
                val = add[val, t]
            ok &= (val == 0) if j < n_eq else (val != 0)
        hit = np.flatnonzero(ok)
        if hit.size:
            return int(lo + hit[0])
    return -1


if NUMBA_AVAILABLE:

    @njit(cache=True)
    def _reduce_batch_nb(V, H, pivcols, pivvals, modulus):
        B, N = V.shape
        out = np.empty_like(V)
        for b in range(B):
            for j in range(N):
                out[b, j] = V[b, j] % modulus
            for r in range(H.shape[0]):
                q = out[b, pivcols[r]] // pivvals[r]
                if q != 0:
                    for j in range(N):
                        out[b, j] = (out[b, j] - q * H[r, j]) % modulus
        return out

    @njit(cache=True)
    def _bilinear_batch_nb(A, B, T, modulus):
        nb, n = A.shape
        out = np.zeros((nb, T.shape[2]), dtype=np.int64)
        for b in range(nb):
            for i in range(n):
                a = A[b, i]
                if a == 0:
                    continue
                for j in range(n):
                    c = B[b, j]
                    if c == 0:
                        continue
                    ac = a * c % modulus
                    for k in range(T.shape[2]):
                        if T[i, j, k] != 0:
                            out[b, k] = (out[b, k] + ac * T[i, j, k]) % modulus
        return out

    @njit(cache=True)
    def _poly_scan_nb(add, mul, pows, coeffs, exps, term_ptr, n_eq, size, start, stop):
        nvars = exps.shape[1]
        npoly = term_ptr.shape[0] - 1
        x = np.zeros(nvars, dtype=np.int64)
        for i in range(start, stop):
            rest = i
            for v in range(nvars - 1, -1, -1):
                x[v] = rest % size
                rest //= size
            good = True
            for j in range(npoly):
                val = 0
                for k in range(term_ptr[j], term_ptr[j + 1]):
                    t = coeffs[k]
                    for v in range(nvars):
                        e = exps[k, v]
                        if e != 0:
                            t = mul[t, pows[e, x[v]]]
                    val = add[val, t]
                if j < n_eq:
                    if val != 0:
                        good = False
                        break
                elif val == 0:
                    good = False
                    break
            if good:
                return i
        return -1


def _as_i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def reduce_batch(V, H, pivcols, pivvals, modulus, backend=None):
    backend = backend or BACKEND
    V = _as_i64(np.atleast_2d(V))
    if H.shape[0] == 0:
        return V % modulus
    if backend == "numba":
        return _reduce_batch_nb(V, _as_i64(H), _as_i64(pivcols), _as_i64(pivvals), modulus)
    return reduce_batch_numpy(V, H, pivcols, pivvals, modulus)


def bilinear_batch(A, B, T, modulus, backend=None):
    backend = backend or BACKEND
    A, B, T = _as_i64(np.atleast_2d(A)), _as_i64(np.atleast_2d(B)), _as_i64(T)
    if backend == "numba":
        return _bilinear_batch_nb(A, B, T, modulus)
    return bilinear_batch_numpy(A, B, T, modulus)


def poly_scan(add, mul, pows, coeffs, exps, term_ptr, n_eq, size, start, stop, backend=None):
    backend = backend or BACKEND
    args = (_as_i64(add), _as_i64(mul), _as_i64(pows), _as_i64(coeffs),
            _as_i64(exps),
            _as_i64(term_ptr), int(n_eq), int(size), int(start), int(stop))
    if backend == "numba":
        return int(_poly_scan_nb(*args))
    return poly_scan_numpy(*args)
