"""Time the numba kernels against their numpy fallbacks.

Usage:
    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --repeat 5 --output bench.json
"""

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from artinian import _kernels  # noqa: E402
from artinian.fields import FieldTower  # noqa: E402
from artinian.localring import polynomial_ring_quotient  # noqa: E402
from artinian.transfer.sparse import CodeArith  # noqa: E402


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def reduce_case(rng):
    # Howell-style residues modulo 2^6: row r has its pivot 2^(r % 3) in column r
    n, mod = 24, 64
    H = np.triu(rng.integers(0, mod, size=(n, n)), 1)
    piv = np.arange(n, dtype=np.int64)
    vals = np.array([2 ** (r % 3) for r in range(n)], dtype=np.int64)
    H[piv, piv] = vals
    V = rng.integers(0, mod, size=(20000, n))
    return lambda b: _kernels.reduce_batch(V, H, piv, vals, mod, backend=b)


def bilinear_case(rng):
    n, m = 12, 20000
    T = rng.integers(0, 5, size=(n, n, n))
    A = rng.integers(0, 5, size=(m, n))
    B = rng.integers(0, 5, size=(m, n))
    return lambda b: _kernels.bilinear_batch(A, B, T, 5, backend=b)


def scan_case(rng):
    # x^2 + y^2 + z^2 + 2 = 0, x*y*z != 0 over F_9[T]/(T^2)
    R = polynomial_ring_quotient(FieldTower(3, 2), ["T"], ["T^2"], name="R")
    A = CodeArith(R)
    size = R.size
    codes = np.arange(size, dtype=np.int64)
    pows = np.empty((3, size), dtype=np.int64)
    pows[0] = A.one
    for e in (1, 2):
        pows[e] = A.mul(pows[e - 1], codes)
    tail = int(R.code_of(R.one + R.one))
    coeffs = np.array([A.one, A.one, A.one, tail, A.one], dtype=np.int64)
    exps = np.array([[2, 0, 0], [0, 2, 0], [0, 0, 2], [0, 0, 0], [1, 1, 1]], dtype=np.int64)
    ptr = np.array([0, 4, 5], dtype=np.int64)
    total = size ** 3
    return lambda b: _kernels.poly_scan(A._add, A._mul, pows, coeffs, exps, ptr, 1, size, 0, total, backend=b)


CASES = {"reduce_batch": reduce_case, "bilinear_batch": bilinear_case, "poly_scan": scan_case}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--output")
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    backends = ["numpy"] + (["numba"] if _kernels.NUMBA_AVAILABLE else [])
    rows = []
    print(f"{'kernel':<16}{'numpy s':>12}{'numba s':>12}{'speedup':>10}  agree")
    for name, make in CASES.items():
        fn = make(rng)
        if "numba" in backends:
            fn("numba")  # compile
        times, outs = {}, {}
        for b in backends:
            times[b], outs[b] = _best(lambda: fn(b), args.repeat)
        agree = all(np.array_equal(np.asarray(outs[b]), np.asarray(outs["numpy"])) for b in backends)
        nb = times.get("numba", float("nan"))
        speed = times["numpy"] / nb if nb == nb else float("nan")
        print(f"{name:<16}{times['numpy']:>12.4f}{nb:>12.4f}{speed:>10.1f}  {agree}")
        rows.append({"kernel": name, **{f"{b}_s": times[b] for b in backends}, "agree": agree})
    if args.output:
        Path(args.output).write_text(json.dumps(rows, indent=1))


if __name__ == "__main__":
    main()
