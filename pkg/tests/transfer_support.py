"""Generated polynomials, systems and extension pairs for the transfer tests."""

import itertools
from functools import lru_cache

import numpy as np
from conftest import ring, z4

from artinian.fields import FieldTower
from artinian.localring import base_change
from artinian.transfer import PolySystem, grow, inclusion, solve_bruteforce


def random_poly(R, rng, n, max_deg=3, terms=3):
    """Dense polynomial {exps: RingElement} with nonzero coefficients."""
    monos = [e for e in itertools.product(range(max_deg + 1), repeat=n) if sum(e) <= max_deg]
    out = {}
    for k in rng.choice(len(monos), size=min(terms, len(monos)), replace=False):
        c = R.from_code(int(rng.integers(1, R.size)))
        out[monos[k]] = c
    return out


def random_system(R, rng, n, n_eq=1, n_ineq=0, max_deg=3):
    names = tuple(f"x{i + 1}" for i in range(n))
    eqs = [random_poly(R, rng, n, max_deg) for _ in range(n_eq)]
    ineqs = [random_poly(R, rng, n, max_deg, terms=2) for _ in range(n_ineq)]
    return PolySystem(R, names, eqs, ineqs)


@lru_cache(maxsize=None)
def extension_pairs():
    """(R, S, hom) with S a same-length extension of the Gorenstein ring R."""
    out = []
    out.append((z4(), ring("galois4_2"), inclusion(z4(), ring("galois4_2"))))
    out.append((ring("z4_x"), ring("z4x_w"), inclusion(ring("z4_x"), ring("z4x_w"))))
    S, h = grow(ring("z8"), 2)
    out.append((ring("z8"), S, h))
    out.append((ring("f2_t2"), ring("f4_t2"), inclusion(ring("f2_t2"), ring("f4_t2"))))
    R = ring("f3_t2")
    S = base_change(R, FieldTower(3, 2))
    out.append((R, S, inclusion(R, S)))
    R = ring("f2_t2")
    S = base_change(R, FieldTower(2, 3))
    out.append((R, S, inclusion(R, S)))
    return tuple(out)


def solvable_systems(count, seed=0):
    """Yield (R, S, hom, system, t) with t a solution over S, cycling through the pairs."""
    rng = np.random.default_rng(seed)
    pairs = extension_pairs()
    made = 0
    tries = 0
    while made < count:
        R, S, h = pairs[tries % len(pairs)]
        tries += 1
        n = 1 if S.size > 32 else int(rng.integers(1, 3))
        system = random_system(R, rng, n, n_eq=1, n_ineq=int(rng.integers(0, 2)), max_deg=3)
        t = solve_bruteforce(system.map(h))
        if t is None:
            continue
        made += 1
        yield R, S, h, system, t
