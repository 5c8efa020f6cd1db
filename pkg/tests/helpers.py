"""Shared test utilities: independent oracles and random generators.

The invariant-factor oracle here deliberately avoids the library's
reduction code: it computes gcds of k x k minors with a cofactor-expansion
determinant, so it can certify the Smith form independently.
"""

from __future__ import annotations

import itertools
import math
import random

from tametorus.galois import GaloisLatticeModule
from tametorus.lattice import IntegerMatrix, unimodular_inverse


def det_cofactor(rows: list[list[int]]) -> int:
    """Determinant by cofactor expansion (test oracle; no shared code path)."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j, head in enumerate(rows[0]):
        if head == 0:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        sign = 1 if j % 2 == 0 else -1
        total += sign * head * det_cofactor(minor)
    return total


def invariant_factors_by_minors(m: IntegerMatrix) -> tuple[int, ...]:
    """Nonzero invariant factors d_1 | d_2 | ... via gcds of k x k minors."""
    rows = m.to_rows()
    out = []
    prev_gcd = 1
    for k in range(1, min(m.rows, m.cols) + 1):
        g = 0
        for ridx in itertools.combinations(range(m.rows), k):
            for cidx in itertools.combinations(range(m.cols), k):
                sub = [[rows[i][j] for j in cidx] for i in ridx]
                g = math.gcd(g, det_cofactor(sub))
        if g == 0:
            break
        out.append(g // prev_gcd)
        prev_gcd = g
    return tuple(out)


def random_matrix(rng: random.Random, max_dim: int = 6, lo: int = -20, hi: int = 20) -> IntegerMatrix:
    rows = rng.randrange(0, max_dim + 1)
    cols = rng.randrange(0, max_dim + 1)
    return IntegerMatrix.from_rows(
        [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)], cols=cols
    )


def random_unimodular(rng: random.Random, n: int, steps: int = 8) -> IntegerMatrix:
    """Product of random elementary row operations applied to the identity."""
    if n == 0:
        return IntegerMatrix.identity(0)
    rows = IntegerMatrix.identity(n).to_rows()
    for _ in range(steps):
        kind = rng.randrange(3)
        i = rng.randrange(n)
        j = rng.randrange(n)
        if kind == 0 and i != j:
            c = rng.randint(-3, 3)
            rows[i] = [a + c * b for a, b in zip(rows[i], rows[j])]
        elif kind == 1:
            rows[i], rows[j] = rows[j], rows[i]
        else:
            rows[i] = [-a for a in rows[i]]
    return IntegerMatrix.from_rows(rows, cols=n)


def random_signed_permutation(rng: random.Random, n: int) -> IntegerMatrix:
    perm = list(range(n))
    rng.shuffle(perm)
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][perm[i]] = rng.choice((1, -1))
    return IntegerMatrix.from_rows(rows, cols=n)


def random_finite_action_module(rng: random.Random, rank: int) -> GaloisLatticeModule:
    """A lattice with a finite action: signed permutations conjugated by a
    common unimodular change of basis, with random inertia/wild marks."""
    q = random_unimodular(rng, rank, steps=5)
    q_inv = unimodular_inverse(q)
    n_gens = rng.randrange(1, 3)
    gens = tuple(q @ random_signed_permutation(rng, rank) @ q_inv for _ in range(n_gens))
    indices = list(range(n_gens))
    inertia = tuple(sorted(rng.sample(indices, rng.randrange(0, n_gens + 1))))
    wild = tuple(sorted(rng.sample(inertia, rng.randrange(0, len(inertia) + 1)))) if inertia else ()
    return GaloisLatticeModule(rank, gens, inertia=inertia, wild_inertia=wild)
