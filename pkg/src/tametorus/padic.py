"""Fixed-precision p-adic integer arithmetic and norm classes.

A PadicContext fixes an odd prime p and a working precision N; values
are exact residues mod p^N with valuation bookkeeping.  `norm_class`
computes the class of an element in K*/N(L*) for the totally ramified
cyclic extension L = K(p^(1/e)) with e | p-1, via reduction and a
discrete logarithm in the residue field.  `norm_class_oracle` answers
the same question by brute force: exhaustively representing norms as
determinants of multiplication matrices.  The two routes are
independent; the oracle is the ground truth the formula is tested
against.

Contexts with p = 2 (or p not prime) are rejected outright: in the wild
case a unit's norm-class is not determined by its reduction, so nothing
here would be meaningful.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import isqrt

from .errors import (
    ContextMismatch,
    DegreeIncompatible,
    NotAUnit,
    PrecisionExhausted,
    SearchSpaceTooLarge,
)

__all__ = [
    "PadicContext",
    "PadicInt",
    "NormClass",
    "unit_part",
    "eth_power_class",
    "norm_class",
    "norm_class_oracle",
]

ORACLE_CANDIDATE_CAP = 10_000_000


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for q in range(3, isqrt(n) + 1, 2):
        if n % q == 0:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def smallest_primitive_root(p: int) -> int:
    """Smallest primitive root mod an odd prime p (the canonical generator)."""
    factors = _prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ValueError(f"{p} has no primitive root; is it prime?")


@dataclass(frozen=True)
class PadicContext:
    """An odd prime p together with a working precision N >= 2."""

    p: int
    precision: int

    def __post_init__(self) -> None:
        if self.p == 2:
            raise ValueError("p = 2 is wildly ramified here and not supported")
        if self.p < 3 or not _is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.precision < 2:
            raise ValueError("precision must be at least 2")

    @cached_property
    def modulus(self) -> int:
        return self.p ** self.precision

    @cached_property
    def primitive_root(self) -> int:
        return smallest_primitive_root(self.p)

    def integer(self, value: int) -> "PadicInt":
        return PadicInt(self, value % self.modulus)


@dataclass(frozen=True)
class PadicInt:
    """A p-adic integer known exactly mod p^N."""

    context: PadicContext
    residue: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "residue", self.residue % self.context.modulus)

    @property
    def is_exhausted(self) -> bool:
        """Zero to working precision: no valuation or unit part exists."""
        return self.residue == 0

    @property
    def known_valuation(self) -> int:
        """min(v_p(residue), N); equal to N exactly when exhausted."""
        if self.residue == 0:
            return self.context.precision
        v = 0
        r = self.residue
        while r % self.context.p == 0:
            r //= self.context.p
            v += 1
        return v

    def _check_context(self, other: "PadicInt") -> None:
        if self.context != other.context:
            raise ContextMismatch(f"{self.context} vs {other.context}")

    def __add__(self, other: "PadicInt") -> "PadicInt":
        self._check_context(other)
        return PadicInt(self.context, self.residue + other.residue)

    def __sub__(self, other: "PadicInt") -> "PadicInt":
        self._check_context(other)
        return PadicInt(self.context, self.residue - other.residue)

    def __mul__(self, other: "PadicInt") -> "PadicInt":
        self._check_context(other)
        return PadicInt(self.context, self.residue * other.residue)

    def __repr__(self) -> str:
        return f"PadicInt({self.residue} mod {self.context.p}^{self.context.precision})"


def unit_part(a: PadicInt) -> tuple[int, PadicInt]:
    """Decompose a = p^v * u with u a unit (known mod p^(N-v)).

    Raises PrecisionExhausted when a is zero to working precision.
    """
    if a.is_exhausted:
        raise PrecisionExhausted("value is 0 mod p^N; no unit decomposition exists")
    v = a.known_valuation
    return v, PadicInt(a.context, a.residue // a.context.p ** v)


@dataclass(frozen=True)
class NormClass:
    """A residue class in Z/e, the value group of K*/N(L*)."""

    e: int
    value: int

    def __post_init__(self) -> None:
        if self.e < 1:
            raise ValueError("e must be positive")
        if not 0 <= self.value < self.e:
            raise ValueError(f"value {self.value} out of range for Z/{self.e}")

    def __add__(self, other: "NormClass") -> "NormClass":
        if self.e != other.e:
            raise ValueError("cannot add classes of different degree")
        return NormClass(self.e, (self.value + other.value) % self.e)

    def to_json_dict(self) -> dict:
        return {"value": self.value, "e": self.e}


def _check_degree(p: int, e: int) -> None:
    if e < 1:
        raise DegreeIncompatible("e must be positive")
    if (p - 1) % e != 0:
        raise DegreeIncompatible(f"e = {e} does not divide p - 1 = {p - 1}")


def eth_power_class(u: PadicInt, e: int) -> NormClass:
    """Class of a unit in k*/(k*)^e, as a discrete log mod e.

    The value is dlog(u mod p) modulo e with respect to the smallest
    primitive root mod p, so it is 0 exactly when the reduction of u is
    an e-th power in the residue field.
    """
    ctx = u.context
    _check_degree(ctx.p, e)
    ubar = u.residue % ctx.p
    if ubar == 0:
        raise NotAUnit("reduction mod p is zero")
    q = (ctx.p - 1) // e
    z = pow(ubar, q, ctx.p)
    w = pow(ctx.primitive_root, q, ctx.p)
    acc = 1
    for r in range(e):
        if acc == z:
            return NormClass(e, r)
        acc = acc * w % ctx.p
    raise AssertionError("unreachable: z lies in the subgroup generated by w")


def norm_class(a: PadicInt, e: int) -> NormClass:
    """Class of a in K*/N(L*) for L = K(p^(1/e)), identified with Z/e.

    With a = p^v * u the class is that of (-1)^(v(e-1)) * u in
    k*/(k*)^e: the uniformizer's norm is (-1)^(e-1) p, so peeling off
    powers of p twists the unit by the corresponding sign.
    """
    _check_degree(a.context.p, e)
    v, u = unit_part(a)
    sign = -1 if (v * (e - 1)) % 2 else 1
    twisted = PadicInt(a.context, sign * u.residue)
    return eth_power_class(twisted, e)


def _mult_matrix_rows(p: int, e: int, coeffs: tuple[int, ...]) -> list[list[int]]:
    # Multiplication by sum(c_i t^i) on the basis 1, t, ..., t^(e-1), t^e = p.
    return [
        [coeffs[r - j] if r >= j else p * coeffs[r - j + e] for j in range(e)]
        for r in range(e)
    ]


def _det_rows(m: list[list[int]]) -> int:
    # Fraction-free determinant on a small mutable row list.
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot is None:
                return 0
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def field_norm(p: int, e: int, coeffs: tuple[int, ...]) -> int:
    """N(b) for b = sum(c_i t^i) in L = K(t), t^e = p: the determinant of
    the multiplication-by-b matrix over the basis 1, t, ..., t^(e-1)."""
    if len(coeffs) != e:
        raise ValueError(f"expected {e} coefficients")
    return _det_rows(_mult_matrix_rows(p, e, coeffs))


@lru_cache(maxsize=None)
def _norm_residue_master(p: int, e: int, search_precision: int, k_build: int) -> frozenset:
    # All residues mod p^k_build of N(t^j b), b over coefficient vectors
    # mod p^search_precision, j in 0..e-1.  N(t) = (-1)^(e-1) p.
    mod = p ** k_build
    shift = ((-1) ** (e - 1)) * p % mod
    out = set()
    for coeffs in itertools.product(range(p ** search_precision), repeat=e):
        n = field_norm(p, e, coeffs) % mod
        out.add(n)
        for _ in range(1, e):
            n = n * shift % mod
            out.add(n)
    return frozenset(out)


@lru_cache(maxsize=None)
def _norm_residue_set(p: int, e: int, search_precision: int, k: int) -> frozenset:
    # Norm residues mod p^k; built from a shared master set at the finest
    # exponent any sound query at this search precision can need.
    k_build = max(k, e * (search_precision - 1) + 1)
    master = _norm_residue_master(p, e, search_precision, k_build)
    if k_build == k:
        return master
    q = p ** k
    return frozenset(x % q for x in master)


def norm_class_oracle(a: PadicInt, e: int, search_precision: int) -> NormClass:
    """Brute-force norm class: the least r such that a * w^(-r) is a
    represented norm, where w lifts the canonical generator of k*.

    Membership is tested by exhausting coefficient vectors mod
    p^search_precision and valuation shifts b -> t^j b, accepting when
    N(b) matches the target mod p^(v(a)+2); two spare digits let tame
    Hensel lifting promote the approximate representation to an exact
    one.  Raises SearchSpaceTooLarge when the candidate count would
    exceed 10^7.
    """
    ctx = a.context
    _check_degree(ctx.p, e)
    if search_precision < 1:
        raise ValueError("search_precision must be positive")
    if ctx.p ** (e * search_precision) > ORACLE_CANDIDATE_CAP:
        raise SearchSpaceTooLarge(
            f"p^(e*search_precision) = {ctx.p}^{e * search_precision} exceeds {ORACLE_CANDIDATE_CAP}"
        )
    v, _ = unit_part(a)
    if v + 2 > ctx.precision:
        raise PrecisionExhausted(
            f"need a mod p^{v + 2} but the context only carries p^{ctx.precision}"
        )
    modulus = ctx.p ** (v + 2)
    residues = _norm_residue_set(ctx.p, e, search_precision, v + 2)
    w_inv = pow(ctx.primitive_root, -1, ctx.modulus)
    target = a.residue % ctx.modulus
    for r in range(e):
        if target % modulus in residues:
            return NormClass(e, r)
        target = target * w_inv % ctx.modulus
    raise ValueError(
        "no class admits a represented norm; increase search_precision"
    )
