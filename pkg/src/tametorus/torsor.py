"""Explicit norm-torsor families over affine space, and empirical checks
that torsor evaluation factors through reduction to the special fibre.

The model is affine n-space over the valuation ring, so every point with
coordinates in Z_p is a smooth point; the torsor patch is the locus
where the defining function f is a unit.  `verify_factorization` samples
points and compares the generic-fibre class of f(P) with the residue
class computed purely on the special fibre; `constancy_check` exhausts
the special fibre instead.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence, Union

from .errors import (
    ContextMismatch,
    DegreeIncompatible,
    EnumerationTooLarge,
    SpecialFibreVanishing,
)
from .padic import NormClass, PadicContext, PadicInt, eth_power_class, norm_class

__all__ = [
    "MultivariatePolynomial",
    "NormTorsorFamily",
    "FailureRecord",
    "FactorizationReport",
    "ConstancyReport",
    "evaluate",
    "reduce_point",
    "special_eval",
    "verify_factorization",
    "constancy_check",
    "sample_points",
]

CONSTANCY_ENUMERATION_CAP = 10 ** 6


@dataclass(frozen=True)
class MultivariatePolynomial:
    """Integer polynomial in n_vars variables, terms in graded-lex order.

    Terms are (coefficient, exponent-vector) pairs; construction combines
    like terms, drops zeros and sorts canonically, so equal polynomials
    compare equal.
    """

    n_vars: int
    terms: tuple[tuple[int, tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        combined: dict[tuple[int, ...], int] = {}
        for coeff, exps in self.terms:
            exps = tuple(int(x) for x in exps)
            if len(exps) != self.n_vars:
                raise ValueError("exponent vector length does not match n_vars")
            if any(x < 0 for x in exps):
                raise ValueError("exponents must be nonnegative")
            combined[exps] = combined.get(exps, 0) + int(coeff)
        canon = tuple(
            (c, e)
            for e, c in sorted(combined.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)
            if c != 0
        )
        object.__setattr__(self, "terms", canon)

    @classmethod
    def constant(cls, n_vars: int, c: int) -> "MultivariatePolynomial":
        return cls(n_vars, ((c, (0,) * n_vars),))

    @classmethod
    def variable(cls, n_vars: int, index: int) -> "MultivariatePolynomial":
        exps = tuple(1 if i == index else 0 for i in range(n_vars))
        return cls(n_vars, ((1, exps),))

    def degree(self) -> int:
        return max((sum(e) for _, e in self.terms), default=0)

    def evaluate_mod(self, point: Sequence[int], modulus: int) -> int:
        """Exact value of the polynomial at integer coordinates, mod `modulus`."""
        if len(point) != self.n_vars:
            raise ValueError("point length does not match n_vars")
        total = 0
        for coeff, exps in self.terms:
            term = coeff % modulus
            for x, k in zip(point, exps):
                if k:
                    term = term * pow(x, k, modulus) % modulus
            total = (total + term) % modulus
        return total

    def _binop(self, other: "MultivariatePolynomial", mul: bool) -> "MultivariatePolynomial":
        if self.n_vars != other.n_vars:
            raise ValueError("variable count mismatch")
        if not mul:
            return MultivariatePolynomial(self.n_vars, self.terms + other.terms)
        terms = []
        for c1, e1 in self.terms:
            for c2, e2 in other.terms:
                terms.append((c1 * c2, tuple(a + b for a, b in zip(e1, e2))))
        return MultivariatePolynomial(self.n_vars, tuple(terms))

    def __add__(self, other: "MultivariatePolynomial") -> "MultivariatePolynomial":
        return self._binop(other, mul=False)

    def __mul__(self, other: "MultivariatePolynomial") -> "MultivariatePolynomial":
        return self._binop(other, mul=True)

    def __pow__(self, n: int) -> "MultivariatePolynomial":
        if n < 0:
            raise ValueError("negative power")
        out = MultivariatePolynomial.constant(self.n_vars, 1)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c: int) -> "MultivariatePolynomial":
        return MultivariatePolynomial(self.n_vars, tuple((c * a, e) for a, e in self.terms))

    def to_json_list(self) -> list[dict]:
        return [{"c": c, "exp": list(e)} for c, e in self.terms]

    @classmethod
    def from_json_list(cls, n_vars: int, data: Sequence[dict]) -> "MultivariatePolynomial":
        return cls(n_vars, tuple((int(t["c"]), tuple(int(x) for x in t["exp"])) for t in data))


@dataclass(frozen=True)
class NormTorsorFamily:
    """A norm-form torsor over affine space: degree e, defining function f.

    Over the locus where f is a unit this is the patch
    {norm-form(x_1..x_e) = f} familiar from x^2 - p y^2 = f; its class at
    a point is the norm class of f there.
    """

    context: PadicContext
    e: int
    f: MultivariatePolynomial

    def __post_init__(self) -> None:
        if self.e < 1:
            raise DegreeIncompatible("e must be positive")
        if (self.context.p - 1) % self.e != 0:
            raise DegreeIncompatible(
                f"e = {self.e} does not divide p - 1 = {self.context.p - 1}"
            )

    @property
    def n_vars(self) -> int:
        return self.f.n_vars

    def to_json_dict(self) -> dict:
        return {
            "p": self.context.p,
            "precision": self.context.precision,
            "e": self.e,
            "n_vars": self.n_vars,
            "f": self.f.to_json_list(),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "NormTorsorFamily":
        n_vars = int(d["n_vars"])
        return cls(
            context=PadicContext(int(d["p"]), int(d["precision"])),
            e=int(d["e"]),
            f=MultivariatePolynomial.from_json_list(n_vars, d["f"]),
        )


Point = Sequence[Union[PadicInt, int]]


def _point_residues(family: NormTorsorFamily, point: Point) -> tuple[int, ...]:
    out = []
    for x in point:
        if isinstance(x, PadicInt):
            if x.context != family.context:
                raise ContextMismatch("point coordinate from a different context")
            out.append(x.residue)
        else:
            out.append(int(x) % family.context.modulus)
    if len(out) != family.n_vars:
        raise ValueError(f"expected {family.n_vars} coordinates")
    return tuple(out)


def evaluate(family: NormTorsorFamily, point: Point) -> NormClass:
    """Generic-fibre route: the norm class of f(P).

    Raises PrecisionExhausted when f(P) is 0 mod p^N, signalling that the
    point leaves the torsor patch.
    """
    residues = _point_residues(family, point)
    value = PadicInt(family.context, family.f.evaluate_mod(residues, family.context.modulus))
    return norm_class(value, family.e)


def reduce_point(family: NormTorsorFamily, point: Point) -> tuple[int, ...]:
    """Reduction of a point to the special fibre: coordinates mod p."""
    return tuple(x % family.context.p for x in _point_residues(family, point))


def special_eval(family: NormTorsorFamily, point_bar: Sequence[int]) -> NormClass:
    """Special-fibre route: the e-th power residue class of fbar(Pbar).

    Raises SpecialFibreVanishing when fbar(Pbar) = 0: the point reduces
    outside the unit locus and the factorization makes no claim there.
    """
    p = family.context.p
    if len(point_bar) != family.n_vars:
        raise ValueError(f"expected {family.n_vars} coordinates")
    value = family.f.evaluate_mod([x % p for x in point_bar], p)
    if value == 0:
        raise SpecialFibreVanishing("f vanishes at this point of the special fibre")
    return eth_power_class(family.context.integer(value), family.e)


@dataclass(frozen=True)
class FailureRecord:
    point: tuple[int, ...]
    class_generic: int
    class_special: int

    def to_json_dict(self) -> dict:
        return {
            "point": list(self.point),
            "class_generic": self.class_generic,
            "class_special": self.class_special,
        }


@dataclass(frozen=True)
class FactorizationReport:
    """Evidence record for one sampling run of the commutativity check."""

    samples_tested: int
    skipped_nonunit: int
    failures: tuple[FailureRecord, ...]
    seed: int

    @property
    def commuted(self) -> bool:
        return not self.failures

    def to_json_dict(self) -> dict:
        return {
            "samples_tested": self.samples_tested,
            "skipped_nonunit": self.skipped_nonunit,
            "failures": [f.to_json_dict() for f in self.failures],
            "seed": self.seed,
        }


def sample_points(family: NormTorsorFamily, count: int, rng: random.Random) -> list[tuple[int, ...]]:
    """`count` points sampled uniformly over residues mod p^N.

    Drawn as one contiguous block from `rng` so that a report's primary
    sample can be regenerated independently from its seed.
    """
    mod = family.context.modulus
    n = family.n_vars
    return [tuple(rng.randrange(mod) for _ in range(n)) for _ in range(count)]


def verify_factorization(family: NormTorsorFamily, sample_count: int, seed: int) -> FactorizationReport:
    """Sample points and check both routes around the square agree.

    For each sampled point whose reduction keeps f a unit, the norm class
    of f(P) must equal the residue class computed on the special fibre;
    a congruent partner point Q = P + p*(random) is checked against the
    same special-fibre class, which is the operational content of the
    factorization (the class depends only on P mod p).  Disagreements
    are recorded, not raised.  Deterministic for a given seed.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    rng = random.Random(seed)
    primaries = sample_points(family, sample_count, rng)
    p = family.context.p
    mod = family.context.modulus
    step = mod // p

    tested = 0
    skipped = 0
    failures: list[FailureRecord] = []
    for point in primaries:
        point_bar = tuple(x % p for x in point)
        if family.f.evaluate_mod(point_bar, p) == 0:
            skipped += 1
            continue
        tested += 1
        special = special_eval(family, point_bar).value
        generic = evaluate(family, point).value
        if generic != special:
            failures.append(FailureRecord(point, generic, special))
        partner = tuple((x + p * rng.randrange(step)) % mod for x in point)
        partner_class = evaluate(family, partner).value
        if partner_class != special:
            failures.append(FailureRecord(partner, partner_class, special))
    return FactorizationReport(tested, skipped, tuple(failures), seed)


@dataclass(frozen=True)
class ConstancyReport:
    """Classes of every unit-locus point of the special fibre."""

    constant: bool
    classes: dict[tuple[int, ...], int] = field(hash=False)

    def to_json_dict(self) -> dict:
        return {
            "constant": self.constant,
            "classes": {",".join(str(x) for x in k): v for k, v in sorted(self.classes.items())},
        }


def constancy_check(family: NormTorsorFamily) -> ConstancyReport:
    """Exhaust the special fibre's unit locus and report whether a single
    class occurs.  Raises EnumerationTooLarge when p^n_vars > 10^6."""
    p = family.context.p
    if p ** family.n_vars > CONSTANCY_ENUMERATION_CAP:
        raise EnumerationTooLarge(
            f"p^n_vars = {p}^{family.n_vars} exceeds {CONSTANCY_ENUMERATION_CAP}"
        )
    classes: dict[tuple[int, ...], int] = {}
    for point_bar in itertools.product(range(p), repeat=family.n_vars):
        if family.f.evaluate_mod(point_bar, p) == 0:
            continue
        classes[point_bar] = special_eval(family, point_bar).value
    return ConstancyReport(constant=len(set(classes.values())) <= 1, classes=classes)
