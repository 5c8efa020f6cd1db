"""Finite matrix groups acting on integer lattices, with a marked
inertia / wild-inertia filtration.

Provides invariants and coinvariants of the action, the largest free
quotient on which wild inertia acts trivially, and first cohomology of a
procyclic action on a finitely generated abelian group.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .errors import ClosureCapExceeded, InfiniteOrder, NoStabilization, NotUnimodular
from .lattice import (
    FgAbelianGroup,
    IntegerMatrix,
    LatticeQuotient,
    cokernel,
    hstack,
    image_basis,
    kernel_basis,
    lattices_equal,
    saturate,
    subquotient,
    unimodular_inverse,
    vstack,
)

__all__ = [
    "MatrixGroup",
    "GaloisLatticeModule",
    "close_group",
    "coinvariants",
    "invariants",
    "largest_trivial_free_quotient",
    "cyclic_h1",
    "SUBGROUP_SELECTORS",
]

DEFAULT_CLOSURE_CAP = 10_000
DEFAULT_ORDER_CAP = 10_000

SUBGROUP_SELECTORS = ("full", "inertia", "wild_inertia")


class MatrixGroup:
    """A finite group of unimodular integer matrices, given by generators.

    The full element list is computed once at construction (breadth-first
    closure under multiplication) and cached; membership tests and
    iteration read the cache, so concurrent reads are safe.
    """

    def __init__(self, dimension: int, generators: Sequence[IntegerMatrix],
                 elements: Sequence[IntegerMatrix]):
        self.dimension = dimension
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self._element_keys = frozenset(m.entries for m in elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, m: IntegerMatrix) -> bool:
        return m.rows == m.cols == self.dimension and m.entries in self._element_keys

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"MatrixGroup(dimension={self.dimension}, order={self.order})"


def close_group(generators: Sequence[IntegerMatrix], *, dimension: Optional[int] = None,
                cap: int = DEFAULT_CLOSURE_CAP) -> MatrixGroup:
    """Multiplicative closure of a set of unimodular matrices.

    The closure of a finite set of invertible matrices, if finite, is a
    group (powers of each element cycle back to the identity).  Elements
    are returned in a deterministic canonical order.

    Raises NotUnimodular for a generator with determinant other than
    +/-1, and ClosureCapExceeded when the closure grows past `cap`.
    """
    gens = tuple(generators)
    if dimension is None:
        if not gens:
            raise ValueError("dimension is required for an empty generating set")
        dimension = gens[0].rows
    for g in gens:
        if g.rows != dimension or g.cols != dimension:
            raise ValueError("generators must be square matrices of the stated dimension")
        if g.det() not in (1, -1):
            raise NotUnimodular(f"generator determinant {g.det()} is not a unit")

    ident = IntegerMatrix.identity(dimension)
    seen = {ident.entries: ident}
    frontier = [ident]
    while frontier:
        new_frontier = []
        for x in frontier:
            for g in gens:
                y = x @ g
                if y.entries not in seen:
                    if len(seen) >= cap:
                        raise ClosureCapExceeded(f"closure exceeded {cap} elements")
                    seen[y.entries] = y
                    new_frontier.append(y)
        frontier = new_frontier
    elements = tuple(sorted(seen.values(), key=lambda m: m.entries))
    return MatrixGroup(dimension, gens, elements)


class GaloisLatticeModule:
    """An integer lattice with a finite matrix action and marked subgroups.

    `generators` generate the full acting group; `inertia` and
    `wild_inertia` are index subsets of the generator list marking the
    inertia and wild-inertia subgroups.  An optional Frobenius matrix
    must be unimodular and normalize the inertia action.
    """

    def __init__(self, lattice_rank: int, generators: Sequence[IntegerMatrix],
                 inertia: Sequence[int] = (), wild_inertia: Sequence[int] = (),
                 frobenius: Optional[IntegerMatrix] = None, *,
                 closure_cap: int = DEFAULT_CLOSURE_CAP):
        self.lattice_rank = lattice_rank
        self.generators = tuple(generators)
        self.inertia_indices = tuple(inertia)
        self.wild_indices = tuple(wild_inertia)
        self.frobenius = frobenius

        for g in self.generators:
            if g.rows != lattice_rank or g.cols != lattice_rank:
                raise ValueError("generator shape does not match lattice_rank")
        for idx in self.inertia_indices + self.wild_indices:
            if not 0 <= idx < len(self.generators):
                raise ValueError(f"generator index {idx} out of range")

        self.full_group = close_group(self.generators, dimension=lattice_rank, cap=closure_cap)
        self.inertia_group = close_group(
            self.subgroup_generators("inertia"), dimension=lattice_rank, cap=closure_cap
        )
        self.wild_group = close_group(
            self.subgroup_generators("wild_inertia"), dimension=lattice_rank, cap=closure_cap
        )
        for g in self.wild_group.generators:
            if g not in self.inertia_group:
                raise ValueError("wild inertia is not contained in inertia")

        if frobenius is not None:
            if frobenius.rows != lattice_rank or frobenius.cols != lattice_rank:
                raise ValueError("frobenius shape does not match lattice_rank")
            if frobenius.det() not in (1, -1):
                raise NotUnimodular("frobenius must be unimodular")
            f_inv = unimodular_inverse(frobenius)
            for g in self.inertia_group.generators:
                if (frobenius @ g @ f_inv) not in self.inertia_group:
                    raise ValueError("frobenius does not normalize the inertia action")

    def subgroup_generators(self, subgroup: str) -> tuple[IntegerMatrix, ...]:
        if subgroup == "full":
            return self.generators
        if subgroup == "inertia":
            return tuple(self.generators[i] for i in self.inertia_indices)
        if subgroup == "wild_inertia":
            return tuple(self.generators[i] for i in self.wild_indices)
        raise ValueError(f"unknown subgroup selector {subgroup!r}; use one of {SUBGROUP_SELECTORS}")

    def effective_frobenius(self) -> IntegerMatrix:
        """The Frobenius matrix, defaulting to the identity when absent."""
        if self.frobenius is None:
            return IntegerMatrix.identity(self.lattice_rank)
        return self.frobenius

    def to_json_dict(self) -> dict:
        return {
            "lattice_rank": self.lattice_rank,
            "generators": [g.to_json_dict() for g in self.generators],
            "inertia": list(self.inertia_indices),
            "wild_inertia": list(self.wild_indices),
            "frobenius": None if self.frobenius is None else self.frobenius.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "GaloisLatticeModule":
        frob = d.get("frobenius")
        return cls(
            lattice_rank=int(d["lattice_rank"]),
            generators=[IntegerMatrix.from_json_dict(g) for g in d["generators"]],
            inertia=[int(i) for i in d.get("inertia", [])],
            wild_inertia=[int(i) for i in d.get("wild_inertia", [])],
            frobenius=None if frob is None else IntegerMatrix.from_json_dict(frob),
        )


def _action_relations(module: GaloisLatticeModule, subgroup: str) -> IntegerMatrix:
    """Columns spanning <(g - 1)m> over the marked subgroup's generators.

    Generators suffice: (gh - 1) = (g - 1)h + (h - 1), so the sublattice
    generated over a generating set equals the one over the whole group.
    """
    n = module.lattice_rank
    ident = IntegerMatrix.identity(n)
    return hstack([g - ident for g in module.subgroup_generators(subgroup)], rows=n)


def coinvariants(module: GaloisLatticeModule, subgroup: str = "full") -> LatticeQuotient:
    """The coinvariant quotient M / <(g - 1)m> under the marked subgroup.

    Returns a LatticeQuotient carrying the group in normal form, the
    projection matrix onto normal-form coordinates, and `descend` for
    pushing compatible endomorphisms (e.g. Frobenius) to the quotient.
    """
    return LatticeQuotient(_action_relations(module, subgroup))


def invariants(module: GaloisLatticeModule, subgroup: str = "full") -> IntegerMatrix:
    """Basis (as columns) of the saturated fixed sublattice {m : g m = m}."""
    n = module.lattice_rank
    ident = IntegerMatrix.identity(n)
    stacked = vstack([g - ident for g in module.subgroup_generators(subgroup)], cols=n)
    return kernel_basis(stacked)


def largest_trivial_free_quotient(module: GaloisLatticeModule) -> LatticeQuotient:
    """The largest free quotient of the lattice on which wild inertia acts trivially.

    Computed as the quotient by the saturation of the wild relation
    lattice: coinvariants first, then torsion removed.  The result is
    free, the projection is surjective, every wild generator fixes the
    quotient pointwise, and any lattice map to a free module with trivial
    wild action factors through the projection.
    """
    rel = _action_relations(module, "wild_inertia")
    return LatticeQuotient(saturate(rel))


def _torsion_count(group: FgAbelianGroup) -> int:
    return len(group.invariant_factors)


def check_presented_endomorphism(group: FgAbelianGroup, matrix: IntegerMatrix) -> None:
    """Validate that `matrix` defines an endomorphism of the presented group.

    Coordinates are normal-form coordinates: torsion generators first
    (orders d_1 | ... | d_t), then free generators.  The matrix must send
    each relation d_i e_i into the relation lattice.
    """
    k = group.num_generators
    if matrix.rows != k or matrix.cols != k:
        raise ValueError(f"matrix must be {k}x{k} for this presentation")
    t = _torsion_count(group)
    d = group.invariant_factors
    for i in range(t):
        for f in range(t, k):
            if matrix[f, i] != 0:
                raise ValueError("matrix maps a torsion generator into the free part")
        for j in range(t):
            if (d[i] * matrix[j, i]) % d[j] != 0:
                raise ValueError("matrix does not preserve the torsion relations")


def _reduce_endo(group: FgAbelianGroup, matrix: IntegerMatrix) -> IntegerMatrix:
    """Canonical representative of an endomorphism (torsion rows mod d_j)."""
    t = _torsion_count(group)
    rows = matrix.to_rows()
    for j in range(t):
        dj = group.invariant_factors[j]
        rows[j] = [x % dj for x in rows[j]]
    return IntegerMatrix.from_rows(rows, cols=matrix.cols)


def endomorphism_order(group: FgAbelianGroup, matrix: IntegerMatrix, *,
                       cap: int = DEFAULT_ORDER_CAP) -> int:
    """Multiplicative order of `matrix` as an endomorphism of the group.

    Raises InfiniteOrder when no power within `cap` acts as the identity
    (in particular when the matrix is not invertible on the group).
    """
    check_presented_endomorphism(group, matrix)
    k = group.num_generators
    ident = _reduce_endo(group, IntegerMatrix.identity(k))
    acc = _reduce_endo(group, matrix)
    for m in range(1, cap + 1):
        if acc == ident:
            return m
        acc = _reduce_endo(group, acc @ matrix)
    raise InfiniteOrder(f"no power up to {cap} acts as the identity")


def _presentation_relations(group: FgAbelianGroup) -> IntegerMatrix:
    """Relation columns d_i e_i of the normal-form presentation in Z^k."""
    k = group.num_generators
    t = _torsion_count(group)
    cols = []
    for i in range(t):
        c = [0] * k
        c[i] = group.invariant_factors[i]
        cols.append(c)
    return IntegerMatrix.from_cols(cols, rows=k)


def _preimage_lattice(matrix: IntegerMatrix, relations: IntegerMatrix) -> IntegerMatrix:
    """Basis of {x in Z^k : matrix @ x lies in the span of relations}."""
    k = matrix.cols
    combined = hstack([matrix, relations], rows=matrix.rows)
    kern = kernel_basis(combined)
    top = IntegerMatrix.from_rows(kern.to_rows()[:k], cols=kern.cols)
    return image_basis(top)


def cyclic_h1(group: FgAbelianGroup, frobenius: IntegerMatrix, *,
              order_cap: int = DEFAULT_ORDER_CAP) -> FgAbelianGroup:
    """First cohomology of a procyclic action on a presented abelian group.

    The generator acts through `frobenius` on normal-form coordinates
    (torsion generators first, then free ones).  For a finite group this
    is the coinvariant quotient A/(F - 1)A.  In general it is
    ker(N)/im(F - 1), where N is the trace Sum_{i<n} F^i taken at level
    n0 = (order of F) * (exponent of the torsion subgroup); the kernel is
    recomputed at level 2*n0 and must agree, certifying that the tower of
    cyclic levels has stabilized.

    >>> cyclic_h1(FgAbelianGroup.cyclic(2), IntegerMatrix.identity(1))
    FgAbelianGroup(free_rank=0, invariant_factors=(2,))
    """
    k = group.num_generators
    if k == 0:
        if frobenius.rows or frobenius.cols:
            raise ValueError("matrix must be 0x0 for the trivial group")
        return FgAbelianGroup.trivial()

    m = endomorphism_order(group, frobenius, cap=order_cap)
    ident = IntegerMatrix.identity(k)
    relations = _presentation_relations(group)

    if group.is_finite:
        return cokernel(hstack([relations, frobenius - ident], rows=k))

    # Trace over one full period of the action.
    trace = _reduce_endo(group, ident)
    power = _reduce_endo(group, frobenius)
    for _ in range(m - 1):
        trace = _reduce_endo(group, trace + power)
        power = _reduce_endo(group, power @ frobenius)

    s = group.exponent()
    level_one = _reduce_endo(group, trace.scale(s))
    level_two = _reduce_endo(group, trace.scale(2 * s))
    kernel_one = _preimage_lattice(level_one, relations)
    kernel_two = _preimage_lattice(level_two, relations)
    if not lattices_equal(kernel_one, kernel_two):
        raise NoStabilization("cocycle kernels differ between level n0 and 2*n0")

    coboundaries = hstack([relations, frobenius - ident], rows=k)
    return subquotient(kernel_one, coboundaries)
