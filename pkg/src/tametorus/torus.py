"""Tame tori from character-lattice data: the component group of the
Néron model for the supported family, and H^1 of a finite field acting
on that component group through Frobenius.

For the built-in family, `norm_torus_spec(e)` is the norm-one torus of a
totally ramified cyclic extension of degree e: its character lattice is
Z[G]/(N) for G cyclic of order e, with G acting as inertia.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FrobeniusDoesNotDescend, TamenessViolation
from .galois import (
    GaloisLatticeModule,
    check_presented_endomorphism,
    coinvariants,
    cyclic_h1,
)
from .lattice import (
    FgAbelianGroup,
    IntegerMatrix,
    cokernel,
    hstack,
    unimodular_inverse,
)

__all__ = [
    "TameTorusSpec",
    "ComponentGroup",
    "norm_torus_spec",
    "cocharacter_action",
    "component_group",
    "h1_frobenius",
]


class TameTorusSpec:
    """A torus described by its character lattice with Galois action.

    Tameness is the standing hypothesis: every wild-inertia generator
    must act as the identity on the lattice, otherwise the component
    group computed here has no meaning and TamenessViolation is raised.
    """

    def __init__(self, characters: GaloisLatticeModule):
        ident = IntegerMatrix.identity(characters.lattice_rank)
        for g in characters.subgroup_generators("wild_inertia"):
            if g != ident:
                raise TamenessViolation("wild inertia acts nontrivially on the character lattice")
        self.characters = characters

    @property
    def rank(self) -> int:
        return self.characters.lattice_rank

    def to_json_dict(self) -> dict:
        return self.characters.to_json_dict()

    @classmethod
    def from_json_dict(cls, d: dict) -> "TameTorusSpec":
        if d.get("torus") == "norm":
            return norm_torus_spec(int(d["e"]))
        return cls(GaloisLatticeModule.from_json_dict(d))


def norm_torus_spec(e: int) -> TameTorusSpec:
    """The norm-one torus of a totally ramified cyclic degree-e extension.

    Character lattice Z[G]/(N) for G = <s> cyclic of order e, presented on
    the images of 1, s, ..., s^(e-2) (rank e-1); s generates the inertia
    action, wild inertia is trivial, and Frobenius acts trivially.
    """
    if e < 1:
        raise ValueError("degree e must be at least 1")
    rank = e - 1
    if rank == 0:
        return TameTorusSpec(
            GaloisLatticeModule(0, (), (), (), frobenius=IntegerMatrix.identity(0))
        )
    # Column i < rank-1 sends basis vector i to vector i+1; the last basis
    # vector maps to minus the sum of all of them (the relation N = 0).
    sigma = IntegerMatrix.from_rows(
        [[(1 if r == i + 1 else 0) - (1 if i == rank - 1 else 0) for i in range(rank)]
         for r in range(rank)],
        cols=rank,
    )
    module = GaloisLatticeModule(
        rank, (sigma,), inertia=(0,), wild_inertia=(),
        frobenius=IntegerMatrix.identity(rank),
    )
    return TameTorusSpec(module)


def cocharacter_action(spec: TameTorusSpec) -> GaloisLatticeModule:
    """The same group acting on the dual (cocharacter) lattice.

    Matrices dualize by inverse-transpose, which keeps g -> g* a
    homomorphism; subgroup markings and Frobenius carry over.
    """
    mod = spec.characters

    def dual(m: IntegerMatrix) -> IntegerMatrix:
        return unimodular_inverse(m).transpose()

    return GaloisLatticeModule(
        mod.lattice_rank,
        tuple(dual(g) for g in mod.generators),
        inertia=mod.inertia_indices,
        wild_inertia=mod.wild_indices,
        frobenius=None if mod.frobenius is None else dual(mod.frobenius),
    )


@dataclass(frozen=True)
class ComponentGroup:
    """Component group of the Néron model, with its Frobenius action.

    `frobenius_action` is a matrix on normal-form coordinates of `group`
    (torsion generators first, then free) and must be an automorphism.
    """

    group: FgAbelianGroup
    frobenius_action: IntegerMatrix

    def __post_init__(self) -> None:
        check_presented_endomorphism(self.group, self.frobenius_action)
        t = len(self.group.invariant_factors)
        k = self.group.num_generators
        free_block = IntegerMatrix.from_rows(
            [list(self.frobenius_action.row(i))[t:] for i in range(t, k)], cols=k - t
        )
        if free_block.det() not in (1, -1):
            raise ValueError("frobenius_action is not invertible on the free part")
        if t:
            torsion_block = IntegerMatrix.from_rows(
                [list(self.frobenius_action.row(i))[:t] for i in range(t)], cols=t
            )
            diag = IntegerMatrix.from_rows(
                [[self.group.invariant_factors[i] if i == j else 0 for j in range(t)]
                 for i in range(t)],
                cols=t,
            )
            if not cokernel(hstack([torsion_block, diag])).is_trivial:
                raise ValueError("frobenius_action is not surjective on the torsion part")

    def to_json_dict(self) -> dict:
        return {
            "group": self.group.to_json_dict(),
            "frobenius_action": self.frobenius_action.to_json_dict(),
        }


def component_group(spec: TameTorusSpec) -> ComponentGroup:
    """Component group of the Néron model: inertia coinvariants of the
    cocharacter lattice, with the Frobenius action pushed to the quotient.

    >>> component_group(norm_torus_spec(2)).group
    FgAbelianGroup(free_rank=0, invariant_factors=(2,))
    """
    dual = cocharacter_action(spec)
    quotient = coinvariants(dual, "inertia")
    try:
        action = quotient.descend(dual.effective_frobenius())
    except ValueError as exc:
        raise FrobeniusDoesNotDescend(str(exc)) from exc
    return ComponentGroup(quotient.group, action)


def h1_frobenius(cg: ComponentGroup) -> FgAbelianGroup:
    """H^1 of a finite field acting on the component group via Frobenius."""
    return cyclic_h1(cg.group, cg.frobenius_action)
