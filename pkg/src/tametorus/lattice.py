"""Exact integer matrix algebra: Smith normal form, kernels, cokernels,
and finitely generated abelian groups in invariant-factor normal form.

Everything here is exact: entries are Python integers (arbitrary
precision) and no floating point is used anywhere.  All values are
immutable, so every function is safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import NotUnimodular, SubgroupViolation

__all__ = [
    "IntegerMatrix",
    "SnfResult",
    "FgAbelianGroup",
    "LatticeQuotient",
    "smith_normal_form",
    "cokernel",
    "kernel_basis",
    "subquotient",
    "image_basis",
    "saturate",
    "solve",
    "unimodular_inverse",
    "hstack",
    "vstack",
]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


@dataclass(frozen=True)
class IntegerMatrix:
    """Dense integer matrix, row-major, immutable.

    >>> IntegerMatrix.from_rows([[1, 2], [3, 4]])[1, 0]
    3
    """

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntegerMatrix":
        nrows = len(rows)
        if nrows == 0:
            return cls(0, 0 if cols is None else cols, ())
        ncols = len(rows[0]) if cols is None else cols
        flat: list[int] = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            flat.extend(int(x) for x in r)
        return cls(nrows, ncols, tuple(flat))

    @classmethod
    def from_cols(cls, cols: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntegerMatrix":
        ncols = len(cols)
        if ncols == 0:
            return cls(0 if rows is None else rows, 0, ())
        nrows = len(cols[0]) if rows is None else rows
        flat = [0] * (nrows * ncols)
        for j, c in enumerate(cols):
            if len(c) != nrows:
                raise ValueError("ragged columns")
            for i, x in enumerate(c):
                flat[i * ncols + j] = int(x)
        return cls(nrows, ncols, tuple(flat))

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        flat = [0] * (n * n)
        for i in range(n):
            flat[i * n + i] = 1
        return cls(n, n, tuple(flat))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntegerMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(key)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        if not 0 <= j < self.cols:
            raise IndexError(j)
        return self.entries[j :: self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntegerMatrix":
        flat = [0] * (self.rows * self.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                flat[j * self.rows + i] = self.entries[i * self.cols + j]
        return IntegerMatrix(self.cols, self.rows, tuple(flat))

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        m, k, n = self.rows, self.cols, other.cols
        flat = [0] * (m * n)
        a, b = self.entries, other.entries
        for i in range(m):
            for t in range(k):
                ait = a[i * k + t]
                if ait:
                    base = t * n
                    for j in range(n):
                        flat[i * n + j] += ait * b[base + j]
        return IntegerMatrix(m, n, tuple(flat))

    def __add__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntegerMatrix(
            self.rows, self.cols, tuple(x + y for x, y in zip(self.entries, other.entries))
        )

    def __sub__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntegerMatrix(
            self.rows, self.cols, tuple(x - y for x, y in zip(self.entries, other.entries))
        )

    def __neg__(self) -> "IntegerMatrix":
        return IntegerMatrix(self.rows, self.cols, tuple(-x for x in self.entries))

    def scale(self, c: int) -> "IntegerMatrix":
        return IntegerMatrix(self.rows, self.cols, tuple(c * x for x in self.entries))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(
            sum(self.entries[i * self.cols + j] * vec[j] for j in range(self.cols))
            for i in range(self.rows)
        )

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            self.entries[i * self.cols + j] == (1 if i == j else 0)
            for i in range(self.rows)
            for j in range(self.cols)
        )

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = self.to_rows()
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

    def to_json_dict(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.to_rows()}

    @classmethod
    def from_json_dict(cls, d: dict) -> "IntegerMatrix":
        m = cls.from_rows(d["entries"], cols=int(d["cols"]))
        if m.rows != int(d["rows"]):
            raise ValueError("row count does not match entries")
        return m

    def __str__(self) -> str:
        return "[" + "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows)) + "]"


def hstack(blocks: Sequence[IntegerMatrix], rows: Optional[int] = None) -> IntegerMatrix:
    """Concatenate matrices left-to-right.  `rows` disambiguates the empty case."""
    if not blocks:
        if rows is None:
            raise ValueError("hstack of no blocks needs an explicit row count")
        return IntegerMatrix(rows, 0, ())
    nrows = blocks[0].rows
    if any(b.rows != nrows for b in blocks):
        raise ValueError("row count mismatch")
    out_rows = []
    for i in range(nrows):
        r: list[int] = []
        for b in blocks:
            r.extend(b.row(i))
        out_rows.append(r)
    return IntegerMatrix.from_rows(out_rows, cols=sum(b.cols for b in blocks))


def vstack(blocks: Sequence[IntegerMatrix], cols: Optional[int] = None) -> IntegerMatrix:
    """Concatenate matrices top-to-bottom.  `cols` disambiguates the empty case."""
    if not blocks:
        if cols is None:
            raise ValueError("vstack of no blocks needs an explicit column count")
        return IntegerMatrix(0, cols, ())
    ncols = blocks[0].cols
    if any(b.cols != ncols for b in blocks):
        raise ValueError("column count mismatch")
    out_rows = []
    for b in blocks:
        out_rows.extend(b.to_rows())
    return IntegerMatrix.from_rows(out_rows, cols=ncols)


@dataclass(frozen=True)
class SnfResult:
    """Unimodular decomposition U @ A @ V = S with S diagonal, d_i | d_{i+1}."""

    U: IntegerMatrix
    S: IntegerMatrix
    V: IntegerMatrix

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.rows, self.S.cols)))


def _row_gcd_op(S, W, t, i):
    # Unimodular 2x2 row transform making S[t][t] = gcd and S[i][t] = 0.
    a, b = S[t][t], S[i][t]
    if b == 0:
        return
    if a != 0 and b % a == 0:
        q = b // a
        for M in (S, W):
            Mt, Mi = M[t], M[i]
            for j in range(len(Mi)):
                Mi[j] -= q * Mt[j]
        return
    g, x, y = _xgcd(a, b)
    ag, bg = a // g, b // g
    for M in (S, W):
        Mt, Mi = M[t], M[i]
        for j in range(len(Mt)):
            u, v = Mt[j], Mi[j]
            Mt[j] = x * u + y * v
            Mi[j] = -bg * u + ag * v


def _col_gcd_op(S, W, t, j):
    # Column analogue of _row_gcd_op, acting on S and the right transform W.
    a, b = S[t][t], S[t][j]
    if b == 0:
        return
    if a != 0 and b % a == 0:
        q = b // a
        for M in (S, W):
            for row in M:
                row[j] -= q * row[t]
        return
    g, x, y = _xgcd(a, b)
    ag, bg = a // g, b // g
    for M in (S, W):
        for row in M:
            u, v = row[t], row[j]
            row[t] = x * u + y * v
            row[j] = -bg * u + ag * v


def smith_normal_form(A: IntegerMatrix) -> SnfResult:
    """Smith normal form with transforms: U @ A @ V = S.

    U and V are unimodular; S is diagonal with nonnegative entries
    satisfying d_i | d_{i+1}, zeros last.  Pivots are chosen with minimal
    absolute value to limit coefficient growth.

    >>> smith_normal_form(IntegerMatrix.from_rows([[2, 4], [6, 8]])).diagonal()
    (2, 4)
    """
    m, n = A.rows, A.cols
    S = A.to_rows()
    U = IntegerMatrix.identity(m).to_rows()
    V = IntegerMatrix.identity(n).to_rows()

    t = 0
    while t < min(m, n):
        # Minimal-absolute-value nonzero pivot in the trailing block.
        pivot = None
        best = None
        for i in range(t, m):
            Si = S[i]
            for j in range(t, n):
                v = Si[j]
                if v != 0 and (best is None or abs(v) < best):
                    best = abs(v)
                    pivot = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        i0, j0 = pivot
        if i0 != t:
            S[t], S[i0] = S[i0], S[t]
            U[t], U[i0] = U[i0], U[t]
        if j0 != t:
            for M in (S, V):
                for row in M:
                    row[t], row[j0] = row[j0], row[t]
        while True:
            for i in range(t + 1, m):
                if S[i][t]:
                    _row_gcd_op(S, U, t, i)
            for j in range(t + 1, n):
                if S[t][j]:
                    _col_gcd_op(S, V, t, j)
            if all(S[i][t] == 0 for i in range(t + 1, m)) and all(
                S[t][j] == 0 for j in range(t + 1, n)
            ):
                break
        t += 1

    r = t  # number of nonzero diagonal entries
    for i in range(r):
        if S[i][i] < 0:
            S[i] = [-x for x in S[i]]
            U[i] = [-x for x in U[i]]

    # Enforce the divisibility chain on the nonzero diagonal.
    changed = True
    while changed:
        changed = False
        for i in range(r - 1):
            a, b = S[i][i], S[i + 1][i + 1]
            if b % a != 0:
                changed = True
                for M in (S, V):
                    for row in M:
                        row[i] += row[i + 1]
                _row_gcd_op(S, U, i, i + 1)
                # S[i][i] = gcd(a,b); clear the fill-in at (i, i+1).
                _col_gcd_op(S, V, i, i + 1)
                if S[i + 1][i + 1] < 0:
                    S[i + 1] = [-x for x in S[i + 1]]
                    U[i + 1] = [-x for x in U[i + 1]]

    return SnfResult(
        U=IntegerMatrix.from_rows(U, cols=m),
        S=IntegerMatrix.from_rows(S, cols=n),
        V=IntegerMatrix.from_rows(V, cols=n),
    )


def unimodular_inverse(M: IntegerMatrix) -> IntegerMatrix:
    """Inverse of a matrix with determinant +/-1; raises NotUnimodular otherwise."""
    if M.rows != M.cols:
        raise NotUnimodular("matrix is not square")
    snf = smith_normal_form(M)
    if not snf.S.is_identity():
        raise NotUnimodular(f"determinant is not a unit: invariant factors {snf.diagonal()}")
    return snf.V @ snf.U


@dataclass(frozen=True)
class FgAbelianGroup:
    """Finitely generated abelian group Z^free_rank (+) Z/d_1 (+) ... (+) Z/d_t
    in invariant-factor normal form: d_i >= 2 and d_i | d_{i+1}.

    The normal form is unique, so equality of groups is field-wise equality.
    """

    free_rank: int
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("free_rank must be nonnegative")
        fs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        for d in fs:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2 (units are dropped in normal form)")
        for a, b in zip(fs, fs[1:]):
            if b % a != 0:
                raise ValueError(f"divisibility chain violated: {a} does not divide {b}")

    @classmethod
    def trivial(cls) -> "FgAbelianGroup":
        return cls(0, ())

    @classmethod
    def free(cls, rank: int) -> "FgAbelianGroup":
        return cls(rank, ())

    @classmethod
    def cyclic(cls, n: int) -> "FgAbelianGroup":
        if n == 0:
            return cls(1, ())
        return cls(0, (n,)) if n > 1 else cls(0, ())

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> "FgAbelianGroup":
        """Normalize a direct sum of cyclic groups (order 0 meaning Z)."""
        orders = [abs(int(d)) for d in orders]
        diag = IntegerMatrix.from_rows(
            [[orders[i] if i == j else 0 for j in range(len(orders))] for i in range(len(orders))],
            cols=len(orders),
        )
        return cokernel(diag)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def num_generators(self) -> int:
        return self.free_rank + len(self.invariant_factors)

    def order(self) -> Optional[int]:
        """Group order, or None when the group is infinite."""
        if self.free_rank:
            return None
        return math.prod(self.invariant_factors)

    def exponent(self) -> int:
        """Exponent of the torsion subgroup (1 when torsion-free)."""
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def to_json_dict(self) -> dict:
        return {"free_rank": self.free_rank, "invariant_factors": list(self.invariant_factors)}

    @classmethod
    def from_json_dict(cls, d: dict) -> "FgAbelianGroup":
        return cls(int(d["free_rank"]), tuple(int(x) for x in d["invariant_factors"]))

    def __str__(self) -> str:
        parts = ["Z"] * self.free_rank + [f"C{d}" for d in self.invariant_factors]
        return " x ".join(parts) if parts else "0"


def cokernel(A: IntegerMatrix) -> FgAbelianGroup:
    """The quotient Z^rows / (column span of A), in normal form.

    >>> cokernel(IntegerMatrix.from_rows([[-2]]))
    FgAbelianGroup(free_rank=0, invariant_factors=(2,))
    """
    return LatticeQuotient(A).group


def kernel_basis(A: IntegerMatrix) -> IntegerMatrix:
    """Basis of the saturated kernel lattice {x : A x = 0}, as columns.

    The basis columns extend to a basis of Z^cols, so the span is a direct
    summand and the cokernel of the basis inside its own span is torsion-free.
    """
    snf = smith_normal_form(A)
    d = snf.diagonal()
    keep = [j for j in range(A.cols) if j >= len(d) or d[j] == 0]
    return IntegerMatrix.from_cols([snf.V.col(j) for j in keep], rows=A.cols)


def image_basis(A: IntegerMatrix) -> IntegerMatrix:
    """Basis (as columns) of the lattice spanned by the columns of A."""
    snf = smith_normal_form(A)
    av = A @ snf.V
    d = snf.diagonal()
    keep = [j for j in range(len(d)) if d[j] != 0]
    return IntegerMatrix.from_cols([av.col(j) for j in keep], rows=A.rows)


def saturate(A: IntegerMatrix) -> IntegerMatrix:
    """Basis of the saturation of the column span: (span (x) Q) intersect Z^rows."""
    complement = kernel_basis(A.transpose())
    return kernel_basis(complement.transpose())


def solve(A: IntegerMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """One integer solution x of A x = b, or None if none exists."""
    if len(b) != A.rows:
        raise ValueError("length of b must equal row count")
    snf = smith_normal_form(A)
    c = snf.U.apply(b)
    d = snf.diagonal()
    y = [0] * A.cols
    for i in range(A.rows):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di != 0:
                return None
            y[i] = c[i] // di
    return snf.V.apply(y)


def solve_matrix(A: IntegerMatrix, B: IntegerMatrix) -> Optional[IntegerMatrix]:
    """One integer solution X of A X = B, or None."""
    cols = []
    for j in range(B.cols):
        x = solve(A, B.col(j))
        if x is None:
            return None
        cols.append(x)
    return IntegerMatrix.from_cols(cols, rows=A.cols)


def lattices_equal(A: IntegerMatrix, B: IntegerMatrix) -> bool:
    """Whether the column spans of A and B coincide as sublattices."""
    if A.rows != B.rows:
        raise ValueError("ambient rank mismatch")
    return solve_matrix(A, B) is not None and solve_matrix(B, A) is not None


class LatticeQuotient:
    """The quotient Z^n / (column span of relations), with explicit coordinates.

    Normal-form coordinates list the torsion generators first (orders
    d_1 | ... | d_t) and the free generators after them.  `projection`
    maps ambient vectors to these coordinates; `descend` pushes an
    endomorphism of Z^n that preserves the relation lattice down to the
    quotient.
    """

    def __init__(self, relations: IntegerMatrix):
        n = relations.rows
        snf = smith_normal_form(relations)
        d = list(snf.diagonal()) + [0] * (n - min(n, relations.cols))
        torsion_idx = [i for i in range(n) if d[i] >= 2]
        free_idx = [i for i in range(n) if d[i] == 0]
        kept = torsion_idx + free_idx

        self.ambient_rank = n
        self.relations = relations
        self.group = FgAbelianGroup(len(free_idx), tuple(d[i] for i in torsion_idx))
        self.orders: tuple[int, ...] = tuple(d[i] for i in torsion_idx) + (0,) * len(free_idx)
        self.projection = IntegerMatrix.from_rows([list(snf.U.row(i)) for i in kept], cols=n)
        u_inv = unimodular_inverse(snf.U)
        self._section = IntegerMatrix.from_cols([u_inv.col(i) for i in kept], rows=n)

    def reduce(self, coords: Sequence[int]) -> tuple[int, ...]:
        """Canonical representative of a coordinate vector (torsion taken mod d_i)."""
        if len(coords) != len(self.orders):
            raise ValueError("coordinate length mismatch")
        return tuple(c % d if d else c for c, d in zip(coords, self.orders))

    def project(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Class of an ambient vector, in normal-form coordinates."""
        return self.reduce(self.projection.apply(vec))

    def is_zero_class(self, coords: Sequence[int]) -> bool:
        return all(x == 0 for x in self.reduce(coords))

    def lift(self, coords: Sequence[int]) -> tuple[int, ...]:
        """An ambient representative of a coordinate vector."""
        return self._section.apply(coords)

    def descend(self, endo: IntegerMatrix) -> IntegerMatrix:
        """Matrix of the induced endomorphism on normal-form coordinates.

        Raises ValueError when `endo` does not map the relation lattice
        into itself (the induced map would not be well defined).
        """
        if endo.rows != self.ambient_rank or endo.cols != self.ambient_rank:
            raise ValueError("endomorphism shape mismatch")
        for j in range(self.relations.cols):
            image = self.project(endo.apply(self.relations.col(j)))
            if any(image):
                raise ValueError("endomorphism does not preserve the relation lattice")
        return self.projection @ endo @ self._section


def subquotient(ker: IntegerMatrix, im: IntegerMatrix) -> FgAbelianGroup:
    """The group (column span of ker) / (column span of im) in normal form.

    Raises SubgroupViolation when some column of im is not in the span of ker.
    """
    if ker.rows != im.rows:
        raise ValueError("ambient rank mismatch")
    basis = image_basis(ker)
    expressed = solve_matrix(basis, im)
    if expressed is None:
        raise SubgroupViolation("a column of im lies outside the span of ker")
    return cokernel(expressed)
