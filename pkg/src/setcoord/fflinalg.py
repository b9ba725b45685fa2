"""Exact linear algebra over prime fields GF(p).

Matrices are immutable tuples of residue rows.  A :class:`Subspace` stores
its basis in reduced row-echelon form, which is unique per subspace, so
subspace equality is plain dataclass equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .errors import InputError, ResourceError

DEFAULT_ENUM_CAP = 100_000


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise InputError(f"{self.p!r} is not a prime")

    def inv(self, a: int) -> int:
        return pow(a % self.p, -1, self.p)

    def __len__(self) -> int:
        return self.p


def _field(f) -> PrimeField:
    return f if isinstance(f, PrimeField) else PrimeField(int(f))


@dataclass(frozen=True)
class FfMatrix:
    field: PrimeField
    rows: int
    cols: int
    data: tuple  # tuple of row tuples

    def __post_init__(self):
        p = self.field.p
        data = tuple(tuple(int(v) % p for v in row) for row in self.data)
        if len(data) != self.rows or any(len(r) != self.cols for r in data):
            raise InputError(f"matrix data does not have shape {self.rows}x{self.cols}")
        object.__setattr__(self, "data", data)

    @classmethod
    def of(cls, field, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "FfMatrix":
        f = _field(field)
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise InputError("cannot infer the column count of an empty matrix")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise InputError("ragged matrix rows")
        return cls(f, len(rows), cols, tuple(tuple(r) for r in rows))

    @classmethod
    def zeros(cls, field, rows: int, cols: int) -> "FfMatrix":
        return cls(_field(field), rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, field, n: int) -> "FfMatrix":
        return cls(_field(field), n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def from_columns(cls, field, cols: Sequence[Sequence[int]], n_rows: int) -> "FfMatrix":
        f = _field(field)
        return cls(f, n_rows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(n_rows)))

    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    @property
    def T(self) -> "FfMatrix":
        return FfMatrix(self.field, self.cols, self.rows,
                        tuple(tuple(self.data[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list:
        return [self.column(j) for j in range(self.cols)]

    def to_list(self) -> list:
        return [list(r) for r in self.data]

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.data for v in r)

    def _same(self, other: "FfMatrix") -> None:
        if not isinstance(other, FfMatrix) or other.field != self.field:
            raise InputError("field mismatch")

    def __matmul__(self, other: "FfMatrix") -> "FfMatrix":
        self._same(other)
        if self.cols != other.rows:
            raise InputError(f"cannot multiply {self.shape} by {other.shape}")
        p = self.field.p
        ocols = other.columns()
        data = tuple(tuple(sum(a * b for a, b in zip(row, c)) % p for c in ocols) for row in self.data)
        return FfMatrix(self.field, self.rows, other.cols, data)

    def __add__(self, other: "FfMatrix") -> "FfMatrix":
        self._same(other)
        if self.shape != other.shape:
            raise InputError(f"cannot add {self.shape} and {other.shape}")
        return FfMatrix(self.field, self.rows, self.cols,
                        tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __neg__(self) -> "FfMatrix":
        return FfMatrix(self.field, self.rows, self.cols, tuple(tuple(-a for a in r) for r in self.data))

    def __sub__(self, other: "FfMatrix") -> "FfMatrix":
        return self + (-other)

    def apply(self, v: Sequence[int]) -> tuple:
        if len(v) != self.cols:
            raise InputError(f"vector of length {len(v)} for a matrix with {self.cols} columns")
        p = self.field.p
        return tuple(sum(a * b for a, b in zip(row, v)) % p for row in self.data)

    def hstack(self, other: "FfMatrix") -> "FfMatrix":
        self._same(other)
        if self.rows != other.rows:
            raise InputError("hstack needs equal row counts")
        return FfMatrix(self.field, self.rows, self.cols + other.cols,
                        tuple(r + s for r, s in zip(self.data, other.data)))

    def vstack(self, other: "FfMatrix") -> "FfMatrix":
        self._same(other)
        if self.cols != other.cols:
            raise InputError("vstack needs equal column counts")
        return FfMatrix(self.field, self.rows + other.rows, self.cols, self.data + other.data)


def block_diag(*mats: FfMatrix) -> FfMatrix:
    f = mats[0].field
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    data = []
    off = 0
    for m in mats:
        if m.field != f:
            raise InputError("field mismatch")
        for r in m.data:
            data.append((0,) * off + r + (0,) * (cols - off - m.cols))
        off += m.cols
    return FfMatrix(f, rows, cols, tuple(data))


def kron_identity(n: int, m: FfMatrix) -> FfMatrix:
    """``I_n (x) m``."""
    return block_diag(*([m] * n))


def _rref_rows(field: PrimeField, rows: list, ncols: int) -> tuple[list, list]:
    p = field.p
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [v * inv % p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [[v % p for v in row] for row in rows[:r]], pivots


def rref(m: FfMatrix) -> FfMatrix:
    """Reduced row-echelon form with zero rows removed."""
    rows, _ = _rref_rows(m.field, m.data, m.cols)
    return FfMatrix(m.field, len(rows), m.cols, tuple(tuple(r) for r in rows))


def pivot_columns(m: FfMatrix) -> list:
    return _rref_rows(m.field, m.data, m.cols)[1]


def rank(m: FfMatrix) -> int:
    return len(pivot_columns(m))


@dataclass(frozen=True)
class Subspace:
    field: PrimeField
    ambient_dim: int
    basis: FfMatrix  # RREF rows

    def __post_init__(self):
        if self.basis.field != self.field or self.basis.cols != self.ambient_dim:
            raise InputError("basis does not live in the ambient space")
        canon = rref(self.basis)
        object.__setattr__(self, "basis", canon)

    @classmethod
    def span(cls, field, n: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        f = _field(field)
        vecs = [tuple(v) for v in vectors]
        if any(len(v) != n for v in vecs):
            raise InputError(f"vectors must have length {n}")
        return cls(f, n, FfMatrix(f, len(vecs), n, tuple(vecs)))

    @classmethod
    def zero(cls, field, n: int) -> "Subspace":
        return cls.span(field, n, [])

    @classmethod
    def full(cls, field, n: int) -> "Subspace":
        f = _field(field)
        return cls(f, n, FfMatrix.identity(f, n))

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def vectors_basis(self) -> list:
        return [list(r) for r in self.basis.data]

    def __len__(self) -> int:
        return self.field.p ** self.dim

    def vectors(self) -> Iterator[tuple]:
        """All ``p**dim`` elements, in lexicographic order of coefficients."""
        p, n = self.field.p, self.ambient_dim
        for coeffs in itertools.product(range(p), repeat=self.dim):
            v = [0] * n
            for c, row in zip(coeffs, self.basis.data):
                if c:
                    for j, a in enumerate(row):
                        v[j] += c * a
            yield tuple(x % p for x in v)

    def __contains__(self, v) -> bool:
        return contains(self, v)


def _same_space(a: Subspace, b: Subspace) -> None:
    if a.field != b.field or a.ambient_dim != b.ambient_dim:
        raise InputError("subspaces live in different spaces")


def image(m: FfMatrix) -> Subspace:
    """Column space, a subspace of ``F^rows``."""
    return Subspace(m.field, m.rows, m.T)


def row_space(m: FfMatrix) -> Subspace:
    return Subspace(m.field, m.cols, m)


def kernel(m: FfMatrix) -> Subspace:
    """``{x : m x = 0}``, a subspace of ``F^cols``."""
    p = m.field.p
    rows, pivots = _rref_rows(m.field, m.data, m.cols)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [0] * m.cols
        v[fcol] = 1
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fcol] % p
        basis.append(v)
    return Subspace.span(m.field, m.cols, basis)


def map_subspace(m: FfMatrix, s: Subspace) -> Subspace:
    """``m s``: image of a subspace of ``F^cols`` under ``m``."""
    if s.field != m.field or s.ambient_dim != m.cols:
        raise InputError("subspace does not match the matrix domain")
    return Subspace.span(m.field, m.rows, [m.apply(v) for v in s.basis.data])


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _same_space(a, b)
    return Subspace.span(a.field, a.ambient_dim, list(a.basis.data) + list(b.basis.data))


def subspace_intersection(a: Subspace, b: Subspace) -> Subspace:
    """Solve ``sum alpha_i a_i = sum beta_j b_j`` through the kernel of the stacked system."""
    _same_space(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.field, a.ambient_dim)
    stacked = a.basis.T.hstack(-b.basis.T)
    ker = kernel(stacked)
    vecs = []
    for coeffs in ker.basis.data:
        alpha = FfMatrix(a.field, 1, a.dim, (coeffs[: a.dim],))
        vecs.append((alpha @ a.basis).data[0])
    return Subspace.span(a.field, a.ambient_dim, vecs)


def contains(s: Subspace, v: Sequence[int]) -> bool:
    if len(v) != s.ambient_dim:
        raise InputError(f"vector of length {len(v)} in a space of dimension {s.ambient_dim}")
    return rank(s.basis.vstack(FfMatrix(s.field, 1, s.ambient_dim, (tuple(v),)))) == s.dim


def is_subspace_of(a: Subspace, b: Subspace) -> bool:
    _same_space(a, b)
    return all(contains(b, v) for v in a.basis.data)


def solve(a: FfMatrix, b: FfMatrix) -> Optional[FfMatrix]:
    """A particular ``X`` with ``a X = b``, or None if inconsistent.

    Free variables are set to zero, so every column of ``X`` is supported on
    the pivot columns of ``a``.  That support is a complement of ``ker a``.
    """
    if a.field != b.field or a.rows != b.rows:
        raise InputError("incompatible system")
    p = a.field.p
    aug = [list(r) + list(s) for r, s in zip(a.data, b.data)]
    rows, pivots = _rref_rows(a.field, aug, a.cols)
    full, _ = _rref_rows(a.field, aug, a.cols + b.cols)
    if len(full) != len(pivots):
        return None
    x = [[0] * b.cols for _ in range(a.cols)]
    for r, pc in enumerate(pivots):
        for j in range(b.cols):
            x[pc][j] = rows[r][a.cols + j] % p
    return FfMatrix(a.field, a.cols, b.cols, tuple(tuple(r) for r in x))


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of GF(q)^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def enumerate_subspaces(ambient: Subspace, dim: int, cap: int = DEFAULT_ENUM_CAP) -> Iterator[Subspace]:
    """Every ``dim``-dimensional subspace of ``ambient`` exactly once.

    Walks the RREF matrices of ``F^k`` (k = dim of ambient) by pivot pattern
    and maps them through the ambient basis.
    """
    k, p = ambient.dim, ambient.field.p
    if dim < 0 or dim > k:
        return
    count = gaussian_binomial(k, dim, p)
    if count > cap:
        raise ResourceError(f"{count} subspaces to enumerate (cap {cap})")
    B = ambient.basis
    for piv in itertools.combinations(range(k), dim):
        free = [(r, c) for r in range(dim) for c in range(piv[r] + 1, k) if c not in piv]
        for vals in itertools.product(range(p), repeat=len(free)):
            M = [[0] * k for _ in range(dim)]
            for r, c in enumerate(piv):
                M[r][c] = 1
            for (r, c), v in zip(free, vals):
                M[r][c] = v
            coords = FfMatrix(ambient.field, dim, k, tuple(tuple(r) for r in M))
            yield Subspace(ambient.field, ambient.ambient_dim, coords @ B)


def random_matrix(rng, field, rows: int, cols: int) -> FfMatrix:
    f = _field(field)
    return FfMatrix(f, rows, cols, tuple(tuple(rng.randrange(f.p) for _ in range(cols)) for _ in range(rows)))
