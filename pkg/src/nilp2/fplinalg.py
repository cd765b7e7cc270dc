"""Exact linear algebra over a prime field F_p.

Everything is integer arithmetic on residues in [0, p); there is no
floating point anywhere.  Matrices are dense numpy int64 arrays kept
read-only after construction.  Subspaces are stored by their reduced row
echelon basis, so two subspaces are equal exactly when their basis arrays
are entry-identical.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import AmbientMismatch, NotOddPrime

__all__ = [
    "FpMatrix",
    "Subspace",
    "all_subspaces",
    "check_odd_prime",
    "echelonize",
    "is_odd_prime",
    "kernel",
    "quotient_map",
    "solve",
]


def is_odd_prime(p) -> bool:
    """True exactly for odd prime integers."""
    try:
        q = int(p)
    except (TypeError, ValueError):
        return False
    if q != p or q < 3 or q % 2 == 0:
        return False
    d = 3
    while d * d <= q:
        if q % d == 0:
            return False
        d += 2
    return True


def check_odd_prime(p) -> int:
    if not is_odd_prime(p):
        raise NotOddPrime(f"modulus must be an odd prime, got {p!r}")
    return int(p)


def _as_array(data, p: int, width=None) -> np.ndarray:
    """Coerce row data to a 2-d int64 residue array."""
    rows = [tuple(int(x) for x in row) for row in data]
    if rows:
        cols = {len(r) for r in rows}
        if len(cols) != 1:
            raise AmbientMismatch("rows have unequal lengths")
        (w,) = cols
        if width is not None and w != width:
            raise AmbientMismatch(f"expected rows of length {width}, got {w}")
        a = np.array(rows, dtype=np.int64)
    else:
        a = np.zeros((0, 0 if width is None else width), dtype=np.int64)
    return np.mod(a, p)


def rref(a: np.ndarray, p: int):
    """Reduced row echelon form of an integer matrix mod p.

    Returns (r, pivots).  Pivot entries are 1 with zeros above and below;
    the row space is preserved.
    """
    r = np.mod(np.asarray(a, dtype=np.int64), p)
    if r.ndim != 2:
        raise AmbientMismatch("matrix data must be two-dimensional")
    rows, cols = r.shape
    pivots = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        hits = np.nonzero(r[row:, col])[0]
        if hits.size == 0:
            continue
        lead = row + int(hits[0])
        if lead != row:
            r[[row, lead]] = r[[lead, row]]
        inv = pow(int(r[row, col]), -1, p)
        r[row] = np.mod(r[row] * inv, p)
        other = r[:, col].copy()
        other[row] = 0
        if np.any(other):
            r = np.mod(r - np.outer(other, r[row]), p)
        pivots.append(col)
        row += 1
    return r, pivots


def kernel_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Reduced echelon basis (rows) of the right null space of a mod p."""
    a = np.asarray(a, dtype=np.int64)
    if a.ndim != 2:
        raise AmbientMismatch("matrix data must be two-dimensional")
    cols = a.shape[1]
    r, pivots = rref(a, p)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    if not free:
        return np.zeros((0, cols), dtype=np.int64)
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(pivots):
            basis[k, pc] = (-int(r[i, f])) % p
    out, _ = rref(basis, p)
    return out


def solve_matrix(a: np.ndarray, b: np.ndarray, p: int):
    """One exact solution x of a @ x = b mod p, or None if inconsistent.

    b may carry several right-hand sides as columns; free variables are
    set to zero, so the solution is deterministic.
    """
    a = np.mod(np.asarray(a, dtype=np.int64), p)
    b = np.mod(np.asarray(b, dtype=np.int64), p)
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    if a.shape[0] != b.shape[0]:
        raise AmbientMismatch(
            f"system has {a.shape[0]} equations but {b.shape[0]} targets"
        )
    ncols = a.shape[1]
    aug = np.concatenate([a, b], axis=1)
    r, pivots = rref(aug, p)
    if any(pc >= ncols for pc in pivots):
        return None
    x = np.zeros((ncols, b.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = r[i, ncols:]
    return x


class FpMatrix:
    """Immutable dense matrix over F_p with entries stored as residues."""

    __slots__ = ("p", "entries")

    def __init__(self, p, data, width=None):
        self.p = check_odd_prime(p)
        a = _as_array(data, self.p, width)
        a.flags.writeable = False
        self.entries = a

    @classmethod
    def identity(cls, p, n):
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, p, rows, cols):
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def row_tuples(self):
        return tuple(tuple(int(x) for x in row) for row in self.entries)

    def __eq__(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return (
            self.p == other.p
            and self.entries.shape == other.entries.shape
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self):
        return hash((self.p, self.entries.shape, self.entries.tobytes()))

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.row_tuples()})"


def echelonize(m: FpMatrix):
    """Reduced row echelon form of m together with its rank."""
    r, pivots = rref(m.entries, m.p)
    return FpMatrix(m.p, r), len(pivots)


def solve(a: FpMatrix, b):
    """One solution x of a x = b as a tuple, or None if inconsistent."""
    vec = np.array([int(x) for x in b], dtype=np.int64)
    if vec.shape[0] != a.rows:
        raise AmbientMismatch(
            f"matrix has {a.rows} rows but target has {vec.shape[0]} entries"
        )
    x = solve_matrix(a.entries, vec, a.p)
    if x is None:
        return None
    return tuple(int(v) for v in x[:, 0])


def kernel(a: FpMatrix) -> FpMatrix:
    """Reduced echelon basis of the right null space, one vector per row."""
    return FpMatrix(a.p, kernel_basis(a.entries, a.p), width=a.cols)


class Subspace:
    """Subspace of F_p^ambient held as a reduced row echelon basis.

    The canonical basis makes equality syntactic: two subspaces are equal
    iff their basis arrays are entry-identical.
    """

    __slots__ = ("p", "ambient", "basis", "pivots")

    def __init__(self, p, ambient, vectors=()):
        self.p = check_odd_prime(p)
        self.ambient = int(ambient)
        if self.ambient < 0:
            raise AmbientMismatch("ambient dimension must be nonnegative")
        a = _as_array(vectors, self.p, self.ambient)
        r, pivots = rref(a, self.p)
        basis = r[: len(pivots)].copy()
        basis.flags.writeable = False
        self.basis = basis
        self.pivots = tuple(pivots)

    @classmethod
    def zero(cls, p, ambient):
        return cls(p, ambient, ())

    @classmethod
    def full(cls, p, ambient):
        return cls(p, ambient, np.eye(ambient, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def _check_compatible(self, other: "Subspace"):
        if self.p != other.p or self.ambient != other.ambient:
            raise AmbientMismatch(
                f"subspaces live in F_{self.p}^{self.ambient} and "
                f"F_{other.p}^{other.ambient}"
            )

    def reduce_vector(self, v) -> np.ndarray:
        """Residue of v after eliminating this subspace's pivot coordinates."""
        x = np.mod(np.array([int(e) for e in v], dtype=np.int64), self.p)
        if x.shape[0] != self.ambient:
            raise AmbientMismatch(
                f"vector has {x.shape[0]} entries, ambient is {self.ambient}"
            )
        if self.dim:
            coeffs = x[list(self.pivots)]
            x = np.mod(x - coeffs @ self.basis, self.p)
        return x

    def contains_vector(self, v) -> bool:
        return not np.any(self.reduce_vector(v))

    def contains(self, other: "Subspace") -> bool:
        self._check_compatible(other)
        return all(self.contains_vector(row) for row in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        stacked = np.concatenate([self.basis, other.basis], axis=0)
        return Subspace(self.p, self.ambient, stacked)

    def complement_projection(self) -> np.ndarray:
        """Matrix of the projection onto the non-pivot coordinates.

        The returned q has shape (ambient - dim, ambient), is surjective,
        and its kernel is exactly this subspace.  The complement is fixed
        as the set of non-pivot coordinates of the echelon basis, which
        makes the projection deterministic.
        """
        pivot_set = set(self.pivots)
        free = [c for c in range(self.ambient) if c not in pivot_set]
        q = np.zeros((len(free), self.ambient), dtype=np.int64)
        for a, f in enumerate(free):
            q[a, f] = 1
            for r, pc in enumerate(self.pivots):
                q[a, pc] = (-int(self.basis[r, f])) % self.p
        return q

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check_compatible(other)
        qa = self.complement_projection()
        qb = other.complement_projection()
        stacked = np.concatenate([qa, qb], axis=0)
        return Subspace(self.p, self.ambient, kernel_basis(stacked, self.p))

    def preimage(self, t: np.ndarray) -> "Subspace":
        """Subspace {x : t @ x lies in this subspace}."""
        t = np.mod(np.asarray(t, dtype=np.int64), self.p)
        if t.shape[0] != self.ambient:
            raise AmbientMismatch(
                f"map lands in dimension {t.shape[0]}, ambient is {self.ambient}"
            )
        q = self.complement_projection()
        return Subspace(self.p, t.shape[1], kernel_basis(np.mod(q @ t, self.p), self.p))

    def basis_tuples(self):
        return tuple(tuple(int(x) for x in row) for row in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient == other.ambient
            and self.basis.shape == other.basis.shape
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.p, self.ambient, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(p={self.p}, ambient={self.ambient}, basis={self.basis_tuples()})"


def quotient_map(w_dim: int, n: Subspace) -> FpMatrix:
    """Projection of F_p^w_dim onto a complement of n, as a matrix.

    Deterministic for fixed (w_dim, n): the surviving coordinates are the
    non-pivot coordinates of n's echelon basis.  Surjective with kernel
    exactly n.
    """
    if n.ambient != w_dim:
        raise AmbientMismatch(
            f"subspace lives in dimension {n.ambient}, expected {w_dim}"
        )
    return FpMatrix(n.p, n.complement_projection(), width=w_dim)


def all_subspaces(p: int, ambient: int):
    """Yield every subspace of F_p^ambient, one per echelon pattern.

    Enumeration order is deterministic: by dimension, then pivot columns,
    then free entries.  Counts grow like Gaussian binomials, so keep the
    ambient dimension small.
    """
    p = check_odd_prime(p)
    for k in range(ambient + 1):
        for pivots in itertools.combinations(range(ambient), k):
            pivot_set = set(pivots)
            slots = [
                (r, c)
                for r in range(k)
                for c in range(pivots[r] + 1, ambient)
                if c not in pivot_set
            ]
            for values in itertools.product(range(p), repeat=len(slots)):
                basis = np.zeros((k, ambient), dtype=np.int64)
                for r, pc in enumerate(pivots):
                    basis[r, pc] = 1
                for (r, c), val in zip(slots, values):
                    basis[r, c] = val
                yield Subspace(p, ambient, basis)
