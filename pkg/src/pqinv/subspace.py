"""Subspaces of C^n with orthonormal bases.

The algebra-level objects this package reasons about (principal right
ideals and right annihilators of matrices) are determined, inside the
full matrix algebra, by column spaces and null spaces of the matrices
themselves: x generates the same right ideal as y exactly when their
column spaces agree, and the annihilator of x matches the ideal of an
idempotent q exactly when Ker(x) = Ran(q).  Every set-level statement
therefore reduces to the n-dimensional subspace computations below.
Left-sided statements are reduced to these via conjugate transposition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .densela import DEFAULT_TOL, Tolerances, as_matrix
from .errors import ShapeError

__all__ = [
    "Subspace",
    "range_of",
    "kernel_of",
    "image",
    "intersect",
    "sum_of",
    "is_direct_sum_all",
    "contains",
    "equals",
    "gap",
]

_ORTHONORMALITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of C^n given by an n x d matrix with orthonormal columns."""

    ambient: int
    basis: np.ndarray

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=np.complex128)
        object.__setattr__(self, "basis", basis)
        if self.ambient < 1:
            raise ShapeError(f"ambient dimension must be positive, got {self.ambient}")
        if basis.ndim != 2 or basis.shape[0] != self.ambient:
            raise ShapeError(
                f"basis must be {self.ambient} x d, got shape {basis.shape}"
            )
        d = basis.shape[1]
        if d > self.ambient:
            raise ShapeError(f"basis has {d} columns in ambient dimension {self.ambient}")
        gram = basis.conj().T @ basis
        if np.linalg.norm(gram - np.eye(d)) > _ORTHONORMALITY_TOL:
            raise ValueError("basis columns are not orthonormal")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, np.zeros((n, 0), dtype=np.complex128))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, np.eye(n, dtype=np.complex128))

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the subspace."""
        if self.dim == 0:
            return np.zeros((self.ambient, self.ambient), dtype=np.complex128)
        return self.basis @ self.basis.conj().T

    def complement(self, tol: Tolerances = DEFAULT_TOL) -> "Subspace":
        """Orthogonal complement."""
        if self.dim == 0:
            return Subspace.full(self.ambient)
        return kernel_of(self.basis.conj().T, tol)


def _canonical_phases(basis: np.ndarray) -> np.ndarray:
    """Scale each column so its largest entry is real positive.

    The SVD fixes basis columns only up to a unit phase; pinning the
    phase makes every basis (and everything built from one) reproducible.
    """
    if basis.shape[1] == 0:
        return basis
    lead = basis[np.argmax(np.abs(basis), axis=0), np.arange(basis.shape[1])]
    phases = np.where(np.abs(lead) == 0.0, 1.0, lead / np.abs(lead))
    return basis / phases


def _orth_range(m: np.ndarray, tol: Tolerances) -> np.ndarray:
    """Orthonormal basis of the column space of ``m`` (n x d, d may be 0)."""
    if m.shape[1] == 0:
        return np.zeros((m.shape[0], 0), dtype=np.complex128)
    u, s, _ = np.linalg.svd(m)
    r = 0 if s.size == 0 or s[0] == 0.0 else int(np.count_nonzero(s > tol.rank_rtol * s[0]))
    return _canonical_phases(u[:, :r])


def _null_cols(m: np.ndarray, tol: Tolerances) -> np.ndarray:
    """Orthonormal basis of the (right) null space of ``m``."""
    if m.shape[0] == 0 or m.shape[1] == 0:
        return np.eye(m.shape[1], dtype=np.complex128)
    _, s, vh = np.linalg.svd(m)
    r = 0 if s.size == 0 or s[0] == 0.0 else int(np.count_nonzero(s > tol.rank_rtol * s[0]))
    return _canonical_phases(vh[r:, :].conj().T)


def range_of(a, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Column space of a matrix."""
    a = as_matrix(a)
    return Subspace(a.shape[0], _orth_range(a, tol))


def kernel_of(a, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Null space of a matrix."""
    a = as_matrix(a)
    return Subspace(a.shape[1], _null_cols(a, tol))


def image(a, s: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """The subspace A . S."""
    a = as_matrix(a)
    if a.shape[1] != s.ambient:
        raise ShapeError(f"matrix has {a.shape[1]} cols, subspace lives in C^{s.ambient}")
    if s.dim == 0:
        return Subspace.zero(a.shape[0])
    mapped = a @ s.basis
    # below the noise floor of the product the image is a true zero;
    # a relative rank cutoff would otherwise count pure cancellation noise
    if float(np.linalg.norm(mapped)) <= 1e-12 * float(np.linalg.norm(a)) * np.sqrt(s.dim):
        return Subspace.zero(a.shape[0])
    return Subspace(a.shape[0], _orth_range(mapped, tol))


def _check_same_ambient(s: Subspace, t: Subspace):
    if s.ambient != t.ambient:
        raise ShapeError(f"ambient dimensions differ: {s.ambient} vs {t.ambient}")


def intersect(s: Subspace, t: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Intersection, from the null space of the stacked system [B_s | -B_t]."""
    _check_same_ambient(s, t)
    if s.dim == 0 or t.dim == 0:
        return Subspace.zero(s.ambient)
    stacked = np.hstack([s.basis, -t.basis])
    null = _null_cols(stacked, tol)
    vectors = s.basis @ null[: s.dim, :]
    return Subspace(s.ambient, _orth_range(vectors, tol))


def sum_of(s: Subspace, t: Subspace, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Sum of two subspaces."""
    _check_same_ambient(s, t)
    return Subspace(s.ambient, _orth_range(np.hstack([s.basis, t.basis]), tol))


def is_direct_sum_all(s: Subspace, t: Subspace, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when S and T intersect trivially and together fill C^n."""
    _check_same_ambient(s, t)
    n = s.ambient
    if s.dim + t.dim != n:
        return False
    if intersect(s, t, tol).dim != 0:
        return False
    return sum_of(s, t, tol).dim == n


def contains(s: Subspace, t: Subspace, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True when every basis vector of T lies in S at tolerance."""
    _check_same_ambient(s, t)
    if t.dim == 0:
        return True
    residual = t.basis - s.basis @ (s.basis.conj().T @ t.basis)
    # basis columns are unit vectors, so the mixed bound reduces to atol + rtol
    bound = tol.eq_atol + tol.eq_rtol
    return float(np.max(np.linalg.norm(residual, axis=0))) <= bound


def equals(s: Subspace, t: Subspace, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Mutual containment."""
    return contains(s, t, tol) and contains(t, s, tol)


def gap(s: Subspace, t: Subspace) -> float:
    """Diagnostic distance: the larger one-sided projection defect.

    Equals the sine of the largest principal angle when dims agree and 1.0
    when one subspace holds a direction entirely outside the other.
    """
    _check_same_ambient(s, t)

    def _defect(u: Subspace, v: Subspace) -> float:
        if v.dim == 0:
            return 0.0
        residual = v.basis - u.basis @ (u.basis.conj().T @ v.basis)
        if residual.size == 0:
            return 0.0
        return float(np.linalg.norm(residual, 2))

    return max(_defect(s, t), _defect(t, s))
