"""Dense complex linear-algebra kernels backing every other module.

All routines operate on 2-D ``numpy.ndarray`` values with ``complex128``
entries.  The decision thresholds (numerical rank, matrix equality,
convergence) live in a single :class:`Tolerances` value that is threaded
through the whole package, so that no two modules can reach contradictory
verdicts about the same matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ShapeError, SingularMatrixError

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "as_matrix",
    "frob",
    "eq_bound",
    "matrices_equal",
    "matmul",
    "adjoint",
    "singular_values",
    "rank",
    "solve_right",
    "solve_left",
    "rank_factorization",
    "eigenvalues",
    "inverse",
    "matrix_exp",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical decision thresholds.

    rank_rtol
        Relative singular-value cutoff: sigma counts toward the rank when
        sigma > rank_rtol * sigma_max.
    eq_atol, eq_rtol
        Matrix equality uses the mixed bound
        ||X - Y||_F <= eq_atol + eq_rtol * max(||X||_F, ||Y||_F).
    conv_tol
        Target for limit/integral convergence decisions.
    """

    rank_rtol: float = 1e-10
    eq_atol: float = 1e-10
    eq_rtol: float = 1e-8
    conv_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rtol", "eq_atol", "eq_rtol", "conv_tol"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and nonnegative, got {value}")


DEFAULT_TOL = Tolerances()


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a finite complex128 2-D array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeError(f"{name} must have positive dimensions, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def _require_square(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {a.shape}")
    return a


def frob(a) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(a))


def adjoint(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def eq_bound(x, y, tol: Tolerances = DEFAULT_TOL) -> float:
    """Admissible residual for declaring ``x`` and ``y`` equal."""
    return tol.eq_atol + tol.eq_rtol * max(frob(x), frob(y))


def matrices_equal(x, y, tol: Tolerances = DEFAULT_TOL) -> bool:
    return frob(np.asarray(x) - np.asarray(y)) <= eq_bound(x, y, tol)


def matmul(a, b) -> np.ndarray:
    """Matrix product with an explicit shape check."""
    a = as_matrix(a, "left factor")
    b = as_matrix(b, "right factor")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}"
        )
    return a @ b


def singular_values(a) -> np.ndarray:
    return np.linalg.svd(np.asarray(a, dtype=np.complex128), compute_uv=False)


def rank(a, tol: Tolerances = DEFAULT_TOL) -> int:
    """Numerical rank: count of singular values above rank_rtol * sigma_max."""
    s = singular_values(a)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rtol * s[0]))


def solve_right(a, b, tol: Tolerances = DEFAULT_TOL) -> np.ndarray | None:
    """Solve A X = B in the least-squares sense; return X only if consistent.

    Consistency means ||A X - B||_F <= eq_atol + eq_rtol * ||B||_F.
    Returns None for an inconsistent system; raises ShapeError when the
    row counts disagree (a different failure from inconsistency).
    """
    a = as_matrix(a, "A")
    b = as_matrix(b, "B")
    if a.shape[0] != b.shape[0]:
        raise ShapeError(f"A has {a.shape[0]} rows but B has {b.shape[0]}")
    x, *_ = np.linalg.lstsq(a, b, rcond=tol.rank_rtol)
    if frob(a @ x - b) > tol.eq_atol + tol.eq_rtol * frob(b):
        return None
    return x


def solve_left(a, b, tol: Tolerances = DEFAULT_TOL) -> np.ndarray | None:
    """Solve X A = B via the conjugate-transposed right system."""
    a = as_matrix(a, "A")
    b = as_matrix(b, "B")
    if a.shape[1] != b.shape[1]:
        raise ShapeError(f"A has {a.shape[1]} cols but B has {b.shape[1]}")
    xh = solve_right(adjoint(a), adjoint(b), tol)
    return None if xh is None else adjoint(xh)


def rank_factorization(a, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Full-rank factorization A = F G.

    F is n x r with full column rank, G is r x m with full row rank,
    r = rank(A).  The factors come from an SVD, so they are orthogonal up
    to the singular-value scaling; consumers must be invariant under the
    regauging F -> F M, G -> M^-1 G.
    """
    a = as_matrix(a)
    u, s, vh = np.linalg.svd(a)
    r = 0 if s.size == 0 or s[0] == 0.0 else int(np.count_nonzero(s > tol.rank_rtol * s[0]))
    f = u[:, :r] * s[:r]
    g = vh[:r, :]
    return f, g


def eigenvalues(a) -> np.ndarray:
    """Eigenvalues with multiplicity (unordered)."""
    a = _require_square(as_matrix(a))
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - QR iteration failure
        raise NumericalError(f"eigenvalue iteration failed: {exc}") from exc


def inverse(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Inverse of a numerically nonsingular square matrix."""
    a = _require_square(as_matrix(a))
    s = singular_values(a)
    if s[0] == 0.0 or s[-1] <= tol.rank_rtol * s[0]:
        raise SingularMatrixError(
            f"matrix is numerically singular (sigma_min={s[-1]:.3e}, sigma_max={s[0]:.3e})"
        )
    return np.linalg.solve(a, np.eye(a.shape[0], dtype=np.complex128))


# [13/13] Pade coefficients for the scaling-and-squaring exponential.
_PADE13 = (
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
)
_THETA13 = 5.371920351148152


def matrix_exp(a) -> np.ndarray:
    """Matrix exponential by Pade approximation with scaling and squaring."""
    a = _require_square(as_matrix(a))
    n = a.shape[0]
    norm = float(np.linalg.norm(a, 1))
    if norm == 0.0:
        return np.eye(n, dtype=np.complex128)
    squarings = 0
    if norm > _THETA13:
        squarings = int(np.ceil(np.log2(norm / _THETA13)))
        a = a / (2.0 ** squarings)

    b = _PADE13
    ident = np.eye(n, dtype=np.complex128)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a2 @ a4
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    try:
        r = np.linalg.solve(v - u, v + u)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - Pade denominator breakdown
        raise NumericalError(f"exponential Pade solve failed: {exc}") from exc
    for _ in range(squarings):
        r = r @ r
    return r
