"""Classical generalized inverses on square and rectangular complex matrices.

Covers the inner ({1}), reflexive ({1,2}), Moore-Penrose, group, Drazin
and commuting-inner ({1,5}) inverses.  These are the building blocks the
prescribed-idempotent constructions consume.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .densela import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    eq_bound,
    frob,
    rank,
    rank_factorization,
)
from .errors import NumericalError, ShapeError

__all__ = [
    "DrazinResult",
    "moore_penrose",
    "inner_inverse",
    "reflexive_inverse",
    "group_inverse",
    "drazin_inverse",
    "one_five_inverse",
    "gi_idempotents",
]


def moore_penrose(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose inverse from the SVD with the package rank cutoff."""
    a = as_matrix(a)
    u, s, vh = np.linalg.svd(a)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[1], a.shape[0]), dtype=np.complex128)
    r = int(np.count_nonzero(s > tol.rank_rtol * s[0]))
    return (vh[:r, :].conj().T / s[:r]) @ u[:, :r].conj().T


def inner_inverse(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """A {1}-inverse of ``a``.

    Every matrix has one; the Moore-Penrose inverse is returned as the
    canonical, reproducible choice.
    """
    return moore_penrose(a, tol)


def reflexive_inverse(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """A {1,2}-inverse, built as g a g from an inner inverse g."""
    a = as_matrix(a)
    g = inner_inverse(a, tol)
    return g @ a @ g


def _product_rank(product: np.ndarray, scale: float, tol: Tolerances) -> int:
    """Rank of a computed product, treating cancellation noise as zero.

    A product whose norm sits at the rounding floor of its factors is a
    true zero; the relative rank cutoff would otherwise count the noise.
    """
    if frob(product) <= 1e-12 * scale:
        return 0
    return rank(product, tol)


def group_inverse(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray | None:
    """Group inverse, or None when rank(a^2) < rank(a).

    Computed gauge-invariantly from a full-rank factorization a = F G as
    F (G F)^-2 G.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"group inverse needs a square matrix, got {a.shape}")
    r = rank(a, tol)
    if r == 0:
        return np.zeros_like(a)
    if _product_rank(a @ a, frob(a) ** 2, tol) < r:
        return None
    f, g = rank_factorization(a, tol)
    gf = g @ f
    try:
        core = np.linalg.solve(gf, np.eye(r, dtype=np.complex128))
    except np.linalg.LinAlgError:
        # rank test said index one but the core is exactly singular
        return None
    return f @ core @ core @ g


@dataclass(frozen=True)
class DrazinResult:
    """Drazin inverse together with the index and spectral idempotent."""

    inverse: np.ndarray
    index: int
    spectral_idempotent: np.ndarray


def drazin_inverse(a, tol: Tolerances = DEFAULT_TOL) -> DrazinResult:
    """Drazin inverse via the inner-inverse formula a^k (a^(2k+1))^- a^k.

    The index is the least k with rank(a^k) = rank(a^(k+1)), read off the
    power chain of the spectrally normalized matrix (normalization keeps
    genuine powers at unit scale, so a power at the rounding floor is a
    vanished nilpotent part, not a small survivor).  All three defining
    identities are validated before returning; a failure raises
    NumericalError rather than handing back a silently inaccurate result.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"Drazin inverse needs a square matrix, got {a.shape}")
    n = a.shape[0]

    scale = float(np.linalg.norm(a, 2))
    if scale == 0.0:
        return DrazinResult(
            inverse=np.zeros_like(a),
            index=1,
            spectral_idempotent=np.eye(n, dtype=np.complex128),
        )
    a_s = a / scale

    k = 0
    power = np.eye(n, dtype=np.complex128)  # a_s^k
    r_prev = n
    while True:
        nxt = power @ a_s
        if frob(nxt) <= 1e-10:  # noise floor of the normalized power chain
            nxt = np.zeros_like(nxt)
        r_next = rank(nxt, tol)
        if r_next == r_prev:
            break
        k += 1
        power = nxt
        r_prev = r_next
        if k > n:  # pragma: no cover - rank sequence must stabilise within n steps
            raise NumericalError("rank sequence failed to stabilise")

    middle = power @ a_s @ power  # a_s^(2k+1)
    d = (power @ moore_penrose(middle, tol) @ power) / scale

    _validate_drazin(a, d, k, tol)
    spectral = np.eye(n, dtype=np.complex128) - a @ d
    if frob(spectral @ spectral - spectral) > eq_bound(spectral, spectral, tol):
        raise NumericalError("spectral idempotent failed the idempotency check")
    return DrazinResult(inverse=d, index=k, spectral_idempotent=spectral)


def _validate_drazin(a: np.ndarray, d: np.ndarray, k: int, tol: Tolerances):
    ad = a @ d
    da = d @ a
    checks = {
        "outer": (d @ ad, d),
        "commute": (ad, da),
        "power": (np.linalg.matrix_power(a, k + 1) @ d, np.linalg.matrix_power(a, k)),
    }
    for name, (lhs, rhs) in checks.items():
        if frob(lhs - rhs) > eq_bound(lhs, rhs, tol):
            raise NumericalError(
                f"Drazin axiom '{name}' failed: residual {frob(lhs - rhs):.3e}"
            )


def one_five_inverse(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray | None:
    """An inner inverse commuting with ``a``, or None.

    In the full matrix algebra a commuting inner inverse exists exactly
    when the group inverse does, and the group inverse is always an
    admissible representative of the (non-unique) class, so it is
    returned as the canonical value.
    """
    return group_inverse(a, tol)


def gi_idempotents(a, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Idempotents (a^+ a, a a^+) sharing kernel and range with ``a``."""
    a = as_matrix(a)
    pinv = moore_penrose(a, tol)
    return pinv @ a, a @ pinv
