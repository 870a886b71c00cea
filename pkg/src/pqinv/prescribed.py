"""Outer and reflexive inverses with prescribed idempotents.

Given a square matrix ``a`` and idempotents ``p``, ``q`` of the same
size, four related inverses are handled here, distinguished by how the
idempotents are imposed:

* strict outer inverse: b with  b a b = b,  b a = p,  1 - a b = q;
* subspace outer inverse: b with  b a b = b,  Ran(b) = Ran(p),
  Ker(b) = Ran(q)  (the relaxation of the strict definition, which is
  the one that mirrors the classical A^(2)_{T,S} of operator theory);
* the {1,2} variants of both, which additionally satisfy a b a = a.

Each inverse is unique when it exists.  Existence is decided by
:func:`diagnose`, which evaluates every equivalent criterion of the
existence theory independently and reports them side by side; the
computation itself runs through a matrix ``w`` with Ran(w) = Ran(p) and
Ker(w) = Ran(q), for which

    b = w (a w)^#  =  (w a)^# w  =  w (w a w)^- w
      = lim_{s -> 0} w (s + a w)^-1  =  integral_0^inf w exp(-(a w) t) dt,

giving four independent numerical routes that cross-validate each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import subspace as sub
from .densela import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    eq_bound,
    frob,
    matrices_equal,
    matrix_exp,
    rank,
    solve_left,
    solve_right,
)
from .errors import (
    NonexistentInverseError,
    NumericalError,
    ShapeError,
    SpectrumError,
)
from .ginv import drazin_inverse, group_inverse, inner_inverse, moore_penrose

__all__ = [
    "PqProblem",
    "ExistenceReport",
    "PqResult",
    "diagnose",
    "matrix_with_range_kernel",
    "outer_inverse",
    "outer_inverse_strict",
    "one_two_inverse",
    "one_two_inverse_strict",
    "group_formula",
    "inner_formula",
    "limit_formula",
    "integral_formula",
    "moore_penrose_as_outer",
    "drazin_as_outer",
    "DEFAULT_LAMBDA_SCHEDULE",
]

DEFAULT_LAMBDA_SCHEDULE = tuple(10.0 ** (-k) for k in range(2, 9))


def _snap_zero_idempotent(m: np.ndarray) -> np.ndarray:
    """Replace a numerically-zero idempotent by the exact zero matrix.

    A nonzero idempotent has spectral norm at least 1, so anything this
    small can only be cancellation noise standing in for 0; snapping it
    keeps the relative rank cutoff from reading noise as full rank.
    """
    return np.zeros_like(m) if frob(m) < 0.5 else m


@dataclass(frozen=True)
class PqProblem:
    """A square matrix with two prescribed idempotents and tolerances."""

    a: np.ndarray
    p: np.ndarray
    q: np.ndarray
    tol: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        a = as_matrix(self.a, "a")
        p = as_matrix(self.p, "p")
        q = as_matrix(self.q, "q")
        if a.shape[0] != a.shape[1]:
            raise ShapeError(f"a must be square, got shape {a.shape}")
        if p.shape != a.shape or q.shape != a.shape:
            raise ShapeError(
                f"a, p, q must share one shape, got {a.shape}, {p.shape}, {q.shape}"
            )
        for name, m in (("p", p), ("q", q)):
            residual = frob(m @ m - m)
            if residual > eq_bound(m, m, self.tol):
                raise ValueError(
                    f"{name} fails {name}² = {name} (residual {residual:.3e})"
                )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "p", _snap_zero_idempotent(p))
        object.__setattr__(self, "q", _snap_zero_idempotent(q))

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.n, dtype=np.complex128)

    @property
    def one_minus_q(self) -> np.ndarray:
        return _snap_zero_idempotent(self.identity - self.q)

    @property
    def one_minus_p(self) -> np.ndarray:
        return _snap_zero_idempotent(self.identity - self.p)


@dataclass(frozen=True)
class ExistenceReport:
    """Side-by-side verdicts of every existence criterion.

    The boolean fields are computed independently of each other, so
    ``equivalence_consistent`` is a genuine cross-check of the theory
    rather than a tautology.  ``fragile`` flags verdicts that flip when
    the rank threshold moves by a factor of ten either way.
    """

    ker_cap_ranp_trivial: bool
    direct_sum: bool
    image_match: bool
    cond5: bool
    cond6_t: np.ndarray | None
    cond6_s: np.ndarray | None
    strict_exists: bool
    l_exists: bool
    l12_exists: bool
    strict12_exists: bool
    dim_ran_p: int
    dim_ran_q: int
    rank_a: int
    fragile: bool
    tol: Tolerances = field(repr=False, default=DEFAULT_TOL)

    @property
    def cond6(self) -> bool:
        return self.cond6_t is not None and self.cond6_s is not None

    @property
    def equivalence_consistent(self) -> bool:
        """All equivalent formulations of subspace-outer existence agree."""
        return (
            self.l_exists
            == (self.direct_sum and self.ker_cap_ranp_trivial)
            == self.cond5
            == self.cond6
        )

    def booleans(self) -> dict[str, bool]:
        return {
            "ker_cap_ranp_trivial": self.ker_cap_ranp_trivial,
            "direct_sum": self.direct_sum,
            "image_match": self.image_match,
            "cond5": self.cond5,
            "cond6": self.cond6,
            "strict_exists": self.strict_exists,
            "l_exists": self.l_exists,
            "l12_exists": self.l12_exists,
            "strict12_exists": self.strict12_exists,
        }

    def to_json_dict(self) -> dict:
        out: dict = dict(sorted(self.booleans().items()))
        out["dims"] = {
            "dim_ran_p": self.dim_ran_p,
            "dim_ran_q": self.dim_ran_q,
            "rank_a": self.rank_a,
        }
        out["fragile"] = self.fragile
        out["equivalence_consistent"] = self.equivalence_consistent
        out["tolerances"] = {
            "rank_rtol": self.tol.rank_rtol,
            "eq_atol": self.tol.eq_atol,
            "eq_rtol": self.tol.eq_rtol,
            "conv_tol": self.tol.conv_tol,
        }
        return out


@dataclass(frozen=True)
class PqResult:
    """A computed inverse, how it was computed, and its residuals."""

    kind: str  # outer2 | outer2l | one_two_l | one_two_strict
    b: np.ndarray
    route: str
    residuals: dict[str, float]


def matrix_with_range_kernel(p, q, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """A matrix w with Ran(w) = Ran(p) and Ker(w) = Ran(q).

    Built as U N^H from an orthonormal basis U of Ran(p) and an
    orthonormal basis N of the orthogonal complement of Ran(q).  Such a
    w exists exactly when dim Ran(p) + dim Ran(q) equals the ambient
    dimension; otherwise NonexistentInverseError is raised.
    """
    p = as_matrix(p, "p")
    q = as_matrix(q, "q")
    if p.shape != q.shape or p.shape[0] != p.shape[1]:
        raise ShapeError(f"p and q must be square of one size, got {p.shape}, {q.shape}")
    n = p.shape[0]
    ran_p = sub.range_of(p, tol)
    ran_q = sub.range_of(q, tol)
    if ran_p.dim + ran_q.dim != n:
        raise NonexistentInverseError(
            "dimension obstruction: dim Ran(p) + dim Ran(q) = "
            f"{ran_p.dim} + {ran_q.dim} != {n}"
        )
    co_q = ran_q.complement(tol)
    return ran_p.basis @ co_q.basis.conj().T


def _candidate(prob: PqProblem, tol: Tolerances) -> tuple[np.ndarray | None, np.ndarray | None, str]:
    """Build and validate the subspace-outer candidate.

    Returns (w, b, "") on success or (None, None, reason) when the
    inverse does not exist.  Validation checks the defining equations
    directly, so this is the definitional existence test, independent of
    the subspace criteria used by :func:`diagnose`.
    """
    try:
        w = matrix_with_range_kernel(prob.p, prob.q, tol)
    except NonexistentInverseError as exc:
        return None, None, exc.reason
    aw = prob.a @ w
    g = group_inverse(aw, tol)
    if g is None:
        return None, None, "aw is not group invertible (rank(aw)² drops)"
    b = w @ g
    if not matrices_equal(b @ prob.a @ b, b, tol):
        return None, None, "candidate fails b a b = b"
    if not sub.equals(sub.range_of(b, tol), sub.range_of(prob.p, tol), tol):
        return None, None, "candidate fails Ran(b) = Ran(p)"
    if not sub.equals(sub.kernel_of(b, tol), sub.range_of(prob.q, tol), tol):
        return None, None, "candidate fails Ker(b) = Ran(q)"
    return w, b, ""


def _strict_residuals(prob: PqProblem, b: np.ndarray) -> tuple[float, float]:
    return frob(b @ prob.a - prob.p), frob(prob.a @ b - prob.one_minus_q)


def _strict_holds(prob: PqProblem, b: np.ndarray, tol: Tolerances) -> bool:
    ba = b @ prob.a
    ab = prob.a @ b
    return (
        frob(ba - prob.p) <= eq_bound(ba, prob.p, tol)
        and frob(ab - prob.one_minus_q) <= eq_bound(ab, prob.one_minus_q, tol)
    )


def _booleans_at(prob: PqProblem, tol: Tolerances) -> dict:
    """All existence criteria at one rank threshold (each computed on its own)."""
    a, p, q = prob.a, prob.p, prob.q
    one_mq = prob.one_minus_q
    one_mp = prob.one_minus_p

    ran_p = sub.range_of(p, tol)
    ran_q = sub.range_of(q, tol)
    ran_a = sub.range_of(a, tol)
    ker_a = sub.kernel_of(a, tol)
    a_ran_p = sub.image(a, ran_p, tol)

    ker_trivial = sub.intersect(ker_a, ran_p, tol).dim == 0
    direct = sub.is_direct_sum_all(a_ran_p, ran_q, tol)
    image_match = sub.equals(a_ran_p, sub.range_of(one_mq, tol), tol)

    m = one_mq @ a @ p
    if frob(m) <= 1e-12 * frob(one_mq) * frob(a) * frob(p):
        m = np.zeros_like(m)  # true zero product, not rank-bearing noise
    cond5 = sub.contains(
        sub.range_of(m.conj().T, tol), sub.range_of(p.conj().T, tol), tol
    ) and sub.contains(sub.range_of(m, tol), sub.range_of(one_mq, tol), tol)

    t_witness = solve_left(m, p, tol)
    s_witness = solve_right(m, one_mq, tol)

    _w, b, _reason = _candidate(prob, tol)
    l_exists = b is not None
    strict = l_exists and _strict_holds(prob, b, tol)

    l12 = sub.is_direct_sum_all(ran_a, ran_q, tol) and sub.is_direct_sum_all(
        ker_a, ran_p, tol
    )
    strict12 = (
        l12
        and sub.equals(ran_a, sub.range_of(one_mq, tol), tol)
        and sub.equals(ker_a, sub.range_of(one_mp, tol), tol)
    )

    return {
        "ker_cap_ranp_trivial": ker_trivial,
        "direct_sum": direct,
        "image_match": image_match,
        "cond5": cond5,
        "cond6_t": t_witness,
        "cond6_s": s_witness,
        "strict_exists": strict,
        "l_exists": l_exists,
        "l12_exists": l12,
        "strict12_exists": strict12,
        "dim_ran_p": ran_p.dim,
        "dim_ran_q": ran_q.dim,
        "rank_a": rank(a, tol),
    }


_FLAG_KEYS = (
    "ker_cap_ranp_trivial",
    "direct_sum",
    "image_match",
    "cond5",
    "strict_exists",
    "l_exists",
    "l12_exists",
    "strict12_exists",
)


def diagnose(prob: PqProblem) -> ExistenceReport:
    """Evaluate every existence criterion and flag tolerance-fragile verdicts.

    Each criterion is computed on its own (subspace dimensions, range
    containments, least-squares witnesses, and the definitional candidate
    construction), so disagreement between fields is detectable.  The
    whole diagnosis is repeated with the rank threshold scaled by 10 and
    by 0.1; any verdict that flips marks the report fragile.
    """
    tol = prob.tol
    base = _booleans_at(prob, tol)

    def _flags(values: dict) -> tuple:
        flags = tuple(values[k] for k in _FLAG_KEYS)
        return flags + (values["cond6_t"] is not None and values["cond6_s"] is not None,)

    fragile = False
    for factor in (10.0, 0.1):
        perturbed = _booleans_at(prob, replace(tol, rank_rtol=tol.rank_rtol * factor))
        if _flags(perturbed) != _flags(base):
            fragile = True
            break

    return ExistenceReport(fragile=fragile, tol=tol, **base)


def _pq_residuals(prob: PqProblem, b: np.ndarray) -> dict[str, float]:
    a, p, q = prob.a, prob.p, prob.q
    one_mq = prob.one_minus_q
    tol = prob.tol
    ba_res, ab_res = _strict_residuals(prob, b)
    return {
        "outer": frob(b @ a @ b - b),
        "inner": frob(a @ b @ a - a),
        "range_gap": sub.gap(sub.range_of(b, tol), sub.range_of(p, tol)),
        "kernel_gap": sub.gap(sub.kernel_of(b, tol), sub.range_of(q, tol)),
        "ba_minus_p": ba_res,
        "ab_minus_1mq": ab_res,
        "fix_left": frob(p @ b - b),
        "gen_left": frob(b @ a @ p - p),
        "fix_right": frob(b @ one_mq - b),
        "gen_right": frob(one_mq @ a @ b - one_mq),
    }


def _route_result(prob: PqProblem, w: np.ndarray, b_group: np.ndarray, route: str) -> tuple[np.ndarray, str]:
    tol = prob.tol
    if route in ("group", "group_formula"):
        return b_group, "group_formula"
    if route in ("inner", "inner_formula"):
        return inner_formula(prob.a, w, tol), "inner_formula"
    if route == "limit":
        b, _trace = limit_formula(prob.a, w, tol=tol)
        return b, "limit"
    if route == "integral":
        b, _tail = integral_formula(prob.a, w, tol=tol)
        return b, "integral"
    raise ValueError(f"unknown route {route!r}")


def outer_inverse(prob: PqProblem, route: str = "group") -> PqResult:
    """The outer inverse with Ran(b) = Ran(p) and Ker(b) = Ran(q).

    Decides existence through the definitional candidate; when a
    representation route other than the group formula is requested the
    candidate is recomputed along it and checked against the group-route
    value at the convergence tolerance.
    """
    tol = prob.tol
    w, b_group, reason = _candidate(prob, tol)
    if b_group is None:
        raise NonexistentInverseError(f"subspace outer inverse does not exist: {reason}")
    b, route_name = _route_result(prob, w, b_group, route)
    if route_name != "group_formula":
        drift = frob(b - b_group)
        if drift > tol.conv_tol * max(1.0, frob(b_group)):
            raise NumericalError(
                f"route '{route_name}' disagrees with the group formula by {drift:.3e}"
            )
    return PqResult("outer2l", b, route_name, _pq_residuals(prob, b))


def outer_inverse_strict(prob: PqProblem, route: str = "group") -> PqResult:
    """The strict outer inverse (b a = p, a b = 1 - q), when it exists.

    The unique subspace-outer candidate is computed first; strictness is
    then decided by testing the two product identities.  Nonexistence is
    reported with the failing residuals attached.
    """
    result = outer_inverse(prob, route)
    b = result.b
    if not _strict_holds(prob, b, prob.tol):
        ba_res, ab_res = _strict_residuals(prob, b)
        raise NonexistentInverseError(
            "strict (p,q)-outer inverse does not exist: "
            f"ba ≠ p (residual {ba_res:.3e}) or ab ≠ 1-q (residual {ab_res:.3e})",
            residuals={"ba_minus_p": ba_res, "ab_minus_1mq": ab_res},
        )
    return PqResult("outer2", b, result.route, result.residuals)


def one_two_inverse(prob: PqProblem, route: str = "group") -> PqResult:
    """The {1,2}-inverse with prescribed range and kernel subspaces."""
    tol = prob.tol
    ran_a = sub.range_of(prob.a, tol)
    ker_a = sub.kernel_of(prob.a, tol)
    broken = []
    if not sub.is_direct_sum_all(ran_a, sub.range_of(prob.q, tol), tol):
        broken.append("C^n = Ran(a) ∔ Ran(q)")
    if not sub.is_direct_sum_all(ker_a, sub.range_of(prob.p, tol), tol):
        broken.append("C^n = Ker(a) ∔ Ran(p)")
    if broken:
        raise NonexistentInverseError(
            "decomposition " + " and ".join(broken) + " fails"
        )
    result = outer_inverse(prob, route)
    inner_res = result.residuals["inner"]
    if inner_res > eq_bound(prob.a, prob.a, tol):
        raise NumericalError(
            f"a b a = a failed (residual {inner_res:.3e}) although both "
            "decompositions hold"
        )
    return PqResult("one_two_l", result.b, result.route, result.residuals)


def one_two_inverse_strict(prob: PqProblem, route: str = "group") -> PqResult:
    """The {1,2}-inverse with b a = p and a b = 1 - q, when it exists."""
    tol = prob.tol
    ran_a = sub.range_of(prob.a, tol)
    ker_a = sub.kernel_of(prob.a, tol)
    if not sub.equals(ran_a, sub.range_of(prob.one_minus_q, tol), tol):
        raise NonexistentInverseError("subspace equality Ran(a) = Ran(1-q) fails")
    if not sub.equals(ker_a, sub.range_of(prob.one_minus_p, tol), tol):
        raise NonexistentInverseError("subspace equality Ker(a) = Ran(1-p) fails")
    result = one_two_inverse(prob, route)
    if not _strict_holds(prob, result.b, tol):
        ba_res, ab_res = _strict_residuals(prob, result.b)
        raise NumericalError(
            "product identities failed although the subspace equalities hold: "
            f"|ba-p|={ba_res:.3e}, |ab-(1-q)|={ab_res:.3e}"
        )
    return PqResult("one_two_strict", result.b, result.route, result.residuals)


# ---------------------------------------------------------------------------
# Representation routes.  Each takes the raw (a, w) pair so it can be
# exercised and cross-validated independently of the problem wrapper.
# ---------------------------------------------------------------------------


def _check_w_preconditions(a: np.ndarray, w: np.ndarray, tol: Tolerances):
    ker_a = sub.kernel_of(a, tol)
    ran_w = sub.range_of(w, tol)
    if sub.intersect(ker_a, ran_w, tol).dim != 0:
        raise NonexistentInverseError("Ker(a) ∩ Ran(w) ≠ {0}")


def group_formula(a, w, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """w (a w)^#, cross-checked against (w a)^# w and the anchor identities.

    The anchor identities  w a w c = w  and  b a w c = b  with
    c = (a w)^# pin down that w really carries the prescribed range and
    kernel; their failure indicates a precondition violation rather than
    roundoff, so it raises.
    """
    a = as_matrix(a, "a")
    w = as_matrix(w, "w")
    _check_w_preconditions(a, w, tol)
    aw = a @ w
    wa = w @ a
    g_aw = group_inverse(aw, tol)
    g_wa = group_inverse(wa, tol)
    if g_aw is None or g_wa is None:
        raise NonexistentInverseError("aw (or wa) has no group inverse")
    b = w @ g_aw
    b_alt = g_wa @ w
    if not matrices_equal(b, b_alt, tol):
        raise NumericalError(
            f"(wa)^# w and w (aw)^# disagree by {frob(b - b_alt):.3e}"
        )
    c = g_aw
    anchor = w @ aw @ c
    if not matrices_equal(anchor, w, tol):
        raise NumericalError(f"w a w c = w failed (residual {frob(anchor - w):.3e})")
    anchor_b = b @ aw @ c
    if not matrices_equal(anchor_b, b, tol):
        raise NumericalError(f"b a w c = b failed (residual {frob(anchor_b - b):.3e})")
    return b


def inner_formula(a, w, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """w (w a w)^- w with the canonical inner inverse.

    Agreement with the group formula, and the explicit inner-inverse
    witness x = a ((w a)^#)^2 for w a w, are both asserted.
    """
    a = as_matrix(a, "a")
    w = as_matrix(w, "w")
    b_ref = group_formula(a, w, tol)
    m = w @ a @ w
    b = w @ inner_inverse(m, tol) @ w
    if not matrices_equal(b, b_ref, tol):
        raise NumericalError(
            f"inner formula disagrees with group formula by {frob(b - b_ref):.3e}"
        )
    g_wa = group_inverse(w @ a, tol)
    if g_wa is None:  # pragma: no cover - group_formula above already validated
        raise NonexistentInverseError("wa has no group inverse")
    witness = a @ g_wa @ g_wa
    if not matrices_equal(m @ witness @ m, m, tol):
        raise NumericalError("explicit witness failed (w a w) x (w a w) = w a w")
    return b


def limit_formula(
    a,
    w,
    lambdas=None,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[np.ndarray, list[tuple[float, float]]]:
    """Resolvent limit  w (s + a w)^-1  along a decreasing shift schedule.

    Returns the value at the smallest shift together with the trace of
    Cauchy differences (shift, ||X_k - X_{k-1}||_F).  Each shift must
    keep a relative margin from the spectrum of -a w; the trace must not
    grow from first to last entry.
    """
    a = as_matrix(a, "a")
    w = as_matrix(w, "w")
    if a.shape[1] != w.shape[0] or a.shape[0] != w.shape[1]:
        raise ShapeError(f"incompatible shapes a {a.shape}, w {w.shape}")
    schedule = [float(s) for s in (DEFAULT_LAMBDA_SCHEDULE if lambdas is None else lambdas)]
    if not schedule or any(s <= 0 for s in schedule):
        raise ValueError("shift schedule must be positive")
    if any(s1 <= s2 for s1, s2 in zip(schedule, schedule[1:])):
        raise ValueError("shift schedule must be strictly decreasing")

    aw = a @ w
    spectrum = np.linalg.eigvals(-aw)
    ident = np.eye(aw.shape[0], dtype=np.complex128)
    for s in schedule:
        margin = float(np.min(np.abs(spectrum - s))) if spectrum.size else np.inf
        if margin <= tol.conv_tol * s:
            raise SpectrumError(
                f"shift {s:.3e} is within {margin:.3e} of the spectrum of -aw"
            )

    trace: list[tuple[float, float]] = []
    current = None
    for s in schedule:
        try:
            resolvent = np.linalg.solve(s * ident + aw, ident)
        except np.linalg.LinAlgError as exc:
            raise SpectrumError(f"shifted system singular at shift {s:.3e}") from exc
        x = w @ resolvent
        if current is not None:
            trace.append((s, frob(x - current)))
        current = x
    if len(trace) >= 2 and trace[-1][1] > trace[0][1]:
        raise NumericalError(
            "Cauchy differences are not shrinking along the shift schedule"
        )
    return current, trace


def _integral_spectrum(aw: np.ndarray, tol: Tolerances) -> tuple[float, np.ndarray]:
    """Validate Re > 0 on the nonzero spectrum of aw; return the decay rate."""
    eigs = np.linalg.eigvals(aw)
    scale = float(np.max(np.abs(eigs))) if eigs.size else 0.0
    zero_thr = tol.conv_tol * max(1.0, scale)
    nonzero = eigs[np.abs(eigs) > zero_thr]
    if nonzero.size == 0:
        raise SpectrumError("aw has no nonzero spectrum; the integrand cannot decay")
    worst = float(np.min(nonzero.real))
    if worst <= 0.0:
        raise SpectrumError(
            f"aw has a nonzero eigenvalue with Re = {worst:.3e} <= 0; "
            "the exponential integral does not converge"
        )
    return worst, nonzero


def integral_formula(
    a,
    w,
    horizon: float | None = None,
    steps: int | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[np.ndarray, float]:
    """Exponential integral  integral_0^T w exp(-(a w) t) dt.

    Composite Simpson quadrature on a uniform grid with one Richardson
    extrapolation step (fine vs half-resolution sums share the same
    exponential march).  Requires Re > 0 on the nonzero spectrum of
    ``a w``, and that w annihilates the non-decaying spectral part.
    Returns the estimate and the analytic tail bound
    ||w exp(-(a w) T)||_F / alpha, which must come in under conv_tol.
    """
    a = as_matrix(a, "a")
    w = as_matrix(w, "w")
    if a.shape[1] != w.shape[0] or a.shape[0] != w.shape[1]:
        raise ShapeError(f"incompatible shapes a {a.shape}, w {w.shape}")
    aw = a @ w
    alpha, nonzero = _integral_spectrum(aw, tol)

    g_aw = group_inverse(aw, tol)
    if g_aw is None:
        raise SpectrumError("aw is not group invertible; non-decaying part persists")
    static_part = w @ (np.eye(aw.shape[0], dtype=np.complex128) - aw @ g_aw)
    if frob(static_part) > eq_bound(w, w, tol):
        raise SpectrumError(
            "w does not annihilate the non-decaying spectral part of aw "
            f"(residual {frob(static_part):.3e})"
        )

    min_horizon = float(np.log(1.0 / tol.conv_tol) / alpha)
    if horizon is None:
        # aim the raw tail at 1e-2 * conv_tol so conditioning has headroom
        target = 0.01 * tol.conv_tol * alpha / max(1.0, frob(w))
        horizon = float(np.log(1.0 / target) / alpha)
    horizon = float(horizon)
    if horizon < min_horizon:
        raise ValueError(
            f"horizon {horizon:.3e} is below the minimum {min_horizon:.3e} "
            "required by the convergence tolerance"
        )

    sigma_max = float(np.max(np.abs(nonzero)))
    if steps is None:
        steps = int(min(8192, max(64, np.ceil(horizon * max(8.0, 4.0 * sigma_max)))))
    steps = int(steps)
    if steps < 2:
        raise ValueError("steps must be at least 2")
    if steps % 2:
        steps += 1

    # march exp(-(aw) t) at half-panel resolution; both Simpson sums reuse it
    h = horizon / steps
    half_step = matrix_exp(-aw * (h / 2.0))
    values = []
    cursor = np.eye(aw.shape[0], dtype=np.complex128)
    for _ in range(2 * steps + 1):
        values.append(w @ cursor)
        cursor = cursor @ half_step
    tail_norm = frob(values[-1])

    fine = sum(
        (h / 6.0) * (values[2 * i] + 4.0 * values[2 * i + 1] + values[2 * i + 2])
        for i in range(steps)
    )
    coarse = sum(
        (h / 3.0) * (values[4 * i] + 4.0 * values[4 * i + 2] + values[4 * i + 4])
        for i in range(steps // 2)
    )
    estimate = (16.0 * fine - coarse) / 15.0

    tail_bound = tail_norm / alpha
    if tail_bound > tol.conv_tol:
        raise NumericalError(
            f"tail bound {tail_bound:.3e} exceeds conv_tol {tol.conv_tol:.3e}; "
            "increase the horizon"
        )
    return estimate, tail_bound


# ---------------------------------------------------------------------------
# Classical inverses recovered as strict prescribed-idempotent inverses.
# ---------------------------------------------------------------------------


def moore_penrose_as_outer(a, tol: Tolerances = DEFAULT_TOL) -> PqResult:
    """Recover a† as the strict outer inverse for p = a†a, q = 1 - aa†."""
    a = as_matrix(a, "a")
    if a.shape[0] != a.shape[1]:
        raise ShapeError("square matrix required")
    pinv = moore_penrose(a, tol)
    ident = np.eye(a.shape[0], dtype=np.complex128)
    prob = PqProblem(a, pinv @ a, ident - a @ pinv, tol)
    result = outer_inverse_strict(prob)
    drift = frob(result.b - pinv)
    if drift > eq_bound(result.b, pinv, tol):
        raise NumericalError(
            f"strict outer inverse deviates from the Moore-Penrose inverse by {drift:.3e}"
        )
    return result


def drazin_as_outer(a, tol: Tolerances = DEFAULT_TOL) -> PqResult:
    """Recover a^D as the strict outer inverse for p = a a^D, q = 1 - a a^D."""
    a = as_matrix(a, "a")
    if a.shape[0] != a.shape[1]:
        raise ShapeError("square matrix required")
    dz = drazin_inverse(a, tol)
    ident = np.eye(a.shape[0], dtype=np.complex128)
    prob = PqProblem(a, ident - dz.spectral_idempotent, dz.spectral_idempotent, tol)
    result = outer_inverse_strict(prob)
    drift = frob(result.b - dz.inverse)
    if drift > eq_bound(result.b, dz.inverse, tol):
        raise NumericalError(
            f"strict outer inverse deviates from the Drazin inverse by {drift:.3e}"
        )
    return result
