import numpy as np
import pytest

from pqinv.densela import DEFAULT_TOL, frob, inverse
from pqinv.errors import NonexistentInverseError, ShapeError, SpectrumError
from pqinv.ginv import drazin_inverse, moore_penrose
from pqinv.prescribed import (
    PqProblem,
    diagnose,
    drazin_as_outer,
    group_formula,
    inner_formula,
    integral_formula,
    limit_formula,
    matrix_with_range_kernel,
    moore_penrose_as_outer,
    one_two_inverse,
    one_two_inverse_strict,
    outer_inverse,
    outer_inverse_strict,
)
from pqinv.subspace import equals, kernel_of, range_of
from pqinv.verify import (
    diagonalizable_instance,
    guaranteed_instance,
    random_idempotent,
    varied_index_matrix,
    varied_rank_matrix,
)

A22 = np.array([[0, 0], [1, 0]], dtype=complex)
P22 = np.array([[1, 1], [0, 0]], dtype=complex)
ONE_MQ22 = np.array([[0, 1], [0, 1]], dtype=complex)
B22 = np.array([[0, 1], [0, 0]], dtype=complex)
Q22 = np.eye(2) - ONE_MQ22
W22 = np.array([[0, 1], [0, 0]], dtype=complex)


def counterexample_problem():
    return PqProblem(A22, P22, Q22)


def _cnormal(rng, n, m):
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


class TestPqProblem:
    def test_non_idempotent_p_rejected(self):
        with pytest.raises(ValueError, match="p fails"):
            PqProblem(np.eye(2), np.array([[1, 1], [1, 1]], dtype=complex), np.zeros((2, 2)))

    def test_non_idempotent_q_rejected(self):
        with pytest.raises(ValueError, match="q fails"):
            PqProblem(np.eye(2), np.eye(2), 2 * np.eye(2))

    def test_rectangular_rejected(self):
        with pytest.raises(ShapeError):
            PqProblem(np.ones((2, 3)), np.eye(2), np.eye(2))

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ShapeError):
            PqProblem(np.eye(3), np.eye(2), np.eye(2))

    def test_numerically_zero_idempotent_snaps(self):
        noise = 1e-14 * np.ones((2, 2))
        prob = PqProblem(np.eye(2), np.eye(2), noise)
        assert frob(prob.q) == 0.0


class TestDiagnose:
    def test_counterexample_data(self):
        rep = diagnose(counterexample_problem())
        assert rep.ker_cap_ranp_trivial
        assert rep.direct_sum
        assert not rep.image_match
        assert rep.l_exists
        assert not rep.strict_exists
        assert rep.cond5 and rep.cond6
        assert rep.l12_exists and not rep.strict12_exists
        assert rep.equivalence_consistent
        assert not rep.fragile
        assert (rep.dim_ran_p, rep.dim_ran_q, rep.rank_a) == (1, 1, 1)

    def test_image_match_without_strict(self):
        one_mq = np.diag([0.0, 1.0]).astype(complex)
        rep = diagnose(PqProblem(A22, P22, np.eye(2) - one_mq))
        assert rep.image_match
        assert not rep.strict_exists
        assert rep.l_exists

    def test_identity_instance(self):
        # b = diag(1,0) satisfies all three strict equations by hand, so
        # every outer-inverse criterion holds; the reflexive kinds need
        # a b a = a, which forces b = 1 here, so they cannot hold
        rep = diagnose(PqProblem(np.eye(2), np.diag([1.0, 0.0]), np.diag([0.0, 1.0])))
        flags = rep.booleans()
        assert flags["strict_exists"] and flags["l_exists"]
        assert flags["ker_cap_ranp_trivial"] and flags["direct_sum"]
        assert flags["image_match"] and flags["cond5"] and flags["cond6"]
        assert not flags["l12_exists"] and not flags["strict12_exists"]

    def test_witnesses_solve_their_systems(self):
        prob = counterexample_problem()
        rep = diagnose(prob)
        m = prob.one_minus_q @ prob.a @ prob.p
        assert frob(rep.cond6_t @ m - prob.p) <= 1e-8
        assert frob(m @ rep.cond6_s - prob.one_minus_q) <= 1e-8

    def test_json_dict_is_complete(self):
        doc = diagnose(counterexample_problem()).to_json_dict()
        assert doc["strict_exists"] is False
        assert doc["l_exists"] is True
        assert doc["fragile"] is False
        assert doc["tolerances"]["rank_rtol"] == DEFAULT_TOL.rank_rtol
        assert doc["dims"] == {"dim_ran_p": 1, "dim_ran_q": 1, "rank_a": 1}

    def test_knife_edge_rank_is_flagged_fragile(self):
        # one singular value of p sits between rank_rtol and 10 * rank_rtol,
        # so the dimension verdicts flip when the threshold moves
        p = np.diag([1.0, 3e-10, 0.0]).astype(complex)
        q = np.diag([0.0, 0.0, 1.0]).astype(complex)
        rep = diagnose(PqProblem(np.eye(3), p, q))
        assert rep.fragile


class TestMatrixWithRangeKernel:
    def test_complementary_diagonal_idempotents(self):
        w = matrix_with_range_kernel(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        assert frob(w - np.diag([1.0, 0.0])) <= 1e-14

    def test_full_and_trivial(self):
        w = matrix_with_range_kernel(np.eye(2), np.zeros((2, 2)))
        assert range_of(w).dim == 2
        assert kernel_of(w).dim == 0

    def test_equal_range_and_kernel(self):
        p = np.diag([1.0, 0.0]).astype(complex)
        w = matrix_with_range_kernel(p, p)
        assert equals(range_of(w), range_of(p))
        assert equals(kernel_of(w), range_of(p))

    def test_dimension_obstruction(self):
        with pytest.raises(NonexistentInverseError, match="dimension obstruction"):
            matrix_with_range_kernel(np.eye(2), np.eye(2))

    def test_postconditions_random(self, rng):
        for _ in range(15):
            n = int(rng.integers(1, 8))
            k = int(rng.integers(0, n + 1))
            p = random_idempotent(rng, n, k)
            q = random_idempotent(rng, n, n - k)
            w = matrix_with_range_kernel(p, q)
            assert equals(range_of(w), range_of(p))
            assert equals(kernel_of(w), range_of(q))


class TestOuterInverse:
    def test_counterexample_value(self):
        result = outer_inverse(counterexample_problem())
        assert frob(result.b - B22) <= 1e-12
        assert result.kind == "outer2l"
        assert result.route == "group_formula"
        assert result.residuals["outer"] <= 1e-12
        assert result.residuals["range_gap"] <= 1e-12
        assert result.residuals["kernel_gap"] <= 1e-12

    def test_identity_matrix_gives_the_idempotent(self, rng):
        # with a = 1 the inverse is the oblique projector p itself
        for _ in range(5):
            n = int(rng.integers(2, 7))
            p = random_idempotent(rng, n)
            one_minus_p = np.eye(n) - p
            prob = PqProblem(np.eye(n), p, one_minus_p)
            result = outer_inverse(prob)
            assert frob(result.b - p) <= 1e-9 * (1 + frob(p))

    def test_variant_with_image_match(self):
        prob = PqProblem(A22, P22, np.eye(2) - np.diag([0.0, 1.0]))
        result = outer_inverse(prob)
        assert frob(result.b - B22) <= 1e-12
        assert frob(result.b @ A22 - np.diag([1.0, 0.0])) <= 1e-12
        assert result.residuals["ba_minus_p"] > 0.5

    def test_nonexistent_dimension(self):
        prob = PqProblem(np.eye(2), np.eye(2), np.eye(2))
        with pytest.raises(NonexistentInverseError, match="dimension obstruction"):
            outer_inverse(prob)

    def test_nonexistent_kernel_overlap(self):
        # Ker(a) = span e2 = Ran(p): candidate fails its defining equations
        prob = PqProblem(
            np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), np.diag([1.0, 0.0])
        )
        with pytest.raises(NonexistentInverseError):
            outer_inverse(prob)

    def test_equation_set_always_holds(self, rng):
        # the four product identities characterizing the subspace inverse
        for _ in range(15):
            inst = guaranteed_instance(rng, int(rng.integers(1, 8)))
            prob = PqProblem(inst["a"], inst["p"], inst["q"])
            res = outer_inverse(prob)
            bound = 1e-8 * (1 + frob(res.b)) * (1 + frob(prob.a))
            assert res.residuals["fix_left"] <= bound
            assert res.residuals["fix_right"] <= bound
            assert res.residuals["gen_left"] <= bound
            assert res.residuals["gen_right"] <= bound

    def test_oracle_agreement(self, rng):
        for _ in range(15):
            inst = guaranteed_instance(rng, int(rng.integers(1, 8)))
            prob = PqProblem(inst["a"], inst["p"], inst["q"])
            res = outer_inverse(prob)
            assert frob(res.b - inst["b_ref"]) <= 1e-7 * (1 + frob(inst["b_ref"]))

    def test_degenerate_trivial_p(self):
        # Ran(p) = 0 forces b = 0, which requires Ran(q) to be everything
        n = 3
        prob = PqProblem(np.eye(n), np.zeros((n, n)), np.eye(n))
        result = outer_inverse(prob)
        assert frob(result.b) == 0.0

    def test_degenerate_invertible(self, rng):
        a = _cnormal(rng, 4, 4) + 3 * np.eye(4)
        prob = PqProblem(a, np.eye(4), np.zeros((4, 4)))
        result = outer_inverse(prob)
        assert frob(result.b - inverse(a)) <= 1e-9 * frob(inverse(a))

    def test_alternate_routes_agree(self):
        prob = counterexample_problem()
        for route in ("inner", "limit", "integral"):
            res = outer_inverse(prob, route=route)
            assert frob(res.b - B22) <= 1e-7
            assert res.route in ("inner_formula", "limit", "integral")


class TestOuterInverseStrict:
    def test_counterexample_nonexistence_names_residuals(self):
        with pytest.raises(NonexistentInverseError) as failure:
            outer_inverse_strict(counterexample_problem())
        assert "ba" in str(failure.value)
        assert failure.value.residuals["ba_minus_p"] == pytest.approx(1.0)

    def test_identity_case(self):
        prob = PqProblem(np.eye(2), np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
        result = outer_inverse_strict(prob)
        assert frob(result.b - np.diag([1.0, 0.0])) <= 1e-12
        assert result.kind == "outer2"

    def test_penrose_idempotents_give_pseudo_inverse(self):
        pinv = moore_penrose(A22)
        prob = PqProblem(A22, pinv @ A22, np.eye(2) - A22 @ pinv)
        result = outer_inverse_strict(prob)
        assert frob(result.b - pinv) <= 1e-12

    def test_external_witness_with_strict_products(self):
        # w chosen so that w a = p and a w = 1 - q; the representation
        # formula through this w must agree with the strict computation
        p = np.diag([1.0, 0.0]).astype(complex)
        q = np.diag([1.0, 0.0]).astype(complex)
        w = np.array([[0, 1], [0, 0]], dtype=complex)
        assert frob(w @ A22 - p) == 0.0
        assert frob(A22 @ w - (np.eye(2) - q)) == 0.0
        direct = outer_inverse_strict(PqProblem(A22, p, q))
        assert frob(group_formula(A22, w) - direct.b) <= 1e-12


class TestOneTwoInverse:
    def test_identity(self):
        prob = PqProblem(np.eye(2), np.eye(2), np.zeros((2, 2)))
        assert frob(one_two_inverse(prob).b - np.eye(2)) <= 1e-12

    def test_counterexample_data_is_reflexive(self):
        result = one_two_inverse(counterexample_problem())
        assert frob(result.b - B22) <= 1e-12
        assert result.residuals["inner"] <= 1e-12
        assert result.kind == "one_two_l"

    def test_dimension_failure_named(self):
        prob = PqProblem(np.diag([1.0, 0.0]), np.eye(2), np.zeros((2, 2)))
        with pytest.raises(NonexistentInverseError, match="decomposition"):
            one_two_inverse(prob)


class TestOneTwoInverseStrict:
    def test_identity(self):
        prob = PqProblem(np.eye(2), np.eye(2), np.zeros((2, 2)))
        assert frob(one_two_inverse_strict(prob).b - np.eye(2)) <= 1e-12

    def test_shift_with_matching_subspaces(self):
        prob = PqProblem(A22, np.diag([1.0, 0.0]), np.diag([1.0, 0.0]))
        result = one_two_inverse_strict(prob)
        assert frob(result.b - B22) <= 1e-12
        assert result.kind == "one_two_strict"

    def test_counterexample_fails_subspace_equality(self):
        with pytest.raises(NonexistentInverseError, match="Ran"):
            one_two_inverse_strict(counterexample_problem())


class TestGroupFormula:
    def test_hand_value(self):
        assert frob(group_formula(A22, W22) - B22) <= 1e-12

    def test_identity_with_idempotent(self, rng):
        p = random_idempotent(rng, 4)
        assert frob(group_formula(np.eye(4), p) - p) <= 1e-9 * (1 + frob(p))

    def test_two_sided_agreement_random(self, rng):
        for _ in range(10):
            inst = guaranteed_instance(rng, int(rng.integers(1, 8)))
            b = group_formula(inst["a"], inst["w"])
            assert frob(b - inst["b_ref"]) <= 1e-7 * (1 + frob(inst["b_ref"]))

    def test_kernel_overlap_rejected(self):
        with pytest.raises(NonexistentInverseError, match="Ker"):
            group_formula(np.diag([0.0, 1.0]), np.eye(2))


class TestInnerFormula:
    def test_hand_value(self):
        assert frob(inner_formula(A22, W22) - B22) <= 1e-12

    def test_identity(self):
        assert frob(inner_formula(np.eye(2), np.eye(2)) - np.eye(2)) <= 1e-14

    def test_agreement_random(self, rng):
        for _ in range(10):
            inst = guaranteed_instance(rng, int(rng.integers(1, 8)))
            b_inner = inner_formula(inst["a"], inst["w"])
            b_group = group_formula(inst["a"], inst["w"])
            assert frob(b_inner - b_group) <= 1e-8 * (1 + frob(b_group))


class TestLimitFormula:
    def test_closed_form_diag_core(self):
        lam = 1e-6
        value, trace = limit_formula(A22, W22, [1e-2, 1e-4, lam])
        expected = np.array([[0, 1.0 / (1.0 + lam)], [0, 0]], dtype=complex)
        assert frob(value - expected) <= 1e-12
        assert frob(value - B22) <= 2 * lam
        assert len(trace) == 2

    def test_identity_limit(self):
        value, _ = limit_formula(np.eye(2), np.eye(2), [1e-2, 1e-5, 1e-8])
        assert frob(value - np.eye(2)) <= 1e-7

    def test_shift_collision_rejected(self):
        a = np.diag([-1e-4, 1.0]).astype(complex)
        with pytest.raises(SpectrumError, match="spectrum"):
            limit_formula(a, np.eye(2))

    def test_trace_decreases_linearly(self, rng):
        inst = diagonalizable_instance(rng, 5)
        _, trace = limit_formula(inst["a"], inst["w"])
        errors = [e for _, e in trace]
        assert errors[-1] < errors[0]

    def test_increasing_schedule_rejected(self):
        with pytest.raises(ValueError):
            limit_formula(np.eye(2), np.eye(2), [1e-8, 1e-2])


class TestIntegralFormula:
    def test_closed_form_diag_core(self):
        value, tail = integral_formula(A22, W22)
        assert frob(value - B22) <= 1e-8
        assert tail <= 1e-8

    def test_identity(self):
        value, _ = integral_formula(np.eye(2), np.eye(2))
        assert frob(value - np.eye(2)) <= 1e-8

    def test_rotation_spectrum_rejected(self):
        rotation = np.array([[0, 1], [-1, 0]], dtype=complex)
        with pytest.raises(SpectrumError, match="Re"):
            integral_formula(rotation, np.eye(2))

    def test_nilpotent_rejected(self):
        with pytest.raises(SpectrumError):
            integral_formula(np.array([[0, 1], [0, 0]], dtype=complex), np.eye(2))

    def test_static_part_must_vanish(self):
        # w keeps the zero eigendirection of aw alive
        with pytest.raises(SpectrumError, match="decay"):
            integral_formula(np.diag([0.0, 1.0]), np.eye(2))

    def test_short_horizon_rejected(self):
        with pytest.raises(ValueError, match="horizon"):
            integral_formula(np.eye(2), np.eye(2), horizon=1.0)

    def test_agreement_random(self, rng):
        for _ in range(5):
            inst = diagonalizable_instance(rng, int(rng.integers(2, 7)))
            value, tail = integral_formula(inst["a"], inst["w"])
            assert frob(value - inst["b_ref"]) <= 1e-6 * (1 + frob(inst["b_ref"]))
            assert tail <= 1e-8


class TestUniqueness:
    def test_witness_independence(self, rng):
        for _ in range(10):
            inst = guaranteed_instance(rng, int(rng.integers(1, 8)))
            p_basis = range_of(inst["p"]).basis
            co_q = range_of(inst["q"]).complement().basis
            d = p_basis.shape[1]
            results = []
            for _ in range(2):
                mix = _cnormal(rng, d, d) + 2 * np.eye(d)
                w = p_basis @ mix @ co_q.conj().T
                results.append(group_formula(inst["a"], w))
            assert frob(results[0] - results[1]) <= 1e-8 * (1 + frob(results[0]))


class TestSpecialCases:
    def test_mp_shift(self):
        # the pseudo-inverse of the shift is its adjoint, [[0,1],[0,0]]
        result = moore_penrose_as_outer(A22)
        assert frob(result.b - B22) <= 1e-12
        assert frob(result.b - moore_penrose(A22)) <= 1e-12

    def test_mp_identity(self):
        assert frob(moore_penrose_as_outer(np.eye(3)).b - np.eye(3)) <= 1e-12

    def test_mp_random(self, rng):
        for _ in range(15):
            a = varied_rank_matrix(rng, int(rng.integers(1, 8)))
            result = moore_penrose_as_outer(a)
            assert frob(result.b - moore_penrose(a)) <= 1e-9

    def test_drazin_idempotent(self):
        idem = np.array([[1, 1], [0, 0]], dtype=complex)
        result = drazin_as_outer(idem)
        assert frob(result.b - idem) <= 1e-12

    def test_drazin_invertible(self, rng):
        a = _cnormal(rng, 4, 4) + 3 * np.eye(4)
        result = drazin_as_outer(a)
        assert frob(result.b - inverse(a)) <= 1e-9 * frob(inverse(a))

    def test_drazin_nilpotent(self):
        result = drazin_as_outer(np.array([[0, 1], [0, 0]], dtype=complex))
        assert frob(result.b) == 0.0

    def test_drazin_random_indices(self, rng):
        for _ in range(15):
            inst = varied_index_matrix(rng, int(rng.integers(1, 8)))
            result = drazin_as_outer(inst["a"])
            dz = drazin_inverse(inst["a"])
            assert frob(result.b - dz.inverse) <= 1e-8 * (1 + frob(dz.inverse))
