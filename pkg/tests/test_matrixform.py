import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlaplace.classify import CanonicalType
from qlaplace.equations import HypEquation, PolyEquation
from qlaplace.errors import ExcludedInput, PreconditionError
from qlaplace.matrixform import (
    SCALAR_TYPE,
    MatrixCanonicalType,
    MatrixClass,
    MatrixEquation,
    canonical_matrices,
    classify_matrix,
    conjugate_to_lower,
    eliminate,
    fundamental_solution,
    inv2,
    mat_mul,
    matrix_class,
    matrix_residual,
    relative_det,
    verify_matrix_case,
)
from qlaplace.qcore import QBase

Q = 0.5
M = MatrixCanonicalType
ALL = list(M)


def crand(rng):
    return complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))


def iterate_y1(meq, v, x):
    """y1 at x, xq, xq^2 for the solution starting from the vector v at x."""
    q = meq.q
    ys = [v]
    for k in range(2):
        A = meq.at(x * q**k)
        y = ys[-1]
        ys.append((A[0][0] * y[0] + A[0][1] * y[1], A[1][0] * y[0] + A[1][1] * y[1]))
    return [y[0] for y in ys]


class TestElimination:
    def test_against_direct_iteration(self):
        # every solution of the system satisfies the eliminated relation
        rng = random.Random(4)
        base = QBase(Q)
        for _ in range(50):
            A0 = ((crand(rng), crand(rng)), (crand(rng), crand(rng)))
            A1 = ((crand(rng), 0), (crand(rng), crand(rng)))
            meq = MatrixEquation(A0, A1, base)
            raw = eliminate(meq).raw
            x = crand(rng)
            y0, y1, y2 = iterate_y1(meq, (crand(rng), crand(rng)), x)
            a, b, c = (sum(co * x**k for k, co in enumerate(p)) for p in raw.polys)
            terms = (a * y2, b * y1, c * y0)
            assert abs(sum(terms)) <= 1e-12 * max(abs(t) for t in terms)

    def test_airy_case(self, base):
        el = eliminate(canonical_matrices(M.M41_QAIRY, None, base))
        assert el.raw.proportional_to(PolyEquation((1,), (0, 1), (-1,), base), 1e-15)
        assert el.gauge is None

    def test_e1_case(self, base):
        t = 0.8
        el = eliminate(canonical_matrices(M.M31_E1, {"t": t}, base))
        assert el.scalar.proportional_to(HypEquation(1, -(t + 1 / t), 1, 0, 0, 0.25, base), 1e-14)

    def test_quadratic_term_is_gauged(self, base):
        el = eliminate(canonical_matrices(M.M1_2PHI1, None, base))
        assert len(el.raw.c) == 3 and el.gauge is not None
        assert isinstance(el.scalar, HypEquation)

    def test_needs_lower_triangular_a1(self, base):
        with pytest.raises(PreconditionError):
            eliminate(MatrixEquation(((1, 0), (0, 1)), ((1, 2), (0, 1)), base))

    def test_conjugation_clears_b12(self, base):
        meq = MatrixEquation(((1, 2), (3, 4)), ((1, 2), (0.5, 1.5)), base)
        lower, P = conjugate_to_lower(meq)
        direct = meq.conjugate(P)
        assert abs(direct.A1[0][1]) <= 1e-14
        assert lower.A1[0][1] == 0


class TestClassification:
    @pytest.mark.parametrize("mtype", ALL)
    def test_canonical_inputs(self, base, mtype):
        cls = classify_matrix(canonical_matrices(mtype, None, base))
        assert cls.mtype is mtype
        if mtype in SCALAR_TYPE:
            assert cls.scalar.ctype is SCALAR_TYPE[mtype]

    def test_m5_note(self, base):
        cls = classify_matrix(MatrixEquation(((0, 1), (0, 0)), ((0, 0), (1, 0)), base))
        assert cls.mtype is M.M5_FIRST_ORDER
        assert cls.note == "A(xq)A(x)=diag(x,xq)"

    def test_generic_is_heine(self, base):
        rng = random.Random(8)
        for _ in range(20):
            A0 = ((crand(rng), crand(rng)), (crand(rng), crand(rng)))
            A1 = ((crand(rng), crand(rng)), (crand(rng), crand(rng)))
            assert classify_matrix(MatrixEquation(A0, A1, base)).mtype is M.M1_2PHI1

    def test_parameters_recovered(self, base):
        t = 0.8
        cls = classify_matrix(canonical_matrices(M.M31_E1, {"t": t}, base))
        assert abs(cls.params["t"] - t) <= 1e-10

    def test_matrix_classes(self):
        assert matrix_class(((1, 0), (0, 1))) is MatrixClass.INVERTIBLE
        assert matrix_class(((1, 0), (0, 0))) is MatrixClass.RANK_ONE
        assert matrix_class(((0, 1), (0, 0))) is MatrixClass.NILPOTENT
        assert matrix_class(((0, 0), (0, 0))) is MatrixClass.ZERO

    @given(st.sampled_from(ALL), st.lists(st.floats(-2, 2), min_size=4, max_size=4),
           st.floats(0.3, 3), st.floats(0.3, 3), st.booleans())
    @settings(max_examples=80, deadline=None)
    def test_invariant_under_moves(self, mtype, p, c, g, invert):
        base = QBase(Q)
        P = ((1 + p[0], p[1]), (p[2], 1 + p[3]))
        det = P[0][0] * P[1][1] - P[0][1] * P[1][0]
        if abs(det) < 0.2:
            return
        meq = canonical_matrices(mtype, None, base).conjugate(P).scale_x(c).power_gauge(g)
        if invert:
            meq = meq.inverted()
        assert classify_matrix(meq).mtype is mtype

    def test_excluded(self, base):
        with pytest.raises(ExcludedInput):
            classify_matrix(MatrixEquation(((0, 0), (0, 0)), ((1, 0), (0, 1)), base))
        with pytest.raises(ExcludedInput):
            classify_matrix(MatrixEquation(((1, 0), (0, 0)), ((2, 0), (0, 0)), base))

    def test_json_round_trip(self, base):
        meq = canonical_matrices(M.M1_2PHI1, None, base)
        data = meq.to_json()
        assert data["A0"][0][0] == [1.0, 0.0]
        assert MatrixEquation.from_json(data) == meq
        assert classify_matrix(meq).to_json()["type"] == "M1_2phi1"


class TestFundamental:
    @pytest.mark.parametrize("mtype", ALL)
    def test_residual_and_det(self, base, mtype):
        meq = canonical_matrices(mtype, None, base)
        Y = fundamental_solution(mtype, None, base)
        for x in (0.15, 0.25, 0.45):
            assert matrix_residual(meq, Y, x) <= 1e-9
        assert relative_det(Y(0.2345)) > 1e-8

    def test_m1_at_small_x(self, base):
        meq = canonical_matrices(M.M1_2PHI1, None, base)
        assert matrix_residual(meq, fundamental_solution(M.M1_2PHI1, None, base), 0.1) <= 1e-9

    def test_zero_matrix_function(self, base):
        meq = canonical_matrices(M.M41_QAIRY, None, base)
        assert matrix_residual(meq, lambda x: ((0, 0), (0, 0)), 0.3) == 0

    def test_perturbation_is_detected(self, base):
        meq = canonical_matrices(M.M41_QAIRY, None, base)
        Y = fundamental_solution(M.M41_QAIRY, None, base)

        def bumped(x):
            (a, b), (c, d) = Y(x)
            return ((a + 1e-3, b), (c, d))

        assert matrix_residual(meq, bumped, 0.3) > 1e-5

    def test_displayed_forms(self, base):
        # three displayed matrices are not fundamental solutions as they stand
        for mtype in (M.M2_1PHI1, M.M42_RAMANUJAN):
            meq = canonical_matrices(mtype, None, base)
            Y = fundamental_solution(mtype, None, base, printed=True)
            assert max(matrix_residual(meq, Y, x) for x in (0.15, 0.25, 0.45)) > 1e-3
        Y5 = fundamental_solution(M.M5_FIRST_ORDER, None, base, printed=True)
        assert relative_det(Y5(0.2345)) < 1e-12

    def test_gauge_relation(self, base):
        # Y of a conjugated system is P^-1 Y
        mtype = M.M31_E1
        meq = canonical_matrices(mtype, None, base)
        P = ((1, 0.5), (0.25, 2))
        Y = fundamental_solution(mtype, None, base)
        Z = lambda x: mat_mul(inv2(P), Y(x))
        assert matrix_residual(meq.conjugate(P), Z, 0.3) <= 1e-9


class TestReports:
    @pytest.mark.parametrize("mtype", ALL)
    def test_corrected_reports_pass(self, base, mtype):
        assert verify_matrix_case(mtype, None, base, printed=False).passed

    def test_printed_reports(self, base):
        failing = {m for m in ALL if not verify_matrix_case(m, None, base).passed}
        assert failing == {M.M2_1PHI1, M.M33_HERMITE_WEBER, M.M42_RAMANUJAN, M.M5_FIRST_ORDER}
        rep = verify_matrix_case(M.M33_HERMITE_WEBER, None, base)
        assert not rep.elimination_ok and rep.residual_ok
