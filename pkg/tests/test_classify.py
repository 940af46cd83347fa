import random
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qlaplace.classify import (
    CanonicalType,
    ClassicalKind,
    canonical_equation,
    canonical_inputs,
    classify_classical,
    classify_q,
    match_pattern,
    reduce_to_canonical,
)
from qlaplace.equations import HypEquation, residual
from qlaplace.errors import DegenerateError
from qlaplace.qcore import QBase
from qlaplace.qfunctions import canonical_basis
from qlaplace.transforms import StepKind, TransformChain, TransformStep, apply_invert

Q = 0.5
TYPES = [t for t in CanonicalType if t is not CanonicalType.DEGENERATE]


def random_chain(rng, q):
    steps = []
    for _ in range(rng.randint(1, 4)):
        kind = rng.choice(["scale", "power", "invert", "poch"])
        if kind == "scale":
            steps.append(TransformStep(StepKind.SCALE, complex(rng.uniform(0.3, 3), rng.uniform(-1, 1))))
        elif kind == "power":
            steps.append(TransformStep(StepKind.POWER_GAUGE, q ** rng.uniform(-1, 1)))
        elif kind == "invert":
            steps.append(TransformStep(StepKind.INVERT))
        else:
            steps.append(TransformStep(StepKind.POCH_GAUGE))
    return TransformChain(tuple(steps))


def transformed(eq, chain):
    """Apply the chain step by step, skipping Pochhammer gauges that do not apply."""
    out = eq
    for step in chain:
        try:
            out = TransformChain((step,)).apply(out)
        except Exception:
            continue
    return out


class TestCanonical:
    def test_each_type_is_fixed(self, base):
        for ctype, eq in canonical_inputs(base).items():
            cls = classify_q(eq)
            assert cls.ctype is ctype
            assert len(cls.chain) == 0
            assert cls.canonical_eq.proportional_to(eq, 1e-14)

    def test_heine_parameters(self, base):
        a, b, c = Q**0.3, Q**0.7, Q**1.1
        cls = classify_q(canonical_equation(CanonicalType.HEINE, {"a": a, "b": b, "c": c}, base))
        got = cls.params
        assert {round(abs(got["a"]), 12), round(abs(got["b"]), 12)} == {round(a, 12), round(b, 12)}
        assert abs(got["c"] - c) <= 1e-12

    def test_airy_example(self, base):
        assert classify_q(HypEquation(1, 0, -1, 0, 1, 0, base)).ctype is CanonicalType.AIRY

    def test_ramanujan_example(self, base):
        assert classify_q(HypEquation(0, -1, 1, Q, 0, 0, base)).ctype is CanonicalType.RAMANUJAN

    def test_bessel_j1_example(self, base):
        t = 0.8
        cls = classify_q(HypEquation(1, -(t + 1 / t), 1, 0, 0, 0.25, base))
        assert cls.ctype is CanonicalType.BESSEL_J1
        assert abs(cls.params["t"] - t) <= 1e-12

    def test_j3_versus_airy(self, base):
        # same occupied corners; a1 decides
        assert classify_q(HypEquation(1, 0.3, -1, 0, 1, 0, base)).ctype is CanonicalType.BESSEL_J3
        assert classify_q(HypEquation(1, 0, -1, 0, 1, 0, base)).ctype is CanonicalType.AIRY

    def test_json(self, base):
        data = classify_q(HypEquation(1, 0, -1, 0, 1, 0, base)).to_json()
        assert data["type"] == "QAiry" and data["chain"] == []


class TestReduction:
    def test_scaled_gauged_heine_recovers_parameters(self, base):
        a, b, c = Q**0.3, Q**0.7, Q**1.1
        eq = canonical_equation(CanonicalType.HEINE, {"a": a, "b": b, "c": c}, base)
        chain = TransformChain((TransformStep(StepKind.SCALE, 2), TransformStep(StepKind.POWER_GAUGE, Q**0.4)))
        cls = classify_q(chain.apply(eq))
        assert cls.ctype is CanonicalType.HEINE
        got = sorted((cls.params["a"], cls.params["b"]), key=abs)
        assert abs(got[0] - b) <= 1e-10 and abs(got[1] - a) <= 1e-10
        assert abs(cls.params["c"] - c) <= 1e-10

    def test_inverted_one_phi_one_starts_with_invert(self, base):
        eq = apply_invert(canonical_inputs(base)[CanonicalType.ONE_PHI_ONE])
        cls = classify_q(eq)
        assert cls.ctype is CanonicalType.ONE_PHI_ONE
        assert cls.chain.steps[0].kind is StepKind.INVERT

    def test_random_chains_keep_type(self, base):
        rng = random.Random(5)
        for ctype, eq in canonical_inputs(base).items():
            for _ in range(15):
                chain = random_chain(rng, Q)
                out = transformed(eq, chain)
                cls = classify_q(out)
                assert cls.ctype is ctype
                back = cls.chain.inverse().apply(cls.canonical_eq)
                assert back.proportional_to(out, 1e-10)

    def test_basis_pushforward_solves_input(self, base):
        # canonical solutions carried back through the chain solve the original equation
        for ctype, eq in canonical_inputs(base).items():
            chain = TransformChain((TransformStep(StepKind.SCALE, 1.3), TransformStep(StepKind.POWER_GAUGE, Q**0.25)))
            src = chain.apply(eq)
            cls = reduce_to_canonical(src)
            basis = canonical_basis(cls.ctype, cls.params, base)
            u = cls.chain.pushforward(basis.u1, src)
            pts = [0.11, 0.17, 0.23, 0.29, 0.37] if ctype is not CanonicalType.RAMANUJAN else [0.3, 0.5, 0.7, 0.9, 1.1]
            for x in pts:
                assert residual(src, u, x)[1] <= 1e-9, (ctype, x)

    def test_degenerate_patterns(self, base):
        cls = classify_q(HypEquation(0, 0, 1, 1, 0, 0, base))
        assert cls.ctype is CanonicalType.DEGENERATE
        assert "b:" in cls.diagnostic
        with pytest.raises(DegenerateError):
            reduce_to_canonical(HypEquation(0, 0, 1, 1, 0, 0, base))

    def test_first_order_is_rejected(self, base):
        with pytest.raises(DegenerateError):
            classify_q(HypEquation(0, 1, 1, 0, 1, 0, base))

    def test_near_zero_needs_tolerance(self, base):
        eq = HypEquation(1, 1e-14, -1, 0, 1, 0, base)
        assert classify_q(eq).ctype is CanonicalType.BESSEL_J3
        assert classify_q(eq, zero_tol=1e-12).ctype is CanonicalType.AIRY

    @given(st.sampled_from(TYPES), st.floats(0.3, 3), st.floats(-1, 1), st.booleans())
    @settings(max_examples=60, deadline=None)
    def test_stable_under_moves(self, ctype, c, g, invert):
        base = QBase(Q)
        eq = canonical_inputs(base)[ctype]
        steps = [TransformStep(StepKind.SCALE, c), TransformStep(StepKind.POWER_GAUGE, Q**g)]
        if invert:
            steps.append(TransformStep(StepKind.INVERT))
        assert classify_q(TransformChain(tuple(steps)).apply(eq)).ctype is ctype

    def test_pattern_table(self, base):
        assert match_pattern(HypEquation(1, 2, 3, 4, 5, 6, base)) is CanonicalType.HEINE
        assert match_pattern(HypEquation(1, 2, 3, 0, 5, 6, base)) is None


def classical_solution(cc):
    p = {k: mp.mpc(complex(v)) for k, v in cc.params.items()}
    h = p["h"]
    if cc.case is ClassicalKind.KUMMER:
        return lambda x: mp.exp(h * x) * mp.hyp1f1(p["a"], p["c"], (x - p["mu"]) / p["lambda"])
    if cc.case is ClassicalKind.BESSEL:
        def f(x):
            xi = (x - p["mu"]) / p["lambda"]
            return mp.exp(h * x) * xi ** p["alpha"] * mp.besselj(2 * p["alpha"], p["beta"] * mp.sqrt(xi))
        return f
    if cc.case is ClassicalKind.HERMITE_WEBER:
        return lambda x: mp.exp(h * x) * mp.hyp1f1(p["a"], 0.5, p["k"] * (x - p["mu"]) ** 2)

    def g(x):
        xi = x - p["mu"]
        return mp.exp(h * x) * mp.sqrt(xi) * mp.besselj(mp.mpf(1) / 3, p["k"] * xi ** 1.5)
    return g


def ode_residual(co, f, x):
    a0, a1, a2, b0, b1, b2 = (mp.mpc(complex(c)) for c in co)
    terms = [(a0 + b0 * x) * mp.diff(f, x, 2), (a1 + b1 * x) * mp.diff(f, x), (a2 + b2 * x) * f(x)]
    return abs(sum(terms)) / max(abs(t) for t in terms)


class TestClassical:
    def test_airy_case_exact(self):
        cc = classify_classical(1, 0, 0, 0, 0, 1)
        assert cc.case is ClassicalKind.AIRY
        assert cc.params["h"] == 0 and cc.params["mu"] == 0
        assert cc.params["k"] == Fraction(2, 3)

    def test_elementary(self):
        assert classify_classical(1, 2, 3, 0, 0, 0).case is ClassicalKind.ELEMENTARY

    def test_kummer_root_of_b(self):
        b0, b1, b2 = Fraction(2), Fraction(7), Fraction(3)
        for sign in (1, -1):
            h = classify_classical(1, 1, 1, b0, b1, b2, sign).params["h"]
            assert b0 * h * h + b1 * h + b2 == 0

    @pytest.mark.parametrize("co", [
        (1.3, 0.4, -0.7, 0.9, 0.5, -0.3),
        (1.0, 0.5, 0.3, 1.0, 2.0, 1.0),
        (1.2, 0.3, -0.5, 0, 0.8, 0.6),
        (1, 0, 0, 0, 0, 1),
        (1.5, 0.6, -0.4, 0, 0, 0.7),
    ])
    def test_solution_solves_ode(self, co):
        with mp.workdps(30):
            cc = classify_classical(*co)
            f = classical_solution(cc)
            for x in (mp.mpf("2.3"), mp.mpf("3.1")):
                assert ode_residual(co, f, x) <= 1e-12

    def test_case_split_on_random_tuples(self):
        rng = random.Random(9)
        for _ in range(200):
            co = [Fraction(rng.randint(-3, 3)) for _ in range(6)]
            for i in rng.sample(range(6), rng.randint(0, 3)):
                co[i] = Fraction(0)
            a0, a1, a2, b0, b1, b2 = co
            case = classify_classical(*co).case
            delta = b1 * b1 - 4 * b0 * b2
            expected = (
                ClassicalKind.KUMMER if b0 != 0 and delta != 0 else
                ClassicalKind.BESSEL if b0 != 0 else
                ClassicalKind.HERMITE_WEBER if a0 * b1 != 0 else
                ClassicalKind.AIRY if b1 == 0 and a0 * b2 != 0 else
                ClassicalKind.ELEMENTARY
            )
            assert case is expected
