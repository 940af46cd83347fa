"""Named q-special functions, solution bases and identity checks.

Bessel orders are passed multiplicatively as t = q^nu, so nu may be complex
(t = -1 is allowed).  Powers x^nu use the principal logarithm.

Divergent 2phi0 series are summed by q-Borel-Laplace summation:

    L(z) = sum_{m in Z} B(lam q^m) / theta_q(lam q^m / z),
    B(xi) = (-A xi; q)_inf / (-xi; q)_inf,

which solves the same q-difference equation as the formal series.  Here
lam must stay off -q^Z and off the spiral z q^Z.
"""
from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

from .classify import CanonicalType
from .equations import HypEquation, PolyEquation, char_data, cjson, fuchs_product, residual
from .errors import DomainError, QError
from .qcore import (
    DEFAULT_OPTIONS,
    EvalOptions,
    EvalResult,
    QBase,
    SeriesSpec,
    cpow,
    log_base,
    lq_phase,
    phi,
    phi_rs,
    qpoch_inf,
    qpoch_infinite,
    theta_value,
)

LAPLACE_LAMBDA = 0.77


def _times(res: EvalResult, factor: complex, factor_rel_err: float = 0.0) -> EvalResult:
    value = res.value * factor
    err = abs(factor) * res.err_bound + abs(value) * (factor_rel_err + 4e-16)
    return EvalResult(value, err, res.terms_used)


# ---------------------------------------------------------------------------
# Bessel functions


class BesselKind(Enum):
    J1 = "J1"
    J2 = "J2"
    J3 = "J3"


def bessel_j(kind: BesselKind, t: complex, x: complex, base: QBase,
             opts: EvalOptions = DEFAULT_OPTIONS) -> EvalResult:
    """Jackson's first and second and the Hahn-Exton q-Bessel functions, with t = q^nu."""
    q = base.q
    nu = log_base(base, t)
    num = qpoch_infinite(t * q, base, opts)
    den = qpoch_infinite(q, base, opts)
    const = num.value / den.value
    const_rel = (num.err_bound / abs(num.value) if num.value else 0.0) + den.err_bound / abs(den.value)
    if kind is BesselKind.J1:
        if abs(x) >= 2:
            raise DomainError("J1 series needs |x| < 2")
        s = phi_rs(SeriesSpec((0, 0), (t * q,), base, -x * x / 4), opts)
        pref = cpow(x / 2, nu)
    elif kind is BesselKind.J2:
        s = phi_rs(SeriesSpec((), (t * q,), base, -t * q * x * x / 4), opts)
        pref = cpow(x / 2, nu)
    else:
        s = phi_rs(SeriesSpec((0,), (t * q,), base, q * x * x), opts)
        pref = cpow(x, nu)
    return _times(s, const * pref, const_rel)


def bessel_equation(kind: BesselKind, t: complex, base: QBase) -> PolyEquation:
    """Equation of J^(k)_nu in x with half steps, i.e. in the base sqrt(q).

    J1: u(xq) - (s + 1/s) u(x q^(1/2)) + (1 + x^2/4) u(x) = 0
    J2: (1 + q x^2/4) u(xq) - (s + 1/s) u(x q^(1/2)) + u(x) = 0
    J3: u(xq) + (-(s + 1/s) + q x^2 / s) u(x q^(1/2)) + u(x) = 0
    with s = q^(nu/2).
    """
    q = base.q
    half = QBase(cmath.sqrt(q))
    s = cpow(half.q, log_base(base, t))
    mid = -(s + 1 / s)
    if kind is BesselKind.J1:
        return PolyEquation((1,), (mid,), (1, 0, 0.25), half)
    if kind is BesselKind.J2:
        return PolyEquation((1, 0, q / 4), (mid,), (1,), half)
    return PolyEquation((1,), (mid, 0, q / s), (1,), half)


def e_nu(kind: int, t: complex, x: complex, base: QBase,
         opts: EvalOptions = DEFAULT_OPTIONS) -> EvalResult:
    """E^(k)_nu(x; p) in the base p = base.q with t = p^nu.

    E1 = x^nu 2phi1(0, 0; p t^2; p, -x/4)
    E2 = x^nu 0phi1(-; p t^2; p, -x p^2 t^2 / 4)
    E3 = x^nu 1phi1(0; p t^2; p, p^2 x)
    """
    p = base.q
    nu = log_base(base, t)
    low = (p * t * t,)
    if kind == 1:
        spec = SeriesSpec((0, 0), low, base, -x / 4)
    elif kind == 2:
        spec = SeriesSpec((), low, base, -x * p * p * t * t / 4)
    elif kind == 3:
        spec = SeriesSpec((0,), low, base, p * p * x)
    else:
        raise DomainError(f"E-function kind must be 1, 2 or 3, got {kind}")
    return _times(phi_rs(spec, opts), cpow(x, nu))


def e_equation(kind: int, t: complex, base: QBase) -> HypEquation:
    """Equation solved by E^(k)_nu and its partner in the base p = base.q.

    kind 1: v(xp^2) - (t + 1/t) v(xp) + (1 + x/4) v(x) = 0
    kind 2: (1 + p^2 x/4) v(xp^2) - (t + 1/t) v(xp) + v(x) = 0
    kind 3: v(xp^2) + (-(t + 1/t) + p^2 x / t) v(xp) + v(x) = 0
    """
    p = base.q
    mid = -(t + 1 / t)
    if kind == 1:
        return HypEquation(1, mid, 1, 0, 0, 0.25, base)
    if kind == 2:
        return HypEquation(1, mid, 1, p * p / 4, 0, 0, base)
    if kind == 3:
        return HypEquation(1, mid, 1, 0, p * p / t, 0, base)
    raise DomainError(f"E-function kind must be 1, 2 or 3, got {kind}")


def e_nu_partner(kind: int, t: complex, x: complex, base: QBase,
                 opts: EvalOptions = DEFAULT_OPTIONS) -> EvalResult:
    """Second solution: E_{-nu}(x) for kinds 1 and 2, E_{-nu}(x p^(-2 nu)) for kind 3."""
    if kind == 3:
        return e_nu(3, 1 / t, x / (t * t), base, opts)
    return e_nu(kind, 1 / t, x, base, opts)


# ---------------------------------------------------------------------------
# Airy and Ramanujan functions


def airy_ai_q(x: complex, base: QBase, opts: EvalOptions = DEFAULT_OPTIONS) -> EvalResult:
    """Ai_q(x) = 1phi1(0; -q; q, -x); solves u(xq^2) + x u(xq) - u(x) = 0."""
    return phi_rs(SeriesSpec((0,), (-base.q,), base, -x), opts)


def ramanujan_a_q(x: complex, base: QBase, opts: EvalOptions = DEFAULT_OPTIONS) -> EvalResult:
    """A_q(x) = 0phi1(-; 0; q, -q x); solves q x u(xq^2) - u(xq) + u(x) = 0."""
    return phi_rs(SeriesSpec((), (0,), base, -base.q * x), opts)


def ai(x: complex, base: QBase) -> complex:
    return airy_ai_q(x, base).value


def ramanujan(x: complex, base: QBase) -> complex:
    return ramanujan_a_q(x, base).value


AIRY_EQUATION = (1, 0, -1, 0, 1, 0)


def airy_equation(base: QBase) -> HypEquation:
    return HypEquation(*AIRY_EQUATION, base)


def ramanujan_equation(base: QBase) -> HypEquation:
    return HypEquation(0, -1, 1, base.q, 0, 0, base)


# ---------------------------------------------------------------------------
# q-Borel-Laplace sum of 2phi0(A, 0; -; q, z)


def laplace_kernel_sum(z: complex, base: QBase, lam: complex = LAPLACE_LAMBDA) -> complex:
    """sum_m 1 / theta_q(lam q^m / z); invariant under z -> qz."""
    return _bilateral(lambda xi: 1.0, z, base, lam)


def _bilateral(borel: Callable[[complex], complex], z: complex, base: QBase, lam: complex) -> complex:
    if z == 0:
        raise DomainError("Laplace sum is taken at z != 0")
    q = base.q
    total = 0j
    for direction in (1, -1):
        m = 0 if direction == 1 else -1
        prev = math.inf
        small = 0
        for _ in range(600):
            xi = lam * q**m
            th = theta_value(base, xi / z)
            if th == 0:
                raise DomainError(f"lam q^{m} / z hits a zero of theta; choose another lam")
            term = borel(xi) / th
            if not cmath.isfinite(term):
                break
            total += term
            mag = abs(term)
            if mag <= 1e-18 * abs(total) and mag <= prev:
                small += 1
                if small >= 3:
                    break
            else:
                small = 0
            prev = mag
            m += direction
    return total


def borel_laplace_2phi0(A: complex, z: complex, base: QBase, lam: complex = LAPLACE_LAMBDA,
                        normalize: bool = False) -> complex:
    """q-Borel-Laplace sum of the divergent series 2phi0(A, 0; -; q, z).

    With normalize=True the result is divided by laplace_kernel_sum, a
    q-periodic factor, so that it is asymptotic to the formal series as z -> 0.
    """
    if abs(lam) == 0:
        raise DomainError("lam must be nonzero")

    def borel(xi):
        return qpoch_inf(-A * xi, base) / qpoch_inf(-xi, base)

    value = _bilateral(borel, z, base, lam)
    if normalize:
        value /= laplace_kernel_sum(z, base, lam)
    return value


# ---------------------------------------------------------------------------
# Kummer-type solutions of the Heine equation


def heine_equation(a: complex, b: complex, c: complex, base: QBase) -> HypEquation:
    q = base.q
    return HypEquation(c, -(c + q), q, -a * b * q, (a + b) * q, -q, base)


@dataclass(frozen=True)
class TaggedSolution:
    func: Callable[[complex], complex]
    domain: str
    near: str


def kummer_eight(a: complex, b: complex, c: complex, base: QBase) -> list:
    """Eight solutions of the Heine equation expressed by 2phi1 series."""
    q = base.q
    al, be, ga = (log_base(base, v) for v in (a, b, c))

    def pq(v):
        return qpoch_inf(v, base)

    def s1(x):
        return phi([a, b], [c], base, x)

    def s2(x):
        return pq(a * b * x / c) / pq(x) * phi([c / a, c / b], [c], base, a * b * x / c)

    def s3(x):
        return cpow(x, 1 - ga) * phi([a * q / c, b * q / c], [q * q / c], base, x)

    def s4(x):
        return cpow(x, 1 - ga) * pq(a * b * x / c) / pq(x) * phi([q / a, q / b], [q * q / c], base, a * b * x / c)

    def s5(x):
        return cpow(x, -al) * phi([a, a * q / c], [a * q / b], base, c * q / (a * b * x))

    def s6(x):
        return cpow(x, -al) * pq(q / x) / pq(c * q / (a * b * x)) * phi([q / b, c / b], [a * q / b], base, q / x)

    def s7(x):
        return cpow(x, -be) * phi([b, b * q / c], [b * q / a], base, c * q / (a * b * x))

    def s8(x):
        return cpow(x, -be) * pq(q / x) / pq(c * q / (a * b * x)) * phi([q / a, c / a], [b * q / a], base, q / x)

    return [TaggedSolution(s1, "|x| < 1", "0"), TaggedSolution(s2, "|abx/c| < 1", "0"),
            TaggedSolution(s3, "|x| < 1", "0"), TaggedSolution(s4, "|abx/c| < 1", "0"),
            TaggedSolution(s5, "|cq/(abx)| < 1", "inf"), TaggedSolution(s6, "|q/x| < 1", "inf"),
            TaggedSolution(s7, "|cq/(abx)| < 1", "inf"), TaggedSolution(s8, "|q/x| < 1", "inf")]


# ---------------------------------------------------------------------------
# solution bases of the canonical equations


@dataclass(frozen=True)
class SolutionBasis:
    u1: Callable[[complex], complex]
    u2: Callable[[complex], complex]
    domain: str
    multipliers: tuple = field(default_factory=tuple)

    def casorati(self, x: complex, base: QBase) -> complex:
        q = base.q
        return self.u1(x) * self.u2(x * q) - self.u2(x) * self.u1(x * q)


def canonical_basis(ctype: CanonicalType, params: dict, base: QBase,
                    lam: complex = LAPLACE_LAMBDA) -> SolutionBasis:
    """Two independent solutions of the canonical equation of each type."""
    q = base.q
    if ctype is CanonicalType.HEINE:
        a, b, c = params["a"], params["b"], params["c"]
        g = log_base(base, c)
        return SolutionBasis(lambda x: phi([a, b], [c], base, x),
                             lambda x: cpow(x, 1 - g) * phi([a * q / c, b * q / c], [q * q / c], base, x),
                             "|x| < 1", ("x^(1-gamma)",))
    if ctype is CanonicalType.ONE_PHI_ONE:
        a, c = params["a"], params["c"]
        g = log_base(base, c)
        return SolutionBasis(lambda x: phi([a], [c], base, x),
                             lambda x: cpow(x, 1 - g) * phi([a * q / c], [q * q / c], base, q * x / c),
                             "all x", ("x^(1-gamma)",))
    if ctype is CanonicalType.BESSEL_J1:
        t = params["t"]
        nu = log_base(base, t)
        return SolutionBasis(lambda x: cpow(x, nu) * phi([0, 0], [q * t * t], base, -x / 4),
                             lambda x: cpow(x, -nu) * phi([0, 0], [q / (t * t)], base, -x / 4),
                             "|x| < 4", ("x^nu", "x^-nu"))
    if ctype is CanonicalType.BESSEL_J3:
        t = params["t"]
        nu = log_base(base, t)
        return SolutionBasis(lambda x: cpow(x, nu) * phi([0], [q * t * t], base, q * q * x),
                             lambda x: cpow(x, -nu) * phi([0], [q / (t * t)], base, q * q * x / (t * t)),
                             "all x", ("x^nu", "x^-nu"))
    if ctype is CanonicalType.HERMITE_WEBER:
        a = params["a"]
        return SolutionBasis(lambda x: phi([a], [0], base, x),
                             lambda x: theta_value(base, -a * x / q)
                             * borel_laplace_2phi0(q / a, a * x / (q * q), base, lam),
                             "x off the theta zeros", ("theta_q(-ax/q)",))
    if ctype is CanonicalType.AIRY:
        return SolutionBasis(lambda x: ai(x, base),
                             lambda x: lq_phase(base, x) * ai(-x, base),
                             "x > 0 for the second element", ("exp(i pi lq x)",))
    if ctype is CanonicalType.RAMANUJAN:
        return SolutionBasis(lambda x: ramanujan(x, base),
                             lambda x: theta_value(base, x) * borel_laplace_2phi0(0, -x / q, base, lam),
                             "x off the theta zeros", ("theta_q(x)",))
    raise DomainError(f"no basis for {ctype}")


# ---------------------------------------------------------------------------
# identity verification


class IdentityKind(Enum):
    HAHN = "hahn"
    HEINE = "heine"
    MORITA = "morita"
    AIRY_RAMANUJAN = "airy-ram"
    J3_AIRY = "j3-airy"
    FUCHS = "fuchs"
    KUMMER_EIGHT = "kummer8"


@dataclass(frozen=True)
class Check:
    name: str
    max_relative: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_relative <= self.tolerance

    def to_json(self) -> dict:
        return {"name": self.name, "max_relative_residual": self.max_relative,
                "tolerance": self.tolerance, "passed": self.passed}


@dataclass(frozen=True)
class IdentityReport:
    kind: IdentityKind
    variant: str
    checks: tuple
    points: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_relative_residual(self) -> float:
        return max(c.max_relative for c in self.checks)

    def to_json(self) -> dict:
        return {"identity": self.kind.value, "variant": self.variant,
                "result": "PASS" if self.passed else "FAIL",
                "max_relative_residual": self.max_relative_residual,
                "checks": [c.to_json() for c in self.checks],
                "points": [p if isinstance(p, (list, tuple)) else cjson(p) for p in self.points]}


def rel_diff(u: complex, v: complex) -> float:
    big = max(abs(u), abs(v))
    return abs(u - v) / big if big > 0 else 0.0


def _q(params: dict, default: float = 0.5) -> QBase:
    return QBase(params.get("q", default))


def _hahn(params: dict, points: Sequence, variant: str) -> list:
    base = _q(params)
    t = params.get("t", 0.7)
    j = max(rel_diff(bessel_j(BesselKind.J2, t, x, base).value,
                     qpoch_inf(-x * x / 4, base) * bessel_j(BesselKind.J1, t, x, base).value) for x in points)
    checks = [Check("J2 = (-x^2/4; q) J1", j, 1e-10)]
    if variant == "printed":
        base2 = QBase(base.q**2)
        e = max(rel_diff(e_nu(2, t, x, base).value, qpoch_inf(-x / 4, base2) * e_nu(1, t, x, base).value)
                for x in points)
        checks.append(Check("E2 = (-x/4; p^2) E1 (displayed form)", e, 1e-10))
    else:
        p = base.q
        e = max(rel_diff(e_nu(2, t, x, base).value, qpoch_inf(-p * x / 4, base) * e_nu(1, t, p * x, base).value / t)
                for x in points)
        checks.append(Check("E2(x) = t^-1 (-px/4; p) E1(px)", e, 1e-10))
    return checks


def _heine(params: dict, points: Sequence, variant: str) -> list:
    base = _q(params)
    q = base.q
    a, b, c = params.get("a", q**0.3), params.get("b", q**0.7), params.get("c", q**1.1)
    sols = kummer_eight(a, b, c, base)
    agree = max(rel_diff(sols[0].func(x), sols[1].func(x)) for x in points)
    eq = heine_equation(a, b, c, base)
    res = max(residual(eq, s.func, x)[1] for s in sols[:2] for x in points)
    return [Check("2phi1(a,b;c;x) = Heine transform", agree, 1e-10),
            Check("both sides solve the Heine equation", res, 1e-9)]


def _morita(params: dict, points: Sequence, variant: str) -> list:
    worst = 0.0
    for qv, x in points:
        base = QBase(qv)
        b2 = QBase(qv * qv)
        lhs = ramanujan(-qv**3 / (x * x), b2)
        norm = qpoch_inf(qv, base) * qpoch_inf(-1, base)
        if variant == "printed":
            rhs = qv * qv / norm * (-theta_value(base, -x / qv) * ai(x * qv * qv, base)
                                    + theta_value(base, x / qv) * ai(-x * qv * qv, base))
        else:
            rhs = 1 / norm * (theta_value(base, -x / qv) * ai(x, base)
                              + theta_value(base, x / qv) * ai(-x, base))
        worst = max(worst, rel_diff(lhs, rhs))
    name = "A_{q^2}(-q^3/x^2) connection formula" + (" (displayed form)" if variant == "printed" else "")
    return [Check(name, worst, 1e-8)]


def airy_ramanujan_equation(base: QBase) -> HypEquation:
    """-q^5 x^2 v(xq^2) - v(xq) + v(x) = 0 as a polynomial equation."""
    return PolyEquation((0, 0, -base.q**5), (-1,), (1,), base)


def _airy_ram(params: dict, points: Sequence, variant: str) -> list:
    base = _q(params)
    q = base.q
    b2 = QBase(q * q)
    eq = airy_ramanujan_equation(base)

    def v(x):
        return theta_value(base, -q * q * x) * ai(1 / x, base)

    sign = 1 if variant == "printed" else -1

    def w(x):
        return ramanujan(sign * x * x * q**3, b2)

    rv = max(residual(eq, v, x)[1] for x in points)
    rw = max(residual(eq, w, x)[1] for x in points)
    label = "A_{q^2}(x^2 q^3)" if sign == 1 else "A_{q^2}(-x^2 q^3)"
    return [Check("theta_q(-q^2 x) Ai_q(1/x) solves the sheared equation", rv, 1e-9),
            Check(label + " solves the sheared equation", rw, 1e-9)]


def _j3_airy(params: dict, points: Sequence, variant: str) -> list:
    base = _q(params)
    q = base.q
    nu = log_base(base, -1)
    k = qpoch_inf(-q, base) / qpoch_inf(q, base)
    worst = max(rel_diff(bessel_j(BesselKind.J3, -1, x, base).value, k * cpow(x, nu) * ai(-q * x * x, base))
                for x in points)
    return [Check("J3 with q^nu = -1 against Ai_q(-q x^2)", worst, 1e-9)]


def _fuchs(params: dict, points: Sequence, variant: str) -> list:
    base = _q(params)
    q = base.q
    if "a" in params:
        eqs = [heine_equation(params["a"], params["b"], params["c"], base)]
    else:
        rng = random.Random(params.get("seed", 0))
        eqs = []
        while len(eqs) < int(params.get("count", 100)):
            co = [complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(6)]
            eqs.append(HypEquation(*co, base))
    worst = max(abs(fuchs_product(char_data(e)) - 1) for e in eqs)
    return [Check(f"exponent product equals 1 on {len(eqs)} equation(s)", worst, 1e-12)]


def _kummer(params: dict, points: Sequence, variant: str) -> list:
    base = _q(params)
    q = base.q
    a, b, c = params.get("a", q**0.3), params.get("b", q**0.7), params.get("c", q**1.1)
    sols = kummer_eight(a, b, c, base)
    eq = heine_equation(a, b, c, base)
    inner = [x for x in points if abs(x) < 1]
    outer = params.get("outer", (20.0, 50.0, 80.0))
    checks = []
    worst = 0.0
    for i, s in enumerate(sols):
        xs = inner if s.near == "0" else outer
        worst = max(worst, max(residual(eq, s.func, x)[1] for x in xs))
    checks.append(Check("all eight solve the Heine equation", worst, 1e-9))
    agree = 0.0
    for i in range(0, 8, 2):
        xs = inner if sols[i].near == "0" else outer
        agree = max(agree, max(rel_diff(sols[i].func(x), sols[i + 1].func(x)) for x in xs))
    checks.append(Check("pairs agree", agree, 1e-10))
    return checks


_DEFAULT_POINTS = {
    IdentityKind.HAHN: (0.3, 0.6, 0.9),
    IdentityKind.HEINE: (0.05, 0.1, 0.2, 0.4, 0.6),
    IdentityKind.MORITA: ((0.3, 0.5), (0.3, 0.8), (0.5, 0.7)),
    IdentityKind.AIRY_RAMANUJAN: (1.5, 2.0, 3.0),
    IdentityKind.J3_AIRY: (0.3, 0.7, 1.1),
    IdentityKind.FUCHS: (),
    IdentityKind.KUMMER_EIGHT: (0.05, 0.1, 0.2, 0.4),
}

_RUNNERS = {
    IdentityKind.HAHN: _hahn,
    IdentityKind.HEINE: _heine,
    IdentityKind.MORITA: _morita,
    IdentityKind.AIRY_RAMANUJAN: _airy_ram,
    IdentityKind.J3_AIRY: _j3_airy,
    IdentityKind.FUCHS: _fuchs,
    IdentityKind.KUMMER_EIGHT: _kummer,
}


def verify_identity(kind: IdentityKind, params: Optional[dict] = None,
                    points: Optional[Sequence] = None, variant: str = "printed") -> IdentityReport:
    """Numerically check one identity; variant 'printed' or 'corrected'.

    The two variants differ for Hahn (E form), Morita and the Airy-Ramanujan
    lemma, where the displayed forms do not hold numerically; see README.
    """
    if variant not in ("printed", "corrected"):
        raise DomainError("variant must be 'printed' or 'corrected'")
    params = dict(params or {})
    pts = tuple(points) if points is not None else _DEFAULT_POINTS[kind]
    if kind is IdentityKind.MORITA and pts and not isinstance(pts[0], (tuple, list)):
        qv = params.get("q", 0.3)
        pts = tuple((qv, x) for x in pts)
    try:
        checks = _RUNNERS[kind](params, pts, variant)
    except QError:
        raise
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise DomainError(str(exc)) from exc
    return IdentityReport(kind, variant, tuple(checks), pts)
