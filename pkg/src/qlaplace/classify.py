"""Reduction of hypergeometric-type equations to the seven canonical forms.

The decision uses only the zero pattern of (a0, a1, a2, b0, b1, b2).  When
the input pattern is not one of the seven canonical patterns, a
breadth-first search over inversion and the four polynomial gauges looks
for a reachable one.  After a match, a power gauge and a scaling normalize
the exponents, and the canonical parameters are read off the scheme.

The classical Laplace-type classifier for

    (a0 + b0 x) y'' + (a1 + b1 x) y' + (a2 + b2 x) y = 0

is also here.  It uses exact rational arithmetic when the inputs are
rational.
"""
from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .equations import HypEquation, char_data, cjson, is_infinite, newton_diagram
from .errors import DegenerateError, DomainError, NonPolynomial, QError
from .qcore import QBase
from .transforms import StepKind, TransformChain, TransformStep, apply_step


class CanonicalType(Enum):
    HEINE = "Heine2Phi1"
    ONE_PHI_ONE = "OnePhi1"
    BESSEL_J1 = "QBesselJ1"
    BESSEL_J3 = "QBesselJ3"
    HERMITE_WEBER = "QHermiteWeber"
    AIRY = "QAiry"
    RAMANUJAN = "Ramanujan"
    DEGENERATE = "Degenerate"


# (zero coefficients, nonzero coefficients) in the order a0 a1 a2 b0 b1 b2
_NAMES = ("a0", "a1", "a2", "b0", "b1", "b2")
PATTERNS = {
    CanonicalType.HEINE: ((), ("a0", "a2", "b0", "b2")),
    CanonicalType.ONE_PHI_ONE: (("b2",), ("a0", "a2", "b0", "b1")),
    CanonicalType.BESSEL_J1: (("b0", "b1"), ("a0", "a2", "b2")),
    CanonicalType.BESSEL_J3: (("b0", "b2"), ("a0", "a1", "a2", "b1")),
    CanonicalType.HERMITE_WEBER: (("a0", "b2"), ("a1", "a2", "b0", "b1")),
    CanonicalType.AIRY: (("a1", "b0", "b2"), ("a0", "a2", "b1")),
    CanonicalType.RAMANUJAN: (("a0", "b1", "b2"), ("a1", "a2", "b0")),
}

_SNAP = 1e-12


def match_pattern(eq: HypEquation) -> Optional[CanonicalType]:
    values = dict(zip(_NAMES, eq.coeffs))
    for ctype, (zeros, nonzeros) in PATTERNS.items():
        if all(values[n] == 0 for n in zeros) and all(values[n] != 0 for n in nonzeros):
            return ctype
    return None


def canonical_equation(ctype: CanonicalType, params: dict, base: QBase) -> HypEquation:
    """The displayed canonical equation of each type."""
    q = base.q
    if ctype is CanonicalType.HEINE:
        a, b, c = params["a"], params["b"], params["c"]
        return HypEquation(c, -(c + q), q, -a * b * q, (a + b) * q, -q, base)
    if ctype is CanonicalType.ONE_PHI_ONE:
        a, c = params["a"], params["c"]
        return HypEquation(c, -(c + q), q, -a * q, q, 0, base)
    if ctype is CanonicalType.BESSEL_J1:
        t = params["t"]
        return HypEquation(1, -(t + 1 / t), 1, 0, 0, 0.25, base)
    if ctype is CanonicalType.BESSEL_J3:
        t = params["t"]
        return HypEquation(1, -(t + 1 / t), 1, 0, q * q / t, 0, base)
    if ctype is CanonicalType.HERMITE_WEBER:
        return HypEquation(0, 1, -1, params["a"], -1, 0, base)
    if ctype is CanonicalType.AIRY:
        return HypEquation(1, 0, -1, 0, 1, 0, base)
    if ctype is CanonicalType.RAMANUJAN:
        return HypEquation(0, -1, 1, q, 0, 0, base)
    raise DomainError(f"no canonical equation for {ctype}")


@dataclass(frozen=True)
class Classification:
    ctype: CanonicalType
    params: dict
    chain: TransformChain
    canonical_eq: Optional[HypEquation]
    diagnostic: str = ""

    def to_json(self) -> dict:
        return {
            "type": self.ctype.value,
            "params": {k: cjson(v) for k, v in self.params.items()},
            "chain": self.chain.to_json(),
            "canonical_eq": None if self.canonical_eq is None else self.canonical_eq.to_json(),
            "diagnostic": self.diagnostic,
        }


# ---------------------------------------------------------------------------
# search over pattern-changing moves


def _moves(eq: HypEquation) -> list:
    a0, a1, a2, b0, b1, b2 = eq.coeffs
    moves = [TransformStep(StepKind.INVERT)]
    if a0 == 0 and b2 == 0:
        moves.append(TransformStep(StepKind.THETA_GAUGE, 1.0))
    if a2 == 0 and b0 == 0:
        moves.append(TransformStep(StepKind.THETA_DIVIDE, 1.0))
    if b0 == 0 and a0 != 0 and a2 != 0 and b2 != 0:
        moves.append(TransformStep(StepKind.POCH_DIVIDE, -b2 / a2))
    if b2 == 0 and a0 != 0 and b0 != 0 and a2 != 0:
        moves.append(TransformStep(StepKind.POCH_MULTIPLY, -b0 / (a0 * eq.q)))
    return moves


def _is_second_order(eq: HypEquation) -> bool:
    try:
        char_data(eq)
    except DegenerateError:
        return False
    return True


def _search(eq: HypEquation, max_depth: int):
    queue = deque([(eq, TransformChain())])
    seen = {eq.pattern()}
    while queue:
        cur, chain = queue.popleft()
        ctype = match_pattern(cur)
        if ctype is not None:
            return ctype, cur, chain
        if len(chain) >= max_depth:
            continue
        for step in _moves(cur):
            try:
                nxt = apply_step(cur, step)
            except QError:
                continue
            if not isinstance(nxt, HypEquation) or not _is_second_order(nxt):
                continue
            nxt = nxt.normalized()
            if nxt.pattern() in seen:
                continue
            seen.add(nxt.pattern())
            queue.append((nxt, chain.then(step)))
    return None, eq, TransformChain()


# ---------------------------------------------------------------------------
# normalization and parameter extraction


def _near_one(c: complex) -> bool:
    return abs(c - 1) <= _SNAP


def _prefer_unit(roots: tuple) -> complex:
    finite = [r for r in roots if not is_infinite(r) and r != 0]
    for r in finite:
        if _near_one(r):
            return r
    return finite[0]


def _unit_disk_t(m1: complex, m2: complex) -> complex:
    """Representative of {t, 1/t, -t, -1/t} with |t| <= 1 and Re t >= 0."""
    t = m1 if abs(m1) <= abs(m2) else m2
    if abs(abs(m1) - abs(m2)) <= _SNAP * max(abs(m1), 1.0):
        t = m1 if m1.imag >= m2.imag else m2
    if t.real < 0 or (t.real == 0 and t.imag < 0):
        t = -t
    return t


class _Normalizer:
    def __init__(self, eq: HypEquation):
        self.eq = eq
        self.steps: list = []

    def step(self, kind: StepKind, c: complex) -> None:
        if _near_one(c):
            return
        st = TransformStep(kind, c)
        self.eq = apply_step(self.eq, st).normalized()
        self.steps.append(st)

    @property
    def cd(self):
        return char_data(self.eq)


def _normalize(ctype: CanonicalType, eq: HypEquation) -> tuple:
    n = _Normalizer(eq)
    q = eq.q
    cd = n.cd
    if ctype in (CanonicalType.HEINE, CanonicalType.ONE_PHI_ONE):
        n.step(StepKind.POWER_GAUGE, _prefer_unit((cd.mu1, cd.mu2)))
        cd = n.cd
        mu = cd.mu2 if _near_one(cd.mu1) else cd.mu1
        c = q / mu
        if ctype is CanonicalType.HEINE:
            n.step(StepKind.SCALE, 1 / cd.rho2)
            cd = n.cd
            params = {"a": cd.lambda1, "b": cd.lambda2, "c": c}
        else:
            a = cd.lambda1
            n.step(StepKind.SCALE, cd.rho1 * a * q / c)
            params = {"a": a, "c": c}
    elif ctype in (CanonicalType.BESSEL_J1, CanonicalType.BESSEL_J3):
        n.step(StepKind.POWER_GAUGE, cmath.sqrt(cd.mu1 * cd.mu2))
        cd = n.cd
        t = _unit_disk_t(cd.mu1, cd.mu2)
        if min(abs(t - cd.mu1), abs(t - cd.mu2)) > _SNAP * abs(t):
            # t is minus an exponent; flip both signs
            n.step(StepKind.POWER_GAUGE, -1.0)
        e = n.eq
        if ctype is CanonicalType.BESSEL_J1:
            n.step(StepKind.SCALE, 0.25 * e.a0 / e.b2)
        else:
            n.step(StepKind.SCALE, q * q / t * e.a0 / e.b1)
        params = {"t": t}
    elif ctype is CanonicalType.HERMITE_WEBER:
        n.step(StepKind.POWER_GAUGE, _prefer_unit((cd.mu1, cd.mu2)))
        e = n.eq
        n.step(StepKind.SCALE, -e.a1 / e.b1)
        params = {"a": n.cd.lambda1}
    elif ctype is CanonicalType.AIRY:
        n.step(StepKind.POWER_GAUGE, _prefer_unit((cd.mu1, cd.mu2)))
        e = n.eq
        n.step(StepKind.SCALE, e.a0 / e.b1)
        params = {}
    elif ctype is CanonicalType.RAMANUJAN:
        n.step(StepKind.POWER_GAUGE, -eq.a2 / eq.a1)
        e = n.eq
        n.step(StepKind.SCALE, q * e.a2 / e.b0)
        params = {}
    else:
        raise DomainError(f"cannot normalize {ctype}")
    return params, n.steps


def classify_q(eq: HypEquation, zero_tol: float = 0.0, max_depth: int = 4) -> Classification:
    """Canonical type, parameters and reducing chain of an equation."""
    work = eq.with_zeros(zero_tol)
    if not _is_second_order(work):
        raise DegenerateError("equation is not of second order: " + newton_diagram(work).render())
    ctype, matched, chain = _search(work.normalized(), max_depth)
    if ctype is None:
        return Classification(CanonicalType.DEGENERATE, {}, TransformChain(), None,
                              "no canonical zero pattern is reachable from\n" + newton_diagram(work).render())
    params, steps = _normalize(ctype, matched)
    chain = chain.then(*steps)
    canonical = canonical_equation(ctype, params, eq.base)
    reached = chain.apply(work)
    if not isinstance(reached, HypEquation) or not reached.proportional_to(canonical, 1e-8):
        raise NonPolynomial("reduction chain did not reach the canonical equation")
    return Classification(ctype, params, chain, canonical)


def reduce_to_canonical(eq: HypEquation, zero_tol: float = 0.0) -> Classification:
    cls = classify_q(eq, zero_tol)
    if cls.ctype is CanonicalType.DEGENERATE:
        raise DegenerateError(cls.diagnostic)
    return cls


def canonical_inputs(base: QBase, params: Optional[dict] = None) -> dict:
    """The seven canonical equations with default sample parameters."""
    q = base.q
    p = params or {}
    defaults = {
        CanonicalType.HEINE: {"a": q**0.3, "b": q**0.7, "c": q**1.1},
        CanonicalType.ONE_PHI_ONE: {"a": q**0.3, "c": q**1.1},
        CanonicalType.BESSEL_J1: {"t": 0.8},
        CanonicalType.BESSEL_J3: {"t": 0.8},
        CanonicalType.HERMITE_WEBER: {"a": 0.37},
        CanonicalType.AIRY: {},
        CanonicalType.RAMANUJAN: {},
    }
    return {t: canonical_equation(t, {**d, **p.get(t, {})}, base) for t, d in defaults.items()}


# ---------------------------------------------------------------------------
# classical Laplace-type equations


class ClassicalKind(Enum):
    KUMMER = "Kummer_i"
    BESSEL = "Bessel_ii"
    HERMITE_WEBER = "HermiteWeber_iii"
    AIRY = "Airy_iv"
    ELEMENTARY = "Elementary_v"


Number = Union[Fraction, complex]


@dataclass(frozen=True)
class ClassicalCase:
    case: ClassicalKind
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return str(v)
            return cjson(v)

        return {"case": self.case.value, "params": {k: enc(v) for k, v in self.params.items()}}


def _exact(v) -> Number:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError:
            return complex(v)
    if isinstance(v, float) and v.is_integer():
        return Fraction(int(v))
    return complex(v)


def _isqrt_exact(n: int) -> Optional[int]:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def _sqrt(v: Number) -> Number:
    """Exact square root of a rational square, complex principal root otherwise."""
    if isinstance(v, Fraction) and v >= 0:
        num, den = _isqrt_exact(v.numerator), _isqrt_exact(v.denominator)
        if num is not None and den is not None:
            return Fraction(num, den)
    return cmath.sqrt(complex(v))


def classify_classical(a0, a1, a2, b0, b1, b2, sign: int = 1) -> ClassicalCase:
    """Case split and transformation parameters of a Laplace-type equation.

    sign selects the root h = (-b1 + sign sqrt(D)) / (2 b0) in the first case.
    """
    a0, a1, a2, b0, b1, b2 = (_exact(v) for v in (a0, a1, a2, b0, b1, b2))

    def A(h):
        return a0 * h * h + a1 * h + a2

    def dA(h):
        return 2 * a0 * h + a1

    def dB(h):
        return 2 * b0 * h + b1

    delta = b1 * b1 - 4 * b0 * b2
    if b0 != 0 and delta != 0:
        h = (-b1 + sign * _sqrt(delta)) / (2 * b0)
        return ClassicalCase(ClassicalKind.KUMMER, {
            "h": h, "lambda": -b0 / dB(h), "mu": -a0 / b0, "a": A(h) / dB(h),
            "c": (a1 * b0 - a0 * b1) / (b0 * b0), "Delta": delta})
    if b0 != 0:
        h = -b1 / (2 * b0)
        return ClassicalCase(ClassicalKind.BESSEL, {
            "h": h, "lambda": b0, "mu": -a0 / b0, "alpha": Fraction(1, 2) - dA(h) / (2 * b0),
            "beta": 2 * _sqrt(A(h))})
    if a0 * b1 != 0:
        h = -b2 / b1
        return ClassicalCase(ClassicalKind.HERMITE_WEBER, {
            "h": h, "mu": -dA(h) / b1, "a": A(h) / (2 * b1), "k": -b1 / (2 * a0)})
    if b1 == 0 and a0 * b2 != 0:
        return ClassicalCase(ClassicalKind.AIRY, {
            "h": -a1 / (2 * a0), "mu": (a1 * a1 - 4 * a0 * a2) / (4 * a0 * b2),
            "k": Fraction(2, 3) * _sqrt(b2 / a0)})
    return ClassicalCase(ClassicalKind.ELEMENTARY, {})
