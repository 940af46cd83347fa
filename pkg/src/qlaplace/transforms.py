"""Moves between q-difference equations and the matching maps on solutions.

Four moves keep the hypergeometric type for every input:

* ``SCALE(c)``: x -> c x, so v(x) = u(c x).
* ``POWER_GAUGE(c)`` with c = q^gamma: v(x) = x^(-gamma) u(x).
* ``INVERT``: v(x) = u(1/x).
* ``POCH_GAUGE``: v(x) = (rho2 x; q)_inf / (x/(rho1 q); q)_inf * u(x).

Four gauges act on general polynomial coefficients and keep the
hypergeometric type only under zero patterns checked by the caller:

* ``POCH_DIVIDE(s)``: u = v / (s x; q)_inf.
* ``POCH_MULTIPLY(s)``: u = (s x; q)_inf v.
* ``THETA_GAUGE(r)``: u = theta_q(r x) w.
* ``THETA_DIVIDE(r)``: u = w / theta_q(r x).

``SHEAR`` substitutes x = t^2 and passes to the base p = sqrt(q);
``INVERSE_SHEAR`` undoes it.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Union

from .equations import (
    HypEquation,
    PolyEquation,
    char_data,
    cjson,
    cparse,
    is_infinite,
    poly_divide_linear,
    poly_mul,
    poly_scale_arg,
)
from .errors import BranchError, DomainError, InfinityError, NonPolynomial, ZeroParam
from .qcore import QBase, cpow, log_base, qpoch_inf, theta_value

Equation = Union[HypEquation, PolyEquation]
Solution = Callable[[complex], complex]


class StepKind(Enum):
    SCALE = "scale"
    POWER_GAUGE = "power_gauge"
    INVERT = "invert"
    POCH_GAUGE = "poch_gauge"
    POCH_DIVIDE = "poch_divide"
    POCH_MULTIPLY = "poch_multiply"
    THETA_GAUGE = "theta_gauge"
    THETA_DIVIDE = "theta_divide"
    SHEAR = "shear"
    INVERSE_SHEAR = "inverse_shear"


_PARAM_KEY = {
    StepKind.SCALE: "c",
    StepKind.POWER_GAUGE: "c",
    StepKind.POCH_DIVIDE: "s",
    StepKind.POCH_MULTIPLY: "s",
    StepKind.THETA_GAUGE: "r",
    StepKind.THETA_DIVIDE: "r",
}

_INVERSE_KIND = {
    StepKind.SCALE: StepKind.SCALE,
    StepKind.POWER_GAUGE: StepKind.POWER_GAUGE,
    StepKind.INVERT: StepKind.INVERT,
    StepKind.POCH_GAUGE: StepKind.POCH_GAUGE,
    StepKind.POCH_DIVIDE: StepKind.POCH_MULTIPLY,
    StepKind.POCH_MULTIPLY: StepKind.POCH_DIVIDE,
    StepKind.THETA_GAUGE: StepKind.THETA_DIVIDE,
    StepKind.THETA_DIVIDE: StepKind.THETA_GAUGE,
    StepKind.SHEAR: StepKind.INVERSE_SHEAR,
    StepKind.INVERSE_SHEAR: StepKind.SHEAR,
}


@dataclass(frozen=True)
class TransformStep:
    kind: StepKind
    param: Optional[complex] = None

    def __post_init__(self) -> None:
        if self.kind in _PARAM_KEY:
            if self.param is None:
                raise ZeroParam(f"{self.kind.value} needs a parameter")
            p = complex(self.param)
            if p == 0:
                raise ZeroParam(f"{self.kind.value} parameter must be nonzero")
            object.__setattr__(self, "param", p)
        elif self.param is not None:
            object.__setattr__(self, "param", None)

    def inverse(self) -> "TransformStep":
        kind = _INVERSE_KIND[self.kind]
        if self.kind in (StepKind.SCALE, StepKind.POWER_GAUGE):
            return TransformStep(kind, 1 / self.param)
        return TransformStep(kind, self.param)

    def to_json(self) -> dict:
        out = {"kind": self.kind.value}
        if self.kind in _PARAM_KEY:
            out[_PARAM_KEY[self.kind]] = cjson(self.param)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "TransformStep":
        try:
            kind = StepKind(data["kind"])
        except (KeyError, ValueError) as exc:
            raise DomainError(f"unknown transform step {data!r}") from exc
        if kind in _PARAM_KEY:
            return cls(kind, cparse(data[_PARAM_KEY[kind]]))
        return cls(kind)


# ---------------------------------------------------------------------------
# moves on hypergeometric-type equations


def apply_scale(eq: HypEquation, c: complex) -> HypEquation:
    """x -> c x: every b_j is multiplied by c."""
    if c == 0:
        raise ZeroParam("scale factor must be nonzero")
    return HypEquation(eq.a0, eq.a1, eq.a2, c * eq.b0, c * eq.b1, c * eq.b2, eq.base)


def apply_power_gauge(eq: HypEquation, c: complex) -> HypEquation:
    """u = x^gamma v with c = q^gamma: rows rescaled by c^2, c, 1."""
    if c == 0:
        raise ZeroParam("power gauge parameter must be nonzero")
    return HypEquation(c * c * eq.a0, c * eq.a1, eq.a2, c * c * eq.b0, c * eq.b1, eq.b2, eq.base)


def apply_invert(eq: HypEquation) -> HypEquation:
    """x -> 1/x: a' = (b2, b1, b0), b' = q^2 (a2, a1, a0)."""
    q2 = eq.q * eq.q
    return HypEquation(eq.b2, eq.b1, eq.b0, q2 * eq.a2, q2 * eq.a1, q2 * eq.a0, eq.base)


def _finite_rhos(eq: HypEquation) -> tuple:
    cd = char_data(eq)
    r1, r2 = cd.rho1, cd.rho2
    if is_infinite(r1) or is_infinite(r2) or r1 == 0 or r2 == 0:
        raise InfinityError("Pochhammer gauge needs finite nonzero virtual exponents")
    return r1, r2


def apply_poch_gauge(eq: HypEquation) -> HypEquation:
    """v = (rho2 x; q)_inf / (x/(rho1 q); q)_inf * u.

    Only b0 and b2 change: b0' = -a0 rho2 q and b2' = -a2 / (rho1 q).
    """
    r1, r2 = _finite_rhos(eq)
    q = eq.q
    return HypEquation(eq.a0, eq.a1, eq.a2, -eq.a0 * r2 * q, eq.b1, -eq.a2 / (r1 * q), eq.base)


# ---------------------------------------------------------------------------
# gauges on polynomial coefficients


def _as_poly(eq: Equation) -> PolyEquation:
    return PolyEquation.from_hyp(eq) if isinstance(eq, HypEquation) else eq


def gauge_poch_divide(eq: Equation, s: complex) -> PolyEquation:
    """u = v / (s x; q)_inf gives (1 - s q x) a(x), b(x), c(x) / (1 - s x)."""
    if s == 0:
        raise ZeroParam("s must be nonzero")
    p = _as_poly(eq)
    return PolyEquation(poly_mul(p.a, (1, -s * p.q)), p.b, poly_divide_linear(p.c, s), p.base)


def gauge_poch_multiply(eq: Equation, s: complex) -> PolyEquation:
    """u = (s x; q)_inf v gives a(x) / (1 - s q x), b(x), (1 - s x) c(x)."""
    if s == 0:
        raise ZeroParam("s must be nonzero")
    p = _as_poly(eq)
    return PolyEquation(poly_divide_linear(p.a, s * p.q), p.b, poly_mul(p.c, (1, -s)), p.base)


def gauge_theta(eq: Equation, r: complex) -> PolyEquation:
    """u = theta_q(r x) w gives a(x), r q x b(x), r^2 q x^2 c(x)."""
    if r == 0:
        raise ZeroParam("r must be nonzero")
    p = _as_poly(eq)
    q = p.q
    return PolyEquation(p.a, poly_mul(p.b, (0, r * q)), poly_mul(p.c, (0, 0, r * r * q)), p.base)


def gauge_theta_divide(eq: Equation, r: complex) -> PolyEquation:
    """u = w / theta_q(r x) gives r^2 q x^2 a(x), r x b(x), c(x)."""
    if r == 0:
        raise ZeroParam("r must be nonzero")
    p = _as_poly(eq)
    q = p.q
    return PolyEquation(poly_mul(p.a, (0, 0, r * r * q)), poly_mul(p.b, (0, r)), p.c, p.base)


def sqrt_base(base: QBase, branch: Optional[complex] = None) -> QBase:
    """p with p^2 = q; principal unless a branch value is supplied."""
    if branch is not None:
        p = complex(branch)
        if abs(p * p - base.q) > 1e-14 * abs(base.q):
            raise BranchError(f"branch {p} does not square to q = {base.q}")
        return QBase(p)
    if base.q.imag == 0 and base.q.real < 0:
        raise BranchError("q on the negative real axis needs an explicit sqrt branch")
    return QBase(cmath.sqrt(base.q))


def shear(eq: Equation, branch: Optional[complex] = None) -> PolyEquation:
    """x = t^2, p = sqrt(q): coefficients a(t^2), b(t^2), c(t^2) in base p."""
    p = _as_poly(eq)

    def spread(poly):
        out = [0j] * (2 * len(poly) - 1)
        out[::2] = poly
        return tuple(out)

    return PolyEquation(spread(p.a), spread(p.b), spread(p.c), sqrt_base(p.base, branch))


def inverse_shear(eq: Equation, tol: float = 0.0) -> PolyEquation:
    """t^2 = x, q = p^2; needs even coefficients."""
    p = _as_poly(eq)
    if not p.is_even(tol):
        raise NonPolynomial("inverse shear needs even coefficients")
    return PolyEquation(p.a[::2], p.b[::2], p.c[::2], QBase(p.q * p.q))


# ---------------------------------------------------------------------------
# step dispatch


def _hyp_from_poly(p: PolyEquation) -> HypEquation:
    return p.to_hyp()


def apply_step(eq: Equation, step: TransformStep) -> Equation:
    """Apply one step; hypergeometric input gives hypergeometric output where possible."""
    k = step.kind
    if k is StepKind.SHEAR:
        return shear(eq)
    if k is StepKind.INVERSE_SHEAR:
        return inverse_shear(eq)
    if isinstance(eq, PolyEquation):
        if k is StepKind.POCH_DIVIDE:
            return gauge_poch_divide(eq, step.param)
        if k is StepKind.POCH_MULTIPLY:
            return gauge_poch_multiply(eq, step.param)
        if k is StepKind.THETA_GAUGE:
            return gauge_theta(eq, step.param)
        if k is StepKind.THETA_DIVIDE:
            return gauge_theta_divide(eq, step.param)
        if k is StepKind.SCALE:
            return PolyEquation(*(poly_scale_arg(p, step.param) for p in eq.polys), base=eq.base)
        if k is StepKind.POWER_GAUGE:
            c = step.param
            return PolyEquation(tuple(v * c * c for v in eq.a), tuple(v * c for v in eq.b), eq.c, eq.base)
        raise DomainError(f"{k.value} needs an equation of hypergeometric type")
    if k is StepKind.SCALE:
        return apply_scale(eq, step.param)
    if k is StepKind.POWER_GAUGE:
        return apply_power_gauge(eq, step.param)
    if k is StepKind.INVERT:
        return apply_invert(eq)
    if k is StepKind.POCH_GAUGE:
        return apply_poch_gauge(eq)
    general = apply_step(PolyEquation.from_hyp(eq), step)
    try:
        return general.to_hyp()
    except NonPolynomial:
        return general.strip_x_power()


def poch_gauge_steps(eq: HypEquation) -> "TransformChain":
    """The Pochhammer gauge, with the factor-wise fallback for zero or infinite rho.

    rho1 infinite drops the denominator factor and rho2 zero drops the
    numerator factor; a zero rho1 or infinite rho2 is handled by the theta
    gauges when the zero pattern allows it.
    """
    cd = char_data(eq)
    r1, r2 = cd.rho1, cd.rho2
    fin1 = not is_infinite(r1) and r1 != 0
    fin2 = not is_infinite(r2) and r2 != 0
    if fin1 and fin2:
        return TransformChain((TransformStep(StepKind.POCH_GAUGE),))
    steps = []
    if fin2 and is_infinite(r1):
        steps.append(TransformStep(StepKind.POCH_DIVIDE, r2))
    elif fin1 and r2 == 0:
        steps.append(TransformStep(StepKind.POCH_MULTIPLY, 1 / (r1 * eq.q)))
    elif is_infinite(r1) and r2 == 0:
        pass
    elif r1 == 0 and r2 == 0:
        steps.append(TransformStep(StepKind.THETA_GAUGE, 1.0))
    elif is_infinite(r2) and is_infinite(r1):
        steps.append(TransformStep(StepKind.THETA_DIVIDE, 1.0))
    else:
        raise InfinityError("no Pochhammer or theta gauge keeps this equation linear")
    return TransformChain(tuple(steps))


# ---------------------------------------------------------------------------
# solutions


def _poch_gauge_factor(eq: HypEquation) -> Solution:
    r1, r2 = _finite_rhos(eq)
    base = eq.base
    q = eq.q
    return lambda x: qpoch_inf(r2 * x, base) / qpoch_inf(x / (r1 * q), base)


def pullback_solution(step: TransformStep, u: Solution, eq: Equation) -> Solution:
    """Solution of apply_step(eq, step) built from a solution u of eq."""
    k = step.kind
    base = eq.base
    if k is StepKind.SCALE:
        c = step.param
        return lambda x: u(c * x)
    if k is StepKind.POWER_GAUGE:
        gamma = log_base(base, step.param)
        return lambda x: cpow(x, -gamma) * u(x)
    if k is StepKind.INVERT:
        return lambda x: u(1 / x)
    if k is StepKind.POCH_GAUGE:
        g = _poch_gauge_factor(eq)
        return lambda x: g(x) * u(x)
    if k is StepKind.POCH_DIVIDE:
        s = step.param
        return lambda x: qpoch_inf(s * x, base) * u(x)
    if k is StepKind.POCH_MULTIPLY:
        s = step.param
        return lambda x: u(x) / qpoch_inf(s * x, base)
    if k is StepKind.THETA_GAUGE:
        r = step.param
        return lambda x: u(x) / theta_value(base, r * x)
    if k is StepKind.THETA_DIVIDE:
        r = step.param
        return lambda x: theta_value(base, r * x) * u(x)
    if k is StepKind.SHEAR:
        return lambda t: u(t * t)
    if k is StepKind.INVERSE_SHEAR:
        return lambda x: u(cmath.sqrt(x))
    raise DomainError(f"unknown step {k}")


def pushforward_solution(step: TransformStep, v: Solution, eq: Equation) -> Solution:
    """Solution of eq built from a solution v of apply_step(eq, step)."""
    k = step.kind
    base = eq.base
    if k is StepKind.SCALE:
        c = step.param
        return lambda x: v(x / c)
    if k is StepKind.POWER_GAUGE:
        gamma = log_base(base, step.param)
        return lambda x: cpow(x, gamma) * v(x)
    if k is StepKind.INVERT:
        return lambda x: v(1 / x)
    if k is StepKind.POCH_GAUGE:
        g = _poch_gauge_factor(eq)
        return lambda x: v(x) / g(x)
    if k is StepKind.POCH_DIVIDE:
        s = step.param
        return lambda x: v(x) / qpoch_inf(s * x, base)
    if k is StepKind.POCH_MULTIPLY:
        s = step.param
        return lambda x: qpoch_inf(s * x, base) * v(x)
    if k is StepKind.THETA_GAUGE:
        r = step.param
        return lambda x: theta_value(base, r * x) * v(x)
    if k is StepKind.THETA_DIVIDE:
        r = step.param
        return lambda x: v(x) / theta_value(base, r * x)
    if k is StepKind.SHEAR:
        return lambda x: v(cmath.sqrt(x))
    if k is StepKind.INVERSE_SHEAR:
        return lambda t: v(t * t)
    raise DomainError(f"unknown step {k}")


@dataclass(frozen=True)
class TransformChain:
    steps: tuple = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def then(self, *steps: TransformStep) -> "TransformChain":
        return TransformChain(self.steps + tuple(steps))

    def inverse(self) -> "TransformChain":
        return TransformChain(tuple(s.inverse() for s in reversed(self.steps)))

    def trace(self, eq: Equation) -> list:
        """Equations before each step and after the last, normalized along the way."""
        seq = [eq]
        for step in self.steps:
            out = apply_step(seq[-1], step)
            if isinstance(out, HypEquation):
                out = out.normalized()
            seq.append(out)
        return seq

    def apply(self, eq: Equation) -> Equation:
        return self.trace(eq)[-1]

    def pullback(self, u: Solution, eq: Equation) -> Solution:
        """Solution of apply(eq) from a solution u of eq."""
        seq = self.trace(eq)
        for step, source in zip(self.steps, seq):
            u = pullback_solution(step, u, source)
        return u

    def pushforward(self, v: Solution, eq: Equation) -> Solution:
        """Solution of eq from a solution v of apply(eq)."""
        seq = self.trace(eq)
        for step, source in reversed(list(zip(self.steps, seq))):
            v = pushforward_solution(step, v, source)
        return v

    def to_json(self) -> list:
        return [s.to_json() for s in self.steps]

    @classmethod
    def from_json(cls, data: Sequence[dict]) -> "TransformChain":
        return cls(tuple(TransformStep.from_json(d) for d in data))
