"""Second-order q-difference equations with linear coefficients.

An equation of hypergeometric type reads

    (a0 + b0 x) u(x q^2) + (a1 + b1 x) u(x q) + (a2 + b2 x) u(x) = 0.

This module holds that data model, its exponent data (Riemann scheme), its
Newton diagram, and the residual harness used to check solution claims.  A
general polynomial-coefficient equation is also provided because several
gauge moves pass through coefficients of higher degree.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DegenerateError, DomainError, FuchsViolation, InfinityError, NonPolynomial
from .qcore import QBase


class _Infinity:
    """Marker for an infinite characteristic or virtual exponent."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "∞"


INFINITY = _Infinity()
ExtendedComplex = Union[complex, _Infinity]


def is_infinite(v) -> bool:
    return v is INFINITY


def _phase_key(z: complex) -> float:
    ph = cmath.phase(z)
    return ph + 2 * math.pi if ph < 0 else ph


def sort_exponents(values: Sequence[ExtendedComplex]) -> tuple:
    """Finite values by (magnitude, phase in [0, 2pi)), then infinities."""
    finite = sorted((v for v in values if not is_infinite(v)), key=lambda z: (abs(z), _phase_key(z)))
    return tuple(finite) + tuple(v for v in values if is_infinite(v))


def quad_roots(c2: complex, c1: complex, c0: complex) -> tuple:
    """Roots of c2 z^2 + c1 z + c0, with INFINITY for each lost degree."""
    if c2 != 0:
        disc = cmath.sqrt(c1 * c1 - 4 * c2 * c0)
        s = c1 + disc if abs(c1 + disc) >= abs(c1 - disc) else c1 - disc
        if s == 0:
            return sort_exponents((0j, 0j))
        return sort_exponents((-s / (2 * c2), -2 * c0 / s))
    if c1 != 0:
        return sort_exponents((-c0 / c1, INFINITY))
    return (INFINITY, INFINITY)


@dataclass(frozen=True)
class HypEquation:
    """Coefficients a0..a2, b0..b2 of an equation of hypergeometric type."""

    a0: complex
    a1: complex
    a2: complex
    b0: complex
    b1: complex
    b2: complex
    base: QBase

    def __post_init__(self) -> None:
        for name in ("a0", "a1", "a2", "b0", "b1", "b2"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if isinstance(self.base, (int, float, complex)):
            object.__setattr__(self, "base", QBase(self.base))
        if all(c == 0 for c in self.coeffs):
            raise DomainError("all six coefficients vanish")

    @classmethod
    def from_rows(cls, a: Sequence[complex], b: Sequence[complex], q) -> "HypEquation":
        base = q if isinstance(q, QBase) else QBase(q)
        return cls(a[0], a[1], a[2], b[0], b[1], b[2], base)

    @property
    def a(self) -> tuple:
        return (self.a0, self.a1, self.a2)

    @property
    def b(self) -> tuple:
        return (self.b0, self.b1, self.b2)

    @property
    def coeffs(self) -> tuple:
        return (self.a0, self.a1, self.a2, self.b0, self.b1, self.b2)

    @property
    def q(self) -> complex:
        return self.base.q

    def coefficients_at(self, x: complex) -> tuple:
        return tuple(a + b * x for a, b in zip(self.a, self.b))

    def scaled(self, factor: complex) -> "HypEquation":
        return HypEquation(*(c * factor for c in self.coeffs), self.base)

    def normalized(self) -> "HypEquation":
        """Divide by the coefficient of largest magnitude."""
        big = max(self.coeffs, key=abs)
        return self.scaled(1 / big)

    def with_zeros(self, zero_tol: float) -> "HypEquation":
        """Set coefficients below zero_tol times the largest magnitude to exact zero."""
        if zero_tol <= 0:
            return self
        cut = zero_tol * max(abs(c) for c in self.coeffs)
        return HypEquation(*(0j if abs(c) <= cut else c for c in self.coeffs), self.base)

    def pattern(self) -> tuple:
        """Nonzero flags in the order a0, a1, a2, b0, b1, b2."""
        return tuple(c != 0 for c in self.coeffs)

    def proportional_to(self, other: "HypEquation", tol: float = 1e-10) -> bool:
        return coefficient_distance(self.coeffs, other.coeffs) <= tol

    def to_json(self) -> dict:
        return {"q": cjson(self.q), "a": [cjson(c) for c in self.a], "b": [cjson(c) for c in self.b]}

    @classmethod
    def from_json(cls, data: dict) -> "HypEquation":
        try:
            q = cparse(data["q"])
            a = [cparse(v) for v in data["a"]]
            b = [cparse(v) for v in data["b"]]
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed equation JSON: {exc}") from exc
        if len(a) != 3 or len(b) != 3:
            raise DomainError("equation JSON needs three a and three b coefficients")
        return cls.from_rows(a, b, q)


def cjson(z) -> list:
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]


def cparse(v) -> complex:
    """Parse [re, im], a number, or a string such as '1-2j'."""
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise DomainError(f"complex value must be [re, im], got {v}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", ""))
        except ValueError as exc:
            raise DomainError(f"cannot parse complex value {v!r}") from exc
    if isinstance(v, (int, float, complex)):
        return complex(v)
    raise DomainError(f"cannot parse complex value {v!r}")


def coefficient_distance(u: Sequence[complex], v: Sequence[complex]) -> float:
    """Distance between two coefficient vectors taken up to a nonzero scalar."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        return 0.0 if nu == nv else 1.0
    u = u / nu
    v = v / nv
    # best unit-modulus alignment
    inner = np.vdot(v, u)
    phase = inner / abs(inner) if inner != 0 else 1.0
    return float(np.linalg.norm(u - phase * v))


# ---------------------------------------------------------------------------
# exponents


@dataclass(frozen=True)
class CharData:
    mu1: ExtendedComplex
    mu2: ExtendedComplex
    lambda1: ExtendedComplex
    lambda2: ExtendedComplex
    rho1: ExtendedComplex
    rho2: ExtendedComplex

    @property
    def all_values(self) -> tuple:
        return (self.mu1, self.mu2, self.lambda1, self.lambda2, self.rho1, self.rho2)


def _ratio(num: complex, den: complex) -> ExtendedComplex:
    return INFINITY if den == 0 else -num / den


def char_data(eq: HypEquation) -> CharData:
    """Characteristic exponents at 0 and infinity and the two virtual exponents."""
    if eq.a0 == 0 and eq.b0 == 0:
        raise DegenerateError("coefficient of u(xq^2) vanishes identically")
    if eq.a2 == 0 and eq.b2 == 0:
        raise DegenerateError("coefficient of u(x) vanishes identically")
    mu = quad_roots(eq.a0, eq.a1, eq.a2)
    lam = quad_roots(eq.b2, eq.b1, eq.b0)
    return CharData(mu[0], mu[1], lam[0], lam[1], _ratio(eq.a0, eq.b0), _ratio(eq.b2, eq.a2))


def fuchs_product(cd: CharData) -> complex:
    """rho1 rho2 lambda1 lambda2 mu1 mu2; equal to 1 whenever it is defined."""
    prod = 1.0 + 0.0j
    for v in cd.all_values:
        if is_infinite(v) or v == 0:
            raise InfinityError("product needs six finite nonzero exponents")
        prod *= v
    return prod


@dataclass(frozen=True)
class RiemannScheme:
    zero: tuple
    infinity: tuple
    star: tuple
    argument: str = "x"

    @classmethod
    def from_char_data(cls, cd: CharData, argument: str = "x") -> "RiemannScheme":
        return cls((cd.mu1, cd.mu2), (cd.lambda1, cd.lambda2), (cd.rho1, cd.rho2), argument)

    def to_char_data(self) -> CharData:
        return CharData(*self.zero, *self.infinity, *self.star)

    def to_json(self) -> dict:
        def enc(v):
            return "inf" if is_infinite(v) else cjson(v)

        return {"0": [enc(v) for v in self.zero], "inf": [enc(v) for v in self.infinity],
                "*": [enc(v) for v in self.star], "argument": self.argument}

    def render(self, digits: int = 6) -> str:
        def fmt(v):
            if is_infinite(v):
                return "∞"
            v = complex(v) + 0.0
            if abs(v.imag) <= 1e-14 * max(1.0, abs(v.real)):
                return f"{v.real:.{digits}g}"
            return f"{v.real:.{digits}g}{v.imag:+.{digits}g}j"

        cols = [("0", self.zero), ("∞", self.infinity), ("*", self.star)]
        cells = [[h, fmt(p[0]), fmt(p[1])] for h, p in cols]
        width = max(len(c) for col in cells for c in col)
        lines = []
        for row in range(3):
            line = "  ".join(col[row].rjust(width) for col in cells)
            if row == 1:
                line += f" ; {self.argument}"
            lines.append("{ " + line + " }" if row == 1 else "  " + line)
        return "\n".join(lines)


def riemann_scheme(eq: HypEquation) -> RiemannScheme:
    return RiemannScheme.from_char_data(char_data(eq))


def papperitz_build(scheme: RiemannScheme, base: QBase, tol: float = 1e-10) -> HypEquation:
    """Equation written through its exponents alone.

    lambda1 lambda2 (x - rho1) u(xq^2)
      - ((lambda1 + lambda2) x - lambda1 lambda2 rho1 (mu1 + mu2)) u(xq)
      + (x - lambda1 lambda2 mu1 mu2 rho1) u(x) = 0
    """
    cd = scheme.to_char_data()
    prod = fuchs_product(cd)
    if abs(prod - 1) > tol:
        raise FuchsViolation(f"exponent product is {prod}, not 1")
    m1, m2, l1, l2, r1, _ = cd.all_values
    ll = l1 * l2
    return HypEquation(-ll * r1, ll * r1 * (m1 + m2), -ll * m1 * m2 * r1, ll, -(l1 + l2), 1.0, base)


# ---------------------------------------------------------------------------
# Newton diagram


@dataclass(frozen=True)
class NewtonDiagram:
    """Occupancy rows (a-row, b-row); column j holds the coefficient a_j or b_j."""

    occupancy: tuple

    def render(self) -> str:
        rows = [("b", self.occupancy[1]), ("a", self.occupancy[0])]
        return "\n".join(f"{name}: " + " ".join("●" if f else "○" for f in flags) for name, flags in rows)

    def to_json(self) -> dict:
        return {"a": list(self.occupancy[0]), "b": list(self.occupancy[1])}


def newton_diagram(eq: HypEquation, zero_tol: float = 0.0) -> NewtonDiagram:
    cut = zero_tol * max(abs(c) for c in eq.coeffs) if zero_tol > 0 else 0.0
    a = tuple(abs(c) > cut for c in eq.a)
    b = tuple(abs(c) > cut for c in eq.b)
    return NewtonDiagram((a, b))


# ---------------------------------------------------------------------------
# general polynomial coefficients


def _trim(p: Sequence[complex]) -> tuple:
    p = [complex(c) for c in p]
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p) if p else (0j,)


def poly_eval(p: Sequence[complex], x: complex) -> complex:
    acc = 0j
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_mul(p: Sequence[complex], r: Sequence[complex]) -> tuple:
    return _trim(np.polynomial.polynomial.polymul(np.asarray(p, complex), np.asarray(r, complex)))


def poly_scale_arg(p: Sequence[complex], c: complex) -> tuple:
    """Coefficients of p(c x)."""
    return _trim([coef * c**k for k, coef in enumerate(p)])


def poly_divide_linear(p: Sequence[complex], s: complex, tol: float = 1e-12) -> tuple:
    """p(x) / (1 - s x), refusing when the remainder is not negligible."""
    if s == 0:
        return _trim(p)
    quo, rem = np.polynomial.polynomial.polydiv(np.asarray(p, complex), np.asarray([1, -s], complex))
    scale = max(abs(c) for c in p) or 1.0
    if np.max(np.abs(rem)) > tol * scale:
        raise NonPolynomial(f"1 - ({s}) x does not divide the coefficient")
    return _trim(quo)


@dataclass(frozen=True)
class PolyEquation:
    """a(x) u(xq^2) + b(x) u(xq) + c(x) u(x) = 0 with polynomial a, b, c (ascending powers)."""

    a: tuple
    b: tuple
    c: tuple
    base: QBase

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, _trim(getattr(self, name)))
        if isinstance(self.base, (int, float, complex)):
            object.__setattr__(self, "base", QBase(self.base))

    @classmethod
    def from_hyp(cls, eq: HypEquation) -> "PolyEquation":
        return cls((eq.a0, eq.b0), (eq.a1, eq.b1), (eq.a2, eq.b2), eq.base)

    @property
    def q(self) -> complex:
        return self.base.q

    @property
    def polys(self) -> tuple:
        return (self.a, self.b, self.c)

    @property
    def degree(self) -> int:
        return max(len(p) for p in self.polys) - 1

    def coefficients_at(self, x: complex) -> tuple:
        return tuple(poly_eval(p, x) for p in self.polys)

    def strip_x_power(self) -> "PolyEquation":
        """Divide all coefficients by the largest common power of x."""
        lows = [next(i for i, coef in enumerate(p) if coef != 0) for p in self.polys if any(p)]
        k = min(lows) if lows else 0
        if k == 0:
            return self
        return PolyEquation(*(p[k:] if len(p) > k else (0j,) for p in self.polys), base=self.base)

    def scaled(self, factor: complex) -> "PolyEquation":
        return PolyEquation(*(tuple(c * factor for c in p) for p in self.polys), base=self.base)

    def to_hyp(self) -> HypEquation:
        eq = self.strip_x_power()
        if eq.degree > 1:
            raise NonPolynomial(f"coefficients have degree {eq.degree}; not of hypergeometric type")
        a, b, c = (tuple(p) + (0j,) * (2 - len(p)) for p in eq.polys)
        return HypEquation(a[0], b[0], c[0], a[1], b[1], c[1], self.base)

    def is_even(self, tol: float = 0.0) -> bool:
        return all(abs(coef) <= tol for p in self.polys for coef in p[1::2])

    def proportional_to(self, other: "PolyEquation", tol: float = 1e-10) -> bool:
        n = max(self.degree, other.degree) + 1

        def flat(e):
            return [coef for p in e.polys for coef in (tuple(p) + (0j,) * (n - len(p)))]

        return coefficient_distance(flat(self), flat(other)) <= tol


# ---------------------------------------------------------------------------
# residual harness


def residual(eq, u: Callable[[complex], complex], x: complex) -> tuple:
    """Raw and relative residual of u in eq at x.

    eq is any object with coefficients_at(x) and a base; the relative value
    divides by the largest of the three term magnitudes (0 if all vanish).
    """
    q = eq.base.q
    c2, c1, c0 = eq.coefficients_at(x)
    terms = (c2 * u(x * q * q), c1 * u(x * q), c0 * u(x))
    raw = terms[0] + terms[1] + terms[2]
    big = max(abs(t) for t in terms)
    return raw, (abs(raw) / big if big > 0 else 0.0)


def max_relative_residual(eq, u: Callable[[complex], complex], xs: Sequence[complex]) -> float:
    return max(residual(eq, u, x)[1] for x in xs)
