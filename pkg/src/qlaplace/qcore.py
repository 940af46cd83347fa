"""q-Pochhammer symbols, the Jacobi theta function and basic hypergeometric series.

All evaluators return an :class:`EvalResult` carrying a value together with a
claimed bound on its absolute error.  The bound has two parts:

* a truncation part from a geometric majorant of the remaining terms, and
* a rounding part proportional to the number of operations and the sum of
  the magnitudes of the terms.

Evaluation runs in Python complex arithmetic by default.  Setting
``working_extra_digits`` reruns the same code on ``mpmath.mpc`` numbers at
``16 + working_extra_digits`` decimal digits and rounds the result back.
"""
from __future__ import annotations

import cmath
import math
import sys
from dataclasses import dataclass, field
from typing import Callable, Sequence

import mpmath

from .errors import DomainError, NonConvergence, PoleError

_EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class QBase:
    """The base q of all products and series, with 0 < |q| < 1."""

    q: complex

    def __post_init__(self) -> None:
        q = complex(self.q)
        if not 0.0 < abs(q) < 1.0:
            raise DomainError(f"base must satisfy 0 < |q| < 1, got {q}")
        object.__setattr__(self, "q", q)

    @property
    def is_real(self) -> bool:
        return self.q.imag == 0.0 and self.q.real > 0.0

    def power(self, k: int) -> "QBase":
        return QBase(self.q**k)


@dataclass(frozen=True)
class EvalOptions:
    rel_tol: float = 1e-15
    max_terms: int = 10000
    working_extra_digits: int = 0

    def __post_init__(self) -> None:
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be at least 1")
        if self.working_extra_digits < 0:
            raise DomainError("working_extra_digits must be nonnegative")


DEFAULT_OPTIONS = EvalOptions()


@dataclass(frozen=True)
class EvalResult:
    value: complex
    err_bound: float
    terms_used: int

    def __complex__(self) -> complex:
        return self.value


@dataclass(frozen=True)
class SeriesSpec:
    """Parameters of the series r phi s (upper; lower; q, z)."""

    upper: tuple
    lower: tuple
    base: QBase
    z: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "upper", tuple(complex(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(complex(b) for b in self.lower))
        object.__setattr__(self, "z", complex(self.z))

    @property
    def exponent(self) -> int:
        """Power of the factor (-1)^n q^(n(n-1)/2) in the n-th term."""
        return 1 + len(self.lower) - len(self.upper)


@dataclass
class _Arith:
    """Number type and machine epsilon used by one evaluation."""

    conv: Callable
    eps: float
    digits: int = 0
    extra: dict = field(default_factory=dict)


def _run(opts: EvalOptions, fn: Callable[..., EvalResult], *args) -> EvalResult:
    if opts.working_extra_digits == 0:
        return fn(_Arith(complex, _EPS), *args)
    dps = 16 + opts.working_extra_digits
    with mpmath.workdps(dps):
        res = fn(_Arith(mpmath.mpc, float(mpmath.mpf(10) ** (-dps)), dps), *args)
        value = complex(res.value)
    return EvalResult(value, float(res.err_bound) + abs(value) * _EPS, res.terms_used)


def _is_zero_factor(factor, term, eps: float) -> bool:
    """True when 1 - term vanishes up to the rounding of term itself."""
    return abs(factor) <= 8.0 * eps * max(1.0, abs(term))


# ---------------------------------------------------------------------------
# Pochhammer symbols


def qpoch_finite(a: complex, base: QBase, n: int) -> complex:
    """(a;q)_n = (1-a)(1-aq)...(1-aq^(n-1)); (a;q)_0 = 1."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    value = 1.0 + 0.0j
    aqk = complex(a)
    for _ in range(n):
        value *= 1.0 - aqk
        aqk *= base.q
    return value


def qpoch_multi(params: Sequence[complex], base: QBase, n: int) -> complex:
    """(a_1,...,a_r;q)_n as the product of the single symbols."""
    value = 1.0 + 0.0j
    for a in params:
        value *= qpoch_finite(a, base, n)
    return value


def _qpoch_inf(ar: _Arith, a, base: QBase, opts: EvalOptions) -> EvalResult:
    q = ar.conv(base.q)
    aq = ar.conv(a)
    absq = abs(base.q)
    value = ar.conv(1)
    rel_round = 0.0
    for k in range(opts.max_terms):
        factor = 1 - aq
        if _is_zero_factor(factor, aq, ar.eps):
            return EvalResult(0j, 0.0, k + 1)
        value *= factor
        rel_round += ar.eps * (1.0 + 2.0 * float(abs(aq)) / float(abs(factor)))
        aq *= q
        rest = float(abs(aq)) / (1.0 - absq)
        if rest > 1.0:
            continue
        trunc = math.expm1(rest)
        if trunc <= opts.rel_tol or rest == 0.0:
            mag = float(abs(value))
            return EvalResult(value, mag * (trunc + math.expm1(rel_round)), k + 1)
    raise NonConvergence(f"(a;q)_inf did not converge in {opts.max_terms} factors")


def qpoch_infinite(a: complex, base: QBase, opts: EvalOptions = DEFAULT_OPTIONS) -> EvalResult:
    """(a;q)_inf = prod_{k>=0} (1 - a q^k)."""
    return _run(opts, _qpoch_inf, a, base, opts)


def qpoch_inf(a: complex, base: QBase, opts: EvalOptions = DEFAULT_OPTIONS) -> complex:
    return qpoch_infinite(a, base, opts).value


# ---------------------------------------------------------------------------
# Theta function


def _theta(ar: _Arith, x, base: QBase, opts: EvalOptions) -> EvalResult:
    q = ar.conv(base.q)
    x = ar.conv(x)
    absq = abs(base.q)
    pref = ar.conv(1)
    steps = 0
    # quasi-periodicity: theta(x) = x theta(qx) = (q/x) theta(x/q)
    while abs(x) > 1.0:
        pref *= x
        x *= q
        steps += 1
    while abs(x) < absq:
        pref *= q / x
        x /= q
        steps += 1
    parts = [_qpoch_inf(ar, q, base, opts), _qpoch_inf(ar, -x, base, opts),
             _qpoch_inf(ar, -q / x, base, opts)]
    value = pref
    rel = (steps + 3) * ar.eps
    terms = 0
    for part in parts:
        value *= part.value
        terms += part.terms_used
        if part.value == 0:
            return EvalResult(0j, 0.0, terms)
        rel += float(part.err_bound) / float(abs(part.value))
    return EvalResult(value, float(abs(value)) * rel, terms)


def theta(base: QBase, x: complex, opts: EvalOptions = DEFAULT_OPTIONS) -> EvalResult:
    """theta_q(x) = (q, -x, -q/x; q)_inf, which satisfies x theta_q(qx) = theta_q(x)."""
    if x == 0:
        raise DomainError("theta_q is not defined at x = 0")
    return _run(opts, _theta, x, base, opts)


def theta_value(base: QBase, x: complex, opts: EvalOptions = DEFAULT_OPTIONS) -> complex:
    return theta(base, x, opts).value


# ---------------------------------------------------------------------------
# Basic hypergeometric series


def _terminating_index(upper: Sequence[complex], base: QBase, max_terms: int) -> int | None:
    """Smallest m with some a = q^(-m), 0 <= m <= max_terms, else None."""
    best = None
    logq = cmath.log(base.q)
    for a in upper:
        if a == 0:
            continue
        m = round((-cmath.log(a) / logq).real)
        if 0 <= m <= max_terms:
            t = a * base.q**m
            if _is_zero_factor(1.0 - t, t, _EPS):
                best = m if best is None else min(best, m)
    return best


def _phi(ar: _Arith, spec: SeriesSpec, opts: EvalOptions, stop: int | None) -> EvalResult:
    q = ar.conv(spec.base.q)
    z = ar.conv(spec.z)
    ups = [ar.conv(a) for a in spec.upper]
    lows = [ar.conv(b) for b in spec.lower]
    k = spec.exponent
    absq = abs(spec.base.q)
    absz = abs(spec.z)
    abs_up = [abs(a) for a in spec.upper]
    abs_low = [abs(b) for b in spec.lower]
    round_c = 4.0 * (len(ups) + len(lows) + 3)

    total = ar.conv(0)
    term = ar.conv(1)
    abs_sum = 0.0
    qn = ar.conv(1)
    qn_abs = 1.0
    good = 0
    for n in range(opts.max_terms):
        total += term
        abs_sum += float(abs(term))
        num = ar.conv(1)
        for a in ups:
            f = 1 - a * qn
            if stop is not None and _is_zero_factor(f, a * qn, ar.eps):
                f = ar.conv(0)
            num *= f
        den = 1 - q * qn
        for b in lows:
            f = 1 - b * qn
            if _is_zero_factor(f, b * qn, ar.eps):
                raise PoleError(f"lower parameter {complex(b)} equals q^(-{n})")
            den *= f
        if num == 0:
            err = round_c * (n + 1) * ar.eps * abs_sum
            return EvalResult(total, err, n + 1)
        ratio = num / den * z
        if k != 0:
            ratio *= (-qn) ** k
        term_next = term * ratio
        # majorant for |t_{m+1}/t_m|, m >= n+1
        qn1 = qn_abs * absq
        if k >= 0 and all(bq * qn1 < 1.0 for bq in abs_low):
            rho = absz * qn1**k / (1.0 - qn1 * absq)
            for aa in abs_up:
                rho *= 1.0 + aa * qn1
            for bb in abs_low:
                rho /= 1.0 - bb * qn1
            if rho < 1.0:
                good += 1
                tail = float(abs(term_next)) / (1.0 - rho)
                scale = max(float(abs(total)), ar.eps * abs_sum)
                if good >= 3 and tail <= opts.rel_tol * scale:
                    err = tail + round_c * (n + 1) * ar.eps * (abs_sum + tail)
                    return EvalResult(total, err, n + 1)
        term = term_next
        qn *= q
        qn_abs = qn1
    raise NonConvergence(f"series did not converge in {opts.max_terms} terms")


def phi_rs(spec: SeriesSpec, opts: EvalOptions = DEFAULT_OPTIONS) -> EvalResult:
    """Sum of r phi s (a_1..a_r; b_1..b_s; q, z).

    The n-th term is (a;q)_n / ((q;q)_n (b;q)_n) [(-1)^n q^(n(n-1)/2)]^(1+s-r) z^n.
    """
    if spec.z == 0:
        return EvalResult(1.0 + 0.0j, 0.0, 1)
    stop = _terminating_index(spec.upper, spec.base, opts.max_terms)
    k = spec.exponent
    if stop is None:
        if k < 0:
            raise DomainError("series with more than s+1 upper parameters diverges")
        if k == 0 and abs(spec.z) >= 1.0:
            raise DomainError(f"|z| = {abs(spec.z):.6g} >= 1 outside the disk of convergence")
    return _run(opts, _phi, spec, opts, stop)


def phi(upper: Sequence[complex], lower: Sequence[complex], base: QBase, z: complex,
        opts: EvalOptions = DEFAULT_OPTIONS) -> complex:
    """Value of r phi s; shorthand used throughout the library."""
    return phi_rs(SeriesSpec(tuple(upper), tuple(lower), base, z), opts).value


def lq_exponent(base: QBase, x: float) -> float:
    """lq x = ln x / ln q, for real 0 < q < 1 and x > 0."""
    if not base.is_real:
        raise DomainError("lq requires a real base in (0, 1)")
    xc = complex(x)
    if xc.imag != 0.0 or xc.real <= 0.0:
        raise DomainError(f"lq requires x > 0, got {x}")
    return math.log(xc.real) / math.log(base.q.real)


def lq_phase(base: QBase, x: float) -> complex:
    """exp(i pi lq x); it changes sign under x -> qx."""
    return cmath.exp(1j * math.pi * lq_exponent(base, x))


def cpow(x: complex, nu: complex) -> complex:
    """Principal power x^nu = exp(nu log x)."""
    if x == 0:
        if nu == 0:
            return 1 + 0j
        if complex(nu).real > 0:
            return 0j
        raise DomainError("0 raised to a power with nonpositive real part")
    return cmath.exp(nu * cmath.log(x))


def log_base(base: QBase, c: complex) -> complex:
    """Principal gamma with q^gamma = c."""
    if c == 0:
        raise DomainError("log of zero")
    return cmath.log(c) / cmath.log(base.q)
