"""2x2 systems Y(xq) = (A0 + A1 x) Y(x).

Matrices are plain nested tuples ((m11, m12), (m21, m22)) of complex numbers.
A system is classified by the similarity classes of A0 and A1 (invertible,
rank one with nonzero trace, or nonzero nilpotent) and, when A1 has rank
one, by whether det A(x) is constant.  Inversion x -> 1/x combined with a
scalar gauge maps (A0, A1) to (adj A1, q adj A0), which swaps the roles of
the two matrices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

from .classify import CanonicalType, Classification, classify_q
from .equations import HypEquation, PolyEquation, cjson, coefficient_distance, cparse, quad_roots
from .errors import DomainError, ExcludedInput, NonPolynomial, PreconditionError
from .qcore import QBase, cpow, log_base, lq_phase, phi, qpoch_inf, theta_value
from .qfunctions import LAPLACE_LAMBDA, borel_laplace_2phi0
from .transforms import StepKind, TransformStep, apply_step

Mat = tuple

DEFAULT_ZERO_TOL = 1e-12


# ---------------------------------------------------------------------------
# 2x2 helpers


def mat(rows: Sequence[Sequence[complex]]) -> Mat:
    return tuple(tuple(complex(v) for v in row) for row in rows)


def mat_add(m: Mat, n: Mat) -> Mat:
    return tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(m, n))


def mat_scale(m: Mat, c: complex) -> Mat:
    return tuple(tuple(c * a for a in r) for r in m)


def mat_mul(m: Mat, n: Mat) -> Mat:
    return tuple(tuple(sum(m[i][k] * n[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def det2(m: Mat) -> complex:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def tr2(m: Mat) -> complex:
    return m[0][0] + m[1][1]


def adj2(m: Mat) -> Mat:
    return ((m[1][1], -m[0][1]), (-m[1][0], m[0][0]))


def inv2(m: Mat) -> Mat:
    d = det2(m)
    if d == 0:
        raise DomainError("singular matrix")
    return mat_scale(adj2(m), 1 / d)


def norm2(m: Mat) -> float:
    return max(abs(v) for r in m for v in r)


# ---------------------------------------------------------------------------
# equation type


@dataclass(frozen=True)
class MatrixEquation:
    A0: Mat
    A1: Mat
    base: QBase

    def __post_init__(self) -> None:
        object.__setattr__(self, "A0", mat(self.A0))
        object.__setattr__(self, "A1", mat(self.A1))
        if isinstance(self.base, (int, float, complex)):
            object.__setattr__(self, "base", QBase(self.base))

    @property
    def q(self) -> complex:
        return self.base.q

    def at(self, x: complex) -> Mat:
        return mat_add(self.A0, mat_scale(self.A1, x))

    def det_poly(self) -> tuple:
        """Coefficients (d0, d1, d2) of det A(x)."""
        (a11, a12), (a21, a22) = self.A0
        (b11, b12), (b21, b22) = self.A1
        return (a11 * a22 - a12 * a21,
                a11 * b22 + b11 * a22 - a12 * b21 - b12 * a21,
                b11 * b22 - b12 * b21)

    def check_excluded(self, zero_tol: float = 0.0) -> None:
        scale = max(norm2(self.A0), norm2(self.A1))
        if norm2(self.A0) <= zero_tol * scale or norm2(self.A1) <= zero_tol * scale:
            raise ExcludedInput("A0 or A1 is the zero matrix")
        if all(abs(d) <= zero_tol * scale * scale for d in self.det_poly()):
            raise ExcludedInput("det A(x) vanishes identically")

    def conjugate(self, P: Mat) -> "MatrixEquation":
        """Y = P Z gives Z(xq) = P^-1 A(x) P Z(x)."""
        Pi = inv2(P)
        return MatrixEquation(mat_mul(Pi, mat_mul(self.A0, P)), mat_mul(Pi, mat_mul(self.A1, P)), self.base)

    def scale_x(self, c: complex) -> "MatrixEquation":
        return MatrixEquation(self.A0, mat_scale(self.A1, c), self.base)

    def power_gauge(self, c: complex) -> "MatrixEquation":
        return MatrixEquation(mat_scale(self.A0, c), mat_scale(self.A1, c), self.base)

    def inverted(self) -> "MatrixEquation":
        """x -> 1/x with the scalar gauge that keeps the system linear in x."""
        return MatrixEquation(adj2(self.A1), mat_scale(adj2(self.A0), self.q), self.base)

    def to_json(self) -> dict:
        return {"q": cjson(self.q),
                "A0": [[cjson(v) for v in r] for r in self.A0],
                "A1": [[cjson(v) for v in r] for r in self.A1]}

    @classmethod
    def from_json(cls, data: dict) -> "MatrixEquation":
        try:
            A0 = [[cparse(v) for v in r] for r in data["A0"]]
            A1 = [[cparse(v) for v in r] for r in data["A1"]]
            q = cparse(data["q"])
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed matrix JSON: {exc}") from exc
        if len(A0) != 2 or len(A1) != 2 or any(len(r) != 2 for r in A0 + A1):
            raise DomainError("A0 and A1 must be 2x2")
        return cls(A0, A1, QBase(q))


class MatrixCanonicalType(Enum):
    M1_2PHI1 = "M1_2phi1"
    M2_1PHI1 = "M2_1phi1"
    M31_E1 = "M31_E1"
    M32_E3 = "M32_E3"
    M33_HERMITE_WEBER = "M33_HermiteWeber"
    M41_QAIRY = "M41_QAiry"
    M42_RAMANUJAN = "M42_Ramanujan"
    M5_FIRST_ORDER = "M5_FirstOrder"


SCALAR_TYPE = {
    MatrixCanonicalType.M1_2PHI1: CanonicalType.HEINE,
    MatrixCanonicalType.M2_1PHI1: CanonicalType.ONE_PHI_ONE,
    MatrixCanonicalType.M31_E1: CanonicalType.BESSEL_J1,
    MatrixCanonicalType.M32_E3: CanonicalType.BESSEL_J3,
    MatrixCanonicalType.M33_HERMITE_WEBER: CanonicalType.HERMITE_WEBER,
    MatrixCanonicalType.M41_QAIRY: CanonicalType.AIRY,
    MatrixCanonicalType.M42_RAMANUJAN: CanonicalType.RAMANUJAN,
}


def default_params(mtype: MatrixCanonicalType, base: QBase) -> dict:
    q = base.q
    if mtype is MatrixCanonicalType.M1_2PHI1:
        return {"a": q**0.3, "b": q**0.7, "c": q**1.1}
    if mtype is MatrixCanonicalType.M2_1PHI1:
        return {"a": q**0.3, "c": q**1.1}
    if mtype in (MatrixCanonicalType.M31_E1, MatrixCanonicalType.M32_E3):
        return {"t": 0.8}
    if mtype is MatrixCanonicalType.M33_HERMITE_WEBER:
        return {"a": 0.37}
    return {}


def canonical_matrices(mtype: MatrixCanonicalType, params: Optional[dict], base: QBase) -> MatrixEquation:
    """The canonical pair (A0, A1) of each case; t stands for q^nu."""
    q = base.q
    p = {**default_params(mtype, base), **(params or {})}
    M = MatrixCanonicalType
    if mtype is M.M1_2PHI1:
        a, b, c = p["a"], p["b"], p["c"]
        return MatrixEquation(((1, (1 - a) / c), (0, q / c)), ((-b / c, 0), ((c - b) * q / c, -a * q / c)), base)
    if mtype is M.M2_1PHI1:
        a, c = p["a"], p["c"]
        return MatrixEquation(((1, (1 - a) / c), (0, q / c)), ((-1 / c, 0), (-q / c, 0)), base)
    if mtype is M.M31_E1:
        t = p["t"]
        return MatrixEquation(((t, 1), (0, 1 / t)), ((0, 0), (-0.25, 0)), base)
    if mtype is M.M32_E3:
        t = p["t"]
        return MatrixEquation(((0, 1), (-1, t + 1 / t)), ((0, 0), (0, -q * q / t)), base)
    if mtype is M.M33_HERMITE_WEBER:
        a = p["a"]
        return MatrixEquation(((a, a), (q - a, q - a)), ((0, 0), (0, -q)), base)
    if mtype is M.M41_QAIRY:
        return MatrixEquation(((0, 1), (1, 0)), ((0, 0), (0, -1)), base)
    if mtype is M.M42_RAMANUJAN:
        return MatrixEquation(((1, -1 / q), (0, 0)), ((0, 0), (1, 0)), base)
    return MatrixEquation(((0, 1), (0, 0)), ((0, 0), (1, 0)), base)


# ---------------------------------------------------------------------------
# conjugation and elimination


def _eigvec(m: Mat, lam: complex) -> tuple:
    (a, b), (c, d) = m
    cands = [(b, lam - a), (lam - d, c)]
    v = max(cands, key=lambda w: abs(w[0]) + abs(w[1]))
    if abs(v[0]) + abs(v[1]) == 0:
        return (0j, 1 + 0j)
    return v


def conjugator_to_lower(meq: MatrixEquation, zero_tol: float = DEFAULT_ZERO_TOL) -> Mat:
    """P whose second column is an eigenvector of A1, so that P^-1 A1 P has b12 = 0."""
    A1 = meq.A1
    if abs(A1[0][1]) <= zero_tol * max(norm2(A1), 1e-300):
        return ((1, 0), (0, 1))
    n = norm2(A1)
    if abs(det2(A1)) <= zero_tol * n * n:
        # singular: a kernel vector read off the larger row is exact
        row = max(A1, key=lambda r: abs(r[0]) + abs(r[1]))
        v = (row[1], -row[0])
    else:
        disc = tr2(A1) ** 2 - 4 * det2(A1)
        if abs(disc) <= zero_tol * n * n:
            lam = tr2(A1) / 2
        else:
            lam = quad_roots(1, -tr2(A1), det2(A1))[0]
        v = _eigvec(A1, lam)
    # complete with the unit vector that is furthest from v
    u = (1, 0) if abs(v[1]) >= abs(v[0]) else (0, 1)
    return mat(((u[0], v[0]), (u[1], v[1])))


def conjugate_to_lower(meq: MatrixEquation, zero_tol: float = DEFAULT_ZERO_TOL) -> tuple:
    P = conjugator_to_lower(meq, zero_tol)
    out = meq.conjugate(P)
    (b11, _), (b21, b22) = out.A1
    A1 = ((b11, 0j), (b21, b22))
    return MatrixEquation(out.A0, A1, meq.base), P


@dataclass(frozen=True)
class Elimination:
    raw: PolyEquation
    gauge: Optional[TransformStep]
    scalar: Optional[HypEquation]

    def to_json(self) -> dict:
        return {"raw": {"a": [cjson(v) for v in self.raw.a], "b": [cjson(v) for v in self.raw.b],
                        "c": [cjson(v) for v in self.raw.c]},
                "gauge": None if self.gauge is None else self.gauge.to_json(),
                "scalar": None if self.scalar is None else self.scalar.to_json()}


def _clean(values: Sequence[complex], cut: float) -> tuple:
    return tuple(0j if abs(v) <= cut else v for v in values)


def eliminate(meq: MatrixEquation, zero_tol: float = 0.0) -> Elimination:
    """Scalar equation of y1 when b12 = 0, read as y1(xq^2) = B y1(xq) + C y1(x).

    B = a11 + a22 + (b11 q + b22) x
    C = (a12 a21 - a11 a22) + (a12 b21 - a11 b22 - a22 b11) x - b11 b22 x^2

    The raw relation is returned as the polynomial equation (1, -B, -C).  When
    C has an x^2 term a gauge removes one factor: division by a q-Pochhammer
    symbol at the smallest nonzero root of C, or by theta_q(x) when C = c2 x^2.
    """
    (a11, a12), (a21, a22) = meq.A0
    (b11, b12), (b21, b22) = meq.A1
    scale = max(norm2(meq.A0), norm2(meq.A1))
    if abs(b12) > zero_tol * scale:
        raise PreconditionError("eliminate needs b12 = 0; conjugate first")
    q = meq.q
    B = (a11 + a22, b11 * q + b22)
    C = (a12 * a21 - a11 * a22, a12 * b21 - a11 * b22 - a22 * b11, -b11 * b22)
    cut = zero_tol * max(scale * scale, 1e-300)
    B = _clean(B, zero_tol * max(scale, 1e-300))
    C = _clean(C, cut)
    raw = PolyEquation((1,), tuple(-v for v in B), tuple(-v for v in C), meq.base)
    if C[2] == 0:
        try:
            return Elimination(raw, None, raw.to_hyp())
        except NonPolynomial:
            return Elimination(raw, None, None)
    if C[0] == 0 and C[1] == 0:
        step = TransformStep(StepKind.THETA_DIVIDE, 1.0)
    else:
        roots = [r for r in quad_roots(C[2], C[1], C[0]) if abs(r) > 0]
        if C[0] == 0:
            roots = [-C[1] / C[2]]
        root = min(roots, key=abs)
        step = TransformStep(StepKind.POCH_DIVIDE, 1 / root)
    gauged = apply_step(raw, step)
    return Elimination(raw, step, gauged.to_hyp())


def printed_elimination(mtype: MatrixCanonicalType, params: Optional[dict], base: QBase,
                        corrected: bool = False) -> PolyEquation:
    """The scalar equation of y1 in the form it is displayed for each canonical case.

    The M33 display lacks the factor x in its last coefficient; corrected=True restores it.
    """
    q = base.q
    p = {**default_params(mtype, base), **(params or {})}
    M = MatrixCanonicalType
    if mtype is M.M1_2PHI1:
        a, b, c = p["a"], p["b"], p["c"]
        # (1 - x)(c - ab x) = c - (c + ab) x + ab x^2
        return PolyEquation((1,), (-(c + q) / c, (a + b) * q / c),
                            tuple(q / c**2 * v for v in (c, -(c + a * b), a * b)), base)
    if mtype is M.M2_1PHI1:
        a, c = p["a"], p["c"]
        return PolyEquation((1,), (-(c + q) / c, q / c), (q / c, -q * a / c**2), base)
    if mtype is M.M31_E1:
        t = p["t"]
        return PolyEquation((1,), (-(t + 1 / t),), (1, 0.25), base)
    if mtype is M.M32_E3:
        t = p["t"]
        return PolyEquation((1,), (-(t + 1 / t), q * q / t), (1,), base)
    if mtype is M.M33_HERMITE_WEBER:
        a = p["a"]
        return PolyEquation((1,), (-q, q), (0, -a * q) if corrected else (-a * q,), base)
    if mtype is M.M41_QAIRY:
        return PolyEquation((1,), (0, 1), (-1,), base)
    if mtype is M.M42_RAMANUJAN:
        return PolyEquation((1,), (-1,), (0, 1 / q), base)
    return PolyEquation((1,), (0,), (0, -1), base)


# ---------------------------------------------------------------------------
# classification


class MatrixClass(Enum):
    INVERTIBLE = "I"
    RANK_ONE = "D"
    NILPOTENT = "N"
    ZERO = "Z"


def matrix_class(m: Mat, zero_tol: float = DEFAULT_ZERO_TOL) -> MatrixClass:
    n = norm2(m)
    if n == 0:
        return MatrixClass.ZERO
    if abs(det2(m)) > zero_tol * n * n:
        return MatrixClass.INVERTIBLE
    if abs(tr2(m)) > zero_tol * n:
        return MatrixClass.RANK_ONE
    return MatrixClass.NILPOTENT


_ORDER = {MatrixClass.INVERTIBLE: 0, MatrixClass.RANK_ONE: 1, MatrixClass.NILPOTENT: 2}


@dataclass(frozen=True)
class MatrixClassification:
    mtype: MatrixCanonicalType
    params: dict
    conjugation: Mat
    inverted: bool
    classes: tuple
    elimination: Optional[Elimination]
    scalar: Optional[Classification]
    note: str = ""

    def to_json(self) -> dict:
        return {"type": self.mtype.value,
                "params": {k: cjson(v) for k, v in self.params.items()},
                "conjugation": [[cjson(v) for v in r] for r in self.conjugation],
                "inverted": self.inverted,
                "classes": [c.value for c in self.classes],
                "elimination": None if self.elimination is None else self.elimination.to_json(),
                "scalar": None if self.scalar is None else self.scalar.to_json(),
                "note": self.note}


def _case(c0: MatrixClass, c1: MatrixClass, meq: MatrixEquation, zero_tol: float) -> MatrixCanonicalType:
    M = MatrixCanonicalType
    I, D, N = MatrixClass.INVERTIBLE, MatrixClass.RANK_ONE, MatrixClass.NILPOTENT
    if (c0, c1) == (I, I):
        return M.M1_2PHI1
    if (c0, c1) == (I, D):
        d = meq.det_poly()
        scale = max(norm2(meq.A0), norm2(meq.A1)) ** 2
        if abs(d[1]) > zero_tol * scale or abs(d[2]) > zero_tol * scale:
            return M.M2_1PHI1
        if abs(tr2(meq.A0)) <= zero_tol * norm2(meq.A0):
            return M.M41_QAIRY
        return M.M32_E3
    if (c0, c1) == (I, N):
        return M.M31_E1
    if (c0, c1) == (D, D):
        return M.M33_HERMITE_WEBER
    if (c0, c1) == (D, N):
        return M.M42_RAMANUJAN
    return M.M5_FIRST_ORDER


def _params_from_scalar(mtype: MatrixCanonicalType, cls: Classification) -> dict:
    want = {
        MatrixCanonicalType.M1_2PHI1: ("a", "b", "c"),
        MatrixCanonicalType.M2_1PHI1: ("a", "c"),
        MatrixCanonicalType.M31_E1: ("t",),
        MatrixCanonicalType.M32_E3: ("t",),
        MatrixCanonicalType.M33_HERMITE_WEBER: ("a",),
    }.get(mtype, ())
    return {k: cls.params[k] for k in want if k in cls.params}


def classify_matrix(meq: MatrixEquation, zero_tol: float = DEFAULT_ZERO_TOL) -> MatrixClassification:
    """Case of the system, parameters read off the scalar reduction, and the conjugation used."""
    meq.check_excluded(zero_tol)
    c0, c1 = matrix_class(meq.A0, zero_tol), matrix_class(meq.A1, zero_tol)
    inverted = False
    work = meq
    if _ORDER[c0] > _ORDER[c1]:
        work = meq.inverted()
        c0, c1 = matrix_class(work.A0, zero_tol), matrix_class(work.A1, zero_tol)
        inverted = True
    mtype = _case(c0, c1, work, zero_tol)
    lower, P = conjugate_to_lower(work, zero_tol)
    elim = eliminate(lower, zero_tol)
    scalar = None
    params: dict = {}
    note = ""
    if mtype is MatrixCanonicalType.M5_FIRST_ORDER:
        note = "A(xq)A(x)=diag(x,xq)"
    elif elim.scalar is not None:
        try:
            scalar = classify_q(elim.scalar, zero_tol=max(zero_tol, 1e-10))
        except Exception as exc:  # the matrix case is still determined
            note = f"scalar reduction not classified: {exc}"
        else:
            params = _params_from_scalar(mtype, scalar)
            if scalar.ctype is not SCALAR_TYPE[mtype]:
                note = f"scalar reduction classifies as {scalar.ctype.value}"
    return MatrixClassification(mtype, params, P, inverted, (c0, c1), elim, scalar, note)


# ---------------------------------------------------------------------------
# fundamental solutions


def fundamental_solution(mtype: MatrixCanonicalType, params: Optional[dict], base: QBase,
                         printed: bool = False, lam: complex = LAPLACE_LAMBDA) -> Callable[[complex], Mat]:
    """Fundamental matrix Y(x) of the canonical system.

    With printed=True the matrix is built exactly as displayed for each case;
    three of those displays (M2, M42, M5) are not fundamental solutions, and
    the default returns repaired versions.
    """
    q = base.q
    p = {**default_params(mtype, base), **(params or {})}
    M = MatrixCanonicalType

    if mtype is M.M1_2PHI1:
        a, b, c = p["a"], p["b"], p["c"]
        g = log_base(base, c)

        def Y(x):
            pre = 1 / qpoch_inf(a * b * x / c, base)
            xg = cpow(x, 1 - g)
            return mat_scale(((phi([a, b], [c], base, x),
                               (1 - a) / (q - c) * xg * phi([a * q / c, b * q / c], [q * q / c], base, x)),
                              ((b - c) / (1 - c) * x * phi([a * q, b], [c * q], base, x),
                               xg * phi([a * q / c, b / c], [q / c], base, x))), pre)
        return Y

    if mtype is M.M2_1PHI1:
        a, c = p["a"], p["c"]
        g = log_base(base, c)
        z12, z22 = (1, 1) if printed else (q / c, 1 / c)

        def Y(x):
            pre = 1 / qpoch_inf(a * x / c, base)
            xg = cpow(x, 1 - g)
            return mat_scale(((phi([a], [c], base, x),
                               (1 - a) / (q - c) * xg * phi([a * q / c], [q * q / c], base, z12 * x)),
                              (1 / (1 - c) * x * phi([a * q], [c * q], base, x),
                               xg * phi([a * q / c], [q / c], base, z22 * x))), pre)
        return Y

    if mtype is M.M31_E1:
        t = p["t"]
        nu = log_base(base, t)

        def Y(x):
            return ((cpow(x, nu) * phi([0, 0], [q * t * t], base, -x / 4),
                     1 / (1 / t - t) * cpow(x, -nu) * phi([0, 0], [q / (t * t)], base, -x / 4)),
                    (t / (4 * (1 - q * t * t)) * cpow(x, nu + 1) * phi([0, 0], [q * q * t * t], base, -x / 4),
                     cpow(x, -nu) * phi([0, 0], [1 / (t * t)], base, -x / 4)))
        return Y

    if mtype is M.M32_E3:
        t = p["t"]
        nu = log_base(base, t)

        def Y(x):
            xp, xm = cpow(x, nu), cpow(x, -nu)
            return ((xp * phi([0], [q * t * t], base, q * q * x),
                     xm * phi([0], [q / (t * t)], base, q * q * x / (t * t))),
                    (t * xp * phi([0], [q * t * t], base, q**3 * x),
                     xm / t * phi([0], [q / (t * t)], base, q**3 * x / (t * t))))
        return Y

    if mtype is M.M33_HERMITE_WEBER:
        a = p["a"]

        def Y(x):
            th = theta_value(base, -a * x / q)
            z = a * x / (q * q)
            return mat_scale(((phi([a], [0], base, x),
                               a / (q - a) * th * borel_laplace_2phi0(q / a, z, base, lam)),
                              (-phi([a / q], [0], base, x * q),
                               th * borel_laplace_2phi0(q * q / a, z, base, lam))),
                             1 / theta_value(base, -a * x))
        return Y

    if mtype is M.M41_QAIRY:
        def Y(x):
            e = lq_phase(base, x)
            return ((phi([0], [-q], base, -x), e * phi([0], [-q], base, x)),
                    (phi([0], [-q], base, -x * q), -e * phi([0], [-q], base, q * x)))
        return Y

    if mtype is M.M42_RAMANUJAN:
        if printed:
            def Y(x):
                th = theta_value(base, x / q)
                return ((phi([], [0], base, -q * x) / th, borel_laplace_2phi0(0, -x / q, base, lam) / x),
                        (q * phi([], [0], base, -x) / th, borel_laplace_2phi0(0, -x / (q * q), base, lam)))
            return Y

        def Y(x):
            th = theta_value(base, x / q)
            return ((phi([], [0], base, -x) / th, borel_laplace_2phi0(0, -x / (q * q), base, lam)),
                    (q * phi([], [0], base, -x / q) / th,
                     x / q * borel_laplace_2phi0(0, -x / q**3, base, lam)))
        return Y

    b2 = QBase(q * q)
    if printed:
        def Y(x):
            return ((1 / theta_value(b2, x), theta_value(b2, x / q) / theta_value(base, x / q)),
                    (1 / theta_value(b2, q * x), theta_value(b2, x) / theta_value(base, x)))
        return Y

    def Y(x):
        e = lq_phase(base, x)
        return ((1 / theta_value(b2, x), e / theta_value(b2, x)),
                (1 / theta_value(b2, q * x), -e / theta_value(b2, q * x)))
    return Y


def matrix_residual(meq: MatrixEquation, Y: Callable[[complex], Mat], x: complex) -> float:
    """max |Y(xq) - A(x) Y(x)| entrywise over the largest entry of the two sides."""
    lhs = Y(x * meq.q)
    rhs = mat_mul(meq.at(x), Y(x))
    scale = max(norm2(lhs), norm2(rhs))
    if scale == 0:
        return 0.0
    return max(abs(lhs[i][j] - rhs[i][j]) for i in range(2) for j in range(2)) / scale


def relative_det(Y: Mat) -> float:
    """|det Y| relative to the product of its column norms."""
    cols = [max(abs(Y[0][j]), abs(Y[1][j])) for j in range(2)]
    den = cols[0] * cols[1]
    return abs(det2(Y)) / den if den else 0.0


DEFAULT_POINTS = (0.15, 0.25, 0.45)
GENERIC_POINT = 0.2345


@dataclass(frozen=True)
class MatrixReport:
    mtype: MatrixCanonicalType
    printed: bool
    elimination_distance: float
    residual: float
    det_relative: float
    points: tuple
    tolerances: dict = field(default_factory=lambda: {"elimination": 1e-12, "residual": 1e-9, "det": 1e-8})

    @property
    def elimination_ok(self) -> bool:
        return self.elimination_distance <= self.tolerances["elimination"]

    @property
    def residual_ok(self) -> bool:
        return self.residual <= self.tolerances["residual"]

    @property
    def det_ok(self) -> bool:
        return self.det_relative > self.tolerances["det"]

    @property
    def passed(self) -> bool:
        return self.elimination_ok and self.residual_ok and self.det_ok

    def to_json(self) -> dict:
        return {"type": self.mtype.value, "variant": "printed" if self.printed else "corrected",
                "result": "PASS" if self.passed else "FAIL",
                "elimination_distance": self.elimination_distance, "elimination_ok": self.elimination_ok,
                "max_residual": self.residual, "residual_ok": self.residual_ok,
                "det_relative": self.det_relative, "det_ok": self.det_ok,
                "points": [cjson(x) for x in self.points], "tolerances": self.tolerances}


def _poly_distance(u: PolyEquation, v: PolyEquation) -> float:
    n = max(u.degree, v.degree) + 1

    def flat(e):
        return [c for p in e.polys for c in (tuple(p) + (0j,) * (n - len(p)))]

    return coefficient_distance(flat(u), flat(v))


def verify_matrix_case(mtype: MatrixCanonicalType, params: Optional[dict], base: QBase,
                       points: Sequence[complex] = DEFAULT_POINTS, printed: bool = True) -> MatrixReport:
    """Elimination against the displayed scalar equation, residual of Y and det Y.

    printed=True compares with the displays as they stand; printed=False uses
    the corrected scalar equation and the repaired fundamental solutions.
    """
    meq = canonical_matrices(mtype, params, base)
    raw = eliminate(meq).raw
    target = printed_elimination(mtype, params, base, corrected=not printed)
    dist = _poly_distance(raw, target)
    Y = fundamental_solution(mtype, params, base, printed=printed)
    res = max(matrix_residual(meq, Y, x) for x in points)
    d = relative_det(Y(GENERIC_POINT))
    return MatrixReport(mtype, printed, dist, res, d, tuple(points))
