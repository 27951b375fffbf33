"""The Schur algorithm on the unit disk and its companions.

Scalars are either Python complex floats or :class:`GaussianRational`. When
every input is exact (int, Fraction or GaussianRational) the computations stay
exact, so the unimodular test |γ| = 1 and the boundary-consistency check are
decided without tolerances.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .algebra import eigenvalues, hermitian_eigenvalues
from .errors import (
    BadParameter,
    DegenerateCayley,
    InconsistentBoundary,
    NonContractiveParameter,
    NotCoprime,
    NotSchurPrefix,
    RankDeficiency,
    ZeroPolynomial,
)
from .gaussian import GaussianRational, abs2, conj, is_exact

DEFAULT_TOL_UNIT = 1e-10
BOUNDARY_TOL = 1e-10

# ---------------------------------------------------------------------------
# scalar and series helpers
# ---------------------------------------------------------------------------


def normalize_scalars(values) -> list:
    """All-exact input becomes GaussianRational, anything else complex."""
    vals = list(values)
    if vals and all(is_exact(v) for v in vals):
        return [GaussianRational.coerce(v) for v in vals]
    out = []
    for v in vals:
        z = complex(v)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError("coefficients must be finite")
        out.append(z)
    return out


def _exact(vals) -> bool:
    return bool(vals) and isinstance(vals[0], GaussianRational)


def _zero(exact: bool):
    return GaussianRational(0) if exact else 0j


def _one(exact: bool):
    return GaussianRational(1) if exact else 1 + 0j


def series_mul(a, b, n: int) -> list:
    """First ``n`` coefficients of the product of two power series."""
    exact = _exact(a) or _exact(b)
    out = [_zero(exact)] * n
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        for j, y in enumerate(b[: n - i]):
            out[i + j] = out[i + j] + x * y
    return out


def series_div(a, b, n: int) -> list:
    """First ``n`` coefficients of a/b; requires b[0] != 0."""
    if not b or not b[0]:
        raise ZeroDivisionError("series division by a series vanishing at 0")
    exact = _exact(a) or _exact(b)
    q = []
    for k in range(n):
        acc = a[k] if k < len(a) else _zero(exact)
        for j in range(1, min(k, len(b) - 1) + 1):
            acc = acc - b[j] * q[k - j]
        q.append(acc / b[0])
    return q


def poly_eval(coeffs, z):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _poly_add(a, b):
    n = max(len(a), len(b))
    exact = _exact(a) or _exact(b)
    z = _zero(exact)
    return [(a[k] if k < len(a) else z) + (b[k] if k < len(b) else z) for k in range(n)]


def _poly_scale(a, c):
    return [c * x for x in a]


def _poly_shift(a):
    return [_zero(_exact(a))] + list(a)


def _poly_mul(a, b):
    return series_mul(a, b, len(a) + len(b) - 1) if a and b else []


def _strip(a):
    out = list(a)
    while len(out) > 1 and not out[-1]:
        out.pop()
    return out


def _modulus_state(g, exact: bool, tol: float):
    """Return 'inside', 'unit' or 'outside' for |g| relative to 1."""
    if exact:
        a2 = g.abs2()
        return "unit" if a2 == 1 else ("outside" if a2 > 1 else "inside")
    mod = abs(g)
    if abs(mod - 1.0) <= tol:
        return "unit"
    return "outside" if mod > 1.0 else "inside"


# ---------------------------------------------------------------------------
# types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerSeriesPrefix:
    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a power-series prefix needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(normalize_scalars(self.coeffs)))


@dataclass(frozen=True)
class SchurParams:
    gammas: tuple
    terminated: bool = False

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(normalize_scalars(self.gammas)))


@dataclass(frozen=True)
class RationalFn:
    """num/den with den(0) = 1 whenever den(0) != 0."""

    num: tuple
    den: tuple

    def __post_init__(self):
        both = normalize_scalars(list(self.num) + list(self.den))
        num, den = both[: len(self.num)], both[len(self.num) :]
        if not num:
            num = [_zero(_exact(den))]
        if not any(den):
            raise ZeroDivisionError("denominator is identically zero")
        if den[0]:
            d0 = den[0]
            num = [x / d0 for x in num]
            den = [x / d0 for x in den]
        object.__setattr__(self, "num", tuple(_strip(num)))
        object.__setattr__(self, "den", tuple(_strip(den)))

    def __call__(self, z):
        return poly_eval(self.num, z) / poly_eval(self.den, z)

    def taylor(self, m: int) -> list:
        """Taylor coefficients c_0..c_m."""
        return series_div(list(self.num), list(self.den), m + 1)


def _coeffs(c) -> list:
    if isinstance(c, PowerSeriesPrefix):
        return list(c.coeffs)
    vals = normalize_scalars(c)
    if not vals:
        raise ValueError("empty power-series prefix")
    return vals


def _gammas(params) -> list:
    if isinstance(params, SchurParams):
        return list(params.gammas)
    return normalize_scalars(params)


# ---------------------------------------------------------------------------
# Schur algorithm
# ---------------------------------------------------------------------------


def schur_step(s: list) -> list:
    """One step s -> (s - γ)/(z(1 - γ̄ s)) on a truncated series (|s(0)| < 1)."""
    g = s[0]
    num = list(s[1:])
    den = [_one(_exact(s)) - conj(g) * s[0]] + [-conj(g) * x for x in s[1:-1]]
    return series_div(num, den, len(s) - 1)


def schur_parameters(c, tol_unit: float = DEFAULT_TOL_UNIT) -> SchurParams:
    """Schur parameters of a Taylor prefix c_0..c_m.

    Raises:
        NotSchurPrefix: some |γ_k| exceeds 1 (beyond ``tol_unit`` for floats).
        InconsistentBoundary: |γ_k| = 1 but the remaining coefficients differ
            from those of the finite Blaschke-type fraction it forces.
    """
    if not (0 < tol_unit <= 1e-6):
        raise BadParameter("tol_unit must lie in (0, 1e-6]")
    cs = _coeffs(c)
    exact = _exact(cs)
    m = len(cs) - 1
    s = cs
    gammas = []
    for k in range(m + 1):
        g = s[0]
        state = _modulus_state(g, exact, tol_unit)
        if state == "outside":
            raise NotSchurPrefix(f"|gamma_{k}| = {abs(g):.6g} > 1")
        gammas.append(g)
        if state == "unit":
            if k < m:
                forced = approximant(gammas).taylor(m)
                for j in range(k + 1, m + 1):
                    diff = forced[j] - cs[j]
                    bad = diff != 0 if exact else abs(diff) > BOUNDARY_TOL
                    if bad:
                        raise InconsistentBoundary(
                            f"|gamma_{k}| = 1 forces c_{j} = {complex(forced[j])}, got {complex(cs[j])}"
                        )
            return SchurParams(tuple(gammas), True)
        if k < m:
            s = schur_step(s)
    return SchurParams(tuple(gammas), False)


def approximant(params) -> RationalFn:
    """[z; γ_0, …, γ_n] by the backward recursion of the continued fraction."""
    gs = _gammas(params)
    if not gs:
        raise ValueError("approximant needs at least one parameter")
    exact = _exact(gs)
    p, q = [gs[-1]], [_one(exact)]
    for g in reversed(gs[:-1]):
        zp = _poly_shift(p)
        p, q = _poly_add(_poly_scale(q, g), zp), _poly_add(q, _poly_scale(zp, conj(g)))
    return RationalFn(tuple(p), tuple(q))


def back_step(f: RationalFn, gamma) -> RationalFn:
    """The map f -> (γ + z f)/(1 + γ̄ z f), which keeps the Schur class."""
    num, den = list(f.num), list(f.den)
    zn = _poly_shift(num)
    return RationalFn(
        tuple(_poly_add(_poly_scale(den, gamma), zn)),
        tuple(_poly_add(den, _poly_scale(zn, conj(gamma)))),
    )


# ---------------------------------------------------------------------------
# interpolation problem
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SolvabilityVerdict:
    kind: str  # "none" | "unique" | "infinite"
    hermitian_form_psd: bool
    hermitian_form_pd: bool
    min_eigenvalue: float
    parameter_kind: str
    function: Optional[RationalFn] = None
    params: Optional[SchurParams] = None

    @property
    def agrees(self) -> bool:
        return self.kind == self.parameter_kind


def toeplitz_upper(c) -> np.ndarray:
    """Upper-triangular Toeplitz matrix with first row c_0..c_m."""
    cs = [complex(x) for x in c]
    n = len(cs)
    out = np.zeros((n, n), complex)
    for i in range(n):
        out[i, i:] = cs[: n - i]
    return out


def _psd_flags(h: np.ndarray, scale: float):
    lam = hermitian_eigenvalues(h)
    lo = float(lam[0])
    thr = 1e-12 * scale
    return lo >= -thr, lo > thr, lo


def solvability(c, tol_unit: float = DEFAULT_TOL_UNIT) -> SolvabilityVerdict:
    """Decide the Carathéodory–Schur problem for the prefix c_0..c_m.

    The verdict comes from the Hermitian form I − C*C (threshold 1e-12·(m+1));
    ``parameter_kind`` is the independent verdict of the Schur algorithm.
    """
    cs = _coeffs(c)
    n = len(cs)
    cm = toeplitz_upper(cs)
    form = np.eye(n) - cm.conj().T @ cm
    psd, pd, lo = _psd_flags(form, float(n))
    kind = "infinite" if pd else ("unique" if psd else "none")
    params = None
    try:
        params = schur_parameters(cs, tol_unit)
        pkind = "unique" if params.terminated else "infinite"
    except (NotSchurPrefix, InconsistentBoundary):
        pkind = "none"
    fn = None
    if params is not None and kind == pkind and kind != "none":
        # unique: the terminated fraction; infinite: the interpolant with zero tail
        fn = approximant(params)
    return SolvabilityVerdict(
        kind=kind,
        hermitian_form_psd=psd,
        hermitian_form_pd=pd,
        min_eigenvalue=lo,
        parameter_kind=pkind,
        function=fn,
        params=params if kind == "infinite" and pkind == "infinite" else None,
    )


# ---------------------------------------------------------------------------
# resolvent matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResolventMatrix:
    """W(z) = norm_sq^{-1/2} · E_{γ0}(z) ··· E_{γm}(z) with E_γ = [[z, γ], [z γ̄, 1]].

    The polynomial entries ``w11..w22`` are the unnormalized product (exact for
    exact γ); ``norm_sq`` is Π(1 − |γ_k|²).
    """

    w11: tuple
    w12: tuple
    w21: tuple
    w22: tuple
    norm_sq: object

    def evaluate(self, z, normalized: bool = True) -> np.ndarray:
        m = np.array(
            [
                [complex(poly_eval(self.w11, z)), complex(poly_eval(self.w12, z))],
                [complex(poly_eval(self.w21, z)), complex(poly_eval(self.w22, z))],
            ]
        )
        return m / math.sqrt(float(self.norm_sq)) if normalized else m

    def evaluate_exact(self, z) -> list:
        """Unnormalized entries at an exact point z."""
        return [
            [poly_eval(self.w11, z), poly_eval(self.w12, z)],
            [poly_eval(self.w21, z), poly_eval(self.w22, z)],
        ]

    def apply(self, omega, m: int) -> list:
        """Taylor prefix (degree m) of (w11 ω + w12)/(w21 ω + w22) for a series ω."""
        om = list(omega)
        n = m + 1
        num = _poly_add(series_mul(list(self.w11), om, n), list(self.w12))[:n]
        den = _poly_add(series_mul(list(self.w21), om, n), list(self.w22))[:n]
        return series_div(num, den, n)


J = np.diag([-1.0, 1.0])


def elementary_factor(gamma, z):
    """Unnormalized E_γ(z) = [[z, γ], [z γ̄, 1]] at a point (exact if inputs are)."""
    return [[z, gamma], [z * conj(gamma), 1]]


def resolvent_matrix(params) -> ResolventMatrix:
    gs = _gammas(params)
    if not gs:
        raise ValueError("resolvent matrix needs at least one parameter")
    exact = _exact(gs)
    one, zero = _one(exact), _zero(exact)
    for k, g in enumerate(gs):
        if _modulus_state(g, exact, 0.0) != "inside":
            raise NonContractiveParameter(f"|gamma_{k}| >= 1")
    w = [[[one], [zero]], [[zero], [one]]]
    norm_sq = Fraction(1) if exact else 1.0
    for g in gs:
        e = [[[zero, one], [g]], [[zero, conj(g)], [one]]]
        w = [
            [
                _poly_add(_poly_mul(w[i][0], e[0][j]), _poly_mul(w[i][1], e[1][j]))
                for j in range(2)
            ]
            for i in range(2)
        ]
        norm_sq = norm_sq * (1 - abs2(g))
    w = [[tuple(_strip(w[i][j])) for j in range(2)] for i in range(2)]
    return ResolventMatrix(w[0][0], w[0][1], w[1][0], w[1][1], norm_sq)


# ---------------------------------------------------------------------------
# Schur–Cohn and the finite-fraction criterion
# ---------------------------------------------------------------------------


def _poly_coeffs(g) -> list:
    cs = [complex(x) for x in g]
    while cs and cs[-1] == 0:
        cs.pop()
    if not cs:
        raise ZeroPolynomial("polynomial is identically zero")
    return cs


def reflected(g) -> list:
    """g*(z) = z^m conj(g(1/z̄)), m = deg g."""
    cs = _poly_coeffs(g)
    return [c.conjugate() for c in reversed(cs)]


def schur_cohn(g) -> bool:
    """True iff every root of g lies in the open unit disk.

    Positive definiteness of D*D − C*C with C, D the m×m upper-triangular
    Toeplitz matrices of g_0..g_{m−1} and of the reflected coefficients
    ḡ_m..ḡ_1; threshold 1e-12·trace(D*D + C*C).
    """
    cs = _poly_coeffs(g)
    m = len(cs) - 1
    if m == 0:
        return True
    c = toeplitz_upper(cs[:m])
    d = toeplitz_upper(reflected(cs)[:m])
    form = d.conj().T @ d - c.conj().T @ c
    scale = float(np.trace(d.conj().T @ d + c.conj().T @ c).real)
    _, pd, _ = _psd_flags(form, scale)
    return pd


@dataclass(frozen=True)
class FiniteFractionResult:
    verdict: bool
    r: float
    inner_boundary: bool
    poles_outside: bool
    constant_on_circle: bool


def _roots(cs: list) -> np.ndarray:
    cs = _poly_coeffs(cs)
    m = len(cs) - 1
    if m == 0:
        return np.zeros(0, complex)
    comp = np.zeros((m, m), complex)
    comp[1:, :-1] = np.eye(m - 1)
    comp[:, -1] = [-c / cs[-1] for c in cs[:-1]]
    return eigenvalues(comp)


def finite_fraction_check(s: RationalFn, grid_size: int = 64) -> FiniteFractionResult:
    """Is s a finite Schur fraction (den zero-free on the closed disk, |den|² − |num|² = r > 0)?"""
    if grid_size < 8:
        raise BadParameter("grid_size must be at least 8")
    num = [complex(x) for x in s.num]
    den = _poly_coeffs(s.den)
    nscale = sum(abs(x) for x in num)
    for r in _roots(den):
        bound = sum(abs(x) * abs(r) ** k for k, x in enumerate(num))
        if nscale and abs(poly_eval(num, r)) <= 1e-9 * max(bound, 1e-300):
            raise NotCoprime(f"numerator and denominator share the root {r}")
    poles_outside = schur_cohn(reflected(den)) if len(den) > 1 else True
    ts = np.exp(2j * np.pi * np.arange(grid_size) / grid_size)
    dv = np.array([poly_eval(den, t) for t in ts])
    nv = np.array([poly_eval(num, t) for t in ts])
    scale = max(float(np.max(np.abs(dv) ** 2)), 1e-300)
    if np.min(np.abs(dv)) <= 1e-12 * math.sqrt(scale):
        poles_outside = False
    vals = np.abs(dv) ** 2 - np.abs(nv) ** 2
    r = float(np.mean(vals))
    constant = float(np.max(np.abs(vals - r))) <= 1e-10 * scale
    inner = poles_outside and constant and abs(r) <= 1e-10 * scale
    verdict = poles_outside and constant and not inner and r > 0
    return FiniteFractionResult(verdict, r, inner, poles_outside, constant)


# ---------------------------------------------------------------------------
# measures, orthogonal polynomials on the circle, Herglotz/Cayley pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteMeasure:
    points: tuple
    weights: tuple

    def __post_init__(self):
        pts = list(self.points)
        ws = list(self.weights)
        if len(pts) != len(ws) or not pts:
            raise ValueError("points and weights must be nonempty and equally long")
        exact = all(is_exact(p) for p in pts) and all(
            isinstance(w, (int, Fraction)) and not isinstance(w, bool) for w in ws
        )
        if exact:
            pts = [GaussianRational.coerce(p) for p in pts]
            ws = [Fraction(w) for w in ws]
            if any(p.abs2() != 1 for p in pts):
                raise ValueError("atoms must lie on the unit circle")
            if sum(ws) != 1:
                raise ValueError("weights must sum to 1")
        else:
            pts = [complex(p) for p in pts]
            ws = [float(w) for w in ws]
            if any(abs(abs(p) - 1.0) > 1e-14 for p in pts):
                raise ValueError("atoms must lie on the unit circle (within 1e-14)")
            if abs(sum(ws) - 1.0) > 1e-14:
                raise ValueError("weights must sum to 1 (within 1e-14)")
        if any(w <= 0 for w in ws):
            raise ValueError("weights must be positive")
        cpts = [complex(p) for p in pts]
        for i in range(len(cpts)):
            for j in range(i):
                if cpts[i] == cpts[j]:
                    raise ValueError("atoms must be pairwise distinct")
        object.__setattr__(self, "points", tuple(pts))
        object.__setattr__(self, "weights", tuple(ws))

    @property
    def exact(self) -> bool:
        return isinstance(self.points[0], GaussianRational)

    def moment(self, k: int):
        """μ_k = Σ w_j t_j^{-k}."""
        return sum((w * conj(t) ** k for t, w in zip(self.points, self.weights)), _zero(self.exact))


@dataclass(frozen=True)
class OpucData:
    phis: tuple
    phistars: tuple
    reflections: tuple
    terminal: complex


def szego_polys(sigma: DiscreteMeasure, rank_tol: float = 1e-10) -> OpucData:
    """Orthonormal polynomials φ_0..φ_{N−1} of a discrete measure with N atoms.

    Gram–Schmidt (two passes) on the sampled monomials √w_j t_j^k, tracking the
    polynomial coefficients. Reflection coefficients are a_k = −conj(Φ_{k+1}(0))
    for the monic Φ, which is the coefficient of φ*_k in the recurrence
    φ_{k+1} = (z φ_k − ā_k φ*_k)/√(1 − |a_k|²).
    """
    t = np.array([complex(p) for p in sigma.points])
    w = np.array([float(x) for x in sigma.weights])
    n = len(t)
    if n < 2:
        raise BadParameter("szego_polys needs at least two atoms")
    sw = np.sqrt(w)
    vecs, polys = [], []

    def orthogonalize(k):
        v = sw * t**k
        p = np.zeros(n + 1, complex)
        p[k] = 1.0
        for _ in range(2):
            for vj, pj in zip(vecs, polys):
                c = np.vdot(vj, v)
                v = v - c * vj
                p = p - c * pj
        return v, p

    for k in range(n):
        v, p = orthogonalize(k)
        nv = np.linalg.norm(v)
        if nv <= rank_tol:
            raise RankDeficiency(f"moment Gram matrix is singular at degree {k}")
        vecs.append(v / nv)
        polys.append(p / nv)
    _, pn = orthogonalize(n)
    monic = [p / p[k] for k, p in enumerate(polys)] + [pn]
    refl = tuple(-np.conj(monic[k + 1][0]) for k in range(n - 1))
    terminal = complex(-np.conj(monic[n][0]))
    phis = tuple(tuple(p[: k + 1]) for k, p in enumerate(polys))
    phistars = tuple(tuple(np.conj(p[::-1])) for p in phis)
    return OpucData(phis, phistars, tuple(complex(a) for a in refl), terminal)


def schur_from_measure(sigma: Optional[DiscreteMeasure], m: int, moments: Optional[Sequence] = None) -> list:
    """Taylor prefix s_0..s_m of the Schur function of a measure.

    ``moments`` (μ_0, μ_1, …, μ_{m+1}) overrides the atoms; then w_0 = μ_0.
    """
    if m < 0:
        raise BadParameter("m must be nonnegative")
    if moments is not None:
        mu = normalize_scalars(moments)
        if len(mu) < m + 2:
            exact = _exact(mu)
            mu = mu + [_zero(exact)] * (m + 2 - len(mu))
        w = [mu[0]] + [2 * x for x in mu[1 : m + 2]]
    else:
        if sigma is None:
            raise ValueError("either a measure or a moment sequence is needed")
        exact = sigma.exact
        w = [_one(exact)] + [2 * sigma.moment(k) for k in range(1, m + 2)]
    if not (w[0] + 1):
        raise DegenerateCayley("w(0) + 1 = 0")
    num = w[1:]
    den = [w[0] + 1] + w[1:]
    return series_div(num, den, m + 1)
