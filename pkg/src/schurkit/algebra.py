"""Dense complex linear algebra and exact real polynomials.

The Schur form uses Householder reduction to Hessenberg form followed by
implicitly shifted single-shift QR with Wilkinson shifts. Singular values come
from a one-sided (Hestenes) Jacobi iteration with a round-robin pair ordering
so that each round of disjoint rotations is a handful of vectorised numpy
operations. Polynomials over Q are exact and support Sturm root counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import NonConvergence, ShapeMismatch, ZeroPolynomial

DEFAULT_TOL = 1e-12


def as_matrix(a) -> np.ndarray:
    """Copy ``a`` into a finite 2-D complex array."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def _square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got {m.shape}")
    return m


# ---------------------------------------------------------------------------
# Schur decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SchurDecomposition:
    u: np.ndarray
    t: np.ndarray
    tol_used: float

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.diag(self.t).copy()


def _hessenberg(a: np.ndarray):
    n = a.shape[0]
    h = a.copy()
    q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = h[k + 1 :, k]
        nx = np.linalg.norm(x)
        if nx == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * nx
        v /= np.linalg.norm(v)
        h[k + 1 :, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1 :, :])
        h[:, k + 1 :] -= 2.0 * np.outer(h[:, k + 1 :] @ v, v.conj())
        q[:, k + 1 :] -= 2.0 * np.outer(q[:, k + 1 :] @ v, v.conj())
        h[k + 2 :, k] = 0.0
    return h, q


def _givens(x: complex, y: complex):
    """Return (c, s) with c real such that [[c, s], [-s̄, c]] @ [x, y] = [r, 0]."""
    ax, ay = abs(x), abs(y)
    if ay == 0.0:
        return 1.0, 0j
    if ax == 0.0:
        return 0.0, np.conj(y) / ay
    r = math.hypot(ax, ay)
    return ax / r, (x / ax) * np.conj(y) / r


def _wilkinson(a, b, c, d) -> complex:
    """Eigenvalue of [[a, b], [c, d]] closest to d."""
    half = 0.5 * (a - d)
    disc = np.sqrt(half * half + b * c)
    mu1 = 0.5 * (a + d) + disc
    mu2 = 0.5 * (a + d) - disc
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def schur_decompose(a, tol: float = DEFAULT_TOL) -> SchurDecomposition:
    """Unitary triangularization A = U T U*.

    Args:
        a: square matrix (anything numpy can turn into a complex array).
        tol: relative tolerance for the returned factorization.

    Returns:
        SchurDecomposition with eigenvalues on the diagonal of ``t``.

    Raises:
        NonConvergence: if the QR iteration exceeds 100·n² steps or the final
            residual violates ``tol``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = _square(a)
    n = a.shape[0]
    if n == 0:
        return SchurDecomposition(np.zeros((0, 0), complex), np.zeros((0, 0), complex), tol)
    h, q = _hessenberg(a)
    norm_a = np.linalg.norm(a)
    tiny = 1e-16 * norm_a
    budget = max(100 * n * n, 100)
    steps = 0
    hi = n - 1
    since_deflation = 0
    while hi > 0:
        l = hi
        while l > 0:
            sub = abs(h[l, l - 1])
            if sub <= 1e-14 * (abs(h[l - 1, l - 1]) + abs(h[l, l])) or sub <= tiny:
                h[l, l - 1] = 0.0
                break
            l -= 1
        if l == hi:
            hi -= 1
            since_deflation = 0
            continue
        steps += 1
        since_deflation += 1
        if steps > budget:
            raise NonConvergence(f"QR iteration exceeded {budget} steps")
        if since_deflation % 11 == 10:
            mu = h[hi, hi] + 1.5 * abs(h[hi, hi - 1])
        else:
            mu = _wilkinson(h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi])
        x, y = h[l, l] - mu, h[l + 1, l]
        for k in range(l, hi):
            if k > l:
                x, y = h[k, k - 1], h[k + 1, k - 1]
            c, s = _givens(x, y)
            g = np.array([[c, s], [-np.conj(s), c]])
            j0 = k - 1 if k > l else l
            h[k : k + 2, j0:] = g @ h[k : k + 2, j0:]
            if k > l:
                h[k + 1, k - 1] = 0.0
            r1 = min(k + 3, hi + 1)
            gh = g.conj().T
            h[:r1, k : k + 2] = h[:r1, k : k + 2] @ gh
            q[:, k : k + 2] = q[:, k : k + 2] @ gh
    t = np.triu(h)
    resid = np.linalg.norm(a - q @ t @ q.conj().T)
    orth = np.linalg.norm(q.conj().T @ q - np.eye(n))
    if resid > tol * max(norm_a, 1e-300) or orth > tol:
        raise NonConvergence(f"Schur residual {resid:.3e} / orthogonality {orth:.3e} above tol")
    return SchurDecomposition(u=q, t=t, tol_used=tol)


def eigenvalues(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    return schur_decompose(a, tol).eigenvalues


def hermitian_eigenvalues(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Ascending real eigenvalues of the Hermitian part of ``a``."""
    m = _square(a)
    hm = 0.5 * (m + m.conj().T)
    return np.sort(eigenvalues(hm, tol).real)


# ---------------------------------------------------------------------------
# Singular value decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Svd:
    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray


@lru_cache(maxsize=64)
def _round_robin(n: int):
    """Rounds of disjoint index pairs covering every pair once (circle method)."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                p.append(min(a, b))
                q.append(max(a, b))
        if p:
            rounds.append((np.array(p), np.array(q)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return tuple(rounds)


def _complete_columns(u: np.ndarray, keep: np.ndarray) -> np.ndarray:
    """Replace the columns not in ``keep`` by an orthonormal completion."""
    out = u.copy()
    k = int(keep.sum())
    q, _, _ = _householder_qr_pivoted(u[:, keep], full=True)
    out[:, ~keep] = q[:, k : k + int((~keep).sum())]
    return out


def _householder_qr_pivoted(a: np.ndarray, full: bool = False):
    """QR with column pivoting: a[:, perm] = q @ r (m >= n); thin unless ``full``."""
    m, n = a.shape
    r = a.copy()
    q = np.eye(m, dtype=a.dtype)
    perm = np.arange(n)
    for k in range(n):
        norms = np.einsum("ij,ij->j", r[k:, k:].conj(), r[k:, k:]).real
        j = k + int(np.argmax(norms))
        if j != k:
            r[:, [k, j]] = r[:, [j, k]]
            perm[[k, j]] = perm[[j, k]]
        x = r[k:, k]
        nx = np.linalg.norm(x)
        if nx == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * nx
        v /= np.linalg.norm(v)
        r[k:, k:] -= 2.0 * np.outer(v, v.conj() @ r[k:, k:])
        q[:, k:] -= 2.0 * np.outer(q[:, k:] @ v, v.conj())
        r[k + 1 :, k] = 0.0
    if full:
        return q, np.triu(r), perm
    return q[:, :n], np.triu(r[:n, :]), perm


def _jacobi_sweeps(w: np.ndarray, v: np.ndarray, noise_sq: float, max_sweeps: int) -> None:
    """One-sided Jacobi on the columns of ``w``, accumulating rotations in ``v``.

    Pairs whose squared column norms are both below ``noise_sq`` are left alone:
    their directions carry no information above rounding level.
    """
    rounds = _round_robin(w.shape[1])
    for _ in range(max_sweeps):
        rotated = False
        for p, q in rounds:
            ap, aq = w[:, p], w[:, q]
            alpha = np.einsum("ij,ij->j", ap.conj(), ap).real
            beta = np.einsum("ij,ij->j", aq.conj(), aq).real
            gamma = np.einsum("ij,ij->j", ap.conj(), aq)
            ag = np.abs(gamma)
            act = (ag > 1e-14 * np.sqrt(alpha * beta)) & ((alpha > noise_sq) | (beta > noise_sq))
            if not act.any():
                continue
            rotated = True
            if not act.all():
                p, q = p[act], q[act]
                ap, aq = ap[:, act], aq[:, act]
                alpha, beta, gamma, ag = alpha[act], beta[act], gamma[act], ag[act]
            phase = np.conj(gamma / ag)
            zeta = (beta - alpha) / (2.0 * ag)
            sgn = np.where(zeta >= 0, 1.0, -1.0)
            t = sgn / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            bq = aq * phase
            w[:, p] = ap * c - bq * s
            w[:, q] = ap * s + bq * c
            vp, vq = v[:, p], v[:, q] * phase
            v[:, p] = vp * c - vq * s
            v[:, q] = vp * s + vq * c
        if not rotated:
            return
    raise NonConvergence(f"Jacobi SVD did not converge in {max_sweeps} sweeps")


def svd(a, tol: float = DEFAULT_TOL, max_sweeps: int = 80) -> Svd:
    """Thin SVD by one-sided Jacobi.

    The matrix is first reduced by a column-pivoted Householder QR, A P = Q R,
    and Jacobi runs on the columns of R*, which converges in a few sweeps even
    for strongly graded matrices. A pair of columns is rotated when its Gram
    entry exceeds 1e-14 of the geometric mean of the squared column norms.
    Singular values below n·eps·‖A‖_F are rounding noise; their left vectors
    are replaced by an orthonormal completion.

    Returns:
        ``Svd(u, sigma, v)`` with ``a ≈ u @ diag(sigma) @ v.conj().T`` and
        ``sigma`` non-increasing. Real input gives real factors.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = as_matrix(a)
    if np.all(a.imag == 0):
        a = a.real.copy()
    m, n = a.shape
    if m < n:
        s = svd(a.conj().T, tol, max_sweeps)
        return Svd(u=s.v, sigma=s.sigma, v=s.u)
    if n == 0:
        return Svd(np.zeros((m, 0), a.dtype), np.zeros(0), np.zeros((0, 0), a.dtype))
    norm_f = np.linalg.norm(a)
    if norm_f == 0.0:
        eye = np.eye(m, n, dtype=a.dtype)
        return Svd(eye, np.zeros(n), np.eye(n, dtype=a.dtype))
    q, r, perm = _householder_qr_pivoted(a)
    w = r.conj().T.copy()  # R* = U_x Σ V_x*  =>  A = (Q V_x) Σ (P U_x)*
    vx = np.eye(n, dtype=a.dtype)
    noise = n * np.finfo(float).eps * norm_f
    _jacobi_sweeps(w, vx, noise * noise, max_sweeps)
    sigma = np.linalg.norm(w, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    w = w[:, order]
    vx = vx[:, order]
    keep = sigma > noise
    ux = np.zeros((n, n), a.dtype)
    ux[:, keep] = w[:, keep] / sigma[keep]
    if not keep.all():
        ux = _complete_columns(ux, keep)
    u = q @ vx
    v = np.empty_like(ux)
    v[perm, :] = ux
    resid = np.linalg.norm(a - (u * sigma) @ v.conj().T)
    if resid > tol * norm_f * max(1.0, math.sqrt(n) / 4):
        raise NonConvergence(f"SVD residual {resid:.3e} above tolerance")
    return Svd(u=u, sigma=sigma, v=v)


def spectral_norm(a, tol: float = DEFAULT_TOL) -> float:
    m = as_matrix(a)
    if m.size == 0:
        return 0.0
    return float(svd(m, tol).sigma[0])


# ---------------------------------------------------------------------------
# Spectral bounds report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralBoundsReport:
    frobenius_sq: float
    hirsch: float
    hirsch_re: float
    hirsch_im: float
    bendixson_im: Optional[float]
    ford_lhs: float
    ford_rhs: float
    discriminant_bound: float


def spectral_bounds(a, tol: float = DEFAULT_TOL) -> SpectralBoundsReport:
    """Classical eigenvalue-localization quantities for a square matrix.

    ``ford_lhs`` needs the eigenvalues and is computed from the Schur form.
    ``bendixson_im`` is None unless every entry is real.
    """
    m = _square(a)
    n = m.shape[0]
    absm = np.abs(m)
    b = 0.5 * (m + m.conj().T)
    c = (m - m.conj().T) / 2j
    lam = eigenvalues(m, tol) if n else np.zeros(0)
    iu = np.triu_indices(n, 1)
    diag = np.diag(m)
    ddiff = np.abs(diag[:, None] - diag[None, :]) ** 2
    off = absm**2
    off_sum = float(off.sum() - np.sum(np.abs(diag) ** 2))
    ford_lhs = float(np.sum((np.abs(lam[:, None] - lam[None, :]) ** 2)[iu]))
    ddiag_sum = float(np.sum(ddiff[iu]))
    mx = lambda x: float(x.max()) if x.size else 0.0
    real_input = bool(np.all(m.imag == 0))
    if n >= 2:
        disc = 2.0 / (n * (n - 1)) * ddiag_sum + 2.0 / (n - 1) * off_sum
        bend = math.sqrt(n * (n - 1) / 2.0) * mx(np.abs(c)) if real_input else None
    else:
        disc = 0.0
        bend = 0.0 if real_input else None
    return SpectralBoundsReport(
        frobenius_sq=float(off.sum()),
        hirsch=n * mx(absm),
        hirsch_re=n * mx(np.abs(b)),
        hirsch_im=n * mx(np.abs(c)),
        bendixson_im=bend,
        ford_lhs=ford_lhs,
        ford_rhs=ddiag_sum + n * off_sum,
        discriminant_bound=disc,
    )


# ---------------------------------------------------------------------------
# Exact real polynomials
# ---------------------------------------------------------------------------


def _strip(cs: Iterable) -> tuple:
    out = [Fraction(c) for c in cs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class RealPoly:
    """Polynomial with exact rational coefficients, ascending degree."""

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "RealPoly":
        p = cls((lead,))
        for r in roots:
            p = p * cls((-Fraction(r), 1))
        return p

    @classmethod
    def monomial(cls, k: int, c=1) -> "RealPoly":
        return cls((0,) * k + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return RealPoly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RealPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return RealPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RealPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        out, base = RealPoly((1,)), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other):
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lead
        quo = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            f = rem[i] / lead
            if f:
                quo[i - dq] = f
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= f * b
        return RealPoly(quo), RealPoly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        if isinstance(other, RealPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _strip((other,))
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "RealPoly":
        return RealPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def monic(self) -> "RealPoly":
        if self.is_zero():
            raise ZeroPolynomial("zero polynomial has no monic form")
        return RealPoly(c / self.lead for c in self.coeffs)

    def sign_at(self, x) -> int:
        v = self(Fraction(x))
        return (v > 0) - (v < 0)

    def sign_at_infinity(self, positive: bool = True) -> int:
        if self.is_zero():
            return 0
        s = 1 if self.lead > 0 else -1
        if not positive and self.degree % 2:
            s = -s
        return s

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"RealPoly({format_poly(self)!r})"


def _as_poly(x) -> RealPoly:
    if isinstance(x, RealPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return RealPoly((x,))
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


def format_poly(p: RealPoly, var: str = "t") -> str:
    """Human-readable form, highest degree first: ``2*t^2 + 2*t - 2``."""
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}" if a.denominator == 1 else f"({a})*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def poly_gcd(p: RealPoly, q: RealPoly) -> RealPoly:
    """Monic gcd by the Euclidean algorithm (zero if both are zero)."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def squarefree_decomposition(p: RealPoly) -> list:
    """Yun's algorithm: ``p = lead · Π f_i^i`` with the f_i square-free and coprime.

    Returns a list of ``(factor, multiplicity)`` with monic nonconstant factors.
    """
    if p.is_zero():
        raise ZeroPolynomial("square-free decomposition of the zero polynomial")
    if p.degree == 0:
        return []
    dp = p.derivative()
    a0 = poly_gcd(p, dp)
    b = p // a0
    c = dp // a0
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a.monic(), i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(p: RealPoly) -> RealPoly:
    if p.is_zero():
        raise ZeroPolynomial("square-free part of the zero polynomial")
    if p.degree == 0:
        return RealPoly((1,))
    return (p // poly_gcd(p, p.derivative())).monic()


def sturm_sequence(p: RealPoly) -> list:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return [s for s in seq if not s.is_zero()]


def _variations(signs: Sequence[int]) -> int:
    s = [x for x in signs if x != 0]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def sturm_real_root_count(p: RealPoly, lo=None, hi=None) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi].

    ``lo = None`` means −∞ and ``hi = None`` means +∞. Bounds may be ints,
    Fractions, floats (converted exactly) or ±inf.
    """
    if not isinstance(p, RealPoly):
        p = RealPoly(p)
    if p.is_zero():
        raise ZeroPolynomial("Sturm count of the zero polynomial")
    if p.degree == 0:
        return 0
    sq = squarefree_part(p)
    seq = sturm_sequence(sq)

    def var_at(x, at_inf_sign):
        if at_inf_sign is not None:
            return _variations([s.sign_at_infinity(at_inf_sign > 0) for s in seq])
        return _variations([s.sign_at(x) for s in seq])

    def endpoint(x, default_sign):
        if x is None:
            return None, default_sign
        if isinstance(x, float) and math.isinf(x):
            return None, 1 if x > 0 else -1
        return Fraction(x), None

    lx, ls = endpoint(lo, -1)
    hx, hs = endpoint(hi, 1)
    if lx is not None and hx is not None and lx >= hx:
        return 0
    return var_at(lx, ls) - var_at(hx, hs)
