"""Majorization, doubly-stochastic matrices and the Schur–Horn picture.

Birkhoff decompositions and T-transform chains accept Fractions as well as
floats; with Fractions every step is exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .algebra import as_matrix, eigenvalues, hermitian_eigenvalues, svd
from .errors import (
    LengthMismatch,
    NoPerfectMatching,
    NotHermitian,
    NotMajorized,
    NotPSD,
    NotSymmetric,
    UnsupportedSize,
)

MAJ_TOL = 1e-12


def _vec(x) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or not np.all(np.isfinite(v)):
        raise ValueError("expected a finite real vector")
    return v


def majorizes(x, y, tol: float = MAJ_TOL) -> bool:
    """True iff y ≺ x: descending partial sums of y never exceed those of x and
    the totals agree (tolerances scaled by max(1, ‖x‖∞, ‖y‖∞))."""
    xv, yv = _vec(x), _vec(y)
    if xv.shape != yv.shape:
        raise LengthMismatch(f"lengths differ: {len(xv)} vs {len(yv)}")
    if xv.size == 0:
        return True
    scale = max(1.0, float(np.abs(xv).max()), float(np.abs(yv).max())) * len(xv)
    px = np.cumsum(np.sort(xv)[::-1])
    py = np.cumsum(np.sort(yv)[::-1])
    if abs(px[-1] - py[-1]) > tol * scale:
        return False
    return bool(np.all(py[:-1] <= px[:-1] + tol * scale))


# ---------------------------------------------------------------------------
# doubly stochastic matrices and Birkhoff decomposition
# ---------------------------------------------------------------------------


def _rows(m) -> list:
    if isinstance(m, np.ndarray) and m.dtype != object:
        return [[float(v) for v in r] for r in m]
    return [list(r) for r in m]


def is_doubly_stochastic(m, tol: float = 1e-12) -> bool:
    rows = _rows(m)
    n = len(rows)
    if any(len(r) != n for r in rows):
        return False
    if any(v < -tol for r in rows for v in r):
        return False
    one = 1
    for i in range(n):
        if abs(sum(rows[i]) - one) > tol or abs(sum(rows[j][i] for j in range(n)) - one) > tol:
            return False
    return True


@dataclass(frozen=True)
class BirkhoffDecomposition:
    terms: tuple  # of (lambda, perm) where perm[i] is the column matched to row i

    def matrix(self) -> list:
        n = len(self.terms[0][1]) if self.terms else 0
        out = [[0] * n for _ in range(n)]
        for lam, perm in self.terms:
            for i, j in enumerate(perm):
                out[i][j] = out[i][j] + lam
        return out


def _perfect_matching(support: list) -> Optional[list]:
    """Augmenting-path (Kuhn) matching; support[i] lists admissible columns."""
    n = len(support)
    match_col = [-1] * n

    def augment(i, seen):
        for j in support[i]:
            if not seen[j]:
                seen[j] = True
                if match_col[j] < 0 or augment(match_col[j], seen):
                    match_col[j] = i
                    return True
        return False

    for i in range(n):
        if not augment(i, [False] * n):
            return None
    perm = [0] * n
    for j, i in enumerate(match_col):
        perm[i] = j
    return perm


def birkhoff(m, tol: float = 1e-12) -> BirkhoffDecomposition:
    """Write a doubly stochastic matrix as Σ λ_π P_π.

    Repeatedly finds a perfect matching on the entries above ``tol`` and
    subtracts the smallest matched entry times the permutation matrix. With
    Fraction entries the arithmetic is exact and ``tol`` is ignored.
    """
    rows = _rows(m)
    n = len(rows)
    exact = all(isinstance(v, (int, Fraction)) for r in rows for v in r)
    thr = 0 if exact else tol
    if not is_doubly_stochastic(rows, 0 if exact else 1e-10):
        raise NoPerfectMatching("input is not doubly stochastic")
    rest = [[Fraction(v) if exact else float(v) for v in r] for r in rows]
    terms = []
    total = Fraction(0) if exact else 0.0
    while True:
        support = [[j for j in range(n) if rest[i][j] > thr] for i in range(n)]
        if not any(support):
            break
        perm = _perfect_matching(support)
        if perm is None:
            if not exact and 1 - total <= 1e-10:
                break
            raise NoPerfectMatching("positive support has no perfect matching")
        lam = min(rest[i][perm[i]] for i in range(n))
        for i in range(n):
            rest[i][perm[i]] -= lam
        terms.append((lam, tuple(perm)))
        total += lam
        if len(terms) > n * n:
            raise NoPerfectMatching("decomposition did not terminate")
    return BirkhoffDecomposition(tuple(terms))


# ---------------------------------------------------------------------------
# Hardy–Littlewood–Pólya transfer by T-transforms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TTransform:
    """t·I + (1−t)·Q where Q swaps coordinates i and j (original indexing)."""

    i: int
    j: int
    t: float

    def matrix(self, n: int) -> np.ndarray:
        out = np.eye(n)
        out[self.i, self.i] = out[self.j, self.j] = self.t
        out[self.i, self.j] = out[self.j, self.i] = 1 - self.t
        return out


def t_transform_chain(x, y, tol: float = 1e-12):
    """T-transforms T_1..T_k (k ≤ n−1) taking x to a rearrangement of y.

    Works on a copy of x; at each step picks the largest index j with
    v_j > y_j in the descending order and the first later index k with
    v_k < y_k, moving δ = min(v_j − y_j, y_k − v_k) from j to k. Every step
    settles one coordinate for good.
    """
    xv, yv = _vec(x), _vec(y)
    if not majorizes(xv, yv):
        raise NotMajorized("x does not majorize y")
    n = len(xv)
    ox = np.argsort(-xv, kind="stable")
    oy = np.argsort(-yv, kind="stable")
    ys = yv[oy]
    # T-transforms act on positions of x; position p holds target ys[p]
    v = xv[ox].copy()
    scale = max(1.0, float(np.abs(xv).max()))
    eps = tol * scale * n
    chain = []
    for _ in range(n):
        over = [p for p in range(n) if v[p] - ys[p] > eps]
        if not over:
            break
        j = max(over)
        under = [p for p in range(j + 1, n) if ys[p] - v[p] > eps]
        if not under:
            j = min(over)
            under = [p for p in range(j + 1, n) if ys[p] - v[p] > eps]
            if not under:
                break
        k = under[0]
        delta = min(v[j] - ys[j], ys[k] - v[k])
        t = 1.0 - delta / (v[j] - v[k])
        v[j], v[k] = v[j] - delta, v[k] + delta
        chain.append((j, k, t))
    return [TTransform(int(ox[j]), int(ox[k]), float(t)) for j, k, t in chain], ox, oy


def hlp_transfer(x, y) -> np.ndarray:
    """Doubly stochastic M with M x = y, assuming x majorizes y.

    M = P_y* · T_k ··· T_1 with the T-transforms acting on x's coordinates
    and a final permutation placing the sorted result in y's order.
    """
    xv, yv = _vec(x), _vec(y)
    chain, ox, oy = t_transform_chain(xv, yv)
    n = len(xv)
    m = np.eye(n)
    for tt in chain:
        m = tt.matrix(n) @ m
    # after the chain, coordinate ox[p] holds ys[p]; route it to oy[p]
    perm = np.zeros((n, n))
    for p in range(n):
        perm[oy[p], ox[p]] = 1.0
    return perm @ m


# ---------------------------------------------------------------------------
# ortho-stochastic witnesses
# ---------------------------------------------------------------------------


def ortho_stochastic_witness(m, tol: float = 1e-10) -> Optional[np.ndarray]:
    """Orthogonal U with U∘U = m for n ∈ {2, 3}, or None if none exists.

    Searches the signs of u_jk = ±√m_jk with the first row fixed nonnegative.
    Among valid sign choices the all-nonnegative one is preferred, then
    determinant +1.
    """
    a = np.asarray(_rows(m), dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or n not in (2, 3):
        raise UnsupportedSize("ortho-stochastic search supports sizes 2 and 3")
    root = np.sqrt(np.clip(a, 0.0, None))
    free = [(i, j) for i in range(1, n) for j in range(n) if root[i, j] > 0]
    best = None
    for signs in itertools.product((1.0, -1.0), repeat=len(free)):
        u = root.copy()
        for (i, j), s in zip(free, signs):
            u[i, j] *= s
        if np.linalg.norm(u @ u.T - np.eye(n)) > tol:
            continue
        key = (any(s < 0 for s in signs), np.linalg.det(u) < 0)
        if best is None or key < best[0]:
            best = (key, u)
    return None if best is None else best[1]


# ---------------------------------------------------------------------------
# Schur-convexity test
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvexityVerdict:
    consistent: bool
    counterexample: Optional[tuple] = None
    samples: int = 0


def _central_gradient(phi, x, h=1e-6):
    g = np.zeros_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (phi(x + e) - phi(x - e)) / (2 * h)
    return g


def schur_convex_test(
    phi: Callable,
    n: int,
    samples: int,
    domain: tuple = (0.0, 1.0),
    grad: Optional[Callable] = None,
    rng=None,
) -> ConvexityVerdict:
    """Probe the Schur condition (∂₁Φ − ∂₂Φ)(x) ≥ 0 for x₁ > x₂.

    Symmetry is verified first on sampled permutations (within 1e-9). The
    gradient defaults to central differences with step 1e-6.

    Raises:
        NotSymmetric: a sampled permutation changes Φ.
    """
    rng = np.random.default_rng(rng)
    lo, hi = domain
    gradient = grad or (lambda x: _central_gradient(phi, x))
    for _ in range(min(samples, 200)):
        x = rng.uniform(lo, hi, n)
        p = rng.permutation(n)
        if abs(phi(x) - phi(x[p])) > 1e-9 * max(1.0, abs(phi(x))):
            raise NotSymmetric("phi is not symmetric under a sampled permutation")
    for k in range(samples):
        x = rng.uniform(lo, hi, n)
        if x[0] < x[1]:
            x[0], x[1] = x[1], x[0]
        if x[0] == x[1]:
            continue
        g = gradient(x)
        if g[0] - g[1] < -1e-8:
            return ConvexityVerdict(False, tuple(float(v) for v in x), k + 1)
    return ConvexityVerdict(True, None, samples)


def elementary_symmetric(x, k: int) -> float:
    """c_k(x) = Σ_{i1<…<ik} x_i1 ··· x_ik via the product Π(1 + x_i t)."""
    e = [1.0] + [0.0] * len(x)
    for v in x:
        for j in range(len(x), 0, -1):
            e[j] += v * e[j - 1]
    return e[k] if 0 <= k <= len(x) else 0.0


# ---------------------------------------------------------------------------
# Schur–Horn construction
# ---------------------------------------------------------------------------


def horn_construct(spectrum, diagonal) -> np.ndarray:
    """Real symmetric H with eigenvalues ``spectrum`` and diagonal ``diagonal``.

    Starts from diag(spectrum) and follows the T-transform chain from the
    spectrum to the diagonal; each T-transform with weight t is realized by a
    Givens rotation with cos²θ = t in the plane of two coordinates whose 2×2
    block is still diagonal, which fixes one diagonal entry for good.
    """
    lam, d = _vec(spectrum), _vec(diagonal)
    if not majorizes(lam, d):
        raise NotMajorized("spectrum does not majorize the diagonal")
    chain, ox, oy = t_transform_chain(lam, d)
    n = len(lam)
    h = np.diag(lam).astype(float)
    for tt in chain:
        c = math.sqrt(min(max(tt.t, 0.0), 1.0))
        s = math.sqrt(max(1.0 - tt.t, 0.0))
        g = np.eye(n)
        g[tt.i, tt.i] = g[tt.j, tt.j] = c
        g[tt.i, tt.j] = s
        g[tt.j, tt.i] = -s
        h = g.T @ h @ g
    perm = np.zeros((n, n))
    for p in range(n):
        perm[oy[p], ox[p]] = 1.0
    h = perm @ h @ perm.T
    return 0.5 * (h + h.T)


# ---------------------------------------------------------------------------
# Weyl inequalities and Hadamard determinant bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeylReport:
    eigen_moduli: tuple
    singulars: tuple
    partial_product_gaps: tuple
    power_sums: dict


def weyl_report(a, powers: Sequence[float] = (0.5, 1.0, 2.0)) -> WeylReport:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise LengthMismatch("weyl_report needs a square matrix")
    lam = np.sort(np.abs(eigenvalues(m)))[::-1]
    s = svd(m).sigma
    gaps = tuple(float(np.prod(s[: k + 1]) - np.prod(lam[: k + 1])) for k in range(len(s)))
    sums = {float(p): (float(np.sum(lam**p)), float(np.sum(s**p))) for p in powers}
    return WeylReport(tuple(map(float, lam)), tuple(map(float, s)), gaps, sums)


@dataclass(frozen=True)
class HadamardReport:
    det: float
    diag_product: float
    holds: bool


def hadamard_det_check(h, general: bool = False) -> HadamardReport:
    """det H ≤ Π h_kk for Hermitian PSD H.

    With ``general=True`` any square matrix is accepted and the report holds
    |det A| against (max|a_jk|)ⁿ nⁿᐟ² instead.
    """
    m = as_matrix(h)
    n = m.shape[0]
    if m.shape != (n, n):
        raise LengthMismatch("square matrix required")
    lam = eigenvalues(m)
    det = complex(np.prod(lam))
    if general:
        bound = float(np.abs(m).max()) ** n * n ** (n / 2) if n else 1.0
        return HadamardReport(abs(det), bound, abs(det) <= bound * (1 + 1e-12) + 1e-10)
    if np.linalg.norm(m - m.conj().T) > 1e-12 * max(1.0, np.linalg.norm(m)):
        raise NotHermitian("matrix is not Hermitian")
    ev = hermitian_eigenvalues(m)
    if n and ev[0] < -1e-10 * max(1.0, float(np.trace(m).real)):
        raise NotPSD("matrix is not positive semidefinite")
    dp = float(np.prod(np.diag(m).real))
    return HadamardReport(det.real, dp, det.real <= dp + 1e-10)
