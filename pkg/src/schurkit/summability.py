"""Matrix sequence transformations y_n = Σ_k a_nk x_k and their classification.

Every verdict here is evidence from finite sections only. Limits in n are
estimated by polynomial extrapolation in h = 1/N over a grid of truncations,
and convergence is corroborated when successive increments shrink.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BadParameter, SingularSection, TruncationExceeded

DEFAULT_GRID = (64, 128, 256)
DEFAULT_TOL = 1e-6
CONTRACTION = 0.75
NODE_FRACTIONS = (1.0, 0.75, 0.5, 0.375, 0.25)
CAVEAT = "finite-section evidence: limits are extrapolated from truncations, not proved"


@dataclass(frozen=True)
class TransformMatrix:
    """Infinite matrix a_nk (1-indexed) known up to a declared truncation.

    ``row`` is an optional vectorized accessor ``row(n, m) -> a_{n,1..m}``;
    without it entries come from ``generator`` one at a time.
    """

    generator: Callable[[int, int], complex]
    declared_truncation: int
    row: Optional[Callable[[int, int], np.ndarray]] = None
    name: str = "custom"
    exact_section: Optional[tuple] = field(default=None, compare=False, repr=False)

    def row_values(self, n: int, m: int) -> np.ndarray:
        if n > self.declared_truncation or m > self.declared_truncation:
            raise TruncationExceeded(
                f"index {max(n, m)} beyond declared truncation {self.declared_truncation}"
            )
        if self.row is not None:
            return np.asarray(self.row(n, m))
        return np.array([self.generator(n, k) for k in range(1, m + 1)])

    def section(self, m: int) -> np.ndarray:
        return np.array([self.row_values(n, m) for n in range(1, m + 1)])


@dataclass(frozen=True)
class Classification:
    preserving: bool
    regular: bool
    generating: bool
    column_limits: tuple
    row_sum_limit: complex
    row_norm_sup: float
    alpha: complex
    evidence_truncation: int
    tail_index: Optional[int] = None
    finite_section: bool = True
    caveat: str = CAVEAT


def extrapolate(hs: Sequence[float], values: Sequence) -> complex:
    """Neville extrapolation of the interpolating polynomial to h = 0."""
    p = [complex(v) for v in values]
    h = list(hs)
    n = len(p)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i])
    out = p[0]
    return out.real if out.imag == 0 else out


def _settles(values: Sequence, tol: float) -> bool:
    """Increments along the grid are below tol or contract by CONTRACTION."""
    v = np.asarray(values, dtype=complex)
    if len(v) < 2:
        return True
    d = np.abs(np.diff(v, axis=0))
    ok = d[-1] <= np.maximum(tol, CONTRACTION * d[-2]) if len(d) >= 2 else d[-1] <= tol
    return bool(np.all(ok))


def _nodes(top: int, k: int) -> list:
    # geometric sample of rows in [top/4, top]; rows closer than 4k to column k are transient
    rows = sorted({max(1, round(top * f)) for f in NODE_FRACTIONS}, reverse=True)
    use = [n for n in rows if n >= 4 * k]
    return use if len(use) >= 2 else rows[:2]


def _column_limit(block: np.ndarray, k: int) -> complex:
    top = block.shape[0]
    use = _nodes(top, k)
    return extrapolate([1.0 / n for n in use], [block[n - 1, k - 1] for n in use])


def _check_grid(n_grid: Sequence[int], tol: float) -> tuple:
    grid = tuple(int(g) for g in n_grid)
    if len(grid) < 2 or any(g < 2 for g in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise BadParameter("n_grid must be an increasing sequence of truncations >= 2")
    if not tol > 0:
        raise BadParameter("tol must be positive")
    return grid


def classify(a: TransformMatrix, n_grid: Sequence[int] = DEFAULT_GRID, tol: float = DEFAULT_TOL) -> Classification:
    """Corroborate the preserving / regular / generating conditions.

    Column limits a_k (k ≤ grid[1]/4) are extrapolated from up to five rows
    N ≥ 4k spaced between max(grid)/4 and max(grid); the row-sum limit σ is
    extrapolated along the grid. Row-norm boundedness is
    judged from sup_{n≤N} Σ_{k≤N} |a_nk| along the grid. The generating test looks
    for K ≤ max(grid)/2 with Σ_{K<k≤N} |a_nk| < tol for every row n ≤ N.
    """
    grid = _check_grid(n_grid, tol)
    top = grid[-1]
    if top > a.declared_truncation:
        raise TruncationExceeded(f"grid reaches {top} beyond {a.declared_truncation}")
    hs = [1.0 / g for g in grid]
    kcols = max(1, grid[1] // 4)

    block = a.section(top)
    absblock = np.abs(block)
    rows = [block[g - 1, :g] for g in grid]
    cols = np.array([r[:kcols] for r in rows])
    sums = [r.sum() for r in rows]

    col_lim = tuple(_column_limit(block, k + 1) for k in range(kcols))
    sigma = extrapolate(hs, sums)
    # settling is judged on the columns every grid row resolves (k <= grid[0]/4)
    cols_ok = _settles(cols[:, : max(1, grid[0] // 4)], tol)
    sums_ok = _settles(sums, tol)

    sups = [float(absblock[:g, :g].sum(axis=1).max()) for g in grid]
    bounded = _settles(sups, tol * max(1.0, sups[-1]))
    preserving = bool(cols_ok and sums_ok and bounded)

    regular = preserving and all(abs(c) <= tol for c in col_lim) and abs(sigma - 1) <= tol

    tails = np.cumsum(absblock[:, ::-1], axis=1)[:, ::-1]
    tail_max = tails.max(axis=0)
    tail_index = None
    for k in range(top // 2 + 1):
        after = tail_max[k] if k < top else 0.0
        if after < tol:
            tail_index = k
            break
    generating = preserving and tail_index is not None

    alpha = sum(col_lim) if col_lim else 0.0
    return Classification(
        preserving=preserving,
        regular=bool(regular),
        generating=bool(generating),
        column_limits=col_lim,
        row_sum_limit=sigma,
        row_norm_sup=sups[-1],
        alpha=alpha,
        evidence_truncation=top,
        tail_index=tail_index,
    )


@dataclass(frozen=True)
class TransformResult:
    y: np.ndarray
    predicted: Optional[complex] = None
    deviation: Optional[float] = None


def _sequence(x, m: int) -> np.ndarray:
    if callable(x):
        return np.array([x(k) for k in range(1, m + 1)])
    v = np.asarray(x)
    if len(v) < m:
        raise TruncationExceeded(f"sequence has {len(v)} terms, need {m}")
    return v[:m]


def predicted_limit(c: Classification, x, x_limit) -> complex:
    """(σ − α)·lim x + Σ_k a_k x_k over the estimated columns."""
    k = len(c.column_limits)
    xs = _sequence(x, k)
    return (c.row_sum_limit - c.alpha) * x_limit + complex(np.dot(c.column_limits, xs))


def apply_transform(
    a: TransformMatrix,
    x,
    n: int,
    classification: Optional[Classification] = None,
    x_limit=None,
) -> TransformResult:
    """y_m = Σ_{k≤N} a_mk x_k for m ≤ n, with N the declared truncation.

    ``x`` is a sequence (at least N terms) or a callable k ↦ x_k. When a
    classification and lim x are supplied, y_n is compared to the predicted
    limit.
    """
    big = a.declared_truncation
    if n > big:
        raise TruncationExceeded(f"requested {n} rows beyond truncation {big}")
    if n < 1:
        raise BadParameter("n must be positive")
    xs = _sequence(x, big)
    y = np.array([np.dot(a.row_values(m, big), xs) for m in range(1, n + 1)])
    if np.all(np.isreal(y)):
        y = y.real
    if classification is None or x_limit is None:
        return TransformResult(y)
    pred = predicted_limit(classification, x, x_limit)
    return TransformResult(y, pred, float(abs(y[-1] - pred)))


def limit_estimate(a: TransformMatrix, x, n_grid: Sequence[int] = DEFAULT_GRID) -> complex:
    """Extrapolate y_N = Σ_{k≤N} a_Nk x_k along the grid to N → ∞."""
    grid = _check_grid(n_grid, 1.0)
    if grid[-1] > a.declared_truncation:
        raise TruncationExceeded(f"grid reaches {grid[-1]} beyond {a.declared_truncation}")
    xs = _sequence(x, grid[-1])
    ys = [np.dot(a.row_values(g, g), xs[:g]) for g in grid]
    return extrapolate([1.0 / g for g in grid], ys)


# ---------------------------------------------------------------------------
# Hölder and Cesàro means
# ---------------------------------------------------------------------------


def _holder_rows(r: int, n: int) -> list:
    rows = [[Fraction(int(k == i)) for k in range(n)] for i in range(n)]
    for _ in range(r):
        acc = [Fraction(0)] * n
        new = []
        for i in range(n):
            acc = [s + t for s, t in zip(acc, rows[i])]
            new.append([s / (i + 1) for s in acc])
        rows = new
    return rows


def _cesaro_rows(r: int, n: int) -> list:
    out = []
    for i in range(1, n + 1):
        den = comb(i + r - 1, r)
        out.append([Fraction(comb(i - k + r - 1, r - 1), den) if k <= i else Fraction(0) for k in range(1, n + 1)])
    return out


def _from_rows(rows: list, name: str) -> TransformMatrix:
    exact = tuple(tuple(r) for r in rows)
    arr = np.array([[float(v) for v in r] for r in rows])
    return TransformMatrix(
        generator=lambda i, k: exact[i - 1][k - 1],
        declared_truncation=len(rows),
        row=lambda i, m: arr[i - 1, :m],
        name=name,
        exact_section=exact,
    )


def mean_matrix(kind: str, r: int, n: int) -> TransformMatrix:
    """n×n section of H^(r) (r-fold arithmetic mean) or C^(r), exact rationals.

    C^(r)_{ik} = binom(i−k+r−1, r−1) / binom(i+r−1, r) for k ≤ i.
    """
    if not isinstance(r, int) or r < 1 or not isinstance(n, int) or n < 1:
        raise BadParameter("r and n must be positive integers")
    if kind == "holder":
        return _from_rows(_holder_rows(r, n), f"holder{r}")
    if kind == "cesaro":
        return _from_rows(_cesaro_rows(r, n), f"cesaro{r}")
    raise BadParameter(f"unknown mean kind {kind!r}")


def mean_transform(kind: str, r: int, x) -> np.ndarray:
    """Apply H^(r) or C^(r) to a finite sequence in O(r·len(x)) without forming the matrix."""
    if not isinstance(r, int) or r < 1:
        raise BadParameter("r must be a positive integer")
    v = np.asarray(x, dtype=float)
    idx = np.arange(1, len(v) + 1, dtype=float)
    if kind == "holder":
        for _ in range(r):
            v = np.cumsum(v) / idx
        return v
    if kind == "cesaro":
        for _ in range(r):
            v = np.cumsum(v)
        den = np.ones_like(idx)
        for j in range(1, r + 1):
            den *= (idx + j - 1) / j
        return v / den
    raise BadParameter(f"unknown mean kind {kind!r}")


def _diff_rows(rows: list) -> list:
    """Apply the inverse of the partial-sum matrix: row i ↦ row i − row (i−1)."""
    out = [rows[0][:]]
    for i in range(1, len(rows)):
        out.append([a - b for a, b in zip(rows[i], rows[i - 1])])
    return out


def _inv_mean_rows(rows: list) -> list:
    """Apply the inverse of the arithmetic-mean matrix: row i ↦ i·row i − (i−1)·row (i−1)."""
    out = [rows[0][:]]
    for i in range(1, len(rows)):
        out.append([(i + 1) * a - i * b for a, b in zip(rows[i], rows[i - 1])])
    return out


def equivalence_products(r: int, n: int) -> tuple:
    """Exact sections of (H^(r))⁻¹C^(r) and (C^(r))⁻¹H^(r)."""
    h = _holder_rows(r, n)
    c = _cesaro_rows(r, n)
    for rows in (h, c):
        if any(rows[i][i] == 0 for i in range(n)):
            raise SingularSection("zero diagonal entry in a triangular mean section")
    m1 = c
    for _ in range(r):
        m1 = _inv_mean_rows(m1)
    m2 = [[comb(i + r, r) * v for v in h[i]] for i in range(n)]
    for _ in range(r):
        m2 = _diff_rows(m2)
    return m1, m2


def equivalence_check(r: int, n: int, tol: float) -> bool:
    """Both (H^(r))⁻¹C^(r) and (C^(r))⁻¹H^(r) corroborate regularity at truncation n.

    The products are lower triangular, so rows of the n-section are the true
    rows; the evidence grid is (n/4, n/2, n).
    """
    if not isinstance(r, int) or not 1 <= r <= 4:
        raise BadParameter("r must be in 1..4")
    if not isinstance(n, int) or not 8 <= n <= 200:
        raise BadParameter("n must be in 8..200")
    grid = (n // 4, n // 2, n)
    for rows in equivalence_products(r, n):
        verdict = classify(_from_rows(rows, "product"), grid, tol)
        if not verdict.regular:
            return False
    return True


# ---------------------------------------------------------------------------
# built-in matrices
# ---------------------------------------------------------------------------


def identity_matrix(n: int) -> TransformMatrix:
    return TransformMatrix(
        generator=lambda i, k: 1.0 if i == k else 0.0,
        declared_truncation=n,
        row=lambda i, m: (np.arange(1, m + 1) == i).astype(float),
        name="identity",
    )


def cesaro_matrix(n: int) -> TransformMatrix:
    """a_nk = 1/n for k ≤ n."""
    return TransformMatrix(
        generator=lambda i, k: 1.0 / i if k <= i else 0.0,
        declared_truncation=n,
        row=lambda i, m: np.where(np.arange(1, m + 1) <= i, 1.0 / i, 0.0),
        name="cesaro",
    )


def geometric_matrix(n: int) -> TransformMatrix:
    """a_nk = 2^{−k}(1 + 1/n)."""
    return TransformMatrix(
        generator=lambda i, k: 2.0 ** (-k) * (1 + 1 / i),
        declared_truncation=n,
        row=lambda i, m: 2.0 ** (-np.arange(1, m + 1, dtype=float)) * (1 + 1 / i),
        name="geometric",
    )


def builtin(name: str, n: int, r: int = 1) -> TransformMatrix:
    if name == "identity":
        return identity_matrix(n)
    if name == "cesaro":
        return cesaro_matrix(n) if r == 1 else mean_matrix("cesaro", r, n)
    if name == "holder":
        return mean_matrix("holder", r, n)
    if name == "geometric":
        return geometric_matrix(n)
    raise BadParameter(f"unknown built-in matrix {name!r}")


def from_array(arr, name: str = "custom") -> TransformMatrix:
    m = np.asarray(arr)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise BadParameter("custom matrix must be square")
    return TransformMatrix(
        generator=lambda i, k: m[i - 1, k - 1],
        declared_truncation=m.shape[0],
        row=lambda i, mm: m[i - 1, :mm],
        name=name,
    )
