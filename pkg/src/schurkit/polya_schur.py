"""Multiplier sequences, coefficient compositions, non-real root counts and total positivity."""

from __future__ import annotations

import ast
import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .algebra import RealPoly, squarefree_decomposition, sturm_real_root_count
from .errors import BadParameter, BudgetExceeded, ParseError, ZeroPolynomial

TP_BUDGET = 10**6
VD_EXHAUSTIVE_COLS = 12


# ---------------------------------------------------------------------------
# root counting and compositions
# ---------------------------------------------------------------------------


def nonreal_count(p: RealPoly) -> int:
    """Number of non-real roots counted with multiplicity."""
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no root count")
    real = sum(mult * sturm_real_root_count(f) for f, mult in squarefree_decomposition(p))
    return p.degree - real


def _factorial_weights(n: int) -> list:
    return [math.factorial(k) for k in range(n + 1)]


def compose(p: RealPoly, q: RealPoly, mode: str) -> RealPoly:
    """Coefficient compositions.

    * hermite: Q(d/dt) P
    * laguerre: Σ Q(k) p_k t^k
    * malo: Σ p_k q_k t^k
    * schur: Σ k! p_k q_k t^k

    Root-location hypotheses are not enforced.
    """
    if mode == "hermite":
        out = RealPoly()
        deriv = p
        for qk in q.coeffs:
            out = out + deriv * qk
            deriv = deriv.derivative()
        return out
    if mode == "laguerre":
        return RealPoly(q(k) * c for k, c in enumerate(p.coeffs))
    if mode in ("malo", "schur"):
        n = min(p.degree, q.degree)
        if n < 0:
            return RealPoly()
        w = _factorial_weights(n) if mode == "schur" else [1] * (n + 1)
        return RealPoly(w[k] * p.coeff(k) * q.coeff(k) for k in range(n + 1))
    raise BadParameter(f"unknown composition mode {mode!r}")


@dataclass(frozen=True)
class MultiplierSeq:
    gammas: tuple

    def __post_init__(self):
        g = tuple(Fraction(x) for x in self.gammas)
        if not g:
            raise BadParameter("multiplier sequence must be nonempty")
        object.__setattr__(self, "gammas", g)

    @classmethod
    def first_type(cls, alpha, deltas: Sequence, length: int) -> "MultiplierSeq":
        """γ_k = k!·[t^k] e^{αt} Π(1 + δ t)."""
        alpha = Fraction(alpha)
        series = [alpha**k / math.factorial(k) for k in range(length)]
        for d in deltas:
            d = Fraction(d)
            series = [series[k] + (d * series[k - 1] if k else 0) for k in range(length)]
        return cls(tuple(math.factorial(k) * c for k, c in enumerate(series)))

    def gamma(self, k: int) -> Fraction:
        return self.gammas[k] if k < len(self.gammas) else Fraction(0)


def apply_multiplier(g: MultiplierSeq, p: RealPoly) -> RealPoly:
    """Γ[P] = Σ γ_k p_k t^k (γ_k = 0 beyond the sequence)."""
    return RealPoly(g.gamma(k) * c for k, c in enumerate(p.coeffs))


# ---------------------------------------------------------------------------
# sign changes, total positivity, variation diminishing
# ---------------------------------------------------------------------------


def sign_changes(x: Sequence) -> int:
    """V[x]: sign changes after discarding zero terms."""
    s = [(v > 0) - (v < 0) for v in x]
    s = [v for v in s if v]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def _det(rows: list):
    """Determinant by Gaussian elimination; exact for Fractions."""
    m = [list(r) for r in rows]
    n = len(m)
    det = Fraction(1) if all(isinstance(v, (int, Fraction)) for r in m for v in r) else 1.0
    for c in range(n):
        piv = max(range(c, n), key=lambda r: abs(m[r][c]))
        if m[piv][c] == 0:
            return det * 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


@dataclass(frozen=True)
class TotalPositivityReport:
    order_checked: int
    min_minor: object
    witness: Optional[tuple] = None

    @property
    def holds(self) -> bool:
        return self.min_minor >= 0


def toeplitz_lift(c: Sequence, size: int) -> list:
    """Section (c_{i−j}) with c_k = 0 for k < 0."""
    cs = [Fraction(v) if isinstance(v, (int, Fraction, str)) else v for v in c]
    zero = Fraction(0) if all(isinstance(v, Fraction) for v in cs) else 0.0
    return [[cs[i - j] if 0 <= i - j < len(cs) else zero for j in range(size)] for i in range(size)]


def _as_rows(k) -> list:
    if isinstance(k, np.ndarray) and k.dtype != object:
        return [[float(v) for v in r] for r in k]
    rows = [list(r) for r in k]
    if all(isinstance(v, (int, Fraction)) for r in rows for v in r):
        return [[Fraction(v) for v in r] for r in rows]
    return [[float(v) for v in r] for r in rows]


def total_positivity(
    k=None,
    order: Optional[int] = None,
    sequence: Optional[Sequence] = None,
    size: Optional[int] = None,
    float_tol: float = 1e-12,
) -> TotalPositivityReport:
    """Enumerate every minor of order ≤ m and report the smallest.

    Pass a matrix ``k`` or a ``sequence`` with a Toeplitz ``size``. Float
    minors within float_tol·(max |entry|)^r of zero count as zero.
    """
    if sequence is not None:
        if size is None:
            raise BadParameter("sequence mode needs a size")
        rows = toeplitz_lift(sequence, size)
    elif k is not None:
        rows = _as_rows(k)
    else:
        raise BadParameter("need a matrix or a sequence")
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    if nr == 0 or nc == 0 or any(len(r) != nc for r in rows):
        raise BadParameter("matrix must be nonempty and rectangular")
    m = min(nr, nc) if order is None else int(order)
    if not 1 <= m <= min(nr, nc):
        raise BadParameter("order must be between 1 and min(rows, cols)")
    cost = sum(math.comb(nr, r) * math.comb(nc, r) for r in range(1, m + 1))
    if cost > TP_BUDGET:
        raise BudgetExceeded(f"{cost} minors exceed the budget {TP_BUDGET}")
    exact = isinstance(rows[0][0], Fraction)
    scale = max(abs(v) for r in rows for v in r) or 1
    best, witness = None, None
    for r in range(1, m + 1):
        snap = 0 if exact else float_tol * float(scale) ** r
        for rs in itertools.combinations(range(nr), r):
            sub = [rows[i] for i in rs]
            for cs in itertools.combinations(range(nc), r):
                d = _det([[row[j] for j in cs] for row in sub])
                if not exact and abs(d) <= snap:
                    d = 0.0
                if best is None or d < best:
                    best, witness = d, (rs, cs)
    return TotalPositivityReport(m, best, witness if best < 0 else None)


@dataclass(frozen=True)
class VDVerdict:
    consistent: bool
    counterexample: Optional[tuple] = None
    checked: int = 0


def _sign_change_rows(y: np.ndarray, tol: float) -> np.ndarray:
    """V of every row of y, zeros (|v| ≤ tol) discarded."""
    s = np.sign(np.where(np.abs(y) <= tol, 0.0, y)).astype(np.int8)
    out = np.zeros(s.shape[0], dtype=int)
    last = np.zeros(s.shape[0], dtype=np.int8)
    for j in range(s.shape[1]):
        col = s[:, j]
        nz = col != 0
        out += (nz & (last != 0) & (col != last)).astype(int)
        last = np.where(nz, col, last)
    return out


def variation_diminishing_check(k, trials: int = 1000, rng=None) -> VDVerdict:
    """Search for x with V[Kx] > V[x].

    Up to 12 columns the search is exhaustive over {−1, 0, 1}^q; beyond that
    ``trials`` random integer vectors in [−3, 3]^q are drawn.
    """
    if trials < 1:
        raise BadParameter("trials must be positive")
    km = np.array([[float(v) for v in r] for r in k], dtype=float)
    if km.ndim != 2 or km.size == 0:
        raise BadParameter("matrix must be nonempty")
    q = km.shape[1]
    if q <= VD_EXHAUSTIVE_COLS:
        xs = np.array(list(itertools.product((-1, 0, 1), repeat=q)), dtype=float)
    else:
        gen = rng if rng is not None else np.random.default_rng(0)
        xs = gen.integers(-3, 4, size=(trials, q)).astype(float)
    tol = 1e-12 * max(1.0, float(np.abs(km).max())) * q
    ys = xs @ km.T
    vin = _sign_change_rows(xs, 0.0)
    vout = _sign_change_rows(ys, tol)
    bad = np.nonzero(vout > vin)[0]
    if bad.size:
        x = tuple(int(v) for v in xs[bad[0]])
        return VDVerdict(False, x, len(xs))
    return VDVerdict(True, None, len(xs))


# ---------------------------------------------------------------------------
# polynomial grammar: integer/rational coefficients, t, ^, +, -, *, parentheses
# ---------------------------------------------------------------------------

_POLY_CHARS = re.compile(r"^[\s\dt+\-*/^().]*$")


def parse_poly(text: str) -> RealPoly:
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty polynomial")
    if not _POLY_CHARS.match(text) or "**" in text or "." in text:
        raise ParseError(f"unexpected characters in polynomial {text!r}")
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"bad polynomial: {exc.msg}") from None

    def walk(node) -> RealPoly:
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return RealPoly((node.value,))
        if isinstance(node, ast.Name) and node.id == "t":
            return RealPoly((0, 1))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Add):
                return walk(node.left) + walk(node.right)
            if isinstance(node.op, ast.Sub):
                return walk(node.left) - walk(node.right)
            if isinstance(node.op, ast.Mult):
                return walk(node.left) * walk(node.right)
            if isinstance(node.op, ast.Div):
                a, b = walk(node.left), walk(node.right)
                if b.degree != 0:
                    raise ParseError("division only by nonzero constants")
                return RealPoly(c / b.coeffs[0] for c in a.coeffs)
            if isinstance(node.op, ast.Pow):
                e = walk(node.right)
                if e.degree > 0 or (e.coeffs and (e.coeffs[0].denominator != 1 or e.coeffs[0] < 0)):
                    raise ParseError("exponents must be nonnegative integers")
                k = int(e.coeffs[0]) if e.coeffs else 0
                if k > 1000:
                    raise ParseError("exponent too large")
                return walk(node.left) ** k
        raise ParseError("unsupported polynomial syntax")

    return walk(tree.body)


# ---------------------------------------------------------------------------
# random generators for property checks (exact rational roots in [−10, 10])
# ---------------------------------------------------------------------------


def random_rational(rng, lo: int = -10, hi: int = 10, den: int = 4) -> Fraction:
    d = int(rng.integers(1, den + 1))
    return Fraction(int(rng.integers(lo * d, hi * d + 1)), d)


def random_real_rooted(rng, degree: int, lo: int = -10, hi: int = 10) -> RealPoly:
    lead = random_rational(rng, 1, 3)
    if rng.random() < 0.5:
        lead = -lead
    return RealPoly.from_roots([random_rational(rng, lo, hi) for _ in range(degree)], lead)


def random_negative_rooted(rng, degree: int) -> RealPoly:
    roots = []
    for _ in range(degree):
        r = random_rational(rng, -10, 0)
        roots.append(r if r < 0 else Fraction(-1, 2))
    return RealPoly.from_roots(roots, random_rational(rng, 1, 3))


def random_tp_matrix(rng, n: int) -> list:
    """Exact TP matrix from a product of elementary bidiagonal factors with nonnegative entries."""
    m = [[Fraction(int(i == j)) * random_rational(rng, 1, 3) for j in range(n)] for i in range(n)]
    for _ in range(2 * n):
        i = int(rng.integers(0, n - 1)) if n > 1 else 0
        c = random_rational(rng, 0, 3)
        e = [[Fraction(int(a == b)) for b in range(n)] for a in range(n)]
        if n > 1:
            if rng.random() < 0.5:
                e[i + 1][i] = c
            else:
                e[i][i + 1] = c
        m = [[sum(m[a][t] * e[t][b] for t in range(n)) for b in range(n)] for a in range(n)]
    return m
