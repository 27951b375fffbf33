"""Schur-test norm bounds, entrywise (Schur) products and multiplier bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .algebra import as_matrix, hermitian_eigenvalues, spectral_norm
from .errors import BadParameter, FactorizationMismatch, NonPositiveWeight, NotPSD, ShapeMismatch


@dataclass(frozen=True)
class SchurTestReport:
    zeta: float
    kappa: float
    bound: float
    weights: Optional[tuple] = None


def schur_test(a, weights: Optional[Sequence[float]] = None) -> SchurTestReport:
    """‖A‖₂ ≤ √(ζκ) from absolute row and column sums.

    With positive weights r the sums become
    ζ_r = sup_j r_j⁻¹ Σ_k |a_jk| r_k and κ_r = sup_k r_k⁻¹ Σ_j |a_jk| r_j.
    For a rectangular matrix the first ``rows`` weights index rows and the
    first ``cols`` weights index columns.
    """
    m = np.abs(as_matrix(a))
    rows, cols = m.shape
    if weights is None:
        zeta = float(m.sum(axis=1).max()) if m.size else 0.0
        kappa = float(m.sum(axis=0).max()) if m.size else 0.0
        w_out = None
    else:
        r = np.asarray(weights, dtype=float)
        if r.ndim != 1 or len(r) < max(rows, cols):
            raise ShapeMismatch("need one weight per row and per column index")
        if not np.all(r > 0) or not np.all(np.isfinite(r)):
            raise NonPositiveWeight("weights must be finite and strictly positive")
        rr, rc = r[:rows], r[:cols]
        zeta = float(((m @ rc) / rr).max()) if m.size else 0.0
        kappa = float(((rr @ m) / rc).max()) if m.size else 0.0
        w_out = tuple(float(x) for x in r)
    return SchurTestReport(zeta, kappa, math.sqrt(zeta * kappa), w_out)


def schur_product(a, b) -> np.ndarray:
    """Entrywise product c_pq = a_pq b_pq."""
    x, y = as_matrix(a), as_matrix(b)
    if x.shape != y.shape:
        raise ShapeMismatch(f"shapes differ: {x.shape} vs {y.shape}")
    return x * y


@dataclass(frozen=True)
class MultiplierReport:
    mode: str
    d_h: float
    lhs: float
    rhs: float


def _check_psd(h: np.ndarray, rel: float = 1e-10) -> None:
    if h.shape[0] != h.shape[1] or np.linalg.norm(h - h.conj().T) > 1e-12 * max(np.linalg.norm(h), 1.0):
        raise NotPSD("multiplier must be Hermitian")
    trace = float(np.trace(h).real)
    lam = hermitian_eigenvalues(h)
    if lam[0] < -rel * max(abs(trace), 1e-300):
        raise NotPSD(f"minimum eigenvalue {lam[0]:.3e} is negative")


def multiplier_bound(h, a, mode: str = "psd_diag", factors=None) -> MultiplierReport:
    """Bound ‖H∘A‖₂ ≤ d_H ‖A‖₂.

    Args:
        h: the multiplier matrix.
        a: the matrix being multiplied.
        mode: ``"psd_diag"`` (H Hermitian PSD, d_H = max h_pp) or
            ``"factorized"`` (H = L M*, d_H = √(D_L D_M) with D_L the largest
            squared row norm of L).
        factors: ``(L, M)`` for the factorized mode.
    """
    hm, am = as_matrix(h), as_matrix(a)
    if hm.shape != am.shape:
        raise ShapeMismatch(f"shapes differ: {hm.shape} vs {am.shape}")
    if mode == "psd_diag":
        _check_psd(hm)
        d_h = float(np.max(np.diag(hm).real))
    elif mode == "factorized":
        if factors is None:
            raise BadParameter("factorized mode needs (L, M)")
        l, mm = as_matrix(factors[0]), as_matrix(factors[1])
        if l.shape[0] != hm.shape[0] or mm.shape[0] != hm.shape[1] or l.shape[1] != mm.shape[1]:
            raise ShapeMismatch("factor shapes do not match H")
        if np.linalg.norm(hm - l @ mm.conj().T) > 1e-10 * max(np.linalg.norm(hm), 1.0):
            raise FactorizationMismatch("H differs from L M*")
        d_l = float(np.max(np.sum(np.abs(l) ** 2, axis=1)))
        d_m = float(np.max(np.sum(np.abs(mm) ** 2, axis=1)))
        d_h = math.sqrt(d_l * d_m)
    else:
        raise BadParameter(f"unknown multiplier mode {mode!r}")
    lhs = spectral_norm(hm * am)
    rhs = d_h * spectral_norm(am)
    return MultiplierReport(mode, d_h, lhs, rhs)


GALLERY = ("hilbert_plus", "hilbert_minus", "generalized_hilbert", "sine_form", "cauchy")


def _to_array(rows, exact: bool):
    if exact:
        return np.array(rows, dtype=object)
    return np.array([[float(x) for x in r] for r in rows])


def matrix_gallery(
    name: str,
    n: int,
    lam: Optional[float] = None,
    t: Optional[float] = None,
    lam_seq: Optional[Sequence] = None,
    mu_seq: Optional[Sequence] = None,
    kind: str = "minus",
    exact: bool = False,
) -> np.ndarray:
    """n×n principal section of a named infinite matrix (indices p, q ≥ 1).

    * ``hilbert_plus``: 1/(p+q−1)
    * ``hilbert_minus``: 1/(p−q) off the diagonal, 0 on it
    * ``generalized_hilbert``: 1/(p−q+λ) (``kind="minus"``) or 1/(p+q−1+λ)
      (``kind="plus"``), λ ∈ (0, 1)
    * ``sine_form``: sin((p−q)t)/(p−q) off the diagonal, 0 on it, t ∈ (−π, π)
    * ``cauchy``: 1/(λ_p + μ_q)

    ``exact=True`` returns an object array of Fractions (not for sine_form).
    """
    if not isinstance(n, int) or n < 1:
        raise BadParameter("n must be a positive integer")
    idx = range(1, n + 1)
    if name == "hilbert_plus":
        rows = [[Fraction(1, p + q - 1) for q in idx] for p in idx]
    elif name == "hilbert_minus":
        rows = [[Fraction(0) if p == q else Fraction(1, p - q) for q in idx] for p in idx]
    elif name == "generalized_hilbert":
        if lam is None or not (0 < float(lam) < 1):
            raise BadParameter("generalized_hilbert needs lam in (0, 1)")
        lv = Fraction(lam) if isinstance(lam, (int, Fraction)) else lam
        if kind == "minus":
            rows = [[1 / (p - q + lv) for q in idx] for p in idx]
        elif kind == "plus":
            rows = [[1 / (p + q - 1 + lv) for q in idx] for p in idx]
        else:
            raise BadParameter("kind must be 'minus' or 'plus'")
        if not isinstance(lv, Fraction):
            exact = False
    elif name == "sine_form":
        if t is None or not (-math.pi < float(t) < math.pi):
            raise BadParameter("sine_form needs t in (-pi, pi)")
        if exact:
            raise BadParameter("sine_form has no exact rational form")
        d = np.arange(1, n + 1)[:, None] - np.arange(1, n + 1)[None, :]
        out = np.zeros((n, n))
        nz = d != 0
        out[nz] = np.sin(d[nz] * float(t)) / d[nz]
        return out
    elif name == "cauchy":
        if lam_seq is None or mu_seq is None or len(lam_seq) < n or len(mu_seq) < n:
            raise BadParameter("cauchy needs lam_seq and mu_seq of length >= n")
        ex = all(isinstance(x, (int, Fraction)) for x in list(lam_seq[:n]) + list(mu_seq[:n]))
        rows = []
        for p in range(n):
            row = []
            for q in range(n):
                den = (Fraction(lam_seq[p]) + Fraction(mu_seq[q])) if ex else float(lam_seq[p]) + float(mu_seq[q])
                if den == 0:
                    raise BadParameter("lam_p + mu_q vanishes")
                row.append(1 / den)
            rows.append(row)
        if not ex:
            exact = False
    else:
        raise BadParameter(f"unknown gallery matrix {name!r}")
    return _to_array(rows, exact)
