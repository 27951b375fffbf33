"""Seeded invariant battery behind ``schurkit selftest``.

Each property runs a fixed number of randomized trials; the seed changes the
samples but never the number of trials, so passing runs report identical
counts.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from fractions import Fraction
from typing import Callable, Dict

import numpy as np

from . import algebra, hadamard, majorization, polya_schur, psido, schur_function, summability
from .algebra import RealPoly

PropertyFn = Callable[[np.random.Generator], bool]


def random_disk(rng, radius: float = 0.9) -> complex:
    r = radius * math.sqrt(rng.random())
    t = 2 * math.pi * rng.random()
    return r * complex(math.cos(t), math.sin(t))


def random_measure(rng, n: int, min_gap: float = 0.2) -> schur_function.DiscreteMeasure:
    """n atoms with pairwise angular gaps ≥ min_gap and weights drawn from U[0.1, 1]."""
    while True:
        th = np.sort(rng.uniform(0, 2 * np.pi, n))
        gaps = np.diff(np.concatenate([th, [th[0] + 2 * np.pi]]))
        if gaps.min() >= min_gap:
            break
    w = rng.uniform(0.1, 1.0, n)
    w = w / w.sum()
    return schur_function.DiscreteMeasure(tuple(np.exp(1j * th)), tuple(w))


def random_doubly_stochastic(rng, n: int) -> np.ndarray:
    k = int(rng.integers(1, n + 2))
    lam = rng.dirichlet(np.ones(k))
    m = np.zeros((n, n))
    for weight in lam:
        m[np.arange(n), rng.permutation(n)] += weight
    return m


# ---------------------------------------------------------------------------
# properties (each returns True on success for one random instance)
# ---------------------------------------------------------------------------


def _schur_residual(rng) -> bool:
    n = int(rng.integers(1, 9))
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    d = algebra.schur_decompose(a)
    ok_u = np.linalg.norm(d.u.conj().T @ d.u - np.eye(n)) <= 1e-12 * max(1, n)
    ok_r = np.linalg.norm(a - d.u @ d.t @ d.u.conj().T) <= 1e-12 * np.linalg.norm(a) * max(1, n)
    return bool(ok_u and ok_r)


def _schur_inequality(rng) -> bool:
    n = int(rng.integers(1, 9))
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    lam = algebra.eigenvalues(a)
    return float(np.sum(np.abs(lam) ** 2)) <= float(np.sum(np.abs(a) ** 2)) * (1 + 1e-12)


def _svd_residual(rng) -> bool:
    r, c = int(rng.integers(1, 9)), int(rng.integers(1, 9))
    a = rng.normal(size=(r, c))
    s = algebra.svd(a)
    rec = s.u @ np.diag(s.sigma) @ s.v.conj().T
    return bool(np.linalg.norm(a - rec) <= 1e-12 * max(1.0, np.linalg.norm(a)) * 4 and np.all(np.diff(s.sigma) <= 0))


def _sturm_vs_companion(rng) -> bool:
    deg = int(rng.integers(1, 9))
    p = RealPoly([Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in range(deg)] + [1])
    real = sum(m * algebra.sturm_real_root_count(f) for f, m in algebra.squarefree_decomposition(p))
    nonreal = 0
    for f, m in algebra.squarefree_decomposition(p):
        roots = np.roots([float(c) for c in reversed(f.coeffs)])
        nonreal += m * int(np.sum(np.abs(roots.imag) > 1e-8))
    return real + nonreal == p.degree


def _round_trip(rng) -> bool:
    m = int(rng.integers(0, 11))
    gam = [random_disk(rng) for _ in range(m + 1)]
    c = schur_function.approximant(gam).taylor(m)
    back = schur_function.schur_parameters(c).gammas
    return len(back) == len(gam) and max(abs(a - b) for a, b in zip(back, gam)) <= 1e-10


def _solvability_agrees(rng) -> bool:
    m = int(rng.integers(0, 7))
    choice = rng.random()
    if choice < 0.4:
        c = [complex(x) for x in rng.normal(size=m + 1) * 0.6]
    elif choice < 0.7:
        gam = [random_disk(rng) for _ in range(m + 1)]
        c = schur_function.approximant(gam).taylor(m)
    else:
        k = int(rng.integers(0, m + 1))
        gam = [random_disk(rng) for _ in range(k)]
        t = rng.uniform(0, 2 * np.pi)
        gam.append(complex(math.cos(t), math.sin(t)))
        c = schur_function.approximant(gam).taylor(m)
    return schur_function.solvability(c).agrees


def _geronimus(rng) -> bool:
    n = int(rng.integers(3, 9))
    sigma = random_measure(rng, n)
    c = schur_function.schur_from_measure(sigma, n)
    gam = schur_function.schur_parameters(c, tol_unit=1e-6).gammas
    refl = schur_function.szego_polys(sigma).reflections
    return len(gam) >= n - 1 and all(abs(gam[k] - refl[k]) <= 1e-8 for k in range(n - 1))


def _schur_cohn(rng) -> bool:
    deg = int(rng.integers(1, 9))
    g = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
    roots = np.roots(g[::-1])
    mods = np.abs(roots)
    if np.any(np.abs(mods - 1) < 1e-8):
        return True
    return schur_function.schur_cohn(list(g)) == bool(np.all(mods < 1))


def _schur_test_dominates(rng) -> bool:
    r, c = int(rng.integers(1, 17)), int(rng.integers(1, 17))
    a = rng.normal(size=(r, c))
    return hadamard.schur_test(a).bound >= algebra.spectral_norm(a) - 1e-9


def _schur_product_psd(rng) -> bool:
    n = int(rng.integers(1, 9))
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    y = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    a, b = x @ x.conj().T, y @ y.conj().T
    c = hadamard.schur_product(a, b)
    return float(algebra.hermitian_eigenvalues(c)[0]) >= -1e-10 * float(np.trace(c).real)


def _multiplier_bound(rng) -> bool:
    n = int(rng.integers(1, 9))
    p = np.arange(1, n + 1)
    h = 1.0 / (p[:, None] + p[None, :])
    a = rng.normal(size=(n, n))
    rep = hadamard.multiplier_bound(h, a, "psd_diag")
    return abs(rep.d_h - 0.5) < 1e-15 and rep.lhs <= rep.rhs * (1 + 1e-9)


def _birkhoff(rng) -> bool:
    n = int(rng.integers(1, 7))
    m = random_doubly_stochastic(rng, n)
    dec = majorization.birkhoff(m)
    rec = np.array(dec.matrix(), dtype=float)
    return np.abs(rec - m).max() <= 1e-10 and len(dec.terms) <= n * n - 2 * n + 2


def _averaging(rng) -> bool:
    n = int(rng.integers(1, 9))
    m = random_doubly_stochastic(rng, n)
    x = rng.normal(size=n)
    return majorization.majorizes(x, m @ x)


def _horn(rng) -> bool:
    n = int(rng.integers(2, 6))
    q = rng.normal(size=(n, n))
    h = (q + q.T) / 2
    lam = algebra.hermitian_eigenvalues(h)
    d = np.diag(h).copy()
    out = majorization.horn_construct(lam, d)
    return (
        np.abs(np.diag(out) - d).max() <= 1e-10
        and np.abs(np.sort(algebra.hermitian_eigenvalues(out)) - np.sort(lam)).max() <= 1e-9
    )


def _weyl(rng) -> bool:
    n = int(rng.integers(1, 9))
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rep = majorization.weyl_report(a)
    sums_ok = all(lhs <= rhs * (1 + 1e-9) + 1e-12 for lhs, rhs in rep.power_sums.values())
    full = np.prod(rep.singulars)
    return sums_ok and min(rep.partial_product_gaps) >= -1e-9 * max(1.0, full) and abs(rep.partial_product_gaps[-1]) <= 1e-9 * max(full, 1e-300)


def _summability_verdicts(rng) -> bool:
    n = 256
    ident = summability.classify(summability.identity_matrix(n))
    ces = summability.classify(summability.cesaro_matrix(n))
    geo = summability.classify(summability.geometric_matrix(n))
    return ident.regular and ces.regular and geo.generating and not geo.regular


def _alternating_means(rng) -> bool:
    r = int(rng.integers(1, 4))
    kind = "holder" if rng.random() < 0.5 else "cesaro"
    x = np.array([(1 + (-1) ** k) / 2 for k in range(1, 10001)])
    y = summability.mean_transform(kind, r, x)
    return abs(y[-1] - 0.5) <= 1e-2


def _kdv(rng) -> bool:
    return str(psido.kdv_commutator()) == "(1/4)*u3 + (3/2)*u0*u1"


def _root_verification(rng) -> bool:
    n = int(rng.integers(2, 4))
    coeffs = {n: psido.ONE}
    for k in range(n - 2, -1, -1):
        if rng.random() < 0.7:
            coeffs[k] = psido.DiffPoly.var(int(rng.integers(0, 3)), Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 3))))
    f = psido.LaurentOp(coeffs)
    floor = -3
    r = psido.nth_root(f, n, floor)
    return psido.op_pow(r, n, floor).agrees(f, floor)


def _associativity(rng) -> bool:
    f, g, h = (psido.random_op(rng) for _ in range(3))
    floor = -4
    left = psido.op_mul(psido.op_mul(f, g, floor - 4), h, floor)
    right = psido.op_mul(f, psido.op_mul(g, h, floor - 4), floor)
    return left.agrees(right, floor)


def _compositions(rng) -> bool:
    d1, d2 = int(rng.integers(1, 7)), int(rng.integers(1, 7))
    p = polya_schur.random_real_rooted(rng, d1)
    q_neg = polya_schur.random_negative_rooted(rng, d2)
    q_real = polya_schur.random_real_rooted(rng, d2)
    for mode, q, bound in (("malo", q_neg, 0), ("schur", q_neg, 0), ("hermite", q_real, polya_schur.nonreal_count(p))):
        r = polya_schur.compose(p, q, mode)
        if not r.is_zero() and polya_schur.nonreal_count(r) > bound:
            return False
    return True


def _first_type_multiplier(rng) -> bool:
    g = polya_schur.MultiplierSeq.first_type(
        polya_schur.random_rational(rng, 0, 3),
        [polya_schur.random_rational(rng, 0, 3) for _ in range(int(rng.integers(0, 4)))],
        7,
    )
    p = polya_schur.random_real_rooted(rng, int(rng.integers(1, 7)))
    r = polya_schur.apply_multiplier(g, p)
    return r.is_zero() or polya_schur.nonreal_count(r) == 0


def _tp_implies_vd(rng) -> bool:
    n = int(rng.integers(1, 5))
    k = polya_schur.random_tp_matrix(rng, n)
    if not polya_schur.total_positivity(k, n).holds:
        return False
    return polya_schur.variation_diminishing_check(k).consistent


PROPERTIES: "OrderedDict[str, tuple]" = OrderedDict(
    [
        ("algebra.schur_residual", (_schur_residual, 40)),
        ("algebra.schur_inequality", (_schur_inequality, 40)),
        ("algebra.svd_residual", (_svd_residual, 40)),
        ("algebra.sturm_vs_companion", (_sturm_vs_companion, 40)),
        ("schur_function.round_trip", (_round_trip, 60)),
        ("schur_function.solvability_agrees", (_solvability_agrees, 60)),
        ("schur_function.geronimus", (_geronimus, 30)),
        ("schur_function.schur_cohn", (_schur_cohn, 100)),
        ("hadamard.schur_test_dominates", (_schur_test_dominates, 40)),
        ("hadamard.schur_product_psd", (_schur_product_psd, 40)),
        ("hadamard.multiplier_bound", (_multiplier_bound, 40)),
        ("majorization.birkhoff", (_birkhoff, 40)),
        ("majorization.averaging", (_averaging, 60)),
        ("majorization.horn", (_horn, 40)),
        ("majorization.weyl", (_weyl, 40)),
        ("summability.verdicts", (_summability_verdicts, 1)),
        ("summability.alternating_means", (_alternating_means, 6)),
        ("psido.kdv", (_kdv, 1)),
        ("psido.root_verification", (_root_verification, 10)),
        ("psido.associativity", (_associativity, 20)),
        ("polya_schur.compositions", (_compositions, 60)),
        ("polya_schur.first_type_multiplier", (_first_type_multiplier, 60)),
        ("polya_schur.tp_implies_vd", (_tp_implies_vd, 20)),
    ]
)


def run_battery(seed: int) -> Dict[str, Dict[str, int]]:
    """Run every property; exceptions count as failures."""
    out: Dict[str, Dict[str, int]] = OrderedDict()
    for idx, (name, (fn, trials)) in enumerate(PROPERTIES.items()):
        rng = np.random.default_rng([int(seed), idx])
        passed = failed = 0
        for _ in range(trials):
            try:
                ok = fn(rng)
            except Exception:  # noqa: BLE001 - any exception is a failed trial
                ok = False
            if ok:
                passed += 1
            else:
                failed += 1
        out[name] = {"pass": passed, "fail": failed}
    return out
