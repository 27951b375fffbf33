import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schurkit import algebra, majorization as mj
from schurkit.errors import NotMajorized, NotSymmetric

F = Fraction
DS_NOT_ORTHO = [[F(0), F(1, 2), F(1, 2)], [F(1, 2), F(1, 6), F(1, 3)], [F(1, 2), F(1, 3), F(1, 6)]]


def brute_majorizes(x, y, tol=1e-9):
    # oracle: y lies in the convex hull of the permutations of x (checked via
    # the partial-sum form over every subset of coordinates)
    x, y = np.asarray(x, float), np.asarray(y, float)
    if abs(x.sum() - y.sum()) > tol:
        return False
    n = len(x)
    for k in range(1, n):
        top_x = np.sort(x)[::-1][:k].sum()
        for idx in itertools.combinations(range(n), k):
            if y[list(idx)].sum() > top_x + tol:
                return False
    return True


def random_doubly_stochastic(rng, n, terms=None):
    terms = terms or n
    w = rng.dirichlet(np.ones(terms))
    m = np.zeros((n, n))
    for lam in w:
        m[np.arange(n), rng.permutation(n)] += lam
    return m


# --- majorization order --------------------------------------------------


def test_majorizes_examples():
    assert mj.majorizes([3, 0, 0], [1, 1, 1])
    assert mj.majorizes([0.3, -1.2, 4.0], [0.3, -1.2, 4.0])
    assert not mj.majorizes([2, 1, 0], [2, 2, -1])


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_majorizes_vs_subset_oracle(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n)
    y = random_doubly_stochastic(rng, n) @ x if rng.random() < 0.5 else rng.permutation(x) + rng.normal(0, 0.3, n)
    y = y - (y.sum() - x.sum()) / n
    assert mj.majorizes(x, y) == brute_majorizes(x, y)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_doubly_stochastic_image_is_majorized(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n)
    m = random_doubly_stochastic(rng, n)
    assert mj.is_doubly_stochastic(m, 1e-12)
    assert mj.majorizes(x, m @ x)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_averaging_lemma(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.uniform(-3, 3, n)
    y = random_doubly_stochastic(rng, n) @ x
    for phi in (np.square, np.exp, lambda t: -np.log(t + 10)):
        assert phi(y).sum() <= phi(x).sum() + 1e-9


# --- Birkhoff ------------------------------------------------------------


def test_birkhoff_identity():
    d = mj.birkhoff([[F(int(i == j)) for j in range(3)] for i in range(3)])
    assert [(l, tuple(p)) for l, p in d.terms] == [(1, (0, 1, 2))]


def test_birkhoff_half_half():
    d = mj.birkhoff([[F(1, 2), F(1, 2)], [F(1, 2), F(1, 2)]])
    assert sorted((l, tuple(p)) for l, p in d.terms) == [(F(1, 2), (0, 1)), (F(1, 2), (1, 0))]


def test_birkhoff_non_ortho_example_exact():
    d = mj.birkhoff(DS_NOT_ORTHO)
    assert len(d.terms) <= 5
    assert d.matrix() == DS_NOT_ORTHO
    assert sum(l for l, _ in d.terms) == 1


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_birkhoff_float_reconstruction(n, seed):
    rng = np.random.default_rng(seed)
    m = random_doubly_stochastic(rng, n, terms=int(rng.integers(1, 2 * n + 1)))
    d = mj.birkhoff(m)
    assert len(d.terms) <= n * n - 2 * n + 2 or n == 1
    assert np.max(np.abs(np.array(d.matrix(), float) - m)) <= 1e-10
    assert all(l > 0 for l, _ in d.terms)
    for _, p in d.terms:
        assert sorted(p) == list(range(n))


# --- T-transforms and HLP -----------------------------------------------


def test_hlp_examples():
    assert np.allclose(mj.hlp_transfer([1, 2, 3], [1, 2, 3]), np.eye(3))
    m = mj.hlp_transfer([3, 0, 0], [1, 1, 1])
    assert mj.is_doubly_stochastic(m, 1e-12)
    assert np.allclose(m @ [3, 0, 0], [1, 1, 1], atol=1e-12)
    chain, _, _ = mj.t_transform_chain(np.array([3.0, 0, 0]), np.array([2.0, 1, 0]))
    assert len(chain) == 1
    assert chain[0].t == pytest.approx(2 / 3, abs=1e-15)
    with pytest.raises(NotMajorized):
        mj.hlp_transfer([1, 1, 1], [3, 0, 0])


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_hlp_transfer_random(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n)
    y = random_doubly_stochastic(rng, n) @ x
    m = mj.hlp_transfer(x, y)
    assert mj.is_doubly_stochastic(m, 1e-10)
    assert np.max(np.abs(m @ x - y)) <= 1e-10
    # Rado: y is a convex combination of permuted copies of x
    d = mj.birkhoff(m, 1e-13)
    recon = sum(l * x[list(p)] for l, p in d.terms)
    assert np.max(np.abs(recon - y)) <= 1e-9


# --- ortho-stochastic ----------------------------------------------------


def test_ortho_witness_permutation():
    p = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], float)
    assert np.array_equal(mj.ortho_stochastic_witness(p), p)


@pytest.mark.parametrize("theta", [0.3, 1.0, 2.2])
def test_ortho_witness_rotation(theta):
    c, s = math.cos(theta), math.sin(theta)
    m = np.array([[c * c, s * s], [s * s, c * c]])
    u = mj.ortho_stochastic_witness(m)
    assert u is not None
    assert np.allclose(u @ u.T, np.eye(2), atol=1e-10)
    assert np.allclose(u * u, m, atol=1e-12)
    assert np.allclose(np.abs(u), np.abs([[c, s], [-s, c]]), atol=1e-12)


def test_doubly_stochastic_not_ortho_stochastic():
    assert mj.is_doubly_stochastic(np.array(DS_NOT_ORTHO, float))
    assert mj.ortho_stochastic_witness(np.array(DS_NOT_ORTHO, float)) is None


# --- Schur convexity -----------------------------------------------------


def test_schur_convex_examples():
    v = mj.schur_convex_test(lambda x: float(np.sum(x**2)), 4, 2000, grad=lambda x: 2 * x, rng=0)
    assert v.consistent
    v = mj.schur_convex_test(lambda x: -float(np.sum(x**2)), 4, 2000, rng=0)
    assert not v.consistent and v.counterexample is not None
    x = np.array(v.counterexample)
    assert x[0] > x[1]


@pytest.mark.parametrize("k", [2, 3])
def test_elementary_symmetric_s_concave(k):
    v = mj.schur_convex_test(lambda x: -mj.elementary_symmetric(x, k), 4, 10_000, rng=1)
    assert v.consistent


def test_elementary_symmetric_values():
    x = [1.0, 2.0, 3.0, 4.0]
    for k in range(5):
        brute = sum(math.prod(c) for c in itertools.combinations(x, k))
        assert mj.elementary_symmetric(x, k) == pytest.approx(brute, abs=1e-12)


def test_asymmetric_phi_rejected():
    with pytest.raises(NotSymmetric):
        mj.schur_convex_test(lambda x: float(x[0]), 3, 10, rng=0)


# --- Schur-Horn ----------------------------------------------------------


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_schur_horn_forward(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n))
    h = (a + a.T) / 2
    lam = np.linalg.eigvalsh(h)
    assert mj.majorizes(lam, np.diag(h), tol=1e-9)


def test_horn_examples():
    h = mj.horn_construct([3, 2, 1], [3, 2, 1])
    assert np.allclose(h, np.diag([3, 2, 1]), atol=1e-14)
    h = mj.horn_construct([1, 0], [0.5, 0.5])
    assert np.allclose(h, [[0.5, 0.5], [0.5, 0.5]], atol=1e-14)
    h = mj.horn_construct([2, 1, 0], [1, 1, 1])
    assert np.allclose(np.diag(h), [1, 1, 1], atol=1e-12)
    assert np.allclose(np.sort(algebra.eigenvalues(h).real), [0, 1, 2], atol=1e-9)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_horn_construct_random(n, seed):
    rng = np.random.default_rng(seed)
    lam = rng.normal(size=n)
    d = random_doubly_stochastic(rng, n) @ lam
    h = mj.horn_construct(lam, d)
    assert np.allclose(h, h.T, atol=0)
    assert np.max(np.abs(np.diag(h) - d)) <= 1e-9
    assert np.max(np.abs(np.sort(np.linalg.eigvalsh(h)) - np.sort(lam))) <= 1e-9


# --- Weyl and Hadamard ---------------------------------------------------


def test_weyl_examples():
    r = mj.weyl_report(np.diag([1.0, 2.0]))
    assert np.allclose(r.eigen_moduli, [2, 1]) and np.allclose(r.singulars, [2, 1])
    assert np.allclose(r.partial_product_gaps, 0, atol=1e-12)
    r = mj.weyl_report(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert np.allclose(r.eigen_moduli, 0) and np.allclose(r.singulars, [1, 0])
    for p, (lhs, rhs) in r.power_sums.items():
        assert lhs == 0 and rhs > 0


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_weyl_random(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    r = mj.weyl_report(a)
    assert min(r.partial_product_gaps[:-1], default=0) >= -1e-9
    full_s, full_l = np.prod(r.singulars), np.prod(r.eigen_moduli)
    assert abs(full_s - full_l) <= 1e-9 * full_s
    assert abs(full_s - abs(np.linalg.det(a))) <= 1e-9 * full_s
    for lhs, rhs in r.power_sums.values():
        assert lhs <= rhs + 1e-9


def test_hadamard_examples():
    r = mj.hadamard_det_check(np.eye(3))
    assert r.det == pytest.approx(1) and r.diag_product == 1 and r.holds
    r = mj.hadamard_det_check(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert r.det == pytest.approx(3, abs=1e-12) and r.diag_product == 4
    r = mj.hadamard_det_check(np.array([[1.0, 1.0], [1.0, -1.0]]), general=True)
    assert r.det == pytest.approx(2, abs=1e-12) and r.diag_product == pytest.approx(2, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_hadamard_inequality_random(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    r = mj.hadamard_det_check(x @ x.conj().T)
    assert r.holds
    assert r.det == pytest.approx(np.linalg.det(x @ x.conj().T).real, rel=1e-8)
