from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from schurkit import psido
from schurkit.errors import (
    DegreeNotDivisible,
    FloorTooHigh,
    HypothesisViolated,
    IndexOverflow,
    NotMonic,
    ParseError,
)
from schurkit.psido import DiffPoly, LaurentOp

F = Fraction
U = [DiffPoly.var(i) for i in range(6)]
D = LaurentOp.d
L = psido.lax_operator()

# --- sympy oracle: symbols a(x, xi) composed by sum_m (1/m!) d_xi^m a d_x^m b ---

x, xi = sympy.symbols("x xi")
q = sympy.Function("q")


def to_sympy_poly(p: DiffPoly):
    out = sympy.Integer(0)
    for mono, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for i in mono:
            term *= sympy.diff(q(x), x, i)
        out += term
    return out


def to_symbol(f: LaurentOp):
    return sum((to_sympy_poly(c) * xi**k for k, c in f.coeffs.items()), sympy.Integer(0))


def symbol_degrees(expr):
    expr = sympy.expand(expr)
    out = {}
    for term in sympy.Add.make_args(expr):
        if term == 0:
            continue
        powers = term.as_powers_dict()
        k = int(powers.get(xi, 0))
        out[k] = out.get(k, 0) + term / xi**k
    return {k: sympy.expand(v) for k, v in out.items() if sympy.expand(v) != 0}


def compose_symbols(a, b, floor, top):
    acc = sympy.Integer(0)
    m = 0
    while top - m >= floor:
        acc += sympy.diff(a, xi, m) * sympy.diff(b, x, m) / sympy.factorial(m)
        m += 1
    return {k: v for k, v in symbol_degrees(acc).items() if k >= floor}


def same(f: LaurentOp, sym: dict, floor):
    ours = {k: sympy.expand(to_sympy_poly(c)) for k, c in f.coeffs.items() if k >= floor}
    ours = {k: v for k, v in ours.items() if v != 0}
    return ours == sym


# --- products ------------------------------------------------------------


def test_d_times_u0():
    p = psido.op_mul(D(1), LaurentOp.scalar(U[0]), -5)
    assert p.coeffs == {1: U[0], 0: U[1]}


def test_d_inverse_times_u0():
    p = psido.op_mul(D(-1), LaurentOp.scalar(U[0]), -3)
    assert p.coeffs == {-1: U[0], -2: -U[1], -3: U[2]}
    assert p.floor == -3


def test_d_plus_u0_times_d_minus_u0():
    a = D(1) + LaurentOp.scalar(U[0])
    b = D(1) - LaurentOp.scalar(U[0])
    p = psido.op_mul(a, b, -10)
    assert p.coeffs == {2: psido.ONE, 0: -(U[1] + U[0] * U[0])}
    assert p.is_exact()


def test_floor_too_high():
    with pytest.raises(FloorTooHigh):
        psido.op_mul(D(1), D(1), 3)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_product_matches_symbol_calculus(seed):
    rng = np.random.default_rng(seed)
    f = psido.random_op(rng, top=2, low=-1, max_terms=2)
    g = psido.random_op(rng, top=1, low=-1, max_terms=2)
    floor = -3
    ours = psido.op_mul(f, g, floor)
    sym = compose_symbols(to_symbol(f), to_symbol(g), floor, 3)
    assert same(ours, sym, floor)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(-4, 0))
def test_ring_axioms(seed, floor):
    rng = np.random.default_rng(seed)
    f, g, h = (psido.random_op(rng) for _ in range(3))
    fg_h = psido.op_mul(psido.op_mul(f, g, floor - 4), h, floor)
    f_gh = psido.op_mul(f, psido.op_mul(g, h, floor - 4), floor)
    assert fg_h.agrees(f_gh, floor)
    left = psido.op_mul(f, g + h, floor)
    right = psido.op_mul(f, g, floor) + psido.op_mul(f, h, floor)
    assert left.agrees(right, floor)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_constants_commute(seed):
    rng = np.random.default_rng(seed)

    def const_op():
        return LaurentOp({k: F(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for k in range(-2, 3)})

    c = psido.commutator(const_op(), const_op(), -8)
    assert c.is_zero()


# --- DiffPoly ------------------------------------------------------------


def test_diffpoly_derivative_leibniz_vs_sympy():
    p = F(3, 2) * U[0] * U[0] * U[2] - 4 * U[1] + 7
    for times in (1, 2, 3):
        want = sympy.expand(sympy.diff(to_sympy_poly(p), x, times))
        assert sympy.expand(to_sympy_poly(p.derivative(times))) == want


def test_diffpoly_canonical_string():
    assert str(F(1, 4) * U[3] + F(3, 2) * U[0] * U[1]) == "(1/4)*u3 + (3/2)*u0*u1"
    assert str(-F(1, 4) * U[1]) == "-(1/4)*u1"
    assert str(DiffPoly()) == "0"


def test_index_cap():
    with pytest.raises(IndexOverflow):
        DiffPoly.var(65)
    with pytest.raises(IndexOverflow):
        DiffPoly.var(64).derivative()


# --- roots and powers ----------------------------------------------------


def test_square_root_coefficients():
    s = psido.power(L, 1, 2, -4)
    assert s.coeff(1) == 1
    assert s.coeff(0) == 0
    assert s.coeff(-1) == U[0] * F(1, 2)
    assert s.coeff(-2) == U[1] * F(-1, 4)
    assert s.coeff(-3) == U[2] * F(1, 8) - U[0] * U[0] * F(1, 8)
    assert s.coeff(-4) == U[3] * F(-1, 16) + U[0] * U[1] * F(3, 8)


def test_three_halves_coefficients():
    t = psido.power(L, 3, 2, -1)
    assert t.coeff(3) == 1
    assert t.coeff(2) == 0
    assert t.coeff(1) == U[0] * F(3, 2)
    assert t.coeff(0) == U[1] * F(3, 4)
    assert t.coeff(-1) == U[2] * F(1, 8) + U[0] * U[0] * F(3, 8)


def test_power_one_is_identity():
    f = psido.parse_op("D^3 + u1*D + 2*u0*u0")
    assert psido.power(f, 1, 1, -6).agrees(f, -6)


def test_power_errors():
    with pytest.raises(NotMonic):
        psido.power(psido.parse_op("2*D^2 + u0"), 1, 2, -2)
    with pytest.raises(DegreeNotDivisible):
        psido.power(psido.parse_op("D^3 + u0"), 1, 2, -2)


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("seed", range(6))
def test_root_verification(n, seed):
    rng = np.random.default_rng(seed)
    f = D(n) + psido.random_op(rng, top=n - 2, low=-1)
    floor = -3
    r = psido.power(f, 1, n, floor)
    assert r.top == 1
    assert psido.op_pow(r, n, floor).agrees(f, floor)


def test_negative_power_is_inverse():
    inv = psido.power(L, -1, 1, -7)
    prod = psido.op_mul(L, inv, -5)
    assert prod.agrees(LaurentOp.scalar(1), -5)


# --- truncation ----------------------------------------------------------


def test_truncation_examples():
    plus = psido.truncate(psido.power(L, 3, 2, -4), "positive")
    assert psido.format_op(plus) == "D^3 + (3/2)*u0*D + (3/4)*u1"
    assert psido.format_op(psido.truncate(psido.power(L, 1, 2, -4), "positive")) == "D"
    assert psido.truncate(D(-1), "positive").is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_truncation_split(seed):
    f = psido.random_op(np.random.default_rng(seed), top=3, low=-3)
    pos, neg = psido.truncate(f, "positive"), psido.truncate(f, "negative")
    assert (pos + neg).coeffs == f.coeffs
    assert all(k >= 0 for k in pos.coeffs) and all(k < 0 for k in neg.coeffs)


# --- commutators ---------------------------------------------------------


def test_commutator_examples():
    c = psido.commutator(D(1), L, -4)
    assert c.coeffs == {0: U[1]}
    assert psido.commutator(L, L, -6).vanishes(-6)


def test_kdv_commutator():
    assert psido.kdv_commutator() == F(1, 4) * U[3] + F(3, 2) * U[0] * U[1]
    assert str(psido.kdv_commutator()) == "(1/4)*u3 + (3/2)*u0*u1"


def test_kdv_by_differential_action():
    # independent route: apply both differential operators to a test function
    phi = sympy.Function("phi")(x)
    u = q(x)

    def a_op(f):
        return sympy.diff(f, x, 3) + sympy.Rational(3, 2) * u * sympy.diff(f, x) + sympy.Rational(3, 4) * sympy.diff(u, x) * f

    def l_op(f):
        return sympy.diff(f, x, 2) + u * f

    comm = sympy.expand(a_op(l_op(phi)) - l_op(a_op(phi)))
    want = sympy.expand((sympy.Rational(1, 4) * sympy.diff(u, x, 3) + sympy.Rational(3, 2) * u * sympy.diff(u, x)) * phi)
    assert sympy.simplify(comm - want) == 0


def test_commutant_examples():
    assert psido.commutant_check(D(2), D(1), D(3), -6)
    s = psido.truncate(psido.power(L, 1, 2, -6), "positive") + psido.truncate(psido.power(L, 1, 2, -6), "negative")
    half = psido.power(L, 1, 2, -6)
    three = psido.power(L, 3, 2, -6)
    assert psido.commutant_check(L, half, three, -2)
    assert s.agrees(half, -6)


def test_commutant_series_in_roots():
    rng = np.random.default_rng(5)
    floor = -3
    f = LaurentOp({}, None)
    for k in range(-1, 3):
        ck = F(int(rng.integers(-6, 7)), int(rng.integers(1, 5)))
        f = f + psido.power(L, k, 2, floor - 4).scale(ck)
    assert psido.commutator(L, f, floor).vanishes(floor)


def test_commutant_hypothesis_violated():
    with pytest.raises(HypothesisViolated):
        psido.commutant_check(L, D(1), D(2), -2)


# --- parser --------------------------------------------------------------


def test_parse_examples():
    assert psido.parse_op("D^2+u0") == L
    f = psido.parse_op("(D + u0)*(D - u0)")
    assert f.coeffs == {2: psido.ONE, 0: -(U[1] + U[0] * U[0])}
    g = psido.parse_op("3/4*u1 + D^-1", floor=-2)
    assert g.coeffs == {0: U[1] * F(3, 4), -1: psido.ONE}


@pytest.mark.parametrize("text", ["", "D^x", "u0/u1", "sin(u0)", "D^(1/2)", "u0 $ u1", "(D"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        psido.parse_op(text)


def test_parse_needs_floor_for_infinite_products():
    with pytest.raises(ParseError):
        psido.parse_op("D^-1*u0")
    assert psido.parse_op("D^-1*u0", floor=-3).coeffs == {-1: U[0], -2: -U[1], -3: U[2]}


def test_parse_index_overflow():
    with pytest.raises(IndexOverflow):
        psido.parse_op("u65 + D")
