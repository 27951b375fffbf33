"""Formal pseudodifferential operators Σ_k f_k D^k with differential-polynomial coefficients.

Coefficients live in Q[u0, u1, u2, ...] with the derivation ∂u_i = u_{i+1}.
Products use the generalized Leibniz rule
    D^i a = Σ_{m≥0} binom(i, m) a^{(m)} D^{i−m},
which is finite for i ≥ 0 and infinite for i < 0, so every product takes an
explicit floor. All arithmetic is exact.
"""

from __future__ import annotations

import ast
import re
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

from .errors import (
    BadParameter,
    DegreeNotDivisible,
    FloorTooHigh,
    HypothesisViolated,
    IndexOverflow,
    NotMonic,
    ParseError,
)

INDEX_CAP = 64

Monomial = Tuple[int, ...]


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    raise TypeError(f"exact rational expected, got {c!r}")


def _fmt_frac(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"({c.numerator}/{c.denominator})"


class DiffPoly:
    """Polynomial in u0, u1, ... with Fraction coefficients; immutable."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Dict[Monomial, Fraction]] = None):
        clean: Dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = _frac(c)
            if c == 0:
                continue
            mono = tuple(sorted(mono))
            if mono and mono[-1] > INDEX_CAP:
                raise IndexOverflow(f"u{mono[-1]} exceeds the index cap u{INDEX_CAP}")
            clean[mono] = clean.get(mono, Fraction(0)) + c
            if clean[mono] == 0:
                del clean[mono]
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("DiffPoly is immutable")

    @classmethod
    def const(cls, c) -> "DiffPoly":
        return cls({(): _frac(c)})

    @classmethod
    def var(cls, i: int, c=1) -> "DiffPoly":
        if i < 0:
            raise BadParameter("indeterminate index must be nonnegative")
        return cls({(i,): _frac(c)})

    @staticmethod
    def coerce(x) -> "DiffPoly":
        if isinstance(x, DiffPoly):
            return x
        return DiffPoly.const(x)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        try:
            o = DiffPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other):
        o = DiffPoly.coerce(other)
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return DiffPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-DiffPoly.coerce(other))

    def __rsub__(self, other):
        return DiffPoly.coerce(other) - self

    def __mul__(self, other):
        o = DiffPoly.coerce(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(sorted(m1 + m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return DiffPoly(out)

    __rmul__ = __mul__

    def derivative(self, times: int = 1) -> "DiffPoly":
        """∂^times via the Leibniz rule."""
        p = self
        for _ in range(times):
            out: Dict[Monomial, Fraction] = {}
            for mono, c in p.terms.items():
                for pos in range(len(mono)):
                    m = list(mono)
                    m[pos] += 1
                    key = tuple(sorted(m))
                    out[key] = out.get(key, Fraction(0)) + c
            p = DiffPoly(out)
            if not p:
                break
        return p

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def n_terms(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=lambda m: (len(m), m)):
            c = self.terms[mono]
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = "*".join(f"u{i}" for i in mono)
            if not body:
                s = _fmt_frac(a)
            elif a == 1:
                s = body
            else:
                s = f"{_fmt_frac(a)}*{body}"
            parts.append((sign, s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out

    def __repr__(self):
        return f"DiffPoly({self})"


ZERO = DiffPoly()
ONE = DiffPoly.const(1)


def gbinom(i: int, m: int) -> int:
    """Generalized binomial i(i−1)···(i−m+1)/m! for any integer i."""
    num, den = 1, 1
    for t in range(m):
        num *= i - t
        den *= t + 1
    return num // den


class LaurentOp:
    """Σ_{k ≥ floor} f_k D^k.

    ``floor`` is the lowest degree whose coefficient is known; ``None`` means
    the operator is exact (all lower coefficients are zero).
    """

    __slots__ = ("coeffs", "floor")

    def __init__(self, coeffs: Optional[Dict[int, DiffPoly]] = None, floor: Optional[int] = None):
        clean = {}
        for k, c in (coeffs or {}).items():
            c = DiffPoly.coerce(c)
            if c and (floor is None or k >= floor):
                clean[int(k)] = c
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "floor", floor)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentOp is immutable")

    @classmethod
    def d(cls, k: int = 1) -> "LaurentOp":
        return cls({k: ONE})

    @classmethod
    def scalar(cls, c) -> "LaurentOp":
        return cls({0: DiffPoly.coerce(c)})

    @property
    def top(self) -> Optional[int]:
        return max(self.coeffs) if self.coeffs else None

    @property
    def top_degree(self) -> Optional[int]:
        return self.top

    def coeff(self, k: int) -> DiffPoly:
        if self.floor is not None and k < self.floor:
            raise FloorTooHigh(f"degree {k} is below the known floor {self.floor}")
        return self.coeffs.get(k, ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_exact(self) -> bool:
        return self.floor is None

    def __add__(self, other: "LaurentOp") -> "LaurentOp":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, ZERO) + c
        return LaurentOp(out, _max_floor(self.floor, other.floor))

    def __neg__(self):
        return LaurentOp({k: -c for k, c in self.coeffs.items()}, self.floor)

    def __sub__(self, other: "LaurentOp") -> "LaurentOp":
        return self + (-other)

    def scale(self, c) -> "LaurentOp":
        c = DiffPoly.coerce(c)
        return LaurentOp({k: c * v for k, v in self.coeffs.items()}, self.floor)

    def cut(self, floor: int) -> "LaurentOp":
        """Restrict to degrees ≥ floor (never below the known floor)."""
        return LaurentOp(self.coeffs, _max_floor(self.floor, floor))

    def agrees(self, other: "LaurentOp", floor: Optional[int] = None) -> bool:
        """Coefficients agree at every degree both operators know, down to floor."""
        lo = _max_floor(_max_floor(self.floor, other.floor), floor)
        for k in set(self.coeffs) | set(other.coeffs):
            if lo is not None and k < lo:
                continue
            if self.coeffs.get(k, ZERO) != other.coeffs.get(k, ZERO):
                return False
        return True

    def vanishes(self, floor: Optional[int] = None) -> bool:
        return self.agrees(LaurentOp(), floor)

    def __eq__(self, other):
        if not isinstance(other, LaurentOp):
            return NotImplemented
        return self.floor == other.floor and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.floor, frozenset(self.coeffs.items())))

    def __str__(self) -> str:
        return format_op(self)

    def __repr__(self):
        tail = "" if self.floor is None else f", floor={self.floor}"
        return f"LaurentOp({format_op(self)}{tail})"


def _max_floor(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


def format_op(f: LaurentOp) -> str:
    """Canonical string, degrees descending, e.g. ``D^3 + (3/2)*u0*D + (3/4)*u1``."""
    if not f.coeffs:
        return "0"
    parts = []
    for k in sorted(f.coeffs, reverse=True):
        c = f.coeffs[k]
        dpart = "" if k == 0 else ("D" if k == 1 else f"D^{k}")
        cs = str(c)
        sign = "+"
        if (c.n_terms() == 1 or not dpart) and cs.startswith("-"):
            sign, cs = "-", cs[1:]
        if not dpart:
            term = cs
        elif cs == "1":
            term = dpart
        elif c.n_terms() == 1:
            term = f"{cs}*{dpart}"
        else:
            term = f"({cs})*{dpart}"
        parts.append((sign, term))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out


# ---------------------------------------------------------------------------
# products
# ---------------------------------------------------------------------------


def _mul(f: LaurentOp, g: LaurentOp, floor: Optional[int]) -> LaurentOp:
    """Product truncated at ``floor``; ``floor=None`` demands a finite expansion."""
    if f.is_zero() or g.is_zero():
        fl = None if (f.floor is None and g.floor is None) else floor
        return LaurentOp({}, fl)
    # degrees known in the product
    valid = floor
    if f.floor is not None:
        valid = _max_floor(valid, f.floor + g.top)
    if g.floor is not None:
        valid = _max_floor(valid, g.floor + f.top)
    out: Dict[int, DiffPoly] = {}
    dropped = False
    for i, fi in f.coeffs.items():
        for j, gj in g.coeffs.items():
            if valid is None and i < 0 and any(gj.terms.keys() - {()}):
                raise BadParameter("infinite expansion needs an explicit floor")
            deriv = gj
            m = 0
            while deriv:
                deg = i + j - m
                b = gbinom(i, m)
                if b == 0:
                    break
                if valid is not None and deg < valid:
                    dropped = True
                    break
                term = fi * deriv
                out[deg] = out.get(deg, ZERO) + (term if b == 1 else term * b)
                m += 1
                deriv = deriv.derivative()
    if valid is None:
        return LaurentOp(out, None)
    if floor is None and dropped:
        raise BadParameter("infinite expansion needs an explicit floor")
    exact = f.floor is None and g.floor is None and not dropped
    return LaurentOp(out, None if exact else valid)


def op_mul(f: LaurentOp, g: LaurentOp, floor: int) -> LaurentOp:
    """f·g with every coefficient of degree ≥ floor exact.

    Raises FloorTooHigh when floor exceeds top(f) + top(g).
    """
    if not isinstance(floor, int):
        raise BadParameter("floor must be an explicit integer")
    if not f.is_zero() and not g.is_zero() and floor > f.top + g.top:
        raise FloorTooHigh(f"floor {floor} above product degree {f.top + g.top}")
    return _mul(f, g, floor)


def op_pow(f: LaurentOp, k: int, floor: int) -> LaurentOp:
    """f^k for k ≥ 0 truncated at floor."""
    if k < 0:
        raise BadParameter("use power() for negative exponents")
    out = LaurentOp.scalar(1)
    if f.is_zero():
        return out if k == 0 else LaurentOp({}, f.floor)
    # intermediate products keep enough lower terms for the remaining factors
    step = max(f.top, 0)
    for s in range(1, k + 1):
        out = _mul(out, f, floor - (k - s) * step)
    return out.cut(floor) if out.floor is not None else out


def commutator(a: LaurentOp, b: LaurentOp, floor: int) -> LaurentOp:
    """[a, b] = ab − ba truncated at floor."""
    return op_mul(a, b, floor) - op_mul(b, a, floor)


def truncate(f: LaurentOp, part: str) -> LaurentOp:
    """Positive part Σ_{k≥0} or negative part Σ_{k<0}."""
    if part == "positive":
        if f.floor is not None and f.floor > 0:
            raise FloorTooHigh("positive part not known below the floor")
        return LaurentOp({k: c for k, c in f.coeffs.items() if k >= 0}, None)
    if part == "negative":
        return LaurentOp({k: c for k, c in f.coeffs.items() if k < 0}, f.floor)
    raise BadParameter("part must be 'positive' or 'negative'")


# ---------------------------------------------------------------------------
# roots and fractional powers
# ---------------------------------------------------------------------------


def _solve_leading(target: LaurentOp, build, lead_deg: int, weight: int, lowest: int) -> LaurentOp:
    """Find X = D^lead_deg + Σ_{k<lead_deg} x_k D^k, down to ``lowest``, with
    build(X) = target term by term. ``weight`` is the coefficient with which
    x_{lead_deg−j} enters the degree top−j coefficient of build(X).
    """
    top = target.top
    coeffs = {lead_deg: ONE}
    for j in range(1, lead_deg - lowest + 1):
        # unknown x_{lead_deg−j} and lower set to zero; degree top−j of
        # build(X) then depends only on the solved coefficients
        x = LaurentOp(coeffs, None)
        deg = top - j
        partial = build(x, deg)
        resid = target.coeffs.get(deg, ZERO) - partial.coeffs.get(deg, ZERO)
        coeffs[lead_deg - j] = resid * Fraction(1, weight)
    return LaurentOp(coeffs, lowest)


def nth_root(f: LaurentOp, n: int, floor: int) -> LaurentOp:
    """R with R^n = f down to floor, R monic of degree top(f)/n."""
    if n < 1:
        raise BadParameter("root index must be positive")
    if f.is_zero() or f.coeffs[f.top] != ONE:
        raise NotMonic("leading coefficient must be the constant 1")
    if f.top % n:
        raise DegreeNotDivisible(f"degree {f.top} not divisible by {n}")
    if f.floor is not None and f.floor > floor:
        raise FloorTooHigh(f"operator known only down to {f.floor}")
    d = f.top // n
    lowest = floor - (n - 1) * d
    root = _solve_leading(f, lambda x, deg: op_pow(x, n, deg), d, n, lowest)
    if not op_pow(root, n, floor).agrees(f, floor):
        raise ArithmeticError("root verification failed")
    return root


def inverse(f: LaurentOp, floor: int) -> LaurentOp:
    """G with f·G = 1 down to floor, for monic f."""
    if f.is_zero() or f.coeffs[f.top] != ONE:
        raise NotMonic("leading coefficient must be the constant 1")
    d = f.top
    one = LaurentOp.scalar(1)
    lowest = floor - d
    return _solve_leading(one, lambda x, deg: _mul(f, x, deg), -d, 1, lowest)


def power(f: LaurentOp, num: int, den: int, floor: int) -> LaurentOp:
    """f^{num/den} = (f^{1/den})^num down to floor, for monic f."""
    if not isinstance(den, int) or den < 1 or not isinstance(num, int):
        raise BadParameter("num must be an integer and den a positive integer")
    if f.is_zero() or f.coeffs[f.top] != ONE:
        raise NotMonic("leading coefficient must be the constant 1")
    if f.top % den:
        raise DegreeNotDivisible(f"degree {f.top} not divisible by {den}")
    d = f.top // den
    if floor > num * d:
        raise FloorTooHigh(f"floor {floor} above result degree {num * d}")
    k = abs(num)
    # lower working floor so that k-fold products stay exact down to floor
    work = floor - (k + 1) * abs(d) - 1
    root = nth_root(f, den, work) if den > 1 else f.cut(work) if f.floor is not None else f
    base = root if num >= 0 else inverse(root, work + abs(d))
    out = op_pow(base, k, floor)
    # integer powers of a differential operator stay exact
    return out if out.is_exact() else out.cut(floor)


# ---------------------------------------------------------------------------
# commutant verification
# ---------------------------------------------------------------------------


def commutant_check(p: LaurentOp, f1: LaurentOp, f2: LaurentOp, floor: int) -> bool:
    """Given [p, f1] = [p, f2] = 0 down to floor, report whether [f1, f2] vanishes.

    Each commutator is compared only at degrees its factors determine
    exactly, which may stop above ``floor`` for truncated inputs.
    """
    for f in (f1, f2):
        if not commutator(p, f, floor).vanishes(floor):
            raise HypothesisViolated("input does not commute with p down to floor")
    return commutator(f1, f2, floor).vanishes(floor)


def lax_operator() -> LaurentOp:
    """L = D² + u0."""
    return LaurentOp({2: ONE, 0: DiffPoly.var(0)})


def kdv_commutator() -> DiffPoly:
    """The order-zero operator [(L^{3/2})₊, L]."""
    l_op = lax_operator()
    a = truncate(power(l_op, 3, 2, -1), "positive")
    c = commutator(a, l_op, 0)
    if any(k != 0 for k in c.coeffs):
        raise ArithmeticError("commutator is not of order zero")
    return c.coeff(0)


# ---------------------------------------------------------------------------
# expression grammar: D^k, u<i>, +, -, *, rational literals, parentheses
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(D)|(u\d+)|([-+*/^()]))")


def _check_tokens(text: str) -> None:
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 8]!r}")
        pos = m.end()


def parse_op(text: str, floor: Optional[int] = None) -> LaurentOp:
    """Parse an operator expression; products of negative powers need ``floor``."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty operator expression")
    _check_tokens(text)
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"bad operator expression: {exc.msg}") from None

    def num(node) -> Optional[Fraction]:
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = num(node.operand)
            return None if v is None else (-v if isinstance(node.op, ast.USub) else v)
        if isinstance(node, ast.BinOp) and isinstance(node.op, (ast.Div, ast.Mult, ast.Add, ast.Sub)):
            a, b = num(node.left), num(node.right)
            if a is None or b is None:
                return None
            if isinstance(node.op, ast.Div):
                if b == 0:
                    raise ParseError("division by zero")
                return a / b
            if isinstance(node.op, ast.Mult):
                return a * b
            return a + b if isinstance(node.op, ast.Add) else a - b
        return None

    def mul(a: LaurentOp, b: LaurentOp) -> LaurentOp:
        try:
            return _mul(a, b, floor)
        except BadParameter:
            raise ParseError("product with negative powers of D needs a floor") from None

    def walk(node) -> LaurentOp:
        c = num(node)
        if c is not None:
            return LaurentOp.scalar(c)
        if isinstance(node, ast.Name):
            if node.id == "D":
                return LaurentOp.d(1)
            if re.fullmatch(r"u\d+", node.id):
                i = int(node.id[1:])
                if i > INDEX_CAP:
                    raise IndexOverflow(f"u{i} exceeds the index cap u{INDEX_CAP}")
                return LaurentOp.scalar(DiffPoly.var(i))
            raise ParseError(f"unknown symbol {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -walk(node.operand)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.UAdd):
            return walk(node.operand)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.left, ast.Name) and node.left.id == "D"):
                    raise ParseError("only D may be raised to a power")
                k = num(node.right)
                if k is None or k.denominator != 1:
                    raise ParseError("exponent of D must be an integer")
                return LaurentOp.d(int(k))
            if isinstance(node.op, ast.Add):
                return walk(node.left) + walk(node.right)
            if isinstance(node.op, ast.Sub):
                return walk(node.left) - walk(node.right)
            if isinstance(node.op, ast.Mult):
                return mul(walk(node.left), walk(node.right))
            if isinstance(node.op, ast.Div):
                raise ParseError("division is allowed only between rational literals")
        raise ParseError(f"unsupported syntax: {ast.dump(node)[:40]}")

    out = walk(tree.body)
    return out.cut(floor) if floor is not None and out.floor is not None else out


def parse_diffpoly(text: str) -> DiffPoly:
    op = parse_op(text)
    if any(k != 0 for k in op.coeffs):
        raise ParseError("expected a differential polynomial without D")
    return op.coeff(0)


def random_op(rng, top: int = 2, low: int = -2, max_terms: int = 3, max_index: int = 2) -> LaurentOp:
    """Small random exact operator for property checks."""
    coeffs = {}
    for k in range(low, top + 1):
        if rng.random() < 0.3 and k != top:
            continue
        terms = {}
        for _ in range(rng.integers(1, max_terms + 1)):
            deg = int(rng.integers(0, 3))
            mono = tuple(int(rng.integers(0, max_index + 1)) for _ in range(deg))
            terms[mono] = Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
        coeffs[k] = DiffPoly(terms)
    return LaurentOp(coeffs)
