"""JSON encoding for CLI payloads and inputs.

Exact rationals serialize as ints or "p/q" strings, floats as JSON numbers,
and complex values as [re, im] pairs (a bare number when im = 0). ``decode``
inverts ``encode`` on everything ``encode`` emits.
"""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from typing import Any

import numpy as np

from .algebra import RealPoly
from .errors import ParseError
from .gaussian import GaussianRational

_FRAC = re.compile(r"^-?\d+/\d+$")


def encode_real(x) -> Any:
    if isinstance(x, bool):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    v = float(x) + 0.0
    if not math.isfinite(v):
        raise ValueError("non-finite value in output")
    return v


def encode_scalar(x) -> Any:
    if isinstance(x, GaussianRational):
        return encode_real(x.re) if x.im == 0 else [encode_real(x.re), encode_real(x.im)]
    if isinstance(x, (complex, np.complexfloating)):
        z = complex(x)
        return encode_real(z.real) if z.imag == 0 else [z.real, z.imag]
    return encode_real(x)


def encode(obj) -> Any:
    """Convert results into JSON-ready structures."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, RealPoly):
        return {"coeffs": [encode_real(c) for c in obj.coeffs]}
    if isinstance(obj, np.ndarray):
        if obj.ndim == 0:
            return encode_scalar(obj.item())
        return [encode(v) for v in obj.tolist()] if obj.dtype != object else [encode(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    return encode_scalar(obj)


def decode(obj) -> Any:
    """Inverse of ``encode`` on its image: "p/q" strings become Fractions."""
    if isinstance(obj, str):
        return Fraction(obj) if _FRAC.match(obj) else obj
    if isinstance(obj, list):
        return [decode(v) for v in obj]
    if isinstance(obj, dict):
        return {k: decode(v) for k, v in obj.items()}
    return obj


def dumps(obj, compact: bool = True) -> str:
    if compact:
        return json.dumps(obj, separators=(",", ":"), ensure_ascii=False, allow_nan=False)
    return json.dumps(obj, indent=2, ensure_ascii=False, allow_nan=False)


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}") from None


# ---------------------------------------------------------------------------
# readers for inputs
# ---------------------------------------------------------------------------


def read_real(v):
    """int, float or "p/q" string → exact (int/Fraction) or float."""
    if isinstance(v, bool):
        raise ParseError("booleans are not numbers")
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        if not math.isfinite(v):
            raise ParseError("non-finite number")
        return v
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a number: {v!r}") from None
    raise ParseError(f"not a number: {v!r}")


def read_scalar(v):
    """A real (see read_real) or a [re, im] pair; exact pairs become Gaussian rationals."""
    if isinstance(v, list):
        if len(v) != 2:
            raise ParseError("complex values are [re, im] pairs")
        re_, im_ = read_real(v[0]), read_real(v[1])
        if isinstance(re_, float) or isinstance(im_, float):
            return complex(float(re_), float(im_))
        return GaussianRational(re_, im_)
    return read_real(v)


def read_scalars(v) -> list:
    if isinstance(v, dict):
        for key in ("c", "gamma", "coeffs", "g"):
            if key in v:
                return read_scalars(v[key])
        raise ParseError("expected a list of scalars")
    if not isinstance(v, list):
        raise ParseError("expected a list of scalars")
    return [read_scalar(x) for x in v]


def read_reals(v) -> list:
    if isinstance(v, dict) and "coeffs" in v:
        v = v["coeffs"]
    if not isinstance(v, list):
        raise ParseError("expected a list of numbers")
    return [read_real(x) for x in v]


def read_matrix(v):
    """Nested rows, or {"rows", "cols", "re", "im"} row-major.

    Exact entries give an object array of Fractions; otherwise float/complex.
    """
    if isinstance(v, dict):
        try:
            r, c = int(v["rows"]), int(v["cols"])
            re_ = [read_real(x) for x in v["re"]]
            im_ = [read_real(x) for x in v.get("im", [0] * (r * c))]
        except (KeyError, TypeError, ValueError):
            raise ParseError("matrix objects need rows, cols, re[, im]") from None
        if len(re_) != r * c or len(im_) != r * c:
            raise ParseError("matrix entry count does not match rows*cols")
        entries = [read_scalar([a, b]) if b != 0 else a for a, b in zip(re_, im_)]
        rows = [entries[i * c : (i + 1) * c] for i in range(r)]
    elif isinstance(v, list) and v and all(isinstance(row, list) for row in v):
        rows = [[read_scalar(x) for x in row] for row in v]
    else:
        raise ParseError("expected a matrix")
    if not rows or not rows[0] or any(len(row) != len(rows[0]) for row in rows):
        raise ParseError("matrix rows must be nonempty and equally long")
    flat = [x for row in rows for x in row]
    if all(isinstance(x, (int, Fraction)) for x in flat):
        return np.array([[Fraction(x) for x in row] for row in rows], dtype=object)
    if any(isinstance(x, (complex, GaussianRational)) for x in flat):
        return np.array([[complex(x) for x in row] for row in rows])
    return np.array([[float(x) for x in row] for row in rows])


def matrix_payload(m) -> dict:
    """{"rows", "cols", "re", "im"} row-major (exact entries kept exact)."""
    a = np.asarray(m)
    r, c = a.shape
    flat = list(a.ravel())
    if a.dtype == object:
        re_ = [encode_real(x) for x in flat]
        im_ = [0] * len(flat)
    else:
        z = a.astype(complex).ravel()
        re_ = [float(x.real) for x in z]
        im_ = [float(x.imag) for x in z]
    return {"rows": r, "cols": c, "re": re_, "im": im_}
