"""Command-line front end: ``schurkit <group> <command> [options]``.

Every invocation prints one JSON report
``{"status", "payload", "provenance", "caveats"[, "code", "message"]}`` and
exits 0 (ok), 1 (domain error) or 2 (parse error / unknown command).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np

from . import algebra, hadamard, jsonio, majorization, polya_schur, psido, schur_function, summability
from .battery import run_battery
from .errors import ParseError, SchurKitError, ShapeMismatch, UnknownCommand
from .gaussian import GaussianRational

FINITE_SECTION = "finite-section evidence only; verdicts about infinite matrices are corroborated, not proved"


@dataclass
class Report:
    status: str
    payload: object
    provenance: str
    caveats: List[str] = field(default_factory=list)
    code: Optional[str] = None
    message: Optional[str] = None

    def to_json(self) -> dict:
        out = {"status": self.status, "payload": self.payload, "provenance": self.provenance, "caveats": self.caveats}
        if self.code is not None:
            out["code"] = self.code
            out["message"] = self.message
        return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        if "invalid choice" in message:
            raise UnknownCommand(message)
        raise ParseError(message)

    def exit(self, status=0, message=None):
        if status:
            raise ParseError(message or "argument error")
        super().exit(status, message)


# ---------------------------------------------------------------------------
# argument readers
# ---------------------------------------------------------------------------


def _json_arg(text):
    if isinstance(text, (list, dict, int, float)):
        return text
    if isinstance(text, str) and os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            return jsonio.loads(fh.read())
    return jsonio.loads(text)


def _need(args, name):
    v = getattr(args, name, None)
    if v is None:
        raise ParseError(f"missing --{name.replace('_', '-')}")
    return v


def _scalars(args, name) -> list:
    return jsonio.read_scalars(_json_arg(_need(args, name)))


def _reals(args, name) -> list:
    return jsonio.read_reals(_json_arg(_need(args, name)))


def _int_arg(v, name) -> int:
    try:
        if isinstance(v, bool):
            raise ValueError
        if isinstance(v, int):
            return v
        return int(str(v).strip())
    except (TypeError, ValueError):
        raise ParseError(f"--{name} must be an integer") from None


def _matrix(spec):
    """Matrix from a file, a JSON literal or a named shorthand.

    Shorthands: ``identity:n``, ``ones:n``, ``gallery:<name>:n[:param]``.
    """
    if isinstance(spec, str):
        s = spec.strip()
        if s.startswith("identity:"):
            n = _int_arg(s.split(":", 1)[1], "matrix")
            return np.array([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object)
        if s.startswith("ones:"):
            n = _int_arg(s.split(":", 1)[1], "matrix")
            return np.array([[Fraction(1)] * n for _ in range(n)], dtype=object)
        if s.startswith("gallery:"):
            parts = s.split(":")
            if len(parts) < 3:
                raise ParseError("gallery:<name>:<n>[:<param>]")
            name, n = parts[1], _int_arg(parts[2], "matrix")
            param = float(parts[3]) if len(parts) > 3 else None
            return hadamard.matrix_gallery(name, n, lam=param, t=param)
    return jsonio.read_matrix(_json_arg(spec))


def _float_matrix(m) -> np.ndarray:
    a = np.asarray(m)
    if a.dtype == object:
        return np.array([[float(v) for v in row] for row in a])
    return a


def _poly(text) -> algebra.RealPoly:
    if isinstance(text, dict) or (isinstance(text, str) and text.strip().startswith(("{", "["))):
        return algebra.RealPoly(tuple(Fraction(v) for v in jsonio.read_reals(_json_arg(text))))
    return polya_schur.parse_poly(str(text))


def _op(text, floor=None) -> psido.LaurentOp:
    if isinstance(text, dict):
        # an operator payload: text known down to its own floor
        if "text" not in text:
            raise ParseError("operator objects need a text field")
        known = text.get("floor")
        f = psido.parse_op(str(text["text"]), floor if known is None else known)
        return f if known is None else f.cut(_int_arg(known, "floor"))
    return psido.parse_op(str(text), floor)


def _poly_out(p: algebra.RealPoly) -> dict:
    return {"coeffs": [jsonio.encode_real(c) for c in p.coeffs], "text": algebra.format_poly(p)}


def _op_out(f: psido.LaurentOp) -> dict:
    return {
        "text": psido.format_op(f),
        "floor": f.floor,
        "coeffs": {str(k): str(f.coeffs[k]) for k in sorted(f.coeffs, reverse=True)},
    }


def _measure(spec) -> schur_function.DiscreteMeasure:
    data = _json_arg(spec)
    if isinstance(data, dict):
        data = data.get("atoms")
    if not isinstance(data, list) or not data:
        raise ParseError('measures are {"atoms":[{"t":[re,im],"w":r}, ...]}')
    pts, ws = [], []
    for atom in data:
        if not isinstance(atom, dict) or "t" not in atom or "w" not in atom:
            raise ParseError("each atom needs t and w")
        pts.append(jsonio.read_scalar(atom["t"]))
        ws.append(jsonio.read_real(atom["w"]))
    try:
        return schur_function.DiscreteMeasure(tuple(pts), tuple(ws))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# ---------------------------------------------------------------------------
# handlers: each returns (payload, caveats)
# ---------------------------------------------------------------------------


def _rational_fn(f: schur_function.RationalFn) -> dict:
    return {"num": jsonio.encode(list(f.num)), "den": jsonio.encode(list(f.den))}


def h_schur_params(a):
    tol = a.tol if a.tol is not None else schur_function.DEFAULT_TOL_UNIT
    p = schur_function.schur_parameters(_scalars(a, "c"), tol_unit=tol)
    return {"gamma": jsonio.encode(list(p.gammas)), "terminated": p.terminated}, []


def h_schur_approximant(a):
    return _rational_fn(schur_function.approximant(_scalars(a, "gamma"))), []


def h_schur_interpolate(a):
    v = schur_function.solvability(_scalars(a, "c"))
    out = {
        "kind": v.kind,
        "hermitian_form_psd": v.hermitian_form_psd,
        "hermitian_form_pd": v.hermitian_form_pd,
        "min_eigenvalue": v.min_eigenvalue,
        "parameter_kind": v.parameter_kind,
        "agrees": v.agrees,
    }
    if v.function is not None:
        out["function"] = _rational_fn(v.function)
    if v.params is not None:
        out["gamma"] = jsonio.encode(list(v.params.gammas))
    return out, []


def h_schur_cohn(a):
    return {"stable": schur_function.schur_cohn(_scalars(a, "g"))}, []


def h_schur_resolvent(a):
    w = schur_function.resolvent_matrix(_scalars(a, "gamma"))
    out = {
        "w11": jsonio.encode(list(w.w11)),
        "w12": jsonio.encode(list(w.w12)),
        "w21": jsonio.encode(list(w.w21)),
        "w22": jsonio.encode(list(w.w22)),
        "norm_sq": jsonio.encode(w.norm_sq),
    }
    if getattr(a, "z", None) is not None:
        z = jsonio.read_scalar(_json_arg(a.z))
        out["value"] = jsonio.encode(w.evaluate(complex(z)))
    return out, []


def h_schur_opuc(a):
    d = schur_function.szego_polys(_measure(_need(a, "atoms")))
    return {
        "reflections": jsonio.encode(list(d.reflections)),
        "terminal": jsonio.encode(d.terminal),
        "phis": jsonio.encode([list(p) for p in d.phis]),
    }, []


def h_schur_from_measure(a):
    m = _int_arg(_need(a, "m"), "m")
    if getattr(a, "moments", None) is not None:
        c = schur_function.schur_from_measure(None, m, moments=_scalars(a, "moments"))
    else:
        c = schur_function.schur_from_measure(_measure(_need(a, "atoms")), m)
    return {"c": jsonio.encode(list(c))}, []


def h_norm_test(a):
    m = _float_matrix(_matrix(_need(a, "matrix")))
    w = _reals(a, "weights") if getattr(a, "weights", None) is not None else None
    rep = hadamard.schur_test(m, [float(x) for x in w] if w is not None else None)
    return {
        "zeta": rep.zeta,
        "kappa": rep.kappa,
        "bound": rep.bound,
        "spectral_norm": algebra.spectral_norm(m),
    }, []


def h_norm_product(a):
    x, y = _matrix(_need(a, "a")), _matrix(_need(a, "b"))
    if x.dtype == object and y.dtype == object:
        if x.shape != y.shape:
            raise ShapeMismatch(f"shapes differ: {x.shape} vs {y.shape}")
        return jsonio.matrix_payload(x * y), []
    return jsonio.matrix_payload(hadamard.schur_product(_float_matrix(x), _float_matrix(y))), []


def h_norm_multiplier(a):
    h = _float_matrix(_matrix(_need(a, "h")))
    m = _float_matrix(_matrix(_need(a, "a")))
    mode = a.mode or "psd_diag"
    factors = None
    if mode == "factorized":
        factors = (_float_matrix(_matrix(_need(a, "l"))), _float_matrix(_matrix(_need(a, "m"))))
    rep = hadamard.multiplier_bound(h, m, mode, factors)
    return {"mode": rep.mode, "d_h": rep.d_h, "lhs": rep.lhs, "rhs": rep.rhs}, []


def h_norm_gallery(a):
    name = _need(a, "name")
    n = _int_arg(_need(a, "n"), "n")
    lam = float(a.lam) if a.lam is not None else None
    t = float(a.t) if a.t is not None else None
    exact = name in ("hilbert_plus", "hilbert_minus")
    m = hadamard.matrix_gallery(name, n, lam=lam, t=t, kind=a.kind or "minus", exact=exact)
    return jsonio.matrix_payload(m), []


def h_major_check(a):
    return {"majorizes": majorization.majorizes([float(v) for v in _reals(a, "x")], [float(v) for v in _reals(a, "y")])}, []


def h_major_birkhoff(a):
    m = _matrix(_need(a, "matrix"))
    rows = [list(r) for r in m] if m.dtype == object else m
    dec = majorization.birkhoff(rows)
    terms = [{"lambda": jsonio.encode_real(lam), "perm": list(perm)} for lam, perm in dec.terms]
    return {"terms": terms}, []


def h_major_transfer(a):
    m = majorization.hlp_transfer([float(v) for v in _reals(a, "x")], [float(v) for v in _reals(a, "y")])
    return {"matrix": jsonio.encode(m)}, []


def h_major_horn(a):
    h = majorization.horn_construct([float(v) for v in _reals(a, "spectrum")], [float(v) for v in _reals(a, "diagonal")])
    return {"matrix": jsonio.encode(h)}, []


def h_major_ortho(a):
    w = majorization.ortho_stochastic_witness(_float_matrix(_matrix(_need(a, "matrix"))))
    return {"witness": None if w is None else jsonio.encode(w)}, []


_CONVEX = {
    "sum_squares": (lambda x: float(np.sum(x**2)), lambda x: 2 * x),
    "neg_sum_squares": (lambda x: -float(np.sum(x**2)), lambda x: -2 * x),
    "neg_e2": (lambda x: -majorization.elementary_symmetric(x, 2), None),
    "neg_e3": (lambda x: -majorization.elementary_symmetric(x, 3), None),
}


def h_major_convex(a):
    name = a.phi or "sum_squares"
    if name not in _CONVEX:
        raise ParseError(f"--phi must be one of {sorted(_CONVEX)}")
    phi, grad = _CONVEX[name]
    n = _int_arg(a.n if a.n is not None else 4, "n")
    samples = _int_arg(a.samples if a.samples is not None else 1000, "samples")
    v = majorization.schur_convex_test(phi, n, samples, grad=grad, rng=a.seed)
    return {
        "consistent": v.consistent,
        "counterexample": None if v.counterexample is None else list(v.counterexample),
        "samples": v.samples,
    }, []


def _summ_matrix(a, n: int) -> summability.TransformMatrix:
    spec = str(a.matrix or "builtin:cesaro")
    r = _int_arg(a.r if a.r is not None else 1, "r")
    if spec.startswith("builtin:"):
        spec = spec.split(":", 1)[1]
    if spec.startswith("custom:"):
        m = _float_matrix(jsonio.read_matrix(_json_arg(spec.split(":", 1)[1])))
        return summability.from_array(m)
    return summability.builtin(spec, n, r)


def _classification_out(c: summability.Classification) -> dict:
    return {
        "preserving": c.preserving,
        "regular": c.regular,
        "generating": c.generating,
        "column_limits": jsonio.encode(list(c.column_limits[:8])),
        "row_sum_limit": jsonio.encode(c.row_sum_limit),
        "row_norm_sup": c.row_norm_sup,
        "alpha": jsonio.encode(c.alpha),
        "evidence_truncation": c.evidence_truncation,
        "tail_index": c.tail_index,
    }


def h_summ_classify(a):
    n = _int_arg(a.n if a.n is not None else 256, "n")
    mat = _summ_matrix(a, n)
    if a.n is None:
        n = min(n, mat.declared_truncation)
    grid = tuple(sorted({g for g in (n // 4, n // 2, n) if g >= 2}))
    tol = a.tol if a.tol is not None else summability.DEFAULT_TOL
    c = summability.classify(mat, grid, tol)
    return _classification_out(c), [FINITE_SECTION]


_SEQUENCES = {
    "alternating": lambda k: (1 + (-1) ** k) / 2,
    "ones": lambda k: 1.0,
    "inverse": lambda k: 1.0 / k,
    "alt_inverse": lambda k: (-1) ** k / k,
    "ratio": lambda k: k / (k + 1),
}


def h_summ_apply(a):
    n = _int_arg(a.n if a.n is not None else 1000, "n")
    mat = _summ_matrix(a, n)
    xs = a.x or "alternating"
    if xs in _SEQUENCES:
        x = _SEQUENCES[xs]
    else:
        x = [float(v) for v in jsonio.read_reals(_json_arg(xs))]
    y = summability.apply_transform(mat, x, n).y
    tail = [float(v) for v in y[-5:]]
    return {"n": n, "y_last": float(y[-1]), "y_tail": tail}, [FINITE_SECTION]


def h_summ_mean(a):
    kind = a.kind or "holder"
    r = _int_arg(_need(a, "r"), "r")
    n = _int_arg(_need(a, "n"), "n")
    m = summability.mean_matrix(kind, r, n)
    return {"rows": [[jsonio.encode_real(v) for v in row] for row in m.exact_section]}, []


def h_summ_equiv(a):
    r = _int_arg(_need(a, "r"), "r")
    n = _int_arg(a.n if a.n is not None else 100, "n")
    tol = a.tol if a.tol is not None else 1e-3
    return {"equivalent": summability.equivalence_check(r, n, tol), "r": r, "n": n, "tol": tol}, [FINITE_SECTION]


def _floor(a) -> int:
    return _int_arg(_need(a, "floor"), "floor")


def h_psido_mul(a):
    fl = _floor(a)
    return _op_out(psido.op_mul(_op(_need(a, "f"), fl), _op(_need(a, "g"), fl), fl)), []


def h_psido_power(a):
    fl = _floor(a)
    num = _int_arg(a.num if a.num is not None else 1, "num")
    den = _int_arg(a.den if a.den is not None else 1, "den")
    return _op_out(psido.power(_op(_need(a, "op"), fl), num, den, fl)), []


def h_psido_truncate(a):
    fl = _int_arg(a.floor, "floor") if a.floor is not None else None
    return _op_out(psido.truncate(_op(_need(a, "op"), fl), a.part or "positive")), []


def h_psido_commutator(a):
    fl = _floor(a)
    return _op_out(psido.commutator(_op(_need(a, "a"), fl), _op(_need(a, "b"), fl), fl)), []


def h_psido_kdv(a):
    return str(psido.kdv_commutator()), []


def h_psido_commutant(a):
    fl = _floor(a)
    ok = psido.commutant_check(_op(_need(a, "p"), fl), _op(_need(a, "f1"), fl), _op(_need(a, "f2"), fl), fl)
    return {"commute": ok}, []


def h_poly_nonreal(a):
    return {"nonreal": polya_schur.nonreal_count(_poly(_need(a, "p")))}, []


def h_poly_compose(a):
    r = polya_schur.compose(_poly(_need(a, "p")), _poly(_need(a, "q")), _need(a, "mode"))
    out = _poly_out(r)
    out["nonreal"] = None if r.is_zero() else polya_schur.nonreal_count(r)
    return out, []


def h_poly_multiplier(a):
    g = polya_schur.MultiplierSeq(tuple(Fraction(v) for v in _reals(a, "gamma")))
    r = polya_schur.apply_multiplier(g, _poly(_need(a, "p")))
    out = _poly_out(r)
    out["nonreal"] = None if r.is_zero() else polya_schur.nonreal_count(r)
    return out, []


def h_poly_signs(a):
    return {"sign_changes": polya_schur.sign_changes(_reals(a, "x"))}, []


def h_poly_tp(a):
    order = _int_arg(a.order, "order") if a.order is not None else None
    if getattr(a, "sequence", None) is not None:
        seq = [Fraction(v) if not isinstance(v, float) else v for v in _reals(a, "sequence")]
        size = _int_arg(_need(a, "size"), "size")
        rep = polya_schur.total_positivity(sequence=seq, size=size, order=order)
    else:
        m = _matrix(_need(a, "matrix"))
        rep = polya_schur.total_positivity([list(r) for r in m], order)
    return {
        "totally_positive": rep.holds,
        "order_checked": rep.order_checked,
        "min_minor": jsonio.encode_real(rep.min_minor),
        "witness": None if rep.witness is None else [list(rep.witness[0]), list(rep.witness[1])],
    }, []


def h_poly_vd(a):
    m = _float_matrix(_matrix(_need(a, "matrix")))
    trials = _int_arg(a.trials if a.trials is not None else 1000, "trials")
    v = polya_schur.variation_diminishing_check(m, trials, np.random.default_rng(a.seed))
    return {
        "consistent": v.consistent,
        "counterexample": None if v.counterexample is None else list(v.counterexample),
        "checked": v.checked,
    }, []


def h_selftest(a):
    res = run_battery(a.seed if a.seed is not None else 0)
    ok = all(v["fail"] == 0 for v in res.values())
    return {"all_pass": ok, "properties": res}, [FINITE_SECTION]


# ---------------------------------------------------------------------------
# command table
# ---------------------------------------------------------------------------

# (group, command) -> (handler, module.operation, options)
COMMANDS: Dict[tuple, tuple] = {
    ("schur", "params"): (h_schur_params, "schur_function.schur_parameters", ["c"]),
    ("schur", "approximant"): (h_schur_approximant, "schur_function.approximant", ["gamma"]),
    ("schur", "interpolate"): (h_schur_interpolate, "schur_function.solvability", ["c"]),
    ("schur", "cohn"): (h_schur_cohn, "schur_function.schur_cohn", ["g"]),
    ("schur", "resolvent"): (h_schur_resolvent, "schur_function.resolvent_matrix", ["gamma", "z"]),
    ("schur", "opuc"): (h_schur_opuc, "schur_function.szego_polys", ["atoms"]),
    ("schur", "from-measure"): (h_schur_from_measure, "schur_function.schur_from_measure", ["atoms", "m", "moments"]),
    ("norm", "test"): (h_norm_test, "hadamard.schur_test", ["matrix", "weights"]),
    ("norm", "product"): (h_norm_product, "hadamard.schur_product", ["a", "b"]),
    ("norm", "multiplier"): (h_norm_multiplier, "hadamard.multiplier_bound", ["h", "a", "mode", "l", "m"]),
    ("norm", "gallery"): (h_norm_gallery, "hadamard.matrix_gallery", ["name", "n", "lam", "t", "kind"]),
    ("major", "check"): (h_major_check, "majorization.majorizes", ["x", "y"]),
    ("major", "birkhoff"): (h_major_birkhoff, "majorization.birkhoff", ["matrix"]),
    ("major", "transfer"): (h_major_transfer, "majorization.hlp_transfer", ["x", "y"]),
    ("major", "horn"): (h_major_horn, "majorization.horn_construct", ["spectrum", "diagonal"]),
    ("major", "ortho"): (h_major_ortho, "majorization.ortho_stochastic_witness", ["matrix"]),
    ("major", "convex"): (h_major_convex, "majorization.schur_convex_test", ["phi", "n", "samples"]),
    ("summ", "classify"): (h_summ_classify, "summability.classify", ["matrix", "r", "n"]),
    ("summ", "apply"): (h_summ_apply, "summability.apply_transform", ["matrix", "r", "n", "x"]),
    ("summ", "mean"): (h_summ_mean, "summability.mean_matrix", ["kind", "r", "n"]),
    ("summ", "equiv"): (h_summ_equiv, "summability.equivalence_check", ["r", "n"]),
    ("psido", "mul"): (h_psido_mul, "psido.op_mul", ["f", "g", "floor"]),
    ("psido", "power"): (h_psido_power, "psido.power", ["op", "num", "den", "floor"]),
    ("psido", "root"): (h_psido_power, "psido.power", ["op", "num", "den", "floor"]),
    ("psido", "truncate"): (h_psido_truncate, "psido.truncate", ["op", "part", "floor"]),
    ("psido", "commutator"): (h_psido_commutator, "psido.commutator", ["a", "b", "floor"]),
    ("psido", "kdv"): (h_psido_kdv, "psido.commutator", []),
    ("psido", "commutant"): (h_psido_commutant, "psido.commutant_check", ["p", "f1", "f2", "floor"]),
    ("poly", "nonreal"): (h_poly_nonreal, "polya_schur.nonreal_count", ["p"]),
    ("poly", "compose"): (h_poly_compose, "polya_schur.compose", ["mode", "p", "q"]),
    ("poly", "multiplier"): (h_poly_multiplier, "polya_schur.apply_multiplier", ["gamma", "p"]),
    ("poly", "signs"): (h_poly_signs, "polya_schur.sign_changes", ["x"]),
    ("poly", "tp"): (h_poly_tp, "polya_schur.total_positivity", ["matrix", "sequence", "size", "order"]),
    ("poly", "vd"): (h_poly_vd, "polya_schur.variation_diminishing_check", ["matrix", "trials"]),
    ("selftest", None): (h_selftest, "battery.run_battery", []),
}

_DEFAULTS = {"seed": 0}


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", default=d, help="integer seed for randomized commands")
    p.add_argument("--tol", default=d, help="tolerance override")
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False, help="compact JSON output")
    p.add_argument("--input", default=d, metavar="FILE", help="JSON file with option values")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="schurkit", description="Classical Schur analysis toolkit")
    _add_globals(parser, suppress=False)
    groups = parser.add_subparsers(dest="group", parser_class=_Parser)
    by_group: Dict[str, list] = {}
    for (g, c), spec in COMMANDS.items():
        by_group.setdefault(g, []).append((c, spec))
    for g, cmds in by_group.items():
        if cmds[0][0] is None:
            leaf = groups.add_parser(g)
            _add_globals(leaf, suppress=True)
            continue
        gp = groups.add_parser(g)
        sub = gp.add_subparsers(dest="command", parser_class=_Parser)
        for c, (_, _, opts) in cmds:
            leaf = sub.add_parser(c)
            _add_globals(leaf, suppress=True)
            for o in opts:
                leaf.add_argument(f"--{o}", dest=o.replace("-", "_"), default=None)
    return parser


def _apply_input(args, opts) -> None:
    path = getattr(args, "input", None)
    if not path:
        return
    try:
        with open(path, encoding="utf-8") as fh:
            data = jsonio.loads(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    if isinstance(data, dict) and "payload" in data and "status" in data:
        data = data["payload"]
    if not isinstance(data, dict):
        raise ParseError("--input must contain a JSON object")
    data = _typed_payload(data, opts)
    for key, value in data.items():
        dest = key.replace("-", "_")
        if dest in opts:
            if getattr(args, dest, None) is None:
                setattr(args, dest, value)
        elif key not in _IGNORED_INPUT_KEYS:
            raise ParseError(f"unknown input key {key!r}")


_IGNORED_INPUT_KEYS = {"terminated", "text", "nonreal"}
_MATRIX_OPTS = ("matrix", "a", "h")


def _typed_payload(data: dict, opts) -> dict:
    """Route matrix, polynomial and operator payloads to the option that reads them."""
    if "rows" in data and "cols" in data:
        dest = next((o for o in _MATRIX_OPTS if o in opts), None)
        return {dest: data} if dest else data
    coeffs = data.get("coeffs")
    if isinstance(coeffs, list) and "p" in opts and "coeffs" not in opts:
        return {"p": {"coeffs": coeffs}}
    if isinstance(coeffs, dict) and "text" in data and "op" in opts:
        return {"op": {"text": data["text"], "floor": data.get("floor")}}
    return data


def _normalize_globals(args) -> None:
    seed = getattr(args, "seed", None)
    if seed is not None:
        try:
            args.seed = int(str(seed).strip())
        except ValueError:
            raise ParseError(f"--seed must be an integer, got {seed!r}") from None
    tol = getattr(args, "tol", None)
    if tol is not None:
        try:
            args.tol = float(tol)
        except ValueError:
            raise ParseError(f"--tol must be a number, got {tol!r}") from None
        if not args.tol > 0:
            raise ParseError("--tol must be positive")


def run(argv: Optional[List[str]] = None) -> tuple:
    """Parse, dispatch and build the report; returns (Report, exit_code, compact)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    compact = "--json" in argv
    provenance = "cli"
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        compact = bool(getattr(args, "json", False))
        group = getattr(args, "group", None)
        command = getattr(args, "command", None)
        if group is None:
            raise UnknownCommand("no subcommand given")
        key = (group, command)
        if key not in COMMANDS:
            raise UnknownCommand(f"unknown command {group} {command or ''}".strip())
        handler, provenance, opts = COMMANDS[key]
        for name in opts:
            if not hasattr(args, name.replace("-", "_")):
                setattr(args, name.replace("-", "_"), None)
        for name in ("seed", "tol", "input"):
            if not hasattr(args, name):
                setattr(args, name, None)
        _apply_input(args, [o.replace("-", "_") for o in opts])
        _normalize_globals(args)
        payload, caveats = handler(args)
        payload = jsonio.encode(payload)
        status_ok = True
        if key == ("selftest", None) and not payload["all_pass"]:
            status_ok = False
        rep = Report("ok" if status_ok else "error", payload, provenance, list(caveats))
        if not status_ok:
            rep.code, rep.message = "SelftestFailure", "some properties failed"
        return rep, 0 if status_ok else 1, compact
    except (ParseError, UnknownCommand) as exc:
        return Report("error", None, provenance, [], exc.code, str(exc)), 2, compact
    except SchurKitError as exc:
        return Report("error", None, provenance, [], exc.code, str(exc)), 1, compact
    except (ValueError, ArithmeticError, IndexError) as exc:
        return Report("error", None, provenance, [], type(exc).__name__, str(exc)), 1, compact


def main(argv: Optional[List[str]] = None) -> int:
    rep, code, compact = run(argv)
    sys.stdout.write(jsonio.dumps(rep.to_json(), compact=compact) + "\n")
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
