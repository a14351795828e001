"""Command-line front end.

Subcommands: decide, decide-t, certify, enumerate-torsion, height, scan,
count, lpoly, frobdet, check-cert.  Curve parameters are parsed as exact
rationals only ("m" or "m/n"); heights are the sole floating outputs and
carry explicit error bounds.  Output is canonical JSON by default
(--table for humans).  Results can be cached in a directory given by
CERESA_CACHE_DIR or --cache-dir; isomorphic inputs share cache entries
because keys use the canonical model.

Exit codes: 0 success; 2 invalid or degenerate input (Delta = 0, bad
reduction, malformed point); 3 certificate search exhausted; 4 internal
consistency failure (failed factorization, failed certificate check);
64 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .arith import inv_mod
from .elliptic import CurvePoint, WeierstrassCurveQ, on_curve
from .heights import canonical_height, northcott_scan
from .picard import (
    DegenerateCurve,
    PicardCurve,
    canonical_model,
    decide_ceresa,
    decide_ceresa_t,
    enumerate_torsion_locus,
    invariants,
)
from . import ffcert
from .ffcert import (
    BadReduction,
    FactorizationFailure,
    InvalidHint,
    NoCertificateFound,
    certify_infinite,
    count_curve,
    frobenius_det,
    lpoly,
)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


class UsageError(Exception):
    pass


def _parse_rational(text: str) -> Fraction:
    if not _RATIONAL_RE.match(text):
        raise UsageError(f"not an exact rational: {text!r} (use m or m/n)")
    return Fraction(text)


def _rat_str(r) -> str:
    r = Fraction(r)
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass
class CliConfig:
    command: str
    parameters: dict
    cache_path: str | None
    output: str  # "json" | "table"
    out_file: str | None = None


# ---------------------------------------------------------------------------
# command implementations, each returning a JSON-ready dict

def _verdict_fields(verdict) -> dict:
    out = {"status": verdict.status, "evidence": verdict.evidence}
    if verdict.q_order is not None:
        out["q_order"] = verdict.q_order
    return out


def _cmd_decide(params: dict) -> dict:
    # isomorphic inputs give identical output (and share cache entries):
    # reduce to the canonical model first; the verdict is invariant
    ca, cb = canonical_model(params["a"], params["b"])
    curve = PicardCurve(Fraction(ca), Fraction(cb))
    inv = invariants(curve)
    out = {
        "a": _rat_str(curve.a),
        "b": _rat_str(curve.b),
        "delta": _rat_str(inv.delta),
        "j": _rat_str(inv.j),
    }
    out.update(_verdict_fields(decide_ceresa(curve)))
    return out


def _cmd_decide_t(params: dict) -> dict:
    t = params["t"]
    verdict = decide_ceresa_t(t)
    curve = PicardCurve(2 * t, Fraction(1))
    inv = invariants(curve)
    out = {
        "t": _rat_str(t),
        "a": _rat_str(curve.a),
        "b": _rat_str(curve.b),
        "delta": _rat_str(inv.delta),
        "j": _rat_str(inv.j),
    }
    out.update(_verdict_fields(verdict))
    return out


def _cert_to_dict(cert) -> dict:
    sig = cert.lift.sigma
    return {
        "a": _rat_str(cert.a),
        "b": _rat_str(cert.b),
        "v": cert.v,
        "ell": cert.ell,
        "q": cert.q,
        "sigma": "O" if sig.inf else f"({sig.x}, {sig.y})",
        "sigma_order": cert.lift.sigma_order,
        "lift_set_size": cert.lift.lift_set_size,
        "det_value": _rat_str(cert.det.det_value),
        "unit_mod_ell": cert.det.unit_mod_ell,
        "evidence": cert.evidence,
    }


def _cert_text_from_dict(d: dict) -> str:
    lines = ["ceresa-infinitude-certificate v1"]
    for name in ("a", "b", "v", "ell", "q", "sigma", "sigma_order", "det_value"):
        lines.append(f"{name} = {d[name]}")
    return "\n".join(lines) + "\n"


def _cmd_certify(params: dict) -> dict:
    ca, cb = canonical_model(params["a"], params["b"])
    cert = certify_infinite(
        Fraction(ca), Fraction(cb),
        v=params.get("v"), ell=params.get("ell"), q=params.get("q"),
        V_max=params["V_max"],
    )
    return _cert_to_dict(cert)


def _cmd_enumerate(params: dict) -> dict:
    entries = enumerate_torsion_locus(params["N_max"])
    return {
        "N_max": params["N_max"],
        "entries": [
            {
                "order": e.order,
                "polynomials": [p.to_str("t") for p in e.t_minimal_polynomials],
            }
            for e in entries
        ],
    }


def _cmd_height(params: dict) -> dict:
    d, x, y = params["d"], params["x"], params["y"]
    if d == 0:
        raise ValueError("d must be nonzero")
    E = WeierstrassCurveQ(d)
    P = CurvePoint(x, y)
    if not on_curve(E, P):
        raise ValueError("point is not on the curve")
    h = canonical_height(E, P)
    return {
        "d": _rat_str(d),
        "x": _rat_str(x),
        "y": _rat_str(y),
        "value": h.value,
        "error_bound": h.error_bound,
    }


def _cmd_scan(params: dict) -> dict:
    bound = params.get("bound")
    rows = northcott_scan(params["B"], bound if bound is not None else float("inf"))
    out_rows = []
    for row in rows:
        r = {
            "t": _rat_str(row.t),
            "status": row.verdict.status,
            "value": row.height.value,
            "error_bound": row.height.error_bound,
        }
        if row.verdict.q_order is not None:
            r["q_order"] = row.verdict.q_order
        out_rows.append(r)
    result = {"B": params["B"], "rows": out_rows}
    if bound is not None:
        result["bound"] = bound
    return result


def _rat_mod_p(r: Fraction, p: int) -> int:
    if r.denominator % p == 0:
        raise ValueError(f"denominator of {_rat_str(r)} is not invertible mod {p}")
    return r.numerator * inv_mod(r.denominator % p, p) % p


def _cmd_count(params: dict) -> dict:
    p, i = params["p"], params["i"]
    if p < 2:
        raise ValueError("p must be prime")
    a = _rat_mod_p(params["a"], p)
    b = _rat_mod_p(params["b"], p)
    rec = count_curve(a, b, p, i)
    return {"a": a, "b": b, "p": p, "i": i, "curve_count": rec.curve_count}


def _cmd_lpoly(params: dict) -> dict:
    rec = lpoly(params["a"], params["b"], params["p"])
    return {
        "p": rec.p,
        "L_C": list(rec.L_C.coefficients),
        "L_E": list(rec.L_E.coefficients),
        "L_P": list(rec.L_P.coefficients),
    }


def _cmd_frobdet(params: dict) -> dict:
    rec = frobenius_det(params["a"], params["b"], params["q"], params["ell"])
    return {
        "q": rec.q,
        "ell": rec.ell,
        "det_value": _rat_str(rec.det_value),
        "det_untwisted": str(rec.det_untwisted),
        "unit_mod_ell": rec.unit_mod_ell,
    }


_COMMANDS = {
    "decide": _cmd_decide,
    "decide-t": _cmd_decide_t,
    "certify": _cmd_certify,
    "enumerate-torsion": _cmd_enumerate,
    "height": _cmd_height,
    "scan": _cmd_scan,
    "count": _cmd_count,
    "lpoly": _cmd_lpoly,
    "frobdet": _cmd_frobdet,
}


# ---------------------------------------------------------------------------
# cache

def _cache_key(config: CliConfig) -> str:
    params = dict(config.parameters)
    if config.command == "count":
        # the computation lives over F_p: key on the reduced coefficients
        params["a"] = _rat_mod_p(params["a"], params["p"])
        params["b"] = _rat_mod_p(params["b"], params["p"])
    elif "a" in params and "b" in params:
        # isomorphic inputs share entries: replace (a, b) by the canonical model
        ca, cb = canonical_model(params["a"], params["b"])
        params["a"], params["b"] = ca, cb
    for k, val in params.items():
        if isinstance(val, Fraction):
            params[k] = _rat_str(val)
    return canonical_json(
        {"tool_version": __version__, "command": config.command, "params": params}
    )


def _cache_lookup(cache_dir: str, key: str) -> str | None:
    path = os.path.join(cache_dir, hashlib.sha256(key.encode()).hexdigest() + ".json")
    try:
        with open(path, encoding="utf-8") as fh:
            entry = json.load(fh)
    except (OSError, ValueError):
        return None
    if entry.get("tool_version") != __version__ or entry.get("key") != key:
        return None
    return entry["value"]


def _cache_store(cache_dir: str, key: str, value: str):
    os.makedirs(cache_dir, exist_ok=True)
    path = os.path.join(cache_dir, hashlib.sha256(key.encode()).hexdigest() + ".json")
    entry = {"tool_version": __version__, "key": key, "value": value}
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(entry, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# output + dispatch

def _print_table(result: dict, stream):
    def fmt(v):
        return json.dumps(v) if isinstance(v, (dict, list)) else str(v)

    if "rows" in result:
        rows = result["rows"]
        cols = ["t", "status", "q_order", "value", "error_bound"]
        print("\t".join(cols), file=stream)
        for r in rows:
            print("\t".join(str(r.get(c, "-")) for c in cols), file=stream)
    elif "entries" in result:
        for e in result["entries"]:
            polys = "; ".join(e["polynomials"]) or "(none)"
            print(f"N={e['order']}: {polys}", file=stream)
    else:
        for k, v in result.items():
            print(f"{k}: {fmt(v)}", file=stream)


def check_certificate(path: str) -> int:
    """Validate a serialized certificate file; exit 0 iff fully valid."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        print(canonical_json({"error": f"cannot read certificate: {e}"}))
        return 2
    ok, reason = ffcert.validate_certificate(text)
    print(canonical_json({"ok": ok, "reason": reason}))
    return 0 if ok else 4


def run(config: CliConfig) -> int:
    """Dispatch a parsed command; prints the result and returns the exit code."""
    if config.command == "check-cert":
        return check_certificate(config.parameters["path"])

    impl = _COMMANDS[config.command]
    cache_dir = config.cache_path
    payload: str | None = None
    key = None
    try:
        if cache_dir is not None:
            key = _cache_key(config)
            payload = _cache_lookup(cache_dir, key)
        if payload is None:
            result = impl(config.parameters)
            payload = canonical_json(result)
            if cache_dir is not None:
                _cache_store(cache_dir, key, payload)
    except (DegenerateCurve, BadReduction, InvalidHint, ValueError) as e:
        return _fail(config, str(e), 2)
    except NoCertificateFound as e:
        return _fail(config, str(e), 3)
    except FactorizationFailure as e:
        return _fail(config, str(e), 4)

    result = json.loads(payload)
    if config.command == "certify" and config.out_file:
        with open(config.out_file, "w", encoding="utf-8") as fh:
            fh.write(_cert_text_from_dict(result))
    if config.output == "json":
        print(payload)
    else:
        _print_table(result, sys.stdout)
    return 0


def _fail(config: CliConfig, message: str, code: int) -> int:
    if config.output == "json":
        print(canonical_json({"error": message}))
    else:
        print(f"error: {message}", file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ceresa", description=(
        "Decide torsion of the Ceresa cycle for bielliptic Picard curves "
        "y^3 = x^4 + ax^2 + b, and produce machine-checkable certificates."
    ))
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--table", action="store_true",
                        help="human-readable output instead of JSON")
        sp.add_argument("--cache-dir", default=None,
                        help="cache directory (CERESA_CACHE_DIR overrides)")
        return sp

    sp = add("decide", "torsion/infinite verdict for the curve (a, b)")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)

    sp = add("decide-t", "verdict on the line (a, b) = (2t, 1)")
    sp.add_argument("--t", required=True)

    sp = add("certify", "search or validate an infinite-order certificate")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--v", type=int, default=None)
    sp.add_argument("--ell", type=int, default=None)
    sp.add_argument("--q", type=int, default=None)
    sp.add_argument("--V-max", dest="V_max", type=int, default=200)
    sp.add_argument("--out", default=None, help="write the certificate text here")

    sp = add("enumerate-torsion", "minimal polynomials of torsion parameters t")
    sp.add_argument("--N-max", dest="N_max", type=int, required=True)

    sp = add("height", "canonical height of (x, y) on y^2 = x^3 + d")
    sp.add_argument("--d", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)

    sp = add("scan", "heights over the t-line for |num|, den <= B")
    sp.add_argument("--B", type=int, required=True)
    sp.add_argument("--bound", type=float, default=None,
                    help="only report rows with height <= bound")

    sp = add("count", "number of points of the curve over F_{p^i}")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--i", type=int, default=1)

    sp = add("lpoly", "L-polynomial of the curve at p with its factorization")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--p", type=int, required=True)

    sp = add("frobdet", "det(Fr_q - 1) on V, exactly")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)

    sp = add("check-cert", "re-validate a certificate file")
    sp.add_argument("path")

    return parser


def _config_from_args(args) -> CliConfig:
    params: dict = {}
    rationals = {"a", "b", "t", "d", "x", "y"}
    for name, value in vars(args).items():
        if name in ("command", "table", "cache_dir") or value is None:
            continue
        if name == "out":
            continue
        params[name] = _parse_rational(value) if name in rationals else value
    cache_dir = os.environ.get("CERESA_CACHE_DIR") or args.cache_dir
    return CliConfig(
        command=args.command,
        parameters=params,
        cache_path=cache_dir,
        output="table" if args.table else "json",
        out_file=getattr(args, "out", None),
    )


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        config = _config_from_args(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 64
    except SystemExit as e:  # --help / --version
        return int(e.code or 0)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
