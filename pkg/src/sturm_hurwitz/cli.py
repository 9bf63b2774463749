"""Command-line front end.

    sturm-hurwitz certify  INPUT [--mode paper|tight] [--format text|json] ...
    sturm-hurwitz oracle   INPUT [--samples N]
    sturm-hurwitz qp       INPUT --window T [--samples N]
    sturm-hurwitz plotdata INPUT [--grid N] [--out data.csv] [--zeros zeros.csv]

Input files are JSON documents with a ``kind`` of ``trigpoly``, ``samples``
or ``qpsum``.  Exit codes: 0 pass, 2 parse/usage error, 3 precondition
violation (zero function, nonzero mean), 4 dominance unreachable,
5 degenerate crossing, 6 internal tolerance failure or failed guarantee.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import oracle
from .errors import (
    CrossingDegenerate,
    DominanceUnreachable,
    PreconditionError,
    SturmHurwitzError,
    ZeroFunction,
)
from .ingest import SampledSignal, analyze
from .quasiperiodic import QPSum, QPTerm, density_report
from .sturm import CertifyConfig, ZeroCertificate, certify
from .trigpoly import TWO_PI, Harmonic, TrigPoly, antiderivative_iter, evaluate, rescaled_antiderivative

EXIT_PASS = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_DOMINANCE = 4
EXIT_DEGENERATE = 5
EXIT_TOLERANCE = 6


class ParseError(SturmHurwitzError):
    """Input file could not be read or does not match the schema."""


# -- input -------------------------------------------------------------------

_SCHEMAS = {
    "trigpoly": {"kind", "harmonics"},
    "samples": {"kind", "values"},
    "qpsum": {"kind", "terms"},
}


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number, got {json.dumps(value)}")
    if not math.isfinite(value):
        raise ParseError(f"{where}: value must be finite")
    return float(value)


def _fields(obj, allowed: set, required: set, where: str) -> dict:
    if not isinstance(obj, dict):
        raise ParseError(f"{where}: expected an object")
    unknown = set(obj) - allowed
    if unknown:
        raise ParseError(f"{where}: unknown field(s) {', '.join(sorted(unknown))}")
    missing = required - set(obj)
    if missing:
        raise ParseError(f"{where}: missing field(s) {', '.join(sorted(missing))}")
    return obj


def parse_document(text: str, source: str = "<input>"):
    """Parse an input document into a ``TrigPoly``, ``SampledSignal`` or ``QPSum``."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if 0 < exc.lineno <= len(text.splitlines()) else ""
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line}") from None
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ParseError(f"{source}: top level must be an object with a 'kind' field")
    kind = doc["kind"]
    if kind not in _SCHEMAS:
        raise ParseError(f"{source}: unknown kind {json.dumps(kind)} (expected one of {', '.join(_SCHEMAS)})")
    _fields(doc, _SCHEMAS[kind], _SCHEMAS[kind], source)

    if kind == "trigpoly":
        items = doc["harmonics"]
        if not isinstance(items, list):
            raise ParseError(f"{source}: harmonics must be a list")
        harmonics = []
        for i, item in enumerate(items):
            where = f"{source}: harmonics[{i}]"
            _fields(item, {"k", "a", "b"}, {"k", "a"}, where)
            k = item["k"]
            if isinstance(k, bool) or not isinstance(k, int) or k < 0:
                raise ParseError(f"{where}.k: expected a non-negative integer, got {json.dumps(k)}")
            if k > 0 and "b" not in item:
                raise ParseError(f"{where}: missing field(s) b")
            try:
                harmonics.append(Harmonic(k, _number(item["a"], f"{where}.a"), _number(item.get("b", 0.0), f"{where}.b")))
            except ValueError as exc:
                raise ParseError(f"{where}: {exc}") from None
        try:
            p = TrigPoly(harmonics)
        except ValueError as exc:
            raise ParseError(f"{source}: {exc}") from None
        if p.is_zero():
            raise ZeroFunction(f"{source}: every coefficient is zero")
        return p

    if kind == "samples":
        values = doc["values"]
        if not isinstance(values, list):
            raise ParseError(f"{source}: values must be a list")
        vals = tuple(_number(v, f"{source}: values[{i}]") for i, v in enumerate(values))
        if len(vals) < 2:
            raise ParseError(f"{source}: need at least 2 samples, got {len(vals)}")
        if not any(vals):
            raise ZeroFunction(f"{source}: every sample is zero")
        return SampledSignal(vals)

    items = doc["terms"]
    if not isinstance(items, list):
        raise ParseError(f"{source}: terms must be a list")
    terms = []
    for i, item in enumerate(items):
        where = f"{source}: terms[{i}]"
        _fields(item, {"lambda", "a", "b"}, {"lambda", "a", "b"}, where)
        try:
            terms.append(QPTerm(*(_number(item[key], f"{where}.{key}") for key in ("lambda", "a", "b"))))
        except ValueError as exc:
            raise ParseError(f"{where}: {exc}") from None
    try:
        return QPSum(terms)
    except ValueError as exc:
        raise ParseError(f"{source}: {exc}") from None


def load_input(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from None
    return parse_document(text, path)


def load_trigpoly(path: str) -> tuple[TrigPoly, dict]:
    obj = load_input(path)
    if isinstance(obj, TrigPoly):
        return obj, {"path": path, "kind": "trigpoly", "harmonics": len(obj), "degree": obj.degree}
    if isinstance(obj, SampledSignal):
        p = analyze(obj)
        if p.is_zero():
            raise ZeroFunction(f"{path}: samples analyse to the zero function")
        return p, {"path": path, "kind": "samples", "samples": obj.size, "degree": p.degree}
    raise ParseError(f"{path}: expected a trigpoly or samples document, got qpsum")


# -- output ------------------------------------------------------------------


def _floats(values) -> list[float]:
    return [float(v) for v in values]


def certificate_dict(cert: ZeroCertificate) -> dict:
    lh = cert.leading
    return {
        "n": cert.n,
        "ell": cert.ell,
        "leading": None if lh is None else {"n": lh.n, "a_n": lh.a_n, "b_n": lh.b_n, "rho": lh.rho, "phi": lh.phi},
        "dominance": None if cert.dominance is None else cert.dominance.as_dict(),
        "zeros": _floats(cert.zeros),
        "residuals": _floats(cert.residuals),
        "residual_tol": cert.residual_tol,
        "dropped_orders": list(cert.dropped),
        "note": cert.note,
    }


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump_json(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False) + "\n"


def _config(args) -> CertifyConfig:
    return CertifyConfig(mode=args.mode, ell_cap=args.ell_cap, xtol=args.xtol, rtol=args.rtol)


def build_report(p: TrigPoly, descriptor: dict, args) -> tuple[dict, ZeroCertificate]:
    t0 = time.perf_counter()
    cert = certify(p, _config(args))
    t1 = time.perf_counter()
    samples = args.samples or oracle.default_samples(p)
    found = oracle.locate_zeros(p, samples)
    t2 = time.perf_counter()
    passed = cert.passed and len(set(cert.zeros)) >= 2 * cert.n
    report = {
        "input": descriptor,
        "mode": args.mode,
        "n": cert.n,
        "ell": cert.ell,
        "guarantee": 2 * cert.n,
        "certificate": certificate_dict(cert),
        "oracle": {"samples": samples, "count": int(found.size), "zeros": _floats(found)},
        "pass": passed,
        "status": "trivial" if cert.trivial else ("pass" if passed else "fail"),
    }
    if not args.no_timing:
        report["timing"] = {"certify_s": t1 - t0, "oracle_s": t2 - t1}
    return report, cert


def render_text(report: dict) -> str:
    cert = report["certificate"]
    lines = [f"input: {report['input']['path']} ({report['input']['kind']}, degree {report['input']['degree']})"]
    if report["status"] == "trivial":
        lines.append(f"trivial: {cert['note']}")
    else:
        lead = cert["leading"]
        dom = cert["dominance"]
        lines += [
            f"leading order n = {lead['n']}  rho = {lead['rho']:.6g}  phi = {lead['phi']:.6g}",
            f"smoothing order ell = {report['ell']} ({report['mode']} mode)",
            f"dominance (scaled by n^ell): gap {dom['d_ell_scaled']:.6g} < threshold {dom['threshold_scaled']:.6g}"
            f"  [tail bound {dom['paper_bound_scaled']:.6g}, M = {dom['M_used']:.6g}]",
            f"certified zeros ({len(cert['zeros'])}, need {report['guarantee']}):",
        ]
        lines += [f"  {z:.15f}   |p| = {r:.2e}" for z, r in zip(cert["zeros"], cert["residuals"])]
    lines.append(f"oracle sign changes: {report['oracle']['count']} ({report['oracle']['samples']} samples)")
    lines.append(f"result: {report['status'].upper()}")
    if "timing" in report:
        lines.append("time: certify {certify_s:.3f}s, oracle {oracle_s:.3f}s".format(**report["timing"]))
    return "\n".join(lines) + "\n"


# -- commands ----------------------------------------------------------------


def cmd_certify(args) -> int:
    p, descriptor = load_trigpoly(args.input)
    report, cert = build_report(p, descriptor, args)
    _emit(_dump_json(report) if args.format == "json" else render_text(report), args.out)
    if cert.trivial:
        return EXIT_PRECONDITION
    return EXIT_PASS if report["pass"] else EXIT_TOLERANCE


def cmd_oracle(args) -> int:
    p, descriptor = load_trigpoly(args.input)
    samples = args.samples or oracle.default_samples(p)
    zeros = oracle.locate_zeros(p, samples, args.xtol)
    count = oracle.count_sign_changes(p, samples)
    report = {"input": descriptor, "samples": samples, "count": count, "zeros": _floats(zeros)}
    if args.format == "json":
        text = _dump_json(report)
    else:
        text = f"sign changes: {count} ({samples} samples)\n" + "".join(f"  {z:.15f}\n" for z in zeros)
    _emit(text, args.out)
    return EXIT_PASS


def cmd_qp(args) -> int:
    obj = load_input(args.input)
    if isinstance(obj, TrigPoly):
        try:
            obj = QPSum.from_trigpoly(obj)
        except ValueError as exc:
            raise ParseError(f"{args.input}: {exc}") from None
    elif not isinstance(obj, QPSum):
        raise ParseError(f"{args.input}: expected a qpsum or trigpoly document")
    if not args.window > 0:
        raise ParseError("--window must be positive")
    report = density_report(obj, args.window, args.samples)
    report = {"input": {"path": args.input, "kind": "qpsum", "terms": len(obj.terms)}, **report}
    if args.format == "json":
        text = _dump_json(report)
    else:
        text = (
            f"window [0, {report['window']:g}] with {report['samples']} samples\n"
            f"sign changes: {report['sign_changes']}\n"
            f"density: {report['density']:.10g} zeros per unit length\n"
            f"lambda_1/pi for comparison: {report['reference_lambda1_over_pi']:.10g}\n"
        )
    _emit(text, args.out)
    return EXIT_PASS


def _g17(v: float) -> str:
    return format(float(v), ".17g")


def cmd_plotdata(args) -> int:
    if args.grid < 1:
        raise ParseError("--grid must be a positive integer")
    p, _ = load_trigpoly(args.input)
    cert = certify(p, _config(args))
    if cert.trivial:
        print(f"error: {cert.note}", file=sys.stderr)
        return EXIT_PRECONDITION
    lh, ell = cert.leading, cert.ell
    p_eff = p.truncate_below(lh.n)
    g = lh.as_poly()
    if args.scaled:
        g_s, f_s = rescaled_antiderivative(g, ell, lh.n), rescaled_antiderivative(p_eff, ell, lh.n)
        names = ("g_ell_scaled", "f_ell_scaled")
    else:
        g_s, f_s = antiderivative_iter(g, ell), antiderivative_iter(p_eff, ell)
        names = ("g_ell", "f_ell")
    x = TWO_PI * np.arange(args.grid) / args.grid
    cols = [x, evaluate(p, x), evaluate(g_s, x), evaluate(f_s, x)]
    rows = ["x,f,{},{}".format(*names)]
    rows += [",".join(_g17(c[i]) for c in cols) for i in range(args.grid)]
    _emit("\n".join(rows) + "\n", args.out)
    zeros_path = args.zeros or (str(Path(args.out).with_suffix(".zeros.csv")) if args.out else None)
    if zeros_path:
        zrows = ["zero,residual"] + [f"{_g17(z)},{_g17(r)}" for z, r in zip(cert.zeros, cert.residuals)]
        Path(zeros_path).write_text("\n".join(zrows) + "\n")
    return EXIT_PASS


# -- entry point -------------------------------------------------------------


def _add_certify_flags(sp):
    sp.add_argument("--mode", choices=("paper", "tight"), default="paper")
    sp.add_argument("--ell-cap", type=int, default=256)
    sp.add_argument("--xtol", type=float, default=1e-10)
    sp.add_argument("--rtol", type=float, default=1e-8)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sturm-hurwitz", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("certify", help="certify and locate at least 2n zeros")
    sp.add_argument("input")
    _add_certify_flags(sp)
    sp.add_argument("--samples", type=int, default=None, help="oracle scan resolution")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--out", default=None)
    sp.add_argument("--no-timing", action="store_true", help="omit the timing field")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("oracle", help="brute-force sign-change scan")
    sp.add_argument("input")
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--xtol", type=float, default=1e-12)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("qp", help="zero density of a quasi-periodic sum")
    sp.add_argument("input")
    sp.add_argument("--window", type=float, required=True)
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_qp)

    sp = sub.add_parser("plotdata", help="sample f, g^(-ell), f^(-ell) on a grid")
    sp.add_argument("input")
    _add_certify_flags(sp)
    sp.add_argument("--grid", type=int, default=512)
    sp.add_argument("--scaled", action="store_true", help="multiply the smoothed columns by n^ell")
    sp.add_argument("--out", default=None)
    sp.add_argument("--zeros", default=None, help="zeros file (default: next to --out)")
    sp.set_defaults(func=cmd_plotdata)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    samples = getattr(args, "samples", None)
    if samples is not None and samples < oracle.MIN_SAMPLES:
        parser.error(f"--samples must be at least {oracle.MIN_SAMPLES}")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except DominanceUnreachable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMINANCE
    except CrossingDegenerate as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except SturmHurwitzError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
