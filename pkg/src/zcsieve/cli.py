"""Command-line front end.

Exit codes: 0 success (or sieve survivors), 10 obstruction established
(sieve empty, local insolubility, pointless conic), 2 usage or input error,
3 precision exhausted. JSON output is canonical and byte-identical across
runs and thread counts; timing is only shown in text mode.
"""

import argparse
import json
import os
import sys
import time

from . import __version__
from .canonical import canonical_dumps, input_hash
from .curves import curve_from_dict, curve_to_dict
from .errors import (
    HypothesisUnmet,
    ParseError,
    PrecisionExhausted,
    ZcsieveError,
)
from .local import everywhere_locally_soluble, local_index
from .period_index import (
    canonical_index_bound,
    conic_has_rational_point,
    index_upper_bound,
    period_report,
    sha_corollary_report,
)
from .sieve import (
    ASSUMPTIONS,
    config_from_json,
    sieve_run,
    verify_certificate_detailed,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECISION = 3
EXIT_OBSTRUCTION = 10


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ParseError("input file not found", path=path)
    except json.JSONDecodeError as exc:
        raise ParseError(
            "malformed JSON", path=path, line=exc.lineno, column=exc.colno
        )


def _load_curve(path):
    return curve_from_dict(_load_json(path))


def _report(command, input_doc, payload, assumptions=None):
    doc = {
        "format": "zcsieve-report/1",
        "tool": {"name": "zcsieve", "version": __version__},
        "command": command,
        "input": input_doc,
        "input_hash": input_hash(input_doc),
        "payload": payload,
    }
    if assumptions:
        doc["assumptions"] = assumptions
    return doc


def _emit(doc, fmt, elapsed, summary_lines):
    if fmt == "json":
        sys.stdout.write(canonical_dumps(doc) + "\n")
    else:
        for line in summary_lines:
            sys.stdout.write(line + "\n")
        sys.stdout.write(f"elapsed: {elapsed:.2f}s\n")


def _threads(args):
    if args.threads is not None:
        return args.threads
    env = os.environ.get("ZCS_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ParseError("ZCS_THREADS must be an integer", value=env)
        if not 1 <= n <= 64:
            raise ParseError("ZCS_THREADS out of range 1..64", value=n)
        return n
    return 1


def cmd_local(args):
    curve_doc = _load_json(args.curve)
    curve = curve_from_dict(curve_doc)
    rep = everywhere_locally_soluble(
        curve, precision=args.precision, check_up_to=args.primes_up_to
    )
    payload = rep.to_json()
    doc = _report("local", curve_doc, payload)
    lines = [f"everywhere locally soluble: {rep.soluble}"]
    for r in rep.reports:
        lines.append(f"  place {r.place}: {'soluble' if r.soluble else 'INSOLUBLE'}")
    return doc, lines, EXIT_OK if rep.soluble else EXIT_OBSTRUCTION


def cmd_sieve(args):
    cfg_doc = _load_json(args.config)
    config = config_from_json(cfg_doc)
    cert = sieve_run(config, threads=_threads(args))
    lines = [
        f"sieve verdict: {cert['verdict']}",
        f"primes: {cert['config']['primes']}",
        f"survivors: {cert['survivors']}",
    ]
    code = EXIT_OK if cert["verdict"] == "survivors" else EXIT_OBSTRUCTION
    return cert, lines, code


def cmd_index(args):
    curve_doc = _load_json(args.curve)
    curve = curve_from_dict(curve_doc)
    rep = index_upper_bound(curve, height=args.height)
    payload = rep.to_json()
    payload["canonical_bound"] = canonical_index_bound(curve.genus)
    doc = _report("index", curve_doc, payload)
    lines = [
        f"index upper bound: {rep.upper_bound}",
        f"structural divisors: {rep.structural_divisors}",
    ]
    return doc, lines, EXIT_OK


def cmd_period(args):
    curve_doc = _load_json(args.curve)
    curve = curve_from_dict(curve_doc)
    local_evidence = everywhere_locally_soluble(curve, precision=args.precision)
    idx = index_upper_bound(curve, height=args.height)
    rel = period_report(curve, local_evidence, idx)
    payload = {
        "relation": rel.to_json(),
        "index_report": idx.to_json(),
        "everywhere_locally_soluble": local_evidence.soluble,
    }
    doc = _report("period", curve_doc, payload)
    lines = [f"[{c.status}] {c.statement}" for c in rel.claims]
    return doc, lines, EXIT_OK


def cmd_conic(args):
    a, b, c = args.coeffs
    result = conic_has_rational_point(a, b, c, height=args.height)
    input_doc = {"type": "conic", "coeffs": [a, b, c]}
    doc = _report("conic", input_doc, result)
    if result["has_point"]:
        lines = [f"rational point: {result['witness']}"]
        code = EXIT_OK
    else:
        lines = [f"no rational point; obstruction at {result['obstructions']}"]
        code = EXIT_OBSTRUCTION
    return doc, lines, code


def cmd_corollary(args):
    curve_doc = _load_json(args.curve)
    curve = curve_from_dict(curve_doc)
    local_evidence = everywhere_locally_soluble(curve, precision=args.precision)
    rep = sha_corollary_report(curve, local_evidence, args.sha_zero)
    doc = _report(
        "corollary",
        {"curve": curve_doc, "sha_zero": sorted(args.sha_zero)},
        rep,
        assumptions={"sha_finiteness": ASSUMPTIONS["sha_finiteness"]},
    )
    lines = [f"status: {rep['status']}"]
    if rep["conclusion"]:
        lines.append(rep["conclusion"])
    else:
        lines.append(f"missing Sha[p] = 0 flags for p in {rep['missing_flags']}")
    return doc, lines, EXIT_OK


def cmd_verify_cert(args):
    cert = _load_json(args.cert)
    ok, location = verify_certificate_detailed(cert)
    payload = {"verified": ok, "mismatch": location}
    doc = _report("verify-cert", {"certificate_hash": input_hash(cert)}, payload)
    lines = [f"verified: {ok}" + (f" (first mismatch at {location})" if not ok else "")]
    return doc, lines, EXIT_OK if ok else EXIT_INPUT


def build_parser():
    parser = argparse.ArgumentParser(
        prog="zcsieve",
        description=(
            "Period/index invariants of curves over Q and a Mordell-Weil "
            "sieve with machine-checkable certificates"
        ),
    )
    parser.add_argument("--version", action="version",
                        version=f"zcsieve {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["json", "text"], default="json")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (or env ZCS_THREADS)")

    p = sub.add_parser("local", help="everywhere-local solubility report")
    p.add_argument("--curve", required=True)
    p.add_argument("--precision", type=int, default=None)
    p.add_argument("--primes-up-to", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("sieve", help="run the Mordell-Weil sieve")
    p.add_argument("--config", required=True)
    common(p)
    p.set_defaults(func=cmd_sieve)

    p = sub.add_parser("index", help="index upper bound report")
    p.add_argument("--curve", required=True)
    p.add_argument("--height", type=int, default=1000)
    common(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("period", help="period/index relation report")
    p.add_argument("--curve", required=True)
    p.add_argument("--height", type=int, default=1000)
    p.add_argument("--precision", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("conic", help="Hasse decision for a conic")
    p.add_argument("--coeffs", type=int, nargs=3, required=True,
                   metavar=("A", "B", "C"))
    p.add_argument("--height", type=int, default=1000)
    common(p)
    p.set_defaults(func=cmd_conic)

    p = sub.add_parser("corollary", help="conditional zero-cycle report")
    p.add_argument("--curve", required=True)
    p.add_argument("--sha-zero", type=int, nargs="*", default=[])
    p.add_argument("--precision", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_corollary)

    p = sub.add_parser("verify-cert", help="re-verify a sieve certificate")
    p.add_argument("--cert", required=True)
    common(p)
    p.set_defaults(func=cmd_verify_cert)
    return parser


def _validate_ranges(args):
    prec = getattr(args, "precision", None)
    if prec is not None and not 1 <= prec <= 60:
        raise ParseError("precision out of range 1..60", precision=prec)
    height = getattr(args, "height", None)
    if height is not None and not 1 <= height <= 10**7:
        raise ParseError("height out of range 1..10^7", height=height)
    if args.threads is not None and not 1 <= args.threads <= 64:
        raise ParseError("threads out of range 1..64", threads=args.threads)
    upto = getattr(args, "primes_up_to", None)
    if upto is not None and not 2 <= upto <= 10**4:
        raise ParseError("primes-up-to out of range 2..10^4", value=upto)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else 0
    start = time.monotonic()
    try:
        _validate_ranges(args)
        doc, lines, code = args.func(args)
    except PrecisionExhausted as exc:
        _emit_error(exc, args.format)
        return EXIT_PRECISION
    except HypothesisUnmet as exc:
        _emit_error(exc, args.format)
        return (
            EXIT_OBSTRUCTION
            if "first_obstruction" in exc.details
            else EXIT_INPUT
        )
    except ZcsieveError as exc:
        _emit_error(exc, args.format)
        return EXIT_INPUT
    except (ValueError, TypeError, OSError) as exc:
        _emit_error(exc, args.format)
        return EXIT_INPUT
    _emit(doc, args.format, time.monotonic() - start, lines)
    return code


def _emit_error(exc, fmt):
    if isinstance(exc, ZcsieveError):
        doc = {"error": exc.to_json()}
    else:
        doc = {"error": {"type": type(exc).__name__, "message": str(exc),
                         "details": {}}}
    if fmt == "text":
        sys.stderr.write(f"error: {doc['error']['type']}: "
                         f"{doc['error']['message']}\n")
    else:
        sys.stdout.write(canonical_dumps(doc) + "\n")


if __name__ == "__main__":
    sys.exit(main())
