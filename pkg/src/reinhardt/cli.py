"""Command-line front end.

Exit codes: 0 ok / finite / bounded, 1 input error, 2 rejected form,
3 infinite monomial family, 4 contained complex line, 5 inconclusive probe
or failed verification.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

from . import __version__
from .descriptors import DescriptorError, load_json_arg, parse_domain, parse_map, parse_normal_form
from .domain import rasterize_shadow
from .monomial import line_containment_probe, search_aut_alg
from .normal_forms import NormalForm, RejectReason, classify, finite_nonsmooth_case
from .smoothness import smoothness_class_case_i, smoothness_witness

SCHEMA_VERSION = "1.0"

EXIT_OK, EXIT_INPUT, EXIT_REJECTED, EXIT_INFINITE, EXIT_LINE, EXIT_UNSETTLED = 0, 1, 2, 3, 4, 5


class InputError(Exception):
    pass


def _clean(obj):
    """JSON-safe copy: non-finite floats become strings."""
    if isinstance(obj, float):
        if math.isfinite(obj):
            return obj
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return _clean(obj.item())
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, allow_nan=False) + "\n"


def write_atomic(path: str, text: str):
    """Write via a temp file in the target directory and rename into place."""
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    except OSError as exc:
        raise InputError(f"cannot write {path!r}: {exc.strerror}") from None
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise InputError(f"cannot write {path!r}: {exc.strerror}") from None


def _k_arg(text):
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"k must be a positive integer or 'inf', got {text!r}")
    if k < 1:
        raise argparse.ArgumentTypeError("k must be >= 1")
    return k


def _R_arg(text):
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


def _report(args, command, body):
    return {"schema_version": SCHEMA_VERSION, "command": command, "seed": args.seed, **body}


# --- commands -----------------------------------------------------------------


def cmd_classify(args):
    if args.descriptor is not None:
        nf = parse_normal_form(load_json_arg(args.descriptor))
    else:
        if args.form is None:
            raise InputError("give --form (with its parameters) or --descriptor")
        try:
            nf = NormalForm(args.form, args.alpha, args.beta, args.r,
                            args.R if args.R is not None else (math.inf if args.form in (12, 14) else 1.0))
        except ValueError as exc:
            raise InputError(str(exc)) from None
    res = classify(nf, args.k, n_oracle=args.oracle_samples, margin=args.tol or 1e-9,
                   seed=args.seed)
    body = {"input": nf.to_json(), "k": "inf" if math.isinf(args.k) else args.k, **res.to_json()}
    if not math.isinf(args.k):
        body["finite_nonsmooth_case"] = finite_nonsmooth_case(nf, args.k)
    report = _report(args, "classify", body)
    if res.rejected:
        if res.case.reason is RejectReason.BIDISC_EXCLUDED:
            report["error"] = "alpha = 0 describes the bidisc, which is excluded"
            return report, EXIT_INPUT, res.case.label
        return report, EXIT_REJECTED, res.case.label
    return report, EXIT_OK, res.case.label


def cmd_search_aut(args):
    d = parse_domain(load_json_arg(args.domain))
    if args.bound < 1:
        raise InputError("--bound must be >= 1")
    if args.scale_steps < 2 or not args.scale_box > 0 or args.samples < 16:
        raise InputError("need --scale-steps >= 2, --scale-box > 0 and --samples >= 16")
    rep = search_aut_alg(d, entry_bound=args.bound, scale_box=args.scale_box,
                         scale_steps=args.scale_steps, tol=args.tol or 1e-3,
                         n_samples=args.samples, seed=args.seed)
    report = _report(args, "search-aut", {"domain": d.to_json(), **rep.to_json()})
    summary = f"{len(rep.classes)} torus classes, infinite_mod_torus={rep.infinite_mod_torus}"
    return report, (EXIT_INFINITE if rep.infinite_mod_torus else EXIT_OK), summary


def cmd_probe_line(args):
    d = parse_domain(load_json_arg(args.domain))
    f = parse_map(load_json_arg(args.map))
    try:
        cert = line_containment_probe(d, f, args.axis, args.level, args.radius, args.K,
                                      escape=args.escape, inverse=args.inverse)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = _report(args, "probe-line", {"domain": d.to_json(), "map": f.to_json(),
                                          "seed_disc": {"axis": args.axis, "level": args.level,
                                                        "radius": args.radius},
                                          "certificate": cert.to_json()})
    code = {"contains_line": EXIT_LINE, "bounded": EXIT_OK}.get(cert.verdict, EXIT_UNSETTLED)
    return report, code, cert.verdict


def cmd_smoothness(args):
    try:
        cls = smoothness_class_case_i(args.alpha)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    body = {"alpha": args.alpha, **cls.to_json()}
    code = EXIT_OK
    if args.witness:
        if args.alpha < 0:
            body["witness"] = None
            body["witness_note"] = "no witness for alpha < 0"
        else:
            j = args.j if args.j is not None else (cls.j if cls.kind == "Ck" else 1)
            try:
                w = smoothness_witness(args.alpha, j, h_min=args.h_min)
            except ValueError as exc:
                raise InputError(str(exc)) from None
            body["witness"] = w.to_json()
            if cls.kind == "Ck" and not w.confirmed:
                code = EXIT_UNSETTLED
    return _report(args, "smoothness", body), code, cls.label


def cmd_shadow(args):
    d = parse_domain(load_json_arg(args.domain))
    a, b, c, e = args.bounds
    try:
        res = args.resolution[0] if len(args.resolution) == 1 else tuple(args.resolution)
        grid = rasterize_shadow(d, ((a, b), (c, e)), res)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    csv_text = grid.to_csv()
    report = _report(args, "shadow", {"domain": d.to_json(), "bounds": [[a, b], [c, e]],
                                      "resolution": list(grid.resolution),
                                      "rows": int(grid.values.size)})
    return report, EXIT_OK, csv_text


def cmd_example(args):
    from .gallery import (example1_domain, example1_generator, example1_verify,
                          example2_verify, profile_from_spec)

    if args.which == 1:
        if args.verify:
            body = example1_verify(n=args.samples or 10_000, seed=args.seed)
        else:
            body = {"example": 1, "domain": example1_domain().to_json(),
                    "generator": example1_generator().to_json()}
    else:
        try:
            prof = profile_from_spec(args.profile)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        if args.verify:
            body = example2_verify(prof, n=args.samples or 1000, seed=args.seed)
        else:
            body = {"example": 2, "profile": prof.name}
    ok = body.get("verified", True)
    return _report(args, "example", body), (EXIT_OK if ok else EXIT_UNSETTLED), \
        f"verified={ok}" if args.verify else "fixture"


# --- parser -------------------------------------------------------------------


def _globals(parser, suppress):
    kw = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument("--seed", type=int, help="sampling seed (default 0)", **kw)
    parser.add_argument("--tol", type=float, help="tolerance override", **kw)
    parser.add_argument("--out", help="write the report (CSV for shadow) to this path", **kw)
    parser.add_argument("--json", action="store_true", help="print the JSON report", **kw)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reinhardt", allow_abbrev=False,
                                description="Reinhardt domains in C^2: classification, "
                                            "monomial automorphisms, probes.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _globals(p, True)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_, allow_abbrev=False)
        _globals(sp, True)
        sp.set_defaults(func=func)
        return sp

    c = add("classify", cmd_classify, "classify a normalized form")
    c.add_argument("--form", type=int, choices=(11, 12, 13, 14, 15))
    c.add_argument("--alpha", type=float)
    c.add_argument("--beta", type=float)
    c.add_argument("--r", type=float)
    c.add_argument("--R", type=_R_arg)
    c.add_argument("--k", type=_k_arg, default=math.inf)
    c.add_argument("--descriptor", help="normal form JSON (inline or @file)")
    c.add_argument("--oracle-samples", type=int, default=1000)

    s = add("search-aut", cmd_search_aut, "search monomial automorphisms")
    s.add_argument("--domain", required=True, help="domain JSON (inline or @file)")
    s.add_argument("--bound", type=int, default=3)
    s.add_argument("--scale-box", type=float, default=4.0)
    s.add_argument("--scale-steps", type=int, default=33)
    s.add_argument("--samples", type=int, default=10_000)

    pl = add("probe-line", cmd_probe_line, "iterate a monomial map on a disc")
    pl.add_argument("--domain", required=True)
    pl.add_argument("--map", required=True, help='map JSON {"A": ..., "logscale": ...}')
    pl.add_argument("--axis", type=int, choices=(1, 2), default=1)
    pl.add_argument("--level", type=float, default=0.0)
    pl.add_argument("--radius", type=float, default=0.5)
    pl.add_argument("--K", type=int, default=40)
    pl.add_argument("--escape", type=float, default=math.exp(20.0))
    pl.add_argument("--inverse", action="store_true")

    sm = add("smoothness", cmd_smoothness, "boundary class of the case-(i) family")
    sm.add_argument("--alpha", type=float, required=True)
    sm.add_argument("--witness", action="store_true")
    sm.add_argument("--j", type=int)
    sm.add_argument("--h-min", type=float, default=1e-8)

    sh = add("shadow", cmd_shadow, "rasterize the log shadow to CSV")
    sh.add_argument("--domain", required=True)
    sh.add_argument("--bounds", type=float, nargs=4, metavar=("U1MIN", "U1MAX", "U2MIN", "U2MAX"),
                    default=(-2.0, 2.0, -2.0, 2.0))
    sh.add_argument("--resolution", type=int, nargs="+", default=[100])

    ex = add("example", cmd_example, "worked examples")
    ex.add_argument("which", type=int, choices=(1, 2))
    ex.add_argument("--verify", action="store_true")
    ex.add_argument("--profile", default="const")
    ex.add_argument("--samples", type=int)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    for name, default in (("seed", 0), ("tol", None), ("out", None), ("json", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    if args.seed < 0:
        print("error: --seed must be nonnegative", file=sys.stderr)
        return EXIT_INPUT
    if args.tol is not None and not args.tol > 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_INPUT
    if args.command == "shadow" and len(args.resolution) > 2:
        print("error: --resolution takes one or two integers", file=sys.stderr)
        return EXIT_INPUT
    try:
        report, code, summary = args.func(args)
        if args.command == "shadow":
            if args.out:
                write_atomic(args.out, summary)
            elif not args.json:
                sys.stdout.write(summary)
            if args.json:
                sys.stdout.write(dumps(report))
            return code
        text = dumps(report)
        if args.out:
            write_atomic(args.out, text)
        if args.json:
            sys.stdout.write(text)
        else:
            print(f"{args.command}: {summary} (exit {code})")
        return code
    except (InputError, DescriptorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
