"""Command-line front end: ``dillonlab <command> ...``.

Exit codes: 0 for a D-function (or success), 1 for not-D (or a failed
reproduction), 2 for any error.
"""
import argparse
import json
import os
import sys
import time

from . import catalog, gf2n, reproduce, spectra
from ._bits import max_bits
from .dproperty import METHODS, applicable_methods, check_d, dimension_bounds, verify_moment_identities
from .errors import DillonError
from .vbf import degree, is_quadratic, restrict, write_truth_table

EXIT_D, EXIT_NOT_D, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


def _hex(text):
    try:
        return int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a hex number") from None


def _word(text):
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None


def _add_globals(p, defaults):
    sup = {} if defaults else {"default": argparse.SUPPRESS}
    p.add_argument("--output", choices=("text", "json"), **(sup or {"default": "text"}))
    p.add_argument("--threads", type=int, **(sup or {"default": os.cpu_count() or 1}),
                   help="scan parallelism; 1 makes witnesses deterministic")
    p.add_argument("--modulus", type=_hex, **(sup or {"default": None}),
                   help="field modulus in hex, e.g. 0x83")
    p.add_argument("--witnesses", action="store_true", **sup)
    p.add_argument("--full-missing", action="store_true", **sup)


def _emit(args, payload, text):
    if args.output == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _load(args):
    return catalog.build(args.spec, args.modulus)


def _report_text(r):
    lines = [
        f"{r.verdict}  ({r.n}, {r.m})-function  method={r.method}",
        f"covered {r.covered} of {1 << r.m}",
    ]
    if r.missing_total:
        more = "" if len(r.missing) == r.missing_total else f" ... ({r.missing_total} total)"
        lines.append("missing " + " ".join(hex(v) for v in r.missing) + more)
    if r.modulus:
        lines.append(f"modulus {r.modulus}")
    for val, w in sorted(r.witnesses.items()):
        lines.append(f"  {val:#x} = D2_{{{w[0]:#x},{w[1]:#x}}}F({w[2] if len(w) > 2 else 0:#x})")
    if r.runtime_note:
        lines.append(r.runtime_note)
    return "\n".join(lines)


def _check_kwargs(args):
    return {"witnesses": args.witnesses, "full_missing": args.full_missing, "threads": args.threads}


def cmd_dcheck(args):
    f = _load(args)
    r = check_d(f, args.method, **_check_kwargs(args))
    _emit(args, r.to_json(), _report_text(r))
    return EXIT_D if r.is_d else EXIT_NOT_D


def _timed(fn, timings, key):
    t0 = time.perf_counter()
    out = fn()
    timings[key] = round((time.perf_counter() - t0) * 1000.0, 3)
    return out


def analyze(f, spec, methods=None, **kw):
    """Build the analysis/1 document for ``f``."""
    timings, skipped = {}, {}
    quad = _timed(lambda: is_quadratic(f), timings, "quadratic_ms")
    deg = _timed(lambda: degree(f), timings, "degree_ms")
    small = f.n + f.m <= max_bits(24)
    delta = nl = apn = plateau = None
    profile = None
    if 2 * f.n <= max_bits(24):
        delta = _timed(lambda: spectra.differential_uniformity(f), timings, "delta_ms")
        apn = delta == 2
    else:
        skipped["delta_F"] = "2n exceeds the size guard"
    if small and 3 * f.n <= 62:
        nl = _timed(lambda: spectra.nonlinearity(f), timings, "nonlinearity_ms")
        profile = _timed(lambda: spectra.plateaued_profile(f), timings, "plateaued_ms")
        plateau = {
            "is_plateaued": profile.is_plateaued,
            "is_strongly_plateaued": profile.is_strongly_plateaued,
            "amplitude_histogram": profile.amplitude_histogram(),
            "bent_count": profile.bent_set_size,
        }
    else:
        skipped["spectra"] = "n + m exceeds the size guard"
    if methods is None:
        if f.n <= 8:
            methods = applicable_methods(f, quadratic=quad,
                                         plateaued=None if profile is None else profile.is_plateaued)
        else:
            methods = ["auto"]
    reports = []
    for m in methods:
        r = check_d(f, m, **kw)
        timings[f"{r.method}_ms"] = round(r.elapsed_ms, 3)
        reports.append(r)
    verdicts = {r.verdict for r in reports}
    if len(verdicts) != 1:
        dump = {r.method: (r.verdict, [hex(v) for v in r.missing]) for r in reports}
        raise CliError(f"checkers disagree: {json.dumps(dump)}")
    bounds = None
    if f.n > 2:
        b = dimension_bounds(f.n)
        bq = dimension_bounds(f.n, quadratic=True).m_max if quad and f.n > 3 else None
        bounds = {"m_min": b.m_min, "m_max": b.m_max, "m_max_quadratic": bq,
                  "within": b.admits(f.m) and (bq is None or f.m <= bq)}
    docs = []
    for r in reports:
        d = r.to_json()
        del d["elapsed_ms"]
        docs.append(d)
    return {
        "schema": "analysis/1",
        "function": {"spec": spec, "n": f.n, "m": f.m, "modulus": f.provenance.get("modulus")},
        "degree": deg,
        "delta_F": delta,
        "nonlinearity": nl,
        "is_apn": apn,
        "plateaued": plateau,
        "verdict": verdicts.pop(),
        "d_reports": docs,
        "bounds": bounds,
        "skipped": skipped,
        "timings": timings,
    }


def _analysis_text(doc):
    fn = doc["function"]
    lines = [f"{doc['verdict']}  {fn['spec']}  ({fn['n']}, {fn['m']})"]
    if fn["modulus"]:
        lines.append(f"modulus {fn['modulus']}")
    lines.append(f"degree {doc['degree']}  delta_F {doc['delta_F']}  nl {doc['nonlinearity']}  apn {doc['is_apn']}")
    if doc["plateaued"]:
        p = doc["plateaued"]
        lines.append(f"plateaued {p['is_plateaued']}  strongly {p['is_strongly_plateaued']}  "
                     f"bent components {p['bent_count']}  amplitudes {p['amplitude_histogram']}")
    for d in doc["d_reports"]:
        miss = f"  missing {d['missing_total']}: {' '.join(d['missing'])}" if d["missing_total"] else ""
        lines.append(f"  {d['method']:<22}{d['verdict']}{miss}")
    if doc["bounds"]:
        b = doc["bounds"]
        lines.append(f"m-range [{b['m_min']}, {b['m_max']}]"
                     + (f", quadratic <= {b['m_max_quadratic']}" if b["m_max_quadratic"] else "")
                     + f"  m={fn['m']} {'inside' if b['within'] else 'outside'}")
    for k, why in doc["skipped"].items():
        lines.append(f"skipped {k}: {why}")
    return "\n".join(lines)


def cmd_analyze(args):
    f = _load(args)
    methods = args.methods.split(",") if args.methods else None
    if methods:
        bad = [m for m in methods if m not in METHODS]
        if bad:
            raise CliError(f"unknown methods {bad}; choose from {', '.join(METHODS)}")
    doc = analyze(f, args.spec, methods, **_check_kwargs(args))
    _emit(args, doc, _analysis_text(doc))
    return EXIT_D if doc["verdict"] == "D-function" else EXIT_NOT_D


def _csv_out(args, values):
    if args.csv:
        spectra.write_csv(values, args.csv)
    else:
        spectra.write_csv(values, sys.stdout)


def cmd_ddt(args):
    f = _load(args)
    row = spectra.ddt_row(f, args.a)
    total = int(row.counts.sum())
    if args.output == "json":
        _emit(args, {"a": hex(row.a), "counts": [int(c) for c in row.counts], "sum": total}, "")
        return 0
    _csv_out(args, row.counts)
    print(f"# row sum {total}", file=sys.stderr if not args.csv else sys.stdout)
    return 0


def cmd_walsh(args):
    f = _load(args)
    row = spectra.walsh_row(f, args.v)
    if args.output == "json":
        _emit(args, {"v": hex(row.v), "values": [int(w) for w in row.values], "parseval": row.parseval_ok()}, "")
        return 0
    _csv_out(args, row.values)
    return 0


def cmd_restrict(args):
    f = _load(args)
    ctx = catalog._field_of(f)
    basis = gf2n.trace_zero_basis(ctx) if args.alpha is None else gf2n.hyperplane_basis(ctx, args.alpha)
    g = restrict(f, basis)
    write_truth_table(g, args.out)
    _emit(args, {"n": g.n, "m": g.m, "basis": [hex(v) for v in basis.vectors], "path": args.out},
          f"wrote ({g.n}, {g.m})-function to {args.out}")
    return 0


def cmd_moments(args):
    f = _load(args)
    results = verify_moment_identities(f)
    doc = [{"identity": r.name, "status": r.status, "reason": r.reason, "checked": r.checked,
            "first_discrepancy": r.first_discrepancy} for r in results]
    text = "\n".join(f"{r.name:<24}{r.status}" + (f"  ({r.reason})" if r.reason else "")
                     + (f"  first discrepancy {r.first_discrepancy}" if r.first_discrepancy else "")
                     for r in results)
    _emit(args, doc, text)
    return 1 if any(r.status == "unequal" for r in results) else 0


def cmd_reproduce(args):
    if args.name == "all":
        names = [n for n in reproduce.EXPERIMENTS if args.include_slow or n not in reproduce.SLOW]
    elif args.name in reproduce.EXPERIMENTS:
        names = [args.name]
    else:
        print(f"error: unknown experiment {args.name!r}; choose from all, {', '.join(reproduce.EXPERIMENTS)}",
              file=sys.stderr)
        return EXIT_ERROR
    ok = True
    payload = {}
    for name in names:
        claims = reproduce.run(name, threads=args.threads)
        passed = all(c.passed for c in claims)
        ok &= passed
        payload[name] = [vars(c) for c in claims]
        if args.output == "text":
            print(f"== {name}")
            for c in claims:
                print(c.line())
            print(f"{name}: {'PASS' if passed else 'FAIL'}")
    if args.output == "json":
        _emit(args, payload, "")
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="dillonlab", description="D-property and spectral analysis of (n,m)-functions")
    _add_globals(parser, True)
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, False)
    sub = parser.add_subparsers(dest="command", required=True)

    spec_help = 'function spec, e.g. "gold:n=9,i=1,restrict=t0", "x3tr9:n=9", "tt:file", "rand2:n=6,m=8,seed=42"'
    p = sub.add_parser("analyze", parents=[common], help="full report with every applicable checker")
    p.add_argument("spec", help=spec_help)
    p.add_argument("--methods", help="comma-separated subset of " + ", ".join(METHODS))
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("dcheck", parents=[common], help="run one D-property checker")
    p.add_argument("spec", help=spec_help)
    p.add_argument("--method", default="auto", choices=("auto",) + METHODS)
    p.set_defaults(func=cmd_dcheck)

    p = sub.add_parser("ddt", parents=[common], help="dump one DDT row as CSV")
    p.add_argument("spec", help=spec_help)
    p.add_argument("--a", type=_word, required=True, help="input difference")
    p.add_argument("--csv", help="output path (default stdout)")
    p.set_defaults(func=cmd_ddt)

    p = sub.add_parser("walsh", parents=[common], help="dump one Walsh row as CSV")
    p.add_argument("spec", help=spec_help)
    p.add_argument("--v", type=_word, required=True, help="component")
    p.add_argument("--csv", help="output path (default stdout)")
    p.set_defaults(func=cmd_walsh)

    p = sub.add_parser("restrict", parents=[common], help="restrict a field-defined function to a hyperplane")
    p.add_argument("spec", help=spec_help)
    p.add_argument("--alpha", type=_word, help="hyperplane Tr(alpha x) = 0 (default: trace-zero)")
    p.add_argument("--out", required=True, help="truth-table file to write")
    p.set_defaults(func=cmd_restrict)

    p = sub.add_parser("moments", parents=[common], help="check the moment identities exactly")
    p.add_argument("spec", help=spec_help)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("reproduce", parents=[common], help="run a named reproduction experiment")
    p.add_argument("name", help="experiment name or 'all': " + ", ".join(reproduce.EXPERIMENTS))
    p.add_argument("--include-slow", action="store_true", help="with 'all', also run " + ", ".join(reproduce.SLOW))
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (DillonError, CliError, ValueError, OSError) as exc:
        if args.output == "json":
            print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
