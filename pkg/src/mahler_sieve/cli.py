"""mahler-sieve command line.

Exit codes: 0 success, 2 bad arguments, 3 cap/resource error,
4 certification failure. Rationals are printed as "num/den" strings.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import orbit, sieve, tijdeman
from .census import census, predicted_depth, survival_depth
from .refine import DEFAULT_REFINE_CAP, measure, refine
from .config import FORMATS, RunConfig, resolve_cache_dir
from .errors import CertificationError, HorizonExceeded, ResourceError

EXIT_OK = 0
EXIT_ARGS = 2
EXIT_RESOURCE = 3
EXIT_CERT = 4


class _ArgError(Exception):
    pass


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _nonneg(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {v}")
    return v


def _approx(x: Fraction) -> str:
    return f"{float(x):.12g}"


def _emit(cfg, payload, rows, text_lines, out):
    """payload: JSON document; rows: CSV table (list of dicts)."""
    if cfg.fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write("\n".join(text_lines) + "\n")


def cmd_orbit(args, cfg, out):
    prefix = orbit.orbit_prefix(args.x, args.horizon, cap=cfg.orbit_cap)
    diam = orbit.orbit_diameter(args.x, args.horizon, cap=cfg.orbit_cap)
    rows = []
    for fp in prefix:
        row = {"n": fp.depth, "value": str(fp.value), "action": str(fp.kind)}
        if cfg.approx:
            row["approx"] = _approx(fp.value)
        rows.append(row)
    payload = {"x": args.x, "horizon": args.horizon, "rows": rows, "diameter": diam.to_dict()}
    text = [f"n={r['n']:>4}  {r['value']:>24}  {r['action']}" + (f"  ~{r['approx']}" if cfg.approx else "") for r in rows]
    text.append(
        f"inf={diam.inf} sup={diam.sup} diameter={diam.diameter} "
        f"first n with diameter >= 1/3: {diam.first_n_reaching_one_third}"
    )
    _emit(cfg, payload, rows, text, out)
    return EXIT_OK


def _residue_payload(rs, extra=None):
    d = {
        "exponent": rs.exponent,
        "modulus": rs.modulus,
        "representatives": rs.representatives(),
        "count": rs.count(),
        "density": str(Fraction(rs.count(), rs.modulus)),
    }
    d.update(extra or {})
    return d


def cmd_xn(args, cfg, out):
    extra = {}
    if args.read:
        rs = sieve.read_cache(args.read)
        extra["source"] = str(args.read)
    elif args.cache:
        path = sieve.cache_file(cfg.cache_dir, args.n)
        if path.exists():
            rs = sieve.read_cache(path)
            if rs.exponent != args.n:
                raise ValueError(f"{path} holds exponent {rs.exponent}, not {args.n}")
        else:
            rs = sieve.compute_Xn(args.n, cap=cfg.sieve_cap)
            sieve.write_cache(path, rs)
        extra["cache"] = str(path)
    else:
        rs = sieve.compute_Xn(args.n, cap=cfg.sieve_cap)
    rows = [{"representative": r, "modulus": rs.modulus} for r in rs.representatives()]
    text = [rs.describe()] + ([f"cache: {extra['cache']}"] if "cache" in extra else [])
    _emit(cfg, _residue_payload(rs, extra), rows, text, out)
    return EXIT_OK


def cmd_intersect(args, cfg, out):
    rs = sieve.intersect_prefix(args.n, cap=cfg.sieve_cap)
    only_top = rs == sieve.power_class(args.n)
    payload = _residue_payload(rs, {"only_power_class": only_top})
    rows = [{"representative": r, "modulus": rs.modulus} for r in rs.representatives()]
    text = [f"only class 2^{args.n} (mod 2^{args.n})" if only_top else rs.describe()]
    _emit(cfg, payload, rows, text, out)
    return EXIT_OK


def cmd_survival(args, cfg, out):
    xs = [args.x] if args.x is not None else range(1, args.range + 1)
    rows = []
    for x in xs:
        rec = survival_depth(x, args.max_depth, cap=cfg.orbit_cap)
        row = rec.to_dict()
        row["predicted"] = predicted_depth(x)
        if cfg.approx:
            row["approx"] = _approx(rec.violation.value)
        rows.append(row)
    text = [f"x={r['x']}  depth={r['depth']}  violation={r['violation']}  predicted={r['predicted']}" for r in rows]
    _emit(cfg, {"records": rows}, rows, text, out)
    return EXIT_OK


def cmd_census(args, cfg, out):
    rep = census(args.N, args.max_depth, workers=cfg.workers)
    if cfg.fmt == "csv":
        out.write(rep.to_csv())
        return EXIT_OK
    text = [f"N={rep.N}"]
    text += [f"depth {d}: {c}" for d, c in rep.histogram.items()]
    text += [f"survivors through depth {n}: {c}" for n, c in rep.survivors_at.items()]
    _emit(cfg, rep.to_dict(), None, text, out)
    return EXIT_OK


def cmd_tijdeman(args, cfg, out):
    if args.check:
        with open(args.check) as fh:
            run = tijdeman.TijdemanRun.from_dict(json.load(fh))
    else:
        missing = [k for k in ("p", "q", "m", "N") if getattr(args, k) is None]
        if missing:
            raise _ArgError(f"missing --{', --'.join(missing)} (or pass --check FILE)")
        beta = tijdeman.BetaParam(args.p, args.q)
        run = tijdeman.construct(beta, args.m, args.N, args.mode)
    cert = tijdeman.verify_run(run)
    payload = run.to_dict()
    payload["certified"] = True
    payload["max_frac_bound"] = str(cert.max_upper)
    incs = run.increments()
    rows = []
    for n, v in enumerate(run.s):
        lo, hi = cert.frac_bounds[n]
        rows.append({
            "n": n,
            "s": str(v),
            "increment": str(incs[n]) if n < len(incs) else "",
            "frac_lo": str(lo),
            "frac_hi": str(hi),
        })
    lo, hi = cert.enclosure
    text = [
        f"beta={run.beta.p}/{run.beta.q} m={run.m} mode={run.mode} N={run.N} c={run.c}",
        f"s_N={run.s[-1]}",
        f"eta in [{lo}, {hi}]" + (f"  ~{_approx(lo)}" if cfg.approx else ""),
        f"certified: every {{eta*beta^n}} bound within [0, {run.c}] (max {cert.max_upper})",
    ]
    _emit(cfg, payload, rows, text, out)
    return EXIT_OK


def cmd_refine(args, cfg, out):
    s = refine(args.g0, args.N, cap=cfg.refine_cap)
    m = measure(s)
    rows = [{"lo": str(lo), "hi": str(hi)} for lo, hi in s.intervals]
    text = [f"[{lo}, {hi})" for lo, hi in s.intervals] or ["(empty)"]
    text.append(f"{len(s)} interval(s), measure {m}" + (f" ~{_approx(m)}" if cfg.approx else ""))
    _emit(cfg, s.to_dict(), rows, text, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--approx", action="store_true", help="add decimal approximations")
    common.add_argument("--cache-dir", help="overrides $MAHLER_SIEVE_CACHE")
    common.add_argument("--orbit-cap", type=_positive, default=orbit.DEFAULT_DEPTH_CAP)
    common.add_argument("--sieve-cap", type=_positive, default=sieve.DEFAULT_SIEVE_CAP)
    common.add_argument("--refine-cap", type=_positive, default=DEFAULT_REFINE_CAP)
    common.add_argument("--workers", type=_positive, default=1)

    p = argparse.ArgumentParser(prog="mahler-sieve", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("orbit", parents=[common], help="exact {x(3/2)^n} for n = 1..horizon")
    sp.add_argument("--x", type=_positive, required=True)
    sp.add_argument("--horizon", type=_positive, required=True)
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("xn", parents=[common], help="permissible classes mod 2^n")
    sp.add_argument("--n", type=_positive)
    sp.add_argument("--cache", action="store_true", help="read/write the MZXN cache file")
    sp.add_argument("--read", metavar="FILE", help="list an existing MZXN file")
    sp.set_defaults(func=cmd_xn)

    sp = sub.add_parser("intersect", parents=[common], help="classes permissible at every depth 1..n")
    sp.add_argument("--n", type=_positive, required=True)
    sp.set_defaults(func=cmd_intersect)

    sp = sub.add_parser("survival", parents=[common], help="first impermissible depth")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--x", type=_positive)
    g.add_argument("--range", type=_positive, metavar="N", help="every x in 1..N")
    sp.add_argument("--max-depth", type=_positive)
    sp.set_defaults(func=cmd_survival)

    sp = sub.add_parser("census", parents=[common], help="survival-depth histogram over 1..N")
    sp.add_argument("--N", type=_positive, required=True)
    sp.add_argument("--max-depth", type=_positive)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("tijdeman", parents=[common], help="build and certify eta for beta = p/q > 2")
    sp.add_argument("--p", type=_positive)
    sp.add_argument("--q", type=_positive)
    sp.add_argument("--m", type=_positive)
    sp.add_argument("--N", type=_nonneg)
    sp.add_argument("--mode", choices=tijdeman.MODES, default=tijdeman.GENERAL)
    sp.add_argument("--check", metavar="FILE", help="certify a run stored as JSON")
    sp.set_defaults(func=cmd_tijdeman)

    sp = sub.add_parser("refine", parents=[common], help="real survivors in [g0, g0+1) up to depth N")
    sp.add_argument("--g0", type=_nonneg, required=True)
    sp.add_argument("--N", type=_nonneg, required=True)
    sp.set_defaults(func=cmd_refine)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_ARGS
    if args.command == "xn" and (args.n is None) == (args.read is None):
        print("mahler-sieve xn: give exactly one of --n or --read", file=sys.stderr)
        return EXIT_ARGS
    try:
        cfg = RunConfig(
            cache_dir=resolve_cache_dir(args.cache_dir),
            orbit_cap=args.orbit_cap,
            sieve_cap=args.sieve_cap,
            refine_cap=args.refine_cap,
            fmt=args.format,
            workers=args.workers,
            approx=args.approx,
        )
        return args.func(args, cfg, out)
    except (ResourceError, HorizonExceeded) as e:
        print(f"mahler-sieve: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except CertificationError as e:
        print(f"mahler-sieve: {e}", file=sys.stderr)
        return EXIT_CERT
    except (_ArgError, ValueError, OSError, KeyError) as e:
        print(f"mahler-sieve: {e}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())
