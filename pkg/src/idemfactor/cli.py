"""Command-line front end: factor, verify, batch, ring-info."""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from . import kernels
from .certify import Certificate, dumps, loads, to_json, verify_report
from .errors import BudgetExhausted, CertificateInvalid, IdemFactorError, ParseError, PipelineInvariantViolated, RingError
from .pipeline import BOUND_R, BOUND_S, PipelineOptions, apply_overrides, factor_singular_row, options_from_env
from .quadring import format_elem, from_basis_coords, fundamental_unit, make_ring, parse_elem

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3
CSV_COLUMNS = ["alpha", "x", "y", "r", "s", "n0_max", "flags", "verdict", "micros"]


@dataclass(frozen=True)
class RunReport:
    certificate: Certificate | None
    r: int
    s: int
    flags: frozenset
    wall_time: float
    annotations: tuple = ()
    bounds: tuple = (BOUND_R, BOUND_S)
    error: str = ""

    @property
    def verdict(self) -> str:
        if self.certificate is None:
            return "budget-exhausted" if self.error else "failed"
        ok = self.r <= self.bounds[0] and self.s <= self.bounds[1] and not self.flags
        return "conforming" if ok else "nonconforming"

    @property
    def n0_max(self) -> int:
        vals = self.certificate.n0_values if self.certificate else ()
        return max(vals, default=0)

    def as_dict(self) -> dict:
        return {
            "counts": {"r": self.r, "s": self.s},
            "bounds": {"r": self.bounds[0], "s": self.bounds[1]},
            "verdict": self.verdict,
            "flags": sorted(self.flags),
            "n0_max": self.n0_max,
            "wall_time_s": round(self.wall_time, 6),
            "annotations": list(self.annotations),
            **({"error": self.error} if self.error else {}),
        }


def run_factor(x, y, options: PipelineOptions) -> RunReport:
    t0 = time.perf_counter()
    try:
        cert = factor_singular_row(x, y, options)
    except BudgetExhausted as exc:
        return RunReport(None, 0, 0, frozenset({"BudgetHit"}), time.perf_counter() - t0, error=str(exc))
    dt = time.perf_counter() - t0
    return RunReport(cert, cert.r, cert.s, cert.flags, dt, cert.annotations)


def _options(args) -> PipelineOptions:
    opts = options_from_env()
    opts = apply_overrides(opts, args.budget or [])
    if getattr(args, "integerize_first", False):
        opts = replace(opts, early_reduction=False)
    if getattr(args, "swap_mode", None):
        opts = replace(opts, swap_mode=args.swap_mode)
    return opts


def cmd_factor(args, out=None) -> int:
    out = out or sys.stdout
    ring = make_ring(args.alpha)
    x, y = parse_elem(ring, args.x), parse_elem(ring, args.y)
    opts = _options(args)
    report = run_factor(x, y, opts)
    if report.certificate is None:
        print(json.dumps({"report": report.as_dict()}, indent=2), file=out)
        return EXIT_BUDGET
    rep = verify_report(report.certificate)
    if not rep:
        print(f"error: certificate failed verification: {rep.reason}", file=sys.stderr)
        return EXIT_VERIFY
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(dumps(report.certificate) + "\n")
        print(json.dumps({"report": report.as_dict(), "certificate_file": args.out}, indent=2), file=out)
    else:
        print(json.dumps({"report": report.as_dict(), "certificate": to_json(report.certificate)}, indent=2), file=out)
    return EXIT_OK


def cmd_verify(args, out=None) -> int:
    out = out or sys.stdout
    try:
        with open(args.cert, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {args.cert}: {exc}") from exc
    cert = loads(text)
    rep = verify_report(cert)
    if rep:
        print(f"OK: r={cert.r} s={cert.s}", file=out)
        return EXIT_OK
    where = f" (factor index {rep.index})" if rep.index is not None else ""
    print(f"FAIL: {rep.reason}{where}", file=out)
    return EXIT_VERIFY


def sample_pair(alpha: int, height: int, seed: int, index: int):
    """Deterministic per-sample draw; basis coordinates uniform in [-height, height]."""
    rng = random.Random(f"{seed}:{index}")
    ring = make_ring(alpha)
    c = [rng.randint(-height, height) for _ in range(4)]
    return from_basis_coords(ring, c[0], c[1]), from_basis_coords(ring, c[2], c[3])


def _batch_one(job):
    alpha, height, seed, index, opts = job
    x, y = sample_pair(alpha, height, seed, index)
    try:
        report = run_factor(x, y, opts)
        ok = report.certificate is None or bool(verify_report(report.certificate))
    except (PipelineInvariantViolated, CertificateInvalid) as exc:
        return index, format_elem(x), format_elem(y), None, str(exc)
    row = (report.r, report.s, report.n0_max, "|".join(sorted(report.flags)),
           report.verdict if ok else "failed", round(report.wall_time * 1e6))
    return index, format_elem(x), format_elem(y), row, "" if ok else "verification failed"


def cmd_batch(args, out=None) -> int:
    out = out or sys.stdout
    if args.samples < 1 or args.height < 1:
        raise ParseError("--samples and --height must be at least 1")
    make_ring(args.alpha)
    opts = _options(args)
    jobs = [(args.alpha, args.height, args.seed, i, opts) for i in range(args.samples)]
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_batch_one, jobs, chunksize=8))
    else:
        results = [_batch_one(j) for j in jobs]
    results.sort(key=lambda t: t[0])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    verdicts, flag_counts = Counter(), Counter()
    max_r = max_s = 0
    failures = 0
    flag_free = conforming_free = 0
    for _, xs, ys, row, err in results:
        if row is None:
            failures += 1
            verdicts["failed"] += 1
            w.writerow([args.alpha, xs, ys, "", "", "", "", "failed", ""])
            continue
        r, s, n0, flags, verdict, micros = row
        if verdict == "failed":
            failures += 1
        verdicts[verdict] += 1
        for f in filter(None, flags.split("|")):
            flag_counts[f] += 1
        if verdict != "budget-exhausted":
            max_r, max_s = max(max_r, r), max(max_s, s)
            if not flags:
                flag_free += 1
                conforming_free += r <= BOUND_R and s <= BOUND_S
        w.writerow([args.alpha, xs, ys, r, s, n0, flags, verdict, micros if args.timing else ""])
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    summary = {
        "alpha": args.alpha,
        "samples": args.samples,
        "verified": args.samples - failures,
        "max_r": max_r,
        "max_s": max_s,
        "flag_free": flag_free,
        "flag_free_within_bounds": conforming_free,
        "conformance_rate": round(verdicts["conforming"] / args.samples, 6),
        "verdicts": dict(sorted(verdicts.items())),
        "flags": dict(sorted(flag_counts.items())),
    }
    print(json.dumps(summary, indent=2), file=out)
    return EXIT_VERIFY if failures else EXIT_OK


def cmd_ring_info(args, out=None) -> int:
    out = out or sys.stdout
    ring = make_ring(args.alpha)
    eps = fundamental_unit(ring)
    info = {
        "alpha": ring.alpha,
        "branch": list(ring.branch),
        "omega": ring.omega,
        "discriminant": ring.discriminant,
        "fundamental_unit": format_elem(eps),
        "fundamental_unit_norm": eps.norm(),
        "kernel_backend": kernels.BACKEND,
    }
    print(json.dumps(info, indent=2), file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="idemfactor", description="Idempotent factorization certificates for singular rows over real quadratic integers.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_budget(sp):
        sp.add_argument("--budget", action="append", metavar="KEY=VALUE",
                        help="override a search budget (repeatable); see PipelineOptions")
        sp.add_argument("--integerize-first", action="store_true",
                        help="integerize before the unit/principal/strip tests")
        sp.add_argument("--swap-mode", choices=["idempotent", "column"])

    f = sub.add_parser("factor", help="factor [x y] and emit a certificate")
    f.add_argument("--alpha", type=int, required=True)
    f.add_argument("--x", required=True, help="element, e.g. 1+2*w or (1,2)")
    f.add_argument("--y", required=True)
    f.add_argument("--out", help="write the certificate JSON here")
    add_budget(f)
    f.set_defaults(func=cmd_factor)

    v = sub.add_parser("verify", help="check a certificate file")
    v.add_argument("--cert", required=True)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("batch", help="factor random samples and summarize")
    b.add_argument("--alpha", type=int, required=True)
    b.add_argument("--samples", type=int, default=100)
    b.add_argument("--height", type=int, default=10)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--csv")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--timing", action="store_true", help="fill the micros column (breaks byte-identical CSVs)")
    add_budget(b)
    b.set_defaults(func=cmd_batch)

    r = sub.add_parser("ring-info", help="describe the ring of integers")
    r.add_argument("--alpha", type=int, required=True)
    r.set_defaults(func=cmd_ring_info)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ParseError, RingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExhausted as exc:
        print(f"error: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (PipelineInvariantViolated, CertificateInvalid) as exc:
        print(f"error: internal verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except IdemFactorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
