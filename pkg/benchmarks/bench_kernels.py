"""Compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py            # kernel micro-benchmarks
    python benchmarks/bench_kernels.py --pipeline # also a batch run under each backend
"""

import argparse
import os
import random
import subprocess
import sys
import time
import timeit

from idemfactor import _pykernels

try:
    from idemfactor import _ckernels
except ImportError:
    _ckernels = None


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def prime_workload(n_values):
    def run(mr):
        return lambda: sum(mr(n) for n in n_values)
    return run


def scan_workload(cases):
    def run(scan):
        return lambda: [scan(a, t, v) for a, t, v in cases]
    return run


def pipeline_time(pure: bool, samples: int) -> float:
    env = dict(os.environ)
    env.pop("IDEMFACTOR_PURE_PYTHON", None)
    if pure:
        env["IDEMFACTOR_PURE_PYTHON"] = "1"
    cmd = [sys.executable, "-m", "idemfactor", "batch", "--alpha", "94", "--samples", str(samples),
           "--height", "30", "--seed", "0"]
    t0 = time.perf_counter()
    subprocess.run(cmd, env=env, check=True, capture_output=True)
    return time.perf_counter() - t0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--pipeline", action="store_true")
    ap.add_argument("--samples", type=int, default=40)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; only the fallback is available")
        return 1

    rng = random.Random(0)
    odd64 = [rng.getrandbits(63) | 1 for _ in range(20000)]
    scans = [(a, rng.randint(-10**6, 10**6), 20000) for a in (2, 10, 94, 9973)]

    rows = []
    for name, make, fast, slow in (
        ("miller-rabin, 20k odd 63-bit", prime_workload(odd64), _ckernels.miller_rabin_u64, _pykernels.miller_rabin),
        ("norm-form scan, 4 x 20k rows", scan_workload(scans), _ckernels.norm_form_scan, _pykernels.norm_form_scan),
    ):
        assert make(fast)() == make(slow)(), f"{name}: backends disagree"
        tc, tp = bench(make(fast), args.repeat), bench(make(slow), args.repeat)
        rows.append((name, tc, tp))

    if args.pipeline:
        tc, tp = pipeline_time(False, args.samples), pipeline_time(True, args.samples)
        rows.append((f"batch alpha=94, {args.samples} samples", tc, tp))

    print(f"{'workload':36} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    for name, tc, tp in rows:
        print(f"{name:36} {tc:10.4f} {tp:10.4f} {tp / tc:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
