"""Timing comparison of the compiled and pure-Python kernel backends.

Runs the three dense kernels on the shapes the solver actually uses
(small hermitian eigenproblems, the stacked steady-state least squares,
singular values of the generator) plus one full scan point per backend.

Usage: python3 benchmarks/bench_backends.py [--repeat N]
"""

import argparse
import importlib
import os
import subprocess
import sys
import time

import numpy as np

RCOND = 1e-12


def _hermitian(rng, n):
    raw = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (raw + raw.conj().T)


def _least_squares_system(rng, m, n):
    a = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
    b = rng.normal(size=m) + 1j * rng.normal(size=m)
    return a, b


def _time(repeat, fn, *args):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernels(repeat):
    """Per-kernel timings for both backends on solver-sized inputs."""
    backends = {}
    pure = importlib.import_module("spinprobe.kernels._pure")
    backends["pure"] = pure
    try:
        native = importlib.import_module("spinprobe.kernels._native")
    except ImportError:
        native = None
    if native is not None:
        backends["native"] = native

    rng = np.random.default_rng(7)
    cases = []
    for n in (6, 8):
        cases.append(("eigh %dx%d" % (n, n), "eigh", (_hermitian(rng, n),)))
    a, b = _least_squares_system(rng, 65, 64)
    cases.append(("lstsq 65x64", "lstsq", (a, b, RCOND)))
    cases.append(("svdvals 64x64",
                  "svdvals",
                  (rng.normal(size=(64, 64)) + 1j * rng.normal(size=(64, 64)),)))

    print("kernel timings (best of %d, seconds)" % repeat)
    header = "%-16s" % "case" + "".join("%12s" % name for name in backends)
    print(header)
    for label, attr, args in cases:
        row = "%-16s" % label
        timings = {}
        for name, module in backends.items():
            timings[name] = _time(repeat, getattr(module, attr), *args)
            row += "%12.3e" % timings[name]
        if len(timings) == 2:
            row += "    x%.1f" % (timings["pure"] / timings["native"])
        print(row)
    if native is None:
        print("(compiled backend unavailable; showing pure only)")


_SCAN_SNIPPET = """\
import time
from spinprobe import scanner
from spinprobe.kernels import BACKEND
cfg = scanner.config_for("fig3a", grid=(7.2, 7.3, 3))
scanner.scan(cfg)  # warm up
start = time.perf_counter()
rows = scanner.scan(cfg)
assert all(r.ok for r in rows)
print("%s %.4f" % (BACKEND, (time.perf_counter() - start) / len(rows)))
"""


def bench_scan_point():
    """Wall time per full scan point (build, decompose, solve, currents)."""
    print()
    print("full scan point, eight-level machine (seconds per point)")
    for backend in ("native", "pure"):
        env = dict(os.environ, SPINPROBE_KERNELS=backend)
        proc = subprocess.run([sys.executable, "-c", _SCAN_SNIPPET],
                              env=env, capture_output=True, text=True)
        if proc.returncode != 0:
            detail = proc.stderr.strip().splitlines()
            print("  %-8s unavailable (%s)" % (backend, detail[-1] if detail else "?"))
            continue
        name, seconds = proc.stdout.split()
        print("  %-8s %s" % (name, seconds))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=200,
                        help="repetitions per kernel case (default 200)")
    args = parser.parse_args()
    bench_kernels(args.repeat)
    bench_scan_point()


if __name__ == "__main__":
    main()
