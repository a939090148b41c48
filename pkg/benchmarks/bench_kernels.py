"""Time the hot kernels with numba and with the pure-Python fallback.

Each backend runs in its own interpreter because the choice is made at
import time from INVSQRT_NO_NUMBA.

    python benchmarks/bench_kernels.py            # both backends, table
    python benchmarks/bench_kernels.py --worker   # one backend, JSON line
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def worker(repeat):
    from invsqrt import _accel, _ode, _series

    zs = np.linspace(-5.5, 5.5, 400)
    cases = {
        "hermite_many(nu=2.7, 400 pts)": lambda: _series.hermite_many(2.7, zs),
        "kummer_many(-1.3, 0.5, 400 pts)": lambda: _series.kummer_many(-1.3, 0.5, zs),
        "numerov_endpoint(20000 steps)": lambda: _ode.numerov_endpoint(-2.0, -1.1, 0.5, 0.003, 20000),
        "rk4_doubling(z in [0, 4])": lambda: _ode.rk4_doubling(np.linspace(0, 4, 201), 0.0, 1.0, 0.0, -2.0,
                                                               0.0, 2.0 ** 1.5, 0.0, 1e-12, 10 ** 6),
    }
    out = {"backend": _accel.BACKEND, "times": {}}
    for name, fn in cases.items():
        t0 = time.perf_counter()
        fn()  # includes compilation on the first numba call
        out.setdefault("first_call", {})[name] = time.perf_counter() - t0
        out["times"][name] = _best_of(fn, repeat)
    print(json.dumps(out))


def run_backend(no_numba, repeat):
    env = dict(os.environ)
    if no_numba:
        env["INVSQRT_NO_NUMBA"] = "1"
    else:
        env.pop("INVSQRT_NO_NUMBA", None)
    res = subprocess.run([sys.executable, __file__, "--worker", "--repeat", str(repeat)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--worker", action="store_true")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if args.worker:
        worker(args.repeat)
        return
    fast = run_backend(False, args.repeat)
    slow = run_backend(True, args.repeat)
    print(f"{'kernel':36s} {fast['backend']:>12s} {slow['backend']:>12s} {'speedup':>9s}")
    for name, t_fast in fast["times"].items():
        t_slow = slow["times"][name]
        print(f"{name:36s} {t_fast * 1e3:10.2f}ms {t_slow * 1e3:10.2f}ms {t_slow / t_fast:8.1f}x")


if __name__ == "__main__":
    main()
