"""Benchmark the hot kernels: numba-compiled vs pure-NumPy paths.

Run as ``python benchmarks/bench_kernels.py``.  The same comparison can be
forced package-wide by setting CHAINLAB_NUMBA=0.
"""

import time

import numpy as np

from chainlab._accel import HAVE_NUMBA
from chainlab._kernels import (_advance_numpy, _force_numpy, _mix_numpy)

if HAVE_NUMBA:
    from chainlab._kernels import _advance_numba, _mix_dispatch_numba


def time_call(fn, *args, repeat=3):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_advance(n_sites=850, n_steps=100_000, dt=1e-4):
    mu = np.zeros(n_sites)
    gam = np.ones(n_sites + 1)
    minv = np.ones(n_sites)

    def fresh():
        u = np.zeros(n_sites)
        v = np.zeros(n_sites)
        v[n_sites // 2] = 1.0
        f = np.empty(n_sites)
        _force_numpy(u, mu, gam, f)
        return u, v, f

    rows = []
    u, v, f = fresh()
    t_np = time_call(_advance_numpy, u, v, f, minv, mu, gam, dt, n_steps, repeat=1)
    rows.append(("numpy", t_np))
    if HAVE_NUMBA:
        u, v, f = fresh()
        _advance_numba(u, v, f, minv, mu, gam, dt, 10)  # compile
        u, v, f = fresh()
        t_nb = time_call(_advance_numba, u, v, f, minv, mu, gam, dt, n_steps)
        rows.append(("numba", t_nb))
    return f"leapfrog {n_steps} steps x {n_sites} sites", rows


def bench_mix(n_nodes=4000, n_times=3000):
    rng = np.random.default_rng(0)
    coef = rng.normal(size=n_nodes)
    omega = np.sort(rng.uniform(0.0, 2.0, size=n_nodes))
    t = np.linspace(0.0, 400.0, n_times)
    rows = [("numpy", time_call(_mix_numpy, 0, coef, omega, t))]
    if HAVE_NUMBA:
        _mix_dispatch_numba(0, coef, omega, t[:4])  # compile
        rows.append(("numba", time_call(_mix_dispatch_numba, 0, coef, omega, t)))
    return f"oscillatory mix {n_nodes} nodes x {n_times} times", rows


def main():
    if not HAVE_NUMBA:
        print("numba not importable: benchmarking the NumPy path only")
    for label, rows in (bench_advance(), bench_mix()):
        print(label)
        base = rows[0][1]
        for name, t in rows:
            speedup = base / t
            print(f"  {name:6s} {t * 1e3:10.1f} ms   x{speedup:.2f}")


if __name__ == "__main__":
    main()
