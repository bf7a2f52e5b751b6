"""Benchmark the compiled greedy-selection kernel against the pure numpy
fallback, on the raw kernel call and on a full solver trial.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from sscosamp import (
    EpsBompSelector,
    HaltingPolicy,
    RecoveryProblem,
    clustered_block_coeffs,
    gaussian_sensing,
    overcomplete_dft,
    sscosamp,
)
from sscosamp import _kernels_py
from sscosamp.backend import select_blocks

try:
    from sscosamp import _kernels as compiled
except ImportError:
    compiled = None


def time_call(fn, repeats: int) -> float:
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_raw_kernel():
    D = overcomplete_dft(128, 4, block_size=4)
    rng = np.random.default_rng(0)
    z = rng.standard_normal(128) + 1j * rng.standard_normal(128)
    cases = [
        ("bomp k=4 B=4", dict(k=4, B=4, eps=-1.0)),
        ("eps-bomp k=4 B=4", dict(k=4, B=4, eps=float(np.sqrt(0.1)))),
        ("omp k=16 B=1", dict(k=16, B=1, eps=-1.0)),
    ]
    print("raw kernel (128 x 512 complex dictionary, best of 20):")
    for label, kw in cases:
        t_py = time_call(
            lambda: select_blocks(D, z, impl=_kernels_py, **kw), 20
        )
        line = f"  {label:20s} python {t_py * 1e3:7.3f} ms"
        if compiled is not None:
            t_c = time_call(
                lambda: select_blocks(D, z, impl=compiled, **kw), 20
            )
            line += f"   compiled {t_c * 1e3:7.3f} ms   speedup {t_py / t_c:5.2f}x"
        print(line)


def bench_solver_trial():
    d, red, B, k, m = 128, 4, 4, 2, 24
    D = overcomplete_dft(d, red, B)
    rng = np.random.default_rng(1)
    M = gaussian_sensing(m, d, rng)
    co = clustered_block_coeffs(d * red, B, k, 1, rng, "complex")
    y = M.array @ (D.array @ co.values)
    problem = RecoveryProblem(y, M, D, k, B, 2)
    halt = HaltingPolicy()

    print(f"\nfull solver trial (d={d}, n={d * red}, m={m}, best of 10):")
    for label, impl in (("python", _kernels_py), ("compiled", compiled)):
        if impl is None:
            continue
        sel = EpsBompSelector(float(np.sqrt(0.1)))
        import sscosamp.backend as backend_mod

        saved = backend_mod._impl
        backend_mod._impl = impl
        try:
            t = time_call(lambda: sscosamp(problem, sel, sel, halt), 10)
        finally:
            backend_mod._impl = saved
        print(f"  {label:8s} {t * 1e3:8.2f} ms")


if __name__ == "__main__":
    # Two BLAS pools (the kernel's and numpy's) thrash each other on these
    # small per-call problems; pin both to one thread for a fair reading.
    from threadpoolctl import threadpool_limits

    with threadpool_limits(limits=1):
        bench_raw_kernel()
        bench_solver_trial()
