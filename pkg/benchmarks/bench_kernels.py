"""Compare the compiled kernels against the NumPy fallback.

Times the hot evaluation kernels on small and large plants plus two
end-to-end analyses with the backend swapped in place. Run from the repo
root:

    python benchmarks/bench_kernels.py
"""

import math
import time
import warnings

import numpy as np

import delaymargin as dm
from delaymargin import _kernels
from delaymargin._kernels import _numpy as backend_np

try:
    from delaymargin._kernels import _core as backend_c
except ImportError:
    backend_c = None

KERNEL_NAMES = [
    "logmag",
    "logmag_d1",
    "logmag_d2",
    "argsum",
    "argsum_d1",
    "argsum_d2",
    "rational_eval",
    "charfun",
]


def _swap_backend(impl):
    for name in KERNEL_NAMES:
        setattr(_kernels, name, getattr(impl, name))


def _time(fn, repeats=5):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def plant_arrays(n_roots, rng):
    zs = rng.uniform(0.3, 50.0, n_roots)
    zw = rng.normal(size=n_roots) * 5.0
    ps = rng.uniform(0.3, 50.0, n_roots)
    pw = rng.normal(size=n_roots) * 5.0
    return zs, zw, ps, pw


def bench_kernels():
    rng = np.random.default_rng(0)
    print(f"{'kernel':<14}{'roots':>6}{'grid':>9}{'numpy':>12}{'compiled':>12}{'speedup':>9}")
    for n_roots in (5, 100):
        zs, zw, ps, pw = plant_arrays(n_roots, rng)
        for grid in (64, 4096, 262144):
            w = np.linspace(0.0, 100.0, grid)
            s = (w + 1j * w).astype(complex)
            zc = (zs + 1j * zw).astype(complex)
            pc = (ps + 1j * pw).astype(complex)
            for name in ("logmag_d1", "argsum_d2", "charfun"):
                if name == "charfun":
                    args_np = (s, 0.8, 1.7, zc, pc)
                else:
                    args_np = (w, zs, zw, ps, pw)
                t_np = _time(lambda: getattr(backend_np, name)(*args_np))
                if backend_c is None:
                    print(f"{name:<14}{n_roots:>6}{grid:>9}{t_np*1e3:>10.3f}ms{'-':>12}{'-':>9}")
                    continue
                t_c = _time(lambda: getattr(backend_c, name)(*args_np))
                print(
                    f"{name:<14}{n_roots:>6}{grid:>9}{t_np*1e3:>10.3f}ms"
                    f"{t_c*1e3:>10.3f}ms{t_np/t_c:>8.1f}x"
                )


def bench_end_to_end():
    example = dm.from_rational([3, 1, 2], [4, 3, 2, 1])
    zeros = [complex(-((n * math.pi) ** 2), 0.0) for n in range(1, 101)]
    poles = [complex(-(((n - 0.5) * math.pi) ** 2), 0.0) for n in range(1, 101)]
    gain = math.exp(sum(math.log((n - 0.5) ** 2 / n**2) for n in range(1, 101)))
    heat = dm.PoleZeroGain(gain, zeros, poles)

    def run_example():
        dm.analyze_up_to(example, dm.BoundaryConfig(-0.1), 7.0)

    def run_heat():
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            dm.analyze_all_delays(heat, dm.BoundaryConfig(-0.1))

    print(f"\n{'analysis':<34}{'numpy':>12}{'compiled':>12}{'speedup':>9}")
    for label, fn in (("example plant, analyze h<=7", run_example), ("heat plant (200 roots), stability", run_heat)):
        _swap_backend(backend_np)
        t_np = _time(fn, repeats=3)
        if backend_c is None:
            print(f"{label:<34}{t_np*1e3:>10.1f}ms{'-':>12}{'-':>9}")
            continue
        _swap_backend(backend_c)
        t_c = _time(fn, repeats=3)
        print(f"{label:<34}{t_np*1e3:>10.1f}ms{t_c*1e3:>10.1f}ms{t_np/t_c:>8.1f}x")
    _swap_backend(backend_c if backend_c is not None else backend_np)


if __name__ == "__main__":
    print(f"active backend at import: {_kernels.backend_name()}")
    if backend_c is None:
        print("compiled kernels not built; showing NumPy timings only")
    bench_kernels()
    bench_end_to_end()
