"""Timing comparison of the compiled and pure-numpy kernel backends.

Run from the repository root after an editable install:

    python benchmarks/bench_kernels.py [grid_size]

Each kernel is timed over several repeats on the same random inputs;
the best wall time per backend is reported together with the speedup.
"""
from __future__ import annotations

import sys
import time

import numpy as np

from repeatersim._kernels import get_backend


def _inputs(n: int, rng: np.random.Generator):
    t = np.linspace(0.0, 20.0, n)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=(4, n))
    amps = rng.uniform(0.2, 1.0, size=(4, n))
    cl, dl, cr, dr = (a * np.exp(1j * p) for a, p in zip(amps, phases))
    return t, cl, dl, cr, dr


def _best_of(repeats: int, fn, *args) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    repeats = 5
    rng = np.random.default_rng(7)
    t, cl, dl, cr, dr = _inputs(n, rng)

    backends = {}
    for name in ("python", "compiled"):
        try:
            backends[name] = get_backend(name)
        except ImportError:
            print(f"{name:>8}: not available")
    if not backends:
        return 1

    rows = []
    for name, mod in backends.items():
        t_pair = _best_of(repeats, mod.pair_unitary_elements, 1.0, 3.0, 2.0, 3.0, t)
        t_bsm = _best_of(repeats, mod.bsm_closed_form, cl, dl, cr, dr, 1)
        t_qed = _best_of(
            repeats, mod.qed_closed_form, cl, dl, cr, dr, 0.5, t, t + 5.0, 0
        )
        rows.append((name, t_pair, t_bsm, t_qed))

    print(f"grid size {n}, best of {repeats}")
    print(f"{'backend':>8} {'pair_unitary':>14} {'bsm':>12} {'qed':>12}")
    for name, t_pair, t_bsm, t_qed in rows:
        print(f"{name:>8} {t_pair * 1e3:>12.3f}ms {t_bsm * 1e3:>10.3f}ms {t_qed * 1e3:>10.3f}ms")
    if len(rows) == 2:
        ref = {name: (a, b, c) for name, a, b, c in rows}
        py, cy = ref["python"], ref["compiled"]
        for label, i in (("pair_unitary", 0), ("bsm", 1), ("qed", 2)):
            print(f"speedup {label}: {py[i] / cy[i]:.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
