"""Compiled vs fallback mod-p kernels.

Times the two hot paths (batched ranks of the 10 x 15 stratum matrices and
a single large RREF) for every importable backend and checks that the
backends agree. Run with ``python3 benchmarks/bench_kernels.py``.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from epwkit.epw import pairing_tensor
from epwkit.fields import GF
from epwkit.kernels import backends
from epwkit.lagrangian import random_instance
from epwkit import projective


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--prime", type=int, default=11)
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    p = args.prime
    F = GF(p)
    Mc = pairing_tensor(F, random_instance(0, F).rows())
    pts = projective.points_range(p, 6, 0, min(args.points, projective.count(p, 6)))
    batch = ((pts @ Mc.reshape(6, -1)) % p).reshape(-1, 10, 15)
    big = np.random.Generator(np.random.PCG64(0)).integers(0, p, size=(400, 460))

    results = {}
    for name, mod in backends().items():
        t_batch, ranks = _best(lambda: mod.batch_rank_mod_p(batch, p), args.repeat)
        t_rref, (R, piv) = _best(lambda: mod.rref_mod_p(big, p), args.repeat)
        results[name] = (t_batch, t_rref, np.asarray(ranks), np.asarray(R), tuple(piv))
        print(f"{name:7s} batch_rank {len(batch)} x (10x15): {t_batch * 1e3:9.1f} ms   rref 400x460: {t_rref * 1e3:9.1f} ms")

    if len(results) == 2:
        py, cy = results["python"], results["cython"]
        same = np.array_equal(py[2], cy[2]) and np.array_equal(py[3], cy[3]) and py[4] == cy[4]
        print(f"backends agree: {same}")
        print(f"speedup batch_rank: {py[0] / cy[0]:.1f}x   rref: {py[1] / cy[1]:.1f}x")
    else:
        print("compiled backend not built; only the fallback was timed")


if __name__ == "__main__":
    main()
