"""Time the exhaustive subset sweep on both backends.

Usage: python3 benchmarks/bench_subsets.py [--members 8 10 12] [--repeat 3]
"""

import argparse
import time

import numpy as np

from fusionkit import _backend
from fusionkit import generators as gen
from fusionkit.basis import f_dual


def problem(m, seed=0):
    rng = np.random.default_rng(seed)
    dims = [int(k) for k in rng.integers(1, 3, size=m)]
    fd = f_dual(gen.random_riesz(sum(dims), dims, cond=5.0, seed=seed))
    e = np.asarray(fd.stacked)
    inv = np.linalg.inv(e)
    g = e.conj().T @ e
    h = inv @ inv.conj().T
    offsets = np.asarray(fd.system.offsets, dtype=np.intp)
    sizes = np.asarray(fd.system.dims, dtype=np.intp)
    return (g + g.conj().T) / 2, (h + h.conj().T) / 2, offsets, sizes


def best_of(func, args, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = func(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--members", type=int, nargs="+", default=[8, 10, 12])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    impls = _backend.implementations()
    names = sorted(impls)
    print(f"{'m':>3} {'subsets':>8} " + " ".join(f"{n + ' [s]':>12}" for n in names) + f" {'speedup':>8} {'max diff':>10}")
    for m in args.members:
        prob = problem(m)
        res = {n: best_of(impls[n], prob + (2,), args.repeat) for n in names}
        line = f"{m:>3} {(1 << m) - 1:>8} " + " ".join(f"{res[n][0]:>12.4f}" for n in names)
        if len(names) == 2:
            diff = np.max(np.abs(res["cython"][1] - res["python"][1]) / np.maximum(1.0, np.abs(res["python"][1])))
            line += f" {res['python'][0] / res['cython'][0]:>8.1f} {diff:>10.1e}"
        print(line)


if __name__ == "__main__":
    main()
