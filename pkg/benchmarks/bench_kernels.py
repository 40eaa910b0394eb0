"""Time the compiled and NumPy kernel backends on the same inputs.

    python3 benchmarks/bench_kernels.py --n 20 --p 10 --repeat 3
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from ringconc.kernels import backends


def _best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _canonical(name, out):
    out = out if isinstance(out, tuple) else (out,)
    if name == "flip_couplings":
        # entry order is backend specific; duplicates are summed later anyway
        order = np.lexsort((out[2], out[1], out[0]))
        out = tuple(np.asarray(x)[order] for x in out)
    return out


def bench(n: int, p: int, repeat: int) -> list[tuple[str, dict[str, float]]]:
    impls = backends()
    ref = impls["python"]
    layer = ref.layer_states(n, p)
    reps, _ = ref.min_rotation(layer, n)
    reps = reps[reps == layer]
    keys = ref.orbit_keys(reps, n, True)
    keys = np.unique(keys)
    sizes = np.ones(len(keys), dtype=np.int64)  # values only scale the couplings

    cases = {
        "layer_states": lambda m: m.layer_states(n, p),
        "min_rotation": lambda m: m.min_rotation(layer, n),
        "orbit_keys": lambda m: m.orbit_keys(layer, n, True),
        "element_index": lambda m: m.element_index(layer, keys, n, True),
        "flip_couplings": lambda m: m.flip_couplings(keys, sizes, n, True),
    }
    rows = []
    for name, fn in cases.items():
        timings = {}
        outputs = {}
        for label, mod in impls.items():
            timings[label], outputs[label] = _best_of(lambda: fn(mod), repeat)
        if len(outputs) > 1:
            a, b = _canonical(name, outputs["python"]), _canonical(name, outputs["cython"])
            assert all(np.array_equal(x, y) for x, y in zip(a, b)), f"{name}: backends disagree"
        rows.append((name, timings))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20)
    ap.add_argument("--p", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    labels = list(backends())
    print(f"n={args.n} p={args.p}  best of {args.repeat}")
    print(f"{'kernel':<16}" + "".join(f"{lab:>12}" for lab in labels) + f"{'speedup':>10}")
    for name, t in bench(args.n, args.p, args.repeat):
        cells = "".join(f"{t[lab] * 1e3:>10.2f}ms" for lab in labels)
        speed = f"{t['python'] / t['cython']:>9.1f}x" if "cython" in t else ""
        print(f"{name:<16}{cells}{speed}")


if __name__ == "__main__":
    main()
