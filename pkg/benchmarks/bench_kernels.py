"""Time the numba kernels against their numpy twins.

Both variants live in ``qkleinian._kernels`` regardless of QK_NUMBA, so one
process can run them side by side. Usage:

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import math
import time

import numpy as np

from qkleinian import _kernels as K
from qkleinian import hmat
from qkleinian.classify import Fine, canonical_form, canonical_specs, classify

GOLDEN = (math.sqrt(5) - 1) / 2
SILVER = math.sqrt(2) - 1


def cases():
    specs = canonical_specs()
    screw = canonical_form(classify(specs[Fine.SCREW]))
    elliptic = canonical_form(classify(specs[Fine.SIMPLE_IRRATIONAL_ELLIPTIC]))
    V = np.random.default_rng(0).standard_normal((200, 3, 4))
    V /= np.linalg.norm(V.reshape(200, -1), axis=1)[:, None, None]
    return {
        "iterate (200 points x 500 steps)": ("iterate", (screw, V, 500)),
        "first_return (100 points, eps 1e-2)": ("first_return", (elliptic, V[:100], 1e-2, 100_000)),
        "s1_max_gap (n = 1e6)": ("s1_max_gap", (GOLDEN, 1_000_000)),
        "t2_first_cover (golden, silver, 50 x 50)": ("t2_first_cover", (GOLDEN, SILVER, 50, 10 ** 7)),
    }


def best_of(fn, args, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not hasattr(K, "nb_iterate"):
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'kernel':<44}{'numpy s':>10}{'numba s':>10}{'speedup':>9}  agree")
    for label, (name, call) in cases().items():
        nb, npy = getattr(K, "nb_" + name), getattr(K, "np_" + name)
        nb(*call)  # compile outside the timing
        t_nb, a = best_of(nb, call, args.repeat)
        t_np, b = best_of(npy, call, args.repeat)
        agree = np.allclose(a, b, atol=1e-9)
        print(f"{label:<44}{t_np:>10.4f}{t_nb:>10.4f}{t_np / t_nb:>8.1f}x  {agree}")


if __name__ == "__main__":
    main()
