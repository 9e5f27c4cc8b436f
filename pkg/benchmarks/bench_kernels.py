"""Time the numba and numpy paths of each hot kernel on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from contrast_mend import _kernels
from contrast_mend.harmony import distance_tables


def _best_of(fn, repeat: int) -> float:
    fn()  # warm up (and trigger JIT compilation)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def cases(rng: np.random.Generator):
    weights = np.zeros(360)
    weights[rng.integers(0, 360, 40)] = rng.random(40)
    dist = distance_tables()
    yield "template_errors (40 hues)", (
        lambda: _kernels.template_errors_np(weights, dist),
        lambda: _kernels.template_errors_nb(weights, dist),
    )

    n = 200_000
    hs, ss, vs = rng.uniform(0, 360, n), rng.random(n), rng.random(n)
    # an unreachable target forces a full scan
    ff = (hs, ss, vs, _kernels.LIN, 0.5, 21.0, 180.0, 2, True, 30.0, 0.1)
    yield f"first_feasible ({n} candidates)", (
        lambda: _kernels.first_feasible_np(*ff),
        lambda: _kernels.first_feasible_nb(*ff),
    )

    px = rng.integers(0, 256, (512, 512, 4), dtype=np.uint8)
    px[100:300, 100:300, :3] = (200, 200, 200)
    src, dst = np.array([200, 200, 200]), np.array([60, 60, 60])
    yield "recolor (512x512 RGBA)", (
        lambda: _kernels.recolor_np(px, src, dst, 16),
        lambda: _kernels.recolor_nb(px, src, dst, 16),
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':34} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for name, (np_fn, nb_fn) in cases(np.random.default_rng(0)):
        t_np, t_nb = _best_of(np_fn, args.repeat), _best_of(nb_fn, args.repeat)
        print(f"{name:34} {t_np * 1e3:10.3f} {t_nb * 1e3:10.3f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
