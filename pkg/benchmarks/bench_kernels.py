"""Compare the numba kernels with their numpy counterparts.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--size 100000]

Both variants are always importable; the S3FLAT_BACKEND variable only picks
which one the package uses by default. Results are checked for agreement
before timing.
"""
import argparse
import math
import timeit

import numpy as np

from s3flat import kernels
from s3flat.s3core import stereo_basis


def cases(size):
    rng = np.random.default_rng(0)
    P = rng.normal(size=(size, 4))
    Q = rng.normal(size=(size, 4))
    Q /= np.linalg.norm(Q, axis=1)[:, None]
    pole = -np.eye(4)[0]
    keep = Q @ pole < 0.99
    P, Q = P[keep], Q[keep]
    basis = stereo_basis(pole)
    ode = (25.0, 1225.0, math.pi / 4, 0.1, 1e-4, 10000, 1e-3, 1e-10, 3)
    return {
        "hamilton_many": ((P, Q), {}),
        "stereographic_many": ((Q, pole, basis), {}),
        "integrate_profile": (ode, {}),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=100_000)
    args = ap.parse_args(argv)
    print(f"{'kernel':<22}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}")
    for name, (call_args, _) in cases(args.size).items():
        fast = getattr(kernels, f"{name}_numba")
        slow = getattr(kernels, f"{name}_numpy")
        a, b = fast(*call_args), slow(*call_args)  # also triggers compilation
        pairs = zip(a[:2], b[:2]) if name == "integrate_profile" else [(a, b)]
        for x, y in pairs:
            assert np.allclose(x, y, rtol=1e-12, atol=1e-12), name
        t_fast = min(timeit.repeat(lambda: fast(*call_args), number=1, repeat=args.repeat))
        t_slow = min(timeit.repeat(lambda: slow(*call_args), number=1, repeat=args.repeat))
        print(f"{name:<22}{1e3 * t_slow:>12.2f}{1e3 * t_fast:>12.2f}{t_slow / t_fast:>10.1f}")


if __name__ == "__main__":
    main()
