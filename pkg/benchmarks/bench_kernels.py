"""Compare the compiled and numpy log-likelihood kernels.

Run ``python3 benchmarks/bench_kernels.py [--sizes 100,1000,20000]``. Prints
the per-call time of each backend and their ratio for every family, which is
how the size cutoff in ``copreg.kernels`` was chosen.
"""

import argparse
import sys
import timeit

import numpy as np

from copreg import _pykernels
from copreg.copula.families import FAMILY_CODES, Family

SPECS = {
    Family.GAUSSIAN: (0.5,),
    Family.STUDENT_T: (0.5, 4.0),
    Family.CLAYTON: (2.0,),
    Family.GUMBEL: (2.0,),
    Family.FRANK: (5.0,),
    Family.JOE: (2.0,),
    Family.AMH: (0.5,),
    Family.BB1: (1.0, 1.5),
    Family.BB6: (1.5, 1.5),
    Family.BB7: (1.5, 1.5),
    Family.BB8: (3.0, 0.7),
    Family.GAUSS_MIX2: (-0.5, 0.7, 0.4),
}


def _time(fn, budget: float = 0.2) -> float:
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    number = max(1, int(number * budget / 0.2))
    return min(timer.repeat(repeat=3, number=number)) / number


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="100,320,2000,20000")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    try:
        from copreg import _ckernels
    except ImportError:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>7} {'family':<10} {'cython_us':>10} {'numpy_us':>10} {'ratio':>7}")
    for n in (int(s) for s in args.sizes.split(",")):
        u, v = rng.uniform(size=(2, n))
        for fam, params in SPECS.items():
            code, par = FAMILY_CODES[fam], np.asarray(params, dtype=float)
            a, b = (
                np.asarray(k.logpdf(code, 0, par, u, v)) for k in (_ckernels, _pykernels)
            )
            if not np.allclose(a, b, rtol=1e-9, atol=1e-9):
                print(f"backend mismatch for {fam.value} at n={n}", file=sys.stderr)
                return 2
            tc = _time(lambda: _ckernels.loglik(code, 0, par, u, v))
            tp = _time(lambda: _pykernels.loglik(code, 0, par, u, v))
            print(f"{n:>7} {fam.value:<10} {tc * 1e6:>10.1f} {tp * 1e6:>10.1f} {tp / tc:>7.2f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
