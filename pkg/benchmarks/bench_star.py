"""Benchmark the compiled star kernel against the pure-Python fallback.

Two views per support size:

- pipeline: the full product call (packing and unpacking included), which is
  what library users pay;
- kernel: the inner convolution loop alone on pre-packed data, which is what
  the compiled extension actually replaces.

    python3 benchmarks/bench_star.py [--sizes 8,16,32,64] [--repeat 5]
"""

import argparse
import random
import time
from array import array
from fractions import Fraction

import numpy as np

from ncdeform import _kernel
from ncdeform.coefficients import ExactComplex
from ncdeform.cohomology import standard_bicharacter
from ncdeform.groups import FgAbelianGroup
from ncdeform.twisted_algebra import (AlgebraElement, StarContext,
                                      _mods_array, _pack_exact_scalar, star)

G2 = FgAbelianGroup(2)


def random_exact(rng, terms):
    out = AlgebraElement.zero(G2)
    for _ in range(terms):
        x = (rng.randint(-terms, terms), rng.randint(-terms, terms))
        c = ExactComplex.from_phase(Fraction(rng.randrange(12), 12),
                                    Fraction(rng.randint(-4, 4)),
                                    Fraction(rng.randint(-4, 4)))
        out = out + AlgebraElement.generator(G2, x, c)
    return out


def random_float(rng, terms):
    out = AlgebraElement.zero(G2)
    for _ in range(terms):
        x = (rng.randint(-terms, terms), rng.randint(-terms, terms))
        out = out + AlgebraElement.generator(
            G2, x, complex(rng.uniform(-2, 2), rng.uniform(-2, 2)))
    return out


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_pipeline(pairs, ctx, repeat):
    def run():
        for a, b in pairs:
            star(a, b, ctx)

    compiled = None
    if _kernel.star_exact_c is not None:
        compiled = best_of(run, repeat)
    saved = (_kernel.star_exact_c, _kernel.star_real_c)
    _kernel.star_exact_c = _kernel.star_real_c = None
    try:
        fallback = best_of(run, repeat)
    finally:
        _kernel.star_exact_c, _kernel.star_real_c = saved
    return compiled, fallback


def pack_exact_args(a, b, ctx):
    nums, tden = ctx._exact_pack
    D = 12 * tden
    scale = D // tden
    theta = array("q", [nums[i][j] * scale for i in range(2)
                        for j in range(2)])
    na, ac, aoff, aph, are, aim, _, _ = _pack_exact_scalar(a, D)
    nb, bc, boff, bph, bre, bim, _, _ = _pack_exact_scalar(b, D)
    packs = [array("q", s) for s in
             (ac, aoff, aph, are, aim, bc, boff, bph, bre, bim)]
    return (2, _mods_array(G2), na, packs[0], packs[1], packs[2], packs[3],
            packs[4], nb, packs[5], packs[6], packs[7], packs[8], packs[9],
            theta, D, None)


def pack_real_args(a, b, ctx):
    ac = array("q")
    bc = array("q")
    acoef = np.empty(len(a.coeffs), complex)
    bcoef = np.empty(len(b.coeffs), complex)
    for i, (x, v) in enumerate(a.coeffs.items()):
        ac.extend(x.coords)
        acoef[i] = complex(v)
    for j, (y, v) in enumerate(b.coeffs.items()):
        bc.extend(y.coords)
        bcoef[j] = complex(v)
    return (2, _mods_array(G2), len(a.coeffs), ac, acoef,
            len(b.coeffs), bc, bcoef, ctx._float_flat, None)


def bench_kernel(packed, c_fn, py_fn, repeat):
    compiled = None
    if c_fn is not None:
        compiled = best_of(lambda: [c_fn(*args) for args in packed], repeat)
    fallback = best_of(lambda: [py_fn(*args) for args in packed], repeat)
    return compiled, fallback


def fmt_row(terms, mode, view, compiled, fallback, npairs):
    per_c = "" if compiled is None else f"{1e3 * compiled / npairs:12.3f}"
    ratio = "" if compiled is None else f"{fallback / compiled:7.1f}x"
    print(f"{terms:>8} {mode:>6} {view:>9} {per_c:>12} "
          f"{1e3 * fallback / npairs:11.3f} {ratio:>8}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="8,16,32,64",
                    help="comma-separated support sizes")
    ap.add_argument("--repeat", type=int, default=5,
                    help="take the best of this many runs")
    ap.add_argument("--pairs", type=int, default=20,
                    help="random element pairs per size")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = random.Random(99)
    exact_ctx = StarContext(standard_bicharacter(
        G2, [[0, Fraction(1, 3)], [0, 0]]))
    float_ctx = StarContext(standard_bicharacter(
        G2, [[0.0, 0.3782915], [0.0, 0.0]]))

    print(f"kernel selection at import: {_kernel.IMPLEMENTATION}")
    header = (f"{'support':>8} {'mode':>6} {'view':>9} {'compiled ms':>12} "
              f"{'python ms':>11} {'speedup':>8}")
    print(header)
    print("-" * len(header))
    for terms in sizes:
        exact_pairs = [(random_exact(rng, terms), random_exact(rng, terms))
                       for _ in range(args.pairs)]
        float_pairs = [(random_float(rng, terms), random_float(rng, terms))
                       for _ in range(args.pairs)]

        comp, fall = bench_pipeline(exact_pairs, exact_ctx, args.repeat)
        fmt_row(terms, "exact", "pipeline", comp, fall, args.pairs)
        packed = [pack_exact_args(a, b, exact_ctx) for a, b in exact_pairs]
        comp, fall = bench_kernel(packed, _kernel.star_exact_c,
                                  _kernel.star_exact_py, args.repeat)
        fmt_row(terms, "exact", "kernel", comp, fall, args.pairs)

        comp, fall = bench_pipeline(float_pairs, float_ctx, args.repeat)
        fmt_row(terms, "float", "pipeline", comp, fall, args.pairs)
        packed = [pack_real_args(a, b, float_ctx) for a, b in float_pairs]
        comp, fall = bench_kernel(packed, _kernel.star_real_c,
                                  _kernel.star_real_py, args.repeat)
        fmt_row(terms, "float", "kernel", comp, fall, args.pairs)


if __name__ == "__main__":
    main()
