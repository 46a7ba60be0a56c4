"""Compare the strassen7 recursion with the naive algorithm: counts, time, fitted exponent."""

import argparse
import math

from tensorforge.matmul import TRANSPOSED, load_builtin
from tensorforge.strassen import benchmark, compile_algorithm, naive_algorithm


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--sizes", default="2,4,8,16,32")
    p.add_argument("--cutoff", type=int, default=1)
    p.add_argument("--float", action="store_true", help="machine floats instead of exact rationals")
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    exact = not args.float

    algs = [compile_algorithm(load_builtin("strassen7"), TRANSPOSED, "strassen7"), naive_algorithm(2)]
    for alg in algs:
        rep = benchmark(alg, sizes, args.cutoff, exact, args.seed)
        print(f"{alg.name}  (cutoff {args.cutoff}, {'exact' if exact else 'float'})")
        print(f"{'size':>6} {'mults':>10} {'adds':>10} {'seconds':>10}  ok")
        for r in rep.rows:
            print(f"{r.size:>6} {r.ops.multiplications:>10} {r.ops.additions:>10} {r.seconds:>10.4f}  {r.correct}")
        if rep.slope is not None:
            print(f"fitted exponent {rep.slope:.12f}   log2(7) = {math.log2(7):.12f}\n")


if __name__ == "__main__":
    main()
