"""Classify every sorted dimension tuple with 3 factors, each at most --max."""

import argparse
import itertools
from collections import Counter

from tensorforge.castling import classify


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max", type=int, default=8)
    p.add_argument("--d", type=int, default=3)
    args = p.parse_args()
    tally = Counter()
    for t in itertools.combinations_with_replacement(range(2, args.max + 1), args.d):
        r = classify(t)
        tally[r.rule] += 1
        flag = "finite" if r.finite_orbits else ("prehom" if r.prehomogeneous else "-")
        print(f"{str(t):<16} N={r.N:>5}  minimal={str(r.minimal):<14} {flag:<7} {r.rule}")
    print()
    for rule, k in tally.most_common():
        print(f"{k:>5}  {rule}")


if __name__ == "__main__":
    main()
