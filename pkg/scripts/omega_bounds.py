"""Exponent bounds log_n r for a few classical (n, r) pairs."""

from tensorforge.matmul import omega_bound

ROWS = [
    (2, 8, "rank", "naive 2x2"),
    (2, 7, "rank", "strassen7"),
    (4, 49, "rank", "strassen7 squared"),
    (3, 23, "rank", "3x3 rank 23"),
    (12, 1000, "border-rank", "12x12 border rank 1000"),
]

if __name__ == "__main__":
    print(f"{'n':>4} {'r':>6} {'kind':<12} {'bound':>16}  source")
    for n, r, kind, source in ROWS:
        b = omega_bound(n, r, kind, source)
        print(f"{n:>4} {r:>6} {kind:<12} {b.display():>16}  {source}")
