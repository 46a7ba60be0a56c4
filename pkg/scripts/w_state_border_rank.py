"""The W-state: border rank 2 witness, exact decomposition extracted from it, and its orbit data."""

from tensorforge.degeneration import degeneration_to_rank, extraction_bound, verify_degeneration, w_state, w_state_witness
from tensorforge.exact import fmt_rational
from tensorforge.matmul import verify_decomposition
from tensorforge.orbit222 import classify_222


def vec(v):
    return "(" + ", ".join(fmt_rational(x) for x in v) + ")"


if __name__ == "__main__":
    w = w_state_witness()
    print(f"witness: q = {w.q}, r = {w.r}, verifies: {bool(verify_degeneration(w))}")
    d = degeneration_to_rank(w)
    print(f"extracted {d.rank} terms (bound {extraction_bound(w)}, coarse bound {(w.q + 1) ** 2 * w.r})")
    for t in d.terms:
        print("  " + " x ".join(vec(v) for v in t.vectors))
    print(f"re-verifies: {bool(verify_decomposition(w_state(), d))}")
    c = classify_222(w_state())
    print(f"class {c.label}, multilinear rank {c.multilinear_rank}, Det {c.det}, rank {c.complex_rank}")
