"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from tensorforge import linalg
from tensorforge.tensor import Tensor

small_ints = st.integers(min_value=-4, max_value=4)
rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))


@st.composite
def tensors(draw, shape=(2, 2, 2), values=small_ints):
    entries = {}
    for idx in _indices(shape):
        v = draw(values)
        if v:
            entries[idx] = v
    return Tensor.from_entries(shape, entries)


def invertible(n, values=small_ints):
    square = st.lists(st.lists(values, min_size=n, max_size=n), min_size=n, max_size=n)
    return square.map(lambda m: [[Fraction(x) for x in row] for row in m]).filter(lambda m: linalg.det(m) != 0)


def _indices(shape):
    if not shape:
        yield ()
        return
    for i in range(shape[0]):
        for rest in _indices(shape[1:]):
            yield (i,) + rest


def tight_corpus(count=200, seed=2024):
    """Seeded random sparse tensors with at most 3 per leg."""
    import random

    rng = random.Random(seed)
    out = []
    while len(out) < count:
        shape = tuple(rng.randint(1, 3) for _ in range(3))
        cells = list(_indices(shape))
        k = rng.randint(1, len(cells))
        support = rng.sample(cells, k)
        out.append(Tensor.from_entries(shape, {idx: rng.choice([1, -1, 2]) for idx in support}))
    return out
