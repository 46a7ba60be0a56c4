import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import invertible, rationals, tensors
from tensorforge import linalg
from tensorforge.matmul import matmul_tensor
from tensorforge.multilinear import (
    apply_restriction,
    flattening,
    is_rank_one,
    is_symmetric,
    kronecker,
    kronecker_decomposition,
    multilinear_rank,
    permute_legs,
    symmetrize,
)
from tensorforge.tensor import Decomposition, StructuralError, Tensor, tensor_from_terms

vec = st.lists(rationals, min_size=2, max_size=2)


def test_flattening_of_w_state():
    w = Tensor.from_entries((2, 2, 2), {(0, 0, 1): 1, (0, 1, 0): 1, (1, 0, 0): 1})
    assert flattening(w, 1).tolist() == [[0, 1, 1, 0], [1, 0, 0, 0]]
    assert multilinear_rank(w) == (2, 2, 2)
    with pytest.raises((StructuralError, IndexError, ValueError)):
        flattening(w, 4)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matmul_is_concise(n):
    assert multilinear_rank(matmul_tensor(n)) == (n * n,) * 3


@given(tensors((2, 3, 2)), invertible(2), invertible(3), invertible(2))
def test_multilinear_rank_invariant_under_gl(t, a, b, c):
    assert multilinear_rank(apply_restriction([a, b, c], t)) == multilinear_rank(t)


@given(tensors((2, 2, 2)))
def test_multilinear_rank_bounded_by_other_legs(t):
    r = multilinear_rank(t)
    for i in range(3):
        others = [r[j] for j in range(3) if j != i]
        assert r[i] <= others[0] * others[1]


@given(vec, vec, vec)
def test_rank_one_detected(u, v, w):
    t = tensor_from_terms((2, 2, 2), Decomposition.build((2, 2, 2), [[u, v, w]]))
    check = is_rank_one(t)
    if t.is_zero():
        assert check.status == "zero"
    else:
        assert check
        rebuilt = tensor_from_terms((2, 2, 2), Decomposition.build((2, 2, 2), [list(check.factors)]))
        assert rebuilt == t


@given(tensors((2, 2, 2)))
def test_rank_one_agrees_with_multilinear_rank(t):
    check = is_rank_one(t)
    assert bool(check) == (multilinear_rank(t) == (1, 1, 1))


@given(tensors((2, 2, 2)))
def test_symmetrize_idempotent(t):
    s = symmetrize(t)
    assert is_symmetric(s)
    assert symmetrize(s) == s


def test_symmetrize_needs_cube():
    with pytest.raises(StructuralError):
        symmetrize(Tensor.zeros((2, 3, 2)))


@given(tensors((2, 2, 2)), tensors((2, 1, 2)))
def test_kronecker_multilinear_rank_multiplies(s, t):
    k = kronecker(s, t)
    assert k.shape == (4, 2, 4)
    assert multilinear_rank(k) == tuple(a * b for a, b in zip(multilinear_rank(s), multilinear_rank(t)))


@given(st.data())
def test_kronecker_of_decompositions(data):
    def draw_dec(shape, r):
        return Decomposition.build(
            shape, [[data.draw(st.lists(rationals, min_size=a, max_size=a)) for a in shape] for _ in range(r)]
        )

    d1, d2 = draw_dec((2, 2, 2), 2), draw_dec((2, 3, 1), 2)
    k = kronecker_decomposition(d1, d2)
    assert k.rank == 4
    assert tensor_from_terms(k.shape, k) == kronecker(tensor_from_terms(d1.shape, d1), tensor_from_terms(d2.shape, d2))


def test_restriction_composes():
    t = matmul_tensor(2)
    a = [[Fraction(1), Fraction(2), 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    ainv = [[Fraction(x) for x in row] for row in [[1, -2, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]]
    assert linalg.matmul(a, ainv) == linalg.identity(4)
    eye = linalg.identity(4)
    back = apply_restriction([ainv, eye, eye], apply_restriction([a, eye, eye], t))
    assert back == t


def test_permute_legs_is_a_relabeling():
    t = matmul_tensor(2)
    perm = [3, 1, 2, 0]
    p = permute_legs(t, [perm, perm, perm])
    for idx, v in t.nonzero():
        assert p[tuple(perm[i] for i in idx)] == v
