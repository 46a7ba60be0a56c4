import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import tight_corpus
from tensorforge.asymptotic import (
    TightnessWitness,
    asymptotic_rank_bound,
    brute_force_tight,
    find_tight,
    forced_equal_pairs,
    is_concise,
    matmul_tight_witness,
    verify_tight,
)
from tensorforge.matmul import matmul_tensor, unit_tensor
from tensorforge.tensor import StructuralError, Tensor


def test_fekete_examples():
    est = asymptotic_rank_bound([(1, 7), (2, 49)])
    assert est.bound == 7.0 and est.exact == "7"
    est = asymptotic_rank_bound([(1, 8), (2, 49), (3, 343)])
    assert est.best_k == 2 and est.bound == 7.0
    est = asymptotic_rank_bound([(1, 3), (2, 8)])
    assert est.exact == "8^(1/2)"
    assert est.bound == pytest.approx(math.sqrt(8))


def test_fekete_flags_non_submultiplicative_samples():
    est = asymptotic_rank_bound([(1, 2), (2, 5)])
    assert not est.submultiplicative
    assert est.violations == ((1, 1),)


def test_fekete_errors():
    for bad in ([], [(0, 3)], [(1, 0)]):
        with pytest.raises(ValueError):
            asymptotic_rank_bound(bad)


samples = st.lists(st.tuples(st.integers(1, 6), st.integers(1, 10**4)), min_size=1, max_size=6)


@given(samples, samples)
def test_fekete_monotone(a, b):
    # adding samples never raises the bound
    assert asymptotic_rank_bound(a + b).bound <= asymptotic_rank_bound(a).bound * (1 + 1e-12)


@given(samples)
def test_fekete_bound_is_a_sample_root(a):
    est = asymptotic_rank_bound(a)
    assert all(est.bound <= r ** (1 / k) * (1 + 1e-12) for k, r in a)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_matmul_is_concise_and_tight(n):
    t = matmul_tensor(n)
    assert is_concise(t)
    assert verify_tight(t, matmul_tight_witness(n))
    w = find_tight(t)
    assert w is not None and verify_tight(t, w)


def test_non_concise():
    t = Tensor.from_entries((2, 2, 2), {(0, 0, 0): 1, (0, 1, 1): 1})
    assert not is_concise(t)


def test_full_support_forces_collision():
    t = Tensor.from_entries((2, 2, 2), {idx: 1 for idx in [(i, j, k) for i in (0, 1) for j in (0, 1) for k in (0, 1)]})
    assert find_tight(t) is None
    assert (1, 0, 1) in forced_equal_pairs(t)


def test_diagonal_is_tight():
    t = unit_tensor(4)
    w = TightnessWitness(tuple(range(4)), tuple(range(4)), tuple(-2 * i for i in range(4)))
    assert verify_tight(t, w)
    assert find_tight(t) is not None


def test_witness_checks():
    t = unit_tensor(2)
    assert not verify_tight(t, TightnessWitness((0, 0), (0, 1), (0, -1)))
    with pytest.raises(StructuralError):
        verify_tight(t, TightnessWitness((0,), (0, 1), (0, -1)))


def test_find_tight_agrees_with_brute_force():
    tight = 0
    for t in tight_corpus(60, seed=11):
        w = find_tight(t)
        oracle = brute_force_tight(t, max(t.shape) ** 2)
        assert (w is None) == (oracle is None)
        if w is not None:
            tight += 1
            assert verify_tight(t, w) and verify_tight(t, oracle)
    assert 0 < tight < 60
