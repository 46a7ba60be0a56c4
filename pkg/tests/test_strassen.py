import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tensorforge.matmul import STANDARD, TRANSPOSED, identify_kronecker_decomposition, load_builtin
from tensorforge.multilinear import kronecker_decomposition
from tensorforge.strassen import (
    DecompositionRefused,
    benchmark,
    compile_algorithm,
    multiply,
    naive_algorithm,
    naive_multiply,
    output_formulas,
    padded_size,
    random_rational_matrix,
    replays_matmul,
)
from tensorforge.tensor import Decomposition, StructuralError


@pytest.fixture(scope="module")
def strassen():
    return compile_algorithm(load_builtin("strassen7"), TRANSPOSED, "strassen7")


def test_replay(strassen):
    assert strassen.rank == 7
    assert replays_matmul(strassen)
    assert replays_matmul(naive_algorithm(2))
    assert replays_matmul(naive_algorithm(3))


def test_output_formulas(strassen):
    assert output_formulas(strassen) == {
        "c11": "I + IV - V + VII",
        "c12": "III + V",
        "c21": "II + IV",
        "c22": "I - II + III + VI",
    }


def test_refuses_wrong_decomposition():
    d = load_builtin("strassen7")
    with pytest.raises(DecompositionRefused) as info:
        compile_algorithm(d, STANDARD)
    assert info.value.index is not None
    with pytest.raises(DecompositionRefused):
        compile_algorithm(d.without(3), TRANSPOSED)
    with pytest.raises(StructuralError):
        compile_algorithm(Decomposition.build((3, 3, 3), []), STANDARD)


@pytest.mark.parametrize("size", [1, 2, 3, 4, 5, 6, 8, 9, 16])
def test_exact_product_at_many_sizes(strassen, size):
    rng = random.Random(size)
    A = random_rational_matrix(size, rng)
    B = random_rational_matrix(size, rng)
    C, _ = multiply(strassen, A, B)
    assert (C == naive_multiply(A, B)).all()


@pytest.mark.parametrize("size,mults,adds", [(2, 7, 18), (4, 49, 198), (8, 343, 1674), (16, 2401, 12870)])
def test_operation_counts(strassen, size, mults, adds):
    rng = random.Random(0)
    _, ops = multiply(strassen, random_rational_matrix(size, rng), random_rational_matrix(size, rng), cutoff=1)
    assert ops.multiplications == mults == 7 ** round(math.log2(size))
    assert ops.additions == adds
    assert ops.scalings == 0
    assert ops.depth == round(math.log2(size))


def test_addition_recurrence():
    a = 0
    for k in range(1, 5):
        h = 2 ** (k - 1)
        a = 7 * a + 18 * h * h
    assert a == 12870


def test_padding():
    assert padded_size(5, 2) == 8
    assert padded_size(9, 3) == 9
    assert padded_size(10, 3) == 27


def test_cutoff_switches_to_naive(strassen):
    rng = random.Random(1)
    A, B = random_rational_matrix(8, rng), random_rational_matrix(8, rng)
    C, ops = multiply(strassen, A, B, cutoff=4)
    assert (C == naive_multiply(A, B)).all()
    assert ops.multiplications == 7 * 4**3
    C, ops = multiply(strassen, A, B, cutoff=8)
    assert ops.multiplications == 8**3


def test_float_mode(strassen):
    rng = np.random.default_rng(0)
    A, B = rng.standard_normal((64, 64)), rng.standard_normal((64, 64))
    C, _ = multiply(strassen, A, B, cutoff=8, exact=False)
    assert np.allclose(C, A @ B)


def test_two_level_algorithm_matches_one_level(strassen):
    s = load_builtin("strassen7")
    d = identify_kronecker_decomposition(kronecker_decomposition(s, s), 2, 2)
    alg4 = compile_algorithm(d, TRANSPOSED, "strassen49")
    assert alg4.rank == 49
    rng = random.Random(7)
    A, B = random_rational_matrix(16, rng), random_rational_matrix(16, rng)
    C4, ops4 = multiply(alg4, A, B)
    C2, ops2 = multiply(strassen, A, B)
    assert (C4 == C2).all()
    assert ops4.multiplications == ops2.multiplications == 2401


@given(st.integers(1, 7), st.integers(0, 10**6))
def test_random_sizes(size, seed):
    alg = compile_algorithm(load_builtin("strassen7"), TRANSPOSED)
    rng = random.Random(seed)
    A, B = random_rational_matrix(size, rng), random_rational_matrix(size, rng)
    C, _ = multiply(alg, A, B)
    assert (C == naive_multiply(A, B)).all()


def test_benchmark_slope(strassen):
    rep = benchmark(strassen, [2, 4, 8, 16], cutoff=1, exact=True, seed=3)
    assert all(r.correct for r in rep.rows)
    assert abs(rep.slope - math.log2(7)) < 1e-12
    naive = benchmark(naive_algorithm(2), [2, 4, 8], cutoff=1, exact=True)
    assert abs(naive.slope - 3) < 1e-12


def test_bad_input(strassen):
    with pytest.raises(StructuralError):
        multiply(strassen, [[1, 2]], [[1, 2]])
    with pytest.raises(ValueError):
        multiply(strassen, [[1]], [[1]], cutoff=0)


def test_fraction_entries(strassen):
    A = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(-1), Fraction(2, 7)]]
    B = [[Fraction(5), Fraction(0)], [Fraction(1, 9), Fraction(-3, 4)]]
    C, _ = multiply(strassen, A, B)
    assert (C == naive_multiply(A, B)).all()


def test_engine_config_defaults():
    from tensorforge.strassen import EXACT_CUTOFF, FLOAT_CUTOFF, EngineConfig

    assert EngineConfig().effective_cutoff == FLOAT_CUTOFF
    assert EngineConfig(exact=True).effective_cutoff == EXACT_CUTOFF
    assert EngineConfig(exact=True, cutoff=4).effective_cutoff == 4
