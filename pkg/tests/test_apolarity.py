from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from helpers import rationals
from tensorforge.apolarity import (
    HomogPoly,
    annihilates,
    apolar_kernel,
    catalecticant,
    diff_apply,
    expand_waring,
    hilbert_function,
    monomials,
    parse_ideal,
    parse_poly,
    power_of_linear,
    serialize_poly,
    socle_colon,
    span_rank,
    srk_upper_bound_sym3,
    waring_rank_binary,
    waring_rank_monomial,
    xyz_decomposition,
)
from tensorforge.exact import ParseError
from tensorforge.matmul import load_builtin, matmul_tensor, transpose_third_leg
from tensorforge.multilinear import symmetrize
from tensorforge.tensor import StructuralError, Tensor, outer

mono = HomogPoly.monomial


def binary_forms(max_degree=6):
    return st.integers(1, max_degree).flatmap(
        lambda d: st.lists(rationals, min_size=d + 1, max_size=d + 1).map(
            lambda cs: HomogPoly(2, d, {(d - i, i): c for i, c in enumerate(cs)})
        )
    ).filter(lambda f: not f.is_zero())


def ternary_forms(max_degree=4):
    return st.integers(1, max_degree).flatmap(
        lambda d: st.lists(st.integers(-3, 3), min_size=len(monomials(3, d)), max_size=len(monomials(3, d))).map(
            lambda cs: HomogPoly(3, d, dict(zip(monomials(3, d), map(Fraction, cs))))
        )
    ).filter(lambda f: not f.is_zero())


def test_monomial_order():
    assert monomials(2, 2) == ((2, 0), (1, 1), (0, 2))
    assert len(monomials(3, 3)) == 10


def test_diff_apply_against_sympy():
    x, y, z = sympy.symbols("x y z")
    f = mono((2, 1, 3), 5) + mono((1, 4, 1), -2)
    g = mono((1, 0, 1)) + mono((0, 2, 0), 3)
    got = diff_apply(g, f)
    fs = 5 * x**2 * y * z**3 - 2 * x * y**4 * z
    want = sympy.expand(sympy.diff(fs, x, z) + 3 * sympy.diff(fs, y, 2))
    assert got == HomogPoly(3, 4, {tuple(m): Fraction(int(c)) for m, c in sympy.Poly(want, x, y, z).terms()})


def test_power_of_linear():
    p = power_of_linear((1, 2), 3)
    assert p == mono((3, 0)) + mono((2, 1), 6) + mono((1, 2), 12) + mono((0, 3), 8)


@pytest.mark.parametrize(
    "exp,hf", [((1, 1, 1), (1, 3, 3, 1)), ((2, 1), (1, 2, 2, 1)), ((3, 0), (1, 1, 1, 1)), ((2, 2), (1, 2, 3, 2, 1))]
)
def test_hilbert_of_monomials(exp, hf):
    assert hilbert_function(mono(exp)) == hf


@given(ternary_forms())
def test_hilbert_function_is_symmetric(f):
    hf = hilbert_function(f)
    assert hf == hf[::-1]
    assert hf[0] == 1


@given(ternary_forms(), st.data())
def test_socle_colon_equals_kernel(f, data):
    e = data.draw(st.integers(0, f.degree))
    a, b = apolar_kernel(f, e), socle_colon(f, e)
    assert len(a) == len(b)
    if a:
        assert span_rank(a) == span_rank(b) == span_rank(a + b)


@given(binary_forms(), st.data())
def test_kernel_annihilates(f, data):
    e = data.draw(st.integers(0, f.degree))
    for g in apolar_kernel(f, e):
        assert diff_apply(g, f).is_zero()


def test_catalecticant_shape():
    c = catalecticant(mono((1, 1, 1)), 1)
    assert len(c.rows) == 3 and len(c.cols) == 6 and c.rank == 3


@pytest.mark.parametrize("exp", [(1, 1, 1), (1, 2), (2, 2), (1, 1, 2), (3,), (0, 2, 3)])
def test_monomial_certificates(exp):
    cert = waring_rank_monomial(exp)
    nonzero = sorted(a for a in exp if a)
    want = 1
    for a in nonzero[1:]:
        want *= a + 1
    assert cert.rank == want == len(cert.terms)
    assert cert.verified


def test_xyz_rational_decomposition():
    terms = xyz_decomposition()
    assert len(terms) == 4
    assert expand_waring(terms, 3, 3) == mono((1, 1, 1))


@pytest.mark.parametrize("d", range(2, 11))
def test_binary_xy_power(d):
    cert = waring_rank_binary(mono((1, d - 1)))
    assert cert.rank == d


def test_x3_plus_3x2y_has_rank_three():
    f = mono((3, 0)) + mono((2, 1), 3)
    cert = waring_rank_binary(f)
    assert cert.rank == 3
    assert cert.evidence["e"] == 2


@pytest.mark.parametrize(
    "f,rank",
    [
        (power_of_linear((2, -3), 5), 1),
        (mono((3, 0)) + mono((0, 3)), 2),
        (mono((4, 0)) + mono((0, 4)) + power_of_linear((1, 1), 4), 3),
    ],
)
def test_binary_decompositions(f, rank):
    cert = waring_rank_binary(f)
    assert cert.rank == rank
    assert cert.verified and expand_waring(cert.terms, 2, f.degree) == f


@given(st.integers(1, 5), st.integers(1, 5))
def test_binary_agrees_with_monomial(a, b):
    assert waring_rank_binary(mono((a, b))).rank == waring_rank_monomial((a, b)).rank


@given(binary_forms(5))
def test_binary_rank_bounds(f):
    cert = waring_rank_binary(f)
    hf = hilbert_function(f)
    assert max(hf) <= cert.rank <= f.degree + 1
    if cert.has_decomposition:
        assert cert.verified


def test_srk_bound_for_trace_cube():
    d = transpose_third_leg(load_builtin("strassen7"))
    b = srk_upper_bound_sym3(d)
    assert b.bound == 28 == len(b.terms)
    assert b.verified
    acc = sum((outer([v, v, v]) * c for c, v in b.terms[1:]), outer([b.terms[0][1]] * 3) * b.terms[0][0])
    assert Tensor(acc) == symmetrize(matmul_tensor(2))


def test_annihilates():
    f = mono((1, 1, 1))
    squares = [mono((2, 0, 0)), mono((0, 2, 0)), mono((0, 0, 2))]
    assert annihilates(squares, f)
    rep = annihilates([mono((1, 1, 0))], f)
    assert not rep and rep.by_degree[2] is False


def test_json_roundtrip_and_errors():
    f = mono((2, 1), Fraction(3, 4)) + mono((0, 3), -1)
    assert parse_poly(serialize_poly(f)) == f
    with pytest.raises(ParseError):
        parse_poly('{"vars": 2, "degree": 3, "terms": [{"exp": [1, 1], "coeff": "1"}]}')
    with pytest.raises(ParseError):
        parse_ideal('{"generators": 3}')


def test_errors():
    with pytest.raises(StructuralError):
        waring_rank_binary(mono((1, 1, 1)))
    with pytest.raises(ValueError):
        waring_rank_monomial((0, 0))
