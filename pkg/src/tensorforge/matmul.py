"""Matrix multiplication tensors, decomposition checks and exponent bounds.

The matrix unit E_{i,j} of n x n matrices sits at coordinate i * n + j on
every leg.  The standard tensor is sum E_{i,j} x E_{j,k} x E_{k,i}; the
"transposed" variant stores E_{i,k} on the third leg instead.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Sequence

import numpy as np

from .multilinear import apply_restriction, permute_legs, relabel_decomposition, symmetrize
from .tensor import (
    Decomposition,
    StructuralError,
    Tensor,
    Term,
    check_cap,
    decomposition_from_obj,
    tensor_from_terms,
)

STANDARD = "standard"
TRANSPOSED = "transposed"
VARIANTS = (STANDARD, TRANSPOSED)


@dataclass(frozen=True)
class MatMulSpec:
    n: int
    variant: str = STANDARD

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}")

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n**2,) * 3


def matmul_support(n: int, variant: str = STANDARD):
    """Yield the n^3 unit coordinates of the matrix multiplication tensor."""
    for i in range(n):
        for j in range(n):
            for k in range(n):
                third = k * n + i if variant == STANDARD else i * n + k
                yield (i * n + j, j * n + k, third)


def matmul_tensor(n: int | MatMulSpec, variant: str = STANDARD) -> Tensor:
    spec = n if isinstance(n, MatMulSpec) else MatMulSpec(n, variant)
    check_cap(spec.shape)
    return Tensor.from_entries(spec.shape, {idx: 1 for idx in matmul_support(spec.n, spec.variant)})


def unit_tensor(r: int) -> Tensor:
    if r < 1:
        raise ValueError("r must be positive")
    return Tensor.from_entries((r, r, r), {(i, i, i): 1 for i in range(r)})


def unit_decomposition(r: int) -> Decomposition:
    e = [[Fraction(int(i == j)) for j in range(r)] for i in range(r)]
    return Decomposition.build((r, r, r), [(e[i], e[i], e[i]) for i in range(r)])


def standard_decomposition(n: int, variant: str = STANDARD) -> Decomposition:
    """The n^3-term decomposition behind the schoolbook algorithm."""
    size = n * n

    def unit(p):
        return tuple(Fraction(int(p == q)) for q in range(size))

    return Decomposition.build((size,) * 3, [tuple(unit(p) for p in idx) for idx in matmul_support(n, variant)])


def transpose_third_leg(d: Decomposition) -> Decomposition:
    """Switch a decomposition between the two variants (E_{k,i} <-> E_{i,k} on leg 3)."""
    n = math.isqrt(d.shape[2])
    if n * n != d.shape[2]:
        raise StructuralError("third leg is not of size n^2")
    perm = [(p % n) * n + p // n for p in range(n * n)]
    ident = list(range(d.shape[0])), list(range(d.shape[1]))
    return relabel_decomposition(d, [ident[0], ident[1], perm])


@dataclass(frozen=True)
class VerificationResult:
    valid: bool
    index: tuple | None = None
    expected: object = None
    got: object = None

    def __bool__(self):
        return self.valid


def verify_decomposition(t: Tensor, d: Decomposition) -> VerificationResult:
    """Exact check that the decomposition sums to t; reports the first bad index."""
    if tuple(d.shape) != t.shape:
        raise StructuralError(f"decomposition shape {d.shape} != tensor shape {t.shape}")
    total = tensor_from_terms(t.shape, d)
    # compare values, not kinds: a cyclotomic certificate may sum to a rational tensor
    for idx, want in np.ndenumerate(t.data):
        if total.data[idx] != want:
            return VerificationResult(False, idx, want, total.data[idx])
    return VerificationResult(True)


# --------------------------------------------------------------------------
# Kronecker products and the matrix identification


def kron_identification(n: int, m: int) -> list[int]:
    """Where coordinate p of a Kronecker-paired leg lands in the nm x nm basis.

    The pair (E_{i1,j1}, E_{i2,j2}) sits at (i1 n + j1) m^2 + (i2 m + j2) after
    Kronecker pairing, and is identified with E_{i1 m + i2, j1 m + j2}.
    """
    out = [0] * (n * n * m * m)
    for i1 in range(n):
        for j1 in range(n):
            for i2 in range(m):
                for j2 in range(m):
                    src = (i1 * n + j1) * m * m + (i2 * m + j2)
                    out[src] = (i1 * m + i2) * (n * m) + (j1 * m + j2)
    return out


def identify_kronecker(t: Tensor, n: int, m: int) -> Tensor:
    """Apply the matrix identification on all three legs of a Kronecker product."""
    perm = kron_identification(n, m)
    return permute_legs(t, [perm] * t.order)


def identification_maps(n: int, m: int) -> list[list[list[int]]]:
    """The same identification as restriction matrices (permutation matrices)."""
    perm = kron_identification(n, m)
    size = len(perm)
    mat = [[int(perm[q] == p) for q in range(size)] for p in range(size)]
    return [mat, mat, mat]


def identify_kronecker_decomposition(d: Decomposition, n: int, m: int) -> Decomposition:
    perm = kron_identification(n, m)
    return relabel_decomposition(d, [perm] * len(d.shape))


# --------------------------------------------------------------------------
# shipped decompositions


def load_builtin(name: str = "strassen7") -> Decomposition:
    text = resources.files("tensorforge").joinpath("data", f"{name}.json").read_text()
    return decomposition_from_obj(json.loads(text))


def builtin_variant(name: str = "strassen7") -> str:
    text = resources.files("tensorforge").joinpath("data", f"{name}.json").read_text()
    return json.loads(text).get("variant", STANDARD)


def detect_variant(d: Decomposition) -> str | None:
    """Which matrix multiplication tensor a decomposition realizes, if any."""
    n = math.isqrt(d.shape[0])
    if d.shape != (n * n,) * 3:
        return None
    for variant in VARIANTS:
        if verify_decomposition(matmul_tensor(n, variant), d):
            return variant
    return None


# --------------------------------------------------------------------------
# exponent bounds


@dataclass(frozen=True)
class ExponentBound:
    n: int
    r: int
    kind: str = "rank"
    source: str = "builtin"

    @property
    def bound(self) -> float:
        k = _exact_log(self.n, self.r)
        if k is not None:
            return float(k)
        return math.log(self.r) / math.log(self.n)

    @property
    def suspicious(self) -> bool:
        return self.r < self.n**2

    def display(self) -> str:
        return f"{self.bound:.12f}"


def _exact_log(n: int, r: int) -> int | None:
    k, p = 0, 1
    while p < r:
        p *= n
        k += 1
    return k if p == r else None


def omega_bound(n: int, r: int, kind: str = "rank", source: str = "builtin") -> ExponentBound:
    """omega <= log_n r from a rank or border rank bound r for n x n multiplication."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if r < 1:
        raise ValueError("r must be positive")
    if kind not in ("rank", "border-rank"):
        raise ValueError("kind must be 'rank' or 'border-rank'")
    eb = ExponentBound(n, r, kind, source)
    if eb.suspicious:
        warnings.warn(f"r = {r} < n^2 = {n * n}: no {kind} bound can be that small", stacklevel=2)
    return eb


# --------------------------------------------------------------------------
# restriction of the trace-cube tensor back to matrix multiplication


def corner_projection(n: int) -> list[list[int]]:
    """Map n x n matrices to their upper-left (n-1) x (n-1) corner."""
    m = n - 1
    rows = []
    for i in range(m):
        for j in range(m):
            row = [0] * (n * n)
            row[i * n + j] = 1
            rows.append(row)
    return rows


def block_projection(n: int, row_block: int, col_block: int) -> list[list[int]]:
    """3n x 3n matrices -> n x n: read off block (row_block, col_block), 0-based."""
    big = 3 * n
    rows = []
    for i in range(n):
        for j in range(n):
            row = [0] * (big * big)
            row[(row_block * n + i) * big + (col_block * n + j)] = 1
            rows.append(row)
    return rows


CHILO_BLOCKS = ((0, 2), (2, 1), (1, 0))


def chilo_restriction(n: int, blocks: Sequence[tuple[int, int]] = CHILO_BLOCKS) -> Tensor:
    """Restrict the symmetrized M<3n> with one block projection per leg.

    With X = [[0, 0, A], [C, 0, 0], [0, B, 0]] one has trace(X^3) = 3 trace(ABC),
    and the default blocks read off A, B and C.
    """
    f = symmetrize(matmul_tensor(3 * n))
    maps = [block_projection(n, *b) for b in blocks]
    return apply_restriction(maps, f)


def chilo_restriction_check(n: int, blocks: Sequence[tuple[int, int]] = CHILO_BLOCKS) -> bool:
    """True iff the restriction equals 3 M<n> in cubic-form coefficients.

    The symmetrization averages over the 6 leg orders, so as a tensor the
    restriction is 3/3! M<n>; multiplying by 3! gives the coefficient the
    monomial carries in trace(X^3), which is the normalization compared here.
    """
    got = chilo_restriction(n, blocks).scale(math.factorial(3))
    return got == matmul_tensor(n).scale(3)
