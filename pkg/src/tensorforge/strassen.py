"""Recursive matrix multiplication driven by a verified decomposition.

Counting convention: ``multiplications`` counts products of two entries that
both depend on the inputs; ``additions`` counts every scalar + or - executed,
including inside the linear combinations of blocks; ``scalings`` counts
multiplications by a constant other than +-1.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .matmul import STANDARD, TRANSPOSED, matmul_tensor, standard_decomposition, verify_decomposition
from .tensor import Decomposition, StructuralError

FLOAT_CUTOFF = 64
EXACT_CUTOFF = 1


@dataclass(frozen=True)
class EngineConfig:
    """Run settings; ``cutoff=None`` picks the mode's default."""

    exact: bool = False
    cutoff: int | None = None
    seed: int = 0

    @property
    def effective_cutoff(self) -> int:
        if self.cutoff is not None:
            return self.cutoff
        return EXACT_CUTOFF if self.exact else FLOAT_CUTOFF


class DecompositionRefused(ValueError):
    def __init__(self, message: str, index=None):
        self.index = index
        super().__init__(message)


@dataclass(frozen=True)
class BilinearAlgorithm:
    """Term tables: entry ((i, j), c) of a_terms[rho] means c * A[i, j] enters product rho."""

    n: int
    a_terms: tuple
    b_terms: tuple
    c_terms: tuple  # ((i, k), c): product rho contributes c * P_rho to C[i, k]
    name: str = ""

    @property
    def rank(self) -> int:
        return len(self.a_terms)


def compile_algorithm(d: Decomposition, variant: str, name: str = "") -> BilinearAlgorithm:
    """Check d against the chosen matmul tensor, then build its term tables."""
    n = math.isqrt(d.shape[0])
    if d.shape != (n * n,) * 3 or n < 1:
        raise StructuralError(f"shape {d.shape} is not (n^2, n^2, n^2)")
    check = verify_decomposition(matmul_tensor(n, variant), d)
    if not check:
        raise DecompositionRefused(f"decomposition does not match the {variant} tensor at {check.index}", check.index)

    def sparse(v, third=False):
        out = []
        for p, x in enumerate(v):
            if x != 0:
                r, s = divmod(p, n)
                # standard variant: coordinate (k, i) of leg 3 feeds C[i, k]
                pos = (s, r) if third and variant == STANDARD else (r, s)
                out.append((pos, x))
        return tuple(out)

    a, b, c = [], [], []
    for term in d.terms:
        u, v, w = term.vectors
        a.append(sparse([term.coeff * x for x in u]))
        b.append(sparse(v))
        c.append(sparse(w, third=True))
    return BilinearAlgorithm(n, tuple(a), tuple(b), tuple(c), name)


def naive_algorithm(n: int = 2) -> BilinearAlgorithm:
    return compile_algorithm(standard_decomposition(n), STANDARD, f"naive{n}")


def replay(alg: BilinearAlgorithm) -> dict:
    """Bilinear form each C[i, k] receives: {(i, k): {((a_pos), (b_pos)): coeff}}."""
    out = {}
    for a, b, c in zip(alg.a_terms, alg.b_terms, alg.c_terms):
        for cpos, cc in c:
            form = out.setdefault(cpos, {})
            for apos, ac in a:
                for bpos, bc in b:
                    key = (apos, bpos)
                    form[key] = form.get(key, 0) + cc * ac * bc
    return {pos: {k: v for k, v in form.items() if v != 0} for pos, form in out.items()}


def replays_matmul(alg: BilinearAlgorithm) -> bool:
    n = alg.n
    forms = replay(alg)
    for i in range(n):
        for k in range(n):
            want = {((i, j), (j, k)): 1 for j in range(n)}
            if forms.get((i, k), {}) != want:
                return False
    return True


_ROMAN = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII"]


def output_formulas(alg: BilinearAlgorithm) -> dict[str, str]:
    """Human-readable assembly, e.g. {'c11': 'I + IV - V + VII'}, 1-based names."""
    names = _ROMAN if alg.rank <= len(_ROMAN) else [f"P{k + 1}" for k in range(alg.rank)]
    out = {}
    for i in range(alg.n):
        for k in range(alg.n):
            parts = []
            for rho, c in enumerate(alg.c_terms):
                for pos, x in c:
                    if pos == (i, k):
                        sign = "-" if x < 0 else "+"
                        mag = "" if abs(x) == 1 else f"{abs(x)}*"
                        parts.append((sign, mag + names[rho]))
            text = " ".join(f"{s} {p}" for s, p in parts).lstrip("+ ").strip()
            if parts and parts[0][0] == "-":
                text = "-" + text.lstrip("- ")
            out[f"c{i + 1}{k + 1}"] = text
    return out


@dataclass
class OpCount:
    multiplications: int = 0
    additions: int = 0
    scalings: int = 0
    depth: int = 0

    def __iadd__(self, other: "OpCount"):
        self.multiplications += other.multiplications
        self.additions += other.additions
        self.scalings += other.scalings
        self.depth = max(self.depth, other.depth)
        return self


def _combine(blocks, terms, count: OpCount, size: int):
    """sum c * block over a sparse term list, counting scalar work."""
    acc = None
    for pos, c in terms:
        blk = blocks[pos]
        if c == 1:
            val = blk
        elif c == -1:
            val = -blk
        else:
            val = blk * c
            count.scalings += size
        if acc is None:
            acc = val
        else:
            acc = acc + val
            count.additions += size
    if acc is None:
        acc = next(iter(blocks.values())) * 0
    return acc


def _naive(A, B, count: OpCount):
    s = A.shape[0]
    count.multiplications += s**3
    count.additions += s * s * (s - 1)
    return A.dot(B)


def _recurse(alg: BilinearAlgorithm, A, B, cutoff: int, count: OpCount, level: int):
    s = A.shape[0]
    count.depth = max(count.depth, level)
    if s <= cutoff or s < alg.n:
        return _naive(A, B, count)
    n = alg.n
    h = s // n
    if h == 1:
        # blocks are scalars: one multiplication per term, no array overhead
        a = {(i, j): A[i, j] for i in range(n) for j in range(n)}
        b = {(i, j): B[i, j] for i in range(n) for j in range(n)}
        C = np.empty((n, n), dtype=A.dtype)
        acc = {}
        for at, bt, ct in zip(alg.a_terms, alg.b_terms, alg.c_terms):
            p = _combine(a, at, count, 1) * _combine(b, bt, count, 1)
            count.multiplications += 1
            for pos, c in ct:
                term = p if c == 1 else (-p if c == -1 else p * c)
                if c not in (1, -1):
                    count.scalings += 1
                if pos in acc:
                    acc[pos] = acc[pos] + term
                    count.additions += 1
                else:
                    acc[pos] = term
        count.depth = max(count.depth, level + 1)
        zero = A[0, 0] * 0
        for i in range(n):
            for k in range(n):
                C[i, k] = acc.get((i, k), zero)
        return C
    a = {(i, j): A[i * h:(i + 1) * h, j * h:(j + 1) * h] for i in range(n) for j in range(n)}
    b = {(i, j): B[i * h:(i + 1) * h, j * h:(j + 1) * h] for i in range(n) for j in range(n)}
    C = np.empty((s, s), dtype=A.dtype)
    filled = set()
    area = h * h
    for at, bt, ct in zip(alg.a_terms, alg.b_terms, alg.c_terms):
        P = _recurse(alg, _combine(a, at, count, area), _combine(b, bt, count, area), cutoff, count, level + 1)
        for (i, k), c in ct:
            blk = C[i * h:(i + 1) * h, k * h:(k + 1) * h]
            term = P if c == 1 else (-P if c == -1 else P * c)
            if c not in (1, -1):
                count.scalings += area
            if (i, k) in filled:
                blk[...] = blk + term
                count.additions += area
            else:
                blk[...] = term
                filled.add((i, k))
    if len(filled) < n * n:
        zero = A[0, 0] * 0
        for i in range(n):
            for k in range(n):
                if (i, k) not in filled:
                    C[i * h:(i + 1) * h, k * h:(k + 1) * h] = zero
    return C


def padded_size(size: int, base: int) -> int:
    p = 1
    while p < size:
        p *= base
    return p


def _as_matrix(M, exact: bool):
    if exact:
        arr = np.array(M, dtype=object)
        return np.vectorize(Fraction, otypes=[object])(arr) if arr.size else arr
    return np.array(M, dtype=float)


def multiply(alg: BilinearAlgorithm, A, B, cutoff: int = EXACT_CUTOFF, exact: bool = True):
    """A @ B by recursive application of ``alg``; returns (C, OpCount).

    Sizes that are not a power of the base are zero-padded up, and blocks of
    size at most ``cutoff`` are multiplied naively.
    """
    A = _as_matrix(A, exact)
    B = _as_matrix(B, exact)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape != B.shape:
        raise StructuralError(f"need equal square matrices, got {A.shape} and {B.shape}")
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    size = A.shape[0]
    full = padded_size(size, alg.n)
    if full != size:
        pad = [(0, full - size), (0, full - size)]
        zero = Fraction(0) if exact else 0.0
        A = np.pad(A, pad, constant_values=zero)
        B = np.pad(B, pad, constant_values=zero)
    count = OpCount()
    C = _recurse(alg, A, B, cutoff, count, 0)
    return C[:size, :size], count


def naive_multiply(A, B):
    A = _as_matrix(A, True)
    B = _as_matrix(B, True)
    return A.dot(B)


def random_rational_matrix(size: int, rng: random.Random, bound: int = 9) -> np.ndarray:
    M = np.empty((size, size), dtype=object)
    for i in range(size):
        for j in range(size):
            M[i, j] = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
    return M


@dataclass
class BenchmarkRow:
    size: int
    seconds: float
    ops: OpCount
    correct: bool


@dataclass
class BenchmarkReport:
    algorithm: str
    cutoff: int
    exact: bool
    rows: list = field(default_factory=list)

    @property
    def slope(self) -> float | None:
        """Least-squares slope of log(multiplications) against log(size)."""
        pts = [(math.log(r.size), math.log(r.ops.multiplications)) for r in self.rows if r.size > 1]
        if len(pts) < 2:
            return None
        mx = sum(x for x, _ in pts) / len(pts)
        my = sum(y for _, y in pts) / len(pts)
        sxx = sum((x - mx) ** 2 for x, _ in pts)
        sxy = sum((x - mx) * (y - my) for x, y in pts)
        return sxy / sxx


def benchmark(alg: BilinearAlgorithm, sizes: Sequence[int], cutoff: int = EXACT_CUTOFF,
              exact: bool = True, seed: int = 0) -> BenchmarkReport:
    """Multiply seeded random matrices at each size and check against the naive product."""
    rng = random.Random(seed)
    report = BenchmarkReport(alg.name, cutoff, exact)
    for size in sizes:
        A = random_rational_matrix(size, rng)
        B = random_rational_matrix(size, rng)
        if not exact:
            A, B = A.astype(float), B.astype(float)
        t0 = time.perf_counter()
        C, ops = multiply(alg, A, B, cutoff=cutoff, exact=exact)
        elapsed = time.perf_counter() - t0
        if exact:
            ok = bool((C == naive_multiply(A, B)).all())
        else:
            ok = bool(np.allclose(C, A @ B))
        report.rows.append(BenchmarkRow(size, elapsed, ops, ok))
    return report


def run_config(alg: BilinearAlgorithm, sizes: Sequence[int], config: EngineConfig) -> BenchmarkReport:
    return benchmark(alg, sizes, config.effective_cutoff, config.exact, config.seed)
