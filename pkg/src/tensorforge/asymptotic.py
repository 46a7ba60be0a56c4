"""Asymptotic rank estimates and the conciseness / tightness certificates."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .multilinear import multilinear_rank
from .tensor import StructuralError, Tensor


# --------------------------------------------------------------------------
# Fekete estimate


def _integer_root(r: int, k: int) -> int | None:
    x = round(r ** (1.0 / k))
    for y in (x - 1, x, x + 1):
        if y >= 0 and y**k == r:
            return y
    return None


@dataclass(frozen=True)
class FeketeEstimate:
    samples: tuple  # ((k, r_k), ...) sorted by k
    quotients: tuple  # ((k, log(r_k) / k), ...)
    best_k: int
    best_r: int
    violations: tuple = ()  # (n, m) with r_{n+m} > r_n r_m

    @property
    def bound(self) -> float:
        """r_k^(1/k) at the best k; an upper bound on the asymptotic rank."""
        root = _integer_root(self.best_r, self.best_k)
        return float(root) if root is not None else self.best_r ** (1.0 / self.best_k)

    @property
    def exact(self) -> str:
        root = _integer_root(self.best_r, self.best_k)
        return str(root) if root is not None else f"{self.best_r}^(1/{self.best_k})"

    @property
    def submultiplicative(self) -> bool:
        return not self.violations


def asymptotic_rank_bound(samples: Sequence[tuple[int, int]]) -> FeketeEstimate:
    """Upper bound min_k r_k^(1/k) from rank upper bounds r_k of the k-th Kronecker power."""
    data = {}
    for k, r in samples:
        k, r = int(k), int(r)
        if k < 1:
            raise ValueError(f"power k = {k} must be positive")
        if r < 1:
            raise ValueError(f"rank bound r_{k} = {r} must be at least 1")
        data[k] = min(r, data.get(k, r))
    if not data:
        raise ValueError("no samples")
    ks = sorted(data)
    # r_a^(1/a) <= r_b^(1/b)  iff  r_a^b <= r_b^a: compare exactly
    best = ks[0]
    for k in ks[1:]:
        if data[k] ** best < data[best] ** k:
            best = k
    violations = tuple(
        (n, m) for n in ks for m in ks if n <= m and n + m in data and data[n + m] > data[n] * data[m]
    )
    quotients = tuple((k, math.log(data[k]) / k) for k in ks)
    return FeketeEstimate(tuple((k, data[k]) for k in ks), quotients, best, data[best], violations)


# --------------------------------------------------------------------------
# conciseness and tightness


def is_concise(t: Tensor) -> bool:
    return multilinear_rank(t) == t.shape


@dataclass(frozen=True)
class TightnessWitness:
    alpha: tuple
    beta: tuple
    gamma: tuple

    def legs(self) -> tuple:
        return (self.alpha, self.beta, self.gamma)


def verify_tight(t: Tensor, w: TightnessWitness) -> bool:
    """Labels injective on each leg and summing to zero on every support triple."""
    if t.order != 3:
        raise StructuralError("tightness is checked for order-3 tensors")
    for labels, a in zip(w.legs(), t.shape):
        if len(labels) != a:
            raise StructuralError(f"labeling of length {len(labels)} for a leg of size {a}")
    if any(len(set(labels)) != len(labels) for labels in w.legs()):
        return False
    return all(w.alpha[i] + w.beta[j] + w.gamma[k] == 0 for i, j, k in t.support())


def matmul_tight_witness(n: int) -> TightnessWitness:
    """alpha(i,j) = i + jn, beta(j,k) = -jn + kn^2, gamma(k,i) = -kn^2 - i, indices from 1.

    Each leg stores E_{p,q} at (p-1)*n + (q-1); leg 1 holds E_{i,j}, leg 2
    holds E_{j,k} and leg 3 holds E_{k,i}.
    """
    alpha, beta, gamma = [0] * n * n, [0] * n * n, [0] * n * n
    for p in range(1, n + 1):
        for q in range(1, n + 1):
            pos = (p - 1) * n + (q - 1)
            alpha[pos] = p + q * n  # (i, j) = (p, q)
            beta[pos] = -p * n + q * n * n  # (j, k) = (p, q)
            gamma[pos] = -p * n * n - q  # (k, i) = (p, q)
    return TightnessWitness(tuple(alpha), tuple(beta), tuple(gamma))


def _tight_system(t: Tensor) -> tuple[list, list]:
    a, b, c = t.shape
    rows = []
    for i, j, k in t.support():
        row = [0] * (a + b + c)
        row[i] = 1
        row[a + j] = 1
        row[a + b + k] = 1
        rows.append(row)
    basis = linalg.nullspace(rows, ncols=a + b + c) if rows else linalg.nullspace([], ncols=a + b + c)
    return rows, basis


def forced_equal_pairs(t: Tensor) -> list[tuple[int, int, int]]:
    """(leg, p, q) with label_p = label_q on the whole solution space."""
    _, basis = _tight_system(t)
    offsets = [0, t.shape[0], t.shape[0] + t.shape[1]]
    out = []
    for leg, (off, size) in enumerate(zip(offsets, t.shape), start=1):
        for p, q in itertools.combinations(range(size), 2):
            if all(v[off + p] == v[off + q] for v in basis):
                out.append((leg, p, q))
    return out


def find_tight(t: Tensor, seed: int = 0, attempts: int = 200) -> TightnessWitness | None:
    """An integer tightness witness in the given basis, or None if some labels are forced equal."""
    if t.order != 3:
        raise StructuralError("tightness is checked for order-3 tensors")
    if forced_equal_pairs(t):
        return None
    _, basis = _tight_system(t)
    a, b, _ = t.shape
    rng = random.Random(seed)
    spread = 3
    for _ in range(attempts):
        weights = [rng.randint(-spread, spread) for _ in basis]
        vec = [sum((w * v[p] for w, v in zip(weights, basis)), Fraction(0)) for p in range(len(basis[0]))]
        den = math.lcm(*(x.denominator for x in vec)) if vec else 1
        ints = [int(x * den) for x in vec]
        w = TightnessWitness(tuple(ints[:a]), tuple(ints[a:a + b]), tuple(ints[a + b:]))
        if verify_tight(t, w):
            return w
        spread *= 2
    return None  # pragma: no cover - collisions lie on proper subspaces


def brute_force_tight(t: Tensor, bound: int) -> TightnessWitness | None:
    """Exhaustive search with labels in [-bound, bound]; alpha_0 = beta_0 = 0 by translation."""
    a, b, c = t.shape
    support = t.support()
    span = range(-bound, bound + 1)
    for alpha_rest in itertools.permutations([x for x in span if x != 0], a - 1):
        alpha = (0,) + alpha_rest
        for beta_rest in itertools.permutations([x for x in span if x != 0], b - 1):
            beta = (0,) + beta_rest
            gamma: list = [None] * c
            ok = True
            for i, j, k in support:
                g = -alpha[i] - beta[j]
                if gamma[k] is None:
                    gamma[k] = g
                elif gamma[k] != g:
                    ok = False
                    break
            if not ok:
                continue
            fixed = [g for g in gamma if g is not None]
            if len(set(fixed)) != len(fixed):
                continue
            free = iter(x for x in itertools.count(10 * bound + 1) if x not in fixed)
            gamma = [g if g is not None else next(free) for g in gamma]
            return TightnessWitness(alpha, beta, tuple(gamma))
    return None
