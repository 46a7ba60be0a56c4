"""Degeneration witnesses: eps-polynomial decompositions that approximate a tensor.

A witness of degree q and length r is a list of r triples of vectors with
entries in Q[eps] whose sum is eps^q * target + O(eps^(q+1)).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import EpsPoly, ParseError, fmt_rational, to_rational
from .multilinear import kron_vectors, kronecker
from .tensor import (
    Decomposition,
    StructuralError,
    Tensor,
    Term,
    load_json,
    outer,
    tensor_from_obj,
    tensor_to_obj,
)

# expansions never go past this eps-degree; raise it explicitly if a witness needs more
MAX_EPS_DEGREE = 64


@dataclass(frozen=True)
class DegenerationWitness:
    target: Tensor
    q: int
    terms: tuple  # of 3-tuples of EpsPoly vectors

    def __post_init__(self):
        if self.target.order != 3:
            raise StructuralError("witnesses are for order-3 tensors")
        if self.target.kind != "rational":
            raise TypeError("witness targets are rational tensors")
        if self.q < 0:
            raise ValueError("q must be non-negative")
        terms = []
        for n, term in enumerate(self.terms):
            if len(term) != 3:
                raise StructuralError(f"term {n} has {len(term)} vectors")
            vecs = []
            for k, (v, a) in enumerate(zip(term, self.target.shape)):
                if len(v) != a:
                    raise StructuralError(f"term {n}, leg {k + 1}: length {len(v)} != {a}")
                vecs.append(tuple(x if isinstance(x, EpsPoly) else EpsPoly([to_rational(x)]) for x in v))
            terms.append(tuple(vecs))
        object.__setattr__(self, "terms", tuple(terms))

    @property
    def r(self) -> int:
        return len(self.terms)

    @property
    def shape(self) -> tuple:
        return self.target.shape

    def max_degree(self) -> int:
        """Upper bound on the eps-degree of the expanded sum."""
        best = 0
        for term in self.terms:
            best = max(best, sum(max((x.degree for x in v), default=0) for v in term))
        return best


def _layers(v: Sequence[EpsPoly]) -> list[list[Fraction]]:
    """Split an eps-vector into its coefficient vectors v^(0), v^(1), ..."""
    top = max((x.degree for x in v), default=-1)
    return [[x.coeff(k) for x in v] for k in range(top + 1)]


def expand(w: DegenerationWitness, up_to: int | None = None) -> list[np.ndarray]:
    """Coefficient tensors of eps^0, ..., eps^up_to of the witness sum."""
    top = w.max_degree() if up_to is None else up_to
    if top > MAX_EPS_DEGREE:
        raise ValueError(f"eps-degree {top} exceeds MAX_EPS_DEGREE = {MAX_EPS_DEGREE}")
    coeffs = [np.full(w.shape, Fraction(0), dtype=object) for _ in range(top + 1)]
    for term in w.terms:
        layers = [_layers(v) for v in term]
        for a, u in enumerate(layers[0]):
            for b, v in enumerate(layers[1]):
                if a + b > top:
                    break
                for c, x in enumerate(layers[2]):
                    if a + b + c > top:
                        break
                    coeffs[a + b + c] = coeffs[a + b + c] + outer([u, v, x])
    return coeffs


@dataclass(frozen=True)
class DegenerationCheck:
    valid: bool
    degree: int | None = None
    index: tuple | None = None

    def __bool__(self):
        return self.valid


def verify_degeneration(w: DegenerationWitness) -> DegenerationCheck:
    coeffs = expand(w, up_to=w.q)
    for deg in range(w.q):
        for idx, x in np.ndenumerate(coeffs[deg]):
            if x != 0:
                return DegenerationCheck(False, deg, idx)
    for idx, x in np.ndenumerate(coeffs[w.q]):
        if x != w.target.data[idx]:
            return DegenerationCheck(False, w.q, idx)
    return DegenerationCheck(True)


def extraction_bound(w: DegenerationWitness) -> int:
    """Term count before pruning: r (q+2)(q+1)/2, itself at most (q+1)^2 r."""
    return w.r * (w.q + 2) * (w.q + 1) // 2


def degeneration_to_rank(w: DegenerationWitness) -> Decomposition:
    """Exact decomposition of the target read off the eps^q coefficient."""
    check = verify_degeneration(w)
    if not check:
        raise ValueError(f"invalid witness: degree {check.degree}, index {check.index}")
    q = w.q
    terms = []
    for term in w.terms:
        layers = [_layers(v) for v in term]
        for a in range(q + 1):
            for b in range(q + 1 - a):
                c = q - a - b
                if a < len(layers[0]) and b < len(layers[1]) and c < len(layers[2]):
                    vecs = (layers[0][a], layers[1][b], layers[2][c])
                    if all(any(x != 0 for x in v) for v in vecs):
                        terms.append(Term(Fraction(1), tuple(tuple(v) for v in vecs)))
    return Decomposition(w.shape, tuple(terms))


def lift_decomposition(d: Decomposition, target: Tensor) -> DegenerationWitness:
    """A rank decomposition as a degree-0 witness (coefficients folded into leg 1)."""
    if len(d.shape) != 3:
        raise StructuralError("witnesses are for order-3 tensors")
    terms = []
    for t in d.terms:
        first = tuple(EpsPoly([t.coeff * x]) for x in t.vectors[0])
        rest = tuple(tuple(EpsPoly([x]) for x in v) for v in t.vectors[1:])
        terms.append((first,) + rest)
    return DegenerationWitness(target, 0, tuple(terms))


def kronecker_degeneration(w1: DegenerationWitness, w2: DegenerationWitness) -> DegenerationWitness:
    """Witness for the Kronecker product: degrees add, lengths multiply."""
    terms = tuple(
        tuple(kron_vectors(u, v) for u, v in zip(s, t)) for s in w1.terms for t in w2.terms
    )
    return DegenerationWitness(kronecker(w1.target, w2.target), w1.q + w2.q, terms)


def w_state() -> Tensor:
    return Tensor.from_entries((2, 2, 2), {(0, 0, 1): 1, (0, 1, 0): 1, (1, 0, 0): 1})


def w_state_witness() -> DegenerationWitness:
    """(e0 + eps e1)^3 - e0^3 = eps w + O(eps^2)."""
    e0_eps = (EpsPoly([1]), EpsPoly([0, 1]))
    e0 = (EpsPoly([1]), EpsPoly())
    minus_e0 = (EpsPoly([-1]), EpsPoly())
    return DegenerationWitness(w_state(), 1, ((e0_eps, e0_eps, e0_eps), (minus_e0, e0, e0)))


# --------------------------------------------------------------------------
# JSON


def witness_to_obj(w: DegenerationWitness) -> dict:
    return {
        "q": w.q,
        "shape": list(w.shape),
        "target": tensor_to_obj(w.target),
        "terms": [
            {"vectors": [[[fmt_rational(c) for c in x.coeffs] for x in v] for v in term]}
            for term in w.terms
        ],
    }


def witness_from_obj(obj, target: Tensor | None = None, q_shift: int = 0) -> DegenerationWitness:
    """Read a witness; ``q_shift`` is added to the stored q for files using a shifted convention."""
    if not isinstance(obj, dict):
        raise ParseError("witness must be a JSON object", "$")
    q = obj.get("q")
    if not isinstance(q, int) or isinstance(q, bool):
        raise ParseError("q must be an integer", "q")
    shape = obj.get("shape")
    if target is None:
        if "target" not in obj:
            raise ParseError("no target tensor: embed 'target' or pass one", "target")
        target = tensor_from_obj(obj["target"], "target")
    if shape is not None and list(shape) != list(target.shape):
        raise ParseError(f"shape {shape} does not match target {list(target.shape)}", "shape")
    terms = obj.get("terms")
    if not isinstance(terms, list):
        raise ParseError("terms must be a list", "terms")
    parsed = []
    for n, term in enumerate(terms):
        loc = f"terms[{n}]"
        vecs = term.get("vectors") if isinstance(term, dict) else None
        if not isinstance(vecs, list) or len(vecs) != 3:
            raise ParseError("term needs three vectors", loc)
        triple = []
        for k, v in enumerate(vecs):
            if not isinstance(v, list) or len(v) != target.shape[k]:
                raise ParseError(f"vector length must be {target.shape[k]}", f"{loc}.vectors[{k}]")
            entries = []
            for i, x in enumerate(v):
                if not isinstance(x, list):
                    raise ParseError("entry must be a coefficient list", f"{loc}.vectors[{k}][{i}]")
                entries.append(EpsPoly([to_rational(c) for c in x]))
            triple.append(tuple(entries))
        parsed.append(tuple(triple))
    q_total = q + q_shift
    if q_total < 0:
        raise ParseError(f"q + shift = {q_total} is negative", "q")
    return DegenerationWitness(target, q_total, tuple(parsed))


def parse_witness(text, target: Tensor | None = None, q_shift: int = 0) -> DegenerationWitness:
    return witness_from_obj(load_json(text), target, q_shift)


def serialize_witness(w: DegenerationWitness) -> bytes:
    return json.dumps(witness_to_obj(w), indent=1).encode("utf-8")
