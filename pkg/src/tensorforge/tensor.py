"""Dense exact tensors, decompositions, and their JSON formats."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .exact import Cyclotomic, EpsPoly, ParseError, fmt_rational, to_rational

DEFAULT_DENSE_CAP = 10**6


class StructuralError(ValueError):
    """Shapes or orders that do not fit together."""


class CapExceeded(ValueError):
    """A dense tensor would exceed the configured size cap."""


def dense_cap() -> int:
    raw = os.environ.get("TENSORFORGE_DENSE_CAP")
    return int(raw) if raw else DEFAULT_DENSE_CAP


def check_cap(shape: Sequence[int]) -> None:
    size = math.prod(shape)
    cap = dense_cap()
    if size > cap:
        raise CapExceeded(f"dense size {size} exceeds cap {cap} (set TENSORFORGE_DENSE_CAP)")


def scalar_kind_of(x) -> str:
    if isinstance(x, Cyclotomic):
        return f"cyclotomic:{x.m}"
    if isinstance(x, EpsPoly):
        return "epspoly"
    return "rational"


def zero_of(kind: str):
    if kind == "rational":
        return Fraction(0)
    if kind == "epspoly":
        return EpsPoly()
    if kind.startswith("cyclotomic:"):
        return Cyclotomic(int(kind.split(":")[1]), [])
    raise ValueError(f"unknown scalar kind {kind!r}")


def _coerce(x, kind: str):
    if kind == "rational":
        if isinstance(x, (Cyclotomic, EpsPoly)):
            raise TypeError(f"{type(x).__name__} entry in a rational tensor")
        return to_rational(x)
    if kind == "epspoly":
        if isinstance(x, EpsPoly):
            return x
        if isinstance(x, Cyclotomic):
            raise TypeError("cyclotomic entry in an epspoly tensor")
        return EpsPoly([to_rational(x)])
    m = int(kind.split(":")[1])
    if isinstance(x, Cyclotomic):
        if x.m != m:
            raise TypeError(f"Q(zeta_{x.m}) entry in a {kind} tensor")
        return x
    if isinstance(x, EpsPoly):
        raise TypeError("epspoly entry in a cyclotomic tensor")
    return Cyclotomic(m, [to_rational(x)])


class Tensor:
    """Immutable dense tensor over one scalar kind.

    ``data`` is a read-only numpy object array; index it like any ndarray.
    """

    __slots__ = ("data", "kind")

    def __init__(self, data, kind: str | None = None):
        arr = np.array(data, dtype=object)
        if arr.ndim == 0:
            raise StructuralError("a tensor needs at least one leg")
        if any(s < 1 for s in arr.shape):
            raise StructuralError(f"shape entries must be positive, got {arr.shape}")
        check_cap(arr.shape)
        if kind is None:
            kinds = {scalar_kind_of(x) for x in arr.flat}
            if len(kinds) > 1:
                raise TypeError(f"mixed scalar kinds {sorted(kinds)}; promote explicitly")
            kind = kinds.pop() if kinds else "rational"
        flat = [_coerce(x, kind) for x in arr.flat]
        out = np.empty(arr.shape, dtype=object)
        out.flat[:] = flat
        out.setflags(write=False)
        self.data = out
        self.kind = kind

    @classmethod
    def zeros(cls, shape: Sequence[int], kind: str = "rational") -> "Tensor":
        shape = tuple(int(s) for s in shape)
        check_cap(shape)
        arr = np.empty(shape, dtype=object)
        z = zero_of(kind)
        arr.flat[:] = [z] * math.prod(shape)
        return cls(arr, kind)

    @classmethod
    def from_entries(cls, shape: Sequence[int], entries: dict, kind: str = "rational") -> "Tensor":
        shape = tuple(int(s) for s in shape)
        check_cap(shape)
        arr = np.empty(shape, dtype=object)
        arr.flat[:] = [zero_of(kind)] * math.prod(shape)
        for idx, v in entries.items():
            arr[tuple(idx)] = _coerce(v, kind)
        return cls(arr, kind)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def order(self) -> int:
        return self.data.ndim

    def __getitem__(self, idx):
        return self.data[idx]

    def nonzero(self) -> Iterator[tuple[tuple[int, ...], object]]:
        for idx, v in np.ndenumerate(self.data):
            if v != 0:
                yield idx, v

    def support(self) -> list[tuple[int, ...]]:
        return [idx for idx, _ in self.nonzero()]

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.data.flat)

    def _check_same(self, other: "Tensor"):
        if not isinstance(other, Tensor):
            return NotImplemented
        if self.shape != other.shape:
            raise StructuralError(f"shape mismatch {self.shape} vs {other.shape}")
        if self.kind != other.kind:
            raise TypeError(f"scalar kind mismatch {self.kind} vs {other.kind}")
        return other

    def __add__(self, other):
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return Tensor(self.data + other.data, self.kind)

    def __sub__(self, other):
        if self._check_same(other) is NotImplemented:
            return NotImplemented
        return Tensor(self.data - other.data, self.kind)

    def __neg__(self):
        return Tensor(-self.data, self.kind)

    def scale(self, c) -> "Tensor":
        return Tensor(self.data * _coerce(c, self.kind), self.kind)

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.kind == other.kind
            and all(a == b for a, b in zip(self.data.flat, other.data.flat))
        )

    __hash__ = None

    def first_difference(self, other: "Tensor") -> tuple[int, ...] | None:
        """Row-major first index where two same-shape tensors differ."""
        if self.shape != other.shape:
            raise StructuralError(f"shape mismatch {self.shape} vs {other.shape}")
        for idx, a in np.ndenumerate(self.data):
            if a != other.data[idx]:
                return idx
        return None

    def __repr__(self):
        nz = sum(1 for _ in self.nonzero())
        return f"Tensor(shape={self.shape}, kind={self.kind!r}, nonzeros={nz})"


def to_cyclotomic(t: Tensor, m: int) -> Tensor:
    if t.kind != "rational":
        raise TypeError("only rational tensors promote to cyclotomic")
    return Tensor(t.data, f"cyclotomic:{m}")


def to_epspoly(t: Tensor) -> Tensor:
    if t.kind != "rational":
        raise TypeError("only rational tensors promote to epspoly")
    return Tensor(t.data, "epspoly")


# --------------------------------------------------------------------------
# decompositions


@dataclass(frozen=True)
class Term:
    coeff: object
    vectors: tuple[tuple, ...]


@dataclass(frozen=True)
class Decomposition:
    shape: tuple[int, ...]
    terms: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(int(s) for s in self.shape))
        for n, term in enumerate(self.terms):
            if len(term.vectors) != len(self.shape):
                raise StructuralError(f"term {n}: {len(term.vectors)} vectors for order {len(self.shape)}")
            for k, (v, a) in enumerate(zip(term.vectors, self.shape)):
                if len(v) != a:
                    raise StructuralError(f"term {n}, leg {k + 1}: length {len(v)} != {a}")

    @classmethod
    def build(cls, shape: Sequence[int], terms: Iterable) -> "Decomposition":
        """Accept ``(coeff, vectors)`` pairs or bare vector tuples (coeff 1)."""
        out = []
        for item in terms:
            if isinstance(item, Term):
                out.append(item)
                continue
            if len(item) == 2 and not isinstance(item[0], (list, tuple)):
                coeff, vecs = item
            else:
                coeff, vecs = 1, item
            out.append(Term(_scalar(coeff), tuple(tuple(_scalar(x) for x in v) for v in vecs)))
        return cls(tuple(shape), tuple(out))

    @property
    def rank(self) -> int:
        return len(self.terms)

    def without(self, index: int) -> "Decomposition":
        return Decomposition(self.shape, self.terms[:index] + self.terms[index + 1 :])

    def kind(self) -> str:
        kinds = {scalar_kind_of(t.coeff) for t in self.terms}
        kinds |= {scalar_kind_of(x) for t in self.terms for v in t.vectors for x in v}
        kinds.discard("rational")
        if len(kinds) > 1:
            raise TypeError(f"mixed scalar kinds {sorted(kinds)}")
        return kinds.pop() if kinds else "rational"


def _scalar(x):
    if isinstance(x, (Cyclotomic, EpsPoly, Fraction)):
        return x
    return to_rational(x)


def outer(vectors: Sequence[Sequence]) -> np.ndarray:
    arr = np.array(vectors[0], dtype=object)
    for v in vectors[1:]:
        arr = np.multiply.outer(arr, np.array(v, dtype=object))
    return arr


def tensor_from_terms(shape: Sequence[int], terms: Decomposition | Iterable) -> Tensor:
    """Expand a sum of decomposable terms into dense coordinates."""
    shape = tuple(int(s) for s in shape)
    if not isinstance(terms, Decomposition):
        terms = Decomposition.build(shape, terms)
    if terms.shape != shape:
        raise StructuralError(f"decomposition shape {terms.shape} != {shape}")
    kind = terms.kind()
    check_cap(shape)
    acc = Tensor.zeros(shape, kind).data.copy()
    for term in terms.terms:
        vecs = [list(v) for v in term.vectors]
        vecs[0] = [term.coeff * x for x in vecs[0]]
        acc = acc + outer(vecs)
    return Tensor(acc, kind)


# --------------------------------------------------------------------------
# JSON


def _value_to_json(x):
    if isinstance(x, Cyclotomic):
        return [fmt_rational(c) for c in x.coeffs]
    if isinstance(x, EpsPoly):
        return [fmt_rational(c) for c in x.coeffs]
    return fmt_rational(x)


def _value_from_json(v, kind: str, where: str):
    try:
        if kind == "rational":
            if isinstance(v, (list, dict)) or isinstance(v, bool) or isinstance(v, float):
                raise ParseError(f"expected a 'p/q' string, got {v!r}", where)
            return to_rational(v)
        if not isinstance(v, list):
            raise ParseError(f"expected a coefficient list for {kind}, got {v!r}", where)
        coeffs = [to_rational(c) for c in v]
        if kind == "epspoly":
            return EpsPoly(coeffs)
        return Cyclotomic(int(kind.split(":")[1]), coeffs)
    except ParseError as exc:
        if exc.location:
            raise
        raise ParseError(str(exc), where) from exc
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc), where) from exc


def _load(text) -> object:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc


def _check_kind(kind) -> str:
    if kind == "rational" or kind == "epspoly":
        return kind
    if isinstance(kind, str) and kind.startswith("cyclotomic:"):
        try:
            m = int(kind.split(":", 1)[1])
        except ValueError:
            m = 0
        if m >= 1:
            return f"cyclotomic:{m}"
    raise ParseError(f"unknown scalar kind {kind!r}", "scalar")


def _check_shape(shape, where="shape") -> tuple[int, ...]:
    if not isinstance(shape, list) or not shape:
        raise ParseError("shape must be a non-empty list", where)
    if not all(isinstance(s, int) and not isinstance(s, bool) and s >= 1 for s in shape):
        raise ParseError(f"shape entries must be positive integers: {shape}", where)
    return tuple(shape)


def tensor_to_obj(t: Tensor) -> dict:
    entries = [[_value_to_json(v), list(idx)] for idx, v in t.nonzero()]
    return {"shape": list(t.shape), "scalar": t.kind, "entries": entries}


def tensor_from_obj(obj, where: str = "") -> Tensor:
    if not isinstance(obj, dict):
        raise ParseError("tensor must be a JSON object", where or "$")
    pre = f"{where}." if where else ""
    shape = _check_shape(obj.get("shape"), pre + "shape")
    kind = _check_kind(obj.get("scalar", "rational"))
    entries = obj.get("entries", [])
    if not isinstance(entries, list):
        raise ParseError("entries must be a list", pre + "entries")
    if len(entries) > math.prod(shape):
        raise ParseError(f"{len(entries)} entries exceed the {math.prod(shape)} slots of shape {list(shape)}", pre + "entries")
    try:
        check_cap(shape)
    except CapExceeded as exc:
        raise ParseError(str(exc), pre + "shape") from exc
    values = {}
    for n, item in enumerate(entries):
        loc = f"{pre}entries[{n}]"
        if not isinstance(item, list) or len(item) != 2 or not isinstance(item[1], list):
            raise ParseError("entry must be [value, [i1,...,id]]", loc)
        value, idx = item
        if len(idx) != len(shape):
            raise ParseError(f"index {idx} has {len(idx)} coordinates, shape has {len(shape)}", loc)
        if not all(isinstance(i, int) and not isinstance(i, bool) and 0 <= i < a for i, a in zip(idx, shape)):
            raise ParseError(f"index {idx} out of range for shape {list(shape)}", loc)
        key = tuple(idx)
        if key in values:
            raise ParseError(f"duplicate index {idx}", loc)
        values[key] = _value_from_json(value, kind, loc)
    return Tensor.from_entries(shape, values, kind)


def serialize_tensor(t: Tensor) -> bytes:
    return json.dumps(tensor_to_obj(t), separators=(",", ":")).encode("utf-8")


def parse_tensor(text) -> Tensor:
    return tensor_from_obj(_load(text))


def decomposition_to_obj(d: Decomposition) -> dict:
    obj = {"shape": list(d.shape)}
    kind = d.kind()
    if kind != "rational":
        obj["scalar"] = kind
    obj["terms"] = [
        {"coeff": _value_to_json(t.coeff), "vectors": [[_value_to_json(x) for x in v] for v in t.vectors]}
        for t in d.terms
    ]
    return obj


def decomposition_from_obj(obj, where: str = "") -> Decomposition:
    if not isinstance(obj, dict):
        raise ParseError("decomposition must be a JSON object", where or "$")
    pre = f"{where}." if where else ""
    shape = _check_shape(obj.get("shape"), pre + "shape")
    kind = _check_kind(obj.get("scalar", "rational"))
    terms = obj.get("terms")
    if not isinstance(terms, list):
        raise ParseError("terms must be a list", pre + "terms")
    out = []
    for n, term in enumerate(terms):
        loc = f"{pre}terms[{n}]"
        if not isinstance(term, dict) or not isinstance(term.get("vectors"), list):
            raise ParseError("term must be an object with 'vectors'", loc)
        vecs = term["vectors"]
        if len(vecs) != len(shape):
            raise ParseError(f"{len(vecs)} vectors for order {len(shape)}", loc)
        parsed = []
        for k, (v, a) in enumerate(zip(vecs, shape)):
            vloc = f"{loc}.vectors[{k}]"
            if not isinstance(v, list) or len(v) != a:
                raise ParseError(f"vector must be a list of length {a}", vloc)
            parsed.append(tuple(_value_from_json(x, kind, f"{vloc}[{i}]") for i, x in enumerate(v)))
        coeff = _value_from_json(term.get("coeff", "1"), kind, loc + ".coeff")
        out.append(Term(coeff, tuple(parsed)))
    return Decomposition(shape, tuple(out))


def serialize_decomposition(d: Decomposition) -> bytes:
    return json.dumps(decomposition_to_obj(d), indent=1).encode("utf-8")


def parse_decomposition(text) -> Decomposition:
    return decomposition_from_obj(_load(text))


load_json = _load
