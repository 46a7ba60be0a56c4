"""Apolarity: differential operators acting on forms, catalecticants, Waring ranks.

Forms and operators share one representation, :class:`HomogPoly`: a map from
exponent tuples to nonzero coefficients.  Monomials of a fixed degree are
ordered graded-lexicographically with x0 > x1 > ...
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import linalg
from .exact import Cyclotomic, ParseError, fmt_rational, lcm, to_rational
from .multilinear import symmetrize
from .tensor import Decomposition, StructuralError, Tensor, load_json, outer, tensor_from_terms


@dataclass(frozen=True)
class HomogPoly:
    nvars: int
    degree: int
    coeffs: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        clean = {}
        for exp, c in self.coeffs.items():
            exp = tuple(int(x) for x in exp)
            if len(exp) != self.nvars:
                raise StructuralError(f"exponent {exp} has {len(exp)} entries, expected {self.nvars}")
            if any(x < 0 for x in exp) or sum(exp) != self.degree:
                raise StructuralError(f"exponent {exp} is not of degree {self.degree}")
            if c != 0:
                clean[exp] = c if isinstance(c, (Fraction, Cyclotomic)) else to_rational(c)
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def monomial(cls, exp: Sequence[int], coeff=1) -> "HomogPoly":
        return cls(len(exp), sum(exp), {tuple(exp): coeff})

    @classmethod
    def zero(cls, nvars: int, degree: int) -> "HomogPoly":
        return cls(nvars, degree, {})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "HomogPoly") -> "HomogPoly":
        _same(self, other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return HomogPoly(self.nvars, self.degree, out)

    def __sub__(self, other: "HomogPoly") -> "HomogPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "HomogPoly":
        return HomogPoly(self.nvars, self.degree, {e: v * c for e, v in self.coeffs.items()})

    def __mul__(self, other: "HomogPoly") -> "HomogPoly":
        if self.nvars != other.nvars:
            raise StructuralError("variable count mismatch")
        out = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return HomogPoly(self.nvars, self.degree + other.degree, out)

    def coeff(self, exp: Sequence[int]):
        return self.coeffs.get(tuple(exp), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, HomogPoly):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if self.is_zero() and other.is_zero():
            return True
        if self.degree != other.degree:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.coeff(k) == other.coeff(k) for k in keys)

    __hash__ = None

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in monomials(self.nvars, self.degree):
            if e in self.coeffs:
                mono = "*".join(f"x{i}^{a}" if a > 1 else f"x{i}" for i, a in enumerate(e) if a) or "1"
                parts.append(f"({self.coeffs[e]})*{mono}")
        return " + ".join(parts)


DiffOp = HomogPoly


def _same(f: HomogPoly, g: HomogPoly) -> None:
    if f.nvars != g.nvars or f.degree != g.degree:
        raise StructuralError("polynomials live in different spaces")


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponents of total degree ``degree``, graded-lex with x0 > x1 > ..."""
    if nvars == 0:
        return ((),) if degree == 0 else ()
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return tuple(out)


def multinomial(exp: Sequence[int]) -> int:
    out = math.factorial(sum(exp))
    for a in exp:
        out //= math.factorial(a)
    return out


def diff_apply(g: DiffOp, f: HomogPoly) -> HomogPoly:
    """g . f: each d^a x^b gives prod b_i!/(b_i - a_i)! x^(b - a), or 0 when some a_i > b_i."""
    if g.nvars != f.nvars:
        raise StructuralError(f"operator in {g.nvars} variables, form in {f.nvars}")
    deg = f.degree - g.degree
    if deg < 0:
        return HomogPoly.zero(f.nvars, 0)
    out = {}
    for a, ca in g.coeffs.items():
        for b, cb in f.coeffs.items():
            if all(x <= y for x, y in zip(a, b)):
                factor = 1
                for x, y in zip(a, b):
                    factor *= math.perm(y, x)
                e = tuple(y - x for x, y in zip(a, b))
                out[e] = out.get(e, 0) + ca * cb * factor
    return HomogPoly(f.nvars, deg, out)


def power_of_linear(l: Sequence, d: int) -> HomogPoly:
    """(sum l_i x_i)^d expanded."""
    n = len(l)
    out = {}
    for e in monomials(n, d):
        c = multinomial(e)
        for li, a in zip(l, e):
            if a:
                c = c * li**a
        if c != 0:
            out[e] = c
    return HomogPoly(n, d, out)


# --------------------------------------------------------------------------
# catalecticants


@dataclass(frozen=True)
class CatalecticantMatrix:
    e: int
    rows: tuple  # operator monomials of degree e
    cols: tuple  # form monomials of degree d - e
    matrix: list = field(hash=False)

    @property
    def rank(self) -> int:
        return linalg.rank(self.matrix) if self.rows and self.cols else 0

    def kernel(self) -> list[DiffOp]:
        """Basis of the degree-e part of the apolar ideal."""
        n = len(self.rows[0]) if self.rows else 0
        if not self.cols:
            basis = linalg.nullspace([], ncols=len(self.rows))
        else:
            basis = linalg.left_nullspace(self.matrix)
        return [HomogPoly(n, self.e, dict(zip(self.rows, v))) for v in basis]


def catalecticant(f: HomogPoly, e: int) -> CatalecticantMatrix:
    if not 0 <= e <= f.degree:
        raise ValueError(f"e = {e} outside 0..{f.degree}")
    rows = monomials(f.nvars, e)
    cols = monomials(f.nvars, f.degree - e)
    matrix = []
    for a in rows:
        image = diff_apply(HomogPoly.monomial(a), f)
        matrix.append([image.coeff(c) for c in cols])
    return CatalecticantMatrix(e, rows, cols, matrix)


def apolar_kernel(f: HomogPoly, e: int) -> list[DiffOp]:
    """(f-perp)_e for any e >= 0 (everything is apolar above the degree)."""
    if e > f.degree:
        return [HomogPoly.monomial(a) for a in monomials(f.nvars, e)]
    return catalecticant(f, e).kernel()


def hilbert_function(f: HomogPoly) -> tuple[int, ...]:
    if f.is_zero():
        raise ValueError("the zero form has no apolar algebra")
    return tuple(catalecticant(f, e).rank for e in range(f.degree + 1))


def socle_colon(f: HomogPoly, e: int) -> list[DiffOp]:
    """[(f-perp)_d : m^(d-e)]_e computed directly: g with (g d^b) . f = 0 for all |b| = d - e."""
    d = f.degree
    rows = monomials(f.nvars, e)
    conditions = []
    for b in monomials(f.nvars, d - e):
        row = []
        for a in rows:
            exp = tuple(x + y for x, y in zip(a, b))
            row.append(f.coeff(exp) * math.prod(math.factorial(x) for x in exp))
        conditions.append(row)
    basis = linalg.nullspace(conditions, ncols=len(rows))
    return [HomogPoly(f.nvars, e, dict(zip(rows, v))) for v in basis]


def span_rank(polys: Sequence[HomogPoly]) -> int:
    if not polys:
        return 0
    mons = monomials(polys[0].nvars, polys[0].degree)
    return linalg.rank([[p.coeff(m) for m in mons] for p in polys])


# --------------------------------------------------------------------------
# Waring decompositions


@dataclass(frozen=True)
class WaringCertificate:
    rank: int
    terms: tuple = ()  # (coefficient, linear form) pairs; empty when no decomposition is given
    evidence: dict = field(default_factory=dict, hash=False)
    verified: bool = False

    @property
    def has_decomposition(self) -> bool:
        return bool(self.terms)


def expand_waring(terms: Sequence, nvars: int, d: int) -> HomogPoly:
    out = HomogPoly.zero(nvars, d)
    for c, l in terms:
        out = out + power_of_linear(l, d).scale(c)
    return out


def _monomial_decomposition(alpha: tuple[int, ...]):
    """Coefficients and forms for x0^a0 x1^a1 ... with a0 <= a1 <= ..., all positive."""
    n = len(alpha) - 1
    d = sum(alpha)
    orders = [a + 1 for a in alpha[1:]]
    m = lcm(*orders) if orders else 1
    steps = [m // o for o in orders]
    ks = list(itertools.product(*[range(o) for o in orders]))
    one = Cyclotomic(m, [1])
    forms = [(one,) + tuple(Cyclotomic.zeta(m, k * s) for k, s in zip(kk, steps)) for kk in ks]
    # square subsystem: rows x^b with b_i <= a_i for i >= 1
    rows = []
    rhs = []
    for bb in ks:
        b = (d - sum(bb),) + bb
        rows.append([Cyclotomic.zeta(m, sum(k * bi * s for k, bi, s in zip(kk, bb, steps))) for kk in ks])
        rhs.append(one * Fraction(1, multinomial(b)) if b == alpha else Cyclotomic(m, []))
    coeffs = linalg.solve(rows, rhs)
    if n == 0:
        forms = [(Fraction(1),)]
        coeffs = [Fraction(1)]
    return m, list(zip(coeffs, forms))


def waring_rank_monomial(alpha: Sequence[int]) -> WaringCertificate:
    """Waring rank of a monomial with a certificate over a cyclotomic field."""
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise ValueError("exponents must be non-negative")
    positions = [i for i, a in enumerate(alpha) if a > 0]
    if not positions:
        raise ValueError("the constant monomial has no Waring decomposition here")
    order = sorted(positions, key=lambda i: (alpha[i], i))
    reduced = tuple(alpha[i] for i in order)
    rank = math.prod(a + 1 for a in reduced[1:])
    m, terms = _monomial_decomposition(reduced)
    nvars, d = len(alpha), sum(alpha)
    zero = Cyclotomic(m, []) if m > 1 else Fraction(0)
    lifted = []
    for c, form in terms:
        full = [zero] * nvars
        for i, x in zip(order, form):
            full[i] = x
        lifted.append((c, tuple(full)))
    target = HomogPoly.monomial(alpha)
    verified = expand_waring(lifted, nvars, d) == target
    hf = hilbert_function(HomogPoly.monomial(reduced))
    evidence = {"field": f"Q(zeta_{m})", "catalecticant_ranks": hf, "catalecticant_bound": max(hf)}
    return WaringCertificate(rank, tuple(lifted), evidence, verified)


def xyz_decomposition() -> list:
    """xyz = (1/24)[(x+y+z)^3 - (x+y-z)^3 - (x-y+z)^3 + (x-y-z)^3]."""
    c = Fraction(1, 24)
    return [(c, (1, 1, 1)), (-c, (1, 1, -1)), (-c, (1, -1, 1)), (c, (1, -1, -1))]


def _binary_to_sympy(g: HomogPoly):
    from sympy import Poly, QQ, symbols

    x = symbols("x")
    # dehomogenize at the second variable: g(x, 1)
    expr = sum((c * x ** a for (a, _), c in g.coeffs.items()), 0)
    return Poly(expr, x, domain=QQ), x


def _y_multiplicity(g: HomogPoly) -> int:
    return min(b for (_, b) in g.coeffs)


def _x_degree(g: HomogPoly) -> int:
    return max(a for (a, _) in g.coeffs)


def is_squarefree_binary(g: HomogPoly) -> bool:
    """No repeated linear factor over C."""
    if g.is_zero():
        return False
    at_infinity = g.degree - _x_degree(g)
    if at_infinity > 1:
        return False
    h, _ = _binary_to_sympy(g)
    return h.degree() <= 0 or h.gcd(h.diff()).degree() == 0


def rational_points(g: HomogPoly) -> list[tuple[Fraction, Fraction]] | None:
    """Points (a : b) with g = const * prod(b dx - a dy), if g splits over Q."""
    at_infinity = g.degree - _x_degree(g)
    h, _ = _binary_to_sympy(g)
    points = [(Fraction(1), Fraction(0))] * at_infinity
    if h.degree() > 0:
        _, factors = h.factor_list()
        for fac, mult in factors:
            if fac.degree() != 1:
                return None
            p, q = fac.all_coeffs()
            root = Fraction(int((-q / p).p), int((-q / p).q))
            points.extend([(root, Fraction(1))] * mult)
    return points


def _decompose_binary(f: HomogPoly, points) -> tuple | None:
    forms = [(a, b) for a, b in points]
    d = f.degree
    mons = monomials(2, d)
    cols = [power_of_linear(l, d) for l in forms]
    matrix = [[c.coeff(m) for c in cols] for m in mons]
    sol = linalg.solve(matrix, [f.coeff(m) for m in mons])
    if sol is None:
        return None
    return tuple((c, l) for c, l in zip(sol, forms))


def waring_rank_binary(f: HomogPoly) -> WaringCertificate:
    """Sylvester's algorithm for binary forms."""
    if f.nvars != 2:
        raise StructuralError("binary forms only")
    if f.is_zero():
        raise ValueError("the zero form has Waring rank 0 and no certificate")
    d = f.degree
    hf = hilbert_function(f)
    if d == 0:
        c = next(iter(f.coeffs.values()))
        return WaringCertificate(1, ((c, (Fraction(1), Fraction(0))),), {"catalecticant_bound": 1}, True)
    e0 = next(e for e in range(1, d + 1) if catalecticant(f, e).kernel())
    kernel = catalecticant(f, e0).kernel()
    candidates = []
    if len(kernel) == 1:
        candidates = [kernel[0]]
    else:
        g1, g2 = kernel[0], kernel[1]
        candidates = [g1, g2] + [g1 + g2.scale(t) for t in range(-12, 13) if t not in (0,)]
    squarefree = [g for g in candidates if is_squarefree_binary(g)]
    evidence = {"e": e0, "kernel_dimension": len(kernel), "catalecticant_ranks": hf, "catalecticant_bound": max(hf)}
    if len(kernel) == 1 and not squarefree:
        evidence.update(generator=kernel[0], squarefree=False)
        return WaringCertificate(d + 2 - e0, (), evidence, False)
    if not squarefree:  # pragma: no cover - a pencil without base points has squarefree members
        raise RuntimeError("no squarefree element found in the apolar pencil")
    chosen = next((g for g in squarefree if rational_points(g) is not None), squarefree[0])
    evidence.update(generator=chosen, squarefree=True)
    points = rational_points(chosen)
    if points is None:
        return WaringCertificate(e0, (), evidence, False)
    terms = _decompose_binary(f, points)
    if terms is None:  # pragma: no cover - apolarity guarantees a solution
        return WaringCertificate(e0, (), evidence, False)
    verified = expand_waring(terms, 2, d) == f
    return WaringCertificate(e0, terms, evidence, verified)


# --------------------------------------------------------------------------
# symmetric rank bound from a tensor decomposition


@dataclass(frozen=True)
class SymRankBound:
    bound: int
    terms: tuple  # (coefficient, vector): the symmetrization equals sum c v x v x v
    verified: bool


def srk_upper_bound_sym3(d: Decomposition) -> SymRankBound:
    """Each u x v x w symmetrizes to a signed sum of four cubes, so srk <= 4 r."""
    if len(d.shape) != 3 or len(set(d.shape)) != 1:
        raise StructuralError(f"need a cubical order-3 decomposition, got shape {d.shape}")
    cubes = []
    for term in d.terms:
        u, v, w = term.vectors
        c = term.coeff * Fraction(1, 24)
        for su, sw, sign in ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)):
            vec = tuple(a + su * b + sw * x for a, b, x in zip(u, v, w))
            cubes.append((c * sign, vec))
    n = d.shape[0]
    if cubes:
        sym_target = symmetrize(tensor_from_terms(d.shape, d))
        acc = None
        for c, vec in cubes:
            piece = outer([vec, vec, vec]) * c
            acc = piece if acc is None else acc + piece
        verified = Tensor(acc) == sym_target
    else:
        verified = True
    return SymRankBound(4 * len(d.terms), tuple(cubes), verified)


# --------------------------------------------------------------------------
# ideal membership: I contained in f-perp


@dataclass(frozen=True)
class AnnihilationReport:
    by_degree: dict = field(hash=False)

    @property
    def ok(self) -> bool:
        return all(self.by_degree.values())

    def __bool__(self):
        return self.ok


def annihilates(generators: Sequence[DiffOp], f: HomogPoly) -> AnnihilationReport:
    """Check the ideal generated by ``generators`` lies in f-perp, degree by degree up to deg f."""
    by_degree = {}
    for e in range(f.degree + 1):
        cat = catalecticant(f, e)
        ok = True
        for g in generators:
            if g.nvars != f.nvars:
                raise StructuralError("generator and form use different variable counts")
            if g.degree > e:
                continue
            for b in monomials(f.nvars, e - g.degree):
                prod = g * HomogPoly.monomial(b)
                row = [prod.coeff(r) for r in cat.rows]
                image = [sum((x * cat.matrix[i][j] for i, x in enumerate(row) if x != 0), Fraction(0))
                         for j in range(len(cat.cols))]
                if any(v != 0 for v in image):
                    ok = False
                    break
            if not ok:
                break
        by_degree[e] = ok
    return AnnihilationReport(by_degree)


# --------------------------------------------------------------------------
# JSON


def poly_to_obj(f: HomogPoly) -> dict:
    return {
        "vars": f.nvars,
        "degree": f.degree,
        "terms": [{"exp": list(e), "coeff": fmt_rational(f.coeffs[e])}
                  for e in monomials(f.nvars, f.degree) if e in f.coeffs],
    }


def poly_from_obj(obj, where: str = "$") -> HomogPoly:
    if not isinstance(obj, dict):
        raise ParseError("polynomial must be a JSON object", where)
    nv, deg, terms = obj.get("vars"), obj.get("degree"), obj.get("terms")
    if not isinstance(nv, int) or nv < 1:
        raise ParseError("vars must be a positive integer", f"{where}.vars")
    if not isinstance(deg, int) or deg < 0:
        raise ParseError("degree must be a non-negative integer", f"{where}.degree")
    if not isinstance(terms, list):
        raise ParseError("terms must be a list", f"{where}.terms")
    coeffs = {}
    for n, t in enumerate(terms):
        loc = f"{where}.terms[{n}]"
        exp = t.get("exp") if isinstance(t, dict) else None
        if not isinstance(exp, list) or len(exp) != nv or sum(exp) != deg or any(
            not isinstance(a, int) or a < 0 for a in exp
        ):
            raise ParseError(f"exp must be {nv} non-negative integers summing to {deg}", loc)
        key = tuple(exp)
        coeffs[key] = coeffs.get(key, 0) + to_rational(t.get("coeff", "1"))
    return HomogPoly(nv, deg, coeffs)


def parse_poly(text) -> HomogPoly:
    return poly_from_obj(load_json(text))


def parse_ideal(text) -> list[DiffOp]:
    obj = load_json(text)
    if not isinstance(obj, dict) or not isinstance(obj.get("generators"), list):
        raise ParseError("ideal must be an object with a 'generators' list", "$")
    return [poly_from_obj(g, f"$.generators[{n}]") for n, g in enumerate(obj["generators"])]


def serialize_poly(f: HomogPoly) -> bytes:
    return json.dumps(poly_to_obj(f)).encode("utf-8")
