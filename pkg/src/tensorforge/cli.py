"""Command-line entry point.

Exit codes: 0 success, 1 domain failure (a check came out negative),
2 usage or input error.  Rationals are printed as "p/q" strings; floats
appear only under keys named "approx".
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import apolarity, asymptotic, castling, degeneration, matmul, multilinear, orbit222, strassen
from .exact import Cyclotomic, EpsPoly, ParseError, fmt_rational, to_rational
from .tensor import (
    CapExceeded,
    Decomposition,
    StructuralError,
    Tensor,
    decomposition_to_obj,
    load_json,
    parse_decomposition,
    parse_tensor,
    tensor_to_obj,
)


class DomainFailure(Exception):
    """Carries a report whose check failed; printed, then exit code 1."""

    def __init__(self, report):
        self.report = report


def jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return fmt_rational(x)
    if isinstance(x, float):
        return x
    if isinstance(x, Cyclotomic):
        q = x.rational_value()
        if q is not None:
            return fmt_rational(q)
        return {"zeta_order": x.m, "coeffs": [fmt_rational(c) for c in x.coeffs]}
    if isinstance(x, EpsPoly):
        return {"eps_coeffs": [fmt_rational(c) for c in x.coeffs]}
    if isinstance(x, Tensor):
        return tensor_to_obj(x)
    if isinstance(x, Decomposition):
        return decomposition_to_obj(x)
    if isinstance(x, apolarity.HomogPoly):
        return apolarity.poly_to_obj(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "tolist"):
        return jsonable(x.tolist())
    return str(x)


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(exc.strerror or str(exc), path) from exc


def _tensor(path: str) -> Tensor:
    return parse_tensor(_read(path))


def _dims(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise ParseError(f"expected comma-separated integers, got {text!r}", "argv") from exc


def _load_decomposition(ref: str) -> tuple[Decomposition, str | None, str]:
    """A file path or ``builtin:<name>``; returns (decomposition, declared variant, source)."""
    name = ref.split(":", 1)[1] if ref.startswith("builtin:") else None
    if name is None and not Path(ref).exists() and ref in ("strassen7",):
        name = ref
    if name is not None:
        try:
            return matmul.load_builtin(name), matmul.builtin_variant(name), f"builtin:{name}"
        except FileNotFoundError as exc:
            raise ParseError(f"no builtin decomposition named {name!r}", ref) from exc
    raw = _read(ref)
    obj = load_json(raw)
    variant = obj.get("variant") if isinstance(obj, dict) else None
    return parse_decomposition(raw), variant, ref


# --------------------------------------------------------------------------
# tensor


def cmd_tensor(args):
    if args.action == "parse":
        return tensor_to_obj(_tensor(args.file))
    if args.action == "expand":
        d, _, _ = _load_decomposition(args.file)
        from .tensor import tensor_from_terms

        return tensor_to_obj(tensor_from_terms(d.shape, d))
    if args.action == "flatten":
        t = _tensor(args.file)
        return {"leg": args.leg, "matrix": jsonable(multilinear.flattening(t, args.leg))}
    if args.action == "mlrank":
        return {"multilinear_rank": list(multilinear.multilinear_rank(_tensor(args.file)))}
    if args.action == "kron":
        return tensor_to_obj(multilinear.kronecker(_tensor(args.file), _tensor(args.other)))
    if args.action == "symmetrize":
        return tensor_to_obj(multilinear.symmetrize(_tensor(args.file)))
    if args.action == "restrict":
        obj = load_json(_read(args.maps))
        maps = obj.get("maps") if isinstance(obj, dict) else obj
        if not isinstance(maps, list):
            raise ParseError("expected {'maps': [matrix, ...]}", args.maps)
        mats = [[[to_rational(x) for x in row] for row in m] for m in maps]
        return tensor_to_obj(multilinear.apply_restriction(mats, _tensor(args.file)))
    raise AssertionError(args.action)


# --------------------------------------------------------------------------
# orbit222


def _orbit_report(c: orbit222.Orbit222Class) -> dict:
    out = {
        "class": c.label,
        "multilinear_rank": list(c.multilinear_rank),
        "complex_rank": c.complex_rank,
        "real_rank": c.real_rank,
        "det": fmt_rational(c.det),
        "pencils": [
            {"leg": p.leg, "degenerate": p.degenerate, "discriminant": fmt_rational(p.discriminant),
             "tangency": p.tangency}
            for p in c.pencils
        ],
    }
    if c.discriminant is not None:
        out["discriminant"] = fmt_rational(c.discriminant)
    if c.decomposition is not None:
        out["decomposition"] = decomposition_to_obj(c.decomposition)
    return out


def cmd_orbit222(args):
    return _orbit_report(orbit222.classify_222(_tensor(args.file)))


# --------------------------------------------------------------------------
# mm


def cmd_mm(args):
    if args.action == "build":
        variant = matmul.TRANSPOSED if args.transposed_third else matmul.STANDARD
        return tensor_to_obj(matmul.matmul_tensor(args.n, variant))
    if args.action == "verify":
        t = _tensor(args.tensor)
        d, _, source = _load_decomposition(args.decomp)
        res = matmul.verify_decomposition(t, d)
        report = {"valid": res.valid, "terms": d.rank, "source": source}
        if not res.valid:
            report.update(index=list(res.index), expected=jsonable(res.expected), got=jsonable(res.got))
            raise DomainFailure(report)
        return report
    if args.action == "omega":
        import warnings

        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            eb = matmul.omega_bound(args.n, args.r, args.kind, args.source)
        out = {"n": args.n, "r": args.r, "kind": eb.kind, "source": eb.source,
               "bound": eb.display(), "approx": eb.bound, "suspicious": eb.suspicious}
        if caught:
            out["warning"] = str(caught[0].message)
        return out
    if args.action in ("run", "bench"):
        d, variant, source = _load_decomposition(args.alg)
        variant = variant or matmul.detect_variant(d)
        if variant is None:
            raise DomainFailure({"error": "decomposition matches neither matrix multiplication tensor", "source": source})
        try:
            alg = strassen.compile_algorithm(d, variant, source)
        except strassen.DecompositionRefused as exc:
            raise DomainFailure({"error": str(exc), "index": list(exc.index or ())}) from exc
        config = strassen.EngineConfig(exact=bool(args.exact), cutoff=args.cutoff, seed=args.seed)
        exact, cutoff = config.exact, config.effective_cutoff
        if args.action == "bench":
            rep = strassen.run_config(alg, _dims(args.sizes), config)
            return {
                "algorithm": source, "cutoff": cutoff, "exact": exact,
                "rows": [{"size": r.size, "multiplications": r.ops.multiplications,
                          "additions": r.ops.additions, "correct": r.correct,
                          "seconds": {"approx": r.seconds}} for r in rep.rows],
                "slope": None if rep.slope is None else {"approx": rep.slope},
            }
        rep = strassen.run_config(alg, [args.size], config)
        row = rep.rows[0]
        out = {"algorithm": source, "size": args.size, "cutoff": cutoff, "exact": exact,
               "authoritative": exact, "correct": row.correct, "seconds": {"approx": row.seconds}}
        if args.count_ops:
            out["ops"] = {"multiplications": row.ops.multiplications, "additions": row.ops.additions,
                          "scalings": row.ops.scalings, "depth": row.ops.depth}
        if not row.correct:
            raise DomainFailure(out)
        return out
    if args.action == "chilo-check":
        ok = matmul.chilo_restriction_check(args.n)
        report = {"n": args.n, "passes": ok}
        if not ok:
            raise DomainFailure(report)
        return report
    raise AssertionError(args.action)


# --------------------------------------------------------------------------
# degen


def _witness(path: str, target: str | None, q_shift: int) -> degeneration.DegenerationWitness:
    t = _tensor(target) if target else None
    return degeneration.parse_witness(_read(path), t, q_shift)


def cmd_degen(args):
    if args.action == "verify":
        w = _witness(args.file, args.target, args.q_shift)
        res = degeneration.verify_degeneration(w)
        report = {"valid": res.valid, "q": w.q, "r": w.r}
        if not res.valid:
            report.update(degree=res.degree, index=list(res.index))
            raise DomainFailure(report)
        return report
    if args.action == "to-rank":
        w = _witness(args.file, args.target, args.q_shift)
        if not degeneration.verify_degeneration(w):
            raise DomainFailure({"valid": False, "error": "witness does not verify"})
        d = degeneration.degeneration_to_rank(w)
        return {"terms": d.rank, "bound": degeneration.extraction_bound(w),
                "coarse_bound": (w.q + 1) ** 2 * w.r, "decomposition": decomposition_to_obj(d)}
    if args.action == "kron":
        w1 = _witness(args.file, None, 0)
        w2 = _witness(args.other, None, 0)
        return degeneration.witness_to_obj(degeneration.kronecker_degeneration(w1, w2))
    raise AssertionError(args.action)


# --------------------------------------------------------------------------
# castle


def _castle_report(r: castling.CastlingReport) -> dict:
    return {
        "input": list(r.input), "N": r.N, "minimal": list(r.minimal),
        "trace": [{"position": s.position, "before": list(s.before), "after": list(s.after)} for s in r.trace],
        "prehomogeneous": r.prehomogeneous if r.prehomogeneous is not None else "unclassified-by-theorem",
        "finite_orbits": r.finite_orbits, "rule": r.rule,
    }


def cmd_castle(args):
    dims = _dims(args.dims)
    if args.action == "classify":
        return _castle_report(castling.classify(dims))
    minimal, trace = castling.minimal_element(dims)
    return {"input": list(dims), "N": castling.n_invariant(dims), "minimal": list(minimal),
            "trace": [{"position": s.position, "before": list(s.before), "after": list(s.after)} for s in trace]}


# --------------------------------------------------------------------------
# apolar


def _cert(c: apolarity.WaringCertificate) -> dict:
    return {"rank": c.rank, "verified": c.verified,
            "decomposition": [{"coeff": jsonable(k), "form": jsonable(list(l))} for k, l in c.terms],
            "evidence": jsonable(c.evidence)}


def cmd_apolar(args):
    if args.action == "hilbert":
        hf = apolarity.hilbert_function(apolarity.parse_poly(_read(args.file)))
        return {"hilbert_function": list(hf), "length": sum(hf)}
    if args.action == "waring-monomial":
        return _cert(apolarity.waring_rank_monomial(_dims(args.exponents)))
    if args.action == "waring-binary":
        return _cert(apolarity.waring_rank_binary(apolarity.parse_poly(_read(args.file))))
    if args.action == "annihilates":
        gens = apolarity.parse_ideal(_read(args.ideal))
        rep = apolarity.annihilates(gens, apolarity.parse_poly(_read(args.file)))
        out = {"contained": rep.ok, "by_degree": {str(k): v for k, v in rep.by_degree.items()}}
        if not rep.ok:
            raise DomainFailure(out)
        return out
    if args.action == "diff":
        g = apolarity.parse_poly(_read(args.op))
        f = apolarity.parse_poly(_read(args.file))
        return apolarity.poly_to_obj(apolarity.diff_apply(g, f))
    raise AssertionError(args.action)


# --------------------------------------------------------------------------
# asymp


def cmd_asymp(args):
    if args.action == "fekete":
        obj = load_json(_read(args.file))
        samples = obj.get("samples") if isinstance(obj, dict) else obj
        if not isinstance(samples, list):
            raise ParseError("expected a list of [k, r_k] pairs", args.file)
        try:
            pairs = [(int(k), int(to_rational(r))) for k, r in samples]
        except (TypeError, ValueError) as exc:
            raise ParseError(str(exc), args.file) from exc
        est = asymptotic.asymptotic_rank_bound(pairs)
        return {"bound": est.exact, "approx": est.bound, "best_k": est.best_k, "best_r": est.best_r,
                "samples": [list(s) for s in est.samples],
                "submultiplicative": est.submultiplicative, "violations": [list(v) for v in est.violations]}
    t = _tensor(args.file)
    if args.action == "concise":
        return {"concise": asymptotic.is_concise(t), "multilinear_rank": list(multilinear.multilinear_rank(t)),
                "shape": list(t.shape)}
    if args.action == "tight":
        if args.witness:
            obj = load_json(_read(args.witness))
            try:
                w = asymptotic.TightnessWitness(*(tuple(int(x) for x in obj[k]) for k in ("alpha", "beta", "gamma")))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError("witness needs integer lists alpha, beta, gamma", args.witness) from exc
            ok = asymptotic.verify_tight(t, w)
            if not ok:
                raise DomainFailure({"tight": False})
            return {"tight": True}
        w = asymptotic.find_tight(t)
        if w is None:
            pairs = asymptotic.forced_equal_pairs(t)
            return {"tight_in_this_basis": False, "forced_equal": [list(p) for p in pairs]}
        return {"tight_in_this_basis": True, "alpha": list(w.alpha), "beta": list(w.beta), "gamma": list(w.gamma)}
    raise AssertionError(args.action)


# --------------------------------------------------------------------------


class _SubParser(argparse.ArgumentParser):
    """Subcommand parser that also accepts --format after the subcommand."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.add_argument("--format", choices=("json", "human"), default=argparse.SUPPRESS, help="output mode")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tensorforge", description="Exact tensor rank and fast matrix multiplication tools.")
    p.add_argument("--format", choices=("json", "human"), default="json", help="output mode")
    groups = p.add_subparsers(dest="group", required=True, parser_class=_SubParser)

    g = groups.add_parser("tensor", help="tensor files: parse, expand, flatten, mlrank, kron, symmetrize, restrict")
    sub = g.add_subparsers(dest="action", required=True)
    for name, helptext in (("parse", "normalize a tensor file"), ("mlrank", "multilinear rank"),
                           ("symmetrize", "average over leg permutations")):
        sub.add_parser(name, help=helptext).add_argument("file")
    sub.add_parser("expand", help="dense tensor of a decomposition file").add_argument("file")
    s = sub.add_parser("flatten", help="flattening along one leg")
    s.add_argument("file")
    s.add_argument("--leg", type=int, required=True)
    s = sub.add_parser("kron", help="Kronecker product of two tensors")
    s.add_argument("file")
    s.add_argument("other")
    s = sub.add_parser("restrict", help="apply one linear map per leg")
    s.add_argument("file")
    s.add_argument("--maps", required=True, help='JSON {"maps": [matrix, ...]}')
    g.set_defaults(func=cmd_tensor)

    g = groups.add_parser("orbit222", help="2x2x2 orbit classification")
    sub = g.add_subparsers(dest="action", required=True)
    sub.add_parser("classify", help="class, ranks, hyperdeterminant and pencils").add_argument("file")
    g.set_defaults(func=cmd_orbit222)

    g = groups.add_parser("mm", help="matrix multiplication tensors and algorithms")
    sub = g.add_subparsers(dest="action", required=True)
    s = sub.add_parser("build", help="the n x n matrix multiplication tensor")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--transposed-third", action="store_true", help="store E_ik instead of E_ki on leg 3")
    s = sub.add_parser("verify", help="check a decomposition against a tensor")
    s.add_argument("--tensor", required=True)
    s.add_argument("--decomp", required=True, help="file or builtin:strassen7")
    s = sub.add_parser("omega", help="exponent bound log_n r")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--kind", choices=("rank", "border-rank"), default="rank")
    s.add_argument("--source", default="cli")
    for name in ("run", "bench"):
        s = sub.add_parser(name, help="multiply random matrices recursively" if name == "run" else "count operations over sizes")
        s.add_argument("--alg", required=True, help="decomposition file or builtin:strassen7")
        if name == "run":
            s.add_argument("--size", type=int, required=True)
            s.add_argument("--count-ops", action="store_true")
        else:
            s.add_argument("--sizes", required=True, help="comma-separated sizes")
        s.add_argument("--cutoff", type=int, default=None)
        mode = s.add_mutually_exclusive_group()
        mode.add_argument("--exact", action="store_true", help="rational arithmetic (authoritative)")
        mode.add_argument("--float", action="store_true", help="machine floats (illustrative)")
        s.add_argument("--seed", type=int, default=0)
    s = sub.add_parser("chilo-check", help="restrict the symmetrized M<3n> back to M<n>")
    s.add_argument("--n", type=int, required=True)
    g.set_defaults(func=cmd_mm)

    g = groups.add_parser("degen", help="degeneration witnesses")
    sub = g.add_subparsers(dest="action", required=True)
    for name in ("verify", "to-rank"):
        s = sub.add_parser(name, help="check a witness" if name == "verify" else "exact decomposition from a witness")
        s.add_argument("file")
        s.add_argument("--target", help="target tensor file when the witness does not embed one")
        s.add_argument("--q-shift", type=int, default=0, help="added to q for files using a shifted convention")
    s = sub.add_parser("kron", help="Kronecker product of two witnesses")
    s.add_argument("file")
    s.add_argument("other")
    g.set_defaults(func=cmd_degen)

    g = groups.add_parser("castle", help="prehomogeneity via Castling transforms")
    sub = g.add_subparsers(dest="action", required=True)
    sub.add_parser("classify", help="full report for a dimension tuple").add_argument("dims")
    sub.add_parser("reduce", help="reduction to the minimal tuple").add_argument("dims")
    g.set_defaults(func=cmd_castle)

    g = groups.add_parser("apolar", help="apolarity and Waring rank")
    sub = g.add_subparsers(dest="action", required=True)
    sub.add_parser("hilbert", help="Hilbert function of the apolar algebra").add_argument("file")
    sub.add_parser("waring-monomial", help="rank and certificate of a monomial").add_argument("exponents")
    sub.add_parser("waring-binary", help="Sylvester's algorithm").add_argument("file")
    s = sub.add_parser("annihilates", help="is the ideal inside the apolar ideal")
    s.add_argument("ideal")
    s.add_argument("file")
    s = sub.add_parser("diff", help="apply a differential operator")
    s.add_argument("op")
    s.add_argument("file")
    g.set_defaults(func=cmd_apolar)

    g = groups.add_parser("asymp", help="asymptotic rank and tightness")
    sub = g.add_subparsers(dest="action", required=True)
    sub.add_parser("fekete", help="bound from rank samples of Kronecker powers").add_argument("file")
    s = sub.add_parser("tight", help="find or check a tightness witness")
    s.add_argument("file")
    s.add_argument("--witness")
    sub.add_parser("concise", help="full multilinear rank").add_argument("file")
    g.set_defaults(func=cmd_asymp)
    return p


def _human(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not (isinstance(v, dict) and set(v) == {"approx"}):
                lines.append(f"{pad}{k}:")
                lines.append(_human(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v['approx'] if isinstance(v, dict) and v else v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return pad + ", ".join(str(v) for v in obj)
        return "\n".join(_human(v, indent) for v in obj)
    return f"{pad}{obj}"


def emit(obj, fmt: str, stream) -> None:
    obj = jsonable(obj)
    if fmt == "human":
        stream.write(_human(obj) + "\n")
    else:
        stream.write(json.dumps(obj, indent=2) + "\n")


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
    except DomainFailure as fail:
        emit(fail.report, args.format, stdout)
        return 1
    except (ParseError, StructuralError, CapExceeded, json.JSONDecodeError) as exc:
        stderr.write(f"error: {exc}\n")
        return 2
    except (ValueError, TypeError, IndexError) as exc:
        # bad argument values (n = 0, empty tuples, ...) count as usage errors
        stderr.write(f"error: {exc}\n")
        return 2
    emit(result, args.format, stdout)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
