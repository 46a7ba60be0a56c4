import io
import json
from pathlib import Path

import pytest

from tensorforge import apolarity, degeneration, matmul
from tensorforge.asymptotic import matmul_tight_witness
from tensorforge.cli import build_parser, main
from tensorforge.orbit222 import representatives
from tensorforge.tensor import parse_decomposition, parse_tensor, serialize_decomposition, serialize_tensor

SAMPLES = Path(__file__).resolve().parents[1] / "samples"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], stdout=out, stderr=err)
    text = out.getvalue()
    data = json.loads(text) if text.strip().startswith(("{", "[")) else text
    return code, data, err.getvalue()


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    mono = apolarity.HomogPoly.monomial
    paths = {
        "w": serialize_tensor(degeneration.w_state()),
        "generic": serialize_tensor(representatives()["GenericRank2"]),
        "m2": serialize_tensor(matmul.matmul_tensor(2)),
        "m2t": serialize_tensor(matmul.matmul_tensor(2, matmul.TRANSPOSED)),
        "strassen": serialize_decomposition(matmul.load_builtin()),
        "broken": serialize_decomposition(matmul.load_builtin().without(0)),
        "wit": degeneration.serialize_witness(degeneration.w_state_witness()),
        "xyz": apolarity.serialize_poly(mono((1, 1, 1))),
        "bin": apolarity.serialize_poly(mono((3, 0)) + mono((2, 1), 3)),
        "dx": apolarity.serialize_poly(mono((1, 0, 0))),
        "ideal": json.dumps({"generators": [apolarity.poly_to_obj(mono(e)) for e in [(2, 0, 0), (0, 2, 0)]]}),
        "bad_ideal": json.dumps({"generators": [apolarity.poly_to_obj(mono((1, 1, 0)))]}),
        "fekete": json.dumps({"samples": [[1, "7"], [2, "49"]]}),
        "tightw": json.dumps(dict(zip(("alpha", "beta", "gamma"), map(list, matmul_tight_witness(2).legs())))),
        "maps": json.dumps({"maps": [[["1", "1"], ["0", "1"]], [["1", "0"], ["0", "1"]], [["1", "0"], ["0", "2"]]]}),
        "garbage": "{not json",
    }
    out = {}
    for k, v in paths.items():
        p = d / f"{k}.json"
        p.write_bytes(v if isinstance(v, bytes) else v.encode())
        out[k] = p
    return out


def test_help_lists_all_groups():
    text = build_parser().format_help()
    for g in ("tensor", "orbit222", "mm", "degen", "castle", "apolar", "asymp"):
        assert g in text


def test_every_subcommand_has_help():
    parser = build_parser()
    groups = parser._subparsers._group_actions[0].choices
    for name, sub in groups.items():
        actions = sub._subparsers._group_actions[0].choices
        assert actions, name
        for action, p in actions.items():
            assert p.format_help()


def test_spec_examples(files):
    code, data, _ = run("mm", "omega", "--n", 2, "--r", 7, "--kind", "rank")
    assert code == 0 and data["bound"] == "2.807354922058"
    code, data, _ = run("orbit222", "classify", files["w"])
    assert code == 0 and data["class"] == "Wclass" and data["complex_rank"] == 3
    code, data, _ = run("castle", "classify", "2,4,4")
    assert code == 0 and data["prehomogeneous"] is False


def test_tensor_commands(files):
    code, data, _ = run("tensor", "parse", files["w"])
    assert code == 0 and parse_tensor(json.dumps(data)) == degeneration.w_state()
    code, data, _ = run("tensor", "mlrank", files["w"])
    assert data["multilinear_rank"] == [2, 2, 2]
    code, data, _ = run("tensor", "flatten", files["w"], "--leg", 1)
    assert data["matrix"] == [["0", "1", "1", "0"], ["1", "0", "0", "0"]]
    code, data, _ = run("tensor", "kron", files["m2"], files["m2"])
    assert code == 0 and data["shape"] == [16, 16, 16] and len(data["entries"]) == 64
    code, data, _ = run("tensor", "symmetrize", files["m2"])
    assert code == 0 and {v for v, _ in data["entries"]} == {"1", "1/2"}
    code, data, _ = run("tensor", "restrict", files["w"], "--maps", files["maps"])
    assert code == 0 and parse_tensor(json.dumps(data)).shape == (2, 2, 2)
    code, data, _ = run("tensor", "expand", files["strassen"])
    assert parse_tensor(json.dumps(data)) == matmul.matmul_tensor(2, matmul.TRANSPOSED)


def test_orbit_generic_has_decomposition(files):
    code, data, _ = run("orbit222", "classify", files["generic"])
    assert data["class"] == "GenericRank2" and data["det"] == "1"
    assert len(parse_decomposition(json.dumps(data["decomposition"])).terms) == 2


def test_mm_commands(files):
    code, data, _ = run("mm", "build", "--n", 2, "--transposed-third")
    assert parse_tensor(json.dumps(data)) == matmul.matmul_tensor(2, matmul.TRANSPOSED)
    code, data, _ = run("mm", "verify", "--tensor", files["m2t"], "--decomp", files["strassen"])
    assert code == 0 and data["valid"]
    code, data, _ = run("mm", "verify", "--tensor", files["m2t"], "--decomp", "builtin:strassen7")
    assert code == 0
    code, data, _ = run("mm", "verify", "--tensor", files["m2t"], "--decomp", files["broken"])
    assert code == 1 and not data["valid"] and data["index"]
    code, data, _ = run("mm", "verify", "--tensor", files["m2"], "--decomp", files["strassen"])
    assert code == 1
    code, data, _ = run("mm", "run", "--alg", "builtin:strassen7", "--size", 8, "--cutoff", 1, "--exact", "--count-ops")
    assert code == 0 and data["correct"] and data["ops"]["multiplications"] == 343
    code, data, _ = run("mm", "run", "--alg", "builtin:strassen7", "--size", 100)
    assert code == 0 and data["cutoff"] == 64 and data["authoritative"] is False
    code, data, _ = run("mm", "bench", "--alg", files["strassen"], "--sizes", "2,4,8", "--exact", "--cutoff", 1)
    assert [r["multiplications"] for r in data["rows"]] == [7, 49, 343]
    assert abs(data["slope"]["approx"] - 2.807354922057604) < 1e-12
    code, data, _ = run("mm", "chilo-check", "--n", 1)
    assert code == 0 and data["passes"]


def test_omega_warning():
    code, data, _ = run("mm", "omega", "--n", 2, "--r", 3)
    assert code == 0 and data["suspicious"] and "warning" in data


def test_degen_commands(files):
    code, data, _ = run("degen", "verify", files["wit"])
    assert code == 0 and data["valid"]
    code, data, _ = run("degen", "verify", files["wit"], "--q-shift", 1)
    assert code == 1 and not data["valid"]
    code, data, _ = run("degen", "to-rank", files["wit"])
    assert code == 0 and data["terms"] <= 8
    assert matmul.verify_decomposition(degeneration.w_state(), parse_decomposition(json.dumps(data["decomposition"])))
    code, data, _ = run("degen", "kron", files["wit"], files["wit"])
    assert code == 0 and data["q"] == 2
    code, data, _ = run("degen", "verify", files["wit"], "--target", files["generic"])
    assert code == 1


def test_castle_commands():
    code, data, _ = run("castle", "reduce", "2,3,5")
    assert data["minimal"] == [1, 1, 3] and len(data["trace"]) == 2
    code, data, _ = run("castle", "classify", "2,2,7")
    assert data["finite_orbits"] and data["prehomogeneous"]
    code, _, err = run("castle", "classify", "2,x")
    assert code == 2 and "error" in err


def test_apolar_commands(files):
    code, data, _ = run("apolar", "hilbert", files["xyz"])
    assert data["hilbert_function"] == [1, 3, 3, 1] and data["length"] == 8
    code, data, _ = run("apolar", "waring-monomial", "1,1,1")
    assert data["rank"] == 4 and data["verified"]
    code, data, _ = run("apolar", "waring-binary", files["bin"])
    assert data["rank"] == 3
    code, data, _ = run("apolar", "annihilates", files["ideal"], files["xyz"])
    assert code == 0 and data["contained"]
    code, data, _ = run("apolar", "annihilates", files["bad_ideal"], files["xyz"])
    assert code == 1 and not data["contained"]
    code, data, _ = run("apolar", "diff", files["dx"], files["xyz"])
    assert apolarity.poly_from_obj(data) == apolarity.HomogPoly.monomial((0, 1, 1))


def test_asymp_commands(files):
    code, data, _ = run("asymp", "fekete", files["fekete"])
    assert data["bound"] == "7" and data["approx"] == 7.0
    code, data, _ = run("asymp", "tight", files["m2"], "--witness", files["tightw"])
    assert code == 0 and data["tight"]
    code, data, _ = run("asymp", "tight", files["m2"])
    assert data["tight_in_this_basis"]
    code, data, _ = run("asymp", "concise", files["m2"])
    assert data["concise"]


def test_usage_and_parse_errors(files):
    assert run("bogus")[0] == 2
    assert run("mm", "build")[0] == 2
    assert run("mm", "build", "--n", 0)[0] == 2
    code, _, err = run("tensor", "parse", files["garbage"])
    assert code == 2 and err.startswith("error:")
    assert run("tensor", "parse", "/no/such/file.json")[0] == 2


def test_human_format(files):
    code, text, _ = run("mm", "omega", "--n", 2, "--r", 7, "--format", "human")
    assert code == 0 and "bound: 2.807354922058" in text
    code, text, _ = run("--format", "human", "castle", "reduce", "2,3,5")
    assert "minimal:" in text


@pytest.mark.parametrize(
    "argv",
    [
        ["orbit222", "classify", "w.json"],
        ["degen", "verify", "w_witness.json"],
        ["mm", "verify", "--tensor", "m2_transposed.json", "--decomp", "strassen7.json"],
        ["apolar", "hilbert", "xyz.json"],
        ["apolar", "waring-binary", "binary_x3_3x2y.json"],
        ["apolar", "annihilates", "xyz_ideal.json", "xyz.json"],
        ["asymp", "fekete", "fekete.json"],
        ["asymp", "tight", "m2.json", "--witness", "m2_tight.json"],
        ["tensor", "restrict", "w.json", "--maps", "maps222.json"],
    ],
)
def test_shipped_samples(argv, monkeypatch):
    monkeypatch.chdir(SAMPLES)
    assert run(*argv)[0] == 0
