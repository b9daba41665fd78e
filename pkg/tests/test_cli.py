import io
import json
import subprocess
import sys

import numpy as np
import pytest

from exalg import constructions as cons
from exalg import gmod, modfile
from exalg import linalg as la
from exalg.cli import cli_main

P = la.DEFAULT_PRIME


def run_cli(argv, stdin_text=None, capsys=None, monkeypatch=None):
    if stdin_text is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin_text))
    code = cli_main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write_module(tmp_path, name, m):
    path = tmp_path / name
    path.write_text(modfile.serialize(m), encoding="utf-8")
    return str(path)


@pytest.fixture
def point_file(tmp_path):
    m = cons.point_module(3, np.array([1, 0, 0]), P)
    return write_module(tmp_path, "point.json", m)


def test_roundtrip_bit_exact():
    fixtures = [
        cons.point_module(3, np.array([1, 2, 3]), P),
        gmod.free_module(2, P, [0, 1]),
        cons.filtration_projective(2, 3, P),
        gmod.zero_module(2, P),
        gmod.shift(cons.point_module(2, np.array([0, 1]), P), -2),
    ]
    for m in fixtures:
        text = modfile.serialize(m)
        again = modfile.parse(text)
        assert again == m
        assert modfile.serialize(again) == text


def test_parse_rejects_malformed():
    with pytest.raises(modfile.ModuleFileError, match="version"):
        modfile.parse(json.dumps({"version": "2"}))
    with pytest.raises(modfile.ModuleFileError, match="prime"):
        modfile.parse(
            json.dumps({"version": "1", "p": 9, "n_plus_1": 2, "dims": {}, "actions": [{}, {}]})
        )
    good = modfile.to_dict(cons.point_module(2, np.array([1, 0]), P))
    bad = json.loads(json.dumps(good))
    bad["actions"][0]["0"] = [1, 2, 3]
    with pytest.raises(modfile.ModuleFileError, match="expected"):
        modfile.parse_dict(bad)


def test_parse_names_first_violated_invariant():
    # identity action for two different variables breaks anticommutation
    data = {
        "version": "1",
        "p": P,
        "n_plus_1": 2,
        "min_deg": 0,
        "max_deg": 2,
        "dims": {"0": 1, "1": 1, "2": 1},
        "actions": [{"0": [1], "1": [1]}, {"0": [1], "1": [1]}],
    }
    with pytest.raises(modfile.ModuleFileError, match="square-zero|anticommutation"):
        modfile.parse_dict(data)


def test_cli_validate_ok(point_file, capsys, monkeypatch):
    code, out, _ = run_cli(["validate", point_file], capsys=capsys)
    assert code == 0
    assert out.startswith("valid")


def test_cli_validate_rejects_bad_file(tmp_path, capsys, monkeypatch):
    path = tmp_path / "bad.json"
    path.write_text("{}", encoding="utf-8")
    code, out, _ = run_cli(["validate", str(path)], capsys=capsys)
    assert code == 1
    assert out.startswith("invalid")


def test_cli_missing_file_is_usage_error(capsys, monkeypatch):
    code, _, err = run_cli(["betti", "/nonexistent/file.json"], capsys=capsys)
    assert code == 2
    assert "error" in err


def test_cli_construct_pipes_into_betti(capsys, monkeypatch):
    code, out, _ = run_cli(["construct", "mxi", "--n", "2"], capsys=capsys)
    assert code == 0
    code, table, _ = run_cli(
        ["betti", "-", "--depth", "6"], stdin_text=out, capsys=capsys, monkeypatch=monkeypatch
    )
    assert code == 0
    assert "total:     1     1     1     1     1     1     1" in table


def test_cli_pipe_equals_in_process(capsys, monkeypatch):
    code, out, _ = run_cli(["construct", "mxi", "--n", "2", "--xi", "1,2,3"], capsys=capsys)
    assert code == 0
    piped = modfile.parse(out)
    direct = cons.point_module(3, np.array([1, 2, 3]), P)
    assert piped == direct
    code, out2, _ = run_cli(
        ["syzygy", "-", "-k", "1"], stdin_text=out, capsys=capsys, monkeypatch=monkeypatch
    )
    assert code == 0
    from exalg import homology

    assert modfile.parse(out2) == homology.syzygy(direct, 1)


def test_cli_ext_self_extension_count(point_file, capsys, monkeypatch):
    code, out, _ = run_cli(["ext", point_file, point_file, "-k", "1"], capsys=capsys)
    assert code == 0
    assert out.strip() == "2"


def test_cli_stablehom_and_hom(point_file, capsys, monkeypatch):
    code, out, _ = run_cli(["hom", point_file, point_file], capsys=capsys)
    assert code == 0
    assert "dim=1" in out and "stable=1" in out
    code, out, _ = run_cli(["stablehom", point_file, point_file], capsys=capsys)
    assert code == 0
    assert out.strip() == "1"


def test_cli_end_of_filtration_projective(tmp_path, capsys, monkeypatch):
    code, out, _ = run_cli(["construct", "pd", "--n", "2", "--d", "2"], capsys=capsys)
    assert code == 0
    path = tmp_path / "p2.json"
    path.write_text(out, encoding="utf-8")
    code, out, _ = run_cli(["end", str(path)], capsys=capsys)
    assert code == 0
    assert "dim=3" in out and "commutative=True" in out and "local=True" in out


def test_cli_construct_mu_and_complexity(tmp_path, capsys, monkeypatch):
    code, out, _ = run_cli(
        ["construct", "mu", "--n", "2", "--forms", "1,0,0;0,1,0"], capsys=capsys
    )
    assert code == 0
    path = tmp_path / "mu.json"
    path.write_text(out, encoding="utf-8")
    code, out, _ = run_cli(
        ["complexity", str(path), "--depth", "10", "--json"], capsys=capsys
    )
    assert code == 0
    data = json.loads(out)
    assert data["cx_regseq"] == 2
    assert data["cx_betti"] == 2
    assert data["p"] == P


def test_cli_tensor_and_shift(tmp_path, point_file, capsys, monkeypatch):
    code, out, _ = run_cli(["shift", point_file, "-i", "1"], capsys=capsys)
    assert code == 0
    shifted = modfile.parse(out)
    assert shifted.min_deg == -1
    code, out, _ = run_cli(["tensor", point_file, point_file], capsys=capsys)
    assert code == 0
    assert modfile.parse(out).total_dim == 16


def test_cli_filter_reports_point_layers(tmp_path, capsys, monkeypatch):
    code, out, _ = run_cli(["construct", "xxi", "--n", "2"], capsys=capsys)
    assert code == 0
    path = tmp_path / "xxi.json"
    path.write_text(out, encoding="utf-8")
    code, out, _ = run_cli(["filter", str(path), "--json"], capsys=capsys)
    assert code == 0
    data = json.loads(out)
    assert data["factors"] == [
        {"form": [1, 0, 0], "shift": 1},
        {"form": [1, 0, 0], "shift": 0},
    ]


def test_cli_filter_rejects_simple(tmp_path, capsys, monkeypatch):
    s = gmod.simple_module(3, P, 0)
    path = write_module(tmp_path, "s.json", s)
    code, out, _ = run_cli(["filter", path], capsys=capsys)
    assert code == 1
    assert out.startswith("NOT_CX1")


def test_cli_kron_construct(capsys, monkeypatch):
    code, out, _ = run_cli(["construct", "kron", "--i", "1", "--j", "-1"], capsys=capsys)
    assert code == 0
    m = modfile.parse(out)
    assert m.dims == {1: 2, 2: 1}


def test_cli_verify_unknown_suite(capsys, monkeypatch):
    code, _, err = run_cli(["verify", "--suite", "nope"], capsys=capsys)
    assert code == 2
    assert "unknown suite" in err


def test_cli_verify_json_deterministic(capsys, monkeypatch):
    argv = ["verify", "--suite", "lemma2.7", "--n", "2", "--seed", "3", "--json"]
    code1, out1, _ = run_cli(argv, capsys=capsys)
    code2, out2, _ = run_cli(argv, capsys=capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    data = json.loads(out1)
    assert data["p"] == P
    assert all(c["wall_time"] is None for c in data["checks"])


def test_cli_modulus_mismatch(tmp_path, capsys, monkeypatch):
    m = cons.point_module(2, np.array([1, 0]), 101)
    path = write_module(tmp_path, "p101.json", m)
    code, _, err = run_cli(["betti", path], capsys=capsys)
    assert code == 2
    assert "modulus" in err


def test_cli_env_prime_override(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("EXALG_PRIME", "101")
    code, out, _ = run_cli(["construct", "mxi", "--n", "1"], capsys=capsys)
    assert code == 0
    data = json.loads(out)
    assert data["p"] == 101


def test_cli_subprocess_entrypoint(point_file):
    proc = subprocess.run(
        [sys.executable, "-m", "exalg.cli", "validate", point_file],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("valid")


def test_cli_verify_json_deterministic_across_processes():
    argv = [sys.executable, "-m", "exalg.cli", "verify", "--suite", "eisenbud",
            "--n", "2", "--seed", "0", "--json"]
    a = subprocess.run(argv, capture_output=True, text=True)
    b = subprocess.run(argv, capture_output=True, text=True)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout
