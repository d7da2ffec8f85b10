import json

import numpy as np
import pytest

import cli
from models.linalg import BipartiteDims, BipartiteOperator
from repository.matrix_files import MatrixFileRepo
from utils.errors import NumericalFailure
from utils.linalg import maximally_entangled_projector, maximally_entangled_state
from utils.random_states import random_positive


@pytest.fixture
def files(tmp_path):
    def write(name, value):
        return str(MatrixFileRepo.save(tmp_path / name, value))
    return write


def run_json(capsys, argv):
    assert cli.run(argv + ["--output", "json"]) == cli.EXIT_OK
    return json.loads(capsys.readouterr().out)


def test_werner_threshold_text(capsys):
    assert cli.run(["werner", "--n", "3", "--alpha", "0.4", "-k", "2"]) == cli.EXIT_OK
    out = capsys.readouterr().out
    assert "k-block positive: true" in out
    assert "PPT: false" in out


def test_werner_all_ranks_json(capsys):
    result = run_json(capsys, ["werner", "--n", "3", "--alpha", "0.6"])
    assert result["k_block_positive"] == {"1": True, "2": False, "3": False}
    assert result["pt_min_eigenvalue"] < 0


def test_vecnorm(capsys, files):
    path = files("e3.json", maximally_entangled_state(3))
    assert cli.run(["vecnorm", "--input", path, "-k", "2"]) == cli.EXIT_OK
    assert "0.816497" in capsys.readouterr().out
    result = run_json(capsys, ["vecnorm", "--input", path, "-k", "2"])
    assert result["norm"] == pytest.approx(np.sqrt(2 / 3))
    assert result["schmidt_coefficients"] == pytest.approx([1 / np.sqrt(3)] * 3)


def test_vecnorm_normalizes_on_request(capsys, tmp_path):
    path = tmp_path / "raw.json"
    path.write_text(json.dumps({"n": 2, "m": 2, "kind": "vector", "data": [[3, 0], [0, 0], [0, 0], [4, 0]]}))
    assert cli.run(["vecnorm", "--input", str(path), "-k", "1"]) == cli.EXIT_BAD_INPUT
    capsys.readouterr()
    result = run_json(capsys, ["vecnorm", "--input", str(path), "-k", "1", "--normalize"])
    assert result["norm"] == pytest.approx(0.8)


def test_opnorm_methods(capsys, files):
    path = files("e2.json", maximally_entangled_projector(2))
    bounds = run_json(capsys, ["opnorm", "--input", path, "-k", "1"])
    assert bounds["lower"] == pytest.approx(0.5, abs=1e-10)
    assert bounds["upper"] == pytest.approx(0.5, abs=1e-10)
    brute = run_json(capsys, ["opnorm", "--input", path, "-k", "1", "--method", "brute", "--samples", "500"])
    assert brute["lower"] <= 0.5 + 1e-12


def test_heuristic_witness_round_trip(capsys, files, tmp_path, rng):
    path = files("x.json", random_positive(BipartiteDims(n=3, m=3), rng))
    bounds = run_json(capsys, ["opnorm", "--input", path, "-k", "2", "--method", "heuristic", "--restarts", "4"])
    witness_path = tmp_path / "witness.json"
    witness_path.write_text(json.dumps(bounds["lower_witness"]))
    result = run_json(capsys, ["vecnorm", "--input", str(witness_path), "-k", "2"])
    assert result["norm"] == pytest.approx(1.0, abs=1e-9)


def test_kpos_is_deterministic(capsys, files, werner_scaled):
    path = files("w.json", werner_scaled(3, 0.6))
    first = run_json(capsys, ["kpos", "--input", path, "-k", "2", "--restarts", "4"])
    second = run_json(capsys, ["kpos", "--input", path, "-k", "2", "--restarts", "4"])
    assert first == second
    assert first["status"] == "NotKBlockPositive"
    assert first["witness_value"] < 0
    assert cli.run(["kpos", "--input", path, "-k", "2", "--restarts", "4"]) == cli.EXIT_OK
    assert "status: NotKBlockPositive" in capsys.readouterr().out


def test_schmidt(capsys, files):
    path = files("e2.json", maximally_entangled_state(2))
    result = run_json(capsys, ["schmidt", "--input", path])
    assert result["rank"] == 2
    assert result["coefficients"] == pytest.approx([np.sqrt(0.5)] * 2)


def test_werner_limit_text(capsys):
    assert cli.run(["werner-limit", "--n", "4", "--rmax", "3", "--size-cap", "16", "--restarts", "2"]) == cli.EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split()[:3] == ["r", "rank", "bound_ineq2"]
    assert len(lines) == 4


def test_bad_input_exit_codes(capsys, files, tmp_path):
    path = files("e2.json", maximally_entangled_state(2))
    assert cli.run(["vecnorm", "--input", path, "-k", "5"]) == cli.EXIT_BAD_INPUT
    assert "out of range" in capsys.readouterr().err

    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert cli.run(["vecnorm", "--input", str(broken), "-k", "1"]) == cli.EXIT_BAD_INPUT
    assert cli.run(["vecnorm", "--input", str(tmp_path / "missing.json"), "-k", "1"]) == cli.EXIT_BAD_INPUT

    short = tmp_path / "short.json"
    short.write_text(json.dumps({"n": 2, "m": 2, "kind": "operator", "data": [[1, 0]] * 3}))
    assert cli.run(["kpos", "--input", str(short), "-k", "1"]) == cli.EXIT_BAD_INPUT

    non_hermitian = files("nh.json", BipartiteOperator.from_matrix(np.triu(np.ones((4, 4))), 2, 2))
    assert cli.run(["kpos", "--input", non_hermitian, "-k", "1"]) == cli.EXIT_BAD_INPUT

    assert cli.run(["vecnorm", "--input", path]) == cli.EXIT_BAD_INPUT
    assert cli.run(["werner", "--n", "3", "--alpha", "2.0"]) == cli.EXIT_BAD_INPUT


def test_numerical_failure_exit_code(capsys, files, monkeypatch):
    def fail(*args, **kwargs):
        raise NumericalFailure("SVD did not converge")

    monkeypatch.setattr(cli, "schmidt_decompose", fail)
    path = files("e2.json", maximally_entangled_state(2))
    assert cli.run(["schmidt", "--input", path]) == cli.EXIT_NUMERICAL
    assert "numerical failure" in capsys.readouterr().err
