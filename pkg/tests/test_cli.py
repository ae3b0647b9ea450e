import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from riesz_lab.algebra import DivisionMatrix, HermitianPD
from riesz_lab.beta_riesz import BetaRieszParams, log_density_beta_riesz
from riesz_lab.cli import draw_matrices, main, sample_columns
from riesz_lab.riesz import RieszParams
from riesz_lab.spectral import log_joint_eigen_density

SAMPLE_ARGS = ["sample", "--dist", "riesz1", "--beta", "1", "--m", "2", "--a", "3", "--kappa", "1,0", "--n", "5", "--seed", "7"]


def run_cli(args, env=None):
    return subprocess.run(
        [sys.executable, "-m", "riesz_lab", *args], capture_output=True, env=env, check=False
    )


def write_matrix(path, rows):
    arr = np.asarray(rows, dtype=float)[..., None]
    path.write_text(DivisionMatrix(arr).to_json(), encoding="utf-8")
    return str(path)


class TestSample:
    def test_byte_identical_across_processes(self):
        first, second = run_cli(SAMPLE_ARGS), run_cli(SAMPLE_ARGS)
        assert first.returncode == 0
        assert first.stdout == second.stdout
        assert first.stdout.startswith(b"draw_index,x_1_1_0,x_2_1_0,x_2_2_0,logdet\n")

    def test_independent_of_worker_count(self):
        law = RieszParams(2, 3, 4.0, [1, 0, 0])
        a = draw_matrices(law, "riesz1", 5000, 11, threads=1)
        b = draw_matrices(law, "riesz1", 5000, 11, threads=4)
        np.testing.assert_array_equal(a, b)

    def test_threads_env(self, tmp_path, monkeypatch, capsys):
        outs = []
        for t in ("1", "3"):
            monkeypatch.setenv("RIESZ_LAB_THREADS", t)
            out = tmp_path / f"s{t}.csv"
            assert main(["sample", "--dist", "cbeta2", "--beta", "2", "--m", "2", "--a", "4", "--b", "4",
                         "--n", "5000", "--seed", "3", "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
        monkeypatch.setenv("RIESZ_LAB_THREADS", "zero")
        assert main(SAMPLE_ARGS) == 2

    def test_different_seed_changes_output(self, capsys):
        main(SAMPLE_ARGS)
        a = capsys.readouterr().out
        main(SAMPLE_ARGS[:-1] + ["8"])
        assert capsys.readouterr().out != a

    def test_csv_schema(self, capsys):
        assert sample_columns(2, 4) == [
            "draw_index", "x_1_1_0", "x_2_1_0", "x_2_1_1", "x_2_1_2", "x_2_1_3", "x_2_2_0", "logdet"
        ]
        assert main(["sample", "--dist", "riesz1", "--beta", "4", "--m", "2", "--a", "3",
                     "--n", "4", "--seed", "1", "--emit", "eigenvalues"]) == 0
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0] == sample_columns(2, 4) + ["eig_1", "eig_2"]
        assert len(rows) == 5
        for r in rows[1:]:
            v = [float(x) for x in r[1:]]
            x11, x21, x22, logdet, e1, e2 = v[0], v[1:5], v[5], v[6], v[7], v[8]
            # 2x2 Hermitian determinant and trace
            assert logdet == pytest.approx(math.log(x11 * x22 - sum(c * c for c in x21)), abs=1e-10)
            assert e1 + e2 == pytest.approx(x11 + x22, abs=1e-10)
            assert e1 >= e2 > 0

    def test_json_output(self, capsys):
        assert main(SAMPLE_ARGS[:-4] + ["--n", "2", "--seed", "7", "--format", "json"]) == 0
        rows = json.loads(capsys.readouterr().out)
        assert [r["draw_index"] for r in rows] == [0, 1]
        m = DivisionMatrix.from_dict(rows[0]["matrix"])
        assert m.rows == 2

    def test_inverse_dist(self, capsys):
        args = ["--beta", "1", "--m", "2", "--a", "3", "--n", "3", "--seed", "5"]
        main(["sample", "--dist", "riesz1", *args])
        direct = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        main(["sample", "--dist", "inv-riesz1", *args])
        inv = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        for a, b in zip(direct[1:], inv[1:]):
            assert float(a[-1]) == pytest.approx(-float(b[-1]), abs=1e-10)


class TestEvaluate:
    def test_scalar_gamma(self, capsys):
        assert main(["specfun", "--fn", "ln-mv-gamma", "--beta", "1", "--m", "1", "--a", "0.5"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["log_abs"] == pytest.approx(math.log(math.sqrt(math.pi)), abs=1e-14)
        assert out["sign"] == 1

    def test_q_kappa(self, tmp_path, capsys):
        path = write_matrix(tmp_path / "s.json", [[2.0, 0.5], [0.5, 1.0]])
        assert main(["specfun", "--fn", "log-q-kappa", "--beta", "1", "--m", "2", "--kappa", "2,1", "--matrix", path]) == 0
        # q = s11^(k1-k2) det^k2
        ref = math.log(2.0) + math.log(1.75)
        assert json.loads(capsys.readouterr().out)["log_abs"] == pytest.approx(ref, abs=1e-13)

    def test_pdf_matches_library(self, tmp_path, capsys):
        rows = [[0.5, 0.1], [0.1, 0.3]]
        path = write_matrix(tmp_path / "s.json", rows)
        assert main(["pdf", "--dist", "kbeta1", "--beta", "1", "--m", "2", "--a", "5", "--kappa", "1,0",
                     "--b", "4", "--matrix", path]) == 0
        law = BetaRieszParams(1, 2, 5.0, [1, 0], 4.0, [0, 0], "K", "I")
        ref = log_density_beta_riesz(law, HermitianPD(np.asarray(rows)[..., None]))
        assert json.loads(capsys.readouterr().out)["log_density"] == pytest.approx(ref, abs=1e-13)

    def test_eig_pdf_matches_library(self, capsys):
        assert main(["eig-pdf", "--family", "c", "--variant", "II", "--beta", "2", "--m", "2", "--a", "3",
                     "--b", "4", "--lams", "2.5,0.4"]) == 0
        ref = log_joint_eigen_density(BetaRieszParams(2, 2, 3.0, [0, 0], 4.0, [0, 0], "C", "II"), [2.5, 0.4])
        assert json.loads(capsys.readouterr().out)["log_density"] == pytest.approx(ref, abs=1e-13)

    def test_verify_suite(self, capsys):
        assert main(["verify", "--suite", "specfun"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["passed"]
        assert all(c["passed"] for c in report["checks"])


class TestExitCodes:
    def test_violated_precondition_is_named(self, capsys):
        assert main(["sample", "--dist", "riesz1", "--beta", "1", "--m", "2", "--a", "0.2", "--n", "3", "--seed", "1"]) == 2
        assert "a + k_m > (m-1)*beta/2" in capsys.readouterr().err

    @pytest.mark.parametrize(
        "args",
        [
            ["sample", "--dist", "riesz1", "--beta", "3", "--m", "2", "--a", "3", "--n", "3", "--seed", "1"],
            ["sample", "--dist", "riesz1", "--beta", "1", "--m", "2", "--a", "3", "--n", "3", "--seed", "-1"],
            ["sample", "--dist", "riesz1", "--beta", "1", "--m", "2", "--a", "3", "--n", "3"],
            ["sample", "--dist", "riesz1", "--beta", "1", "--m", "2", "--a", "3", "--kappa", "0,1", "--n", "3", "--seed", "1"],
            ["sample", "--dist", "riesz1", "--beta", "1", "--m", "2", "--a", "3", "--kappa", "1", "--n", "3", "--seed", "1"],
            ["sample", "--dist", "cbeta1", "--beta", "1", "--m", "2", "--a", "3", "--n", "3", "--seed", "1"],
            ["sample", "--dist", "riesz1", "--beta", "8", "--m", "2", "--a", "9", "--n", "3", "--seed", "1"],
            ["eig-pdf", "--family", "C", "--variant", "I", "--beta", "1", "--m", "2", "--a", "3", "--b", "3", "--lams", "0.2,0.7"],
            ["specfun", "--fn", "ln-mv-beta", "--beta", "1", "--m", "1", "--a", "1"],
            ["pdf", "--dist", "riesz1", "--beta", "1", "--m", "2", "--a", "3", "--matrix", "/nonexistent.json"],
        ],
    )
    def test_validation(self, args, capsys):
        assert main(args) == 2

    def test_numerical_failure(self, tmp_path, capsys):
        path = write_matrix(tmp_path / "bad.json", [[1.0, 2.0], [2.0, 1.0]])
        assert main(["pdf", "--dist", "riesz1", "--beta", "1", "--m", "2", "--a", "3", "--matrix", path]) == 3
        assert "positive definite" in capsys.readouterr().err

    def test_help_is_success(self, capsys):
        assert main(["--help"]) == 0
