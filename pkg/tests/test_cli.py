import json

import numpy as np
import pytest

import main
from storage.artifact_codec import dumps, write_cloud_csv

UNIT_BALL = {"space": "position", "hbar": 1.0, "center": [0.0, 0.0], "shape": [[1.0, 0.0], [0.0, 1.0]]}
HALF_WIDTH_ONE = {"space": "position", "hbar": 1.0, "center": [0.0], "shape": [[1.0]]}


@pytest.fixture
def run(capsys):
    """main(argv) → (exit code, 파싱된 stdout JSON, stdout 원문)"""
    def invoke(*argv):
        code = main.main([str(a) for a in argv])
        out = capsys.readouterr().out
        if code != 0:
            assert out == ""
            return code, None, out
        return code, json.loads(out), out
    return invoke


def _covariance(sigma, n=1, hbar=1.0, mean=None):
    raw = {"n": n, "hbar": hbar, "sigma": np.asarray(sigma, dtype=float).tolist()}
    if mean is not None:
        raw["mean"] = mean
    return raw


class TestDual:

    def test_unit_ball(self, run, write_json):
        code, payload, _ = run("dual", "--input", write_json("x.json", UNIT_BALL))
        assert code == 0
        assert payload["space"] == "momentum"
        assert payload["shape"] == [[1.0, 0.0], [0.0, 1.0]]

    def test_diagonal(self, run, write_json):
        X = dict(UNIT_BALL, shape=[[4.0, 0.0], [0.0, 1.0]])
        _, payload, _ = run("dual", "--input", write_json("x.json", X))
        assert payload["shape"] == [[0.25, 0.0], [0.0, 1.0]]

    def test_non_centered(self, run, write_json):
        X = dict(UNIT_BALL, center=[1.0, 0.0])
        code, _, _ = run("dual", "--input", write_json("x.json", X))
        assert code == 1

    def test_unknown_space(self, run, write_json):
        code, _, _ = run("dual", "--input", write_json("x.json", dict(UNIT_BALL, space="spin")))
        assert code == 1

    def test_hbar_flag_mismatch(self, run, write_json):
        code, _, _ = run("dual", "--input", write_json("x.json", UNIT_BALL), "--hbar", "2")
        assert code == 1

    def test_missing_file(self, run, tmp_path):
        code, _, _ = run("dual", "--input", tmp_path / "absent.json")
        assert code == 2

    def test_invalid_json(self, run, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"space": "position",\n "shape": [[1.0]', encoding="utf-8")
        code, _, _ = run("dual", "--input", path)
        assert code == 2

    def test_missing_field(self, run, write_json):
        code, _, _ = run("dual", "--input", write_json("x.json", {"space": "position"}))
        assert code == 2


class TestReconstruct:

    def test_pure_with_slack(self, run, write_json):
        code, payload, _ = run(
            "reconstruct", "--x", write_json("x.json", HALF_WIDTH_ONE), "--slack", "4", "--mode", "pure"
        )
        assert code == 0
        assert len(payload) == 2
        for state, sign in zip(payload, (-1, 1)):
            assert state["purity_class"] == "pure"
            assert state["sigma"][0][0] == pytest.approx(0.5)
            assert state["sigma"][1][1] == pytest.approx(2.0)
            assert state["sigma"][0][1] == pytest.approx(sign * 0.8660254, abs=1e-7)
            assert state["wavefunction"]["signature"] == [sign]

    def test_mixed_with_slack(self, run, write_json):
        code, payload, _ = run(
            "reconstruct", "--x", write_json("x.json", HALF_WIDTH_ONE), "--slack", "4", "--mode", "mixed"
        )
        assert code == 0
        assert payload["purity"] == pytest.approx(0.5)
        assert payload["purity_class"] == "mixed"
        assert "wavefunction" not in payload

    def test_explicit_momentum_region(self, run, write_json):
        P = {"space": "momentum", "hbar": 1.0, "center": [0.5], "shape": [[0.25]]}
        X = dict(HALF_WIDTH_ONE, center=[-1.0])
        _, payload, _ = run("reconstruct", "--x", write_json("x.json", X), "--p", write_json("p.json", P))
        assert [state["mean"] for state in payload] == [[-1.0, 0.5], [-1.0, 0.5]]

    def test_slack_below_one(self, run, write_json):
        code, _, _ = run("reconstruct", "--x", write_json("x.json", HALF_WIDTH_ONE), "--slack", "0.5")
        assert code == 1

    def test_polarity_violation(self, run, write_json):
        P = {"space": "momentum", "hbar": 1.0, "shape": [[4.0]]}
        code, _, _ = run("reconstruct", "--x", write_json("x.json", HALF_WIDTH_ONE), "--p", write_json("p.json", P))
        assert code == 1

    @pytest.mark.parametrize("mode", ["pure", "mixed"])
    def test_polarity_violation_at_micro_scale(self, run, write_json, mode):
        # Δx = 1e-6, Δp = 5e-7: AB = 4
        X = {"space": "position", "hbar": 1.0, "shape": [[1e12]]}
        P = {"space": "momentum", "hbar": 1.0, "shape": [[4e-12]]}
        code, _, _ = run(
            "reconstruct", "--x", write_json("x.json", X), "--p", write_json("p.json", P), "--mode", mode
        )
        assert code == 1

    def test_hbar_mismatch_between_inputs(self, run, write_json):
        P = {"space": "momentum", "hbar": 2.0, "shape": [[0.25]]}
        code, _, _ = run("reconstruct", "--x", write_json("x.json", HALF_WIDTH_ONE), "--p", write_json("p.json", P))
        assert code == 1

    def test_needs_momentum_source(self, run, write_json):
        code, _, _ = run("reconstruct", "--x", write_json("x.json", HALF_WIDTH_ONE))
        assert code == 1

    def test_deterministic(self, run, write_json):
        args = ("reconstruct", "--x", write_json("x.json", UNIT_BALL), "--slack", "3")
        assert run(*args)[2] == run(*args)[2]


class TestCheck:

    def test_vacuum(self, run, write_json):
        _, payload, _ = run("check", "--sigma", write_json("s.json", _covariance(0.5 * np.identity(2))))
        assert payload["quantum_ok"] is True
        assert payload["pure"] is True
        assert payload["symplectic_eigenvalues"] == pytest.approx([0.5])
        assert payload["rs_saturated"] == [True]

    def test_violating(self, run, write_json):
        code, payload, _ = run("check", "--sigma", write_json("s.json", _covariance(np.diag([0.1, 0.1]))))
        assert code == 0
        assert payload["quantum_ok"] is False

    def test_mixed(self, run, write_json):
        _, payload, _ = run("check", "--sigma", write_json("s.json", _covariance(np.diag([0.5, 2.0]))))
        assert payload["quantum_ok"] is True
        assert payload["pure"] is False
        assert payload["purity"] == pytest.approx(0.5)

    def test_not_positive_definite(self, run, write_json):
        code, _, _ = run("check", "--sigma", write_json("s.json", _covariance(np.diag([1.0, -1.0]))))
        assert code == 1

    def test_wrong_shape(self, run, write_json):
        code, _, _ = run("check", "--sigma", write_json("s.json", _covariance(np.identity(2), n=2)))
        assert code == 1

    def test_non_integer_n(self, run, write_json):
        code, _, _ = run("check", "--sigma", write_json("s.json", dict(_covariance(np.identity(2)), n="one")))
        assert code == 2


class TestProject:

    def test_diagonal_interval(self, run, write_json):
        path = write_json("s.json", _covariance(np.diag([2.0, 0.5]), mean=[0.3, -0.2]))
        _, position, _ = run("project", "--sigma", path, "--onto", "position")
        _, momentum, _ = run("project", "--sigma", path, "--onto", "momentum")
        # 반폭 √(ħ/a) = √(2σ_xx)
        assert np.sqrt(1.0 / position["shape"][0][0]) == pytest.approx(np.sqrt(2 * 2.0))
        assert np.sqrt(1.0 / momentum["shape"][0][0]) == pytest.approx(np.sqrt(2 * 0.5))
        assert position["center"] == [0.3]
        assert momentum["space"] == "momentum"

    def test_singular(self, run, write_json):
        code, _, _ = run("project", "--sigma", write_json("s.json", _covariance([[1.0, 1.0], [1.0, 1.0]])), "--onto", "position")
        assert code == 1

    def test_bad_target(self, run, write_json):
        code, _, _ = run("project", "--sigma", write_json("s.json", _covariance(np.identity(2))), "--onto", "phase")
        assert code == 1


class TestWigner:

    def test_single_mode_grid(self, run, write_json, tmp_path):
        state = write_json("state.json", _covariance(0.5 * np.identity(2), mean=[0.3, -0.2]))
        out = tmp_path / "w.csv"
        grid = "-4,4,401"
        code, payload, _ = run("wigner", "--state", state, "--grid", grid, "--out", out)
        assert code == 0
        assert payload["integral_estimate"] == pytest.approx(1.0, abs=1e-4)
        assert payload["max_at"] == pytest.approx([0.3, -0.2], abs=1e-9)
        assert payload["rows"] == 401 * 401

        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "# n=1,hbar=1.0,grid=-4,4,401"
        assert lines[1] == "z1,z2,W"
        assert len(lines) == 2 + 401 * 401

    def test_six_sigma_grid(self, run, write_json, tmp_path):
        state = write_json("state.json", _covariance(np.diag([2.0, 0.5])))
        grid = "-8.485281374238571,8.485281374238571,400;-4.242640687119285,4.242640687119285,400"
        _, payload, _ = run("wigner", "--state", state, "--grid", grid, "--out", tmp_path / "w.csv")
        assert payload["integral_estimate"] == pytest.approx(1.0, abs=1e-4)

    def test_three_modes_refused(self, run, write_json, tmp_path):
        state = write_json("state.json", _covariance(0.5 * np.identity(6), n=3))
        code, _, _ = run("wigner", "--state", state, "--grid", "-1,1,3", "--out", tmp_path / "w.csv")
        assert code == 1
        assert not (tmp_path / "w.csv").exists()

    def test_bad_grid(self, run, write_json, tmp_path):
        state = write_json("state.json", _covariance(0.5 * np.identity(2)))
        code, _, _ = run("wigner", "--state", state, "--grid", "-1,1", "--out", tmp_path / "w.csv")
        assert code == 1

    def test_unwritable_output(self, run, write_json, tmp_path):
        state = write_json("state.json", _covariance(0.5 * np.identity(2)))
        code, _, _ = run("wigner", "--state", state, "--grid", "-1,1,3", "--out", tmp_path / "missing" / "w.csv")
        assert code == 2

    @pytest.mark.parametrize("grid_args", [("--grid", "-2,2,5"), ("--grid=-2,2,5",)])
    def test_negative_grid_minimum(self, run, write_json, tmp_path, grid_args):
        state = write_json("state.json", _covariance(0.5 * np.identity(2)))
        out = tmp_path / "w.csv"
        code, payload, _ = run("wigner", "--state", state, *grid_args, "--out", out)
        assert code == 0
        assert payload["rows"] == 25
        assert out.read_text(encoding="utf-8").splitlines()[0] == "# n=1,hbar=1.0,grid=-2,2,5"

    def test_two_mode_semicolon_grid(self, run, write_json, tmp_path):
        state = write_json("state.json", _covariance(0.5 * np.identity(4), n=2))
        code, payload, _ = run(
            "wigner", "--state", state, "--grid", "-1,1,3;-2,2,3;-1,1,3;-2,2,3", "--out", tmp_path / "w.csv"
        )
        assert code == 0
        assert payload["rows"] == 3 ** 4
        assert payload["max_at"] == [0.0, 0.0, 0.0, 0.0]

    def test_grid_without_value(self, run, write_json, tmp_path):
        state = write_json("state.json", _covariance(0.5 * np.identity(2)))
        code, _, _ = run("wigner", "--state", state, "--out", tmp_path / "w.csv", "--grid")
        assert code == 1


class TestIngest:

    def test_empty_csv(self, run, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("", encoding="utf-8")
        code, _, _ = run("ingest", "--csv", path)
        assert code == 2

    def test_collinear(self, run, tmp_path):
        path = tmp_path / "line.csv"
        t = np.linspace(0.0, 1.0, 20)
        write_cloud_csv(path, np.stack([t, -t], axis=1))
        code, _, _ = run("ingest", "--csv", path)
        assert code == 1

    def test_bad_config(self, run, tmp_path, write_json, ellipse_samples):
        path = tmp_path / "cloud.csv"
        write_cloud_csv(path, ellipse_samples(np.identity(2), 100))
        code, _, _ = run("ingest", "--csv", path, "--config", write_json("cfg.json", {"window": 5}))
        assert code == 1

    def test_hbar_flag_mismatch(self, run, tmp_path, write_json, ellipse_samples):
        path = tmp_path / "cloud.csv"
        write_cloud_csv(path, ellipse_samples(np.identity(2), 100))
        cfg = write_json("cfg.json", {"hbar": 1.0})
        code, _, _ = run("ingest", "--csv", path, "--config", cfg, "--hbar", "0.5")
        assert code == 1

    @pytest.mark.parametrize("estimator", ["loewner", "john"])
    def test_iteration_limit(self, run, tmp_path, write_json, rng, estimator):
        path = tmp_path / "cloud.csv"
        write_cloud_csv(path, rng.standard_normal((200, 2)))
        cfg = write_json("cfg.json", {"estimator": estimator, "eps": 1e-12, "max_iter": 1})
        code, _, _ = run("ingest", "--csv", path, "--config", cfg)
        assert code == 3


class TestPipeline:

    def test_ingest_reconstruct_check_project(self, run, tmp_path, write_json, ellipse_samples):
        Q = np.array([[0.5, 0.1], [0.1, 1.0]])
        csv_path = tmp_path / "cloud.csv"
        write_cloud_csv(csv_path, ellipse_samples(Q, 2000) + [1.0, -0.5])
        cfg = write_json("cfg.json", {"estimator": "loewner", "trim_fraction": 0.0, "center_mode": "mean", "eps": 1e-7, "hbar": 1.0})

        code, region, text = run("ingest", "--csv", csv_path, "--config", cfg)
        assert code == 0
        assert set(region) == {"ellipsoid", "center", "retained", "dropped"}
        assert dumps(json.loads(text)) + "\n" == text
        x_path = tmp_path / "x.json"
        x_path.write_text(text, encoding="utf-8")

        code, partners, text = run("reconstruct", "--x", x_path, "--slack", "4", "--mode", "pure")
        assert code == 0
        assert len(partners) == 4
        assert dumps(json.loads(text)) + "\n" == text

        code, mixed, _ = run("reconstruct", "--x", x_path, "--slack", "4", "--mode", "mixed")
        assert code == 0
        assert mixed["purity_class"] == "mixed"

        state_path = write_json("state.json", partners[0])
        _, report, _ = run("check", "--sigma", state_path)
        assert report["quantum_ok"] is True and report["pure"] is True

        mixed_path = write_json("mixed.json", mixed)
        _, mixed_report, _ = run("check", "--sigma", mixed_path)
        assert mixed_report["quantum_ok"] is True and mixed_report["pure"] is False
        assert mixed_report["purity"] == pytest.approx(0.25)

        _, projected, _ = run("project", "--sigma", state_path, "--onto", "position")
        recovered = np.array(projected["shape"])
        original = np.array(region["ellipsoid"]["shape"])
        assert np.linalg.norm(recovered - original) <= 1e-9 * np.linalg.norm(original)
        assert projected["center"] == pytest.approx(region["center"])

        code, _, _ = run("wigner", "--state", state_path, "--grid", "-3,3,5", "--out", tmp_path / "w.csv")
        assert code == 0

    def test_state_output_reads_back_byte_identically(self, run, write_json, tmp_path):
        _, partners, text = run("reconstruct", "--x", write_json("x.json", HALF_WIDTH_ONE), "--slack", "4")
        state_path = tmp_path / "state.json"
        state_path.write_text(dumps(partners[1]), encoding="utf-8")
        code, payload, _ = run("wigner", "--state", state_path, "--grid", "-1,1,3", "--out", tmp_path / "w.csv")
        assert code == 0
        assert payload["max_at"] == [0.0, 0.0]


def test_unknown_command(run):
    code, _, _ = run("plot")
    assert code == 1
