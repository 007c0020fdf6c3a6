"""End-to-end command line behavior: files, manifests, exit codes."""

import json
import math
import subprocess
import sys

import pytest

from magicforge.cli import main


@pytest.fixture
def circuit_file(tmp_path):
    path = tmp_path / "circ.json"
    path.write_text(json.dumps({
        "n": 1,
        "layers": [{"gate": {"n": 1, "terms": [{"m": 3, "a": "1", "c": 1}]}}],
    }))
    return str(path)


@pytest.fixture
def tableau_file(tmp_path):
    path = tmp_path / "tab.json"
    path.write_text(json.dumps({"n": 1, "generators": ["+X"]}))
    return str(path)


@pytest.fixture
def block_file(tmp_path):
    path = tmp_path / "block.json"
    path.write_text(json.dumps({
        "n": 1, "clifford": [["H", 0]], "sqr": {"m": 3, "k": [1]},
    }))
    return str(path)


def read_manifest_line(path):
    with open(path) as fh:
        first = fh.readline()
    assert first.startswith("# manifest: ")
    return json.loads(first[len("# manifest: "):])


class TestSpectrum:
    def test_writes_primary_and_oracle_files(self, circuit_file, tmp_path):
        out = str(tmp_path / "spec.csv")
        assert main(["spectrum", circuit_file, "-o", out]) == 0
        man = read_manifest_line(out)
        assert man["command"] == "spectrum" and man["tool"] == "magicforge"
        oracle_man = read_manifest_line(out + ".oracle.csv")
        assert oracle_man["command"] == "spectrum"
        body = open(out).read()
        assert "x_bits,z_bits,re,im,abs2" in body
        assert "source: shallow" in body
        assert "source: oracle" in open(out + ".oracle.csv").read()

    def test_deterministic_bytes(self, circuit_file, tmp_path):
        a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
        main(["spectrum", circuit_file, "-o", a])
        main(["spectrum", circuit_file, "-o", b])
        assert open(a).read() == open(b).read()

    def test_oracle_only_circuit(self, tmp_path):
        # a mid-circuit general gate forces the oracle path for the primary file
        path = tmp_path / "c.json"
        path.write_text(json.dumps({
            "n": 2,
            "layers": [
                {"gate": {"n": 2, "terms": [{"m": 2, "a": "11", "c": 1}]}},
                {"clifford": [["H", 0]]},
            ],
        }))
        out = str(tmp_path / "spec.csv")
        assert main(["spectrum", str(path), "-o", out]) == 0
        assert "source: oracle" in open(out).read()


class TestMagic:
    def test_json_payload(self, circuit_file, tmp_path):
        out = str(tmp_path / "magic.json")
        assert main(["magic", circuit_file, "--alpha", "2", "3", "-o", out]) == 0
        data = json.loads(open(out).read())
        assert data["n"] == 1 and data["method"] == "shallow"
        by_alpha = {r["alpha"]: r for r in data["results"]}
        assert abs(by_alpha[2]["F_alpha"] - 1.5) < 1e-12
        assert abs(by_alpha[3]["F_alpha"] - 1.25) < 1e-12
        assert abs(by_alpha[2]["M_alpha"] - math.log2(4 / 1.5) + 1) < 1e-12
        assert abs(by_alpha[2]["flat_bound"] - 1.5) < 1e-12
        assert data["support"] == 3
        assert "manifest" in data

    def test_stdout_mode(self, circuit_file, capsys):
        assert main(["magic", circuit_file]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["results"][0]["alpha"] == 2


class TestOptimize:
    def test_trajectory_csv(self, tableau_file, tmp_path):
        out = str(tmp_path / "traj.csv")
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"restarts": 4}))
        code = main([
            "optimize", tableau_file, "--layers", "2",
            "--config", str(cfg), "-o", out,
        ])
        assert code == 0
        lines = [l for l in open(out).read().splitlines() if not l.startswith("#")]
        assert lines[0] == "layer,f_before,f_after,support,nullity"
        assert len(lines) == 3
        first = lines[1].split(",")
        assert float(first[1]) == 2.0
        assert float(first[2]) <= 1.5 + 1e-6

    def test_bad_config_key_exits_2(self, tableau_file, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        code = main(["optimize", tableau_file, "--layers", "1", "--config", str(cfg)])
        assert code == 2
        err = json.loads(capsys.readouterr().err)
        assert err["kind"] == "ValidationError"


class TestVerify:
    def test_small_sweep_passes(self, tmp_path):
        out = str(tmp_path / "verify.json")
        code = main(["verify", "--n-max", "2", "--cases", "5", "-o", out])
        assert code == 0
        data = json.loads(open(out).read())
        assert data["passed"] is True
        assert data["max_abs_deviation"] <= data["tolerance"]

    def test_threads_agree_with_serial(self, tmp_path):
        a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
        main(["verify", "--n-max", "2", "--cases", "4", "-o", a])
        main(["verify", "--n-max", "2", "--cases", "4", "--threads", "2", "-o", b])
        da, db = json.loads(open(a).read()), json.loads(open(b).read())
        assert da["max_abs_deviation"] == db["max_abs_deviation"]


class TestZeroMagic:
    def test_certificate_payload(self, tmp_path):
        tab = tmp_path / "t.json"
        tab.write_text(json.dumps({"n": 3, "generators": ["+ZII", "+IXI", "+IIX"]}))
        out = str(tmp_path / "cert.json")
        assert main(["zero-magic", str(tab), "--k", "3", "-o", out]) == 0
        data = json.loads(open(out).read())
        assert data["level"] == 3
        assert data["stabilizer_confirmed"] is True
        assert abs(data["f_alpha"]["2"] - 8.0) < 1e-9

    def test_impossible_k_exits_2(self, tmp_path, capsys):
        tab = tmp_path / "t.json"
        tab.write_text(json.dumps({"n": 2, "generators": ["+XI", "+IX"]}))
        assert main(["zero-magic", str(tab), "--k", "3"]) == 2
        assert json.loads(capsys.readouterr().err)["kind"] == "ValidationError"


class TestNogo:
    def test_witness_payload(self, block_file, tmp_path):
        out = str(tmp_path / "wit.json")
        assert main(["nogo", block_file, "-o", out]) == 0
        data = json.loads(open(out).read())
        assert data["increase"]["delta"] > 1e-6
        assert data["decrease"]["delta"] < -1e-6
        assert data["block"]["sqr"] == {"m": 3, "k": [1]}

    def test_clifford_block_exits_2(self, tmp_path, capsys):
        path = tmp_path / "b.json"
        path.write_text(json.dumps({"n": 1, "clifford": [["H", 0]]}))
        assert main(["nogo", str(path)]) == 2
        assert json.loads(capsys.readouterr().err)["kind"] == "ValidationError"


class TestSupport:
    def test_counts(self, tmp_path):
        path = tmp_path / "w.json"
        path.write_text(json.dumps({"m": 3, "k": [1, 3]}))
        out = str(tmp_path / "s.json")
        assert main(["support", str(path), "-o", out]) == 0
        data = json.loads(open(out).read())
        assert data["n"] == 2 and data["ceiling"] == 9 and data["counted"] == 9

    def test_clifford_angles(self, tmp_path):
        path = tmp_path / "w.json"
        path.write_text(json.dumps({"m": 2, "k": [0, 1]}))
        assert main(["support", str(path)]) == 0


class TestErrors:
    def test_missing_file_exits_2(self, capsys):
        assert main(["magic", "/nonexistent/x.json"]) == 2
        err = json.loads(capsys.readouterr().err)
        assert err["kind"] == "ValidationError"

    def test_malformed_json_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["magic", str(path)]) == 2
        capsys.readouterr()


class TestEntryPoint:
    def test_console_script(self):
        proc = subprocess.run(
            [sys.executable, "-m", "magicforge.cli", "--version"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "magicforge" in proc.stdout

    def test_main_aliases_run_command(self):
        from magicforge.cli import run_command

        assert main is run_command
