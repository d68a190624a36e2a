import json

import pytest

from flatrank.cli import main
from flatrank.polynomials import determinant_poly


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


class TestDecompose:
    def test_table(self, capsys):
        code, out = run(["decompose", "--n", "4", "--d", "2", "--p", "1"], capsys)
        assert code == 0
        assert "total dimension: 560" in out

    def test_json(self, capsys):
        code, out = run(
            ["decompose", "--n", "4", "--d", "2", "--p", "1", "--format", "json"],
            capsys,
        )
        data = json.loads(out)
        assert data[-1] == {"total_dim": 560}


class TestBound:
    def test_minor_json(self, capsys, tmp_path):
        code, out = run(
            ["bound", "--poly", "det", "--n", "3", "--method", "koszul-minor",
             "--d", "1", "--p", "1", "--format", "json",
             "--cache-dir", str(tmp_path)],
            capsys,
        )
        rec = json.loads(out)
        assert code == 0
        assert rec["rank"] == 80 and rec["t"] == 8 and rec["bound"] == 10
        assert rec["provenance"][0]["method"] == "modular"

    def test_minor_table_shows_reference(self, capsys, tmp_path):
        code, out = run(
            ["bound", "--poly", "det", "--n", "4", "--method", "koszul-minor",
             "--d", "2", "--p", "1", "--cache-dir", str(tmp_path)],
            capsys,
        )
        assert code == 0
        assert "border rank >=  : 38" in out
        assert "preliminary_bound" in out

    def test_rational_flag(self, capsys, tmp_path):
        code, out = run(
            ["bound", "--poly", "det", "--n", "3", "--method", "koszul-minor",
             "--d", "1", "--p", "1", "--rational", "--format", "json",
             "--cache-dir", str(tmp_path)],
            capsys,
        )
        rec = json.loads(out)
        methods = [c["method"] for c in rec["provenance"]]
        assert "modular" in methods and len(methods) == 2
        assert rec["rank"] == 80

    def test_cache_round_trip_identical(self, capsys, tmp_path):
        argv = ["bound", "--poly", "det", "--n", "3", "--method", "koszul-minor",
                "--d", "1", "--p", "1", "--format", "json",
                "--cache-dir", str(tmp_path)]
        _, first = run(argv, capsys)
        assert list(tmp_path.glob("*.mat"))
        _, second = run(argv, capsys)

        def strip_timing(text):
            rec = json.loads(text)
            for c in rec["provenance"]:
                c.pop("elapsed_ms")
            return rec

        assert strip_timing(first) == strip_timing(second)

    def test_full_method_from_file(self, capsys, tmp_path):
        poly_path = tmp_path / "det2.json"
        poly_path.write_text(determinant_poly(2).to_json())
        code, out = run(
            ["bound", "--poly", f"file:{poly_path}", "--n", "2",
             "--method", "koszul-full", "--d", "1", "--p", "1",
             "--format", "json", "--no-cache"],
            capsys,
        )
        rec = json.loads(out)
        assert code == 0 and rec["bound"] >= 2

    def test_pieri_perm(self, capsys, tmp_path):
        code, out = run(
            ["bound", "--poly", "perm", "--n", "3", "--method", "pieri",
             "--format", "json", "--cache-dir", str(tmp_path)],
            capsys,
        )
        rec = json.loads(out)
        assert rec["rank"] == 934 and rec["t"] == 70 and rec["bound"] == 14

    def test_errors(self, capsys):
        with pytest.raises(SystemExit):
            main(["bound", "--poly", "perm", "--n", "4",
                  "--method", "koszul-minor", "--no-cache"])
        with pytest.raises(SystemExit):
            main(["bound", "--poly", "det", "--n", "4",
                  "--method", "pieri", "--no-cache"])
        with pytest.raises(SystemExit):
            main(["bound", "--poly", "nope", "--n", "3",
                  "--method", "koszul-full", "--no-cache"])
        with pytest.raises(SystemExit):
            main(["bound", "--poly", "det", "--n", "3",
                  "--method", "koszul-minor", "--threads", "0", "--no-cache"])
        with pytest.raises(SystemExit):
            main(["bound", "--poly", "det", "--n", "3",
                  "--method", "koszul-minor", "--memory-cap", "1", "--no-cache"])


class TestVerify:
    def test_quick_suite_passes(self, capsys):
        code, out = run(["verify", "--suite", "quick"], capsys)
        assert code == 0
        assert "[FAIL]" not in out
        assert "suite quick: PASS" in out
