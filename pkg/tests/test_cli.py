import json
import math

import pytest

from negabent.cli import CSV_HEADER, BatchSummary, main, read_csv


def invoke(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


FAST = ("--pop", "30", "--budget", "600")


class TestEvolve:
    def test_deterministic_with_omitted_timing(self, capsys):
        args = ("evolve", "--n", "6", "--encoding", "gp", "--seed", "3", *FAST, "--omit-timing")
        _, first, _ = invoke(capsys, *args)
        _, second, _ = invoke(capsys, *args)
        assert first == second
        record = json.loads(first.splitlines()[0])
        assert record["wall_time"] == 0.0
        assert record["config"]["seed"] == 3

    @pytest.mark.parametrize(
        "flags",
        [
            ("--n", "99"),
            ("--n", "6", "--encoding", "cgp"),
            ("--n", "6", "--pop", "2"),
            ("--n", "6", "--pmut", "2"),
            ("--n", "6", "--budget", "10"),
        ],
    )
    def test_invalid_flags_exit_one(self, capsys, flags):
        try:
            code = main(["evolve", *flags])
        except SystemExit as exc:
            code = exc.code
        assert code == 1

    def test_n2_terminates_without_success(self, capsys):
        code, out, _ = invoke(capsys, "evolve", "--n", "2", "--encoding", "tt", *FAST)
        record = json.loads(out.splitlines()[0])
        assert code == 0
        assert record["success"] is False
        assert record["evaluations_used"] == 600
        assert record["best_fitness_exact"] == "7/4"

    def test_success_prints_certified_winner(self, capsys, tmp_path):
        path = tmp_path / "rec.json"
        code, out, _ = invoke(
            capsys, "evolve", "--n", "6", "--seed", "1", "--budget", "200000", "--out", str(path)
        )
        assert code == 0
        assert "certification: PASS" in out
        winner = next(line.split()[1] for line in out.splitlines() if line.startswith("winner:"))
        assert json.loads(path.read_text())["best_truth_table"] == winner
        assert invoke(capsys, "verify", winner, "--with-dual")[0] == 0


class TestAnalyze:
    def test_and_n2(self, capsys):
        code, out, _ = invoke(capsys, "analyze", "1")
        assert code == 0
        assert "nonlinearity: 1" in out
        assert "bent: true" in out
        assert "negabent_direct: false" in out

    def test_xor_n2_negabent(self, capsys):
        _, out, _ = invoke(capsys, "analyze", "6")
        assert "negabent_direct: true" in out
        assert "negabent_reduced: true" in out

    def test_spectra(self, capsys):
        _, out, _ = invoke(capsys, "analyze", "1", "--spectra")
        assert "walsh: 2 2 2 -2" in out

    def test_file_input(self, capsys, tmp_path):
        path = tmp_path / "f.hex"
        path.write_text("6\n")
        assert "negabent_direct: true" in invoke(capsys, "analyze", str(path))[1]

    @pytest.mark.parametrize("bad", ["xyz", "123"])
    def test_malformed(self, capsys, bad):
        code, out, _ = invoke(capsys, "analyze", bad)
        assert code == 1
        assert "error" in out


class TestVerify:
    def test_constant_not_bent(self, capsys):
        code, out, _ = invoke(capsys, "verify", "0000")
        assert code == 2
        assert "not bent" in out

    def test_bent_not_negabent(self, capsys):
        # x1x2 xor x3x4
        code, out, _ = invoke(capsys, "verify", "111e")
        assert code == 2
        assert "not negabent" in out

    def test_bent_negabent(self, capsys):
        code, out, _ = invoke(capsys, "verify", "9ac0", "--with-dual")
        assert code == 0
        assert "verified" in out

    def test_odd_affine(self, capsys):
        assert invoke(capsys, "verify", "55")[0] == 0

    def test_parse_error(self, capsys):
        assert invoke(capsys, "verify", "123")[0] == 1


def test_oracle(capsys):
    code, out, _ = invoke(capsys, "oracle", "--max-n", "3")
    assert code == 0
    assert "FAIL" not in out


class TestBatch:
    def run_batch(self, capsys, tmp_path, *extra):
        path = tmp_path / "out.csv"
        code, out, _ = invoke(
            capsys, "batch", "--n-list", "6", "--encoding", "both", "--reps", "3",
            "--jobs", "1", *FAST, "--csv", str(path), *extra,
        )
        return code, out, path.read_text()

    def test_schema_and_summary(self, capsys, tmp_path):
        code, out, text = self.run_batch(capsys, tmp_path)
        assert code == 0
        assert text.splitlines()[0] == ",".join(CSV_HEADER)
        rows = read_csv(text)
        assert len(rows) == 6
        for row in rows:
            assert math.isclose(float(row["normalized"]), float(row["fitness"]) / 56)
            assert row["success"] in ("true", "false")
        lines = out.splitlines()
        for enc in ("tt", "gp"):
            summary = BatchSummary.from_rows([r for r in rows if r["encoding"] == enc])
            assert summary.line() in lines

    def test_byte_deterministic(self, capsys, tmp_path):
        first = self.run_batch(capsys, tmp_path, "--omit-timing")[2]
        second = self.run_batch(capsys, tmp_path, "--omit-timing")[2]
        assert first == second

    def test_large_sizes_gated(self, capsys):
        code, _, err = invoke(capsys, "batch", "--n-list", "14", "--reps", "1")
        assert code == 1
        assert "--allow-large" in err

    def test_bad_n_list(self, capsys):
        assert invoke(capsys, "batch", "--n-list", "6,x")[0] == 1

    def test_records_file(self, capsys, tmp_path):
        rec = tmp_path / "r.jsonl"
        invoke(capsys, "batch", "--n-list", "5", "--reps", "2", "--jobs", "1", *FAST,
               "--records", str(rec))
        lines = rec.read_text().splitlines()
        assert [json.loads(x)["config"]["seed"] for x in lines] == [0, 1]
