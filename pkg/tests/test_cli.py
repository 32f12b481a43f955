import json
from pathlib import Path

import pytest

from qmeta.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSimulate:
    def test_ghz_code_n1(self, capsys, reference_dir):
        code, out, _ = run_cli(capsys, "simulate",
                               "--code", str(reference_dir / "ghz.code"), "--n", "1")
        assert code == 0 and out.strip() == "+1[xxxxxx] +1[yyyyyy]"

    def test_setup_file(self, capsys, reference_dir):
        code, out, _ = run_cli(capsys, "simulate",
                               "--setup", str(reference_dir / "spin_half_6.setup"))
        assert code == 0 and out.startswith("+1[xxxxxx]")

    def test_circuit_task(self, capsys, reference_dir):
        code, out, _ = run_cli(capsys, "simulate", "--task", "circuit",
                               "--code", str(reference_dir / "ghz_circuit.code"),
                               "--n", "1")
        assert code == 0 and out.strip() == "1|XXXX> +1|YYYY>"

    def test_missing_file_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "simulate", "--code", "/no/such.code")
        assert code == 2 and "error" in err

    def test_json_error_format(self, capsys):
        code, _, err = run_cli(capsys, "--json", "simulate", "--code", "/no/such.code")
        assert code == 2
        assert json.loads(err)["command"] == "simulate"


class TestFlops:
    def test_table_value(self, capsys):
        code, out, _ = run_cli(capsys, "flops", "--dim", "3", "--particles", "4")
        assert code == 0 and out.strip() == "486"

    def test_odd_particles_exit_2(self, capsys):
        code, _, _ = run_cli(capsys, "flops", "--dim", "3", "--particles", "5")
        assert code == 2


class TestTargets:
    def test_list(self, capsys):
        code, out, _ = run_cli(capsys, "targets", "--task", "optics", "--list")
        rows = json.loads(out)
        assert code == 0 and len(rows) == 20

    def test_show(self, capsys):
        code, out, _ = run_cli(capsys, "targets", "--task", "optics", "--show", "GHZ")
        assert code == 0 and out.splitlines()[0] == "+1[xxxx] +1[yyyy]"


class TestTokenizeRoundTrip:
    def test_code_side(self, capsys, tmp_path, reference_dir):
        src = reference_dir / "ghz.code"
        code, out, _ = run_cli(capsys, "tokenize", "--in", str(src))
        assert code == 0
        ids_file = tmp_path / "ids.txt"
        ids_file.write_text(out)
        code, out2, _ = run_cli(capsys, "detokenize", "--in", str(ids_file))
        assert code == 0 and out2 == src.read_text()

    def test_states_side(self, capsys, tmp_path):
        text = "+1[xxxx] +1[yyyy]|+1[xxxxxx] +1[yyyyyy]|+1[xxxxxxxx] +1[yyyyyyyy]"
        f = tmp_path / "states.txt"
        f.write_text(text)
        code, out, _ = run_cli(capsys, "tokenize", "--side", "states", "--in", str(f))
        assert code == 0
        ids_file = tmp_path / "ids.txt"
        ids_file.write_text(out)
        code, out2, _ = run_cli(capsys, "detokenize", "--side", "states",
                                "--in", str(ids_file))
        assert code == 0 and out2.strip() == text


class TestUsageErrors:
    def test_unknown_flag_exit_1(self, capsys):
        assert run_cli(capsys, "flops", "--dim", "3", "--particles", "4",
                       "--bogus")[0] == 1

    def test_unknown_command_exit_1(self, capsys):
        assert run_cli(capsys, "frobnicate")[0] == 1

    def test_help_exits_zero(self, capsys):
        assert run_cli(capsys, "--help")[0] == 0


class TestGenDataAndEval:
    def test_small_pipeline(self, capsys, tmp_path, reference_dir):
        corpus = tmp_path / "corpus.jsonl"
        code, out, _ = run_cli(capsys, "gen-data", "--config",
                               "shortcode-deg1-dim2-unweighted-shortstates",
                               "--total", "6", "--seed", "1",
                               "--out", str(corpus), "--verify")
        assert code == 0
        manifest = json.loads(out)
        assert manifest["total"] == 6 and manifest["verified"]

        cand_dir = tmp_path / "cands"
        cand_dir.mkdir()
        (cand_dir / "ghz_0.code").write_text(
            (reference_dir / "ghz.code").read_text())
        (cand_dir / "junk_1.code").write_text("this is not a program\n")
        out_dir = tmp_path / "report"
        code, out, _ = run_cli(capsys, "eval", "--task", "optics",
                               "--target", "GHZ", "--candidates", str(cand_dir),
                               "--nmax", "3", "--out", str(out_dir))
        assert code == 0
        summary = json.loads(out)
        assert summary["targets"]["ghz"]["best_candidate"] == "ghz_0"
        assert summary["targets"]["ghz"]["max_correct_n"] == 3
        assert (out_dir / "fidelities.csv").exists()
