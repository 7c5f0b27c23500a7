import json
import subprocess
import sys

import pytest

from isodescent.cli import (
    RunConfig,
    _SCHEMAS,
    emit,
    execute,
    main,
    parse_args,
    parse_records_csv,
)


def run_cli(args: list[str]) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "isodescent.cli", *args],
        capture_output=True,
        timeout=600,
    )


class TestParseArgs:
    def test_rank_defaults(self):
        config = parse_args(["rank", "--p", "19249"])
        assert config.command == "rank"
        assert config.p == 19249
        assert config.height_bound == 2000
        assert config.output_format == "text"

    def test_scan_csv(self):
        config = parse_args(["scan", "--max", "2000", "--format", "csv"])
        assert config.command == "scan"
        assert config.range_max == 2000
        assert config.output_format == "csv"

    def test_non_prime_rejected(self):
        with pytest.raises(SystemExit) as exc:
            parse_args(["rank", "--p", "15"])
        assert exc.value.code == 2

    def test_unknown_flag_rejected(self):
        with pytest.raises(SystemExit) as exc:
            parse_args(["rank", "--p", "7", "--bogus"])
        assert exc.value.code == 2

    def test_descent_args(self):
        config = parse_args(["descent", "--a", "0", "--b", "-4", "--height-bound", "10"])
        assert (config.a, config.b, config.height_bound) == (0, -4, 10)


class TestExecute:
    def test_rank_seven(self):
        records, code = execute(RunConfig(command="rank", p=7, height_bound=10))
        assert code == 0
        rec = records[0]
        assert rec["upper"] == 0 and rec["lower"] == 0
        assert rec["theorem_bound"] == "exact 0"
        assert rec["consistent"] is True

    def test_rank_record_schema(self):
        records, _ = execute(RunConfig(command="rank", p=7, height_bound=5))
        keys = set(records[0])
        assert {
            "p",
            "mod24",
            "quartic2",
            "dim_selmer_psibar",
            "dim_selmer_psi",
            "dim_im_alpha",
            "dim_im_alphabar",
            "lower",
            "upper",
            "theorem_bound",
            "consistent",
        } <= keys
        assert records[0]["spec_version"] == 1

    def test_repr_1601(self):
        records, code = execute(RunConfig(command="repr", p=1601))
        assert code == 0
        rec = records[0]
        assert (rec["repr_3p_a"], rec["repr_3p_b"]) == (1, 7)
        assert rec["repr_p_a"] is None

    def test_scan_hundred(self):
        records, code = execute(
            RunConfig(command="scan", range_max=100, height_bound=60, parallelism=1)
        )
        assert code == 0
        assert len(records) == 25
        assert all(rec["consistent"] for rec in records)
        assert [rec["p"] for rec in records] == sorted(rec["p"] for rec in records)

    def test_selmer_symbolic(self):
        records, code = execute(RunConfig(command="selmer", p=19249))
        assert code == 0
        rec = records[0]
        assert rec["psibar_symbolic"] == "1 2 3 6 p 2p 3p 6p"
        assert rec["consistent"] is True

    def test_classify(self):
        records, _ = execute(RunConfig(command="classify", p=1217))
        assert records[0]["quartic2"] == 1
        assert records[0]["theorem_bound"] == "<=1"

    def test_descent_arbitrary_curve(self):
        records, code = execute(
            RunConfig(command="descent", a=0, b=4, height_bound=20)
        )
        assert code == 0
        assert records[0]["upper"] == 0


class TestEmit:
    def test_empty_csv_is_header_only(self):
        data = emit([], "csv", columns=_SCHEMAS["scan"])
        assert data.decode().strip() == ",".join(_SCHEMAS["scan"])

    def test_json_round_trip(self):
        records, _ = execute(RunConfig(command="rank", p=7, height_bound=5))
        parsed = json.loads(emit(records, "json"))
        assert parsed == records

    def test_csv_round_trip(self):
        records, _ = execute(
            RunConfig(command="scan", range_max=30, height_bound=30, parallelism=1)
        )
        parsed = parse_records_csv(emit(records, "csv"))
        assert parsed == records

    def test_csv_quartic2_none_round_trips(self):
        records, _ = execute(RunConfig(command="classify", p=7))
        parsed = parse_records_csv(emit(records, "csv"))
        assert parsed[0]["quartic2"] is None

    def test_deterministic_bytes(self):
        records, _ = execute(RunConfig(command="rank", p=11, height_bound=10))
        for fmt in ("json", "csv", "text"):
            assert emit(records, fmt) == emit(records, fmt)

    def test_write_then_rename(self, tmp_path):
        target = tmp_path / "out.csv"
        records, _ = execute(RunConfig(command="classify", p=7))
        data = emit(records, "csv", path=str(target))
        assert target.read_bytes() == data
        leftovers = [p for p in tmp_path.iterdir() if p.name.startswith(".isodescent-")]
        assert leftovers == []


class TestMainExitCodes:
    def test_ok(self, capsys):
        assert main(["classify", "--p", "7", "--format", "json"]) == 0
        out = capsys.readouterr().out
        assert json.loads(out)[0]["p"] == 7

    def test_io_error(self):
        code = main(
            ["classify", "--p", "7", "--format", "csv", "--out", "/nonexistent-dir/x.csv"]
        )
        assert code == 3

    def test_usage_error_subprocess(self):
        proc = run_cli(["rank", "--p", "15"])
        assert proc.returncode == 2

    def test_ok_subprocess(self):
        proc = run_cli(["rank", "--p", "7", "--height-bound", "5", "--format", "json"])
        assert proc.returncode == 0
        assert json.loads(proc.stdout)[0]["upper"] == 0


class TestInconsistencyExitCode:
    def test_exit_one_and_record_still_emitted(self, monkeypatch):
        # forge a disagreement by swapping in the wrong closed form
        import isodescent.cli as cli_mod
        from isodescent.family import closed_form_selmer_psibar

        monkeypatch.setattr(
            cli_mod, "closed_form_selmer_psibar", lambda p: closed_form_selmer_psibar(5)
        )
        records, code = execute(RunConfig(command="selmer", p=7))
        assert code == 1
        assert records and records[0]["consistent"] is False


class TestScanDeterminism:
    def test_jobs_equivalence(self):
        seq, code1 = execute(
            RunConfig(command="scan", range_max=60, height_bound=40, parallelism=1)
        )
        par, code2 = execute(
            RunConfig(command="scan", range_max=60, height_bound=40, parallelism=4)
        )
        assert code1 == code2 == 0
        assert emit(seq, "csv") == emit(par, "csv")
