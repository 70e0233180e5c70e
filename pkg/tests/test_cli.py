import json
from pathlib import Path

import pytest

from zzl.cli import EXIT_CHECK_FAILED, EXIT_OK, EXIT_USAGE, main, run

FIXTURES = Path(__file__).parent / "fixtures"


def fx(name: str) -> str:
    return str(FIXTURES / name)


class TestExitCodes:
    def test_check_valid_file(self):
        result = run(["check", fx("table1.zzl")])
        assert result.exit_code == EXIT_OK, result.payload

    def test_check_corrupted_exits_one_naming_position(self):
        result = run(["check", fx("corrupted.zzl")])
        assert result.exit_code == EXIT_CHECK_FAILED
        assert "at A" in result.payload or "at B" in result.payload

    def test_check_malformed_exits_two(self):
        result = run(["check", fx("malformed.zzl")])
        assert result.exit_code == EXIT_USAGE
        assert "error" in result.payload

    def test_usage_error(self):
        assert run(["frobnicate"]).exit_code == EXIT_USAGE
        assert run([]).exit_code == EXIT_USAGE

    def test_missing_file(self):
        assert run(["check", "no_such_file.zzl"]).exit_code == EXIT_USAGE

    def test_unknown_name(self):
        result = run(["dual", fx("table1.zzl"), "ghost"])
        assert result.exit_code == EXIT_USAGE

    def test_bad_gluing_exits_one(self):
        result = run(["gluing", fx("bad_gluing.zzl"), "unit"])
        assert result.exit_code == EXIT_CHECK_FAILED
        assert "nilpotent" in result.payload

    def test_good_gluing(self):
        assert run(["gluing", fx("gluing.zzl"), "g1"]).exit_code == EXIT_OK
        assert run(["gluing", fx("gluing.zzl"), "g2"]).exit_code == EXIT_OK


class TestTables:
    def test_all_rows_verified(self):
        result = run(["tables"])
        assert result.exit_code == EXIT_OK
        assert result.payload.count("VERIFIED") == 7
        assert "FAILED" not in result.payload

    def test_json_stable(self):
        first = run(["tables", "--format", "json"])
        second = run(["tables", "--format", "json"])
        assert first.exit_code == EXIT_OK
        assert first.payload == second.payload
        payload = json.loads(first.payload)
        assert payload["status"] == "pass"
        assert len(payload["table1"]) == 4
        assert len(payload["table2"]) == 3
        assert all(row["verified"] for row in payload["table1"] + payload["table2"])


class TestSubcommands:
    def test_dual_emits_parseable_stanza(self):
        result = run(["dual", fx("table1.zzl"), "corrected"])
        assert result.exit_code == EXIT_OK
        from zzl.lang import Document, parse

        assert isinstance(parse(result.payload), Document)

    def test_ext_class(self):
        result = run(["ext-class", fx("table1.zzl"), "P", "--format", "json"])
        assert result.exit_code == EXIT_OK
        payload = json.loads(result.payload)
        assert payload["normalized"] == "1" and payload["split"] is False

    def test_assemble(self):
        result = run(["assemble", fx("three_nodes.zzl"), "--format", "json"])
        assert result.exit_code == EXIT_OK
        payload = json.loads(result.payload)
        assert payload["nodes"] == ["p1", "p2", "p3"]
        assert payload["classes"] == ["1", "0", "1"]
        assert payload["report"]["status"] == "pass"

    def test_assemble_without_nodes_block(self):
        result = run(["assemble", fx("table1.zzl")])
        assert result.exit_code == EXIT_CHECK_FAILED

    def test_skeleton_matches_golden(self):
        result = run(["skeleton", fx("three_nodes.zzl"), "--format", "dot"])
        assert result.exit_code == EXIT_OK
        golden = (FIXTURES / "skeleton_three_nodes.dot").read_text()
        assert result.payload == golden

    def test_skeleton_json(self):
        result = run(["skeleton", fx("three_nodes.zzl"), "--format", "json"])
        assert result.exit_code == EXIT_OK
        payload = json.loads(result.payload)
        assert len(payload["vertices"]) == 4
        assert len(payload["edges"]) == 6

    def test_wfilt(self):
        result = run(["wfilt", fx("monodromy.zzl"), "nilp", "--center", "0"])
        assert result.exit_code == EXIT_OK
        assert "W_-1: dim 1" in result.payload
        assert "Gr_-1=1" in result.payload

    def test_wfilt_rejects_non_nilpotent(self):
        result = run(["wfilt", fx("monodromy.zzl"), "T", "--center", "0"])
        assert result.exit_code == EXIT_CHECK_FAILED

    def test_nlog(self):
        result = run(["nlog", fx("monodromy.zzl"), "T"])
        assert result.exit_code == EXIT_OK
        assert "[0,1;0,0]" in result.payload

    def test_nlog_rejects_non_unipotent(self):
        result = run(["nlog", fx("monodromy.zzl"), "notuni"])
        assert result.exit_code == EXIT_CHECK_FAILED

    def test_pl(self):
        result = run(
            ["pl", fx("monodromy.zzl"), "--alpha", "alpha", "--delta", "delta",
             "--pairing", "omega"]
        )
        assert result.exit_code == EXIT_OK
        assert "T(alpha) = [-1, 1]" in result.payload

    def test_pl_json_records_skewness(self):
        result = run(
            ["pl", fx("monodromy.zzl"), "--alpha", "alpha", "--delta", "delta",
             "--pairing", "omega", "--format", "json"]
        )
        payload = json.loads(result.payload)
        assert payload["skew"] is True
        assert payload["transformed"] == ["-1", "1"]


class TestJsonDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ["check", "FIXDIR/table1.zzl", "--format", "json"],
            ["assemble", "FIXDIR/three_nodes.zzl", "--format", "json"],
            ["skeleton", "FIXDIR/three_nodes.zzl", "--format", "json"],
            ["gluing", "FIXDIR/gluing.zzl", "g1", "--format", "json"],
            ["ext-class", "FIXDIR/table1.zzl", "P", "--format", "json"],
        ],
    )
    def test_byte_identical_across_runs(self, argv):
        argv = [a.replace("FIXDIR", str(FIXTURES)) for a in argv]
        assert run(argv).payload == run(argv).payload


class TestMain:
    def test_main_writes_out_file(self, tmp_path, capsys):
        out = tmp_path / "skeleton.dot"
        code = main(["skeleton", fx("three_nodes.zzl"), "--out", str(out)])
        assert code == EXIT_OK
        assert out.read_text() == (FIXTURES / "skeleton_three_nodes.dot").read_text()
        assert capsys.readouterr().out == ""

    def test_main_stdout(self, capsys):
        code = main(["tables"])
        captured = capsys.readouterr()
        assert code == EXIT_OK
        assert "VERIFIED" in captured.out

    def test_main_usage_to_stderr(self, capsys):
        code = main(["nope"])
        captured = capsys.readouterr()
        assert code == EXIT_USAGE
        assert captured.err
