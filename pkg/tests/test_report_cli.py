"""Tests for report rendering, CSV output and the command line."""

import json
import os
import stat
from dataclasses import replace
from pathlib import Path

import pytest

from mixrisk import (
    ModelKind,
    emit_csv,
    parse_scenario_file,
    precautionary_report,
    render_table,
    run_report,
)
from mixrisk.cli import main
from mixrisk.report import CSV_HEADER, csv_rows, format_csv, render_comparison
from mixrisk.scenario_file import ReportKind
from mixrisk.solver import compare_with_probabilistic
from tests.conftest import FIXTURES, cara_scenario, quadratic_scenario, threshold_scenario

QUADRATIC = str(FIXTURES / "quadratic_control.json")
THRESHOLD = str(FIXTURES / "cara_crra_threshold.json")
MINIMAL = str(FIXTURES / "minimal_mixed_i.json")


def _write_edited(source: str, target: Path, **changes: object) -> str:
    document = json.loads(Path(source).read_text(encoding="utf-8"))
    for dotted, value in changes.items():
        section, key = dotted.split("__")
        document[section][key] = value
    target.write_text(json.dumps(document), encoding="utf-8")
    return str(target)


class TestRendering:
    """Test cases for the text tables."""

    def test_quadratic_indicators_print_as_ties(self) -> None:
        """Test that vanishing indicators render as '0 (tol)'."""
        text = render_table(precautionary_report(quadratic_scenario(ModelKind.MIXED_I)))
        assert text.count("0 (tol)") == 3
        assert "mixed-I: optimal saving" in text
        assert "\x1b[" not in text

    def test_threshold_annotation(self) -> None:
        """Test that the two_source sign test is labelled as the threshold test."""
        report = precautionary_report(threshold_scenario(0.2, 0.25))
        assert "FAIL (c+d threshold)" in render_table(report, threshold=True)
        assert "(c+d threshold)" not in render_table(report)

    def test_comparison_table(self) -> None:
        """Test that the comparison lists both indicators of the probabilistic model."""
        text = render_comparison(compare_with_probabilistic(cara_scenario(ModelKind.MIXED_I)))
        assert "mixed-I versus probabilistic" in text
        assert "add_income" in text
        assert "two_source" in text
        assert "add_background" not in text


class TestCsv:
    """Test cases for CSV rows."""

    def test_rows_for_mixed_model(self) -> None:
        """Test one row per situation and indicator in canonical order."""
        rows = csv_rows(precautionary_report(quadratic_scenario(ModelKind.MIXED_II)))
        assert len(rows) == 12
        assert rows[0][:2] == ("mixed-II", "full_risk")
        assert [row[3] for row in rows[:3]] == ["add_income", "two_source", "add_background"]
        assert rows[-1][1] == "certainty"
        assert {row[7] for row in rows} == {"n/a"}

    def test_rows_for_probabilistic_model(self) -> None:
        """Test three situations times two indicators."""
        rows = csv_rows(precautionary_report(cara_scenario(ModelKind.PROBABILISTIC)))
        assert len(rows) == 6
        assert {row[1] for row in rows} == {"full_risk", "background_only", "certainty"}

    def test_header_and_line_endings(self) -> None:
        """Test the header row and LF line endings."""
        text = format_csv([precautionary_report(quadratic_scenario(ModelKind.MIXED_I))])
        lines = text.split("\n")
        assert lines[0] == ",".join(CSV_HEADER)
        assert lines[-1] == ""
        assert len(lines) == 14
        assert "\r" not in text
        assert "1.50000000000e+00" in lines[1]

    def test_emit_csv_writes_one_report(self, tmp_path: Path) -> None:
        """Test that emit_csv writes the same text as format_csv and leaves no temporary file."""
        report = precautionary_report(quadratic_scenario(ModelKind.MIXED_I))
        target = tmp_path / "report.csv"
        emit_csv(report, str(target))
        assert target.read_bytes() == format_csv([report]).encode("utf-8")
        assert [path.name for path in tmp_path.iterdir()] == ["report.csv"]

    @pytest.mark.skipif(os.name == "nt", reason="POSIX permission bits")
    def test_emit_csv_honours_umask(self, tmp_path: Path) -> None:
        """Test that the written file gets 0o666 minus the umask, like a plain open()."""
        report = precautionary_report(quadratic_scenario(ModelKind.MIXED_I))
        target = tmp_path / "report.csv"
        previous = os.umask(0o022)
        try:
            emit_csv(report, str(target))
        finally:
            os.umask(previous)
        assert stat.S_IMODE(target.stat().st_mode) == 0o644


class TestRunReport:
    """Test cases for run_report."""

    def test_csv_appended_without_path(self) -> None:
        """Test that the CSV follows the table when no path is set."""
        scenario_file = parse_scenario_file(Path(QUADRATIC).read_text(encoding="utf-8"))
        text, code = run_report(scenario_file)
        assert code == 0
        assert text.index("optimal saving") < text.index(",".join(CSV_HEADER))

    def test_csv_written_to_path(self, tmp_path: Path) -> None:
        """Test that a CSV path receives the rows and the text omits them."""
        scenario_file = parse_scenario_file(Path(QUADRATIC).read_text(encoding="utf-8"))
        target = tmp_path / "rows.csv"
        text, code = run_report(scenario_file, [ReportKind.CSV], str(target))
        assert code == 0
        assert text == ""
        assert target.read_text(encoding="utf-8").startswith("model,situation")

    def test_failure_names_stage(self) -> None:
        """Test that a solver failure is reported with its category and stage."""
        scenario_file = parse_scenario_file(Path(THRESHOLD).read_text(encoding="utf-8"))
        failing = replace(
            scenario_file,
            scenario=replace(scenario_file.scenario, override_v_assumptions=False),
        )
        text, code = run_report(failing)
        assert code == 3
        assert text.startswith("error [model-assumption] solve:")

    def test_unwritable_csv_path(self, tmp_path: Path) -> None:
        """Test that an I/O failure gives exit code 1."""
        scenario_file = parse_scenario_file(Path(QUADRATIC).read_text(encoding="utf-8"))
        target = tmp_path / "missing" / "rows.csv"
        text, code = run_report(scenario_file, [ReportKind.CSV], str(target))
        assert code == 1
        assert text.startswith("error [io] csv:")


class TestSolveCommand:
    """Test cases for ``mixrisk solve``."""

    def test_quadratic_control(self, capsys: pytest.CaptureFixture) -> None:
        """Test the quadratic control scenario end to end."""
        assert main(["solve", QUADRATIC, "--outputs", "table"]) == 0
        out = capsys.readouterr().out
        assert out.count("0 (tol)") == 3
        assert "1.5" in out

    def test_csv_is_reproducible(self, tmp_path: Path) -> None:
        """Test that two runs write byte-identical CSV files."""
        first, second = tmp_path / "first.csv", tmp_path / "second.csv"
        for target in (first, second):
            code = main(["solve", THRESHOLD, "--outputs", "csv", "--csv-path", str(target)])
            assert code == 0
        assert first.read_bytes() == second.read_bytes()
        assert len(first.read_bytes().splitlines()) == 13

    def test_jobs_keep_input_order(self, capsys: pytest.CaptureFixture) -> None:
        """Test that concurrent solves print in the order of the arguments."""
        code = main(["solve", QUADRATIC, MINIMAL, "--outputs", "table", "--jobs", "2"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.index("mixed-II: optimal saving") < out.index("mixed-I: optimal saving")

    def test_fractional_weighting_exponent(
        self, tmp_path: Path, capsys: pytest.CaptureFixture
    ) -> None:
        """Test that a square-root weighting solves like any other."""
        document = json.loads(Path(MINIMAL).read_text(encoding="utf-8"))
        document["weighting"] = {"exponent": 0.5}
        path = tmp_path / "root_weighting.json"
        path.write_text(json.dumps(document), encoding="utf-8")
        assert main(["solve", str(path), "--outputs", "table"]) == 0
        assert "mixed-I: optimal saving" in capsys.readouterr().out

    def test_csv_path_needs_single_file(self, tmp_path: Path) -> None:
        """Test that --csv-path with several files is a usage error."""
        target = str(tmp_path / "rows.csv")
        assert main(["solve", QUADRATIC, MINIMAL, "--csv-path", target]) == 2

    def test_jobs_must_be_positive(self) -> None:
        """Test that --jobs 0 is a usage error."""
        assert main(["solve", QUADRATIC, "--jobs", "0"]) == 2

    def test_missing_file(self, tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
        """Test that an unreadable file gives exit code 1."""
        assert main(["solve", str(tmp_path / "absent.json")]) == 1
        assert "error [io] read" in capsys.readouterr().err

    def test_malformed_file(self, tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
        """Test that malformed JSON gives exit code 2 with its location."""
        path = tmp_path / "broken.json"
        path.write_text('{"model": ', encoding="utf-8")
        assert main(["solve", str(path)]) == 2
        assert "error [syntax] parse: line 1" in capsys.readouterr().err

    def test_first_failure_sets_exit_code(
        self, tmp_path: Path, capsys: pytest.CaptureFixture
    ) -> None:
        """Test that good files still print when another file fails."""
        broken = tmp_path / "broken.json"
        broken.write_text("[]", encoding="utf-8")
        assert main(["solve", QUADRATIC, str(broken), "--outputs", "table"]) == 2
        captured = capsys.readouterr()
        assert "mixed-II: optimal saving" in captured.out
        assert "error [schema] parse" in captured.err

    def test_solver_failure_exit_code(self, tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
        """Test that an inadmissible utility exits with code 3."""
        path = _write_edited(
            THRESHOLD, tmp_path / "strict.json", utility_v__monotonicity_override=False
        )
        assert main(["solve", path]) == 3
        assert "error [model-assumption] solve" in capsys.readouterr().err


class TestVerifyCommand:
    """Test cases for ``mixrisk verify``."""

    def test_threshold_scenario(self, capsys: pytest.CaptureFixture) -> None:
        """Test the scaling study followed by the threshold report."""
        assert main(["verify", THRESHOLD, "--epsilons", "0.5,0.25"]) == 0
        out = capsys.readouterr().out
        assert "Taylor error against risk scale" in out
        assert "CARA-CRRA threshold" in out
        assert "FAIL" in out

    def test_separable_scenario_has_no_threshold(self, capsys: pytest.CaptureFixture) -> None:
        """Test that scenarios without the CARA-CRRA structure skip the threshold."""
        assert main(["verify", MINIMAL]) == 0
        assert "CARA-CRRA threshold" not in capsys.readouterr().out

    def test_bad_scales(self, capsys: pytest.CaptureFixture) -> None:
        """Test that a single scale is a configuration error."""
        assert main(["verify", MINIMAL, "--epsilons", "0.1"]) == 2
        assert "error [configuration] verify" in capsys.readouterr().err


class TestValidateCommand:
    """Test cases for ``mixrisk validate``."""

    def test_overridden_utility(self, capsys: pytest.CaptureFixture) -> None:
        """Test that a failing v with the override flag is still valid."""
        assert main(["validate", THRESHOLD]) == 0
        out = capsys.readouterr().out
        assert "u (log_additive): ok" in out
        assert "v (cara_crra_product): fails v_2 > 0" in out
        assert out.endswith("valid mixed-I scenario\n")

    def test_failing_utility(self, tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
        """Test that the same utility without the flag exits with code 3."""
        path = _write_edited(
            THRESHOLD, tmp_path / "strict.json", utility_v__monotonicity_override=False
        )
        assert main(["validate", path]) == 3
        assert "error [model-assumption] validate" in capsys.readouterr().err
