import json

import pytest

from framesynth.cli import run
from framesynth.reference import reference_ruleset_text

from .conftest import make_doc


@pytest.fixture
def ruleset_path(tmp_path):
    path = tmp_path / "rules.json"
    path.write_text(json.dumps(make_doc()), "utf-8")
    return path


def gen(ruleset_path, out, seed=7, rows=1000, extra=()):
    return run(
        [
            "generate",
            str(ruleset_path),
            "--rows",
            str(rows),
            "--seed",
            str(seed),
            "--out",
            str(out),
            "--scale",
            *extra,
        ]
    )


class TestGenerate:
    def test_basic_run(self, ruleset_path, tmp_path, capsys):
        out = tmp_path / "data.csv"
        outcome = gen(ruleset_path, out)
        assert outcome.exit_code == 0
        assert out.exists()
        lines = out.read_bytes().splitlines()
        assert len(lines) == 1001
        stats = json.loads((tmp_path / "data.csv.stats.json").read_text())
        assert stats["total_rows"] == 1000
        captured = capsys.readouterr()
        assert "label 0" in captured.out

    def test_repeat_run_byte_identical(self, ruleset_path, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert gen(ruleset_path, a).exit_code == 0
        assert gen(ruleset_path, b).exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_rows_mismatch_without_scale(self, ruleset_path, tmp_path):
        outcome = run(
            [
                "generate",
                str(ruleset_path),
                "--rows",
                "123",
                "--seed",
                "1",
                "--out",
                str(tmp_path / "x.csv"),
            ]
        )
        assert outcome.exit_code == 2

    def test_default_rows_native_counts(self, ruleset_path, tmp_path):
        out = tmp_path / "native.csv"
        outcome = run(["generate", str(ruleset_path), "--seed", "2", "--out", str(out)])
        assert outcome.exit_code == 0
        assert len(out.read_bytes().splitlines()) == 101

    def test_bad_ruleset_file(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{", "utf-8")
        outcome = run(["generate", str(bad), "--seed", "1", "--out", str(tmp_path / "x.csv")])
        assert outcome.exit_code == 2

    def test_lint_dirty_ruleset_rejected(self, tmp_path):
        doc = make_doc()
        doc["radiotap"]["tsft_for_length"]["64"] = 0.5
        path = tmp_path / "dirty.json"
        path.write_text(json.dumps(doc), "utf-8")
        outcome = run(["generate", str(path), "--seed", "1", "--out", str(tmp_path / "x.csv")])
        assert outcome.exit_code == 2

    def test_shuffle_flag(self, ruleset_path, tmp_path):
        plain, mixed = tmp_path / "p.csv", tmp_path / "s.csv"
        gen(ruleset_path, plain)
        gen(ruleset_path, mixed, extra=("--shuffle",))
        assert plain.read_bytes() != mixed.read_bytes()
        assert sorted(plain.read_bytes().splitlines()) == sorted(mixed.read_bytes().splitlines())


class TestCheck:
    def test_generated_output_passes(self, ruleset_path, tmp_path):
        out = tmp_path / "data.csv"
        gen(ruleset_path, out)
        assert run(["check", str(ruleset_path), str(out)]).exit_code == 0

    def test_corrupted_row_exit_4(self, ruleset_path, tmp_path, capsys):
        out = tmp_path / "data.csv"
        gen(ruleset_path, out)
        lines = out.read_text().splitlines()
        cells = lines[1].split(",")
        cells[8], cells[9] = "64", "1"  # radiotap.length, radiotap.present.tsft
        lines[1] = ",".join(cells)
        out.write_text("\n".join(lines) + "\n")
        outcome = run(["check", str(ruleset_path), str(out)])
        assert outcome.exit_code == 4
        captured = capsys.readouterr()
        assert "tsft-at-64: 1" in captured.out

    def test_header_only_exit_0(self, ruleset_path, tmp_path, capsys):
        from framesynth.schema import CSV_HEADER

        empty = tmp_path / "empty.csv"
        empty.write_text(CSV_HEADER + "\n")
        assert run(["check", str(ruleset_path), str(empty)]).exit_code == 0
        assert "0 rows checked" in capsys.readouterr().out

    def test_malformed_csv_exit_2(self, ruleset_path, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("nope\n")
        assert run(["check", str(ruleset_path), str(bad)]).exit_code == 2


class TestCompare:
    def test_self_comparison(self, ruleset_path, tmp_path, capsys):
        out = tmp_path / "data.csv"
        gen(ruleset_path, out)
        report_path = tmp_path / "report.json"
        outcome = run(
            ["compare", str(out), str(out), "--seed", "3", "--out", str(report_path)]
        )
        assert outcome.exit_code == 0
        report = json.loads(report_path.read_text())
        assert abs(report["cosine"]["mean"] - 1.0) < 1e-12
        assert report["euclidean"]["mean"] == 0.0
        assert all(v == 0.0 for v in report["ks_by_feature"].values())

    def test_two_seeds_compare(self, ruleset_path, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        gen(ruleset_path, a, seed=1)
        gen(ruleset_path, b, seed=2)
        outcome = run(
            ["compare", str(a), str(b), "--seed", "3", "--out", str(tmp_path / "r.json")]
        )
        assert outcome.exit_code == 0

    def test_mismatched_columns_exit_2(self, ruleset_path, tmp_path):
        out = tmp_path / "data.csv"
        gen(ruleset_path, out)
        short = tmp_path / "short.csv"
        short.write_text("a,b,c\n1,2,3\n")
        outcome = run(
            ["compare", str(out), str(short), "--seed", "3", "--out", str(tmp_path / "r.json")]
        )
        assert outcome.exit_code == 2


class TestPca:
    def test_projection_csv(self, ruleset_path, tmp_path):
        out = tmp_path / "data.csv"
        gen(ruleset_path, out)
        proj = tmp_path / "proj.csv"
        outcome = run(["pca", str(out), str(out), "--seed", "3", "--out", str(proj)])
        assert outcome.exit_code == 0
        lines = proj.read_text().splitlines()
        assert lines[0] == "source,label,z1,z2"
        assert all(len(line.split(",")) == 4 for line in lines[1:])

    def test_identical_inputs_duplicate_clouds(self, ruleset_path, tmp_path):
        out = tmp_path / "data.csv"
        gen(ruleset_path, out)
        proj = tmp_path / "proj.csv"
        run(["pca", str(out), str(out), "--seed", "3", "--sample-size", "100", "--out", str(proj)])
        lines = proj.read_text().splitlines()[1:]
        real = [l.split(",", 1)[1] for l in lines if l.startswith("real,")]
        synth = [l.split(",", 1)[1] for l in lines if l.startswith("synthetic,")]
        assert real == synth

    def test_too_many_components_exit_2(self, ruleset_path, tmp_path):
        out = tmp_path / "data.csv"
        gen(ruleset_path, out)
        outcome = run(
            [
                "pca",
                str(out),
                str(out),
                "--components",
                "99",
                "--seed",
                "3",
                "--out",
                str(tmp_path / "p.csv"),
            ]
        )
        assert outcome.exit_code == 2


class TestLint:
    def test_shipped_ruleset_clean(self, tmp_path):
        path = tmp_path / "reference.json"
        path.write_text(reference_ruleset_text(), "utf-8")
        assert run(["lint", str(path)]).exit_code == 0

    def test_tsft_fixture_exit_5(self, tmp_path, capsys):
        doc = make_doc()
        doc["radiotap"]["tsft_for_length"]["64"] = 0.3
        path = tmp_path / "dirty.json"
        path.write_text(json.dumps(doc), "utf-8")
        outcome = run(["lint", str(path)])
        assert outcome.exit_code == 5
        assert "tsft must be 0" in capsys.readouterr().out

    def test_malformed_document_exit_2(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{{{", "utf-8")
        assert run(["lint", str(path)]).exit_code == 2


class TestArgumentEdges:
    def test_negative_seed_exit_2(self, ruleset_path, tmp_path):
        outcome = run(
            ["generate", str(ruleset_path), "--seed", "-1", "--out", str(tmp_path / "x.csv")]
        )
        assert outcome.exit_code == 2

    def test_oversized_sample_exit_2(self, ruleset_path, tmp_path):
        out = tmp_path / "data.csv"
        gen(ruleset_path, out, rows=200)
        outcome = run(
            [
                "compare",
                str(out),
                str(out),
                "--sample-size",
                "5000",
                "--seed",
                "1",
                "--out",
                str(tmp_path / "r.json"),
            ]
        )
        assert outcome.exit_code == 2

    def test_unwritable_output_exit_2(self, ruleset_path, tmp_path):
        outcome = run(
            [
                "generate",
                str(ruleset_path),
                "--seed",
                "1",
                "--out",
                str(tmp_path / "missing-dir" / "x.csv"),
            ]
        )
        assert outcome.exit_code == 2
