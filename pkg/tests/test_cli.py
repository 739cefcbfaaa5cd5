"""Command-line surface: subcommands, output formats, exit codes."""

from __future__ import annotations

import json
import random

import pytest

from cbrsearch import cli
from cbrsearch.cli import EXIT_DATA, EXIT_OK, EXIT_PROPERTY, EXIT_USAGE, main
from conftest import SAMPLE_TITLES, generate_titles


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def plain_corpus(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text("\n".join(SAMPLE_TITLES) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def indexed(plain_corpus, tmp_path, capsys):
    index_path = tmp_path / "corpus.idx"
    code = main([
        "index", "--input", str(plain_corpus), "--format", "plain",
        "--output", str(index_path),
    ])
    capsys.readouterr()
    assert code == EXIT_OK
    return index_path


class TestCmdIndex:
    def test_reports_counts_and_writes_the_index(self, plain_corpus, tmp_path, capsys):
        out_path = tmp_path / "out.idx"
        code, out, _ = run_cli(
            ["index", "--input", str(plain_corpus), "--format", "plain",
             "--output", str(out_path)],
            capsys,
        )
        assert code == EXIT_OK
        assert "cases indexed: 5" in out
        assert "cases skipped: 0" in out
        assert "vocabulary size:" in out
        assert out_path.exists()

    def test_large_plain_corpus_with_skipped_rows(self, tmp_path, capsys):
        rng = random.Random(705)
        lines = generate_titles(rng, 705)
        for gap in (12, 99, 433):  # a few unusable rows
            lines[gap] = "??!"
        corpus = tmp_path / "big.txt"
        corpus.write_text("\n".join(lines) + "\n", encoding="utf-8")
        code, out, _ = run_cli(
            ["index", "--input", str(corpus), "--format", "plain",
             "--output", str(tmp_path / "big.idx")],
            capsys,
        )
        assert code == EXIT_OK
        assert "cases indexed: 702" in out
        assert "cases skipped: 3" in out
        assert "skipped 13: title tokenizes to empty" in out

    def test_missing_input_exits_2_naming_the_path(self, tmp_path, capsys):
        code, _, err = run_cli(
            ["index", "--input", str(tmp_path / "ghost.txt"), "--format", "plain",
             "--output", str(tmp_path / "x.idx")],
            capsys,
        )
        assert code == EXIT_DATA
        assert "ghost.txt" in err

    def test_duplicate_record_id_exits_2_naming_the_id(self, tmp_path, capsys):
        corpus = tmp_path / "dup.jsonl"
        corpus.write_text(
            '{"id":"r1","title":"Sistem Parkir"}\n{"id":"r1","title":"Aplikasi Kasir"}\n',
            encoding="utf-8",
        )
        code, _, err = run_cli(
            ["index", "--input", str(corpus), "--format", "record",
             "--output", str(tmp_path / "x.idx")],
            capsys,
        )
        assert code == EXIT_DATA
        assert "r1" in err

    def test_stopword_file_is_applied(self, plain_corpus, tmp_path, capsys):
        stop = tmp_path / "stop.txt"
        stop.write_text("dengan\ndan\n", encoding="utf-8")
        out_path = tmp_path / "stopped.idx"
        code, _, _ = run_cli(
            ["index", "--input", str(plain_corpus), "--format", "plain",
             "--output", str(out_path), "--stopwords", str(stop)],
            capsys,
        )
        assert code == EXIT_OK
        code, out, _ = run_cli(
            ["query", "--index", str(out_path), "--query", "dengan dan navigasi"],
            capsys,
        )
        assert code == EXIT_OK
        assert "dropped terms: (none)" in out  # stopwords vanish before lookup


class TestCmdQuery:
    def test_verbatim_title_scores_one(self, indexed, capsys):
        code, out, _ = run_cli(
            ["query", "--index", str(indexed), "--query", SAMPLE_TITLES[2]],
            capsys,
        )
        assert code == EXIT_OK
        first = out.splitlines()[0]
        assert "1.000000" in first
        assert SAMPLE_TITLES[2] in first

    def test_oov_query_exits_zero_with_count_zero(self, indexed, capsys):
        code, out, _ = run_cli(
            ["query", "--index", str(indexed), "--query", "quantum blockchain"],
            capsys,
        )
        assert code == EXIT_OK
        assert "matches: 0" in out
        assert "dropped terms: blockchain, quantum" in out

    def test_top_k_truncates_but_reports_the_full_count(self, indexed, capsys):
        code, out, _ = run_cli(
            ["query", "--index", str(indexed), "--query", "sistem aplikasi", "--top-k", "2"],
            capsys,
        )
        assert code == EXIT_OK
        lines = out.splitlines()
        result_rows = [line for line in lines if line.startswith(" ")]
        assert len(result_rows) == 2
        assert "matches: 4" in out

    def test_records_format_is_json_per_line_with_exact_fields(self, indexed, capsys):
        code, out, err = run_cli(
            ["query", "--index", str(indexed), "--query", "navigasi gedung",
             "--format", "records"],
            capsys,
        )
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines
        for line in lines:
            record = json.loads(line)
            assert set(record) == {"rank", "id", "title", "score", "count"}
        assert json.loads(lines[0])["rank"] == 1
        assert "matches: 1" in err

    def test_set_scorer_flag(self, indexed, capsys):
        code, out, _ = run_cli(
            ["query", "--index", str(indexed), "--query", SAMPLE_TITLES[3],
             "--scorer", "set"],
            capsys,
        )
        assert code == EXIT_OK
        assert "1.000000" in out.splitlines()[0]

    def test_threshold_filters(self, indexed, capsys):
        _, all_out, _ = run_cli(
            ["query", "--index", str(indexed), "--query", "sistem aplikasi"], capsys
        )
        _, cut_out, _ = run_cli(
            ["query", "--index", str(indexed), "--query", "sistem aplikasi",
             "--threshold", "0.5"],
            capsys,
        )
        assert len(cut_out.splitlines()) <= len(all_out.splitlines())

    def test_corrupt_index_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.idx"
        bad.write_text("not an index", encoding="utf-8")
        code, _, err = run_cli(["query", "--index", str(bad), "--query", "x"], capsys)
        assert code == EXIT_DATA
        assert "corrupt" in err

    def test_byte_identical_output_for_identical_invocations(self, indexed, capsys):
        argv = ["query", "--index", str(indexed), "--query", "sistem monitoring"]
        _, first, _ = run_cli(argv, capsys)
        _, second, _ = run_cli(argv, capsys)
        assert first == second


class TestCmdAdd:
    @pytest.fixture
    def record_pair(self, tmp_path, capsys):
        corpus = tmp_path / "corpus.jsonl"
        records = [
            json.dumps({"id": f"r{i}", "title": title}, ensure_ascii=False)
            for i, title in enumerate(SAMPLE_TITLES, start=1)
        ]
        corpus.write_text("\n".join(records) + "\n", encoding="utf-8")
        index_path = tmp_path / "corpus.idx"
        code = main([
            "index", "--input", str(corpus), "--format", "record",
            "--output", str(index_path),
        ])
        capsys.readouterr()
        assert code == EXIT_OK
        return corpus, index_path

    def test_added_case_is_found_at_one(self, record_pair, capsys):
        corpus, index_path = record_pair
        code, out, _ = run_cli(
            ["add", "--index", str(index_path), "--corpus", str(corpus),
             "--id", "r6", "--title", "Sistem Pakar Diagnosa Penyakit",
             "--solution", "basis aturan"],
            capsys,
        )
        assert code == EXIT_OK
        assert "corpus size: 6" in out
        code, out, _ = run_cli(
            ["query", "--index", str(index_path), "--query",
             "Sistem Pakar Diagnosa Penyakit"],
            capsys,
        )
        assert code == EXIT_OK
        assert "1.000000" in out.splitlines()[0]
        assert "r6" in out.splitlines()[0]

    def test_duplicate_id_exits_2_without_touching_files(self, record_pair, capsys):
        corpus, index_path = record_pair
        corpus_before = corpus.read_bytes()
        index_before = index_path.read_bytes()
        code, _, err = run_cli(
            ["add", "--index", str(index_path), "--corpus", str(corpus),
             "--id", "r1", "--title", "Judul Lain"],
            capsys,
        )
        assert code == EXIT_DATA
        assert "duplicate" in err
        assert corpus.read_bytes() == corpus_before
        assert index_path.read_bytes() == index_before

    def test_empty_tokenizing_title_exits_2(self, record_pair, capsys):
        corpus, index_path = record_pair
        code, _, err = run_cli(
            ["add", "--index", str(index_path), "--corpus", str(corpus),
             "--id", "r7", "--title", "???"],
            capsys,
        )
        assert code == EXIT_DATA
        assert "tokenizes to empty" in err


class TestCmdEval:
    @pytest.fixture
    def titles_file(self, tmp_path):
        path = tmp_path / "titles.txt"
        path.write_text("\n".join(SAMPLE_TITLES) + "\n", encoding="utf-8")
        return path

    def test_stage_counts_match_and_mean_is_one(self, indexed, titles_file, capsys):
        code, out, err = run_cli(
            ["eval", "--index", str(indexed), "--titles", str(titles_file),
             "--seed", "42"],
            capsys,
        )
        assert code == EXIT_OK
        assert err == ""
        assert "mean top score: 1.000000" in out
        for line in out.splitlines():
            if line.startswith("row "):
                fields = dict(part.split("=") for part in line.split(": ", 1)[1].split())
                assert fields["found_stage1"] == fields["found_stage2"]

    def test_different_seeds_same_numbers(self, indexed, titles_file, capsys):
        def numbers(seed):
            code, out, _ = run_cli(
                ["eval", "--index", str(indexed), "--titles", str(titles_file),
                 "--seed", str(seed)],
                capsys,
            )
            assert code == EXIT_OK
            rows = [line for line in out.splitlines() if line.startswith("row ")]
            mean = [line for line in out.splitlines() if line.startswith("mean")]
            return rows, mean

        assert numbers(1) == numbers(99991)

    def test_same_seed_is_byte_deterministic(self, indexed, titles_file, capsys):
        argv = ["eval", "--index", str(indexed), "--titles", str(titles_file),
                "--seed", "7"]
        _, first, _ = run_cli(argv, capsys)
        _, second, _ = run_cli(argv, capsys)
        assert first == second

    def test_non_corpus_phrase_still_balances_counts(self, indexed, tmp_path, capsys):
        titles = tmp_path / "keywords.txt"
        titles.write_text("sistem monitoring jaringan\n", encoding="utf-8")
        code, out, _ = run_cli(
            ["eval", "--index", str(indexed), "--titles", str(titles), "--seed", "3"],
            capsys,
        )
        assert code == EXIT_OK  # top score below 1.0 is fine for a non-stored title
        row = next(line for line in out.splitlines() if line.startswith("row 1:"))
        assert "found_stage1=" in row

    def test_empty_titles_file_exits_2(self, indexed, tmp_path, capsys):
        titles = tmp_path / "empty.txt"
        titles.write_text("\n\n", encoding="utf-8")
        code, _, err = run_cli(
            ["eval", "--index", str(indexed), "--titles", str(titles), "--seed", "1"],
            capsys,
        )
        assert code == EXIT_DATA
        assert "no titles" in err

    def test_count_mismatch_exits_3(self, indexed, titles_file, capsys, monkeypatch):
        # sabotage the shuffle so stage 2 queries something else entirely
        monkeypatch.setattr(cli, "_permute_title", lambda title, seed, row: "navigasi gedung")
        code, _, err = run_cli(
            ["eval", "--index", str(indexed), "--titles", str(titles_file),
             "--seed", "42"],
            capsys,
        )
        assert code == EXIT_PROPERTY
        assert "violation" in err

    def test_degraded_top_score_for_stored_title_exits_3(self, indexed, titles_file, capsys, monkeypatch):
        # doubling the first word keeps the term set (and so the found count)
        # but tilts the query away from the stored title's direction
        def double_first(title, seed, row):
            words = title.split()
            return " ".join([words[0]] + words)

        monkeypatch.setattr(cli, "_permute_title", double_first)
        code, _, err = run_cli(
            ["eval", "--index", str(indexed), "--titles", str(titles_file),
             "--seed", "42"],
            capsys,
        )
        assert code == EXIT_PROPERTY
        assert "expected 1.0" in err


class TestUsageErrors:
    def test_missing_required_flag(self, capsys):
        code, _, err = run_cli(["query", "--query", "x"], capsys)
        assert code == EXIT_USAGE
        assert "--index" in err

    def test_unknown_subcommand(self, capsys):
        code, _, _ = run_cli(["frobnicate"], capsys)
        assert code == EXIT_USAGE

    def test_bad_choice_value(self, indexed, capsys):
        code, _, _ = run_cli(
            ["query", "--index", str(indexed), "--query", "x", "--scorer", "bm25"],
            capsys,
        )
        assert code == EXIT_USAGE

    def test_nonpositive_min_token_len(self, capsys):
        code, _, _ = run_cli(
            ["index", "--input", "x", "--format", "plain", "--output", "y",
             "--min-token-len", "0"],
            capsys,
        )
        assert code == EXIT_USAGE

    def test_nonpositive_top_k(self, indexed, capsys):
        code, _, _ = run_cli(
            ["query", "--index", str(indexed), "--query", "x", "--top-k", "0"],
            capsys,
        )
        assert code == EXIT_USAGE

    def test_help_exits_zero(self, capsys):
        code, out, _ = run_cli(["--help"], capsys)
        assert code == EXIT_OK
        assert "index" in out and "query" in out and "eval" in out
