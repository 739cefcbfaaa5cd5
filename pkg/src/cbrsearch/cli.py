"""Command-line front end wiring the pipeline end to end.

Subcommands: ``index`` builds an index file from a corpus, ``query`` ranks
matches for a keyword or full-title query, ``add`` retains a new case into a
corpus/index pair, and ``eval`` runs the two-stage word-order experiment
(every title queried verbatim, then with its words deterministically
shuffled; both stages must find the same titles).

Exit codes: 0 success, 1 usage error, 2 data or I/O error, 3 search property
violation (``eval`` only).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from .casebase import CaseBase
from .errors import DataError, SearchError
from .index import Case, Index, build_index
from .preprocess import PreprocessConfig, load_stopwords, tokenize
from .similarity import rank
from .store import append_case, load_index, read_corpus, save_index

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_PROPERTY = 3

SCORE_TOLERANCE = 1e-9  # stage-2 top score must sit this close to 1.0


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1; argparse's default of 2 is reserved for data/IO
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="cbrsearch",
        description="TF-IDF title search with a case-based retrieve/reuse/revise/retain cycle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="build an index file from a corpus")
    p_index.add_argument("--input", required=True, help="corpus file to ingest")
    p_index.add_argument("--format", required=True, choices=["record", "plain"],
                         help="corpus layout: JSON records or one title per line")
    p_index.add_argument("--output", required=True, help="index file to write")
    p_index.add_argument("--stopwords", help="optional stopword file, one word per line")
    p_index.add_argument("--min-token-len", type=_positive_int, default=1,
                         help="drop tokens shorter than this (default 1)")
    p_index.set_defaults(func=cmd_index)

    p_query = sub.add_parser("query", help="rank matches for a keyword or title query")
    p_query.add_argument("--index", required=True, help="index file to search")
    p_query.add_argument("--query", required=True, help="query text")
    p_query.add_argument("--scorer", choices=["cosine", "set"], default="cosine")
    p_query.add_argument("--threshold", type=float, default=0.0,
                         help="keep matches scoring strictly above this (default 0)")
    p_query.add_argument("--top-k", type=_positive_int, help="print at most this many rows")
    p_query.add_argument("--format", choices=["table", "records"], default="table")
    p_query.set_defaults(func=cmd_query)

    p_add = sub.add_parser("add", help="retain a new case into a corpus/index pair")
    p_add.add_argument("--index", required=True, help="index file to update")
    p_add.add_argument("--corpus", required=True, help="record-mode corpus file to append to")
    p_add.add_argument("--id", required=True, help="new case id")
    p_add.add_argument("--title", required=True, help="new case title")
    p_add.add_argument("--solution", help="optional solution payload")
    p_add.set_defaults(func=cmd_add)

    p_eval = sub.add_parser("eval", help="run the two-stage word-order experiment")
    p_eval.add_argument("--index", required=True, help="index file to search")
    p_eval.add_argument("--titles", required=True, help="file with one query title per line")
    p_eval.add_argument("--seed", required=True, type=int, help="shuffle seed")
    p_eval.add_argument("--scorer", choices=["cosine", "set"], default="cosine")
    p_eval.set_defaults(func=cmd_eval)

    return parser


def cmd_index(args) -> int:
    stopwords = load_stopwords(args.stopwords) if args.stopwords else frozenset()
    config = PreprocessConfig(
        stopwords=frozenset(stopwords), min_token_length=args.min_token_len
    )
    cases = read_corpus(args.input, args.format)
    index, report = build_index(cases, config)
    save_index(index, args.output)
    print(f"cases indexed: {report.indexed}")
    print(f"cases skipped: {len(report.skipped)}")
    for case_id, reason in report.skipped:
        print(f"  skipped {case_id}: {reason}")
    print(f"vocabulary size: {report.vocabulary_size}")
    print(f"index written: {args.output}")
    return EXIT_OK


def _query_for(index: Index, text: str, scorer: str):
    tokens = tokenize(text, index.config)
    if scorer == "set":
        return index.term_set_query(tokens)
    return index.vectorize_query(tokens)


def cmd_query(args) -> int:
    index = load_index(args.index)
    query = _query_for(index, args.query, args.scorer)
    results = rank(index, query, threshold=args.threshold, top_k=args.top_k)

    if args.format == "records":
        for match in results.matches:
            record = {
                "rank": match.rank,
                "id": match.case_id,
                "title": index.titles[match.case_id],
                "score": round(match.score, 6),
                "count": results.total_matches,
            }
            print(json.dumps(record, ensure_ascii=False))
        # keep stdout pure JSONL; the summary goes to stderr
        print(f"matches: {results.total_matches}", file=sys.stderr)
        if results.dropped_terms:
            print("dropped terms: " + ", ".join(results.dropped_terms), file=sys.stderr)
        return EXIT_OK

    for match in results.matches:
        print(f"{match.rank:>4}  {match.score:.6f}  {match.case_id}  {index.titles[match.case_id]}")
    print(f"matches: {results.total_matches}")
    dropped = ", ".join(results.dropped_terms) if results.dropped_terms else "(none)"
    print(f"dropped terms: {dropped}")
    return EXIT_OK


def cmd_add(args) -> int:
    index = load_index(args.index)
    cases = read_corpus(args.corpus, "record")
    base = CaseBase(cases, index.config)
    new_case = Case(id=args.id, title=args.title, solution=args.solution)
    base = base.retain(new_case)  # validates before any file is touched
    append_case(args.corpus, new_case)
    save_index(base.index, args.index)
    print(f"corpus size: {base.index.corpus_size}")
    return EXIT_OK


@dataclass(frozen=True)
class EvalRow:
    original_query: str
    permuted_query: str
    found_stage1: int
    found_stage2: int
    top_score_stage2: float


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[EvalRow, ...]
    mean_top_score: float
    seed: int
    scorer: str


def _permute_title(title: str, seed: int, row: int) -> str:
    """Shuffle the whitespace-separated words of a raw title.

    Seeded by (seed, row number) so runs are reproducible; shuffling happens
    before preprocessing, on surface words.
    """
    words = title.split()
    random.Random(f"{seed}:{row}").shuffle(words)
    return " ".join(words)


def _found(index: Index, text: str, scorer: str) -> tuple[int, float]:
    results = rank(index, _query_for(index, text, scorer))
    top = results.top.score if results.top else 0.0
    return results.total_matches, top


def run_two_stage_eval(
    index: Index, titles: list[str], seed: int, scorer: str
) -> tuple[EvalReport, list[str]]:
    """Query each title verbatim, then word-shuffled, and compare the stages.

    Returns the report plus a list of violations: any row where the shuffled
    query found a different number of titles, or where a title stored in the
    corpus failed to come back with a top score of 1.0.
    """
    stored_titles = set(index.titles.values())
    rows: list[EvalRow] = []
    violations: list[str] = []
    for row_number, title in enumerate(titles, start=1):
        found1, _ = _found(index, title, scorer)
        permuted = _permute_title(title, seed, row_number)
        found2, top2 = _found(index, permuted, scorer)
        rows.append(
            EvalRow(
                original_query=title,
                permuted_query=permuted,
                found_stage1=found1,
                found_stage2=found2,
                top_score_stage2=top2,
            )
        )
        if found2 != found1:
            violations.append(
                f"row {row_number}: stage-2 found {found2} titles, stage-1 found {found1}"
            )
        elif title in stored_titles and abs(top2 - 1.0) > SCORE_TOLERANCE:
            violations.append(
                f"row {row_number}: stage-2 top score {top2:.6f} for a stored title"
                " (expected 1.0)"
            )
    mean = sum(r.top_score_stage2 for r in rows) / len(rows)
    report = EvalReport(rows=tuple(rows), mean_top_score=mean, seed=seed, scorer=scorer)
    return report, violations


def cmd_eval(args) -> int:
    index = load_index(args.index)
    try:
        raw = Path(args.titles).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read titles file {args.titles}: {exc}") from exc
    titles = [line for line in raw.splitlines() if line.strip()]
    if not titles:
        raise DataError(f"titles file {args.titles} contains no titles")

    report, violations = run_two_stage_eval(index, titles, args.seed, args.scorer)
    print(f"seed: {report.seed}")
    print(f"scorer: {report.scorer}")
    for row_number, row in enumerate(report.rows, start=1):
        print(
            f"row {row_number}: found_stage1={row.found_stage1} "
            f"found_stage2={row.found_stage2} "
            f"top_score_stage2={row.top_score_stage2:.6f}"
        )
        print(f"  stage1: {row.original_query}")
        print(f"  stage2: {row.permuted_query}")
    print(f"mean top score: {report.mean_top_score:.6f}")
    if violations:
        for violation in violations:
            print(f"violation: {violation}", file=sys.stderr)
        return EXIT_PROPERTY
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse printed its message already
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except SearchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def entry() -> None:
    raise SystemExit(main(sys.argv[1:]))
