"""TF-IDF vector space over a corpus of cases.

A term's in-document frequency is its count divided by the document's token
total; its corpus weight multiplies that by ``log10(corpus_size / df)`` where
``df`` is the number of documents containing the term. Every document gets a
sparse weight vector, and an inverted posting list maps each term id to the
``(doc_id, weight)`` pairs of the documents containing it.

The :class:`Index` is an immutable snapshot: build it once, query it from any
number of readers, and construct a new one to change the corpus.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from .errors import DataError, TermNotIndexed
from .preprocess import PreprocessConfig, tokenize

INDEX_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Case:
    """One stored problem: a title plus an optional reusable solution."""

    id: str
    title: str
    solution: str | None = None
    meta: Mapping[str, str] | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise DataError("case id must be non-empty")


@dataclass(frozen=True)
class IngestReport:
    """What an index build did: how many cases went in, which were skipped."""

    indexed: int
    skipped: tuple[tuple[str, str], ...]  # (case_id, reason)
    vocabulary_size: int


class Vocabulary:
    """Bidirectional term <-> dense-id table with per-term document frequency.

    Ids run 0..len-1 in first-occurrence order over the corpus, so rebuilding
    from the same case sequence always reproduces the same ids.
    """

    __slots__ = ("_terms", "_df", "_ids")

    def __init__(self, terms: Sequence[str], document_frequencies: Sequence[int]):
        if len(terms) != len(document_frequencies):
            raise ValueError("terms and document_frequencies must align")
        self._terms = tuple(terms)
        self._df = tuple(document_frequencies)
        self._ids = {term: tid for tid, term in enumerate(self._terms)}

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, term: str) -> bool:
        return term in self._ids

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return self._terms == other._terms and self._df == other._df

    def __repr__(self) -> str:
        return f"Vocabulary({len(self._terms)} terms)"

    @property
    def terms(self) -> tuple[str, ...]:
        return self._terms

    @property
    def document_frequencies(self) -> tuple[int, ...]:
        return self._df

    def lookup(self, term: str) -> int | None:
        """Term id, or None when the term was never indexed."""
        return self._ids.get(term)

    def term_id(self, term: str) -> int:
        tid = self._ids.get(term)
        if tid is None:
            raise TermNotIndexed(f"term not indexed: {term!r}")
        return tid

    def term(self, term_id: int) -> str:
        return self._terms[term_id]

    def document_frequency(self, term: str) -> int:
        """Number of documents containing *term*; 0 for unknown terms."""
        tid = self._ids.get(term)
        return 0 if tid is None else self._df[tid]


@dataclass(frozen=True)
class DocumentVector:
    """Sparse weight vector for one document.

    ``weights`` and ``raw_counts`` are keyed by term id in ascending order;
    ``token_total`` is the document's full token count, the denominator of
    every in-document frequency.
    """

    doc_id: str
    weights: dict[int, float]
    raw_counts: dict[int, int]
    token_total: int


@dataclass(frozen=True)
class QueryVector:
    """A query converted into the index's weight space.

    Tokens that are out of vocabulary, or whose inverse document frequency is
    zero, carry no signal and are reported in ``dropped_terms`` (sorted,
    deduplicated) instead of being scored.
    """

    weights: dict[int, float]
    dropped_terms: tuple[str, ...] = ()


@dataclass(frozen=True)
class QueryTermSet:
    """A query reduced to the set of its indexed term ids.

    Used by the set-overlap scorer; only out-of-vocabulary tokens are
    dropped, since set overlap does not weight terms.
    """

    term_ids: frozenset[int]
    dropped_terms: tuple[str, ...] = ()


def _idf_table(corpus_size: int, document_frequencies: Sequence[int]) -> list[float]:
    return [math.log10(corpus_size / df) for df in document_frequencies]


class Index:
    """Immutable snapshot of an indexed corpus.

    Attributes:
        config: preprocessing settings the corpus was tokenized with.
        vocabulary: term table with document frequencies.
        documents: doc_id -> DocumentVector, in corpus order.
        titles: doc_id -> original title, for display.
        postings: term_id -> list of (doc_id, weight), sorted by doc_id.
        norms: doc_id -> L2 norm of the document's weight vector.
        distinct_terms: doc_id -> number of distinct terms in the document.
    """

    __slots__ = (
        "config",
        "vocabulary",
        "documents",
        "titles",
        "postings",
        "norms",
        "distinct_terms",
        "_idf",
    )

    def __init__(
        self,
        config: PreprocessConfig,
        vocabulary: Vocabulary,
        documents: dict[str, DocumentVector],
        titles: dict[str, str],
        postings: list[list[tuple[str, float]]],
        norms: dict[str, float],
        distinct_terms: dict[str, int],
    ):
        self.config = config
        self.vocabulary = vocabulary
        self.documents = documents
        self.titles = titles
        self.postings = postings
        self.norms = norms
        self.distinct_terms = distinct_terms
        self._idf = _idf_table(len(documents), vocabulary.document_frequencies)

    def __repr__(self) -> str:
        return f"Index({self.corpus_size} documents, {len(self.vocabulary)} terms)"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Index):
            return NotImplemented
        return (
            self.config == other.config
            and self.vocabulary == other.vocabulary
            and self.documents == other.documents
            and self.titles == other.titles
            and self.postings == other.postings
            and self.norms == other.norms
            and self.distinct_terms == other.distinct_terms
        )

    @property
    def corpus_size(self) -> int:
        return len(self.documents)

    @property
    def format_version(self) -> int:
        return INDEX_FORMAT_VERSION

    def idf_by_id(self, term_id: int) -> float:
        return self._idf[term_id]

    def term_frequency(self, term: str, doc_id: str) -> float:
        """In-document frequency: count of *term* over the doc's token total.

        Returns 0.0 for a term absent from the document; raises KeyError for
        an unknown document.
        """
        doc = self.documents.get(doc_id)
        if doc is None:
            raise KeyError(f"document not indexed: {doc_id!r}")
        tid = self.vocabulary.lookup(term)
        if tid is None:
            return 0.0
        return doc.raw_counts.get(tid, 0) / doc.token_total

    def inverse_document_frequency(self, term: str) -> float:
        """log10(corpus_size / document_frequency) for an indexed term.

        Raises :class:`TermNotIndexed` when no document contains the term:
        the ratio is undefined at document frequency zero, and callers on the
        query path treat that as "drop this term".
        """
        tid = self.vocabulary.lookup(term)
        if tid is None:
            raise TermNotIndexed(f"term not indexed: {term!r}")
        return self._idf[tid]

    def tfidf_weight(self, term: str, doc_id: str) -> float:
        """Product of in-document frequency and inverse document frequency.

        Equal to the weight stored in the document's vector.
        """
        return self.term_frequency(term, doc_id) * self.inverse_document_frequency(term)

    def vectorize_query(self, tokens: Sequence[str]) -> QueryVector:
        """Convert query tokens into the corpus weight space.

        The query's own token count is the frequency denominator, mirroring
        how documents are weighted; the corpus idf table supplies the second
        factor. Unknown and zero-idf tokens go to ``dropped_terms``.
        """
        counts: dict[int, int] = {}
        dropped: set[str] = set()
        for token in tokens:
            tid = self.vocabulary.lookup(token)
            if tid is None:
                dropped.add(token)
            else:
                counts[tid] = counts.get(tid, 0) + 1
        token_total = len(tokens)
        weights: dict[int, float] = {}
        for tid in sorted(counts):
            idf = self._idf[tid]
            if idf == 0.0:
                dropped.add(self.vocabulary.term(tid))
            else:
                weights[tid] = (counts[tid] / token_total) * idf
        return QueryVector(weights=weights, dropped_terms=tuple(sorted(dropped)))

    def term_set_query(self, tokens: Sequence[str]) -> QueryTermSet:
        """Reduce query tokens to the set of indexed term ids."""
        ids: set[int] = set()
        dropped: set[str] = set()
        for token in tokens:
            tid = self.vocabulary.lookup(token)
            if tid is None:
                dropped.add(token)
            else:
                ids.add(tid)
        return QueryTermSet(term_ids=frozenset(ids), dropped_terms=tuple(sorted(dropped)))


def _assemble(
    config: PreprocessConfig,
    id_to_term: Sequence[str],
    doc_rows: Sequence[tuple[str, str, dict[int, int]]],
) -> Index:
    """Build an Index from per-document term counts.

    ``doc_rows`` holds (doc_id, title, counts-by-term-id) in corpus order.
    Shared by the corpus builder and the on-disk loader so both compute
    weights through the identical floating-point path.
    """
    df = [0] * len(id_to_term)
    for _, _, counts in doc_rows:
        for tid in counts:
            df[tid] += 1
    corpus_size = len(doc_rows)
    idf = _idf_table(corpus_size, df)

    documents: dict[str, DocumentVector] = {}
    titles: dict[str, str] = {}
    postings: list[list[tuple[str, float]]] = [[] for _ in id_to_term]
    norms: dict[str, float] = {}
    distinct_terms: dict[str, int] = {}
    for doc_id, title, counts in doc_rows:
        token_total = sum(counts.values())
        ordered = sorted(counts)
        weights: dict[int, float] = {}
        raw: dict[int, int] = {}
        norm_sq = 0.0
        for tid in ordered:
            weight = (counts[tid] / token_total) * idf[tid]
            weights[tid] = weight
            raw[tid] = counts[tid]
            norm_sq += weight * weight
            postings[tid].append((doc_id, weight))
        documents[doc_id] = DocumentVector(
            doc_id=doc_id, weights=weights, raw_counts=raw, token_total=token_total
        )
        titles[doc_id] = title
        norms[doc_id] = math.sqrt(norm_sq)
        distinct_terms[doc_id] = len(ordered)
    for plist in postings:
        plist.sort(key=lambda entry: entry[0])

    vocabulary = Vocabulary(id_to_term, df)
    return Index(
        config=config,
        vocabulary=vocabulary,
        documents=documents,
        titles=titles,
        postings=postings,
        norms=norms,
        distinct_terms=distinct_terms,
    )


def build_index(
    cases: Iterable[Case], config: PreprocessConfig | None = None
) -> tuple[Index, IngestReport]:
    """Tokenize every case title and build the vector space over the corpus.

    Term ids are assigned in first-occurrence order over cases in input
    order, making the build deterministic. Cases whose titles tokenize to
    nothing are excluded and reported, not fatal; duplicate ids and a corpus
    with zero indexable cases are.
    """
    if config is None:
        config = PreprocessConfig()
    cases = list(cases)

    seen: set[str] = set()
    for case in cases:
        if case.id in seen:
            raise DataError(f"duplicate case id: {case.id!r}")
        seen.add(case.id)

    id_to_term: list[str] = []
    tid_by_term: dict[str, int] = {}
    doc_rows: list[tuple[str, str, dict[int, int]]] = []
    skipped: list[tuple[str, str]] = []
    for case in cases:
        tokens = tokenize(case.title, config)
        if not tokens:
            skipped.append((case.id, "title tokenizes to empty"))
            continue
        counts: dict[int, int] = {}
        for token in tokens:
            tid = tid_by_term.get(token)
            if tid is None:
                tid = len(id_to_term)
                tid_by_term[token] = tid
                id_to_term.append(token)
            counts[tid] = counts.get(tid, 0) + 1
        doc_rows.append((case.id, case.title, counts))

    if not doc_rows:
        raise DataError("no indexable cases: every title tokenized to empty")

    index = _assemble(config, id_to_term, doc_rows)
    report = IngestReport(
        indexed=len(doc_rows),
        skipped=tuple(skipped),
        vocabulary_size=len(id_to_term),
    )
    return index, report
