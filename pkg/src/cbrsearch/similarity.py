"""Query-document scorers and the ranking pipeline.

Two scorers are provided. The default weighted cosine works over TF-IDF
vectors; the set-overlap scorer compares the bare term sets,
``|X ∩ Y| / (sqrt(|X|) * sqrt(|Y|))``, which is exactly the cosine of the
corresponding 0/1 incidence vectors. Both return values in [0, 1], both are
symmetric, and both are invariant to positive per-vector scaling of weights.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass

from .index import Index, QueryTermSet, QueryVector


@dataclass(frozen=True)
class RankedMatch:
    case_id: str
    score: float
    rank: int


@dataclass(frozen=True)
class RankedResults:
    """Ordered matches for one query.

    ``total_matches`` counts every document scoring above the threshold,
    before any top-k truncation. Empty results still carry ``dropped_terms``
    so a query that lost all its tokens is distinguishable from one that
    simply matched nothing.
    """

    matches: tuple[RankedMatch, ...]
    total_matches: int
    scorer: str
    threshold: float
    dropped_terms: tuple[str, ...]

    def __bool__(self) -> bool:
        return bool(self.matches)

    @property
    def top(self) -> RankedMatch | None:
        return self.matches[0] if self.matches else None


def _norm(vector: Mapping) -> float:
    total = 0.0
    for key in sorted(vector):
        value = vector[key]
        total += value * value
    return math.sqrt(total)


def cosine_similarity(x: Mapping, y: Mapping) -> float:
    """Cosine of the angle between two nonnegative sparse vectors.

    Returns 0.0 when either vector is zero or empty. The result is clamped
    to 1.0 to absorb last-bit rounding on identical-direction vectors.
    """
    if not x or not y:
        return 0.0
    if len(x) > len(y):
        x, y = y, x
    dot = 0.0
    for key in sorted(x):  # fixed order keeps sums reproducible
        if key in y:
            dot += x[key] * y[key]
    if dot == 0.0:
        return 0.0
    norm_x = _norm(x)
    norm_y = _norm(y)
    if norm_x == 0.0 or norm_y == 0.0:
        return 0.0
    return min(dot / (norm_x * norm_y), 1.0)


def set_similarity(x, y) -> float:
    """Overlap of two term sets: ``|X ∩ Y| / (sqrt(|X|) * sqrt(|Y|))``.

    Returns 0.0 when either set is empty.
    """
    if not x or not y:
        return 0.0
    shared = len(x & y)
    if shared == 0:
        return 0.0
    return min(shared / (math.sqrt(len(x)) * math.sqrt(len(y))), 1.0)


def _score_vector(index: Index, query: QueryVector) -> list[tuple[str, float]]:
    """Cosine scores for every document reachable through the postings."""
    if not query.weights:
        return []
    accumulated: dict[str, float] = {}
    for tid in sorted(query.weights):
        query_weight = query.weights[tid]
        for doc_id, doc_weight in index.postings[tid]:
            accumulated[doc_id] = accumulated.get(doc_id, 0.0) + query_weight * doc_weight
    query_norm = 0.0
    for tid in sorted(query.weights):
        weight = query.weights[tid]
        query_norm += weight * weight
    query_norm = math.sqrt(query_norm)
    scored = []
    for doc_id, dot in accumulated.items():
        denominator = query_norm * index.norms[doc_id]
        score = min(dot / denominator, 1.0) if denominator else 0.0
        scored.append((doc_id, score))
    return scored


def _score_sets(index: Index, query: QueryTermSet) -> list[tuple[str, float]]:
    """Set-overlap scores for every document sharing a term with the query."""
    if not query.term_ids:
        return []
    shared: dict[str, int] = {}
    for tid in sorted(query.term_ids):
        for doc_id, _weight in index.postings[tid]:
            shared[doc_id] = shared.get(doc_id, 0) + 1
    query_norm = math.sqrt(len(query.term_ids))
    scored = []
    for doc_id, overlap in shared.items():
        score = overlap / (query_norm * math.sqrt(index.distinct_terms[doc_id]))
        scored.append((doc_id, min(score, 1.0)))
    return scored


def rank(
    index: Index,
    query: QueryVector | QueryTermSet,
    *,
    threshold: float = 0.0,
    top_k: int | None = None,
) -> RankedResults:
    """Score, filter, and order every candidate document for *query*.

    Only documents sharing at least one scored term with the query are
    materialized; everything else scores zero implicitly. Matches must score
    strictly above *threshold*. Ordering is by descending score with ties
    broken by ascending case id, and ``top_k`` truncates the list without
    changing the reported total.
    """
    if isinstance(query, QueryVector):
        scorer = "cosine"
        scored = _score_vector(index, query)
    elif isinstance(query, QueryTermSet):
        scorer = "set"
        scored = _score_sets(index, query)
    else:
        raise TypeError(f"query must be QueryVector or QueryTermSet, got {type(query).__name__}")
    if top_k is not None and top_k < 1:
        raise ValueError(f"top_k must be positive, got {top_k}")

    kept = [(doc_id, score) for doc_id, score in scored if score > threshold]
    kept.sort(key=lambda item: (-item[1], item[0]))
    total = len(kept)
    if top_k is not None:
        kept = kept[:top_k]
    matches = tuple(
        RankedMatch(case_id=doc_id, score=score, rank=position)
        for position, (doc_id, score) in enumerate(kept, start=1)
    )
    return RankedResults(
        matches=matches,
        total_matches=total,
        scorer=scorer,
        threshold=threshold,
        dropped_terms=query.dropped_terms,
    )
