"""TF-IDF scoring of comment terms against a reference web corpus.

tf is computed over the comment being scored; idf over the corpus document
frequencies. Terms absent from the corpus are smoothed with df=1 so novel
place names keep a nonzero score instead of being dropped.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ContractError

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase and split on whitespace/punctuation; empty tokens dropped."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class Corpus:
    """Reference document collection with per-term document frequencies."""

    documents: tuple[tuple[str, Counter], ...]  # (doc_id, token multiset)
    doc_frequency: dict[str, int]
    term_occurrences: dict[str, int]  # total occurrences, for the corpus-tf variant
    total_tokens: int

    @property
    def document_count(self) -> int:
        return len(self.documents)


def build_corpus(documents: list[tuple[str, str]]) -> Corpus:
    """Count distinct-document frequencies over (doc_id, text) pairs."""
    if not documents:
        raise ContractError("corpus must contain at least one document (idf undefined)")
    ids = [doc_id for doc_id, _ in documents]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise ContractError(f"duplicate doc_ids: {dupes}")
    docs = []
    df: Counter[str] = Counter()
    occurrences: Counter[str] = Counter()
    total = 0
    for doc_id, text in documents:
        tokens = tokenize(text)
        docs.append((doc_id, Counter(tokens)))
        occurrences.update(tokens)
        total += len(tokens)
        df.update(set(tokens))
    return Corpus(
        documents=tuple(docs),
        doc_frequency=dict(df),
        term_occurrences=dict(occurrences),
        total_tokens=total,
    )


def load_corpus_dir(path: str | Path) -> Corpus:
    """Build a corpus from a directory of UTF-8 .txt files (filename = doc_id)."""
    path = Path(path)
    docs = []
    for f in sorted(path.glob("*.txt")):
        docs.append((f.stem, f.read_text(encoding="utf-8")))
    return build_corpus(docs)


@dataclass(frozen=True)
class TermScore:
    term: str
    tf: float
    idf: float
    tfidf: float


@dataclass(frozen=True)
class TopLConfig:
    """Top-l term selection; the remaining terms of a comment score 0.

    tf_source="comment" (default) computes tf inside the comment being
    scored; "corpus" is the non-default variant computing tf as the term's
    share of all corpus tokens.
    """

    l: int = 3
    tf_source: str = "comment"

    def __post_init__(self):
        if self.l < 1:
            raise ContractError(f"l must be >= 1, got {self.l}")
        if self.tf_source not in ("comment", "corpus"):
            raise ContractError(f"unknown tf_source {self.tf_source!r}")


def _idf(term: str, corpus: Corpus) -> float:
    df = corpus.doc_frequency.get(term, 1)  # df=1 smoothing for novel terms
    return math.log(corpus.document_count / df)


def tfidf_score(term: str, comment_tokens: list[str], corpus: Corpus) -> TermScore:
    """Score one term of a comment: tf within the comment, idf from the corpus."""
    if not comment_tokens:
        raise ContractError("comment_tokens must be nonempty")
    tf = comment_tokens.count(term) / len(comment_tokens)
    idf = _idf(term, corpus)
    return TermScore(term=term, tf=tf, idf=idf, tfidf=tf * idf)


def _corpus_tf_score(term: str, corpus: Corpus) -> TermScore:
    tf = corpus.term_occurrences.get(term, 0) / corpus.total_tokens if corpus.total_tokens else 0.0
    idf = _idf(term, corpus)
    return TermScore(term=term, tf=tf, idf=idf, tfidf=tf * idf)


def comment_features(
    comment: str, corpus: Corpus, cfg: TopLConfig = TopLConfig()
) -> tuple[float, float, list[str]]:
    """Return (max, sum-over-top-l, top-l terms) of TF-IDF scores for a comment.

    Ties in the top-l selection break lexicographically on the term.
    """
    tokens = tokenize(comment)
    if not tokens:
        return 0.0, 0.0, []
    if cfg.tf_source == "comment":
        scores = [tfidf_score(t, tokens, corpus) for t in sorted(set(tokens))]
    else:
        scores = [_corpus_tf_score(t, corpus) for t in sorted(set(tokens))]
    scores.sort(key=lambda s: (-s.tfidf, s.term))
    top = scores[: cfg.l]
    return scores[0].tfidf, sum(s.tfidf for s in top), [s.term for s in top]
