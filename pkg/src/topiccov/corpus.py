"""Corpus ingestion, preprocessing, and tf-idf weighting.

Input is one JSON object per line with fields ``id``, ``title``, ``text``.
Tokenization is lowercase alphabetic runs; the dictionary drops stopwords,
words below a total-frequency floor, and words present in more than a given
fraction of documents. A corpus serializes to an archive directory with
``dictionary.txt``, ``docs.jsonl``, and ``meta.json``.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, ParseError

_TOKEN_RE = re.compile(r"[a-z]+")

ARCHIVE_VERSION = 1


@dataclass(frozen=True)
class PreprocessConfig:
    """Knobs for tokenization and dictionary filtering.

    min_freq: minimum total occurrence count for a word to stay.
    max_doc_frac: words in more than this fraction of documents are dropped.
    min_token_len: tokens shorter than this are discarded at tokenization.
    stemmer: optional token -> token hook, identity when None.
    """

    stopwords: frozenset = frozenset()
    min_freq: int = 4
    max_doc_frac: float = 0.5
    min_token_len: int = 2
    stemmer: Optional[Callable[[str], str]] = None

    def echo(self) -> dict:
        return {
            "stopwords": sorted(self.stopwords),
            "min_freq": self.min_freq,
            "max_doc_frac": self.max_doc_frac,
            "min_token_len": self.min_token_len,
            "stemmer": getattr(self.stemmer, "__name__", None) if self.stemmer else None,
        }


class Dictionary:
    """Bijective word <-> contiguous 0-based id mapping."""

    __slots__ = ("words", "index")

    def __init__(self, words: Sequence[str]):
        self.words = list(words)
        self.index = {w: i for i, w in enumerate(self.words)}
        if len(self.index) != len(self.words):
            raise ValueError("duplicate word in dictionary")

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def id_of(self, word: str) -> int:
        return self.index[word]

    def word_of(self, word_id: int) -> str:
        return self.words[word_id]

    def __eq__(self, other):
        return isinstance(other, Dictionary) and self.words == other.words


class Document:
    """One document: display summary plus token-id sequence and counts."""

    __slots__ = ("id", "summary", "counts", "length", "tokens")

    def __init__(self, doc_id: int, summary: str, tokens):
        self.id = int(doc_id)
        self.summary = summary
        self.tokens = np.asarray(tokens, dtype=np.int32)
        ids, cnts = np.unique(self.tokens, return_counts=True)
        self.counts = {int(i): int(c) for i, c in zip(ids, cnts)}
        self.length = int(self.tokens.size)

    def __eq__(self, other):
        return (
            isinstance(other, Document)
            and self.id == other.id
            and self.summary == other.summary
            and np.array_equal(self.tokens, other.tokens)
        )


class Corpus:
    """Immutable preprocessed document collection."""

    def __init__(self, dictionary: Dictionary, documents: Sequence[Document], config_echo: dict | None = None):
        for i, doc in enumerate(documents):
            if doc.id != i:
                raise ValueError("document ids must be contiguous 0..N-1")
            if doc.counts and max(doc.counts) >= len(dictionary):
                raise ValueError(f"document {i} references word id outside dictionary")
        self.dictionary = dictionary
        self.documents = list(documents)
        self.config_echo = config_echo or {}
        self._tfidf = None

    @property
    def n_docs(self) -> int:
        return len(self.documents)

    @property
    def n_words(self) -> int:
        return len(self.dictionary)

    def __eq__(self, other):
        return (
            isinstance(other, Corpus)
            and self.dictionary == other.dictionary
            and self.documents == other.documents
        )

    def counts_matrix(self) -> sp.csr_matrix:
        """N x V document-word count matrix."""
        rows, cols, data = [], [], []
        for doc in self.documents:
            for w, c in doc.counts.items():
                rows.append(doc.id)
                cols.append(w)
                data.append(c)
        return sp.csr_matrix(
            (np.asarray(data, dtype=np.float64), (rows, cols)),
            shape=(self.n_docs, self.n_words),
        )

    def tfidf(self) -> sp.csr_matrix:
        """Cached tf-idf matrix, see tfidf_matrix()."""
        if self._tfidf is None:
            self._tfidf = tfidf_matrix(self)
        return self._tfidf

    # -- serialization -------------------------------------------------

    def save(self, out_dir) -> None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "dictionary.txt").write_text(
            "".join(w + "\n" for w in self.dictionary.words), encoding="utf-8"
        )
        with open(out_dir / "docs.jsonl", "w", encoding="utf-8") as fh:
            for doc in self.documents:
                rec = {
                    "id": doc.id,
                    "summary": doc.summary,
                    "counts": [f"{w}:{c}" for w, c in sorted(doc.counts.items())],
                    "tokens": [int(t) for t in doc.tokens],
                }
                fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
        meta = {
            "version": ARCHIVE_VERSION,
            "n_docs": self.n_docs,
            "n_words": self.n_words,
            "config": self.config_echo,
        }
        (out_dir / "meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, in_dir) -> "Corpus":
        in_dir = Path(in_dir)
        meta = json.loads((in_dir / "meta.json").read_text(encoding="utf-8"))
        if meta.get("version") != ARCHIVE_VERSION:
            raise ParseError(f"unsupported corpus archive version {meta.get('version')}")
        words = (in_dir / "dictionary.txt").read_text(encoding="utf-8").splitlines()
        dictionary = Dictionary(words)
        documents = []
        with open(in_dir / "docs.jsonl", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                    doc = Document(rec["id"], rec["summary"], rec["tokens"])
                    stored = dict(
                        (int(k), int(v))
                        for k, v in (pair.split(":") for pair in rec["counts"])
                    )
                except (ValueError, KeyError, TypeError) as exc:
                    raise ParseError(f"bad document record: {exc}", line=lineno) from exc
                if stored != doc.counts:
                    raise ParseError("counts inconsistent with token sequence", line=lineno)
                documents.append(doc)
        return cls(dictionary, documents, config_echo=meta.get("config", {}))


def tokenize(text: str, config: PreprocessConfig) -> list[str]:
    """Lowercase alphabetic-run tokens, length-filtered, stopped, stemmed."""
    out = []
    for tok in _TOKEN_RE.findall(text.lower()):
        if len(tok) < config.min_token_len:
            continue
        if tok in config.stopwords:
            continue
        if config.stemmer is not None:
            tok = config.stemmer(tok)
            if not tok:
                continue
        out.append(tok)
    return out


def _summary_of(title: str, text: str) -> str:
    title = (title or "").strip()
    if title:
        return title
    return (text or "").strip()[:80]


def ingest(path, config: PreprocessConfig = PreprocessConfig()) -> Corpus:
    """Read a JSONL document collection and build the preprocessed Corpus."""
    raw_docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON: {exc.msg}", line=lineno) from exc
            if not isinstance(rec, dict) or "text" not in rec:
                raise ParseError("expected an object with a 'text' field", line=lineno)
            tokens = tokenize(str(rec.get("text", "")), config)
            raw_docs.append((_summary_of(rec.get("title", ""), str(rec.get("text", ""))), tokens))
    return build_corpus(raw_docs, config)


def build_corpus(raw_docs: Iterable[tuple[str, list[str]]], config: PreprocessConfig) -> Corpus:
    """Build the dictionary (with frequency filters) and id-mapped documents."""
    raw_docs = list(raw_docs)
    n_docs = len(raw_docs)
    total_freq: dict[str, int] = {}
    doc_freq: dict[str, int] = {}
    for _, tokens in raw_docs:
        seen = set()
        for tok in tokens:
            total_freq[tok] = total_freq.get(tok, 0) + 1
            if tok not in seen:
                seen.add(tok)
                doc_freq[tok] = doc_freq.get(tok, 0) + 1
    max_df = config.max_doc_frac * n_docs
    kept = sorted(
        w
        for w, freq in total_freq.items()
        if freq >= config.min_freq and doc_freq[w] <= max_df
    )
    if not kept:
        raise ConfigError("preprocessing produced an empty dictionary")
    dictionary = Dictionary(kept)
    documents = []
    for i, (summary, tokens) in enumerate(raw_docs):
        ids = [dictionary.id_of(t) for t in tokens if t in dictionary]
        documents.append(Document(i, summary, ids))
    return Corpus(dictionary, documents, config_echo=config.echo())


def tfidf_matrix(corpus: Corpus) -> sp.csr_matrix:
    """Smoothed tf-idf with L2-normalized rows.

    weight(d, w) = count(d, w) * (ln((1+N)/(1+df(w))) + 1), rows then scaled
    to unit Euclidean norm; empty documents stay all-zero.
    """
    if corpus.n_docs == 0:
        raise ValueError("empty corpus")
    counts = corpus.counts_matrix()
    df = np.asarray((counts > 0).sum(axis=0)).ravel()
    idf = np.log((1.0 + corpus.n_docs) / (1.0 + df)) + 1.0
    weighted = counts.multiply(idf[np.newaxis, :]).tocsr()
    norms = np.sqrt(np.asarray(weighted.multiply(weighted).sum(axis=1)).ravel())
    scale = np.divide(1.0, norms, out=np.zeros_like(norms), where=norms > 0)
    return sp.diags(scale).dot(weighted).tocsr()


def average_tfidf(corpus: Corpus, doc_ids) -> np.ndarray:
    """Component-wise mean of the selected documents' tf-idf rows."""
    doc_ids = sorted(set(int(d) for d in doc_ids))
    if not doc_ids:
        raise ValueError("doc_ids must be non-empty")
    if doc_ids[0] < 0 or doc_ids[-1] >= corpus.n_docs:
        raise ValueError("doc id out of range")
    rows = corpus.tfidf()[doc_ids]
    return np.asarray(rows.mean(axis=0)).ravel()


def token_stream(corpus: Corpus) -> tuple[np.ndarray, np.ndarray]:
    """Flatten the corpus into parallel (doc_id, word_id) token arrays."""
    total = sum(doc.length for doc in corpus.documents)
    doc_of = np.empty(total, dtype=np.int32)
    word_of = np.empty(total, dtype=np.int32)
    pos = 0
    for doc in corpus.documents:
        doc_of[pos : pos + doc.length] = doc.id
        word_of[pos : pos + doc.length] = doc.tokens
        pos += doc.length
    return doc_of, word_of
