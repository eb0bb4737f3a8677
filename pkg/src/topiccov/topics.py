"""Topic, TopicModel, and ReferenceTopicSet types plus their JSON files.

A topic is a pair of non-negative weight vectors, one over the dictionary
and one over the corpus documents. Reference topics are built from
annotated word/document id lists as a weighted combination of a binary
bag-of-words vector and the mean tf-idf vector of the topic's documents.
"""

from __future__ import annotations

import json
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .corpus import Corpus, average_tfidf
from .errors import FormatError
from .sparsevec import SparseVector

MODEL_FORMAT = "topiccov-model"
REFSET_FORMAT = "topiccov-refset"
FILE_VERSION = 1

# word-vector combination weights per descriptor preference
PREFERENCE_WEIGHTS = {
    "words": (0.8, 0.2),
    "docs": (0.2, 0.8),
    "both": (0.5, 0.5),
}


class ModelType(str, Enum):
    LDA = "LDA"
    FIXED_LDA = "FIXED_LDA"
    NMF = "NMF"
    EXTERNAL = "EXTERNAL"


class Topic:
    """One topic: word weights over V, document weights over N."""

    __slots__ = ("word_weights", "doc_weights", "label")

    def __init__(self, word_weights: SparseVector, doc_weights: SparseVector, label: Optional[str] = None):
        if not isinstance(word_weights, SparseVector) or not isinstance(doc_weights, SparseVector):
            raise TypeError("word_weights and doc_weights must be SparseVector")
        if word_weights.nnz == 0 and doc_weights.nnz == 0:
            raise ValueError("topic must have at least one non-zero weight")
        self.word_weights = word_weights
        self.doc_weights = doc_weights
        self.label = label

    @classmethod
    def from_dense(cls, word_weights, doc_weights, label=None) -> "Topic":
        return cls(
            SparseVector.from_dense(np.asarray(word_weights, dtype=np.float64)),
            SparseVector.from_dense(np.asarray(doc_weights, dtype=np.float64)),
            label=label,
        )

    def __eq__(self, other):
        return (
            isinstance(other, Topic)
            and self.word_weights == other.word_weights
            and self.doc_weights == other.doc_weights
            and self.label == other.label
        )


class TopicModel:
    """Ordered set of topics with training provenance."""

    def __init__(self, topics: Sequence[Topic], model_type: ModelType, seed: int, label: Optional[str] = None):
        topics = list(topics)
        if not topics:
            raise ValueError("model must contain at least one topic")
        self.topics = topics
        self.model_type = ModelType(model_type)
        self.seed = int(seed)
        self.label = label

    @property
    def n_topics(self) -> int:
        return len(self.topics)

    def __eq__(self, other):
        return (
            isinstance(other, TopicModel)
            and self.topics == other.topics
            and self.model_type == other.model_type
            and self.seed == other.seed
        )


class ReferenceTopicSet:
    """Topics treated as evaluation ground truth."""

    def __init__(self, topics: Sequence[Topic], sizes=None, categories=None):
        topics = list(topics)
        if not topics:
            raise ValueError("reference set must contain at least one topic")
        if sizes is not None and len(sizes) != len(topics):
            raise ValueError("sizes length must match topics")
        if categories is not None and len(categories) != len(topics):
            raise ValueError("categories length must match topics")
        self.topics = topics
        self.sizes = None if sizes is None else [int(s) for s in sizes]
        self.categories = None if categories is None else list(categories)

    @property
    def n_topics(self) -> int:
        return len(self.topics)

    def select(self, indices) -> "ReferenceTopicSet":
        indices = list(indices)
        return ReferenceTopicSet(
            [self.topics[i] for i in indices],
            sizes=None if self.sizes is None else [self.sizes[i] for i in indices],
            categories=None if self.categories is None else [self.categories[i] for i in indices],
        )

    def __eq__(self, other):
        return (
            isinstance(other, ReferenceTopicSet)
            and self.topics == other.topics
            and self.sizes == other.sizes
            and self.categories == other.categories
        )


def build_reference_topic(word_ids, doc_ids, preference: str, corpus: Corpus, label=None) -> Topic:
    """Construct a reference topic from annotated word and document ids.

    The document vector is the binary indicator of doc_ids. The word vector
    is word_weight * indicator(word_ids) + doc_weight * mean tf-idf of
    doc_ids, with (word_weight, doc_weight) picked by the preference label:
    words (0.8, 0.2), docs (0.2, 0.8), both (0.5, 0.5).
    """
    preference = str(preference).lower()
    if preference not in PREFERENCE_WEIGHTS:
        raise ValueError(f"unknown preference {preference!r}")
    word_ids = sorted(set(int(w) for w in word_ids))
    doc_ids = sorted(set(int(d) for d in doc_ids))
    if not word_ids or not doc_ids:
        raise ValueError("word_ids and doc_ids must be non-empty")
    if word_ids[0] < 0 or word_ids[-1] >= corpus.n_words:
        raise ValueError("word id out of range")
    word_weight, doc_weight = PREFERENCE_WEIGHTS[preference]
    vec = doc_weight * average_tfidf(corpus, doc_ids)
    vec[word_ids] += word_weight
    doc_dense = np.zeros(corpus.n_docs, dtype=np.float64)
    doc_dense[doc_ids] = 1.0
    return Topic.from_dense(vec, doc_dense, label=label)


def top_words(topic: Topic, k: int) -> list[tuple[int, float]]:
    """k largest word weights, descending; ties break on ascending word id.

    Returns only the non-zero support when it is smaller than k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    sv = topic.word_weights
    if sv.nnz == 0:
        return []
    # sort by (-weight, id); indices are already ascending so a stable sort
    # on descending weight preserves the id tie rule
    order = np.argsort(-sv.values, kind="stable")[:k]
    return [(int(sv.indices[i]), float(sv.values[i])) for i in order]


def top_documents(topic: Topic, k: int) -> list[tuple[int, float]]:
    """Same ranking rule as top_words, applied to the document vector."""
    if k < 1:
        raise ValueError("k must be >= 1")
    sv = topic.doc_weights
    if sv.nnz == 0:
        return []
    order = np.argsort(-sv.values, kind="stable")[:k]
    return [(int(sv.indices[i]), float(sv.values[i])) for i in order]


# -- serialization ------------------------------------------------------


def _topic_to_json(topic: Topic) -> dict:
    return {
        "label": topic.label,
        "words": [[i, v] for i, v in topic.word_weights.pairs()],
        "docs": [[i, v] for i, v in topic.doc_weights.pairs()],
    }


def _topic_from_json(rec: dict, n_words: int, n_docs: int) -> Topic:
    try:
        words = SparseVector.from_pairs(n_words, [(int(i), float(v)) for i, v in rec["words"]])
        docs = SparseVector.from_pairs(n_docs, [(int(i), float(v)) for i, v in rec["docs"]])
        return Topic(words, docs, label=rec.get("label"))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad topic record: {exc}") from exc


def save_model(model: TopicModel, path) -> None:
    n_words = model.topics[0].word_weights.size
    n_docs = model.topics[0].doc_weights.size
    doc = {
        "format": MODEL_FORMAT,
        "version": FILE_VERSION,
        "model_type": model.model_type.value,
        "T": model.n_topics,
        "seed": model.seed,
        "V": n_words,
        "N": n_docs,
        "label": model.label,
        "topics": [_topic_to_json(t) for t in model.topics],
    }
    Path(path).write_text(json.dumps(doc) + "\n", encoding="utf-8")


def load_model(path) -> TopicModel:
    doc = _read_json(path, MODEL_FORMAT)
    topics = [_topic_from_json(rec, doc["V"], doc["N"]) for rec in doc["topics"]]
    if doc["T"] != len(topics) or doc["T"] < 1:
        raise FormatError(f"topic count {doc['T']} inconsistent with payload")
    model = TopicModel(topics, ModelType(doc["model_type"]), doc["seed"], label=doc.get("label"))
    return model


def save_refset(refset: ReferenceTopicSet, path) -> None:
    n_words = refset.topics[0].word_weights.size
    n_docs = refset.topics[0].doc_weights.size
    doc = {
        "format": REFSET_FORMAT,
        "version": FILE_VERSION,
        "V": n_words,
        "N": n_docs,
        "topics": [_topic_to_json(t) for t in refset.topics],
    }
    if refset.sizes is not None:
        doc["sizes"] = refset.sizes
    if refset.categories is not None:
        doc["categories"] = refset.categories
    Path(path).write_text(json.dumps(doc) + "\n", encoding="utf-8")


def load_refset(path) -> ReferenceTopicSet:
    doc = _read_json(path, REFSET_FORMAT)
    topics = [_topic_from_json(rec, doc["V"], doc["N"]) for rec in doc["topics"]]
    return ReferenceTopicSet(topics, sizes=doc.get("sizes"), categories=doc.get("categories"))


def _read_json(path, expected_format: str) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc.msg})") from exc
    if not isinstance(doc, dict) or doc.get("format") != expected_format:
        raise FormatError(f"{path}: not a {expected_format} file")
    if doc.get("version") != FILE_VERSION:
        raise FormatError(f"{path}: unsupported version {doc.get('version')}")
    return doc
