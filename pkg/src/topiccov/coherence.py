"""Corpus-based topic coherence from sliding-window co-occurrence counts.

Three scores over a topic's top words (default 10): mean pairwise NPMI,
a confirmation score comparing each word against the event "any other top
word occurs in the window" (conditional-probability difference), and an
indirect score comparing each word's NPMI profile vector against the
summed profiles of its higher-weighted top words (cosine similarity).

Default window sizes differ per score and are exposed as arguments:
NPMI 10, the confirmation score 70, the profile score 110.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from .corpus import Corpus
from .topics import Topic, top_words

WINDOW_NPMI = 10
WINDOW_CP = 70
WINDOW_CV = 110


class CooccurrenceStats:
    """Window occurrence counts for words, pairs, and word sets.

    Built from a corpus it also retains, per word, the ids of windows
    containing the word, which makes arbitrary set-event queries exact.
    Constructed from explicit counts (from_counts) it answers word and
    pair queries only.
    """

    def __init__(self, window_size: int, total_windows: int, word_windows: dict, pair_windows: dict | None = None, postings: dict | None = None):
        if window_size < 1:
            raise ValueError("window_size must be >= 1")
        self.window_size = int(window_size)
        self.total_windows = int(total_windows)
        self.word_windows = word_windows
        self._pair_windows = dict(pair_windows) if pair_windows else {}
        self._postings = postings

    @classmethod
    def from_counts(cls, window_size, total_windows, word_windows, pair_windows):
        return cls(window_size, total_windows, dict(word_windows), dict(pair_windows))

    @property
    def epsilon(self) -> float:
        return 1.0 / self.total_windows

    def word_count(self, word: int) -> int:
        return self.word_windows.get(word, 0)

    def pair_count(self, w1: int, w2: int) -> int:
        key = (w1, w2) if w1 <= w2 else (w2, w1)
        if key in self._pair_windows:
            return self._pair_windows[key]
        if self._postings is None:
            return 0
        a = self._postings.get(w1)
        b = self._postings.get(w2)
        count = 0 if a is None or b is None else int(np.intersect1d(a, b, assume_unique=True).size)
        self._pair_windows[key] = count
        return count

    def set_count(self, words) -> int:
        """Windows containing at least one of the given words."""
        union = self._union(words)
        return int(union.size)

    def joint_set_count(self, word: int, words) -> int:
        """Windows containing `word` and at least one of `words`."""
        if self._postings is None:
            raise ValueError("set-event queries need corpus-built statistics")
        own = self._postings.get(word)
        if own is None:
            return 0
        union = self._union(words)
        return int(np.intersect1d(own, union, assume_unique=True).size)

    def _union(self, words):
        if self._postings is None:
            raise ValueError("set-event queries need corpus-built statistics")
        arrays = [self._postings[w] for w in words if w in self._postings]
        if not arrays:
            return np.empty(0, dtype=np.int64)
        return np.unique(np.concatenate(arrays))


def count_cooccurrences(corpus: Corpus, window_size: int) -> CooccurrenceStats:
    """Slide a window over each document's token sequence (step 1).

    A word or pair is counted once per window containing it; documents
    shorter than the window contribute a single window.
    """
    if window_size < 1:
        raise ValueError("window_size must be >= 1")
    postings: dict[int, list[int]] = {}
    last_window: dict[int, int] = {}
    window_id = 0
    for doc in corpus.documents:
        tokens = doc.tokens
        n = tokens.size
        n_windows = max(1, n - window_size + 1)
        for start in range(n_windows):
            stop = min(start + window_size, n)
            for t in range(start, stop):
                w = int(tokens[t])
                if last_window.get(w, -1) != window_id:
                    last_window[w] = window_id
                    postings.setdefault(w, []).append(window_id)
            window_id += 1
    posting_arrays = {w: np.asarray(ids, dtype=np.int64) for w, ids in postings.items()}
    word_windows = {w: ids.size for w, ids in posting_arrays.items()}
    return CooccurrenceStats(window_size, window_id, word_windows, postings=posting_arrays)


def npmi(w1: int, w2: int, stats: CooccurrenceStats) -> float:
    """Normalized pointwise mutual information with epsilon smoothing.

    epsilon = 1/total_windows smooths the joint probability; zero
    marginals are floored at epsilon so unseen words yield a defined
    value. The result is clamped into [-1, 1].
    """
    total = stats.total_windows
    eps = stats.epsilon
    p1 = max(stats.word_count(w1) / total, eps)
    p2 = max(stats.word_count(w2) / total, eps)
    p12 = stats.pair_count(w1, w2) / total + eps
    value = math.log(p12 / (p1 * p2)) / (-math.log(p12))
    return max(-1.0, min(1.0, value))


def _usable_top_words(topic: Topic, stats: CooccurrenceStats, top_n: int) -> list[int]:
    ranked = [w for w, _ in top_words(topic, top_n)]
    return [w for w in ranked if stats.word_count(w) > 0]


def coherence_npmi(topic: Topic, stats: CooccurrenceStats, top_n: int = 10) -> float:
    """Mean NPMI over all unordered pairs of the topic's usable top words.

    Returns nan when fewer than two top words occur in the statistics.
    """
    words = _usable_top_words(topic, stats, top_n)
    if len(words) < 2:
        return float("nan")
    values = [npmi(a, b, stats) for a, b in combinations(words, 2)]
    return float(np.mean(values))


def _confirmation(word: int, others, stats: CooccurrenceStats) -> float:
    """P(word | any of others) - P(word | none of others)."""
    total = stats.total_windows
    n_set = stats.set_count(others)
    n_joint = stats.joint_set_count(word, others)
    if n_set == 0:
        return 0.0
    given_set = n_joint / n_set
    if n_set == total:
        return given_set
    given_rest = (stats.word_count(word) - n_joint) / (total - n_set)
    return given_set - given_rest


def coherence_cp(topic: Topic, stats: CooccurrenceStats, top_n: int = 10) -> float:
    """Mean confirmation of each top word against the remaining top words."""
    words = _usable_top_words(topic, stats, top_n)
    if len(words) < 2:
        return float("nan")
    scores = [
        _confirmation(w, [u for u in words if u != w], stats) for w in words
    ]
    return float(np.mean(scores))


def coherence_cv(topic: Topic, stats: CooccurrenceStats, top_n: int = 10) -> float:
    """Indirect coherence through NPMI profile vectors.

    Each usable top word w gets the vector (npmi(w, u)) over the usable top
    words, with the self entry set to the NPMI upper value 1. Every word
    except the top-ranked one is compared (cosine similarity) against the
    summed vectors of its strictly higher-weighted top words; the score is
    the mean over those comparisons. An empty comparison set (weight ties
    at the top) contributes similarity 0.
    """
    ranked = [(w, wt) for w, wt in top_words(topic, top_n) if stats.word_count(w) > 0]
    if len(ranked) < 2:
        return float("nan")
    words = [w for w, _ in ranked]
    weights = [wt for _, wt in ranked]
    k = len(words)
    profiles = np.empty((k, k))
    for i, w in enumerate(words):
        for j, u in enumerate(words):
            profiles[i, j] = 1.0 if i == j else npmi(w, u, stats)
    sims = []
    for i in range(1, k):
        higher = [j for j in range(k) if weights[j] > weights[i]]
        head = profiles[higher].sum(axis=0) if higher else np.zeros(k)
        sims.append(_cosine_sim(profiles[i], head))
    return float(np.mean(sims))


def _cosine_sim(a, b) -> float:
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))
