"""Sequence decoding over a pluggable next-token scorer.

A scorer exposes ``vocab_size``, ``start_id``, ``end_id``, ``initial_state()``
and ``step(state, prev_token) -> (log_probs, next_state)``. The decoders never
look inside the state, so any captioning model can be wrapped as a scorer.

All three decoders break score ties toward the lexicographically smaller
token sequence, which makes their results fully deterministic.
"""
from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Hashable, Protocol, Sequence

import numpy as np

from ._validation import check_positive_int

LOGSUM_TOL = 1e-6
EXHAUSTIVE_LIMIT = 10**6


class ScorerError(ValueError):
    pass


class TokenScorer(Protocol):
    vocab_size: int
    start_id: int
    end_id: int

    def initial_state(self) -> Any: ...

    def step(self, state: Any, prev_token: int) -> tuple[Sequence[float], Any]: ...


@dataclass(frozen=True)
class Hypothesis:
    tokens: tuple[int, ...]
    log_score: float
    finished: bool

    def body(self, end_id: int) -> tuple[int, ...]:
        """Tokens without a trailing end token."""
        if self.tokens and self.tokens[-1] == end_id:
            return self.tokens[:-1]
        return self.tokens


def _logsumexp(row) -> float:
    row = np.asarray(row, dtype=float)
    m = np.max(row)
    if m == -np.inf:
        return -np.inf
    return float(m + np.log(np.sum(np.exp(row - m))))


def check_log_distribution(row, vocab_size: int) -> np.ndarray:
    row = np.asarray(row, dtype=float)
    if row.shape != (vocab_size,):
        raise ScorerError(f"expected {vocab_size} log-probabilities, got shape {row.shape}")
    if np.any(np.isnan(row)) or np.any(row == np.inf):
        raise ScorerError("log-probabilities must not be NaN or +inf")
    if abs(_logsumexp(row)) > LOGSUM_TOL:
        raise ScorerError(f"log-probabilities do not normalise (logsumexp={_logsumexp(row):.3g})")
    return row


class TableScorer:
    """Scorer driven by explicit ``(state, prev_token)`` rows.

    Rows are looked up by exact key first and then by ``(state, None)`` so a
    row may ignore the previous token. Fixture format::

        {"vocab": ["<s>", "</s>", "dog", ...], "start_id": 0, "end_id": 1,
         "initial_state": "s0",
         "rows": [{"state": "s0", "prev": 0, "next_state": "s1",
                   "log_probs": [...]}]}

    ``probs`` may replace ``log_probs`` in a row; ``prev`` may be omitted.
    """

    def __init__(self, vocab, start_id, end_id, rows, initial_state=None):
        self.vocab = list(vocab)
        self.vocab_size = len(self.vocab)
        if self.vocab_size < 1:
            raise ScorerError("vocabulary must not be empty")
        self.start_id = int(start_id)
        self.end_id = int(end_id)
        for name, t in (("start_id", self.start_id), ("end_id", self.end_id)):
            if not 0 <= t < self.vocab_size:
                raise ScorerError(f"{name}={t} outside vocabulary")
        self._initial = initial_state
        self._rows = {}
        for key, (log_probs, next_state) in rows.items():
            self._rows[key] = (check_log_distribution(log_probs, self.vocab_size), next_state)

    def initial_state(self) -> Hashable:
        return self._initial

    def step(self, state, prev_token):
        row = self._rows.get((state, prev_token)) or self._rows.get((state, None))
        if row is None:
            raise ScorerError(f"no row for state={state!r}, prev={prev_token!r}")
        return row

    def decode_tokens(self, tokens) -> list[str]:
        return [self.vocab[t] for t in tokens]

    @classmethod
    def from_dict(cls, data: dict) -> "TableScorer":
        rows = {}
        for i, r in enumerate(data["rows"]):
            if ("log_probs" in r) == ("probs" in r):
                raise ScorerError(f"row {i}: give exactly one of log_probs / probs")
            if "probs" in r:
                with np.errstate(divide="ignore"):
                    lp = np.log(np.asarray(r["probs"], dtype=float))
            else:
                lp = np.asarray([-math.inf if v is None else v for v in r["log_probs"]], dtype=float)
            rows[(r["state"], r.get("prev"))] = (lp, r.get("next_state", r["state"]))
        return cls(data["vocab"], data["start_id"], data["end_id"], rows, data.get("initial_state"))

    @classmethod
    def load(cls, path) -> "TableScorer":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _better(a, b) -> bool:
    """True when candidate ``a = (score, tokens)`` beats ``b``."""
    if a[0] != b[0]:
        return a[0] > b[0]
    return a[1] < b[1]


def _rank_key(score, tokens):
    return (-score, tokens)


def _final_score(h: Hypothesis, length_normalize: bool) -> float:
    if length_normalize and h.tokens:
        return h.log_score / len(h.tokens)
    return h.log_score


def _step_scores(scorer, state, prev):
    log_probs, next_state = scorer.step(state, prev)
    return check_log_distribution(log_probs, scorer.vocab_size), next_state


def greedy_decode(scorer: TokenScorer, max_len: int) -> Hypothesis:
    """Pick the most likely token at every step (ties to the lowest id)."""
    max_len = check_positive_int(max_len, "max_len")
    state, prev = scorer.initial_state(), scorer.start_id
    tokens, score = [], 0.0
    while len(tokens) < max_len:
        log_probs, state = _step_scores(scorer, state, prev)
        prev = int(np.argmax(log_probs))
        tokens.append(prev)
        score += float(log_probs[prev])
        if prev == scorer.end_id:
            break
    return Hypothesis(tuple(tokens), score, True)


def beam_decode(scorer: TokenScorer, beam_width: int = 3, max_len: int = 20,
                length_normalize: bool = False) -> Hypothesis:
    """Beam search keeping ``beam_width`` candidates per step.

    At each step every live hypothesis is extended by every token and the
    best ``beam_width`` extensions are kept. Extensions ending in the end
    token or reaching ``max_len`` retire to a finished pool; the search ends
    when no live hypothesis remains and returns the best finished one.
    """
    beam_width = check_positive_int(beam_width, "beam_width")
    max_len = check_positive_int(max_len, "max_len")
    live = [((), 0.0, scorer.initial_state())]
    finished = []
    while live:
        candidates = []
        for tokens, score, state in live:
            prev = tokens[-1] if tokens else scorer.start_id
            log_probs, next_state = _step_scores(scorer, state, prev)
            for t in range(scorer.vocab_size):
                # zero-probability extensions are impossible paths, not candidates
                if log_probs[t] > -math.inf:
                    candidates.append((tokens + (t,), score + float(log_probs[t]), next_state))
        best = heapq.nsmallest(beam_width, candidates, key=lambda c: _rank_key(c[1], c[0]))
        live = []
        for tokens, score, state in best:
            if tokens[-1] == scorer.end_id or len(tokens) >= max_len:
                finished.append(Hypothesis(tokens, score, True))
            else:
                live.append((tokens, score, state))
    return _select(finished, length_normalize)


def _select(pool, length_normalize):
    best = None
    for h in pool:
        if best is None or _better((_final_score(h, length_normalize), h.tokens),
                                   (_final_score(best, length_normalize), best.tokens)):
            best = h
    return best


def exhaustive_decode(scorer: TokenScorer, max_len: int, length_normalize: bool = False) -> Hypothesis:
    """Best terminated sequence over all sequences up to ``max_len`` (test oracle)."""
    max_len = check_positive_int(max_len, "max_len")
    if scorer.vocab_size ** max_len > EXHAUSTIVE_LIMIT:
        raise ValueError(
            f"exhaustive search over {scorer.vocab_size}^{max_len} sequences exceeds {EXHAUSTIVE_LIMIT}"
        )
    best = None

    def visit(tokens, score, state):
        nonlocal best
        prev = tokens[-1] if tokens else scorer.start_id
        log_probs, next_state = _step_scores(scorer, state, prev)
        for t in range(scorer.vocab_size):
            if log_probs[t] == -math.inf:
                continue
            seq, s = tokens + (t,), score + float(log_probs[t])
            if t == scorer.end_id or len(seq) >= max_len:
                h = Hypothesis(seq, s, True)
                if best is None or _better((_final_score(h, length_normalize), seq),
                                           (_final_score(best, length_normalize), best.tokens)):
                    best = h
            else:
                visit(seq, s, next_state)

    visit((), 0.0, scorer.initial_state())
    return best


def score_sequence(scorer: TokenScorer, tokens) -> float:
    """Replay ``tokens`` through the scorer and sum their log-probabilities."""
    state, prev, total = scorer.initial_state(), scorer.start_id, 0.0
    for t in tokens:
        log_probs, state = _step_scores(scorer, state, prev)
        total += float(log_probs[t])
        prev = t
    return total
