"""BLEU and token cosine similarity.

Texts are token sequences; strings are tokenized exactly like voice
commands (lowercase, punctuation stripped, whitespace split).
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .intent import tokenize


def _tokens(text):
    return tokenize(text) if isinstance(text, str) else tuple(text)


@dataclass(frozen=True)
class MetricResult:
    score: float
    flags: tuple[str, ...] = ()
    details: dict = field(default_factory=dict)


def ngrams(tokens, n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def modified_precision(candidate, references, n: int) -> tuple[int, int]:
    """Clipped n-gram matches and total candidate n-grams."""
    cand = ngrams(candidate, n)
    max_ref = Counter()
    for ref in references:
        for gram, count in ngrams(ref, n).items():
            max_ref[gram] = max(max_ref[gram], count)
    matched = sum(min(count, max_ref[gram]) for gram, count in cand.items())
    return matched, sum(cand.values())


def closest_ref_length(references, c: int) -> int:
    # ties go to the shorter reference
    return min((len(r) for r in references), key=lambda r: (abs(r - c), r))


def brevity_penalty(c: int, r: int) -> float:
    if c == 0:
        return 0.0
    if c > r:
        return 1.0
    return math.exp(1 - r / c)


def bleu_report(candidate, references, max_n: int = 4, smoothing: bool = False) -> MetricResult:
    """Cumulative BLEU-``max_n`` with uniform weights.

    Any zero n-gram precision makes the score 0 unless ``smoothing`` is on,
    which applies add-one smoothing to orders 2 and up.
    """
    if not 1 <= max_n <= 4:
        raise ValueError(f"max_n must be between 1 and 4, got {max_n}")
    cand = _tokens(candidate)
    refs = [_tokens(r) for r in references]
    if not refs:
        raise ValueError("at least one reference is required")
    if not cand:
        return MetricResult(0.0, ("empty-candidate",))
    if not any(refs):
        return MetricResult(0.0, ("empty-reference",))

    precisions = []
    for n in range(1, max_n + 1):
        matched, total = modified_precision(cand, refs, n)
        if smoothing and n > 1:
            precisions.append((matched + 1) / (total + 1))
        else:
            precisions.append(matched / total if total else 0.0)

    r = closest_ref_length(refs, len(cand))
    bp = brevity_penalty(len(cand), r)
    details = {"precisions": precisions, "brevity_penalty": bp, "candidate_length": len(cand),
               "reference_length": r}
    if min(precisions) == 0:
        return MetricResult(0.0, ("zero-precision",), details)
    log_mean = sum(math.log(p) for p in precisions) / max_n
    return MetricResult(bp * math.exp(log_mean), (), details)


def bleu(candidate, references, max_n: int = 4, smoothing: bool = False) -> float:
    return bleu_report(candidate, references, max_n, smoothing).score


def cosine_report(a, b) -> MetricResult:
    ta, tb = _tokens(a), _tokens(b)
    if not ta or not tb:
        return MetricResult(0.0, ("empty-input",))
    ca, cb = Counter(ta), Counter(tb)
    if ca == cb:
        return MetricResult(1.0)
    dot = sum(ca[t] * cb[t] for t in ca.keys() & cb.keys())
    norm = math.sqrt(sum(v * v for v in ca.values())) * math.sqrt(sum(v * v for v in cb.values()))
    # clamp rounding overshoot on identical inputs
    return MetricResult(min(1.0, dot / norm))


def cosine_similarity(a, b) -> float:
    """Cosine of the token-count vectors of ``a`` and ``b``."""
    return cosine_report(a, b).score
