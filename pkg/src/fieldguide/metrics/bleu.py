"""BLEU: modified n-gram precision with brevity penalty.

Unsmoothed by default — a candidate with any zero n-gram precision scores
exactly 0. Corpus-level scoring aggregates clipped-match/total counts over
all pairs before taking precisions (not a mean of sentence scores).
"""

import math
from collections import Counter


def ngram_counts(tokens, n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def clipped_matches(candidate, references, n: int) -> tuple[int, int]:
    """(clipped match count, candidate n-gram total) for one order n."""
    cand = ngram_counts(candidate, n)
    total = max(len(candidate) - n + 1, 0)
    if not cand:
        return 0, total
    max_ref = Counter()
    for ref in references:
        for gram, cnt in ngram_counts(ref, n).items():
            if cnt > max_ref[gram]:
                max_ref[gram] = cnt
    matched = sum(min(cnt, max_ref[gram]) for gram, cnt in cand.items())
    return matched, total


def closest_ref_length(references, c: int) -> int:
    """Reference length closest to c; ties go to the shorter reference."""
    return min((abs(len(r) - c), len(r)) for r in references)[1]


def _validate(candidate, references):
    if not candidate:
        raise ValueError("candidate must be non-empty")
    if not references or any(not r for r in references):
        raise ValueError("references must be non-empty, with no empty reference")


def brevity_penalty(c: int, r: int) -> float:
    if c >= r:
        return 1.0
    return math.exp(1.0 - r / c)


def bleu(candidate, references, n: int = 4, smooth: bool = False) -> float:
    """Sentence-level BLEU-n over tokenized sequences."""
    if n not in (1, 2, 3, 4):
        raise ValueError(f"n must be in 1..4, got {n}")
    _validate(candidate, references)
    log_p_sum = 0.0
    for m in range(1, n + 1):
        matched, total = clipped_matches(candidate, references, m)
        if total == 0 or matched == 0:
            if not smooth:
                return 0.0
            matched, total = 1.0, 2.0 * max(total, 1)
        log_p_sum += math.log(matched / total)
    bp = brevity_penalty(len(candidate), closest_ref_length(references, len(candidate)))
    return bp * math.exp(log_p_sum / n)


class CorpusBleu:
    """Accumulates corpus-wide n-gram statistics for BLEU-1..4."""

    def __init__(self):
        self.matched = [0] * 4
        self.total = [0] * 4
        self.c_len = 0
        self.r_len = 0
        self.pairs = 0

    def add(self, candidate, references):
        if not references or any(not r for r in references):
            raise ValueError("references must be non-empty, with no empty reference")
        for m in range(1, 5):
            matched, total = clipped_matches(candidate, references, m)
            self.matched[m - 1] += matched
            self.total[m - 1] += total
        self.c_len += len(candidate)
        self.r_len += closest_ref_length(references, len(candidate))
        self.pairs += 1

    def score(self, n: int) -> float:
        if self.pairs == 0:
            raise ValueError("no pairs accumulated")
        if self.c_len == 0:
            return 0.0
        log_p_sum = 0.0
        for m in range(1, n + 1):
            matched, total = self.matched[m - 1], self.total[m - 1]
            if matched == 0 or total == 0:
                return 0.0
            log_p_sum += math.log(matched / total)
        return brevity_penalty(self.c_len, self.r_len) * math.exp(log_p_sum / n)
