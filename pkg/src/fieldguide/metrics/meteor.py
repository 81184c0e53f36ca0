"""METEOR, exact-match variant.

Unigram alignment maximizes matches, then minimizes chunks; F-mean weights
recall 9:1 (alpha = 0.9 on precision) and the fragmentation penalty is
0.5 * (chunks/matches)^3. Multi-reference scoring takes the best reference.

Chunk minimization is solved exactly with branch-and-bound over maximum
matchings: captions are short (<= 30 tokens), so the search is small once
run-continuing assignments are tried first.
"""

from collections import Counter

ALPHA = 0.9
PENALTY_WEIGHT = 0.5
PENALTY_POWER = 3


def _max_matches(candidate, reference) -> int:
    cand, ref = Counter(candidate), Counter(reference)
    return sum(min(n, ref[w]) for w, n in cand.items())


def minimal_chunks(candidate, reference) -> int:
    """Fewest chunks over all maximum matchings, exact.

    A chunk is a maximal run of matched candidate positions that are
    consecutive in the candidate and map to consecutive, in-order reference
    positions.
    """
    cand_counts, ref_counts = Counter(candidate), Counter(reference)
    need = {w: min(n, ref_counts[w]) for w, n in cand_counts.items() if min(n, ref_counts[w]) > 0}
    total_needed = sum(need.values())
    if total_needed == 0:
        return 0

    ref_positions = {}
    for j, w in enumerate(reference):
        ref_positions.setdefault(w, []).append(j)

    # how many occurrences of each word remain in candidate[i:]
    n_cand = len(candidate)
    remaining = [Counter() for _ in range(n_cand + 1)]
    for i in range(n_cand - 1, -1, -1):
        remaining[i] = remaining[i + 1].copy()
        remaining[i][candidate[i]] += 1

    best = [total_needed + 1]  # upper bound: every match its own chunk + 1

    def search(i, need_left, used_mask, last_i, last_j, chunks, matches_left):
        if chunks >= best[0]:
            return
        if matches_left == 0:
            best[0] = chunks
            return
        if i >= n_cand:
            return
        w = candidate[i]
        quota = need_left.get(w, 0)
        if quota > 0:
            # try run-continuing reference position first for a tight incumbent
            positions = ref_positions[w]
            ordered = sorted(positions, key=lambda j: (j != last_j + 1 or i != last_i + 1, j))
            for j in ordered:
                bit = 1 << j
                if used_mask & bit:
                    continue
                extends = i == last_i + 1 and j == last_j + 1
                need_left[w] = quota - 1
                search(i + 1, need_left, used_mask | bit, i, j, chunks + (0 if extends else 1), matches_left - 1)
                need_left[w] = quota
        # skipping position i is allowed only if enough occurrences remain
        if remaining[i + 1][w] >= quota:
            search(i + 1, need_left, used_mask, last_i, last_j, chunks, matches_left)

    search(0, dict(need), 0, -2, -2, 0, total_needed)
    return best[0]


def _single(candidate, reference) -> float:
    matches = _max_matches(candidate, reference)
    if matches == 0:
        return 0.0
    precision = matches / len(candidate)
    recall = matches / len(reference)
    f_mean = precision * recall / (ALPHA * precision + (1.0 - ALPHA) * recall)
    chunks = minimal_chunks(candidate, reference)
    penalty = PENALTY_WEIGHT * (chunks / matches) ** PENALTY_POWER
    return f_mean * (1.0 - penalty)


def meteor(candidate, references) -> float:
    """Best METEOR score of the candidate against any reference."""
    if not candidate:
        raise ValueError("candidate must be non-empty")
    if not references or any(not r for r in references):
        raise ValueError("references must be non-empty, with no empty reference")
    return max(_single(candidate, ref) for ref in references)
