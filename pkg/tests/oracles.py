"""Independent reference implementations used only to check the real ones.

Deliberately written on different routes: scanning loops instead of
Counters, exhaustive enumeration instead of search/pruning. Slow is fine.
"""

import itertools
import math


def bleu_oracle(candidate, references, n):
    """Sentence BLEU by direct n-gram scanning."""
    log_sum = 0.0
    for m in range(1, n + 1):
        grams = [tuple(candidate[i : i + m]) for i in range(len(candidate) - m + 1)]
        total = len(grams)
        matched = 0
        for g in set(grams):
            cand_count = grams.count(g)
            best_ref = 0
            for ref in references:
                ref_grams = [tuple(ref[i : i + m]) for i in range(len(ref) - m + 1)]
                best_ref = max(best_ref, ref_grams.count(g))
            matched += min(cand_count, best_ref)
        if total == 0 or matched == 0:
            return 0.0
        log_sum += math.log(matched / total)
    c = len(candidate)
    r = min((abs(len(ref) - c), len(ref)) for ref in references)[1]
    bp = 1.0 if c >= r else math.exp(1.0 - r / c)
    return bp * math.exp(log_sum / n)


def _chunks_of(alignment):
    """alignment: sorted list of (cand_pos, ref_pos) pairs."""
    chunks = 0
    prev = None
    for i, j in alignment:
        if prev is None or not (i == prev[0] + 1 and j == prev[1] + 1):
            chunks += 1
        prev = (i, j)
    return chunks


def min_chunks_oracle(candidate, reference):
    """Minimal chunk count over every maximum matching, by full enumeration."""
    types = set(candidate) & set(reference)
    per_type = []
    for w in sorted(types):
        cpos = [i for i, t in enumerate(candidate) if t == w]
        rpos = [j for j, t in enumerate(reference) if t == w]
        m = min(len(cpos), len(rpos))
        options = []
        for csel in itertools.combinations(cpos, m):
            for rsel in itertools.combinations(rpos, m):
                for perm in itertools.permutations(rsel):
                    options.append(list(zip(csel, perm)))
        per_type.append(options)
    best = None
    for combo in itertools.product(*per_type):
        pairs = sorted(p for group in combo for p in group)
        chunks = _chunks_of(pairs)
        if best is None or chunks < best:
            best = chunks
    return best or 0


def meteor_oracle(candidate, references):
    """METEOR with exhaustive alignment enumeration."""
    best = 0.0
    for ref in references:
        matches = 0
        for w in set(candidate):
            matches += min(candidate.count(w), ref.count(w))
        if matches == 0:
            continue
        p = matches / len(candidate)
        r = matches / len(ref)
        f = p * r / (0.9 * p + 0.1 * r)
        chunks = min_chunks_oracle(candidate, ref)
        score = f * (1.0 - 0.5 * (chunks / matches) ** 3)
        best = max(best, score)
    return best


def enumerate_decodings(step_table, vocab_size, start_id, end_id, max_emissions):
    """All finalized sequences under beam scoring, best normalized first.

    step_table(prev_token, step_index) -> log-probability list. Returns
    [(normalized_score, tokens)] sorted the same way decoding breaks ties.
    """
    results = []

    def walk(tokens, score):
        step = len(tokens)
        if tokens and tokens[-1] == end_id:
            results.append((score / len(tokens), tuple(tokens)))
            return
        if step == max_emissions:
            results.append((score / len(tokens), tuple(tokens)))
            return
        prev = tokens[-1] if tokens else start_id
        logprobs = step_table(prev, step)
        for tok in range(vocab_size):
            walk(tokens + [tok], score + logprobs[tok])

    walk([], 0.0)
    results.sort(key=lambda sr: (-sr[0], sr[1]))
    return results


def weighted_context_oracle(alpha, grid):
    """Context as an explicit per-location accumulation loop."""
    out = [0.0] * grid.shape[1]
    for loc in range(grid.shape[0]):
        for d in range(grid.shape[1]):
            out[d] += float(alpha[loc]) * float(grid[loc, d])
    return out
