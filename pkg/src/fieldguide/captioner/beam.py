"""Beam search over a generic step function.

Keeps the k highest cumulative-log-probability partials; a hypothesis is
finalized when it emits the end token or hits the emission cap. The winner
is the finalized hypothesis with the best length-normalized score
(sum of token log-probs / token count). All ties break toward the
lexicographically smaller token sequence, so decoding is deterministic.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Hypothesis:
    tokens: tuple  # emitted token ids, including the end token if emitted
    score: float  # cumulative log-probability of the emitted tokens
    state: object
    alphas: tuple = field(default=())

    @property
    def normalized_score(self):
        return self.score / max(len(self.tokens), 1)


def beam_search(step_fn, init_state, start_id, end_id, k, max_emissions):
    """step_fn(prev_token, state) -> (logprobs (V,), new_state, alpha).

    Returns every finalized hypothesis, best normalized score first.
    """
    if k < 1:
        raise ValueError(f"beam width must be >= 1, got {k}")
    live = [Hypothesis(tokens=(), score=0.0, state=init_state)]
    finished = []
    for _ in range(max_emissions):
        candidates = []
        for hyp in live:
            prev = hyp.tokens[-1] if hyp.tokens else start_id
            logprobs, new_state, alpha = step_fn(prev, hyp.state)
            for tok, lp in enumerate(logprobs):
                candidates.append(
                    Hypothesis(hyp.tokens + (tok,), hyp.score + float(lp), new_state, hyp.alphas + (alpha,))
                )
        candidates.sort(key=lambda hy: (-hy.score, hy.tokens))
        live = []
        for hyp in candidates[:k]:
            if hyp.tokens[-1] == end_id:
                finished.append(hyp)
            else:
                live.append(hyp)
        if not live:
            break
    finished.extend(live)  # hit the cap without emitting the end token
    finished.sort(key=lambda hy: (-hy.normalized_score, hy.tokens))
    return finished


def greedy_search(step_fn, init_state, start_id, end_id, max_emissions):
    """Pure argmax decoding; ties go to the lowest token id."""
    tokens, alphas = [], []
    state = init_state
    prev = start_id
    for _ in range(max_emissions):
        logprobs, state, alpha = step_fn(prev, state)
        tok = int(np.argmax(logprobs))
        tokens.append(tok)
        alphas.append(alpha)
        if tok == end_id:
            break
        prev = tok
    return tokens, alphas
