"""Attention-equipped LSTM decoder.

Additive attention over the encoder's location grid: at each step the
previous hidden state scores every location, the softmax weights form the
context vector, and the LSTM consumes [token embedding; context]. Output
logits project both the new hidden state and the context. Backward is
hand-derived BPTT; see tests/test_gradients.py for the finite-difference
check that pins it down.
"""

from dataclasses import dataclass

import numpy as np

from . import layers


@dataclass
class DecodeStep:
    """One decode step: attention simplex, attended context, token logits."""

    attention_weights: np.ndarray  # (L,)
    context: np.ndarray  # (D,)
    token_logits: np.ndarray  # (V,)


class Decoder:
    def __init__(self, vocab_size, feat_dim, hidden_size, embed_size, attn_size, rng=None, dtype=np.float32):
        rng = rng or np.random.default_rng(0)
        self.vocab_size = vocab_size
        self.feat_dim = feat_dim
        self.hidden_size = hidden_size
        self.embed_size = embed_size
        self.attn_size = attn_size
        self.dtype = dtype
        v, d, h, e, a = vocab_size, feat_dim, hidden_size, embed_size, attn_size

        g = layers.glorot
        self.params = {
            "emb": rng.uniform(-0.08, 0.08, size=(v, e)).astype(dtype),
            "init_h.w": g(rng, (d, h), dtype),
            "init_h.b": np.zeros(h, dtype=dtype),
            "init_c.w": g(rng, (d, h), dtype),
            "init_c.b": np.zeros(h, dtype=dtype),
            "att.wa": g(rng, (d, a), dtype),
            "att.ua": g(rng, (h, a), dtype),
            "att.ba": np.zeros(a, dtype=dtype),
            "att.v": g(rng, (a, 1), dtype)[:, 0],
            "lstm.wx": g(rng, (e + d, 4 * h), dtype),
            "lstm.wh": g(rng, (h, 4 * h), dtype),
            "lstm.b": np.zeros(4 * h, dtype=dtype),
            "out.wh": g(rng, (h, v), dtype),
            "out.wz": g(rng, (d, v), dtype),
            "out.b": np.zeros(v, dtype=dtype),
        }
        self.params["lstm.b"][h : 2 * h] = 1.0  # forget-gate bias

    # ------------------------------------------------------------------
    # pieces

    def project_grid(self, grid):
        """Precompute grid @ att.wa for a (N,L,D) grid -> (N,L,A)."""
        n, l, d = grid.shape
        return (grid.reshape(-1, d) @ self.params["att.wa"]).reshape(n, l, -1)

    def init_state(self, grid):
        p = self.params
        mean = grid.mean(axis=1)
        h0 = np.tanh(mean @ p["init_h.w"] + p["init_h.b"])
        c0 = np.tanh(mean @ p["init_c.w"] + p["init_c.b"])
        return h0, c0, mean

    def attention(self, h_prev, grid, grid_att):
        """Additive attention: returns (alpha (N,L), context (N,D), u (N,L,A))."""
        p = self.params
        q = h_prev @ p["att.ua"] + p["att.ba"]
        u = np.tanh(grid_att + q[:, None, :])
        scores = u @ p["att.v"]
        alpha = layers.softmax(scores, axis=1)
        context = np.einsum("nl,nld->nd", alpha, grid)
        return alpha, context, u

    def _lstm(self, xz, h_prev, c_prev):
        p = self.params
        hs = self.hidden_size
        gates = xz @ p["lstm.wx"] + h_prev @ p["lstm.wh"] + p["lstm.b"]
        i = layers.sigmoid(gates[:, :hs])
        f = layers.sigmoid(gates[:, hs : 2 * hs])
        g = np.tanh(gates[:, 2 * hs : 3 * hs])
        o = layers.sigmoid(gates[:, 3 * hs :])
        c = f * c_prev + i * g
        tanh_c = np.tanh(c)
        h = o * tanh_c
        return h, c, (i, f, g, o, tanh_c)

    def step(self, token_ids, h, c, grid, grid_att):
        """One inference step; token_ids is the previous token per batch row."""
        p = self.params
        alpha, z, _ = self.attention(h, grid, grid_att)
        emb = p["emb"][token_ids]
        xz = np.concatenate([emb, z], axis=1)
        h_new, c_new, _ = self._lstm(xz, h, c)
        logits = h_new @ p["out.wh"] + z @ p["out.wz"] + p["out.b"]
        return logits, alpha, z, h_new, c_new

    # ------------------------------------------------------------------
    # teacher-forced loss and gradients

    def loss_and_grads(self, grid, input_ids, target_ids, mask):
        """Mean per-token cross-entropy plus gradients.

        grid: (N,L,D); input_ids/target_ids: (N,T) int; mask: (N,T) bool.
        Returns (loss, grads dict, dgrid).
        """
        p = self.params
        n, l, d = grid.shape
        t_steps = input_ids.shape[1]
        e = self.embed_size

        grid_att = self.project_grid(grid)
        h, c, mean = self.init_state(grid)
        h0, c0 = h, c

        total_valid = mask.sum()
        if total_valid == 0:
            raise ValueError("no valid target tokens in batch")

        caches = []
        loss = 0.0
        probs_list = []
        for t in range(t_steps):
            alpha, z, u = self.attention(h, grid, grid_att)
            emb = p["emb"][input_ids[:, t]]
            xz = np.concatenate([emb, z], axis=1)
            h_new, c_new, lstm_cache = self._lstm(xz, h, c)
            logits = h_new @ p["out.wh"] + z @ p["out.wz"] + p["out.b"]
            logp = layers.log_softmax(logits, axis=1)
            m = mask[:, t]
            loss -= (logp[np.arange(n), target_ids[:, t]] * m).sum()
            probs_list.append(np.exp(logp))
            caches.append((alpha, z, u, xz, h, c, h_new, lstm_cache))
            h, c = h_new, c_new
        loss = float(loss) / float(total_valid)

        grads = {k: np.zeros_like(v) for k, v in p.items()}
        dgrid = np.zeros_like(grid)
        dga = np.zeros_like(grid_att)
        dh_carry = np.zeros_like(h)
        dc_carry = np.zeros_like(c)
        hs = self.hidden_size

        for t in range(t_steps - 1, -1, -1):
            alpha, z, u, xz, h_prev, c_prev, h_new, (i, f, g, o, tanh_c) = caches[t]
            m = mask[:, t].astype(grid.dtype)[:, None]
            dlogits = probs_list[t].copy()
            dlogits[np.arange(n), target_ids[:, t]] -= 1.0
            dlogits *= m / float(total_valid)

            grads["out.wh"] += h_new.T @ dlogits
            grads["out.wz"] += z.T @ dlogits
            grads["out.b"] += dlogits.sum(0)
            dh_new = dh_carry + dlogits @ p["out.wh"].T
            dz = dlogits @ p["out.wz"].T

            # lstm
            do = dh_new * tanh_c
            dc_total = dc_carry + dh_new * o * (1.0 - tanh_c * tanh_c)
            df = dc_total * c_prev
            di = dc_total * g
            dg = dc_total * i
            dc_carry = dc_total * f
            dgates = np.concatenate(
                [di * i * (1 - i), df * f * (1 - f), dg * (1 - g * g), do * o * (1 - o)], axis=1
            )
            grads["lstm.wx"] += xz.T @ dgates
            grads["lstm.wh"] += h_prev.T @ dgates
            grads["lstm.b"] += dgates.sum(0)
            dxz = dgates @ p["lstm.wx"].T
            dh_prev = dgates @ p["lstm.wh"].T

            # embedding rows
            np.add.at(grads["emb"], input_ids[:, t], dxz[:, :e])
            dz += dxz[:, e:]

            # attention
            dalpha = np.einsum("nd,nld->nl", dz, grid)
            dgrid += alpha[:, :, None] * dz[:, None, :]
            dscores = alpha * (dalpha - (alpha * dalpha).sum(axis=1, keepdims=True))
            du = dscores[:, :, None] * p["att.v"][None, None, :]
            grads["att.v"] += np.einsum("nla,nl->a", u, dscores)
            dt = du * (1.0 - u * u)
            dga += dt
            dq = dt.sum(axis=1)
            grads["att.ua"] += h_prev.T @ dq
            grads["att.ba"] += dq.sum(0)
            dh_prev += dq @ p["att.ua"].T

            dh_carry = dh_prev

        # grid projection for attention
        grads["att.wa"] += grid.reshape(-1, d).T @ dga.reshape(-1, self.attn_size)
        dgrid += (dga.reshape(-1, self.attn_size) @ p["att.wa"].T).reshape(n, l, d)

        # initial state
        dp_h = dh_carry * (1.0 - h0 * h0)
        grads["init_h.w"] += mean.T @ dp_h
        grads["init_h.b"] += dp_h.sum(0)
        dmean = dp_h @ p["init_h.w"].T
        dp_c = dc_carry * (1.0 - c0 * c0)
        grads["init_c.w"] += mean.T @ dp_c
        grads["init_c.b"] += dp_c.sum(0)
        dmean += dp_c @ p["init_c.w"].T
        dgrid += dmean[:, None, :] / float(l)

        return loss, grads, dgrid
