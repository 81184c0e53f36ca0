"""Residual convolutional encoder, trained from scratch.

18-layer-class layout at reduced width, tuned for CPU training: 3x3/2 stem
+ 3x3/2 max pool, then four stages of two basic blocks at widths
(w, 2w, 4w, 8w) with the stride-2 transitions front-loaded so most compute
runs on small maps. A 256x256 input yields an 8x8 map, i.e. a 64-location
grid of 8w-dim features for the attention decoder.
"""

import numpy as np

from . import layers

FEATURE_HW = 8

_STAGE_STRIDES = (2, 2, 2, 1)


class Encoder:
    def __init__(self, width=16, rng=None, dtype=np.float32):
        rng = rng or np.random.default_rng(0)
        self.width = width
        self.dtype = dtype
        self.params = {}
        self.state = {}
        self.blocks = []  # (prefix, in_ch, out_ch, stride)

        self._add_conv_bn("stem", 3, width, k=3, rng=rng)
        chans = [width, 2 * width, 4 * width, 8 * width]
        in_ch = width
        for si, out_ch in enumerate(chans):
            for bi in range(2):
                stride = _STAGE_STRIDES[si] if bi == 0 else 1
                prefix = f"s{si}.b{bi}"
                self._add_conv_bn(f"{prefix}.1", in_ch, out_ch, k=3, rng=rng)
                self._add_conv_bn(f"{prefix}.2", out_ch, out_ch, k=3, rng=rng)
                if stride != 1 or in_ch != out_ch:
                    self._add_conv_bn(f"{prefix}.down", in_ch, out_ch, k=1, rng=rng)
                self.blocks.append((prefix, in_ch, out_ch, stride))
                in_ch = out_ch
        self.out_channels = in_ch

    def _add_conv_bn(self, prefix, in_ch, out_ch, k, rng):
        self.params[f"{prefix}.conv.w"] = layers.he_conv(rng, (out_ch, in_ch, k, k), self.dtype)
        self.params[f"{prefix}.bn.gamma"] = np.ones(out_ch, dtype=self.dtype)
        self.params[f"{prefix}.bn.beta"] = np.zeros(out_ch, dtype=self.dtype)
        self.state[f"{prefix}.bn.mean"] = np.zeros(out_ch, dtype=self.dtype)
        self.state[f"{prefix}.bn.var"] = np.ones(out_ch, dtype=self.dtype)

    # ------------------------------------------------------------------

    def _conv_bn_forward(self, prefix, x, stride, pad, train):
        p, s = self.params, self.state
        y, conv_cache = layers.conv2d_forward(x, p[f"{prefix}.conv.w"], None, stride, pad)
        y, bn_cache = layers.batchnorm_forward(
            y, p[f"{prefix}.bn.gamma"], p[f"{prefix}.bn.beta"],
            s[f"{prefix}.bn.mean"], s[f"{prefix}.bn.var"], train=train,
        )
        return y, (conv_cache, bn_cache)

    def _conv_bn_backward(self, prefix, dy, cache, grads):
        conv_cache, bn_cache = cache
        dy, dgamma, dbeta = layers.batchnorm_backward(dy, bn_cache)
        dx, dw, _ = layers.conv2d_backward(dy, conv_cache)
        grads[f"{prefix}.conv.w"] = dw
        grads[f"{prefix}.bn.gamma"] = dgamma
        grads[f"{prefix}.bn.beta"] = dbeta
        return dx

    def forward(self, x, train=False):
        """(N,3,H,W) -> (N, out_channels, H/32, W/32) plus backward cache."""
        x = np.ascontiguousarray(x, dtype=self.dtype)
        y, stem_cache = self._conv_bn_forward("stem", x, stride=2, pad=1, train=train)
        y, stem_relu = layers.relu_forward(y)
        y, pool_cache = layers.maxpool_forward(y, k=3, stride=2, pad=1)

        block_caches = []
        for prefix, in_ch, out_ch, stride in self.blocks:
            identity = y
            h1, c1 = self._conv_bn_forward(f"{prefix}.1", y, stride=stride, pad=1, train=train)
            h1, r1 = layers.relu_forward(h1)
            h2, c2 = self._conv_bn_forward(f"{prefix}.2", h1, stride=1, pad=1, train=train)
            if f"{prefix}.down.conv.w" in self.params:
                identity, cd = self._conv_bn_forward(f"{prefix}.down", y, stride=stride, pad=0, train=train)
            else:
                cd = None
            h2 = h2 + identity
            y, r2 = layers.relu_forward(h2)
            block_caches.append((c1, r1, c2, cd, r2))

        return y, (stem_cache, stem_relu, pool_cache, block_caches)

    def backward(self, dfeat, cache):
        stem_cache, stem_relu, pool_cache, block_caches = cache
        grads = {}
        dy = dfeat
        for (prefix, in_ch, out_ch, stride), bc in zip(reversed(self.blocks), reversed(block_caches)):
            c1, r1, c2, cd, r2 = bc
            dh2 = layers.relu_backward(dy, r2)
            didentity = dh2
            dh1 = self._conv_bn_backward(f"{prefix}.2", dh2, c2, grads)
            dh1 = layers.relu_backward(dh1, r1)
            dy = self._conv_bn_backward(f"{prefix}.1", dh1, c1, grads)
            if cd is not None:
                dy = dy + self._conv_bn_backward(f"{prefix}.down", didentity, cd, grads)
            else:
                dy = dy + didentity
        dy = layers.maxpool_backward(dy, pool_cache)
        dy = layers.relu_backward(dy, stem_relu)
        self._conv_bn_backward("stem", dy, stem_cache, grads)
        return grads
