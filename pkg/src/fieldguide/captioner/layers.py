"""Forward/backward primitives for the captioner.

Functional style: each forward returns (output, cache) and the matching
backward consumes (grad_out, cache). Shapes are NCHW for conv tensors.
Convolution is lowered to GEMM via im2col; the column matrix is rebuilt in
the backward pass instead of cached (memory over compute).
"""

import numpy as np

from .. import kernels


def linear_forward(x, w, b=None):
    y = x @ w
    if b is not None:
        y = y + b
    return y


def linear_backward(dy, x, w):
    return dy @ w.T, x.T @ dy, dy.sum(0)


def conv2d_forward(x, w, b, stride, pad):
    """Conv via im2col + batched GEMM; the column tensor is cached for backward."""
    n, _, h, width = x.shape
    f, c, kh, kw = w.shape
    cols = kernels.im2col(x, kh, kw, stride, pad)  # (N, C*kh*kw, OH*OW)
    y = np.matmul(w.reshape(f, -1)[None], cols)  # (N, F, OH*OW)
    if b is not None:
        y += b[:, None]
    oh = kernels.conv_out_size(h, kh, stride, pad)
    ow = kernels.conv_out_size(width, kw, stride, pad)
    return y.reshape(n, f, oh, ow), (cols, x.shape, w, stride, pad)


def conv2d_backward(dy, cache):
    cols, x_shape, w, stride, pad = cache
    f, c, kh, kw = w.shape
    n = dy.shape[0]
    dout = dy.reshape(n, f, -1)
    dw = np.matmul(dout, cols.transpose(0, 2, 1)).sum(axis=0).reshape(w.shape)
    db = dout.sum(axis=(0, 2))
    dcols = np.matmul(w.reshape(f, -1).T[None], dout)
    dx = kernels.col2im(dcols, x_shape, kh, kw, stride, pad)
    return dx, dw, db


def batchnorm_forward(x, gamma, beta, running_mean, running_var, momentum=0.1, eps=1e-5, train=True):
    """Channel-wise batch norm on NCHW. Mutates the running stats in train mode."""
    if train:
        mu = x.mean(axis=(0, 2, 3))
        var = x.var(axis=(0, 2, 3))
        running_mean *= 1.0 - momentum
        running_mean += momentum * mu
        running_var *= 1.0 - momentum
        running_var += momentum * var
    else:
        mu, var = running_mean, running_var
    inv_std = 1.0 / np.sqrt(var + eps)
    xhat = (x - mu[None, :, None, None]) * inv_std[None, :, None, None]
    y = gamma[None, :, None, None] * xhat + beta[None, :, None, None]
    return y, (xhat, inv_std, gamma)


def batchnorm_backward(dy, cache):
    xhat, inv_std, gamma = cache
    m = dy.shape[0] * dy.shape[2] * dy.shape[3]
    dgamma = (dy * xhat).sum(axis=(0, 2, 3))
    dbeta = dy.sum(axis=(0, 2, 3))
    dxhat = dy * gamma[None, :, None, None]
    s1 = dxhat.sum(axis=(0, 2, 3))[None, :, None, None]
    s2 = (dxhat * xhat).sum(axis=(0, 2, 3))[None, :, None, None]
    dx = (inv_std[None, :, None, None] / m) * (m * dxhat - s1 - xhat * s2)
    return dx, dgamma, dbeta


def relu_forward(x):
    return np.maximum(x, 0), x > 0


def relu_backward(dy, mask):
    return dy * mask


def maxpool_forward(x, k, stride, pad):
    out, arg = kernels.maxpool_forward(x, k, stride, pad)
    return out, (arg, x.shape, k, stride, pad)


def maxpool_backward(dy, cache):
    arg, x_shape, k, stride, pad = cache
    return kernels.maxpool_backward(dy, arg, x_shape, k, stride, pad)


def sigmoid(x):
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax(x, axis=-1):
    shifted = x - x.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=axis, keepdims=True)


def log_softmax(x, axis=-1):
    shifted = x - x.max(axis=axis, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=axis, keepdims=True))


def glorot(rng, shape, dtype):
    fan_in, fan_out = shape[0], shape[1] if len(shape) > 1 else shape[0]
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape).astype(dtype)


def he_conv(rng, shape, dtype):
    f, c, kh, kw = shape
    std = np.sqrt(2.0 / (c * kh * kw))
    return (rng.standard_normal(shape) * std).astype(dtype)


class Adam:
    """Adaptive-moment optimizer over a flat {name: array} parameter dict."""

    def __init__(self, params, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, params, grads):
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        bias1 = 1.0 - b1**self.t
        bias2 = 1.0 - b2**self.t
        for k, g in grads.items():
            m = self.m[k]
            v = self.v[k]
            m *= b1
            m += (1 - b1) * g
            v *= b2
            v += (1 - b2) * (g * g)
            params[k] -= self.lr * (m / bias1) / (np.sqrt(v / bias2) + self.eps)
