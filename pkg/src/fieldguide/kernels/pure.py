"""Pure-NumPy implementations of the hot kernels.

These are the fallback versions of the routines in ``_core.pyx``; both
backends must produce identical results (see tests/test_kernels.py).
All 4d tensors are NCHW, images are HWC.
"""

import numpy as np


def conv_out_size(size, k, stride, pad):
    return (size + 2 * pad - k) // stride + 1


def im2col(x, kh, kw, stride, pad):
    """Unfold conv windows: (N,C,H,W) -> (N, C*kh*kw, OH*OW)."""
    n, c, h, w = x.shape
    oh = conv_out_size(h, kh, stride, pad)
    ow = conv_out_size(w, kw, stride, pad)
    xp = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad))) if pad else x
    cols = np.empty((n, c * kh * kw, oh * ow), dtype=x.dtype)
    colv = cols.reshape(n, c, kh, kw, oh, ow)
    for i in range(kh):
        for j in range(kw):
            colv[:, :, i, j] = xp[:, :, i : i + stride * oh : stride, j : j + stride * ow : stride]
    return cols


def col2im(cols, x_shape, kh, kw, stride, pad):
    """Adjoint of im2col: scatter-add columns back to (N,C,H,W)."""
    n, c, h, w = x_shape
    oh = conv_out_size(h, kh, stride, pad)
    ow = conv_out_size(w, kw, stride, pad)
    colv = cols.reshape(n, c, kh, kw, oh, ow)
    xp = np.zeros((n, c, h + 2 * pad, w + 2 * pad), dtype=cols.dtype)
    for i in range(kh):
        for j in range(kw):
            xp[:, :, i : i + stride * oh : stride, j : j + stride * ow : stride] += colv[:, :, i, j]
    if pad:
        return np.ascontiguousarray(xp[:, :, pad : pad + h, pad : pad + w])
    return xp


def maxpool_forward(x, k, stride, pad):
    """Max pool; returns (out, argmax) with argmax an index into the k*k window."""
    n, c, h, w = x.shape
    oh = conv_out_size(h, k, stride, pad)
    ow = conv_out_size(w, k, stride, pad)
    if pad:
        xp = np.full((n, c, h + 2 * pad, w + 2 * pad), -np.inf, dtype=x.dtype)
        xp[:, :, pad : pad + h, pad : pad + w] = x
    else:
        xp = x
    windows = np.empty((n, c, k * k, oh, ow), dtype=x.dtype)
    for i in range(k):
        for j in range(k):
            windows[:, :, i * k + j] = xp[:, :, i : i + stride * oh : stride, j : j + stride * ow : stride]
    arg = windows.argmax(axis=2)
    out = np.take_along_axis(windows, arg[:, :, None], axis=2)[:, :, 0]
    return out, arg.astype(np.int8)


def maxpool_backward(dy, arg, x_shape, k, stride, pad):
    n, c, h, w = x_shape
    oh, ow = dy.shape[2], dy.shape[3]
    dxp = np.zeros((n, c, h + 2 * pad, w + 2 * pad), dtype=dy.dtype)
    for i in range(k):
        for j in range(k):
            idx = i * k + j
            view = dxp[:, :, i : i + stride * oh : stride, j : j + stride * ow : stride]
            view += np.where(arg == idx, dy, 0)
    if pad:
        return np.ascontiguousarray(dxp[:, :, pad : pad + h, pad : pad + w])
    return dxp


def bilinear_resize(img, oh, ow):
    """Bilinear resample of an HWC image, half-pixel centers, edge clamped."""
    h, w, _ = img.shape
    sy = (np.arange(oh, dtype=np.float64) + 0.5) * (h / oh) - 0.5
    sx = (np.arange(ow, dtype=np.float64) + 0.5) * (w / ow) - 0.5
    sy = np.clip(sy, 0.0, h - 1.0)
    sx = np.clip(sx, 0.0, w - 1.0)
    y0 = np.floor(sy).astype(np.intp)
    x0 = np.floor(sx).astype(np.intp)
    y1 = np.minimum(y0 + 1, h - 1)
    x1 = np.minimum(x0 + 1, w - 1)
    fy = (sy - y0).astype(img.dtype)[:, None, None]
    fx = (sx - x0).astype(img.dtype)[None, :, None]
    top = img[y0][:, x0] * (1 - fx) + img[y0][:, x1] * fx
    bot = img[y1][:, x0] * (1 - fx) + img[y1][:, x1] * fx
    return top * (1 - fy) + bot * fy


def rotate_bilinear(img, angle_deg):
    """Rotate an HWC image about its center; out-of-frame pixels are zero."""
    h, w, c = img.shape
    theta = np.deg2rad(angle_deg)
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    rr, cc = np.meshgrid(np.arange(h, dtype=np.float64), np.arange(w, dtype=np.float64), indexing="ij")
    # inverse mapping: output pixel <- source coordinate
    xs = cos_t * (cc - cx) + sin_t * (rr - cy) + cx
    ys = -sin_t * (cc - cx) + cos_t * (rr - cy) + cy
    x0 = np.floor(xs).astype(np.intp)
    y0 = np.floor(ys).astype(np.intp)
    fx = (xs - x0).astype(img.dtype)
    fy = (ys - y0).astype(img.dtype)
    out = np.zeros_like(img)
    for dy_ in (0, 1):
        for dx_ in (0, 1):
            yy = y0 + dy_
            xx = x0 + dx_
            valid = (yy >= 0) & (yy < h) & (xx >= 0) & (xx < w)
            wgt = (fy if dy_ else 1 - fy) * (fx if dx_ else 1 - fx)
            wgt = np.where(valid, wgt, 0).astype(img.dtype)
            yc = np.clip(yy, 0, h - 1)
            xc = np.clip(xx, 0, w - 1)
            out += img[yc, xc] * wgt[:, :, None]
    return out
