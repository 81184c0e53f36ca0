"""Hot-kernel backend selection.

The compiled Cython core is used when available; set FIELDGUIDE_KERNELS=pure
to force the NumPy fallback (or =cython to fail loudly if the extension is
missing). ``BACKEND`` reports which one is active.
"""

import os

import numpy as np

from . import pure

_requested = os.environ.get("FIELDGUIDE_KERNELS", "auto").lower()

_impl = pure
BACKEND = "pure"
if _requested in ("auto", "cython"):
    try:
        from . import _core

        _impl = _core
        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
elif _requested != "pure":
    raise ValueError(f"FIELDGUIDE_KERNELS must be auto|cython|pure, got {_requested!r}")


def _ascontig(x):
    return np.ascontiguousarray(x)


def im2col(x, kh, kw, stride, pad):
    return _impl.im2col(_ascontig(x), kh, kw, stride, pad)


def col2im(cols, x_shape, kh, kw, stride, pad):
    return _impl.col2im(_ascontig(cols), tuple(x_shape), kh, kw, stride, pad)


def maxpool_forward(x, k, stride, pad):
    return _impl.maxpool_forward(_ascontig(x), k, stride, pad)


def maxpool_backward(dy, arg, x_shape, k, stride, pad):
    return _impl.maxpool_backward(_ascontig(dy), _ascontig(arg), tuple(x_shape), k, stride, pad)


def bilinear_resize(img, oh, ow):
    return _impl.bilinear_resize(_ascontig(img), oh, ow)


def rotate_bilinear(img, angle_deg):
    return _impl.rotate_bilinear(_ascontig(img), float(angle_deg))


conv_out_size = pure.conv_out_size
