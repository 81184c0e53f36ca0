# Compiled versions of the hot kernels. Must match kernels/pure.py bit-for-bit
# on float64 and to rounding on float32 (same arithmetic order is kept where
# it matters).

import numpy as np

cimport cython
cimport numpy as cnp

cnp.import_array()

ctypedef fused floating:
    float
    double


def conv_out_size(Py_ssize_t size, Py_ssize_t k, Py_ssize_t stride, Py_ssize_t pad):
    return (size + 2 * pad - k) // stride + 1


@cython.boundscheck(False)
@cython.wraparound(False)
def im2col(floating[:, :, :, ::1] x, Py_ssize_t kh, Py_ssize_t kw, Py_ssize_t stride, Py_ssize_t pad):
    cdef Py_ssize_t n = x.shape[0], c = x.shape[1], h = x.shape[2], w = x.shape[3]
    cdef Py_ssize_t oh = (h + 2 * pad - kh) // stride + 1
    cdef Py_ssize_t ow = (w + 2 * pad - kw) // stride + 1
    if floating is float:
        dtype = np.float32
    else:
        dtype = np.float64
    cols_arr = np.zeros((n, c * kh * kw, oh * ow), dtype=dtype)
    cdef floating[:, :, ::1] cols = cols_arr
    cdef Py_ssize_t b, ch, i, j, oy, ox, iy, ix, col
    with nogil:
        for b in range(n):
            for ch in range(c):
                for i in range(kh):
                    for j in range(kw):
                        col = (ch * kh + i) * kw + j
                        for oy in range(oh):
                            iy = oy * stride + i - pad
                            if iy < 0 or iy >= h:
                                continue
                            for ox in range(ow):
                                ix = ox * stride + j - pad
                                if ix < 0 or ix >= w:
                                    continue
                                cols[b, col, oy * ow + ox] = x[b, ch, iy, ix]
    return cols_arr


@cython.boundscheck(False)
@cython.wraparound(False)
def col2im(floating[:, :, ::1] cols, x_shape, Py_ssize_t kh, Py_ssize_t kw, Py_ssize_t stride, Py_ssize_t pad):
    cdef Py_ssize_t n = x_shape[0], c = x_shape[1], h = x_shape[2], w = x_shape[3]
    cdef Py_ssize_t oh = (h + 2 * pad - kh) // stride + 1
    cdef Py_ssize_t ow = (w + 2 * pad - kw) // stride + 1
    if floating is float:
        dtype = np.float32
    else:
        dtype = np.float64
    x_arr = np.zeros((n, c, h, w), dtype=dtype)
    cdef floating[:, :, :, ::1] x = x_arr
    cdef Py_ssize_t b, ch, i, j, oy, ox, iy, ix, col
    with nogil:
        for b in range(n):
            for ch in range(c):
                for i in range(kh):
                    for j in range(kw):
                        col = (ch * kh + i) * kw + j
                        for oy in range(oh):
                            iy = oy * stride + i - pad
                            if iy < 0 or iy >= h:
                                continue
                            for ox in range(ow):
                                ix = ox * stride + j - pad
                                if ix < 0 or ix >= w:
                                    continue
                                x[b, ch, iy, ix] += cols[b, col, oy * ow + ox]
    return x_arr


@cython.boundscheck(False)
@cython.wraparound(False)
def maxpool_forward(floating[:, :, :, ::1] x, Py_ssize_t k, Py_ssize_t stride, Py_ssize_t pad):
    cdef Py_ssize_t n = x.shape[0], c = x.shape[1], h = x.shape[2], w = x.shape[3]
    cdef Py_ssize_t oh = (h + 2 * pad - k) // stride + 1
    cdef Py_ssize_t ow = (w + 2 * pad - k) // stride + 1
    if floating is float:
        dtype = np.float32
    else:
        dtype = np.float64
    out_arr = np.empty((n, c, oh, ow), dtype=dtype)
    arg_arr = np.zeros((n, c, oh, ow), dtype=np.int8)
    cdef floating[:, :, :, ::1] out = out_arr
    cdef signed char[:, :, :, ::1] arg = arg_arr
    cdef Py_ssize_t b, ch, oy, ox, i, j, iy, ix
    cdef floating best, v
    cdef signed char bi
    cdef bint seen
    with nogil:
        for b in range(n):
            for ch in range(c):
                for oy in range(oh):
                    for ox in range(ow):
                        seen = False
                        best = 0
                        bi = 0
                        for i in range(k):
                            iy = oy * stride + i - pad
                            if iy < 0 or iy >= h:
                                continue
                            for j in range(k):
                                ix = ox * stride + j - pad
                                if ix < 0 or ix >= w:
                                    continue
                                v = x[b, ch, iy, ix]
                                if not seen or v > best:
                                    best = v
                                    bi = <signed char>(i * k + j)
                                    seen = True
                        out[b, ch, oy, ox] = best
                        arg[b, ch, oy, ox] = bi
    return out_arr, arg_arr


@cython.boundscheck(False)
@cython.wraparound(False)
def maxpool_backward(floating[:, :, :, ::1] dy, signed char[:, :, :, ::1] arg, x_shape, Py_ssize_t k, Py_ssize_t stride, Py_ssize_t pad):
    cdef Py_ssize_t n = x_shape[0], c = x_shape[1], h = x_shape[2], w = x_shape[3]
    cdef Py_ssize_t oh = dy.shape[2], ow = dy.shape[3]
    if floating is float:
        dtype = np.float32
    else:
        dtype = np.float64
    dx_arr = np.zeros((n, c, h, w), dtype=dtype)
    cdef floating[:, :, :, ::1] dx = dx_arr
    cdef Py_ssize_t b, ch, oy, ox, iy, ix
    cdef signed char bi
    with nogil:
        for b in range(n):
            for ch in range(c):
                for oy in range(oh):
                    for ox in range(ow):
                        bi = arg[b, ch, oy, ox]
                        iy = oy * stride + (bi // k) - pad
                        ix = ox * stride + (bi % k) - pad
                        if 0 <= iy < h and 0 <= ix < w:
                            dx[b, ch, iy, ix] += dy[b, ch, oy, ox]
    return dx_arr


@cython.boundscheck(False)
@cython.wraparound(False)
def bilinear_resize(floating[:, :, ::1] img, Py_ssize_t oh, Py_ssize_t ow):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1], c = img.shape[2]
    if floating is float:
        dtype = np.float32
    else:
        dtype = np.float64
    out_arr = np.empty((oh, ow, c), dtype=dtype)
    cdef floating[:, :, ::1] out = out_arr
    cdef Py_ssize_t oy, ox, ch, y0, x0, y1, x1
    cdef double sy, sx, fy, fx
    cdef double scale_y = <double>h / oh, scale_x = <double>w / ow
    with nogil:
        for oy in range(oh):
            sy = (oy + 0.5) * scale_y - 0.5
            if sy < 0:
                sy = 0
            if sy > h - 1:
                sy = h - 1
            y0 = <Py_ssize_t>sy
            fy = sy - y0
            y1 = y0 + 1 if y0 + 1 < h else h - 1
            for ox in range(ow):
                sx = (ox + 0.5) * scale_x - 0.5
                if sx < 0:
                    sx = 0
                if sx > w - 1:
                    sx = w - 1
                x0 = <Py_ssize_t>sx
                fx = sx - x0
                x1 = x0 + 1 if x0 + 1 < w else w - 1
                for ch in range(c):
                    out[oy, ox, ch] = <floating>(
                        (img[y0, x0, ch] * (1 - fx) + img[y0, x1, ch] * fx) * (1 - fy)
                        + (img[y1, x0, ch] * (1 - fx) + img[y1, x1, ch] * fx) * fy
                    )
    return out_arr


@cython.boundscheck(False)
@cython.wraparound(False)
def rotate_bilinear(floating[:, :, ::1] img, double angle_deg):
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1], c = img.shape[2]
    if floating is float:
        dtype = np.float32
    else:
        dtype = np.float64
    out_arr = np.zeros((h, w, c), dtype=dtype)
    cdef floating[:, :, ::1] out = out_arr
    cdef double theta = angle_deg * np.pi / 180.0
    cdef double cos_t = np.cos(theta), sin_t = np.sin(theta)
    cdef double cy = (h - 1) / 2.0, cx = (w - 1) / 2.0
    cdef Py_ssize_t r, col, ch, x0, y0, x1, y1
    cdef double xs, ys, fx, fy, w00, w01, w10, w11, acc
    with nogil:
        for r in range(h):
            for col in range(w):
                xs = cos_t * (col - cx) + sin_t * (r - cy) + cx
                ys = -sin_t * (col - cx) + cos_t * (r - cy) + cy
                x0 = <Py_ssize_t>xs if xs >= 0 else <Py_ssize_t>xs - 1
                y0 = <Py_ssize_t>ys if ys >= 0 else <Py_ssize_t>ys - 1
                fx = xs - x0
                fy = ys - y0
                x1 = x0 + 1
                y1 = y0 + 1
                w00 = (1 - fy) * (1 - fx)
                w01 = (1 - fy) * fx
                w10 = fy * (1 - fx)
                w11 = fy * fx
                for ch in range(c):
                    acc = 0
                    if 0 <= y0 < h and 0 <= x0 < w:
                        acc += img[y0, x0, ch] * w00
                    if 0 <= y0 < h and 0 <= x1 < w:
                        acc += img[y0, x1, ch] * w01
                    if 0 <= y1 < h and 0 <= x0 < w:
                        acc += img[y1, x0, ch] * w10
                    if 0 <= y1 < h and 0 <= x1 < w:
                        acc += img[y1, x1, ch] * w11
                    out[r, col, ch] = <floating>acc
    return out_arr
