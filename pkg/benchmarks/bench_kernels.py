"""Benchmark the compiled kernel core against the pure-NumPy fallback.

Usage: python benchmarks/bench_kernels.py [--quick]

Times each hot kernel at training-realistic shapes, then (unless --quick)
one full training step per backend in a subprocess so the import-time
backend choice applies cleanly.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from fieldguide.kernels import pure

try:
    from fieldguide.kernels import _core
except ImportError:
    _core = None


def timeit(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels():
    rng = np.random.default_rng(0)
    batch = 10
    cases = [
        ("im2col stem 3x3/2 on 256^2", "im2col",
         (rng.random((batch, 3, 256, 256)).astype(np.float32), 3, 3, 2, 1)),
        ("im2col block 3x3/1 on 32^2x16", "im2col",
         (rng.random((batch, 16, 32, 32)).astype(np.float32), 3, 3, 1, 1)),
        ("maxpool 3x3/2 on 128^2x16", "maxpool_forward",
         (rng.random((batch, 16, 128, 128)).astype(np.float32), 3, 2, 1)),
        ("bilinear_resize 512->256", "bilinear_resize",
         (rng.random((512, 512, 3)).astype(np.float32), 256, 256)),
        ("rotate_bilinear 256^2 by 4 deg", "rotate_bilinear",
         (rng.random((256, 256, 3)).astype(np.float32), 4.0)),
    ]
    x = rng.random((batch, 16, 64, 64)).astype(np.float32)
    cols = pure.im2col(x, 3, 3, 1, 1)
    cases.append(("col2im block 3x3/1 on 64^2x16", "col2im", (cols, x.shape, 3, 3, 1, 1)))

    print(f"{'kernel':36s} {'pure (ms)':>10s} {'cython (ms)':>12s} {'speedup':>8s}")
    for label, name, args in cases:
        t_pure = timeit(getattr(pure, name), *args) * 1e3
        if _core is not None:
            t_core = timeit(getattr(_core, name), *args) * 1e3
            print(f"{label:36s} {t_pure:10.2f} {t_core:12.2f} {t_pure / t_core:7.2f}x")
        else:
            print(f"{label:36s} {t_pure:10.2f} {'n/a':>12s} {'n/a':>8s}")


STEP_SNIPPET = r"""
import time, tempfile
from pathlib import Path
import numpy as np
from fieldguide.corpus import generate_corpus, ingest_dataset, build_vocabulary
from fieldguide.captioner import train, TrainConfig
import fieldguide.kernels as K

tmp = Path(tempfile.mkdtemp())
generate_corpus(tmp, count=10, seed=1)
records = ingest_dataset(tmp, tmp / "manifest.csv").records
vocab = build_vocabulary(records, 1)
t0 = time.perf_counter()
train(records, vocab, TrainConfig(epochs=3, batch_size=10, seed=0))
dt = (time.perf_counter() - t0) / 3
print(f"  backend={K.BACKEND}: {dt*1000:.0f} ms per 10-image epoch")
"""


def bench_train_step():
    print("\nfull training epoch (10 images, batch 10):", flush=True)
    for backend in ("cython", "pure"):
        if backend == "cython" and _core is None:
            continue
        env = dict(os.environ, FIELDGUIDE_KERNELS=backend)
        subprocess.run([sys.executable, "-c", STEP_SNIPPET], env=env, check=True)


if __name__ == "__main__":
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="skip the training-step benchmark")
    args = parser.parse_args()
    bench_kernels()
    if not args.quick:
        bench_train_step()
