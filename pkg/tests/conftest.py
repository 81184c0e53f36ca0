import contextlib
import threading
import time

import numpy as np
import pytest

from fieldguide.captioner import CaptionerModel, Dims
from fieldguide.corpus import build_vocabulary, generate_corpus, ingest_dataset
from fieldguide.semantics import HashingSentenceEncoder


@pytest.fixture(scope="session")
def synth_corpus(tmp_path_factory):
    """Small rendered corpus shared across tests: (root, records, vocab)."""
    root = tmp_path_factory.mktemp("synth")
    generate_corpus(root, count=12, seed=7)
    result = ingest_dataset(root, root / "manifest.csv")
    assert not result.errors
    vocab = build_vocabulary(result.records, min_freq=1)
    return root, result.records, vocab


@pytest.fixture(scope="session")
def stub_encoder():
    return HashingSentenceEncoder(256)


TINY_DIMS = dict(hidden_size=32, embed_size=16, attn_size=16, encoder_width=4)


@pytest.fixture(scope="session")
def tiny_model(synth_corpus):
    """Random-weight model with a small encoder; fast enough for plumbing tests."""
    _, _, vocab = synth_corpus
    return CaptionerModel.init(vocab, Dims(**TINY_DIMS), seed=1)


@contextlib.contextmanager
def run_service(app):
    """Serve a FastAPI app on an ephemeral port in a background thread."""
    import uvicorn

    server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 15
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("uvicorn did not start")
        time.sleep(0.02)
    port = server.servers[0].sockets[0].getsockname()[1]
    try:
        yield f"http://127.0.0.1:{port}"
    finally:
        server.should_exit = True
        thread.join(timeout=10)


def make_png(path, size=(320, 240), seed=0):
    """Write a small random RGB PNG; returns the path."""
    from PIL import Image

    rng = np.random.default_rng(seed)
    arr = rng.integers(0, 256, size=(size[1], size[0], 3), dtype=np.uint8)
    Image.fromarray(arr).save(path)
    return path
