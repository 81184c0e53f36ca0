"""Model artifact round-trip and corruption handling."""

import json

import numpy as np
import pytest

from fieldguide.captioner import CaptionerModel, Dims, decode_beam, load_model, persist_model
from fieldguide.corpus import load_image, preprocess_image
from fieldguide.errors import ModelFormatError

from conftest import TINY_DIMS


def test_round_trip_preserves_decoding(tmp_path, tiny_model, synth_corpus):
    _, records, _ = synth_corpus
    path = tmp_path / "model.npz"
    persist_model(tiny_model, path)
    loaded = load_model(path)

    img = preprocess_image(load_image(records[0].image_ref))
    before, _ = decode_beam(tiny_model, tiny_model.encode_image(img), 3)
    after, _ = decode_beam(loaded, loaded.encode_image(img), 3)
    assert before == after
    assert loaded.vocab.id_to_token == tiny_model.vocab.id_to_token
    assert loaded.dims == tiny_model.dims


def test_truncated_file_raises_with_version(tmp_path, tiny_model):
    path = tmp_path / "model.npz"
    persist_model(tiny_model, path)
    data = path.read_bytes()
    path.write_bytes(data[: len(data) // 3])
    with pytest.raises(ModelFormatError) as exc_info:
        load_model(path)
    assert "fieldguide-captioner-v1" in str(exc_info.value)


def test_not_a_model_file_raises(tmp_path):
    path = tmp_path / "bogus.npz"
    path.write_bytes(b"definitely not a zip")
    with pytest.raises(ModelFormatError):
        load_model(path)


def test_wrong_version_raises(tmp_path, tiny_model):
    path = tmp_path / "model.npz"
    persist_model(tiny_model, path)
    with np.load(path) as data:
        arrays = {k: data[k] for k in data.files}
    meta = json.loads(bytes(arrays["meta"].tobytes()).decode())
    meta["format_version"] = "fieldguide-captioner-v0"
    arrays["meta"] = np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8)
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)
    with pytest.raises(ModelFormatError) as exc_info:
        load_model(path)
    assert "v0" in str(exc_info.value) and "fieldguide-captioner-v1" in str(exc_info.value)


def test_dims_array_mismatch_raises(tmp_path, tiny_model):
    """Meta dims disagreeing with the stored arrays must be rejected."""
    path = tmp_path / "model.npz"
    persist_model(tiny_model, path)
    with np.load(path) as data:
        arrays = {k: data[k] for k in data.files}
    meta = json.loads(bytes(arrays["meta"].tobytes()).decode())
    meta["dims"]["hidden_size"] += 8
    arrays["meta"] = np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8)
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)
    with pytest.raises(ModelFormatError) as exc_info:
        load_model(path)
    assert "shape" in str(exc_info.value)


def test_missing_array_raises(tmp_path, tiny_model):
    path = tmp_path / "model.npz"
    persist_model(tiny_model, path)
    with np.load(path) as data:
        arrays = {k: data[k] for k in data.files if k != "dec.out.wh"}
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)
    with pytest.raises(ModelFormatError) as exc_info:
        load_model(path)
    assert "dec.out.wh" in str(exc_info.value)


def test_identity_changes_with_weights(synth_corpus):
    _, _, vocab = synth_corpus
    a = CaptionerModel.init(vocab, Dims(**TINY_DIMS), seed=1)
    b = CaptionerModel.init(vocab, Dims(**TINY_DIMS), seed=2)
    assert a.identity != b.identity
    assert a.identity.startswith("fieldguide-captioner-v1")
