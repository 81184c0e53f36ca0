"""Captioner model assembly, decoding entry points, and persistence."""

import hashlib
import json
import zipfile
from dataclasses import asdict, dataclass

import numpy as np

from ..corpus.vocab import END_ID, MAX_CAPTION_IDS, START_ID, Vocabulary, detokenize
from ..errors import ModelFormatError
from . import layers
from .beam import beam_search, greedy_search
from .decoder import Decoder
from .encoder import FEATURE_HW, Encoder

FORMAT_VERSION = "fieldguide-captioner-v1"
MAX_EMISSIONS = MAX_CAPTION_IDS - 1  # everything after <start>


@dataclass
class Dims:
    feat_locations: int = FEATURE_HW * FEATURE_HW
    feat_dim: int = 128
    hidden_size: int = 256
    embed_size: int = 128
    attn_size: int = 128
    encoder_width: int = 16


class CaptionerModel:
    def __init__(self, encoder: Encoder, decoder: Decoder, vocab: Vocabulary, dims: Dims):
        self.encoder = encoder
        self.decoder = decoder
        self.vocab = vocab
        self.dims = dims
        self._identity = None

    @classmethod
    def init(cls, vocab: Vocabulary, dims: Dims = None, seed: int = 0, dtype=np.float32):
        dims = dims or Dims()
        rng = np.random.default_rng(seed)
        encoder = Encoder(width=dims.encoder_width, rng=rng, dtype=dtype)
        dims.feat_dim = encoder.out_channels
        decoder = Decoder(
            len(vocab), dims.feat_dim, dims.hidden_size, dims.embed_size, dims.attn_size, rng=rng, dtype=dtype
        )
        return cls(encoder, decoder, vocab, dims)

    @property
    def identity(self) -> str:
        if self._identity is None:
            digest = hashlib.sha256()
            for name in sorted(self.encoder.params):
                digest.update(self.encoder.params[name].tobytes())
            for name in sorted(self.decoder.params):
                digest.update(self.decoder.params[name].tobytes())
            self._identity = f"{FORMAT_VERSION}-{digest.hexdigest()[:8]}"
        return self._identity

    def invalidate_identity(self):
        self._identity = None

    # ------------------------------------------------------------------

    def encode_image(self, img: np.ndarray) -> np.ndarray:
        """Preprocessed 256x256x3 image -> (L, D) feature grid."""
        if img.shape != (256, 256, 3):
            raise ValueError(f"expected a preprocessed 256x256x3 image, got {img.shape}")
        x = np.ascontiguousarray(img.transpose(2, 0, 1))[None]
        feat, _ = self.encoder.forward(x, train=False)
        n, c, fh, fw = feat.shape
        return feat.transpose(0, 2, 3, 1).reshape(fh * fw, c)

    def _step_fn(self, grid):
        grid_b = grid[None]
        grid_att = self.decoder.project_grid(grid_b)

        def step(prev_token, state):
            h, c = state
            logits, alpha, _, h_new, c_new = self.decoder.step(np.array([prev_token]), h, c, grid_b, grid_att)
            return layers.log_softmax(logits, axis=1)[0], (h_new, c_new), alpha[0]

        return step

    def _init_state(self, grid):
        h0, c0, _ = self.decoder.init_state(grid[None])
        return (h0, c0)


def encode_image(model: CaptionerModel, img: np.ndarray) -> np.ndarray:
    return model.encode_image(img)


def attention_step(model: CaptionerModel, decoder_hidden: np.ndarray, grid: np.ndarray):
    """Attention weights and context for one decoder hidden state."""
    if decoder_hidden.shape != (model.dims.hidden_size,):
        raise ValueError(f"hidden state must have shape ({model.dims.hidden_size},), got {decoder_hidden.shape}")
    if grid.ndim != 2 or grid.shape[1] != model.dims.feat_dim:
        raise ValueError(f"feature grid must be (L, {model.dims.feat_dim}), got {grid.shape}")
    grid_b = grid[None]
    alpha, context, _ = model.decoder.attention(decoder_hidden[None], grid_b, model.decoder.project_grid(grid_b))
    return alpha[0], context[0]


def decode_beam(model: CaptionerModel, grid: np.ndarray, k: int = 3):
    """Best caption by length-normalized beam search.

    Returns (token ids without <start>/<end>, attention trace: one alpha
    per emitted token).
    """
    finished = beam_search(model._step_fn(grid), model._init_state(grid), START_ID, END_ID, k, MAX_EMISSIONS)
    best = finished[0]
    tokens = [t for t in best.tokens if t != END_ID]
    return tokens, list(best.alphas)


def greedy_decode(model: CaptionerModel, grid: np.ndarray):
    tokens, alphas = greedy_search(model._step_fn(grid), model._init_state(grid), START_ID, END_ID, MAX_EMISSIONS)
    return [t for t in tokens if t != END_ID], alphas


def caption_image(model: CaptionerModel, img: np.ndarray, k: int = 3):
    """Preprocessed image -> (caption text, attention trace)."""
    grid = model.encode_image(img)
    tokens, alphas = decode_beam(model, grid, k)
    return detokenize(tokens, model.vocab), alphas


# ----------------------------------------------------------------------
# persistence: one .npz with a JSON meta entry plus all parameter arrays


def persist_model(model: CaptionerModel, path):
    meta = {
        "format_version": FORMAT_VERSION,
        "dims": asdict(model.dims),
        "vocab": model.vocab.to_dict(),
        "dtype": np.dtype(model.encoder.dtype).name,
    }
    arrays = {"meta": np.frombuffer(json.dumps(meta).encode("utf-8"), dtype=np.uint8)}
    for k, v in model.encoder.params.items():
        arrays[f"enc.{k}"] = v
    for k, v in model.encoder.state.items():
        arrays[f"encstate.{k}"] = v
    for k, v in model.decoder.params.items():
        arrays[f"dec.{k}"] = v
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)


def load_model(path) -> CaptionerModel:
    try:
        with np.load(path) as data:
            arrays = {k: data[k] for k in data.files}
    except (OSError, ValueError, zipfile.BadZipFile, EOFError) as exc:
        raise ModelFormatError(f"cannot read model file (expected format {FORMAT_VERSION}): {exc}") from exc
    if "meta" not in arrays:
        raise ModelFormatError(f"model file has no meta block (expected format {FORMAT_VERSION})")
    try:
        meta = json.loads(bytes(arrays["meta"].tobytes()).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"model meta block is corrupt (expected format {FORMAT_VERSION})") from exc
    if meta.get("format_version") != FORMAT_VERSION:
        raise ModelFormatError(
            f"model format version {meta.get('format_version')!r} not supported, expected {FORMAT_VERSION}"
        )

    dims = Dims(**meta["dims"])
    vocab = Vocabulary.from_dict(meta["vocab"])
    dtype = np.dtype(meta["dtype"])
    model = CaptionerModel.init(vocab, dims, seed=0, dtype=dtype)

    for store, prefix in ((model.encoder.params, "enc."), (model.encoder.state, "encstate."), (model.decoder.params, "dec.")):
        for k, v in store.items():
            name = prefix + k
            if name not in arrays:
                raise ModelFormatError(f"model file is missing array {name!r} (expected format {FORMAT_VERSION})")
            loaded = arrays[name]
            if loaded.shape != v.shape:
                raise ModelFormatError(
                    f"array {name!r} has shape {loaded.shape}, but dims metadata implies {v.shape}"
                )
            store[k] = loaded.astype(dtype)
    model.invalidate_identity()
    return model
