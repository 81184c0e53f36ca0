"""Teacher-forced training loop for the captioner."""

import logging
from dataclasses import dataclass, field

import numpy as np

from ..corpus.images import augment, load_image, preprocess_image
from ..corpus.vocab import PAD_ID, Vocabulary, tokenize
from ..errors import TrainingDiverged
from .encoder import FEATURE_HW
from .layers import Adam
from .model import CaptionerModel, Dims

log = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    learning_rate: float = 3e-4
    epochs: int = 150
    batch_size: int = 10
    seed: int = 0
    optimizer: str = "adam"
    hidden_size: int = 256
    embed_size: int = 128
    attn_size: int = 128
    encoder_width: int = 16
    augment: bool = True

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.optimizer != "adam":
            raise ValueError(f"unsupported optimizer {self.optimizer!r}")


@dataclass
class TrainLog:
    epoch_losses: list = field(default_factory=list)


def _pad_batch(sequences, dtype=np.int64):
    """[<start> ... <end>] id lists -> (input_ids, target_ids, mask) arrays."""
    n = len(sequences)
    t = max(len(s) for s in sequences) - 1
    input_ids = np.full((n, t), PAD_ID, dtype=dtype)
    target_ids = np.full((n, t), PAD_ID, dtype=dtype)
    for i, seq in enumerate(sequences):
        m = len(seq) - 1
        input_ids[i, :m] = seq[:-1]
        target_ids[i, :m] = seq[1:]
    return input_ids, target_ids, target_ids != PAD_ID


def train(dataset, vocab: Vocabulary, cfg: TrainConfig, progress=None):
    """Train encoder+decoder jointly with cross-entropy; returns (model, TrainLog).

    Deterministic given cfg.seed. `progress(epoch, mean_loss)` is called
    after every epoch when provided.
    """
    if not dataset:
        raise ValueError("cannot train on an empty dataset")

    rng = np.random.default_rng(cfg.seed)
    init_seed = int(rng.integers(2**31))
    shuffle_rng = np.random.default_rng(int(rng.integers(2**31)))
    aug_rng = np.random.default_rng(int(rng.integers(2**31)))

    dims = Dims(
        hidden_size=cfg.hidden_size,
        embed_size=cfg.embed_size,
        attn_size=cfg.attn_size,
        encoder_width=cfg.encoder_width,
    )
    model = CaptionerModel.init(vocab, dims, seed=init_seed)
    enc, dec = model.encoder, model.decoder
    l_locations = FEATURE_HW * FEATURE_HW

    tensors = [preprocess_image(load_image(rec.image_ref)) for rec in dataset]
    sequences = [tokenize(rec.caption, vocab) for rec in dataset]

    params = {f"enc.{k}": v for k, v in enc.params.items()}
    params.update({f"dec.{k}": v for k, v in dec.params.items()})
    opt = Adam(params, cfg.learning_rate)

    trainlog = TrainLog()
    n = len(dataset)
    for epoch in range(1, cfg.epochs + 1):
        order = shuffle_rng.permutation(n)
        epoch_ce = 0.0
        epoch_tokens = 0
        for step, start in enumerate(range(0, n, cfg.batch_size), start=1):
            idx = order[start : start + cfg.batch_size]
            imgs = []
            for i in idx:
                t = tensors[i]
                if cfg.augment:
                    t = augment(t, aug_rng)
                imgs.append(t.transpose(2, 0, 1))
            x = np.ascontiguousarray(np.stack(imgs))

            feat, enc_cache = enc.forward(x, train=True)
            b, c, fh, fw = feat.shape
            grid = np.ascontiguousarray(feat.transpose(0, 2, 3, 1)).reshape(b, l_locations, c)

            input_ids, target_ids, mask = _pad_batch([sequences[i] for i in idx])
            loss, dec_grads, dgrid = dec.loss_and_grads(grid, input_ids, target_ids, mask)
            if not np.isfinite(loss):
                raise TrainingDiverged(epoch, step)

            dfeat = np.ascontiguousarray(dgrid.reshape(b, fh, fw, c).transpose(0, 3, 1, 2))
            enc_grads = enc.backward(dfeat, enc_cache)

            grads = {f"enc.{k}": v for k, v in enc_grads.items()}
            grads.update({f"dec.{k}": v for k, v in dec_grads.items()})
            opt.step(params, grads)
            for name, value in params.items():
                if not np.all(np.isfinite(value)):
                    raise TrainingDiverged(epoch, step, f"parameter {name} became non-finite at epoch {epoch}, step {step}")

            valid = int(mask.sum())
            epoch_ce += loss * valid
            epoch_tokens += valid

        mean_loss = epoch_ce / epoch_tokens
        trainlog.epoch_losses.append(mean_loss)
        if progress is not None:
            progress(epoch, mean_loss)
        else:
            log.debug("epoch %d: mean loss %.4f", epoch, mean_loss)

    model.invalidate_identity()
    return model, trainlog
