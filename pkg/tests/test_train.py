"""Training loop behavior: overfit sanity, determinism, failure modes."""

import numpy as np
import pytest

from fieldguide.captioner import TrainConfig, greedy_decode, train
from fieldguide.corpus import build_vocabulary, load_image, preprocess_image
from fieldguide.corpus.vocab import detokenize, normalize_words
from fieldguide.errors import TrainingDiverged


def test_default_config_matches_training_recipe():
    cfg = TrainConfig()
    assert cfg.learning_rate == 3e-4
    assert cfg.epochs == 150
    assert cfg.optimizer == "adam"


def test_config_validation():
    with pytest.raises(ValueError):
        TrainConfig(learning_rate=0)
    with pytest.raises(ValueError):
        TrainConfig(epochs=0)
    with pytest.raises(ValueError):
        TrainConfig(optimizer="sgd")


def test_empty_dataset_raises(synth_corpus):
    _, _, vocab = synth_corpus
    with pytest.raises(ValueError):
        train([], vocab, TrainConfig(epochs=1))


@pytest.mark.slow
def test_single_pair_overfit(synth_corpus):
    """One image/caption, 200 epochs, no augmentation: loss < 0.1 and the
    greedy decode reproduces the training caption."""
    _, records, _ = synth_corpus
    rec = records[0]
    vocab = build_vocabulary([rec], min_freq=1)
    cfg = TrainConfig(
        epochs=200, batch_size=1, seed=3, augment=False,
        hidden_size=64, embed_size=32, attn_size=32, encoder_width=8,
    )
    model, trainlog = train([rec], vocab, cfg)
    assert trainlog.epoch_losses[-1] < 0.1
    img = preprocess_image(load_image(rec.image_ref))
    tokens, _ = greedy_decode(model, model.encode_image(img))
    assert detokenize(tokens, vocab) == " ".join(normalize_words(rec.caption))


def test_deterministic_given_seed(synth_corpus):
    _, records, vocab = synth_corpus
    cfg = TrainConfig(epochs=2, batch_size=4, seed=11,
                      hidden_size=16, embed_size=8, attn_size=8, encoder_width=2)
    _, log_a = train(records[:4], vocab, cfg)
    _, log_b = train(records[:4], vocab, cfg)
    assert log_a.epoch_losses == log_b.epoch_losses


def test_nan_loss_aborts_with_epoch_and_step(synth_corpus, monkeypatch):
    _, records, vocab = synth_corpus
    from fieldguide.captioner.decoder import Decoder

    real = Decoder.loss_and_grads

    def poisoned(self, grid, input_ids, target_ids, mask):
        loss, grads, dgrid = real(self, grid, input_ids, target_ids, mask)
        return float("nan"), grads, dgrid

    monkeypatch.setattr(Decoder, "loss_and_grads", poisoned)
    cfg = TrainConfig(epochs=1, batch_size=4, seed=0,
                      hidden_size=16, embed_size=8, attn_size=8, encoder_width=2)
    with pytest.raises(TrainingDiverged) as exc_info:
        train(records[:4], vocab, cfg)
    assert exc_info.value.epoch == 1
    assert exc_info.value.step == 1
    assert "epoch 1" in str(exc_info.value)


def test_parameters_finite_after_steps(synth_corpus):
    _, records, vocab = synth_corpus
    cfg = TrainConfig(epochs=2, batch_size=4, seed=5,
                      hidden_size=16, embed_size=8, attn_size=8, encoder_width=2)
    model, _ = train(records[:4], vocab, cfg)
    for params in (model.encoder.params, model.decoder.params):
        for name, arr in params.items():
            assert np.all(np.isfinite(arr)), name
