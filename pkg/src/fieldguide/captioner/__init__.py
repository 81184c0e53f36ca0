from .beam import Hypothesis, beam_search, greedy_search
from .decoder import Decoder, DecodeStep
from .encoder import FEATURE_HW, Encoder
from .model import (
    CaptionerModel,
    Dims,
    MAX_EMISSIONS,
    attention_step,
    caption_image,
    decode_beam,
    encode_image,
    greedy_decode,
    load_model,
    persist_model,
)
from .train import TrainConfig, TrainLog, train

__all__ = [
    "CaptionerModel",
    "Decoder",
    "DecodeStep",
    "Dims",
    "Encoder",
    "FEATURE_HW",
    "Hypothesis",
    "MAX_EMISSIONS",
    "TrainConfig",
    "TrainLog",
    "attention_step",
    "beam_search",
    "caption_image",
    "decode_beam",
    "encode_image",
    "greedy_decode",
    "greedy_search",
    "load_model",
    "persist_model",
    "train",
]
