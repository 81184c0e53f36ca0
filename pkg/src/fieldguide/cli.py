"""Command-line entry points.

    fieldguide corpus synth --out DIR --count N --seed S
    fieldguide captioner train --data DIR [--config FILE] --out MODEL
    fieldguide captioner caption --model MODEL --image FILE [--beam K]
    fieldguide metrics eval --model MODEL --data DIR --out report.json
    fieldguide serve --config FILE
    fieldguide replay --events FILE --endpoint URL
"""

import argparse
import json
import sys
from pathlib import Path


def _cmd_corpus_synth(args):
    from .corpus import generate_corpus

    manifest = generate_corpus(args.out, args.count, args.seed)
    print(f"wrote {args.count} scenes, manifest at {manifest}")
    return 0


def _load_dataset(root):
    from .corpus import ingest_dataset

    root = Path(root)
    result = ingest_dataset(root, root / "manifest.csv")
    for err in result.errors:
        print(f"warning: skipped {err}", file=sys.stderr)
    return result.records


def _cmd_captioner_train(args):
    from .captioner import TrainConfig, persist_model, train
    from .corpus import build_vocabulary
    from .service.config import parse_kv_file

    records = _load_dataset(args.data)
    overrides = {}
    if args.config:
        raw = parse_kv_file(args.config)
        casts = {f: type(getattr(TrainConfig(), f)) for f in TrainConfig.__dataclass_fields__}
        for key, value in raw.items():
            if key not in casts:
                raise SystemExit(f"unknown training config key {key!r}")
            caster = casts[key]
            overrides[key] = value.lower() in ("1", "true", "yes") if caster is bool else caster(value)
    cfg = TrainConfig(**overrides)
    vocab = build_vocabulary(records, min_freq=1)
    print(f"training on {len(records)} records, |vocab|={len(vocab)}, {cfg.epochs} epochs")
    model, trainlog = train(records, vocab, cfg, progress=lambda e, l: print(f"epoch {e:4d}  loss {l:.4f}"))
    persist_model(model, args.out)
    print(f"model saved to {args.out} (final loss {trainlog.epoch_losses[-1]:.4f})")
    return 0


def _cmd_captioner_caption(args):
    from .captioner import FEATURE_HW, decode_beam, load_model
    from .corpus import load_image, preprocess_image
    from .corpus.vocab import detokenize

    model = load_model(args.model)
    img = preprocess_image(load_image(args.image))
    grid = model.encode_image(img)
    tokens, alphas = decode_beam(model, grid, args.beam)
    caption = detokenize(tokens, model.vocab)
    print(caption)
    words = [model.vocab.id_to_token[t] for t in tokens]
    if len(alphas) > len(words):
        words.append("<end>")
    for step, (word, alpha) in enumerate(zip(words, alphas), start=1):
        loc = int(alpha.argmax())
        print(f"  step {step:2d} {word:>14s}  top attention cell ({loc // FEATURE_HW}, {loc % FEATURE_HW})")
    return 0


def _cmd_metrics_eval(args):
    from .captioner import load_model
    from .feedback import AssessmentConfig
    from .metrics import evaluate_model

    model = load_model(args.model)
    records = _load_dataset(args.data)
    report = evaluate_model(model, records, AssessmentConfig(beam_width=args.beam))
    payload = report.to_json_dict()
    Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    print(json.dumps(payload, indent=2))
    if report.excluded:
        print(f"excluded {report.excluded} undecodable items", file=sys.stderr)
    return 0


def _cmd_serve(args):
    from .service import ServiceConfig, serve

    serve(ServiceConfig.from_file(args.config))
    return 0


def _cmd_replay(args):
    from .service import ReplayTransportError, replay_events

    try:
        summary = replay_events(args.events, args.endpoint)
    except ReplayTransportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps({"session_id": summary.session_id, **summary.as_dict()}, indent=2))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="fieldguide", description="observation assessment pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    corpus = sub.add_parser("corpus", help="dataset utilities").add_subparsers(dest="subcommand", required=True)
    synth = corpus.add_parser("synth", help="generate the synthetic shape/color corpus")
    synth.add_argument("--out", required=True)
    synth.add_argument("--count", type=int, required=True)
    synth.add_argument("--seed", type=int, default=0)
    synth.set_defaults(func=_cmd_corpus_synth)

    captioner = sub.add_parser("captioner", help="train or run the captioner").add_subparsers(
        dest="subcommand", required=True
    )
    train_p = captioner.add_parser("train", help="train on a dataset directory (manifest.csv inside)")
    train_p.add_argument("--data", required=True)
    train_p.add_argument("--config", help="key=value training overrides")
    train_p.add_argument("--out", required=True)
    train_p.set_defaults(func=_cmd_captioner_train)
    caption_p = captioner.add_parser("caption", help="caption one image")
    caption_p.add_argument("--model", required=True)
    caption_p.add_argument("--image", required=True)
    caption_p.add_argument("--beam", type=int, default=3)
    caption_p.set_defaults(func=_cmd_captioner_caption)

    metrics = sub.add_parser("metrics", help="evaluation harness").add_subparsers(dest="subcommand", required=True)
    eval_p = metrics.add_parser("eval", help="BLEU/METEOR report for a model on a dataset")
    eval_p.add_argument("--model", required=True)
    eval_p.add_argument("--data", required=True)
    eval_p.add_argument("--out", required=True)
    eval_p.add_argument("--beam", type=int, default=3)
    eval_p.set_defaults(func=_cmd_metrics_eval)

    serve_p = sub.add_parser("serve", help="run the assessment service")
    serve_p.add_argument("--config", required=True)
    serve_p.set_defaults(func=_cmd_serve)

    replay_p = sub.add_parser("replay", help="replay an observation events file against a service")
    replay_p.add_argument("--events", required=True)
    replay_p.add_argument("--endpoint", required=True)
    replay_p.set_defaults(func=_cmd_replay)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
