"""Service configuration: a flat key = value file.

Recognized keys (defaults in parentheses):

    model_path        path to the captioner artifact, required
    encoder_path      sentence encoder spec: "hashing[:dim]" or an artifact path, required
    gamma_threshold   similarity pass threshold (0.5)
    lambda_keywords   keywords per feedback message (2)
    beam_width        beam search width (3)
    queue_width       concurrent model inferences (1)
    listen_address    host:port to serve on (127.0.0.1:8077)
    data_dir          session store directory (./fieldguide-data)
    static_dir        optional directory of dashboard files served at /

Lines starting with # are comments.
"""

from dataclasses import dataclass
from pathlib import Path


def parse_kv_file(path) -> dict:
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


@dataclass
class ServiceConfig:
    model_path: str
    encoder_path: str
    gamma_threshold: float = 0.5
    lambda_keywords: int = 2
    beam_width: int = 3
    queue_width: int = 1
    listen_address: str = "127.0.0.1:8077"
    data_dir: str = "./fieldguide-data"
    static_dir: str | None = None

    @property
    def host(self) -> str:
        return self.listen_address.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen_address.rsplit(":", 1)[1])

    @classmethod
    def from_file(cls, path) -> "ServiceConfig":
        kv = parse_kv_file(path)
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(kv) - known
        if unknown:
            raise ValueError(f"unknown config keys in {path}: {sorted(unknown)}")
        for key in ("model_path", "encoder_path"):
            if key not in kv:
                raise ValueError(f"config {path} is missing required key {key!r}")
        typed = dict(kv)
        for key, caster in (
            ("gamma_threshold", float),
            ("lambda_keywords", int),
            ("beam_width", int),
            ("queue_width", int),
        ):
            if key in typed:
                typed[key] = caster(typed[key])
        return cls(**typed)
