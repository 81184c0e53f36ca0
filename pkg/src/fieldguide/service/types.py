"""Service domain records and their JSON forms."""

from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone


@dataclass
class Coords:
    x: float
    y: float
    z: float
    yaw: float
    pitch: float

    def validate(self):
        if not -90.0 <= self.pitch <= 90.0:
            raise ValueError(f"pitch must be in [-90, 90], got {self.pitch}")
        if not -180.0 <= self.yaw < 180.0:
            raise ValueError(f"yaw must be in [-180, 180), got {self.yaw}")


@dataclass
class Observation:
    id: str
    session_id: str
    student: str
    timestamp: datetime  # UTC, server-assigned
    coords: Coords
    caption: str
    image_ref: str  # path of the stored screenshot inside the session dir

    def validate(self):
        if not self.student.strip():
            raise ValueError("student must be non-empty")
        if not self.caption.strip():
            raise ValueError("caption must be non-empty")
        self.coords.validate()

    def to_dict(self) -> dict:
        d = asdict(self)
        d["timestamp"] = self.timestamp.astimezone(timezone.utc).isoformat()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Observation":
        return cls(
            id=d["id"],
            session_id=d["session_id"],
            student=d["student"],
            timestamp=datetime.fromisoformat(d["timestamp"]),
            coords=Coords(**d["coords"]),
            caption=d["caption"],
            image_ref=d["image_ref"],
        )


@dataclass
class AssessmentResult:
    observation_id: str
    generated_caption: str
    score: float
    keywords: list
    verdict: str  # "Pass" | "Retry"
    feedback_text: str
    encoder_identity: str
    latency_ms: int

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "AssessmentResult":
        return cls(**d)


@dataclass
class SessionRecord:
    session_id: str
    created_at: datetime
    entries: list = field(default_factory=list)  # [(Observation, AssessmentResult)]
