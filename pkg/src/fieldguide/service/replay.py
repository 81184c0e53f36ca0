"""Observation-event replay: the simulated screenshot producer.

Reads line-delimited JSON events (student, caption, image_file, x, y, z,
yaw, pitch, optional delay_ms) and submits them in order to a running
service, honoring delay_ms to mimic live pacing. Image paths resolve
relative to the events file.
"""

import json
import time
from dataclasses import dataclass
from pathlib import Path

import httpx


class ReplayTransportError(RuntimeError):
    """The service endpoint could not be reached."""


@dataclass
class ReplaySummary:
    submitted: int = 0
    passed: int = 0
    retried: int = 0
    errored: int = 0
    session_id: str = ""

    def as_dict(self):
        return {
            "submitted": self.submitted,
            "passed": self.passed,
            "retried": self.retried,
            "errored": self.errored,
        }


REQUIRED_FIELDS = ("student", "caption", "image_file", "x", "y", "z", "yaw", "pitch")


def replay_events(events_file, endpoint: str, session_id: str = None, timeout: float = 60.0) -> ReplaySummary:
    """Submit every event in the file; malformed lines count as errored.

    Raises ReplayTransportError if the endpoint is unreachable mid-run.
    """
    events_file = Path(events_file)
    base = events_file.parent
    summary = ReplaySummary()
    with httpx.Client(base_url=endpoint.rstrip("/"), timeout=timeout) as client:
        if session_id is None:
            try:
                resp = client.post("/api/sessions")
                resp.raise_for_status()
            except httpx.HTTPError as exc:
                raise ReplayTransportError(f"cannot create session at {endpoint}: {exc}") from exc
            session_id = resp.json()["session_id"]
        summary.session_id = session_id

        with open(events_file, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    event = json.loads(line)
                    missing = [f for f in REQUIRED_FIELDS if f not in event]
                    if missing:
                        raise ValueError(f"missing fields {missing}")
                    image_path = base / event["image_file"]
                    image_bytes = image_path.read_bytes()
                except (json.JSONDecodeError, ValueError, OSError):
                    summary.errored += 1
                    continue

                if event.get("delay_ms"):
                    time.sleep(float(event["delay_ms"]) / 1000.0)

                meta = {f: event[f] for f in REQUIRED_FIELDS if f != "image_file"}
                try:
                    resp = client.post(
                        f"/api/sessions/{session_id}/observations",
                        files={"image": (image_path.name, image_bytes, "image/png")},
                        data={"meta": json.dumps(meta)},
                    )
                except httpx.HTTPError as exc:
                    raise ReplayTransportError(f"endpoint became unreachable: {exc}") from exc
                summary.submitted += 1
                if resp.status_code == 201:
                    verdict = resp.json()["result"]["verdict"]
                    if verdict == "Pass":
                        summary.passed += 1
                    else:
                        summary.retried += 1
                else:
                    summary.errored += 1
    return summary
