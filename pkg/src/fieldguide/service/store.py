"""Append-only on-disk session store.

Layout: one directory per session under data_dir/sessions/ holding
session.json, records.jsonl (one JSON object per assessed or errored
observation, append-only) and images/ with one PNG per observation.
Existing sessions are reloaded on startup. Writes are serialized per
session; reads return snapshots.
"""

import csv
import io
import json
import threading
import uuid
import zipfile
from datetime import datetime, timezone
from pathlib import Path

from ..errors import SessionNotFound
from .types import AssessmentResult, Observation

CSV_COLUMNS = [
    "id", "timestamp", "student", "x", "y", "z", "yaw", "pitch",
    "student_caption", "generated_caption", "score", "keywords",
    "verdict", "feedback", "image_file",
]


class SessionStore:
    def __init__(self, data_dir):
        self.root = Path(data_dir) / "sessions"
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._sessions = {}  # id -> {"created_at", "entries": [...], "counter": int, "lock": Lock}
        for sdir in sorted(self.root.iterdir()):
            if sdir.is_dir() and (sdir / "session.json").is_file():
                self._load_session(sdir)

    # ------------------------------------------------------------------

    def _load_session(self, sdir):
        meta = json.loads((sdir / "session.json").read_text())
        entries = []
        counter = 0
        log = sdir / "records.jsonl"
        if log.is_file():
            with open(log, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if line:
                        entries.append(json.loads(line))
                        counter += 1
        self._sessions[meta["session_id"]] = {
            "created_at": meta["created_at"],
            "entries": entries,
            "counter": counter,
            "lock": threading.Lock(),
        }

    def create_session(self) -> str:
        session_id = uuid.uuid4().hex[:12]
        created = datetime.now(timezone.utc).isoformat()
        sdir = self.root / session_id
        (sdir / "images").mkdir(parents=True)
        (sdir / "session.json").write_text(json.dumps({"session_id": session_id, "created_at": created}))
        with self._lock:
            self._sessions[session_id] = {
                "created_at": created,
                "entries": [],
                "counter": 0,
                "lock": threading.Lock(),
            }
        return session_id

    def _session(self, session_id):
        try:
            return self._sessions[session_id]
        except KeyError:
            raise SessionNotFound(session_id) from None

    def exists(self, session_id) -> bool:
        return session_id in self._sessions

    def session_ids(self):
        return sorted(self._sessions)

    def next_observation_id(self, session_id) -> str:
        sess = self._session(session_id)
        with sess["lock"]:
            sess["counter"] += 1
            return f"obs-{sess['counter']:06d}"

    def session_dir(self, session_id) -> Path:
        self._session(session_id)
        return self.root / session_id

    # ------------------------------------------------------------------

    def _append(self, session_id, entry: dict):
        sess = self._session(session_id)
        line = json.dumps(entry, ensure_ascii=False)
        with sess["lock"]:
            with open(self.root / session_id / "records.jsonl", "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
            sess["entries"].append(entry)

    def add_result(self, session_id, observation: Observation, result: AssessmentResult, image_png: bytes):
        image_path = self.root / session_id / observation.image_ref
        image_path.parent.mkdir(exist_ok=True)
        image_path.write_bytes(image_png)
        self._append(session_id, {"observation": observation.to_dict(), "result": result.to_dict()})

    def add_error(self, session_id, observation_meta: dict, error: str):
        entry = {"observation": observation_meta, "error": error}
        self._append(session_id, entry)

    def list_results(self, session_id):
        """Assessed (observation, result) dict pairs in timestamp order."""
        sess = self._session(session_id)
        with sess["lock"]:
            snapshot = list(sess["entries"])
        assessed = [e for e in snapshot if "result" in e]
        assessed.sort(key=lambda e: (e["observation"]["timestamp"], e["observation"]["id"]))
        return assessed

    def get_record(self, session_id) -> "SessionRecord":
        """Typed session view: ordered (Observation, AssessmentResult) pairs."""
        from .types import SessionRecord

        sess = self._session(session_id)
        entries = [
            (Observation.from_dict(e["observation"]), AssessmentResult.from_dict(e["result"]))
            for e in self.list_results(session_id)
        ]
        return SessionRecord(
            session_id=session_id,
            created_at=datetime.fromisoformat(sess["created_at"]),
            entries=entries,
        )

    def image_bytes(self, session_id, image_ref: str) -> bytes:
        path = self.root / session_id / image_ref
        if not path.is_file() or ".." in image_ref:
            raise FileNotFoundError(image_ref)
        return path.read_bytes()

    # ------------------------------------------------------------------

    def export_zip(self, session_id) -> bytes:
        """CSV of all the text data plus the images folder, as one zip archive."""
        entries = self.list_results(session_id)
        out = io.BytesIO()
        csv_buf = io.StringIO()
        writer = csv.writer(csv_buf)
        writer.writerow(CSV_COLUMNS)
        with zipfile.ZipFile(out, "w", zipfile.ZIP_DEFLATED) as zf:
            for entry in entries:
                obs, res = entry["observation"], entry["result"]
                image_file = f"images/{obs['id']}.png"
                writer.writerow([
                    obs["id"], obs["timestamp"], obs["student"],
                    obs["coords"]["x"], obs["coords"]["y"], obs["coords"]["z"],
                    obs["coords"]["yaw"], obs["coords"]["pitch"],
                    obs["caption"], res["generated_caption"], res["score"],
                    ";".join(res["keywords"]), res["verdict"], res["feedback_text"],
                    image_file,
                ])
                zf.writestr(image_file, self.image_bytes(session_id, obs["image_ref"]))
            zf.writestr("observations.csv", csv_buf.getvalue())
        return out.getvalue()


def export_session(store: SessionStore, session_id) -> bytes:
    """Session archive (observations.csv + images/) as zip bytes."""
    return store.export_zip(session_id)
