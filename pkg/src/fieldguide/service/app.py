"""REST service: sessions, observation assessment, live stream, export.

Model inference runs through a bounded semaphore (queue_width) since the
loaded model is shared immutably across requests. Each SSE subscriber gets
its own queue, so every persisted result reaches every connection exactly
once.
"""

import io
import json
import queue
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.concurrency import run_in_threadpool
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles
from PIL import Image, UnidentifiedImageError

from ..captioner.model import load_model
from ..errors import SessionNotFound
from ..feedback import AssessmentConfig
from ..semantics import load_sentence_encoder
from .config import ServiceConfig
from .pipeline import assess_observation
from .store import SessionStore
from .types import Coords, Observation

STREAM_KEEPALIVE_S = 15.0

META_FIELDS = ("student", "caption", "x", "y", "z", "yaw", "pitch")


@dataclass
class _Broadcast:
    lock: threading.Lock = field(default_factory=threading.Lock)
    subscribers: dict = field(default_factory=dict)  # session_id -> list[queue.Queue]

    def subscribe(self, session_id) -> queue.Queue:
        q = queue.Queue()
        with self.lock:
            self.subscribers.setdefault(session_id, []).append(q)
        return q

    def unsubscribe(self, session_id, q):
        with self.lock:
            subs = self.subscribers.get(session_id, [])
            if q in subs:
                subs.remove(q)

    def publish(self, session_id, payload: dict):
        with self.lock:
            subs = list(self.subscribers.get(session_id, []))
        for q in subs:
            q.put(payload)


class ServiceState:
    def __init__(self, model, encoder, store, assessment: AssessmentConfig, queue_width: int = 1):
        self.model = model
        self.encoder = encoder
        self.store = store
        self.assessment = assessment
        self.inference_slots = threading.Semaphore(max(queue_width, 1))
        self.broadcast = _Broadcast()


def build_state(config: ServiceConfig) -> ServiceState:
    model = load_model(config.model_path)
    encoder = load_sentence_encoder(config.encoder_path)
    store = SessionStore(config.data_dir)
    assessment = AssessmentConfig(
        gamma_threshold=config.gamma_threshold,
        lambda_keywords=config.lambda_keywords,
        beam_width=config.beam_width,
    )
    return ServiceState(model, encoder, store, assessment, config.queue_width)


def _parse_meta(meta: dict) -> tuple[str, str, Coords]:
    missing = [f for f in META_FIELDS if f not in meta]
    if missing:
        raise ValueError(f"missing observation fields: {missing}")
    coords = Coords(
        x=float(meta["x"]), y=float(meta["y"]), z=float(meta["z"]),
        yaw=float(meta["yaw"]), pitch=float(meta["pitch"]),
    )
    return str(meta["student"]), str(meta["caption"]), coords


def create_app(config: ServiceConfig = None, state: ServiceState = None) -> FastAPI:
    if state is None:
        state = build_state(config)
    app = FastAPI(title="fieldguide", docs_url=None, redoc_url=None)
    app.state.service = state

    @app.exception_handler(SessionNotFound)
    def _session_404(request, exc):
        return JSONResponse(status_code=404, content={"detail": f"unknown session {exc.args[0]!r}"})

    @app.get("/api/health")
    def health():
        return {
            "status": "ok",
            "model_identity": state.model.identity,
            "encoder_identity": state.encoder.identity,
        }

    @app.post("/api/sessions", status_code=201)
    def create_session():
        return {"session_id": state.store.create_session()}

    @app.post("/api/sessions/{session_id}/observations", status_code=201)
    async def submit_observation(session_id: str, request: Request):
        if not state.store.exists(session_id):
            raise SessionNotFound(session_id)

        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/"):
            form = await request.form()
            if "meta" not in form or "image" not in form:
                return JSONResponse(status_code=400, content={"detail": "multipart needs 'meta' and 'image' parts"})
            try:
                meta = json.loads(form["meta"])
            except json.JSONDecodeError as exc:
                return JSONResponse(status_code=400, content={"detail": f"meta is not valid JSON: {exc}"})
            image_bytes = await form["image"].read()
        else:
            try:
                body = await request.json()
            except json.JSONDecodeError as exc:
                return JSONResponse(status_code=400, content={"detail": f"body is not valid JSON: {exc}"})
            meta = body
            import base64

            try:
                image_bytes = base64.b64decode(body.get("image_b64", ""), validate=True)
            except Exception:
                image_bytes = b""
            if not image_bytes:
                return JSONResponse(status_code=400, content={"detail": "JSON submissions need an image_b64 field"})

        try:
            student, caption, coords = _parse_meta(meta)
            if not str(caption).strip():
                raise ValueError("caption must be non-empty")
            if not str(student).strip():
                raise ValueError("student must be non-empty")
            coords.validate()
        except (ValueError, TypeError) as exc:
            return JSONResponse(status_code=400, content={"detail": str(exc)})

        return await run_in_threadpool(
            _assess_and_store, state, session_id, student, caption, coords, image_bytes
        )

    @app.get("/api/sessions/{session_id}/observations")
    def list_observations(session_id: str):
        return state.store.list_results(session_id)

    @app.get("/api/sessions/{session_id}/export")
    def export_session(session_id: str):
        payload = state.store.export_zip(session_id)
        return Response(
            content=payload,
            media_type="application/zip",
            headers={"Content-Disposition": f'attachment; filename="session_{session_id}.zip"'},
        )

    @app.get("/api/sessions/{session_id}/images/{name}")
    def get_image(session_id: str, name: str):
        try:
            png = state.store.image_bytes(session_id, f"images/{name}")
        except FileNotFoundError:
            return JSONResponse(status_code=404, content={"detail": f"no image {name!r}"})
        return Response(content=png, media_type="image/png")

    @app.get("/api/sessions/{session_id}/stream")
    def stream(session_id: str):
        if not state.store.exists(session_id):
            raise SessionNotFound(session_id)

        def events():
            q = state.broadcast.subscribe(session_id)
            try:
                yield ": connected\n\n"
                while True:
                    try:
                        payload = q.get(timeout=STREAM_KEEPALIVE_S)
                    except queue.Empty:
                        yield ": ping\n\n"
                        continue
                    obs_id = payload["observation"]["id"]
                    yield f"id: {obs_id}\ndata: {json.dumps(payload, ensure_ascii=False)}\n\n"
            finally:
                state.broadcast.unsubscribe(session_id, q)

        return StreamingResponse(
            events(),
            media_type="text/event-stream",
            headers={"Cache-Control": "no-cache", "X-Accel-Buffering": "no"},
        )

    if config is not None and config.static_dir:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="dashboard")

    return app


def _assess_and_store(state: ServiceState, session_id, student, caption, coords, image_bytes):
    try:
        with Image.open(io.BytesIO(image_bytes)) as img:
            image = np.asarray(img.convert("RGB"))
    except (UnidentifiedImageError, OSError) as exc:
        state.store.add_error(
            session_id,
            {"student": student, "caption": caption, "timestamp": datetime.now(timezone.utc).isoformat()},
            f"undecodable image: {exc}",
        )
        return JSONResponse(status_code=422, content={"detail": f"undecodable image: {exc}"})

    obs_id = state.store.next_observation_id(session_id)
    obs = Observation(
        id=obs_id,
        session_id=session_id,
        student=student,
        timestamp=datetime.now(timezone.utc),
        coords=coords,
        caption=caption,
        image_ref=f"images/{obs_id}.png",
    )
    with state.inference_slots:
        result = assess_observation(obs, image, state.model, state.encoder, state.assessment, store=state.store)
    payload = {"observation": obs.to_dict(), "result": result.to_dict()}
    state.broadcast.publish(session_id, payload)
    return JSONResponse(status_code=201, content=payload)


def serve(config: ServiceConfig):
    import uvicorn

    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
