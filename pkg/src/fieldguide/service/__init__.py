from .app import ServiceState, build_state, create_app, serve
from .config import ServiceConfig, parse_kv_file
from .pipeline import assess_observation
from .replay import ReplaySummary, ReplayTransportError, replay_events
from .store import CSV_COLUMNS, SessionStore, export_session
from .types import AssessmentResult, Coords, Observation, SessionRecord

__all__ = [
    "AssessmentResult",
    "CSV_COLUMNS",
    "Coords",
    "Observation",
    "ReplaySummary",
    "ReplayTransportError",
    "ServiceConfig",
    "ServiceState",
    "SessionRecord",
    "SessionStore",
    "assess_observation",
    "build_state",
    "create_app",
    "export_session",
    "parse_kv_file",
    "replay_events",
    "serve",
]
