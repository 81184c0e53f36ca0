"""Event replay against a live server: pacing, counts, cross-endpoint checks."""

import json
import threading

import pytest

from fieldguide.feedback import AssessmentConfig
from fieldguide.service import ReplayTransportError, ServiceState, SessionStore, create_app, replay_events

from conftest import make_png, run_service


@pytest.fixture()
def service(tmp_path, tiny_model, stub_encoder):
    state = ServiceState(tiny_model, stub_encoder, SessionStore(tmp_path / "data"), AssessmentConfig())
    app = create_app(state=state)
    with run_service(app) as base_url:
        yield base_url, state


def write_events(path, events):
    with open(path, "w") as fh:
        for e in events:
            fh.write((e if isinstance(e, str) else json.dumps(e)) + "\n")
    return path


def event(i, **kw):
    base = {"student": f"kid{i}", "caption": f"a red rock number {i}", "image_file": f"img{i}.png",
            "x": i, "y": 2.0, "z": 3.0, "yaw": 0.0, "pitch": 0.0}
    base.update(kw)
    return base


def test_empty_file(service, tmp_path):
    base_url, _ = service
    events = write_events(tmp_path / "events.jsonl", [])
    summary = replay_events(events, base_url)
    assert summary.as_dict() == {"submitted": 0, "passed": 0, "retried": 0, "errored": 0}


def test_counts_conserved(service, tmp_path):
    base_url, _ = service
    for i in range(5):
        make_png(tmp_path / f"img{i}.png", seed=i)
    events = write_events(tmp_path / "events.jsonl", [event(i) for i in range(5)])
    summary = replay_events(events, base_url)
    assert summary.submitted == 5
    assert summary.passed + summary.retried + summary.errored == 5


def test_cross_endpoint_consistency(service, tmp_path):
    """Replay counts match per-event verdicts fetched from the listing."""
    import httpx

    base_url, _ = service
    for i in range(5):
        make_png(tmp_path / f"img{i}.png", seed=i)
    events = write_events(tmp_path / "events.jsonl", [event(i) for i in range(5)])
    summary = replay_events(events, base_url)

    listing = httpx.get(f"{base_url}/api/sessions/{summary.session_id}/observations").json()
    verdicts = [entry["result"]["verdict"] for entry in listing]
    assert len(listing) == summary.submitted == 5
    assert verdicts.count("Pass") == summary.passed
    assert verdicts.count("Retry") == summary.retried
    students = [entry["observation"]["student"] for entry in listing]
    assert students == [f"kid{i}" for i in range(5)]  # order preserved


def test_malformed_lines_counted_not_fatal(service, tmp_path):
    base_url, _ = service
    make_png(tmp_path / "img0.png")
    events = write_events(tmp_path / "events.jsonl", [
        "this is not json",
        json.dumps({"student": "kid", "caption": "x"}),  # missing fields
        event(0),
        json.dumps(event(1)),  # image file img1.png does not exist
    ])
    summary = replay_events(events, base_url)
    assert summary.submitted == 1
    assert summary.errored == 3


def test_server_rejection_counts_as_errored(service, tmp_path):
    base_url, _ = service
    make_png(tmp_path / "img0.png")
    events = write_events(tmp_path / "events.jsonl", [event(0, pitch=200.0)])
    summary = replay_events(events, base_url)
    assert summary.submitted == 1
    assert summary.errored == 1
    assert summary.passed == summary.retried == 0


def test_unreachable_endpoint_aborts(tmp_path):
    events = write_events(tmp_path / "events.jsonl", [])
    with pytest.raises(ReplayTransportError):
        replay_events(events, "http://127.0.0.1:9", timeout=2.0)


def test_delay_ms_paces_submissions(service, tmp_path):
    import time

    base_url, _ = service
    make_png(tmp_path / "img0.png")
    make_png(tmp_path / "img1.png")
    events = write_events(tmp_path / "events.jsonl",
                          [event(0), event(1, delay_ms=300)])
    t0 = time.perf_counter()
    summary = replay_events(events, base_url)
    assert summary.submitted == 2
    assert time.perf_counter() - t0 >= 0.3


def test_replay_is_deterministic_for_fixed_model(service, tmp_path):
    """Same events file, same model/encoder: identical verdicts both runs."""
    import httpx

    base_url, _ = service
    for i in range(4):
        make_png(tmp_path / f"img{i}.png", seed=i)
    events = write_events(tmp_path / "events.jsonl", [event(i) for i in range(4)])

    first = replay_events(events, base_url)
    second = replay_events(events, base_url)
    assert first.as_dict() == second.as_dict()
    v1 = [e["result"]["verdict"]
          for e in httpx.get(f"{base_url}/api/sessions/{first.session_id}/observations").json()]
    v2 = [e["result"]["verdict"]
          for e in httpx.get(f"{base_url}/api/sessions/{second.session_id}/observations").json()]
    assert v1 == v2


def test_concurrent_submissions_serialized_through_queue(service, tmp_path):
    """Parallel posts all succeed with unique ids (inference queue width 1)."""
    import httpx

    base_url, _ = service
    png = make_png(tmp_path / "img.png").read_bytes()
    sid = httpx.post(f"{base_url}/api/sessions").json()["session_id"]

    results = []

    def post(i):
        meta = {"student": f"kid{i}", "caption": f"caption {i}",
                "x": i, "y": 0, "z": 0, "yaw": 0.0, "pitch": 0.0}
        resp = httpx.post(
            f"{base_url}/api/sessions/{sid}/observations",
            files={"image": ("img.png", png, "image/png")},
            data={"meta": json.dumps(meta)},
            timeout=60,
        )
        results.append(resp.status_code)

    threads = [threading.Thread(target=post, args=(i,)) for i in range(6)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert results == [201] * 6
    listing = httpx.get(f"{base_url}/api/sessions/{sid}/observations").json()
    ids = [e["observation"]["id"] for e in listing]
    assert len(ids) == 6 and len(set(ids)) == 6
    stamps = [e["observation"]["timestamp"] for e in listing]
    assert stamps == sorted(stamps)
