import threading
import time

import pytest
from fastapi.testclient import TestClient

from ionbench.service import create_app


@pytest.fixture()
def client(db):
    with TestClient(create_app(db)) as c:
        yield c


@pytest.fixture()
def sid(client):
    return client.post("/v1/sessions").json()["session_id"]


def make_bench(client, sid):
    client.post(
        f"/v1/sessions/{sid}/containers",
        json={"id": "A", "amounts": {"KMnO4": 0.01}, "volume_l": 0.1},
    )
    client.post(
        f"/v1/sessions/{sid}/containers",
        json={"id": "B", "amounts": {"FeCl2": 0.05, "HCl": 0.08}, "volume_l": 0.1},
    )


# ------------------------------------------------------------------ database

def test_db_endpoints(client):
    reactions = client.get("/v1/db/reactions").json()
    species = client.get("/v1/db/species").json()
    assert len(reactions) == 65
    assert reactions[0]["id"] == 1
    assert len(species) == 68
    assert any(s["name"] == "MnO4-" for s in species)


# ------------------------------------------------------------------ sessions

def test_session_lifecycle(client):
    created = client.post("/v1/sessions")
    assert created.status_code == 201
    sid = created.json()["session_id"]
    assert created.json()["ttl_s"] > 0

    assert client.get(f"/v1/sessions/{sid}/containers").json() == []

    deleted = client.delete(f"/v1/sessions/{sid}")
    assert deleted.status_code == 204
    gone = client.get(f"/v1/sessions/{sid}/containers")
    assert gone.status_code == 404
    assert gone.json()["error"]["code"] == "unknown_session"


def test_sessions_expire(db):
    with TestClient(create_app(db, session_ttl_s=0.05)) as c:
        sid = c.post("/v1/sessions").json()["session_id"]
        time.sleep(0.12)
        response = c.get(f"/v1/sessions/{sid}/containers")
        assert response.status_code == 404


# ---------------------------------------------------------------- containers

def test_create_and_fetch_container(client, sid):
    created = client.post(
        f"/v1/sessions/{sid}/containers",
        json={"id": "A", "amounts": {"KMnO4": 0.01}, "volume_l": 0.1},
    )
    assert created.status_code == 201
    body = created.json()
    assert body["components"] == {"K+": 0.01, "MnO4-": 0.01}
    assert body["representation"]["rgba"]["r"] == 128

    fetched = client.get(f"/v1/sessions/{sid}/containers/A").json()
    assert fetched == body


def test_duplicate_container_conflicts(client, sid):
    payload = {"id": "A", "amounts": {}, "volume_l": 0.1}
    assert client.post(f"/v1/sessions/{sid}/containers", json=payload).status_code == 201
    second = client.post(f"/v1/sessions/{sid}/containers", json=payload)
    assert second.status_code == 409
    assert second.json()["error"]["code"] == "duplicate_container"


def test_imbalanced_create_rejected(client, sid):
    response = client.post(
        f"/v1/sessions/{sid}/containers",
        json={"id": "A", "amounts": {"Na+": 0.01}, "volume_l": 0.1},
    )
    assert response.status_code == 422
    assert response.json()["error"]["code"] == "charge_imbalance"


def test_malformed_body_rejected(client, sid):
    response = client.post(
        f"/v1/sessions/{sid}/containers",
        json={"id": "A", "amounts": {}, "volume_l": "a splash"},
    )
    assert response.status_code == 422
    assert response.json()["error"]["code"] == "invalid_request"


def test_unknown_container_404(client, sid):
    response = client.get(f"/v1/sessions/{sid}/containers/ghost")
    assert response.status_code == 404
    assert response.json()["error"]["code"] == "unknown_container"


# ------------------------------------------------------------------- actions

def test_pour_reports_and_registers_trajectory(client, sid):
    make_bench(client, sid)
    poured = client.post(
        f"/v1/sessions/{sid}/actions/pour",
        json={"src": "A", "dst": "B", "volume_l": 0.1},
    )
    assert poured.status_code == 200
    body = poured.json()
    assert body["report"]["steps"][0]["reaction_id"] == 16
    assert body["trajectory"] is not None
    assert body["trajectory"]["duration_s"] == pytest.approx(10.0)
    # the pour itself does not advance time: the container still shows the
    # premixed state
    assert body["container"]["components"]["Fe^2+"] == pytest.approx(0.05)


def test_tick_reveals_trajectory_points(client, sid):
    make_bench(client, sid)
    tid = client.post(
        f"/v1/sessions/{sid}/actions/pour",
        json={"src": "A", "dst": "B", "volume_l": 0.1},
    ).json()["trajectory"]["trajectory_id"]

    before = client.get(f"/v1/sessions/{sid}/trajectories/{tid}").json()
    assert before["realized_s"] == 0.0
    assert before["complete"] is False
    assert before["points"] == [] or before["points"][0]["t_s"] == 0.0

    client.post(f"/v1/sessions/{sid}/actions/tick", json={"dt_s": 2.0})
    window = client.get(
        f"/v1/sessions/{sid}/trajectories/{tid}", params={"from_s": 0.0}
    ).json()
    assert window["realized_s"] == pytest.approx(2.0)
    assert len(window["points"]) == 20  # (0, 2] at 0.1 s cadence
    assert window["points"][-1]["t_s"] == pytest.approx(2.0)

    client.post(f"/v1/sessions/{sid}/actions/tick", json={"dt_s": 30.0})
    finished = client.get(
        f"/v1/sessions/{sid}/trajectories/{tid}", params={"from_s": 2.0}
    ).json()
    assert finished["complete"] is True
    last = finished["points"][-1]
    assert last["amounts_mol"]["Fe^3+"] == pytest.approx(0.05)
    assert "Fe^2+" not in last["amounts_mol"]  # dust pruned below 1e-12


def test_trajectory_window_filtering(client, sid):
    make_bench(client, sid)
    tid = client.post(
        f"/v1/sessions/{sid}/actions/pour",
        json={"src": "A", "dst": "B", "volume_l": 0.1},
    ).json()["trajectory"]["trajectory_id"]
    client.post(f"/v1/sessions/{sid}/actions/tick", json={"dt_s": 1.0})
    window = client.get(
        f"/v1/sessions/{sid}/trajectories/{tid}", params={"from_s": 0.5}
    ).json()
    times = [p["t_s"] for p in window["points"]]
    assert all(0.5 < t <= 1.0 for t in times)


def test_long_poll_wakes_on_tick(client, sid):
    make_bench(client, sid)
    tid = client.post(
        f"/v1/sessions/{sid}/actions/pour",
        json={"src": "A", "dst": "B", "volume_l": 0.1},
    ).json()["trajectory"]["trajectory_id"]

    def tick_later():
        time.sleep(0.25)
        client.post(f"/v1/sessions/{sid}/actions/tick", json={"dt_s": 1.0})

    ticker = threading.Thread(target=tick_later)
    started = time.monotonic()
    ticker.start()
    try:
        window = client.get(
            f"/v1/sessions/{sid}/trajectories/{tid}",
            params={"from_s": 0.0, "wait_s": 10.0},
        ).json()
    finally:
        ticker.join()
    elapsed = time.monotonic() - started
    assert window["points"], "long poll returned without data"
    assert elapsed < 5.0, "long poll did not wake on tick"


def test_unknown_trajectory_404(client, sid):
    response = client.get(f"/v1/sessions/{sid}/trajectories/nope")
    assert response.status_code == 404
    assert response.json()["error"]["code"] == "unknown_trajectory"


# -------------------------------------------------------------- static files

def test_static_mount_serves_ui(db, tmp_path):
    (tmp_path / "index.html").write_text("<!doctype html><title>bench</title>")
    with TestClient(create_app(db, static_dir=str(tmp_path))) as c:
        # API still wins over the static mount
        assert c.get("/v1/db/reactions").status_code == 200
        page = c.get("/index.html")
        assert page.status_code == 200
        assert "bench" in page.text
