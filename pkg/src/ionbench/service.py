"""HTTP service exposing bench worlds over a versioned JSON API.

Sessions are in-memory worlds, each with a single-writer lock so
concurrent mutations serialise; idle sessions expire after a TTL.
Pours return a trajectory resource that clients poll (optionally
long-poll) for realized points as the session clock advances.

Every 4xx response body is ``{"error": {"code", "message"}}`` with a
stable machine-readable code.
"""
from __future__ import annotations

import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .chemdb import ReactionDatabase, UnknownSpeciesError, load_bundled_database
from .container import ContainerError, World, sample_pending
from .engine import EngineError
from .kinetics import TrajectoryPoint
from .observables import ObservableError

__all__ = ["create_app", "DEFAULT_SESSION_TTL_S"]

DEFAULT_SESSION_TTL_S = 1800.0
_LONG_POLL_CAP_S = 30.0

_STATUS_BY_CODE = {
    "unknown_session": 404,
    "unknown_container": 404,
    "unknown_trajectory": 404,
    "duplicate_container": 409,
}


class ApiError(Exception):
    def __init__(self, code: str, message: str, status: int | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.status = status or _STATUS_BY_CODE.get(code, 422)


@dataclass
class TrajectoryResource:
    id: str
    container_id: str
    created_clock_s: float
    duration_s: float
    dt_s: float
    points: list[TrajectoryPoint]


@dataclass
class Session:
    id: str
    world: World
    lock: threading.RLock = field(default_factory=threading.RLock)
    wakeup: threading.Condition = field(default_factory=threading.Condition)
    trajectories: dict[str, TrajectoryResource] = field(default_factory=dict)
    last_used: float = field(default_factory=time.monotonic)

    def touch(self) -> None:
        self.last_used = time.monotonic()


class CreateContainerBody(BaseModel):
    id: str
    amounts: dict[str, float]
    volume_l: float
    temperature_c: float = 25.0


class PourBody(BaseModel):
    src: str
    dst: str
    volume_l: float


class TickBody(BaseModel):
    dt_s: float


def _point_payload(point: TrajectoryPoint) -> dict[str, Any]:
    obs = point.observables
    payload: dict[str, Any] = {
        "t_s": point.time_s,
        "amounts_mol": {
            n: a for n, a in sorted(point.amounts.items()) if a > 1e-12
        },
    }
    if obs is not None:
        payload.update(
            {
                "ph": obs.ph,
                "temperature_c": obs.temperature_c,
                "rgba": {
                    "r": obs.rgba.r,
                    "g": obs.rgba.g,
                    "b": obs.rgba.b,
                    "alpha": obs.rgba.alpha,
                },
            }
        )
    return payload


def create_app(
    db: ReactionDatabase | None = None,
    *,
    session_ttl_s: float | None = None,
    static_dir: str | None = None,
) -> FastAPI:
    """Build the service; ``session_ttl_s`` falls back to the
    IONBENCH_SESSION_TTL_S environment variable, then the default."""
    database = db if db is not None else load_bundled_database()
    if session_ttl_s is None:
        raw = os.environ.get("IONBENCH_SESSION_TTL_S")
        session_ttl_s = float(raw) if raw else DEFAULT_SESSION_TTL_S

    app = FastAPI(title="ionbench", version="1")
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def purge_expired() -> None:
        now = time.monotonic()
        with registry_lock:
            expired = [
                sid
                for sid, session in sessions.items()
                if now - session.last_used > session_ttl_s
            ]
            for sid in expired:
                del sessions[sid]

    def get_session(sid: str) -> Session:
        purge_expired()
        with registry_lock:
            session = sessions.get(sid)
        if session is None:
            raise ApiError("unknown_session", f"no session {sid!r}")
        session.touch()
        return session

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    @app.exception_handler(RequestValidationError)
    async def handle_validation(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={
                "error": {"code": "invalid_request", "message": str(exc.errors())}
            },
        )

    def domain(call):
        """Run a bench operation, mapping domain errors to API errors."""
        try:
            return call()
        except ContainerError as exc:
            raise ApiError(exc.code, str(exc)) from exc
        except UnknownSpeciesError as exc:
            raise ApiError("unknown_species", str(exc)) from exc
        except (EngineError, ObservableError) as exc:
            code = getattr(exc, "code", "invalid_request")
            raise ApiError(code, str(exc)) from exc

    # -- database ------------------------------------------------------------

    @app.get("/v1/db/reactions")
    def db_reactions():
        return [
            {
                "id": r.id,
                "type": r.rtype,
                "reactants": {n: float(c) for n, c in r.reactants.items()},
                "products": {n: float(c) for n, c in r.products.items()},
                "enthalpy_kj_mol": r.enthalpy_kj_mol,
            }
            for r in database.reactions
        ]

    @app.get("/v1/db/species")
    def db_species():
        return [
            {
                "name": s.name,
                "charge": s.charge,
                "formation_enthalpy_kj_mol": s.formation_enthalpy_kj_mol,
                "color_rgb": s.color_rgb,
                "state": s.state,
            }
            for s in database.species.values()
        ]

    # -- sessions ------------------------------------------------------------

    @app.post("/v1/sessions", status_code=201)
    def create_session():
        purge_expired()
        session = Session(id=uuid.uuid4().hex, world=World(database))
        with registry_lock:
            sessions[session.id] = session
        return {"session_id": session.id, "ttl_s": session_ttl_s}

    @app.delete("/v1/sessions/{sid}", status_code=204)
    def delete_session(sid: str):
        get_session(sid)
        with registry_lock:
            sessions.pop(sid, None)

    # -- containers ----------------------------------------------------------

    @app.post("/v1/sessions/{sid}/containers", status_code=201)
    def create_container(sid: str, body: CreateContainerBody):
        session = get_session(sid)
        with session.lock:
            domain(
                lambda: session.world.create_container(
                    body.id, body.amounts, body.volume_l, body.temperature_c
                )
            )
            return domain(lambda: session.world.get_info(body.id))

    @app.get("/v1/sessions/{sid}/containers")
    def list_containers(sid: str):
        session = get_session(sid)
        with session.lock:
            return [
                session.world.get_info(cid)
                for cid in sorted(session.world.containers)
            ]

    @app.get("/v1/sessions/{sid}/containers/{cid}")
    def container_info(sid: str, cid: str):
        session = get_session(sid)
        with session.lock:
            return domain(lambda: session.world.get_info(cid))

    # -- actions -------------------------------------------------------------

    @app.post("/v1/sessions/{sid}/actions/pour")
    def pour(sid: str, body: PourBody):
        session = get_session(sid)
        with session.lock:
            outcome = domain(
                lambda: session.world.pour(body.src, body.dst, body.volume_l)
            )
            trajectory_payload = None
            if outcome.trajectory is not None:
                dt = session.world.config.sample_dt_s
                resource = TrajectoryResource(
                    id=uuid.uuid4().hex,
                    container_id=body.dst,
                    created_clock_s=session.world.clock_s,
                    duration_s=outcome.trajectory.duration_s,
                    dt_s=dt,
                    points=sample_pending(
                        outcome.trajectory,
                        outcome.container.volume_l,
                        session.world.db,
                        dt,
                    ),
                )
                session.trajectories[resource.id] = resource
                trajectory_payload = {
                    "trajectory_id": resource.id,
                    "dt_s": resource.dt_s,
                    "duration_s": resource.duration_s,
                }
            return {
                "report": outcome.report.to_dict(),
                "container": session.world.get_info(body.dst),
                "trajectory": trajectory_payload,
            }

    @app.post("/v1/sessions/{sid}/actions/tick")
    def tick(sid: str, body: TickBody):
        session = get_session(sid)
        with session.lock:
            domain(lambda: session.world.tick(body.dt_s))
            clock = session.world.clock_s
        with session.wakeup:
            session.wakeup.notify_all()
        return {"clock_s": clock}

    # -- trajectories --------------------------------------------------------

    def realized_window(
        session: Session, resource: TrajectoryResource, from_s: float
    ) -> tuple[list[TrajectoryPoint], float, bool]:
        with session.lock:
            realized = session.world.clock_s - resource.created_clock_s
        realized = max(0.0, min(realized, resource.duration_s))
        fresh = [
            p for p in resource.points if from_s < p.time_s <= realized
        ]
        return fresh, realized, realized >= resource.duration_s

    @app.get("/v1/sessions/{sid}/trajectories/{tid}")
    def trajectory(sid: str, tid: str, from_s: float = -1.0, wait_s: float = 0.0):
        session = get_session(sid)
        resource = session.trajectories.get(tid)
        if resource is None:
            raise ApiError("unknown_trajectory", f"no trajectory {tid!r}")
        fresh, realized, complete = realized_window(session, resource, from_s)
        deadline = time.monotonic() + min(max(wait_s, 0.0), _LONG_POLL_CAP_S)
        while not fresh and not complete:
            remaining = deadline - time.monotonic()
            if remaining <= 0:
                break
            with session.wakeup:
                session.wakeup.wait(timeout=remaining)
            fresh, realized, complete = realized_window(
                session, resource, from_s
            )
        session.touch()
        return {
            "trajectory_id": resource.id,
            "container_id": resource.container_id,
            "dt_s": resource.dt_s,
            "duration_s": resource.duration_s,
            "realized_s": realized,
            "complete": complete,
            "points": [_point_payload(p) for p in fresh],
        }

    if static_dir is None:
        static_dir = os.environ.get("IONBENCH_STATIC_DIR")
    if static_dir and os.path.isdir(static_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
