"""Stateful bench: named containers, pours, sampling, and a shared clock.

A world owns a set of containers.  Creating one dissolves the given
compounds into their ions (strong electrolytes fully dissociate; species
already in the database pass through) and checks charge balance, but
never reacts.  Pouring mixes source into destination, resolves the
destination, and schedules a display trajectory that relaxes the
destination's reported composition and temperature toward the resolved
state; the exact chemistry is committed immediately, so transfers and
conservation laws are untouched by animation timing.

Every mutation is appended to an event log.  Replaying a log on a fresh
world reproduces the exact end state, bit for bit, because all amount
arithmetic is rational.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Mapping

from .chemdb import (
    ReactionDatabase,
    UnknownSpeciesError,
    load_bundled_database,
    load_dissociation_table,
)
from .engine import (
    PRESENCE_THRESHOLD,
    ImbalancedMixtureError,
    Mixture,
    ResolutionReport,
    resolve,
)
from .observables import (
    RGBA,
    WATER,
    SolventParams,
    mixture_color,
    ph_from_strong_difference,
    temperature_change,
)

__all__ = [
    "ContainerError",
    "WorldConfig",
    "TrajectorySegment",
    "PendingTrajectory",
    "Container",
    "PourOutcome",
    "World",
    "sample_pending",
]

# Relative slack when comparing requested transfer volumes against the
# source volume, so "pour everything" survives float round-trips.
_VOLUME_SLACK = 1e-12


class ContainerError(ValueError):
    """Bench-level failure with a stable machine-readable code."""

    def __init__(self, message: str, code: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class WorldConfig:
    default_rate_constant: float = 1.0
    segment_horizon_s: float = 10.0
    sample_dt_s: float = 0.1
    solvent: SolventParams = WATER


@dataclass(frozen=True)
class TrajectorySegment:
    """One resolution step relaxing between two composition states."""

    start_amounts: Mapping[str, float]
    end_amounts: Mapping[str, float]
    rate_constant: float
    duration_s: float
    start_temperature_c: float
    end_temperature_c: float

    def amounts_at(self, local_t: float) -> dict[str, float]:
        decay = math.exp(-self.rate_constant * local_t)
        names = dict.fromkeys(
            list(self.start_amounts)
            + [n for n in self.end_amounts if n not in self.start_amounts]
        )
        return {
            n: self.end_amounts.get(n, 0.0)
            + (self.start_amounts.get(n, 0.0) - self.end_amounts.get(n, 0.0))
            * decay
            for n in names
        }

    def temperature_at(self, local_t: float) -> float:
        decay = math.exp(-self.rate_constant * local_t)
        return self.end_temperature_c + (
            self.start_temperature_c - self.end_temperature_c
        ) * decay


@dataclass
class PendingTrajectory:
    """Sequential per-step animation of a resolution cascade."""

    segments: list[TrajectorySegment]
    elapsed_s: float = 0.0

    @property
    def duration_s(self) -> float:
        return sum(s.duration_s for s in self.segments)

    def _locate(self, t: float) -> tuple[TrajectorySegment, float] | None:
        offset = 0.0
        for segment in self.segments:
            if t < offset + segment.duration_s:
                return segment, t - offset
            offset += segment.duration_s
        return None

    def amounts_at(self, t: float) -> dict[str, float]:
        located = self._locate(t)
        if located is None:
            return dict(self.segments[-1].end_amounts)
        segment, local_t = located
        return segment.amounts_at(local_t)

    def temperature_at(self, t: float) -> float:
        located = self._locate(t)
        if located is None:
            return self.segments[-1].end_temperature_c
        segment, local_t = located
        return segment.temperature_at(local_t)

    def done(self) -> bool:
        return self.elapsed_s >= self.duration_s - _VOLUME_SLACK


@dataclass
class Container:
    id: str
    mixture: Mixture
    pending: PendingTrajectory | None = None
    last_heat_released_kj: float = 0.0

    @property
    def volume_l(self) -> float:
        return self.mixture.volume_l

    def displayed_amounts(self) -> dict[str, float]:
        if self.pending is not None:
            amounts = self.pending.amounts_at(self.pending.elapsed_s)
            return {n: a for n, a in amounts.items() if a > float(PRESENCE_THRESHOLD)}
        return {
            n: float(a)
            for n, a in self.mixture.amounts.items()
            if a > PRESENCE_THRESHOLD
        }

    def displayed_temperature(self) -> float:
        if self.pending is not None:
            return self.pending.temperature_at(self.pending.elapsed_s)
        return self.mixture.temperature_c


@dataclass(frozen=True)
class PourOutcome:
    report: ResolutionReport
    container: Container
    trajectory: PendingTrajectory | None


def sample_pending(
    pending: PendingTrajectory,
    volume_l: float,
    db: ReactionDatabase,
    dt_s: float,
):
    """Sample a pending trajectory with observables at a fixed cadence.

    Returns kinetics trajectory points covering [0, duration]; the final
    point is the exact committed end state.
    """
    from .kinetics import TrajectoryPoint, sample_times, snapshot_observables

    points: list[TrajectoryPoint] = []
    for t in sample_times(dt_s, pending.duration_s):
        amounts = pending.amounts_at(t)
        temperature = pending.temperature_at(t)
        points.append(
            TrajectoryPoint(
                t,
                amounts,
                snapshot_observables(amounts, volume_l, temperature, db),
            )
        )
    return points


class World:
    """A clocked collection of containers over one reaction database."""

    def __init__(
        self,
        db: ReactionDatabase | None = None,
        config: WorldConfig | None = None,
    ):
        self.db = db if db is not None else load_bundled_database()
        self.config = config if config is not None else WorldConfig()
        self.containers: dict[str, Container] = {}
        self.clock_s = 0.0
        self.history: list[dict[str, Any]] = []
        self._dissociation = load_dissociation_table()

    # -- solution preparation ------------------------------------------------

    def expand_amounts(
        self, amounts: Mapping[str, float]
    ) -> dict[str, Fraction]:
        """Expand compounds to ions; pass database species through."""
        expanded: dict[str, Fraction] = {}
        for name, raw in amounts.items():
            try:
                qty = Fraction(raw)
            except (ValueError, TypeError) as exc:
                raise ContainerError(
                    f"bad amount {raw!r} for {name!r}", code="invalid_amount"
                ) from exc
            if qty < 0:
                raise ContainerError(
                    f"negative amount for {name!r}", code="invalid_amount"
                )
            key = name.strip()
            try:
                canonical = self.db.resolve_species_name(key)
            except UnknownSpeciesError:
                ions = self._dissociation.get(key)
                if ions is None:
                    raise ContainerError(
                        f"unknown species or compound {name!r}",
                        code="unknown_species",
                    ) from None
                for ion, count in ions.items():
                    expanded[ion] = expanded.get(ion, Fraction(0)) + qty * count
            else:
                expanded[canonical] = expanded.get(canonical, Fraction(0)) + qty
        return expanded

    # -- mutations -----------------------------------------------------------

    def create_container(
        self,
        container_id: str,
        amounts: Mapping[str, float],
        volume_l: float,
        temperature_c: float = 25.0,
    ) -> Container:
        self._check_id(container_id)
        if container_id in self.containers:
            raise ContainerError(
                f"container {container_id!r} already exists",
                code="duplicate_container",
            )
        if not math.isfinite(volume_l) or volume_l < 0:
            raise ContainerError("volume must be >= 0 L", code="invalid_volume")
        if not 0.0 <= temperature_c <= 100.0:
            raise ContainerError(
                "temperature must be within 0-100 C", code="invalid_temperature"
            )
        expanded = self.expand_amounts(amounts)
        net = Fraction(0)
        for name, qty in expanded.items():
            net += qty * self.db.species_named(name).charge
        if net != 0:
            raise ContainerError(
                f"solution has net charge {float(net):+g} mol",
                code="charge_imbalance",
            )
        container = Container(
            id=container_id,
            mixture=Mixture(expanded, volume_l, temperature_c),
        )
        self.containers[container_id] = container
        self._log(
            {
                "event": "create",
                "id": container_id,
                "amounts": {k: v for k, v in amounts.items()},
                "volume_l": volume_l,
                "temperature_c": temperature_c,
            }
        )
        return container

    def pour(self, src_id: str, dst_id: str, volume_l: float) -> PourOutcome:
        src = self._get(src_id)
        dst = self._get(dst_id)
        if src_id == dst_id:
            raise ContainerError(
                "source and destination must differ", code="invalid_target"
            )
        ratio, poured = self._transfer_ratio(src, volume_l)
        self._commit(src)
        self._commit(dst)

        moved = {n: a * ratio for n, a in src.mixture.amounts.items()}
        remaining = {
            n: a - moved[n] for n, a in src.mixture.amounts.items()
        }
        src.mixture = Mixture(
            remaining, src.volume_l - poured, src.mixture.temperature_c
        )

        combined = dict(dst.mixture.amounts)
        for name, qty in moved.items():
            combined[name] = combined.get(name, Fraction(0)) + qty
        total_volume = dst.volume_l + poured
        if total_volume > 0:
            mixed_temp = (
                dst.volume_l * dst.mixture.temperature_c
                + poured * src.mixture.temperature_c
            ) / total_volume
        else:
            mixed_temp = dst.mixture.temperature_c
        mixed = Mixture(combined, total_volume, mixed_temp)

        report = resolve(mixed, self.db)
        final_temp = mixed_temp
        if total_volume > 0:
            final_temp = mixed_temp + temperature_change(
                report.total_heat_released_kj, total_volume, self.config.solvent
            )
        dst.mixture = Mixture(report.final.amounts, total_volume, final_temp)
        dst.last_heat_released_kj = report.total_heat_released_kj
        dst.pending = self._build_pending(mixed, report)

        self._log(
            {
                "event": "pour",
                "src": src_id,
                "dst": dst_id,
                "volume_l": volume_l,
            }
        )
        return PourOutcome(report=report, container=dst, trajectory=dst.pending)

    def sample(self, src_id: str, new_id: str, volume_l: float) -> Container:
        src = self._get(src_id)
        self._check_id(new_id)
        if new_id in self.containers:
            raise ContainerError(
                f"container {new_id!r} already exists", code="duplicate_container"
            )
        ratio, drawn = self._transfer_ratio(src, volume_l)
        self._commit(src)
        moved = {n: a * ratio for n, a in src.mixture.amounts.items()}
        remaining = {n: a - moved[n] for n, a in src.mixture.amounts.items()}
        temperature = src.mixture.temperature_c
        src.mixture = Mixture(remaining, src.volume_l - drawn, temperature)
        container = Container(
            id=new_id, mixture=Mixture(moved, drawn, temperature)
        )
        self.containers[new_id] = container
        self._log(
            {
                "event": "sample",
                "src": src_id,
                "id": new_id,
                "volume_l": volume_l,
            }
        )
        return container

    def tick(self, dt_s: float) -> None:
        if not math.isfinite(dt_s) or dt_s <= 0:
            raise ContainerError("tick must advance by > 0 s", code="invalid_tick")
        self.clock_s += dt_s
        self._log({"event": "tick", "dt_s": dt_s})
        for container in self.containers.values():
            if container.pending is None:
                continue
            container.pending.elapsed_s += dt_s
            if container.pending.done():
                self._commit(container)

    # -- queries -------------------------------------------------------------

    def get_info(self, container_id: str) -> dict[str, Any]:
        container = self._get(container_id)
        components = container.displayed_amounts()
        info: dict[str, Any] = {
            "id": container.id,
            "volume_l": container.volume_l,
            "temperature_c": container.displayed_temperature(),
            "components": {n: components[n] for n in sorted(components)},
            "pending": None,
            "representation": None,
        }
        if container.pending is not None:
            info["pending"] = {
                "elapsed_s": container.pending.elapsed_s,
                "duration_s": container.pending.duration_s,
            }
        if container.volume_l > 0:
            temperature = info["temperature_c"]
            rgba = mixture_color(
                Mixture(
                    {n: a for n, a in components.items()},
                    container.volume_l,
                    temperature,
                ),
                self.db,
            )
            net_acid = (
                components.get("H+", 0.0) - components.get("OH-", 0.0)
            ) / container.volume_l
            kw_temp = min(max(temperature, 0.0), 100.0)
            acid_base = ph_from_strong_difference(net_acid, kw_temp)
            info["representation"] = {
                "rgba": {
                    "r": rgba.r,
                    "g": rgba.g,
                    "b": rgba.b,
                    "alpha": rgba.alpha,
                },
                "ph": acid_base.ph,
                "temperature_c": temperature,
                "heat_released_kj": container.last_heat_released_kj,
                "states": {
                    n: self.db.species_named(n).state for n in sorted(components)
                },
            }
        return info

    def snapshot(self) -> dict[str, Any]:
        """Canonical world state for persistence and comparison."""
        return {
            "clock_s": self.clock_s,
            "containers": [
                {
                    "id": c.id,
                    "volume_l": c.volume_l,
                    "temperature_c": c.mixture.temperature_c,
                    "amounts_mol": {
                        n: float(a)
                        for n, a in sorted(c.mixture.amounts.items())
                        if a > 0
                    },
                    "pending_elapsed_s": (
                        None if c.pending is None else c.pending.elapsed_s
                    ),
                }
                for c in sorted(self.containers.values(), key=lambda c: c.id)
            ],
        }

    # -- replay --------------------------------------------------------------

    @classmethod
    def replay(
        cls,
        events: list[Mapping[str, Any]],
        db: ReactionDatabase | None = None,
        config: WorldConfig | None = None,
    ) -> "World":
        """Rebuild a world by re-running an event log."""
        world = cls(db=db, config=config)
        for event in events:
            kind = event.get("event")
            if kind == "create":
                world.create_container(
                    event["id"],
                    event["amounts"],
                    event["volume_l"],
                    event.get("temperature_c", 25.0),
                )
            elif kind == "pour":
                world.pour(event["src"], event["dst"], event["volume_l"])
            elif kind == "sample":
                world.sample(event["src"], event["id"], event["volume_l"])
            elif kind == "tick":
                world.tick(event["dt_s"])
            elif kind == "commit":
                continue  # derived deterministically from the above
            else:
                raise ContainerError(
                    f"unknown event kind {kind!r}", code="invalid_event"
                )
        return world

    # -- internals -----------------------------------------------------------

    def _check_id(self, container_id: str) -> None:
        if (
            not isinstance(container_id, str)
            or not container_id
            or any(ch.isspace() for ch in container_id)
        ):
            raise ContainerError(
                f"bad container id {container_id!r}", code="invalid_id"
            )

    def _get(self, container_id: str) -> Container:
        try:
            return self.containers[container_id]
        except KeyError:
            raise ContainerError(
                f"no container {container_id!r}", code="unknown_container"
            ) from None

    def _transfer_ratio(
        self, src: Container, volume_l: float
    ) -> tuple[Fraction, float]:
        if not math.isfinite(volume_l) or volume_l <= 0:
            raise ContainerError(
                "transfer volume must be > 0 L", code="invalid_volume"
            )
        limit = src.volume_l * (1.0 + _VOLUME_SLACK) + _VOLUME_SLACK
        if volume_l > limit:
            raise ContainerError(
                f"container {src.id!r} holds {src.volume_l} L, "
                f"cannot transfer {volume_l} L",
                code="insufficient_volume",
            )
        if volume_l >= src.volume_l:
            return Fraction(1), src.volume_l
        return Fraction(volume_l) / Fraction(src.volume_l), volume_l

    def _commit(self, container: Container) -> None:
        if container.pending is None:
            return
        container.pending = None
        self._log({"event": "commit", "id": container.id})

    def _build_pending(
        self, mixed: Mixture, report: ResolutionReport
    ) -> PendingTrajectory | None:
        if not report.steps:
            return None
        volume = mixed.volume_l
        segments: list[TrajectorySegment] = []
        state = dict(mixed.amounts)
        temperature = mixed.temperature_c
        for step in report.steps:
            start = {n: float(a) for n, a in state.items()}
            for name, qty in step.consumed.items():
                state[name] = state.get(name, Fraction(0)) - qty
            for name, qty in step.produced.items():
                state[name] = state.get(name, Fraction(0)) + qty
            end = {n: float(a) for n, a in state.items()}
            heat = step.heat_released_kj or 0.0
            rise = (
                temperature_change(heat, volume, self.config.solvent)
                if volume > 0
                else 0.0
            )
            reaction = self.db.reaction(step.reaction_id)
            rate = (
                reaction.rate_constant
                if reaction.rate_constant is not None
                else self.config.default_rate_constant
            )
            segments.append(
                TrajectorySegment(
                    start_amounts=start,
                    end_amounts=end,
                    rate_constant=rate,
                    duration_s=self.config.segment_horizon_s,
                    start_temperature_c=temperature,
                    end_temperature_c=temperature + rise,
                )
            )
            temperature += rise
        return PendingTrajectory(segments=segments)

    def _log(self, event: dict[str, Any]) -> None:
        event["clock_s"] = self.clock_s
        self.history.append(event)
