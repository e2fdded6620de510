"""First-order relaxation between a pre-reaction and post-reaction state.

Resolution decides *what* a mixture becomes; this module spreads that
change over time for display.  Every species relaxes exponentially from
its initial to its final amount with a single shared rate constant:

    n(t) = n_final + (n_initial - n_final) * exp(-k t)

Sample times are exact multiples of the step (``i * dt``, computed by
multiplication, never accumulation) so halving the step refines a
trajectory without perturbing the shared sample points.  The last point
lands exactly on the horizon and snaps to the final state once the
residual is below threshold-scale.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

from .chemdb import ReactionDatabase
from .engine import Mixture
from .observables import (
    RGBA,
    WATER,
    SolventParams,
    mixture_color,
    ph_from_strong_difference,
    temperature_change,
)

__all__ = [
    "KineticsError",
    "SNAP_THRESHOLD",
    "ObservableSnapshot",
    "TrajectoryPoint",
    "sample_times",
    "snapshot_observables",
    "trajectory",
    "trajectory_with_observables",
    "write_trajectory_csv",
]

# Residual (mol) under which the horizon point is considered converged.
SNAP_THRESHOLD = 1e-12


class KineticsError(ValueError):
    pass


@dataclass(frozen=True)
class ObservableSnapshot:
    rgba: RGBA
    ph: float
    temperature_c: float


@dataclass(frozen=True)
class TrajectoryPoint:
    time_s: float
    amounts: Mapping[str, float]
    observables: ObservableSnapshot | None = None


def sample_times(dt_s: float, horizon_s: float) -> list[float]:
    """Multiples of ``dt_s`` below the horizon, then the horizon itself."""
    if dt_s <= 0:
        raise KineticsError("dt must be > 0")
    if horizon_s < dt_s:
        raise KineticsError("horizon must be >= dt")
    times: list[float] = []
    i = 0
    while True:
        t = i * dt_s
        if t >= horizon_s:
            break
        times.append(t)
        i += 1
    times.append(horizon_s)
    return times


def _relaxed_amounts(
    start: Mapping[str, float],
    end: Mapping[str, float],
    decay: float,
) -> dict[str, float]:
    names = dict.fromkeys(list(start) + [n for n in end if n not in start])
    return {
        n: end.get(n, 0.0) + (start.get(n, 0.0) - end.get(n, 0.0)) * decay
        for n in names
    }


def trajectory(
    initial: Mixture,
    final: Mixture,
    rate_constant: float,
    dt_s: float,
    horizon_s: float,
) -> list[TrajectoryPoint]:
    """Relax ``initial`` toward ``final`` and sample the journey."""
    if rate_constant <= 0:
        raise KineticsError("rate constant must be > 0")
    if initial.volume_l != final.volume_l:
        raise KineticsError("initial and final volumes must match")
    start = initial.amounts_float()
    end = final.amounts_float()
    points: list[TrajectoryPoint] = []
    times = sample_times(dt_s, horizon_s)
    for t in times[:-1]:
        decay = math.exp(-rate_constant * t)
        points.append(TrajectoryPoint(t, _relaxed_amounts(start, end, decay)))
    horizon = times[-1]
    decay = math.exp(-rate_constant * horizon)
    natural = _relaxed_amounts(start, end, decay)
    residual = max(
        (abs(natural[n] - end.get(n, 0.0)) for n in natural), default=0.0
    )
    if residual > SNAP_THRESHOLD:
        closing = {n: end.get(n, 0.0) for n in natural}
    else:
        closing = natural
    points.append(TrajectoryPoint(horizon, closing))
    return points


def trajectory_with_observables(
    initial: Mixture,
    final: Mixture,
    rate_constant: float,
    dt_s: float,
    horizon_s: float,
    db: ReactionDatabase,
    *,
    heat_released_kj: float = 0.0,
    solvent: SolventParams = WATER,
) -> list[TrajectoryPoint]:
    """As ``trajectory`` but with colour, pH and temperature per point.

    Temperature relaxes with the same exponential as the amounts, rising
    by the total reaction heat spread over the solvent volume.
    """
    base = trajectory(initial, final, rate_constant, dt_s, horizon_s)
    t0 = initial.temperature_c
    dt_total = (
        temperature_change(heat_released_kj, initial.volume_l, solvent)
        if initial.volume_l > 0
        else 0.0
    )
    out: list[TrajectoryPoint] = []
    last = len(base) - 1
    end = final.amounts_float()
    for idx, point in enumerate(base):
        decay = math.exp(-rate_constant * point.time_s)
        snapped = idx == last and all(
            point.amounts[n] == end.get(n, 0.0) for n in point.amounts
        )
        temp = t0 + dt_total if snapped else t0 + dt_total * (1.0 - decay)
        out.append(
            TrajectoryPoint(
                point.time_s,
                point.amounts,
                snapshot_observables(point.amounts, initial.volume_l, temp, db),
            )
        )
    return out


def snapshot_observables(
    amounts: Mapping[str, float],
    volume_l: float,
    temperature_c: float,
    db: ReactionDatabase,
) -> ObservableSnapshot:
    """Colour, pH and temperature for one instantaneous composition.

    pH uses the strong-ion difference directly (mid-relaxation states
    legitimately hold both H+ and OH-, so the strict resolved-mixture
    check does not apply); the water ion product is evaluated at the
    given temperature clamped into its tabulated range.
    """
    mixture = Mixture(
        {n: a for n, a in amounts.items() if a > 0.0},
        volume_l,
        temperature_c,
    )
    rgba = mixture_color(mixture, db)
    net_acid = (
        amounts.get("H+", 0.0) - amounts.get("OH-", 0.0)
    ) / volume_l
    kw_temp = min(max(temperature_c, 0.0), 100.0)
    state = ph_from_strong_difference(net_acid, kw_temp)
    return ObservableSnapshot(rgba=rgba, ph=state.ph, temperature_c=temperature_c)


def write_trajectory_csv(
    points: Sequence[TrajectoryPoint],
    dest: str | Path | IO[str],
    species: Iterable[str] | None = None,
) -> None:
    """Write points as CSV: ``t_s,<species...>,pH,temp_c,r,g,b,a``.

    Species columns are sorted by name unless an explicit order is
    given.  Numbers use shortest round-trip formatting, so identical
    trajectories serialise to identical bytes.
    """
    if species is None:
        seen: dict[str, None] = {}
        for point in points:
            for name in point.amounts:
                seen[name] = None
        columns = sorted(seen)
    else:
        columns = list(species)

    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            _write_csv(fh, points, columns)
    else:
        _write_csv(dest, points, columns)


def _write_csv(
    fh: IO[str], points: Sequence[TrajectoryPoint], columns: list[str]
) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["t_s", *columns, "pH", "temp_c", "r", "g", "b", "a"])
    for point in points:
        row = [repr(point.time_s)]
        row.extend(repr(point.amounts.get(n, 0.0)) for n in columns)
        obs = point.observables
        if obs is None:
            row.extend([""] * 6)
        else:
            row.extend(
                [
                    repr(obs.ph),
                    repr(obs.temperature_c),
                    str(obs.rgba.r),
                    str(obs.rgba.g),
                    str(obs.rgba.b),
                    repr(obs.rgba.alpha),
                ]
            )
        writer.writerow(row)
