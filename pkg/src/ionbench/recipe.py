"""Bench recipes: a line-oriented script language over the container API.

One task per line; blank lines and ``#`` comments are skipped.

    create A { KMnO4: 0.01 mol } volume 0.1 L temp 25 C
    create B { FeCl2: 0.05 mol, HCl: 0.08 mol } volume 0.2 L
    pour A -> B 0.1 L
    tick 10 s
    sample B -> C 0.05 L
    expect pH(B) in [1.0, 2.0]
    expect moles:Fe^3+(B) in [0.049, 0.051]
    print B

Quantities always carry their unit (mol, L, s, C).  Execution halts at
the first hard error (bad reference, impossible transfer); a failed
``expect`` is recorded and execution continues.  Reports are canonical:
the same recipe on a fresh world serialises to identical bytes.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Any

from .container import ContainerError, World

__all__ = [
    "RecipeSyntaxError",
    "Task",
    "Recipe",
    "TaskResult",
    "ExecutionReport",
    "parse_recipe",
    "format_recipe",
    "execute",
]

_NUM = r"[-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?"

_CREATE_RE = re.compile(
    rf"^create\s+(?P<id>\w+)\s*\{{(?P<body>.*)\}}\s*"
    rf"volume\s+(?P<volume>{_NUM})\s*L"
    rf"(?:\s+temp\s+(?P<temp>{_NUM})\s*C)?$"
)
_INGREDIENT_RE = re.compile(rf"^(?P<name>[^:]+?)\s*:\s*(?P<qty>{_NUM})\s*mol$")
_POUR_RE = re.compile(
    rf"^pour\s+(?P<src>\w+)\s*->\s*(?P<dst>\w+)\s+(?P<volume>{_NUM})\s*L$"
)
_SAMPLE_RE = re.compile(
    rf"^sample\s+(?P<src>\w+)\s*->\s*(?P<id>\w+)\s+(?P<volume>{_NUM})\s*L$"
)
_TICK_RE = re.compile(rf"^tick\s+(?P<dt>{_NUM})\s*s$")
_EXPECT_RE = re.compile(
    rf"^expect\s+(?P<obs>\S+)\((?P<id>\w+)\)\s+in\s*"
    rf"\[\s*(?P<lo>{_NUM})\s*,\s*(?P<hi>{_NUM})\s*\]$"
)
_PRINT_RE = re.compile(r"^print\s+(?P<id>\w+)$")

_SIMPLE_OBSERVABLES = frozenset({"pH", "temp", "alpha"})


class RecipeSyntaxError(ValueError):
    def __init__(self, message: str, line_no: int, line: str):
        super().__init__(f"line {line_no}: {message}: {line.strip()!r}")
        self.line_no = line_no
        self.line = line


@dataclass(frozen=True)
class Task:
    kind: str
    params: dict[str, Any]
    line_no: int


@dataclass(frozen=True)
class Recipe:
    tasks: tuple[Task, ...]


def _parse_ingredients(body: str, line_no: int, line: str) -> dict[str, float]:
    ingredients: dict[str, float] = {}
    body = body.strip()
    if not body:
        return ingredients
    for part in body.split(","):
        match = _INGREDIENT_RE.match(part.strip())
        if match is None:
            raise RecipeSyntaxError(
                f"bad ingredient {part.strip()!r} (want 'name: qty mol')",
                line_no,
                line,
            )
        name = match.group("name").strip()
        if name in ingredients:
            raise RecipeSyntaxError(
                f"duplicate ingredient {name!r}", line_no, line
            )
        ingredients[name] = float(match.group("qty"))
    return ingredients


def _parse_observable(obs: str, line_no: int, line: str) -> str:
    if obs in _SIMPLE_OBSERVABLES:
        return obs
    if obs.startswith("moles:") and len(obs) > len("moles:"):
        return obs
    raise RecipeSyntaxError(
        f"unknown observable {obs!r} (want pH, temp, alpha or moles:<species>)",
        line_no,
        line,
    )


def parse_recipe(text: str) -> Recipe:
    tasks: list[Task] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if match := _CREATE_RE.match(line):
            params = {
                "id": match.group("id"),
                "amounts": _parse_ingredients(match.group("body"), line_no, raw),
                "volume_l": float(match.group("volume")),
                "temperature_c": (
                    float(match.group("temp"))
                    if match.group("temp") is not None
                    else 25.0
                ),
            }
            tasks.append(Task("create", params, line_no))
        elif match := _POUR_RE.match(line):
            tasks.append(
                Task(
                    "pour",
                    {
                        "src": match.group("src"),
                        "dst": match.group("dst"),
                        "volume_l": float(match.group("volume")),
                    },
                    line_no,
                )
            )
        elif match := _SAMPLE_RE.match(line):
            tasks.append(
                Task(
                    "sample",
                    {
                        "src": match.group("src"),
                        "id": match.group("id"),
                        "volume_l": float(match.group("volume")),
                    },
                    line_no,
                )
            )
        elif match := _TICK_RE.match(line):
            tasks.append(Task("tick", {"dt_s": float(match.group("dt"))}, line_no))
        elif match := _EXPECT_RE.match(line):
            lo = float(match.group("lo"))
            hi = float(match.group("hi"))
            if hi < lo:
                raise RecipeSyntaxError("empty expect window", line_no, raw)
            tasks.append(
                Task(
                    "expect",
                    {
                        "observable": _parse_observable(
                            match.group("obs"), line_no, raw
                        ),
                        "id": match.group("id"),
                        "low": lo,
                        "high": hi,
                    },
                    line_no,
                )
            )
        elif match := _PRINT_RE.match(line):
            tasks.append(Task("print", {"id": match.group("id")}, line_no))
        else:
            verb = line.split(None, 1)[0]
            raise RecipeSyntaxError(
                f"unrecognised task (verb {verb!r})", line_no, raw
            )
    return Recipe(tasks=tuple(tasks))


def _fmt_qty(value: float) -> str:
    return repr(float(value))


def format_recipe(recipe: Recipe) -> str:
    """Render tasks back to canonical source (parse . format == identity)."""
    lines: list[str] = []
    for task in recipe.tasks:
        p = task.params
        if task.kind == "create":
            body = ", ".join(
                f"{name}: {_fmt_qty(qty)} mol" for name, qty in p["amounts"].items()
            )
            line = f"create {p['id']} {{ {body} }} volume {_fmt_qty(p['volume_l'])} L"
            if p["temperature_c"] != 25.0:
                line += f" temp {_fmt_qty(p['temperature_c'])} C"
            lines.append(line)
        elif task.kind == "pour":
            lines.append(
                f"pour {p['src']} -> {p['dst']} {_fmt_qty(p['volume_l'])} L"
            )
        elif task.kind == "sample":
            lines.append(
                f"sample {p['src']} -> {p['id']} {_fmt_qty(p['volume_l'])} L"
            )
        elif task.kind == "tick":
            lines.append(f"tick {_fmt_qty(p['dt_s'])} s")
        elif task.kind == "expect":
            lines.append(
                f"expect {p['observable']}({p['id']}) in "
                f"[{_fmt_qty(p['low'])}, {_fmt_qty(p['high'])}]"
            )
        elif task.kind == "print":
            lines.append(f"print {p['id']}")
        else:  # pragma: no cover - parser only emits the kinds above
            raise ValueError(f"unknown task kind {task.kind!r}")
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class TaskResult:
    index: int
    line_no: int
    kind: str
    status: str  # ok | expect_failed | error
    detail: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ExecutionReport:
    results: tuple[TaskResult, ...]
    halted: bool

    @property
    def ok(self) -> bool:
        return not self.halted and all(
            r.status == "ok" for r in self.results
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "halted": self.halted,
            "tasks": [
                {
                    "index": r.index,
                    "line": r.line_no,
                    "kind": r.kind,
                    "status": r.status,
                    "detail": r.detail,
                }
                for r in self.results
            ],
        }

    def to_canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _observe(world: World, observable: str, container_id: str) -> float:
    info = world.get_info(container_id)
    if observable == "temp":
        return info["temperature_c"]
    if observable.startswith("moles:"):
        name = observable[len("moles:"):]
        canonical = world.db.resolve_species_name(name)
        return info["components"].get(canonical, 0.0)
    representation = info["representation"]
    if representation is None:
        raise ContainerError(
            f"container {container_id!r} is empty; {observable} undefined",
            code="empty_container",
        )
    if observable == "pH":
        return representation["ph"]
    if observable == "alpha":
        return representation["rgba"]["alpha"]
    raise ContainerError(
        f"unknown observable {observable!r}", code="invalid_observable"
    )


def execute(
    recipe: Recipe, world: World, *, pour_observer=None
) -> ExecutionReport:
    """Run tasks in order; hard errors halt, failed expectations do not.

    ``pour_observer(index, task, outcome)`` is called after each
    successful pour, e.g. to capture its trajectory before later tasks
    commit it.
    """
    results: list[TaskResult] = []
    halted = False
    for index, task in enumerate(recipe.tasks):
        p = task.params
        try:
            if task.kind == "create":
                world.create_container(
                    p["id"], p["amounts"], p["volume_l"], p["temperature_c"]
                )
                detail: dict[str, Any] = {"id": p["id"]}
            elif task.kind == "pour":
                outcome = world.pour(p["src"], p["dst"], p["volume_l"])
                if pour_observer is not None:
                    pour_observer(index, task, outcome)
                detail = {
                    "dst": p["dst"],
                    "reactions": [s.reaction_id for s in outcome.report.steps],
                    "heat_released_kj": outcome.report.total_heat_released_kj,
                }
            elif task.kind == "sample":
                world.sample(p["src"], p["id"], p["volume_l"])
                detail = {"id": p["id"]}
            elif task.kind == "tick":
                world.tick(p["dt_s"])
                detail = {"clock_s": world.clock_s}
            elif task.kind == "expect":
                observed = _observe(world, p["observable"], p["id"])
                detail = {
                    "observable": p["observable"],
                    "id": p["id"],
                    "observed": observed,
                    "window": [p["low"], p["high"]],
                }
                if not p["low"] <= observed <= p["high"]:
                    results.append(
                        TaskResult(index, task.line_no, task.kind, "expect_failed", detail)
                    )
                    continue
            elif task.kind == "print":
                detail = world.get_info(p["id"])
            else:  # pragma: no cover
                raise ValueError(f"unknown task kind {task.kind!r}")
        except (ContainerError, ValueError, LookupError) as exc:
            code = getattr(exc, "code", "error")
            results.append(
                TaskResult(
                    index,
                    task.line_no,
                    task.kind,
                    "error",
                    {"code": code, "message": str(exc)},
                )
            )
            halted = True
            break
        results.append(TaskResult(index, task.line_no, task.kind, "ok", detail))
    return ExecutionReport(results=tuple(results), halted=halted)
