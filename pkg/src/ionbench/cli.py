"""Command line interface.

Machine-readable results go to stdout, diagnostics to stderr.  Exit
codes: 0 success, 1 domain failure (validation violations, failed
expectations, rejected input), 2 usage errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .chemdb import (
    DatabaseError,
    UnknownSpeciesError,
    load_bundled_database,
    load_database,
)
from .container import ContainerError, World, sample_pending
from .engine import EngineError, Mixture, resolve
from .kinetics import trajectory_with_observables, write_trajectory_csv
from .observables import (
    ObservableError,
    blackbody_spd,
    mixture_color,
    ph_from_strong_difference,
    spectrum_to_rgb,
    temperature_change,
)
from .recipe import RecipeSyntaxError, execute, parse_recipe

_DomainErrors = (
    DatabaseError,
    UnknownSpeciesError,
    EngineError,
    ContainerError,
    ObservableError,
    RecipeSyntaxError,
    OSError,
)


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def _load_db(args):
    if args.species or args.reactions:
        if not (args.species and args.reactions):
            raise DatabaseError(
                "--species and --reactions must be given together"
            )
        return load_database(args.species, args.reactions)
    return load_bundled_database()


def _parse_amounts(text: str) -> dict[str, float]:
    amounts: dict[str, float] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, sep, qty = part.rpartition(":")
        if not sep or not name.strip():
            raise EngineError(
                f"bad amount entry {part!r} (want 'name:moles')"
            )
        try:
            value = float(qty)
        except ValueError:
            raise EngineError(f"bad amount {qty!r} for {name.strip()!r}") from None
        amounts[name.strip()] = value
    if not amounts:
        raise EngineError("no amounts given")
    return amounts


def _representation(world: World, mixture: Mixture, heat_kj: float) -> dict:
    rgba = mixture_color(mixture, world.db)
    components = {
        n: float(a) for n, a in sorted(mixture.amounts.items()) if a > 0
    }
    net_acid = (
        components.get("H+", 0.0) - components.get("OH-", 0.0)
    ) / mixture.volume_l
    kw_temp = min(max(mixture.temperature_c, 0.0), 100.0)
    acid_base = ph_from_strong_difference(net_acid, kw_temp)
    return {
        "rgba": {"r": rgba.r, "g": rgba.g, "b": rgba.b, "alpha": rgba.alpha},
        "ph": acid_base.ph,
        "temperature_c": mixture.temperature_c,
        "heat_released_kj": heat_kj,
        "states": {
            n: world.db.species_named(n).state for n in components
        },
    }


def _cmd_db(args) -> int:
    try:
        db = _load_db(args)
    except (DatabaseError, OSError) as exc:
        return _fail(str(exc))
    if args.db_command == "validate":
        print(f"{len(db.reactions)} reactions OK")
        return 0
    # show
    key = args.name
    if key.isdigit():
        reaction = db.reaction(int(key))
        print(
            json.dumps(
                {
                    "id": reaction.id,
                    "type": reaction.rtype,
                    "reactants": {n: float(c) for n, c in reaction.reactants.items()},
                    "products": {n: float(c) for n, c in reaction.products.items()},
                    "enthalpy_kj_mol": reaction.enthalpy_kj_mol,
                },
                indent=2,
            )
        )
        return 0
    name = db.resolve_species_name(key)
    spec = db.species_named(name)
    print(
        json.dumps(
            {
                "name": spec.name,
                "charge": spec.charge,
                "composition": dict(spec.composition),
                "formation_enthalpy_kj_mol": spec.formation_enthalpy_kj_mol,
                "color_rgb": spec.color_rgb,
                "state": spec.state,
                "opacity_constant": spec.opacity_constant,
            },
            indent=2,
        )
    )
    return 0


def _prepare(args) -> tuple[World, Mixture]:
    db = _load_db(args)
    world = World(db)
    expanded = world.expand_amounts(_parse_amounts(args.amounts))
    net = Fraction(0)
    for name, qty in expanded.items():
        net += qty * db.species_named(name).charge
    if net != 0:
        raise EngineError(
            f"amounts carry net charge {float(net):+g} mol; "
            "supply a charge-balanced solution"
        )
    return world, Mixture(expanded, args.volume, args.temp)


def _cmd_mix(args) -> int:
    world, mixture = _prepare(args)
    report = resolve(mixture, world.db)
    final = Mixture(
        report.final.amounts,
        mixture.volume_l,
        mixture.temperature_c
        + temperature_change(report, mixture.volume_l, world.config.solvent),
    )
    payload = {
        "report": report.to_dict(),
        "representation": _representation(
            world, final, report.total_heat_released_kj
        ),
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def _cmd_trajectory(args) -> int:
    world, mixture = _prepare(args)
    report = resolve(mixture, world.db)
    final_temp = mixture.temperature_c + temperature_change(
        report, mixture.volume_l, world.config.solvent
    )
    final = Mixture(report.final.amounts, mixture.volume_l, final_temp)
    points = trajectory_with_observables(
        mixture,
        final,
        args.rate_constant,
        args.dt,
        args.horizon,
        world.db,
        heat_released_kj=report.total_heat_released_kj,
    )
    if args.csv == "-":
        write_trajectory_csv(points, sys.stdout)
    else:
        write_trajectory_csv(points, args.csv)
        print(f"wrote {len(points)} points to {args.csv}", file=sys.stderr)
    return 0


def _cmd_run(args) -> int:
    text = Path(args.recipe).read_text(encoding="utf-8")
    recipe = parse_recipe(text)
    world = World(_load_db(args))
    pour_trajectories = []

    def on_pour(index, task, outcome):
        if outcome.trajectory is not None:
            pour_trajectories.append(
                (index, task.params["dst"], outcome.trajectory,
                 outcome.container.volume_l)
            )

    report = execute(recipe, world, pour_observer=on_pour)
    print(report.to_canonical_json(), end="")
    if args.snapshot:
        Path(args.snapshot).write_text(
            json.dumps(world.snapshot(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    if args.csv:
        out_dir = Path(args.csv)
        out_dir.mkdir(parents=True, exist_ok=True)
        for index, dst, pending, volume_l in pour_trajectories:
            points = sample_pending(
                pending, volume_l, world.db, world.config.sample_dt_s
            )
            write_trajectory_csv(points, out_dir / f"pour_{index:03d}_{dst}.csv")
    return 0 if report.ok else 1


def _cmd_spectrum(args) -> int:
    spd = blackbody_spd(args.blackbody)
    if args.to_rgb:
        r, g, b = spectrum_to_rgb(spd)
        print(f"{r},{g},{b}")
    else:
        print("wavelength_nm,power")
        for w, p in spd.samples:
            print(f"{w:g},{p!r}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(session_ttl_s=args.session_ttl)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        print(f"warning: ignoring bad {name}={raw!r}", file=sys.stderr)
        return default


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ionbench",
        description="Deterministic inorganic solution chemistry bench.",
    )
    parser.add_argument(
        "--species", help="path to a species table (JSON); default bundled"
    )
    parser.add_argument(
        "--reactions", help="path to a reaction table (JSON); default bundled"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    db_parser = sub.add_parser("db", help="inspect and validate the database")
    db_sub = db_parser.add_subparsers(dest="db_command", required=True)
    db_sub.add_parser("validate", help="check balance of every reaction")
    show = db_sub.add_parser("show", help="show one species or reaction")
    show.add_argument("name", help="species name or numeric reaction id")

    def add_mixture_args(p):
        p.add_argument(
            "--amounts",
            required=True,
            help="comma list of name:moles (compounds dissociate)",
        )
        p.add_argument("--volume", type=float, required=True, help="litres")
        p.add_argument("--temp", type=float, default=25.0, help="deg C")

    mix = sub.add_parser("mix", help="resolve a mixture and report")
    add_mixture_args(mix)

    traj = sub.add_parser("trajectory", help="resolve and export kinetics CSV")
    add_mixture_args(traj)
    traj.add_argument("--rate-constant", type=float, default=1.0)
    traj.add_argument("--dt", type=float, default=0.1, help="sample step s")
    traj.add_argument("--horizon", type=float, default=10.0, help="seconds")
    traj.add_argument("--csv", default="-", help="output path or - for stdout")

    run = sub.add_parser("run", help="execute a recipe file")
    run.add_argument("recipe")
    run.add_argument("--snapshot", help="write final world state JSON here")
    run.add_argument("--csv", help="write per-pour trajectory CSVs here")

    spectrum = sub.add_parser("spectrum", help="spectral utilities")
    spectrum.add_argument(
        "--blackbody", type=float, required=True, help="temperature K"
    )
    spectrum.add_argument(
        "--to-rgb", action="store_true", help="print the display RGB triple"
    )

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument(
        "--port",
        type=int,
        default=int(_env_float("IONBENCH_PORT", 8077)),
    )
    serve.add_argument(
        "--session-ttl",
        type=float,
        default=_env_float("IONBENCH_SESSION_TTL_S", 1800.0),
        help="idle session lifetime in seconds",
    )
    return parser


_COMMANDS = {
    "db": _cmd_db,
    "mix": _cmd_mix,
    "trajectory": _cmd_trajectory,
    "run": _cmd_run,
    "spectrum": _cmd_spectrum,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _DomainErrors as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
