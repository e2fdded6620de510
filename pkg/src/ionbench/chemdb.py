"""Reaction database: species table, ordered reaction table, validation.

Data model
----------
* Species rows carry name, charge, standard formation enthalpy (kJ/mol,
  nullable), an optional display colour, a phase state (s/l/g/aq) and an
  optional molar opacity constant (L/mol, default 1.0).
* Reaction rows carry a numeric id, a category, and reactant/product
  coefficient maps.  Row order is significant: resolution always applies
  the first applicable row.

Every reaction is checked for charge and element balance at load time
using exact rational arithmetic; a per-equation enthalpy is derived from
species formation enthalpies (sum over products minus sum over
reactants) whenever every participant has one.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import IO, Any, Iterable, Mapping

from .formula import FormulaError, composition_add, parse_formula

__all__ = [
    "DatabaseError",
    "UnknownSpeciesError",
    "ChemicalSpecies",
    "Reaction",
    "ReactionDatabase",
    "reaction_enthalpy",
    "validate_reaction",
    "load_database",
    "load_bundled_database",
    "load_dissociation_table",
]

VALID_STATES = frozenset({"s", "l", "g", "aq"})
REACTION_TYPES = frozenset(
    {"AcidBase", "DoubleDisplacement", "Redox", "Complexation"}
)


class DatabaseError(ValueError):
    """Malformed or inconsistent database content."""


class UnknownSpeciesError(LookupError):
    """A species name that resolves to nothing in the database."""


@dataclass(frozen=True)
class ChemicalSpecies:
    name: str
    charge: int
    composition: Mapping[str, int]
    formation_enthalpy_kj_mol: float | None
    color_rgb: tuple[int, int, int] | None
    state: str
    opacity_constant: float = 1.0


@dataclass(frozen=True)
class Reaction:
    id: int
    rtype: str
    reactants: Mapping[str, Fraction]
    products: Mapping[str, Fraction]
    enthalpy_kj_mol: float | None = None
    rate_constant: float | None = None

    def participants(self) -> Iterable[str]:
        yield from self.reactants
        yield from self.products


@dataclass
class ReactionDatabase:
    """Ordered reaction table plus species lookup."""

    species: dict[str, ChemicalSpecies] = field(default_factory=dict)
    reactions: list[Reaction] = field(default_factory=list)
    species_row_count: int = 0

    def __post_init__(self) -> None:
        self._by_id = {r.id: r for r in self.reactions}

    def reaction(self, rid: int) -> Reaction:
        try:
            return self._by_id[rid]
        except KeyError:
            raise DatabaseError(f"no reaction with id {rid}") from None

    def species_named(self, name: str) -> ChemicalSpecies:
        try:
            return self.species[name]
        except KeyError:
            raise UnknownSpeciesError(name) from None

    def resolve_species_name(self, name: str) -> str:
        """Map a user spelling onto the canonical species name.

        Canonical names use a bare trailing sign for unit charges
        (``MnO4-``) and a caret form for larger magnitudes (``Fe^2+``).
        This accepts the other spellings (``MnO4^-``, ``Fe2+``,
        ``[CoCl4]2-``, ``CoCl4^2-``) and returns the canonical one.
        """
        for candidate in _name_candidates(name.strip()):
            if candidate in self.species:
                return candidate
        raise UnknownSpeciesError(name)

    def charge_of(self, name: str) -> int:
        return self.species_named(name).charge


def _name_candidates(name: str):
    yield name
    match = re.match(r"^(?P<body>.+?)(?:\^(?P<mag>\d*)(?P<cs>[+-])|(?P<bs>[+-]))$", name)
    if match is None:
        return
    body = match.group("body")
    if match.group("cs") is not None:
        magnitude = match.group("mag") or "1"
        sign = match.group("cs")
        if magnitude == "1":
            yield body + sign
        yield f"{body}^{magnitude}{sign}"
        yield f"[{body}]^{magnitude}{sign}"
    else:
        sign = match.group("bs")
        stem_match = re.match(r"^(?P<stem>.+?)(?P<digits>\d+)$", body)
        if stem_match is not None:
            stem, digits = stem_match.group("stem"), stem_match.group("digits")
            # A trailing digit run may split between subscript and charge
            # magnitude ("SO42-" is SO4 with charge 2-); try every split,
            # longest magnitude first.
            for cut in range(len(digits)):
                subscript, magnitude = digits[:cut], digits[cut:]
                yield f"{stem}{subscript}^{magnitude}{sign}"
                yield f"[{stem}{subscript}]^{magnitude}{sign}"
        yield f"{body}^1{sign}"


def _coefficient(value: Any, context: str) -> Fraction:
    if isinstance(value, bool):
        raise DatabaseError(f"{context}: coefficient must be numeric")
    if isinstance(value, int):
        coef = Fraction(value)
    elif isinstance(value, str):
        try:
            coef = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DatabaseError(f"{context}: bad coefficient {value!r}") from exc
    elif isinstance(value, float):
        coef = Fraction(value)
    else:
        raise DatabaseError(f"{context}: bad coefficient {value!r}")
    if coef <= 0:
        raise DatabaseError(f"{context}: coefficient must be positive")
    return coef


def _load_species_row(row: Mapping[str, Any]) -> ChemicalSpecies:
    try:
        name = row["name"]
        charge = row["charge"]
        enthalpy = row["formation_enthalpy_kj_mol"]
        color = row["color_rgb"]
        state = row["state"]
    except KeyError as exc:
        raise DatabaseError(f"species row missing field {exc}") from None
    try:
        composition, parsed_charge = parse_formula(name)
    except FormulaError as exc:
        raise DatabaseError(f"species {name!r}: {exc}") from exc
    if parsed_charge != charge:
        raise DatabaseError(
            f"species {name!r}: declared charge {charge} does not match "
            f"formula charge {parsed_charge}"
        )
    if state not in VALID_STATES:
        raise DatabaseError(f"species {name!r}: invalid state {state!r}")
    if color is not None:
        color = tuple(color)
        if len(color) != 3 or not all(
            isinstance(c, int) and 0 <= c <= 255 for c in color
        ):
            raise DatabaseError(f"species {name!r}: invalid color {color!r}")
    if enthalpy is not None:
        enthalpy = float(enthalpy)
    opacity = float(row.get("opacity_constant", 1.0))
    if opacity <= 0:
        raise DatabaseError(f"species {name!r}: opacity constant must be > 0")
    return ChemicalSpecies(
        name=name,
        charge=int(charge),
        composition=composition,
        formation_enthalpy_kj_mol=enthalpy,
        color_rgb=color,
        state=state,
        opacity_constant=opacity,
    )


def validate_reaction(reaction: Reaction, db: ReactionDatabase) -> list[str]:
    """Return human-readable violations for one reaction (empty if clean)."""
    label = f"reaction {reaction.id}"
    problems: list[str] = []
    if reaction.rtype not in REACTION_TYPES:
        problems.append(f"{label}: unknown type {reaction.rtype!r}")
    if not reaction.reactants or not reaction.products:
        problems.append(f"{label}: must have reactants and products")
    overlap = set(reaction.reactants) & set(reaction.products)
    if overlap:
        problems.append(f"{label}: species on both sides: {sorted(overlap)}")
    for name in reaction.participants():
        if name not in db.species:
            problems.append(f"{label}: unknown species {name!r}")
    if any(f"unknown species" in p for p in problems):
        return problems

    charge = {"lhs": Fraction(0), "rhs": Fraction(0)}
    elements: dict[str, dict[str, Fraction]] = {"lhs": {}, "rhs": {}}
    for side, terms in (("lhs", reaction.reactants), ("rhs", reaction.products)):
        for name, coef in terms.items():
            spec = db.species[name]
            charge[side] += coef * spec.charge
            for symbol, count in spec.composition.items():
                elements[side][symbol] = (
                    elements[side].get(symbol, Fraction(0)) + coef * count
                )
    if charge["lhs"] != charge["rhs"]:
        problems.append(
            f"{label}: charge imbalance {charge['lhs']} != {charge['rhs']}"
        )
    if elements["lhs"] != elements["rhs"]:
        diff = sorted(
            set(elements["lhs"]) | set(elements["rhs"]),
            key=lambda s: (
                elements["lhs"].get(s, Fraction(0))
                != elements["rhs"].get(s, Fraction(0)),
                s,
            ),
        )
        detail = {
            s: (
                str(elements["lhs"].get(s, 0)),
                str(elements["rhs"].get(s, 0)),
            )
            for s in diff
            if elements["lhs"].get(s, Fraction(0))
            != elements["rhs"].get(s, Fraction(0))
        }
        problems.append(f"{label}: element imbalance {detail}")
    return problems


def reaction_enthalpy(reaction: Reaction, db: ReactionDatabase) -> float | None:
    """Per-equation enthalpy from species formation enthalpies (kJ/mol).

    None when any participant lacks a formation enthalpy.  Reversing the
    reaction negates the result exactly.
    """
    total_products = 0.0
    for name, coef in reaction.products.items():
        hf = db.species_named(name).formation_enthalpy_kj_mol
        if hf is None:
            return None
        total_products += float(coef) * hf
    total_reactants = 0.0
    for name, coef in reaction.reactants.items():
        hf = db.species_named(name).formation_enthalpy_kj_mol
        if hf is None:
            return None
        total_reactants += float(coef) * hf
    return total_products - total_reactants


def _load_reaction_row(row: Mapping[str, Any]) -> Reaction:
    try:
        rid = int(row["id"])
        rtype = row["type"]
        reactants = row["reactants"]
        products = row["products"]
    except KeyError as exc:
        raise DatabaseError(f"reaction row missing field {exc}") from None
    if not isinstance(reactants, Mapping) or not isinstance(products, Mapping):
        raise DatabaseError(f"reaction {rid}: sides must be coefficient maps")
    label = f"reaction {rid}"
    parsed_reactants = {
        name: _coefficient(value, label) for name, value in reactants.items()
    }
    parsed_products = {
        name: _coefficient(value, label) for name, value in products.items()
    }
    enthalpy = row.get("enthalpy_kj_mol")
    rate = row.get("rate_constant")
    if rate is not None:
        rate = float(rate)
        if rate <= 0:
            raise DatabaseError(f"{label}: rate constant must be > 0")
    return Reaction(
        id=rid,
        rtype=rtype,
        reactants=parsed_reactants,
        products=parsed_products,
        enthalpy_kj_mol=None if enthalpy is None else float(enthalpy),
        rate_constant=rate,
    )


def _read_rows(source: str | Path | IO[str] | list) -> list:
    if isinstance(source, list):
        return source
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return json.load(fh)
    return json.load(source)


def load_database(
    species_source: str | Path | IO[str] | list,
    reactions_source: str | Path | IO[str] | list,
) -> ReactionDatabase:
    """Load and validate a database; raises DatabaseError listing every
    violation found.

    An exact duplicate species row (identical payload) is tolerated and
    collapsed; a row that conflicts with an earlier one of the same name
    is an error.
    """
    species_rows = _read_rows(species_source)
    reaction_rows = _read_rows(reactions_source)

    species: dict[str, ChemicalSpecies] = {}
    row_count = 0
    for row in species_rows:
        spec = _load_species_row(row)
        row_count += 1
        existing = species.get(spec.name)
        if existing is not None:
            if existing != spec:
                raise DatabaseError(
                    f"conflicting duplicate species row {spec.name!r}"
                )
            continue
        species[spec.name] = spec

    reactions: list[Reaction] = []
    seen_ids: set[int] = set()
    for row in reaction_rows:
        reaction = _load_reaction_row(row)
        if reaction.id in seen_ids:
            raise DatabaseError(f"duplicate reaction id {reaction.id}")
        seen_ids.add(reaction.id)
        reactions.append(reaction)

    db = ReactionDatabase(
        species=species, reactions=reactions, species_row_count=row_count
    )
    problems: list[str] = []
    for reaction in reactions:
        problems.extend(validate_reaction(reaction, db))
    if problems:
        raise DatabaseError("; ".join(problems))

    # Derive per-equation enthalpies where not given explicitly.
    derived = [
        Reaction(
            id=r.id,
            rtype=r.rtype,
            reactants=r.reactants,
            products=r.products,
            enthalpy_kj_mol=(
                r.enthalpy_kj_mol
                if r.enthalpy_kj_mol is not None
                else reaction_enthalpy(r, db)
            ),
            rate_constant=r.rate_constant,
        )
        for r in reactions
    ]
    return ReactionDatabase(
        species=species, reactions=derived, species_row_count=row_count
    )


def _data_path(filename: str):
    return resources.files("ionbench").joinpath("data", filename)


_BUNDLED: ReactionDatabase | None = None


def load_bundled_database() -> ReactionDatabase:
    """Load the packaged species/reaction tables (cached)."""
    global _BUNDLED
    if _BUNDLED is None:
        with resources.as_file(_data_path("species.json")) as sp:
            with resources.as_file(_data_path("reactions.json")) as rp:
                _BUNDLED = load_database(sp, rp)
    return _BUNDLED


_DISSOCIATION: dict[str, dict[str, int]] | None = None


def load_dissociation_table() -> dict[str, dict[str, int]]:
    """Compound -> ion expansion table for solution preparation (cached)."""
    global _DISSOCIATION
    if _DISSOCIATION is None:
        raw = json.loads(_data_path("dissociation.json").read_text("utf-8"))
        _DISSOCIATION = {
            compound: {ion: int(n) for ion, n in ions.items()}
            for compound, ions in raw.items()
        }
    return _DISSOCIATION
