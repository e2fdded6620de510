"""Deterministic reaction resolution.

A mixture holds exact per-species amounts (stored as rationals so that
conservation laws and replay hold bit-for-bit), a volume and a
temperature.  Resolution repeatedly applies the first database reaction
whose reactants are all present, each time consuming the stoichiometric
maximum allowed by the scarcest reactant, until no reaction applies.

Units: amounts in mol, volume in L, temperature in degrees C, heat in kJ.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .chemdb import Reaction, ReactionDatabase, UnknownSpeciesError

__all__ = [
    "PRESENCE_THRESHOLD",
    "EngineError",
    "ImbalancedMixtureError",
    "NonTerminationError",
    "Mixture",
    "ResolutionStep",
    "ResolutionReport",
    "net_charge",
    "find_applicable",
    "extract_reacting",
    "reaction_quantity",
    "apply_reaction",
    "resolve",
]

# Amounts at or below this many mol are treated as absent.
PRESENCE_THRESHOLD = Fraction(1, 10**12)


class EngineError(ValueError):
    pass


class ImbalancedMixtureError(EngineError):
    """Input mixture carries a nonzero net charge."""


class NonTerminationError(EngineError):
    """Cascade exceeded the iteration budget (database likely cyclic)."""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise EngineError("amounts must be numeric")
    if isinstance(value, (int, float, str)):
        return Fraction(value)
    raise EngineError(f"bad amount {value!r}")


@dataclass(frozen=True)
class Mixture:
    """Exact species amounts in a fixed volume at a fixed temperature."""

    amounts: Mapping[str, Fraction]
    volume_l: float
    temperature_c: float = 25.0

    def __post_init__(self) -> None:
        converted: dict[str, Fraction] = {}
        for name, value in dict(self.amounts).items():
            amount = _as_fraction(value)
            if amount < 0:
                raise EngineError(f"negative amount for {name}")
            converted[name] = amount
        object.__setattr__(self, "amounts", converted)
        if self.volume_l < 0:
            raise EngineError("volume must be >= 0")

    def amount(self, name: str) -> Fraction:
        return self.amounts.get(name, Fraction(0))

    def present(self, name: str) -> bool:
        return self.amount(name) > PRESENCE_THRESHOLD

    def present_species(self) -> list[str]:
        return [n for n, a in self.amounts.items() if a > PRESENCE_THRESHOLD]

    def amounts_float(self) -> dict[str, float]:
        return {n: float(a) for n, a in self.amounts.items()}

    def replace_amounts(self, amounts: Mapping[str, Fraction]) -> "Mixture":
        return Mixture(amounts, self.volume_l, self.temperature_c)


def net_charge(mixture: Mixture, db: ReactionDatabase) -> Fraction:
    """Total charge in the mixture (mol of elementary charge), exact."""
    total = Fraction(0)
    for name, amount in mixture.amounts.items():
        total += amount * db.species_named(name).charge
    return total


def find_applicable(mixture: Mixture, db: ReactionDatabase) -> Reaction | None:
    """First reaction whose reactants are all present, or None."""
    for reaction in db.reactions:
        if all(mixture.present(name) for name in reaction.reactants):
            return reaction
    return None


def extract_reacting(
    mixture: Mixture, reaction: Reaction
) -> tuple[dict[str, Fraction], dict[str, Fraction]]:
    """Split present species into (reacting, spectating) for one reaction."""
    if not all(mixture.present(name) for name in reaction.reactants):
        raise EngineError(
            f"reaction {reaction.id} is not applicable to this mixture"
        )
    reacting: dict[str, Fraction] = {}
    spectating: dict[str, Fraction] = {}
    for name, amount in mixture.amounts.items():
        if amount <= PRESENCE_THRESHOLD:
            continue
        if name in reaction.reactants:
            reacting[name] = amount
        else:
            spectating[name] = amount
    return reacting, spectating


def reaction_quantity(mixture: Mixture, reaction: Reaction) -> Fraction:
    """Stoichiometric extent limited by the scarcest reactant (mol)."""
    return min(
        mixture.amount(name) / coef
        for name, coef in reaction.reactants.items()
    )


@dataclass(frozen=True)
class ResolutionStep:
    reaction_id: int
    quantity: Fraction
    consumed: Mapping[str, Fraction]
    produced: Mapping[str, Fraction]
    heat_released_kj: float | None


@dataclass(frozen=True)
class ResolutionReport:
    steps: tuple[ResolutionStep, ...]
    final: Mixture
    spectators: frozenset[str]
    total_heat_released_kj: float

    def to_dict(self) -> dict:
        """Canonical, JSON-ready representation (sorted keys, floats)."""
        return {
            "steps": [
                {
                    "reaction_id": s.reaction_id,
                    "quantity_mol": float(s.quantity),
                    "consumed_mol": {
                        n: float(v) for n, v in sorted(s.consumed.items())
                    },
                    "produced_mol": {
                        n: float(v) for n, v in sorted(s.produced.items())
                    },
                    "heat_released_kj": s.heat_released_kj,
                }
                for s in self.steps
            ],
            "final_mol": {
                n: float(v) for n, v in sorted(self.final.amounts.items())
            },
            "spectators": sorted(self.spectators),
            "total_heat_released_kj": self.total_heat_released_kj,
        }


def apply_reaction(
    mixture: Mixture, reaction: Reaction, quantity: Fraction | float | int
) -> tuple[Mixture, ResolutionStep]:
    """Advance the reaction by ``quantity`` equation-equivalents.

    Exact arithmetic: consuming the full stoichiometric quantity leaves
    the limiting species at exactly zero.
    """
    extent = _as_fraction(quantity)
    if extent < 0:
        raise EngineError("reaction quantity must be >= 0")
    limit = reaction_quantity(mixture, reaction)
    if extent > limit:
        raise EngineError(
            f"quantity {float(extent)} exceeds stoichiometric limit "
            f"{float(limit)} for reaction {reaction.id}"
        )
    amounts = dict(mixture.amounts)
    consumed: dict[str, Fraction] = {}
    produced: dict[str, Fraction] = {}
    for name, coef in reaction.reactants.items():
        delta = extent * coef
        amounts[name] = amounts.get(name, Fraction(0)) - delta
        consumed[name] = delta
    for name, coef in reaction.products.items():
        delta = extent * coef
        amounts[name] = amounts.get(name, Fraction(0)) + delta
        produced[name] = delta
    heat = None
    if reaction.enthalpy_kj_mol is not None:
        heat = -float(extent) * reaction.enthalpy_kj_mol
    step = ResolutionStep(
        reaction_id=reaction.id,
        quantity=extent,
        consumed=consumed,
        produced=produced,
        heat_released_kj=heat,
    )
    return mixture.replace_amounts(amounts), step


def resolve(
    mixture: Mixture,
    db: ReactionDatabase,
    *,
    max_iterations: int | None = None,
) -> ResolutionReport:
    """Run the reaction cascade to quiescence.

    The input must be charge balanced (exactly zero net charge).  Each
    iteration applies the first applicable reaction at its maximal
    extent; the cascade ends when no reaction applies.  The iteration
    budget defaults to ten times the database size, after which a cyclic
    database is assumed and NonTerminationError is raised.
    """
    for name in mixture.amounts:
        if name not in db.species:
            raise UnknownSpeciesError(name)
    charge = net_charge(mixture, db)
    if charge != 0:
        raise ImbalancedMixtureError(
            f"mixture has net charge {float(charge):+g} mol; "
            "resolution requires a charge-balanced input"
        )
    budget = max_iterations if max_iterations is not None else 10 * len(db.reactions)
    initial_present = set(mixture.present_species())
    current = mixture
    steps: list[ResolutionStep] = []
    for _ in range(budget):
        reaction = find_applicable(current, db)
        if reaction is None:
            break
        current, step = apply_reaction(
            current, reaction, reaction_quantity(current, reaction)
        )
        steps.append(step)
    else:
        if find_applicable(current, db) is not None:
            raise NonTerminationError(
                f"cascade did not settle within {budget} iterations"
            )

    # Drop only exact zeros: species consumed to the last mole vanish from
    # the report, while sub-threshold residues (inert, but real mass) stay
    # so that conservation bookkeeping remains exact.
    final_amounts = {n: a for n, a in current.amounts.items() if a != 0}
    final = current.replace_amounts(final_amounts)
    consumed_ever = set()
    for step in steps:
        consumed_ever.update(step.consumed)
    spectators = frozenset(initial_present - consumed_ever)
    total_heat = 0.0
    for step in steps:
        if step.heat_released_kj is not None:
            total_heat += step.heat_released_kj
    return ResolutionReport(
        steps=tuple(steps),
        final=final,
        spectators=spectators,
        total_heat_released_kj=total_heat,
    )
