import json
import math
from fractions import Fraction

import pytest

from ionbench import ContainerError, World


def scenario(world):
    """Permanganate flask A, acidified iron(II) flask B."""
    world.create_container("A", {"KMnO4": 0.01}, 0.1)
    world.create_container("B", {"FeCl2": 0.05, "HCl": 0.08}, 0.1)
    return world


# ------------------------------------------------------------------ creation

def test_create_expands_compounds(world):
    world.create_container("A", {"KMnO4": 0.01}, 0.1)
    amounts = world.containers["A"].mixture.amounts
    assert set(amounts) == {"K+", "MnO4-"}
    assert float(amounts["K+"]) == 0.01
    assert float(amounts["MnO4-"]) == 0.01


def test_create_accepts_ion_spellings(world):
    world.create_container("C", {"Fe2+": 0.25, "Cl-": 0.5}, 0.1)
    assert set(world.containers["C"].mixture.amounts) == {"Fe^2+", "Cl-"}


def test_create_does_not_resolve(world):
    # an acid and a base coexist untouched until something is poured
    world.create_container("X", {"H+": 0.01, "OH-": 0.01}, 0.1)
    amounts = world.containers["X"].mixture.amounts
    assert float(amounts["H+"]) == 0.01
    assert float(amounts["OH-"]) == 0.01


def test_create_empty_beaker(world):
    world.create_container("E", {}, 0.0)
    assert world.containers["E"].volume_l == 0.0


@pytest.mark.parametrize(
    "kwargs,code",
    [
        (dict(amounts={"Na+": 1.0}, volume_l=0.1), "charge_imbalance"),
        (dict(amounts={"Vibranium": 1.0}, volume_l=0.1), "unknown_species"),
        (dict(amounts={}, volume_l=-0.1), "invalid_volume"),
        (dict(amounts={}, volume_l=0.1, temperature_c=130.0), "invalid_temperature"),
    ],
)
def test_create_guards(world, kwargs, code):
    with pytest.raises(ContainerError) as exc:
        world.create_container("bad", **kwargs)
    assert exc.value.code == code


def test_duplicate_id_rejected(world):
    world.create_container("A", {}, 0.1)
    with pytest.raises(ContainerError) as exc:
        world.create_container("A", {}, 0.1)
    assert exc.value.code == "duplicate_container"


def test_blank_id_rejected(world):
    with pytest.raises(ContainerError):
        world.create_container("bad id", {}, 0.1)


# --------------------------------------------------------------------- pour

def test_pour_runs_the_reaction(world):
    scenario(world)
    outcome = world.pour("A", "B", 0.1)
    steps = [(s.reaction_id, float(s.quantity)) for s in outcome.report.steps]
    assert steps == [(16, 0.01)]
    b = world.containers["B"]
    committed = {k: float(v) for k, v in b.mixture.amounts.items() if v > 1e-12}
    assert committed == pytest.approx(
        {"Cl-": 0.18, "K+": 0.01, "Fe^3+": 0.05, "Mn^2+": 0.01, "H2O": 0.04}
    )
    assert b.volume_l == pytest.approx(0.2)
    assert b.last_heat_released_kj == pytest.approx(6.4272)
    # 6427.2 J over 200 mL of water
    assert b.mixture.temperature_c == pytest.approx(25.0 + 6427.2 / 836)


def test_pour_empties_the_source(world):
    scenario(world)
    world.pour("A", "B", 0.1)
    a = world.containers["A"]
    assert a.volume_l == 0.0
    # exact zeros stay as ledger entries; nothing physically remains
    assert all(v == 0 for v in a.mixture.amounts.values())
    assert a.displayed_amounts() == {}


def test_partial_pour_is_exact(world):
    scenario(world)
    world.pour("A", "B", 0.05)
    # half of the binary float 0.01, with no rounding on the way
    assert world.containers["A"].mixture.amounts["K+"] == Fraction(0.01) / 2


def test_pour_guards(world):
    world.create_container("A", {}, 0.0)
    world.create_container("B", {}, 0.1)
    with pytest.raises(ContainerError):
        world.pour("A", "B", 0.05)  # nothing to pour
    with pytest.raises(ContainerError):
        world.pour("B", "A", 0.5)  # more than B holds
    with pytest.raises(ContainerError):
        world.pour("nope", "B", 0.01)


def test_pour_of_plain_water_only_dilutes(world):
    world.create_container("W", {}, 0.05)
    world.create_container("B", {"NaCl": 0.01}, 0.1)
    outcome = world.pour("W", "B", 0.05)
    assert outcome.report.steps == ()
    assert outcome.trajectory is None
    b = world.containers["B"]
    assert b.volume_l == pytest.approx(0.15)
    assert float(b.mixture.amounts["Na+"]) == 0.01


def test_pour_mixes_temperature_volume_weighted(world):
    world.create_container("hot", {}, 0.1, temperature_c=75.0)
    world.create_container("cold", {}, 0.1, temperature_c=25.0)
    world.pour("hot", "cold", 0.1)
    assert world.containers["cold"].mixture.temperature_c == pytest.approx(50.0)


# ----------------------------------------------------- pending trajectories

def test_info_shows_premix_state_until_ticked(world):
    scenario(world)
    world.pour("A", "B", 0.1)
    info = world.get_info("B")
    comp = info["components"]
    # the reaction has resolved internally but the display still shows the
    # freshly combined, unreacted mixture
    assert comp["Fe^2+"] == pytest.approx(0.05)
    assert comp["MnO4-"] == pytest.approx(0.01)
    assert comp["H+"] == pytest.approx(0.08)
    assert "Fe^3+" not in comp
    assert info["pending"] == {"elapsed_s": 0.0, "duration_s": 10.0}


def test_mid_state_at_ln10_over_k(world):
    scenario(world)
    world.pour("A", "B", 0.1)
    world.tick(math.log(10))
    comp = world.get_info("B")["components"]
    # 10% of the way from start to finish remains
    assert comp["Fe^2+"] == pytest.approx(0.005, rel=1e-9)
    assert comp["MnO4-"] == pytest.approx(0.001, rel=1e-9)
    assert comp["H+"] == pytest.approx(0.008, rel=1e-9)
    assert comp["Fe^3+"] == pytest.approx(0.045, rel=1e-9)


def test_tick_past_horizon_commits(world):
    scenario(world)
    world.pour("A", "B", 0.1)
    world.tick(30.0)
    b = world.containers["B"]
    assert b.pending is None
    comp = world.get_info("B")["components"]
    assert comp["Fe^3+"] == pytest.approx(0.05)
    assert "Fe^2+" not in comp


def test_two_half_ticks_equal_one(db):
    w1 = World(db)
    scenario(w1)
    w1.pour("A", "B", 0.1)
    w1.tick(1.0)
    w2 = World(db)
    scenario(w2)
    w2.pour("A", "B", 0.1)
    w2.tick(0.5)
    w2.tick(0.5)
    c1 = w1.get_info("B")["components"]
    c2 = w2.get_info("B")["components"]
    assert set(c1) == set(c2)
    for name in c1:
        assert abs(c1[name] - c2[name]) <= 1e-12


def test_tick_without_pending_only_moves_clock(world):
    world.create_container("A", {}, 0.1)
    world.tick(5.0)
    assert world.clock_s == 5.0


# ------------------------------------------------------------------- sample

def test_sample_splits_proportionally(world):
    world.create_container("A", {"NaCl": 0.02}, 0.2)
    world.sample("A", "S", 0.1)
    a, s = world.containers["A"], world.containers["S"]
    assert float(s.mixture.amounts["Na+"]) == pytest.approx(0.01)
    assert float(a.mixture.amounts["Na+"]) == pytest.approx(0.01)
    # same concentration either side of the split
    assert s.volume_l == pytest.approx(0.1)
    assert a.volume_l == pytest.approx(0.1)


def test_sample_everything_empties_source(world):
    world.create_container("A", {"NaCl": 0.02}, 0.2)
    world.sample("A", "S", 0.2)
    assert world.containers["A"].volume_l == 0.0
    assert world.containers["S"].volume_l == pytest.approx(0.2)


def test_sample_guards(world):
    world.create_container("A", {"NaCl": 0.02}, 0.2)
    with pytest.raises(ContainerError):
        world.sample("A", "S", 0.0)
    with pytest.raises(ContainerError):
        world.sample("A", "S", 0.3)


# ------------------------------------------------------------- conservation

def test_mass_ledger_across_operations(db):
    world = World(db)
    scenario(world)
    world.sample("B", "S", 0.02)
    world.pour("A", "B", 0.1)
    world.tick(60.0)

    def total(name):
        return sum(
            (c.mixture.amounts.get(name, Fraction(0)) for c in world.containers.values()),
            Fraction(0),
        )

    # potassium and chloride never react: conserved exactly
    assert total("K+") == Fraction(0.01)
    assert total("Cl-") == 2 * Fraction(0.05) + Fraction(0.08)
    # iron changes oxidation state but never leaves the bench
    iron = total("Fe^2+") + total("Fe^3+")
    assert float(iron) == pytest.approx(0.05)


def test_get_info_does_not_mutate(world):
    scenario(world)
    world.pour("A", "B", 0.1)
    first = json.dumps(world.get_info("B"), sort_keys=True)
    second = json.dumps(world.get_info("B"), sort_keys=True)
    assert first == second


# ------------------------------------------------------------ event history

def test_history_records_the_story(world):
    scenario(world)
    world.pour("A", "B", 0.1)
    world.tick(15.0)
    kinds = [e["event"] for e in world.history]
    assert kinds[:3] == ["create", "create", "pour"]
    assert "tick" in kinds
    assert all("clock_s" in e for e in world.history)


def test_replay_reconstructs_the_world(db):
    world = World(db)
    scenario(world)
    world.pour("A", "B", 0.1)
    world.tick(2.5)
    world.sample("B", "S", 0.05)
    world.tick(30.0)
    rebuilt = World.replay(world.history, db)
    assert rebuilt.snapshot() == world.snapshot()


def test_unknown_container_info(world):
    with pytest.raises(ContainerError) as exc:
        world.get_info("ghost")
    assert exc.value.code == "unknown_container"
