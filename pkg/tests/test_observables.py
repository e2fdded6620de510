import math
from types import SimpleNamespace

import pytest

from ionbench import (
    COLORLESS,
    Mixture,
    RGBA,
    SpectralPowerDistribution,
    UnresolvedMixtureError,
    WATER,
    blackbody_spd,
    concentration,
    enthalpy_total,
    kw_at,
    mix_colors,
    mixture_color,
    opacity,
    ph_of,
    spectrum_to_rgb,
    temperature_change,
)
from ionbench.observables import ObservableError, ph_from_strong_difference


# ----------------------------------------------------------- scalar formulas

def test_concentration():
    assert concentration(0.5, 2.0) == 0.25
    assert concentration(0.0, 1.0) == 0.0
    with pytest.raises(ObservableError):
        concentration(1.0, 0.0)
    with pytest.raises(ObservableError):
        concentration(-0.1, 1.0)


def test_enthalpy_total():
    assert enthalpy_total(1.0, -642.72) == -642.72
    assert enthalpy_total(0.0, -1000.0) == 0.0
    assert enthalpy_total(2.0, -55.93) == pytest.approx(-111.86)


def test_temperature_change_unit_case():
    # 4.18 kJ into one litre of water is exactly one kelvin
    assert temperature_change(4.18, 1.0) == pytest.approx(1.0)


def test_temperature_change_accepts_report_like_objects():
    fake = SimpleNamespace(total_heat_released_kj=4.18)
    assert temperature_change(fake, 1.0) == pytest.approx(1.0)
    assert temperature_change(SimpleNamespace(total_heat_released_kj=0.0), 1.0) == 0.0


def test_temperature_change_scenario_figure():
    # 6.4272 kJ released into 100 mL: 6427.2 / 418 K
    assert temperature_change(6.4272, 0.1) == pytest.approx(15.376076555023923)
    assert round(temperature_change(6.4272, 0.1), 2) == 15.38


def test_temperature_change_scaling():
    base = temperature_change(1.0, 1.0)
    assert temperature_change(3.0, 1.0) == pytest.approx(3 * base)
    assert temperature_change(1.0, 2.0) == pytest.approx(base / 2)


def test_opacity():
    assert opacity(0.0) == 0.0
    assert opacity(1.0, 1.0) == pytest.approx(0.9)
    assert opacity(0.5, 2.0) == pytest.approx(0.9)
    with pytest.raises(ObservableError):
        opacity(-1e-9)
    with pytest.raises(ObservableError):
        opacity(1.0, 0.0)


def test_opacity_monotone_and_bounded():
    values = [opacity(c) for c in (0.0, 0.01, 0.1, 1.0, 10.0)]
    assert values == sorted(values)
    assert all(0.0 <= v < 1.0 for v in values)


# -------------------------------------------------------------------- colour

def test_rgba_validation():
    with pytest.raises(ObservableError):
        RGBA(256, 0, 0, 0.5)
    with pytest.raises(ObservableError):
        RGBA(0, 0, 0, 1.5)
    assert COLORLESS.alpha == 0.0


def test_mix_single_entry_identity():
    purple = RGBA(128, 0, 128, 0.6)
    assert mix_colors([(purple, "aq")]) == purple


def test_mix_equal_colors_stack_alpha():
    purple = RGBA(128, 0, 128, 0.5)
    out = mix_colors([(purple, "aq"), (purple, "aq")])
    assert (out.r, out.g, out.b) == (128, 0, 128)
    assert out.alpha == pytest.approx(0.75)


def test_solid_turns_mixture_turbid():
    purple = RGBA(128, 0, 128, 0.6)
    white_precipitate = RGBA(255, 255, 255, 0.8)
    out = mix_colors([(purple, "aq"), (white_precipitate, "s")])
    assert (out.r, out.g, out.b) == (255, 255, 255)
    assert out.alpha == 1.0


def test_gases_do_not_tint():
    brown = RGBA(150, 75, 20, 0.9)
    out = mix_colors([(brown, "g")])
    assert out == COLORLESS


def test_mix_empty_is_colorless():
    assert mix_colors([]) == COLORLESS


def test_mix_order_invariant():
    entries = [
        (RGBA(128, 0, 128, 0.3), "aq"),
        (RGBA(255, 255, 153, 0.6), "aq"),
        (RGBA(0, 191, 255, 0.1), "aq"),
    ]
    forward = mix_colors(entries)
    backward = mix_colors(list(reversed(entries)))
    assert forward == backward


def test_colorless_entries_carry_no_weight():
    teal = RGBA(0, 128, 128, 0.4)
    out = mix_colors([(teal, "aq"), (COLORLESS, "aq")])
    assert (out.r, out.g, out.b) == (0, 128, 128)
    assert out.alpha == pytest.approx(0.4)


def test_mixture_color_from_database(db):
    m = Mixture({"MnO4-": 0.5, "K+": 0.5}, volume_l=1.0)
    shade = mixture_color(m, db)
    assert (shade.r, shade.g, shade.b) == (128, 0, 128)
    assert shade.alpha == pytest.approx(1 - 10 ** -0.5)


# ------------------------------------------------------------ spectra -> RGB

def test_spd_validation():
    with pytest.raises(ObservableError):
        SpectralPowerDistribution(((380.0, 1.0),))
    with pytest.raises(ObservableError):
        SpectralPowerDistribution(((380.0, 1.0), (380.0, 1.0)))
    with pytest.raises(ObservableError):
        SpectralPowerDistribution(((380.0, 1.0), (500.0, -0.1)))


def test_spectrum_must_cover_visible_band():
    spd = SpectralPowerDistribution(((400.0, 1.0), (700.0, 1.0)))
    with pytest.raises(ObservableError):
        spectrum_to_rgb(spd)


def test_flat_spectrum_is_near_white():
    flat = SpectralPowerDistribution(((380.0, 1.0), (780.0, 1.0)))
    r, g, b = spectrum_to_rgb(flat)
    assert max(r, g, b) - min(r, g, b) <= 8


def test_green_spike_is_green():
    spike = SpectralPowerDistribution(
        tuple(
            (w, 1.0 if 545 <= w <= 555 else 1e-9)
            for w in range(380, 781, 5)
        )
    )
    r, g, b = spectrum_to_rgb(spike)
    assert g > r and g > b


def test_blackbody_guards():
    with pytest.raises(ObservableError):
        blackbody_spd(0.0)
    with pytest.raises(ObservableError):
        blackbody_spd(-100.0)


def test_blackbody_shape_at_1000k():
    spd = blackbody_spd(1000.0)
    powers = [p for _, p in spd.samples]
    # far below Wien's peak, so emission keeps climbing across the band
    assert powers == sorted(powers)
    assert max(powers) == pytest.approx(1.0)
    assert blackbody_spd(1000.0).samples == spd.samples


def test_blackbody_matches_reference_triple():
    assert spectrum_to_rgb(blackbody_spd(1000.0)) == (255, 3, 0)


def test_rgb_scale_invariance():
    spd = blackbody_spd(1500.0)
    reference = spectrum_to_rgb(spd)
    for factor in (0.1, 10.0):
        assert spectrum_to_rgb(spd.scaled(factor)) == reference


# ------------------------------------------------------------------------ pH

def test_kw_at_nodes():
    assert -math.log10(kw_at(25.0)) == pytest.approx(14.00, abs=0.02)
    assert -math.log10(kw_at(0.0)) == pytest.approx(14.94, abs=0.02)
    assert kw_at(40.0) == pytest.approx(10 ** -13.535)
    with pytest.raises(ObservableError):
        kw_at(-1.0)
    with pytest.raises(ObservableError):
        kw_at(100.5)


def test_ph_strong_acid(db):
    state = ph_of(Mixture({"H+": 0.01, "Cl-": 0.01}, volume_l=1.0))
    assert state.ph == pytest.approx(2.00, abs=0.01)


def test_ph_pure_water(db):
    state = ph_of(Mixture({}, volume_l=1.0))
    assert state.ph == pytest.approx(7.00, abs=0.01)


def test_ph_strong_base(db):
    state = ph_of(Mixture({"Na+": 0.001, "OH-": 0.001}, volume_l=1.0))
    assert state.ph == pytest.approx(11.00, abs=0.01)


def test_ph_rejects_unneutralised_mixture(db):
    m = Mixture({"H+": 0.01, "OH-": 0.01}, volume_l=1.0)
    with pytest.raises(UnresolvedMixtureError):
        ph_of(m)


def test_ph_monotone_in_acid(db):
    weak = ph_of(Mixture({"H+": 0.01, "Cl-": 0.01}, volume_l=1.0))
    strong = ph_of(Mixture({"H+": 0.02, "Cl-": 0.02}, volume_l=1.0))
    assert strong.ph < weak.ph


def test_ultra_dilute_acid_stays_below_neutral():
    state = ph_from_strong_difference(1e-8, 25.0)
    assert 6.95 < state.ph < 7.00


def test_acid_base_symmetry():
    # c_h(+c) * c_h(-c) == Kw analytically, so the pH values mirror
    # around pKw/2; only float error in the quadratic separates them
    pkw = -math.log10(kw_at(25.0))
    acid = ph_from_strong_difference(0.001, 25.0)
    base = ph_from_strong_difference(-0.001, 25.0)
    assert acid.ph + base.ph == pytest.approx(pkw, abs=1e-8)


@pytest.mark.parametrize("temp", [0.0, 25.0, 50.0, 100.0])
@pytest.mark.parametrize("c_strong", [0.01, 1e-5, 0.0, -1e-4])
def test_ion_product_identity(temp, c_strong):
    state = ph_from_strong_difference(c_strong, temp)
    kw = kw_at(temp)
    assert state.hydrogen_mol_l * state.hydroxide_mol_l == pytest.approx(kw, rel=1e-6)
