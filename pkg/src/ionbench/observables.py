"""Macroscopic observables of a resolved mixture.

Covers reaction heat and temperature rise, acid/base state from the
strong-ion difference, per-species opacity, subtractive colour mixing,
and reduction of spectral power distributions to display RGB.

Units: mol, L, kJ, degrees C unless a name says otherwise.  Colour
channels are 0-255 ints; alpha is 0-1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .chemdb import ReactionDatabase
    from .engine import Mixture

__all__ = [
    "SolventParams",
    "WATER",
    "RGBA",
    "COLORLESS",
    "AcidBaseState",
    "SpectralPowerDistribution",
    "ObservableError",
    "UnresolvedMixtureError",
    "concentration",
    "enthalpy_total",
    "temperature_change",
    "opacity",
    "mix_colors",
    "mixture_color",
    "kw_at",
    "ph_of",
    "ph_from_strong_difference",
    "blackbody_spd",
    "spectrum_to_rgb",
]


class ObservableError(ValueError):
    pass


class UnresolvedMixtureError(ObservableError):
    """pH was requested while both H+ and OH- remain above threshold."""


@dataclass(frozen=True)
class SolventParams:
    specific_heat_j_g_k: float
    density_g_l: float


WATER = SolventParams(specific_heat_j_g_k=4.18, density_g_l=1000.0)


def concentration(amount_mol: float, volume_l: float) -> float:
    """Molar concentration (mol/L)."""
    if volume_l <= 0:
        raise ObservableError("volume must be > 0")
    if amount_mol < 0:
        raise ObservableError("amount must be >= 0")
    return amount_mol / volume_l


def enthalpy_total(quantity_mol: float, enthalpy_kj_mol: float) -> float:
    """Reaction enthalpy for an extent of ``quantity_mol`` equations (kJ)."""
    return quantity_mol * enthalpy_kj_mol


def temperature_change(
    heat_released_kj: float,
    volume_l: float,
    solvent: SolventParams = WATER,
) -> float:
    """Temperature rise (K) of ``volume_l`` of solvent absorbing the heat.

    Accepts a plain kJ figure or any object exposing
    ``total_heat_released_kj`` (e.g. a resolution report).
    """
    heat = getattr(heat_released_kj, "total_heat_released_kj", heat_released_kj)
    if volume_l <= 0:
        raise ObservableError("volume must be > 0")
    mass_g = solvent.density_g_l * volume_l
    return heat * 1000.0 / (solvent.specific_heat_j_g_k * mass_g)


def opacity(concentration_mol_l: float, opacity_constant: float = 1.0) -> float:
    """Absorbance-style opacity in [0, 1): a = 1 - 10^(-K c)."""
    if concentration_mol_l < 0:
        raise ObservableError("concentration must be >= 0")
    if opacity_constant <= 0:
        raise ObservableError("opacity constant must be > 0")
    return 1.0 - 10.0 ** (-opacity_constant * concentration_mol_l)


@dataclass(frozen=True)
class RGBA:
    r: int
    g: int
    b: int
    alpha: float

    def __post_init__(self) -> None:
        for channel in (self.r, self.g, self.b):
            if not isinstance(channel, int) or not 0 <= channel <= 255:
                raise ObservableError(f"bad colour channel {channel!r}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ObservableError(f"bad alpha {self.alpha!r}")

    def css(self) -> str:
        return f"rgba({self.r},{self.g},{self.b},{self.alpha:.4f})"


COLORLESS = RGBA(255, 255, 255, 0.0)


def mix_colors(entries: Iterable[tuple[RGBA, str]]) -> RGBA:
    """Subtractive mixing of per-species colour contributions.

    Gases never tint the solution and are dropped.  Any visible solid
    makes the mixture turbid: the result is the opacity-weighted
    subtractive average of the solid colours at full alpha.  Otherwise
    dissolved/liquid colours mix subtractively (channel deficits from
    white add in proportion to opacity) and transparencies multiply.
    """
    condensed = [(c, s) for c, s in entries if s != "g"]
    solids = [c for c, s in condensed if s == "s" and c.alpha > 0]
    if solids:
        pool = solids
        total = sum(c.alpha for c in pool)
        forced_alpha = 1.0
    else:
        pool = [c for c, s in condensed if c.alpha > 0]
        if not pool:
            return COLORLESS
        total = sum(c.alpha for c in pool)
        forced_alpha = None
    channels = []
    for pick in ("r", "g", "b"):
        deficit = sum(
            (c.alpha / total) * (255 - getattr(c, pick)) for c in pool
        )
        channels.append(int(round(255 - deficit)))
    if forced_alpha is not None:
        alpha = forced_alpha
    else:
        transparency = 1.0
        for c, s in condensed:
            transparency *= 1.0 - c.alpha
        alpha = 1.0 - transparency
    return RGBA(channels[0], channels[1], channels[2], alpha)


def mixture_color(mixture: "Mixture", db: "ReactionDatabase") -> RGBA:
    """Colour of a mixture from its coloured species and concentrations."""
    if mixture.volume_l <= 0:
        raise ObservableError("volume must be > 0")
    entries: list[tuple[RGBA, str]] = []
    for name, amount in mixture.amounts.items():
        spec = db.species_named(name)
        if spec.color_rgb is None:
            continue
        conc = concentration(float(amount), mixture.volume_l)
        a = opacity(conc, spec.opacity_constant)
        r, g, b = spec.color_rgb
        entries.append((RGBA(r, g, b, a), spec.state))
    return mix_colors(entries)


# --- water ion product ------------------------------------------------------

_KW_NODES: tuple[np.ndarray, np.ndarray] | None = None


def _kw_table() -> tuple[np.ndarray, np.ndarray]:
    global _KW_NODES
    if _KW_NODES is None:
        text = (
            resources.files("ionbench")
            .joinpath("data", "kw_table.csv")
            .read_text("utf-8")
        )
        rows = [line.split(",") for line in text.strip().splitlines()[1:]]
        temps = np.array([float(r[0]) for r in rows])
        pkws = np.array([float(r[1]) for r in rows])
        _KW_NODES = (temps, pkws)
    return _KW_NODES


def kw_at(temperature_c: float) -> float:
    """Ion product of water at ``temperature_c`` (0-100 C, interpolated)."""
    temps, pkws = _kw_table()
    if not temps[0] <= temperature_c <= temps[-1]:
        raise ObservableError(
            f"temperature {temperature_c} C outside tabulated range "
            f"[{temps[0]:g}, {temps[-1]:g}]"
        )
    pkw = float(np.interp(temperature_c, temps, pkws))
    return 10.0 ** (-pkw)


@dataclass(frozen=True)
class AcidBaseState:
    ph: float
    hydrogen_mol_l: float
    hydroxide_mol_l: float
    kw: float


def ph_from_strong_difference(
    strong_acid_mol_l: float, temperature_c: float
) -> AcidBaseState:
    """Acid/base state from the net strong-ion concentration difference.

    ``strong_acid_mol_l`` is (free H+ minus free OH-) per litre; either
    sign is fine.  Water autoionisation is included through the
    temperature-dependent ion product, so dilute solutions approach the
    neutral point rather than an unbounded pH.
    """
    kw = kw_at(temperature_c)
    c = strong_acid_mol_l
    c_h = (c + math.sqrt(c * c + 4.0 * kw)) / 2.0
    c_oh = kw / c_h
    return AcidBaseState(
        ph=-math.log10(c_h), hydrogen_mol_l=c_h, hydroxide_mol_l=c_oh, kw=kw
    )


def ph_of(mixture: "Mixture", temperature_c: float | None = None) -> AcidBaseState:
    """Acid/base state of a resolved mixture.

    Requires resolution to have finished: a mixture still holding both
    H+ and OH- above the presence threshold is rejected, since those
    amounts are about to neutralise and any pH read from them would be
    transient.
    """
    from .engine import PRESENCE_THRESHOLD  # local import avoids a cycle

    n_h = mixture.amount("H+")
    n_oh = mixture.amount("OH-")
    if n_h > PRESENCE_THRESHOLD and n_oh > PRESENCE_THRESHOLD:
        raise UnresolvedMixtureError(
            "mixture holds both H+ and OH- above threshold; resolve it first"
        )
    if mixture.volume_l <= 0:
        raise ObservableError("volume must be > 0")
    t = mixture.temperature_c if temperature_c is None else temperature_c
    c = (float(n_h) - float(n_oh)) / mixture.volume_l
    return ph_from_strong_difference(c, t)


# --- spectra ----------------------------------------------------------------


@dataclass(frozen=True)
class SpectralPowerDistribution:
    """Spectral samples as (wavelength nm, relative power) pairs."""

    samples: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        samples = tuple((float(w), float(p)) for w, p in self.samples)
        if len(samples) < 2:
            raise ObservableError("need at least two spectral samples")
        wavelengths = [w for w, _ in samples]
        if any(b <= a for a, b in zip(wavelengths, wavelengths[1:])):
            raise ObservableError("wavelengths must be strictly increasing")
        for w, p in samples:
            if not (math.isfinite(w) and math.isfinite(p)) or p < 0:
                raise ObservableError(f"bad spectral sample ({w}, {p})")
        object.__setattr__(self, "samples", samples)

    @property
    def wavelengths_nm(self) -> tuple[float, ...]:
        return tuple(w for w, _ in self.samples)

    @property
    def powers(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.samples)

    def scaled(self, factor: float) -> "SpectralPowerDistribution":
        if factor <= 0:
            raise ObservableError("scale factor must be > 0")
        return SpectralPowerDistribution(
            tuple((w, p * factor) for w, p in self.samples)
        )


_VISIBLE_NM = (380.0, 780.0)

# Second radiation constant, CODATA: c2 = h c / k_B in m K.
_C2_M_K = 1.438776877e-2


def blackbody_spd(
    temperature_k: float, *, step_nm: float = 5.0
) -> SpectralPowerDistribution:
    """Planck thermal emission over the visible band, peak-normalised."""
    if temperature_k <= 0:
        raise ObservableError("temperature must be > 0 K")
    if step_nm <= 0:
        raise ObservableError("step must be > 0 nm")
    count = int(round((_VISIBLE_NM[1] - _VISIBLE_NM[0]) / step_nm)) + 1
    wavelengths = [_VISIBLE_NM[0] + i * step_nm for i in range(count)]
    powers = []
    for w in wavelengths:
        lam = w * 1e-9
        powers.append(lam**-5 / math.expm1(_C2_M_K / (lam * temperature_k)))
    peak = max(powers)
    return SpectralPowerDistribution(
        tuple((w, p / peak) for w, p in zip(wavelengths, powers))
    )


_CMF: np.ndarray | None = None


def _cmf_table() -> np.ndarray:
    global _CMF
    if _CMF is None:
        text = (
            resources.files("ionbench")
            .joinpath("data", "cie1931_cmf_5nm.csv")
            .read_text("utf-8")
        )
        rows = [
            [float(v) for v in line.split(",")]
            for line in text.strip().splitlines()[1:]
        ]
        _CMF = np.array(rows)
    return _CMF


def _xyz_to_rgb_matrix() -> np.ndarray:
    # sRGB primary chromaticities balanced for an equal-energy white, so a
    # flat spectrum maps to pure white.
    xy = np.array([[0.64, 0.33], [0.30, 0.60], [0.15, 0.06]])
    primaries = np.column_stack(
        [
            np.array([x / y, 1.0, (1.0 - x - y) / y])
            for x, y in xy
        ]
    )
    white = np.array([1.0, 1.0, 1.0])
    scale = np.linalg.solve(primaries, white)
    return np.linalg.inv(primaries * scale)


_XYZ_TO_RGB = _xyz_to_rgb_matrix()


def spectrum_to_rgb(spd: SpectralPowerDistribution) -> tuple[int, int, int]:
    """Reduce a spectrum covering 380-780 nm to a display RGB triple.

    Tristimulus integration against the CIE 1931 2-degree observer,
    linear RGB via the matrix above, negative (out-of-gamut) channels
    clipped, then scaled so the strongest channel saturates.  The output
    is invariant under uniform scaling of the input power.
    """
    wavelengths = np.array(spd.wavelengths_nm)
    if wavelengths[0] > _VISIBLE_NM[0] or wavelengths[-1] < _VISIBLE_NM[1]:
        raise ObservableError(
            "spectrum must cover the 380-780 nm visible band"
        )
    cmf = _cmf_table()
    grid = cmf[:, 0]
    power = np.interp(grid, wavelengths, np.array(spd.powers))
    xyz = np.array(
        [float(np.trapezoid(power * cmf[:, k], grid)) for k in (1, 2, 3)]
    )
    linear = _XYZ_TO_RGB @ xyz
    linear = np.clip(linear, 0.0, None)
    peak = float(linear.max())
    if peak <= 0.0:
        return (0, 0, 0)
    scaled = linear / peak * 255.0
    r, g, b = (int(round(float(v))) for v in scaled)
    return (r, g, b)
