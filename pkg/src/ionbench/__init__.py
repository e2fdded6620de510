"""ionbench: deterministic inorganic solution chemistry.

An ordered reaction database drives exact stoichiometric resolution of
ion mixtures; observables (heat, temperature, pH, colour, opacity,
spectra), first-order display kinetics, stateful containers, a recipe
script language, a CLI and an HTTP service sit on top.
"""
from .chemdb import (
    ChemicalSpecies,
    DatabaseError,
    Reaction,
    ReactionDatabase,
    UnknownSpeciesError,
    load_bundled_database,
    load_database,
    load_dissociation_table,
    reaction_enthalpy,
    validate_reaction,
)
from .container import (
    Container,
    ContainerError,
    PourOutcome,
    World,
    WorldConfig,
)
from .engine import (
    PRESENCE_THRESHOLD,
    EngineError,
    ImbalancedMixtureError,
    Mixture,
    NonTerminationError,
    ResolutionReport,
    ResolutionStep,
    apply_reaction,
    extract_reacting,
    find_applicable,
    net_charge,
    reaction_quantity,
    resolve,
)
from .formula import FormulaError, parse_formula
from .kinetics import (
    ObservableSnapshot,
    TrajectoryPoint,
    trajectory,
    trajectory_with_observables,
    write_trajectory_csv,
)
from .observables import (
    COLORLESS,
    RGBA,
    WATER,
    AcidBaseState,
    SolventParams,
    SpectralPowerDistribution,
    UnresolvedMixtureError,
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
from .recipe import (
    ExecutionReport,
    Recipe,
    RecipeSyntaxError,
    execute,
    format_recipe,
    parse_recipe,
)

__version__ = "0.1.0"
