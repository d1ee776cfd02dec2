"""Simulator and optimization toolkit for surface-assisted interference networks.

Layers, lowest first: model (geometry, radio constants, quantized phase
configurations), channel (fading draws, CSI corruption, scoped views),
metrics (effective gains, rates, scores, outage), search (local descent and
the filled-function global search), baselines (brute force, refinement
sweeps, GA, multistart), bounds (minimum element counts), harness (Monte
Carlo runner and CSV emission), presets (named scenarios), cli.
"""

from .baselines import (
    brute_force,
    genetic,
    modified_sr,
    random_config,
    simplified_exhaustive,
    successive_refinement,
)
from .bounds import (
    BoundResult,
    SymmetricScenario,
    min_elements_centralized,
    min_elements_distributed,
    q_function,
    q_inverse,
)
from .channel import (
    ChannelSet,
    CsiView,
    FadingSpec,
    corrupt,
    generate,
    perfect_view,
    restrict,
    substream,
)
from .harness import Layout, MethodSpec, ResultRow, Scenario, placement_sweep, run, write_csv
from .metrics import EffectiveGains, RateReport, outage_capacity, rates, score
from .model import PhaseConfig, Position, RadioParams, SurfaceSpec, Topology
from .presets import load_scenario, preset, preset_names
from .search import (
    OptResult,
    SearchBudget,
    complexity_bound,
    filled_value,
    global_search,
    local_search,
    optimize_distributed,
)

__version__ = "0.1.0"

__all__ = [
    "BoundResult",
    "ChannelSet",
    "CsiView",
    "EffectiveGains",
    "FadingSpec",
    "Layout",
    "MethodSpec",
    "OptResult",
    "PhaseConfig",
    "Position",
    "RadioParams",
    "RateReport",
    "ResultRow",
    "Scenario",
    "SearchBudget",
    "SurfaceSpec",
    "SymmetricScenario",
    "Topology",
    "brute_force",
    "complexity_bound",
    "corrupt",
    "filled_value",
    "generate",
    "genetic",
    "global_search",
    "load_scenario",
    "local_search",
    "min_elements_centralized",
    "min_elements_distributed",
    "modified_sr",
    "optimize_distributed",
    "outage_capacity",
    "perfect_view",
    "placement_sweep",
    "preset",
    "preset_names",
    "q_function",
    "q_inverse",
    "random_config",
    "rates",
    "restrict",
    "run",
    "score",
    "simplified_exhaustive",
    "substream",
    "successive_refinement",
    "write_csv",
]
