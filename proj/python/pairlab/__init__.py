"""Pairings between divergence-measure fields and BV functions on planar
scenes: exact clipped geometry, half-ball and cylindrical trace averages,
Gauss-Green ledgers, coarea checks and fat-Cantor constructions."""

from ._pairlab import (
    BV,
    Field,
    PairlabError,
    Schedule,
    Set,
    box_dimension,
    coarea_pairing,
    cyl_trace,
    gauss_green,
    halfball_traces,
    pairing_mass_on_ball,
    run_scenario,
    scenario_names,
    theta_density,
    __version__,
)

__all__ = [
    "BV",
    "Field",
    "PairlabError",
    "Schedule",
    "Set",
    "box_dimension",
    "coarea_pairing",
    "cyl_trace",
    "gauss_green",
    "halfball_traces",
    "pairing_mass_on_ball",
    "run_scenario",
    "scenario_names",
    "theta_density",
    "__version__",
]
