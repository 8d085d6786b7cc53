"""Closed-form traveling solutions, their residual check and the K(2,2) compound."""

from compactlab.closed_forms.compound import (
    composite_jumps,
    compose_compound,
    coupled_velocity,
    junction_jumps,
)
from compactlab.closed_forms.families import (
    FAMILY_FIELDS,
    FAMILY_NAMES,
    FamilyArgumentError,
    FamilyName,
    build_wave,
    family_equation,
)
from compactlab.closed_forms.residual import (
    ResidualReport,
    observed_orders,
    residual,
    residual_convergence,
)
from compactlab.closed_forms.waves import (
    TravelingWave,
    k22_compacton,
    k22_kak,
    k22_offset_compacton,
    kdv_soliton,
    knn_compacton,
    mkdv_exotic,
    mkdv_soliton,
    profile_csv,
    sample_grid,
    support_indicator,
)

__all__ = [
    "FAMILY_FIELDS",
    "FAMILY_NAMES",
    "FamilyArgumentError",
    "FamilyName",
    "ResidualReport",
    "TravelingWave",
    "build_wave",
    "composite_jumps",
    "compose_compound",
    "coupled_velocity",
    "family_equation",
    "junction_jumps",
    "k22_compacton",
    "k22_kak",
    "k22_offset_compacton",
    "kdv_soliton",
    "knn_compacton",
    "mkdv_exotic",
    "mkdv_soliton",
    "observed_orders",
    "profile_csv",
    "residual",
    "residual_convergence",
    "sample_grid",
    "support_indicator",
]
