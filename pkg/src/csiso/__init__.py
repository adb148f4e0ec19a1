"""Composition-series-preserving automorphisms and isomorphisms of finite groups given by Cayley tables."""

from .cayley import CayleyGroup, GroupError, GroupHom, Subgroup, make_subgroup
from .kernels import BACKEND
from .permgroup import EngineContractError, PermGroup, SolvableWitness, WitnessError
from .series import (
    IsoResult,
    SeriesSpec,
    bottom_up_auto,
    characteristic_refinement,
    characteristic_series,
    comp_series_iso,
    enumerate_composition_series,
    first_composition_series,
    full_iso,
    series_from_sets,
    top_down_auto,
    validate_series,
)
from .setstab import set_stabilizer, set_transporter

__all__ = [
    "BACKEND",
    "CayleyGroup",
    "EngineContractError",
    "GroupError",
    "GroupHom",
    "IsoResult",
    "PermGroup",
    "SeriesSpec",
    "SolvableWitness",
    "Subgroup",
    "WitnessError",
    "bottom_up_auto",
    "characteristic_refinement",
    "characteristic_series",
    "comp_series_iso",
    "enumerate_composition_series",
    "first_composition_series",
    "full_iso",
    "make_subgroup",
    "series_from_sets",
    "set_stabilizer",
    "set_transporter",
    "top_down_auto",
    "validate_series",
]
