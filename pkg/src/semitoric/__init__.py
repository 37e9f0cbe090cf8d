"""Toric and semitoric fans, their polygons, and the metric on semitoric ingredient lists."""

from .groupcore import GeneratorWord, LiftedElement, UniModMatrix, lift_fan_word, winding_number
from .moduli import (
    CapSequence,
    IngredientList,
    TruncatedSeries,
    connectivity_path,
    ingredient_distance,
    series_distance,
)
from .moves import ActT, Chop, CommuteFakeDelzant, RemoveHidden, Rotate, Unchop
from .oracle import EnumerationSpec, enumerate_solutions, geometric_equiv_check
from .polygeom import (
    Density,
    Marker,
    PrimitiveSemitoricPolygon,
    RationalPolygon,
    family_distance,
    fan_of_polygon,
    measure,
    move_polygon_family,
    polygon_realizing_fan,
    symmetric_difference_measure,
    vertical_shear,
)
from .render import render_svg
from .semitoricfan import SemitoricFan, apply_move, normalize, standard_fan, validate_semitoric
from .toricfan import ToricFan, classify_minimal, fulton_reduce, validate_toric

__all__ = [
    "ActT", "CapSequence", "Chop", "CommuteFakeDelzant", "Density", "EnumerationSpec", "GeneratorWord",
    "IngredientList", "LiftedElement", "Marker", "PrimitiveSemitoricPolygon", "RationalPolygon",
    "RemoveHidden", "Rotate", "SemitoricFan", "ToricFan", "TruncatedSeries", "Unchop", "UniModMatrix",
    "apply_move", "classify_minimal", "connectivity_path", "enumerate_solutions", "family_distance",
    "fan_of_polygon", "fulton_reduce", "geometric_equiv_check", "ingredient_distance", "lift_fan_word",
    "measure", "move_polygon_family", "normalize", "polygon_realizing_fan", "render_svg", "series_distance",
    "standard_fan", "symmetric_difference_measure", "validate_semitoric", "validate_toric", "vertical_shear",
    "winding_number",
]
