"""Simulator of magneto-optical effects for J=0-1 atoms in a rectangular waveguide."""
from .geometry import (GeometryError, GuidedMode, TransversePoint,
                       WaveguideGeometry, enumerate_modes, is_single_mode,
                       mode_profile)
from .kernel import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "GeometryError",
    "GuidedMode",
    "TransversePoint",
    "WaveguideGeometry",
    "enumerate_modes",
    "is_single_mode",
    "mode_profile",
]
