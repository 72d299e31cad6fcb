"""Rectangular waveguide cross-section and its TE/TM guided modes.

All lengths are premultiplied by the free-atom wavenumber k0, so a guide
with ``ka=4`` is 4/k0 wide.  Axial constants are likewise in units of k0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List

import numpy as np

DEFAULT_MAX_INDEX = 60


class GeometryError(ValueError):
    """Raised for points outside the guide or geometries a formula cannot use."""


@dataclass(frozen=True)
class WaveguideGeometry:
    ka: float
    kb: float

    def __post_init__(self):
        if not (math.isfinite(self.ka) and math.isfinite(self.kb)):
            raise GeometryError("guide sizes must be finite")
        if self.ka <= 0 or self.kb <= 0:
            raise GeometryError(f"guide sizes must be positive, got ({self.ka}, {self.kb})")
        if self.ka < self.kb:
            raise GeometryError("convention: the wide side lies along x (ka >= kb)")

    @property
    def center(self) -> "TransversePoint":
        return TransversePoint(self.ka / 2, self.kb / 2)

    def contains(self, x: float, y: float) -> bool:
        return 0.0 < x < self.ka and 0.0 < y < self.kb


@dataclass(frozen=True)
class TransversePoint:
    x: float
    y: float

    def check_inside(self, geom: WaveguideGeometry) -> None:
        if not geom.contains(self.x, self.y):
            raise GeometryError(
                f"point ({self.x}, {self.y}) is not strictly inside the "
                f"{geom.ka} x {geom.kb} cross-section")


def axial_constant(cutoff: float) -> complex:
    """Principal branch of sqrt(1 - cutoff**2): real above cutoff, +i|.| below."""
    d = 1.0 - cutoff * cutoff
    if d >= 0:
        return complex(math.sqrt(d), 0.0)
    return complex(0.0, math.sqrt(-d))


@dataclass(frozen=True)
class GuidedMode:
    family: str
    m: int
    n: int
    cutoff: float
    axial: complex

    @classmethod
    def make(cls, family: str, m: int, n: int, geom: WaveguideGeometry) -> "GuidedMode":
        if family == "TE":
            if m < 0 or n < 0 or (m == 0 and n == 0):
                raise GeometryError(f"TE_{m}{n} does not exist")
        elif family == "TM":
            if m < 1 or n < 1:
                raise GeometryError(f"TM_{m}{n} does not exist")
        else:
            raise GeometryError(f"unknown mode family {family!r}")
        cutoff = math.hypot(m * math.pi / geom.ka, n * math.pi / geom.kb)
        return cls(family, m, n, cutoff, axial_constant(cutoff))

    @property
    def propagating(self) -> bool:
        return self.cutoff < 1.0

    @property
    def label(self) -> str:
        return f"{self.family}{self.m}{self.n}"


def enumerate_modes(geom: WaveguideGeometry, max_index: int = DEFAULT_MAX_INDEX) -> List[GuidedMode]:
    """All TE and TM modes with m, n <= max_index, sorted by cutoff.

    Ties are broken by (family, m, n) so the ordering is deterministic.
    """
    if max_index < 1:
        raise GeometryError("max_index must be >= 1")
    modes = []
    for m in range(max_index + 1):
        for n in range(max_index + 1):
            if m or n:
                modes.append(GuidedMode.make("TE", m, n, geom))
            if m and n:
                modes.append(GuidedMode.make("TM", m, n, geom))
    modes.sort(key=lambda md: (md.cutoff, md.family, md.m, md.n))
    return modes


def propagating_modes(geom: WaveguideGeometry) -> List[GuidedMode]:
    # cutoff < 1 bounds both indices by ka/pi
    top = int(geom.ka / math.pi) + 1
    return [md for md in enumerate_modes(geom, max(top, 1)) if md.propagating]


def is_single_mode(geom: WaveguideGeometry) -> bool:
    """True iff exactly one mode propagates at the atomic frequency."""
    return len(propagating_modes(geom)) == 1


def mode_profile(mode: GuidedMode, geom: WaveguideGeometry, p: TransversePoint) -> np.ndarray:
    """Real, unnormalized (Ex, Ey, Ez) profile of ``mode`` at ``p``.

    TM modes return the gradient of sin*sin for the transverse part and
    cutoff**2 * sin*sin for Ez.  The physical Ez of a travelling TM wave
    carries an extra phase that depends on direction; the coupling module
    applies it.
    """
    p.check_inside(geom)
    km = mode.m * math.pi / geom.ka
    kn = mode.n * math.pi / geom.kb
    cx, sx = math.cos(km * p.x), math.sin(km * p.x)
    cy, sy = math.cos(kn * p.y), math.sin(kn * p.y)
    if mode.family == "TE":
        return np.array([kn * cx * sy, -km * sx * cy, 0.0])
    return np.array([km * cx * sy, kn * sx * cy, mode.cutoff ** 2 * sx * sy])


def transverse_norm(mode: GuidedMode, geom: WaveguideGeometry) -> float:
    """Integral of |E_t|^2 over the cross-section for the profile above."""
    km = mode.m * math.pi / geom.ka
    kn = mode.n * math.pi / geom.kb
    if mode.family == "TM":
        return mode.cutoff ** 2 * geom.ka * geom.kb / 4
    # cos^2 integrates to the full length when the index is zero, sin^2 to 0
    ix_cos = geom.ka if mode.m == 0 else geom.ka / 2
    ix_sin = 0.0 if mode.m == 0 else geom.ka / 2
    iy_cos = geom.kb if mode.n == 0 else geom.kb / 2
    iy_sin = 0.0 if mode.n == 0 else geom.kb / 2
    return kn * kn * ix_cos * iy_sin + km * km * ix_sin * iy_cos
