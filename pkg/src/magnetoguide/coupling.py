"""Coupling matrix Sigma: radiative decay and photon exchange through the guide.

Sigma is stored in units of the free-space linewidth gamma0, atom-major, with
the three excited sublevels of each atom ordered (m=-1, 0, +1).  Element
(i e, j e') is conj(d_e) . G(r_i, r_j) . d_e', where G is the guided-mode
Green tensor of the perfectly conducting rectangular tube evaluated at the
bare transition frequency.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from .geometry import (DEFAULT_MAX_INDEX, GeometryError, GuidedMode,
                       TransversePoint, WaveguideGeometry, is_single_mode,
                       mode_profile, propagating_modes, transverse_norm)
from .kernel import pair_tensor

SUBLEVELS = (-1, 0, 1)

_S = 1 / math.sqrt(2)
# rows: spherical unit vectors for m = -1, 0, +1
DIPOLES = np.array([
    [_S, -1j * _S, 0.0],
    [0.0, 0.0, 1.0],
    [-_S, -1j * _S, 0.0],
])


class SeparationError(ValueError):
    """Two distinct atoms sit axially closer than the mode sum can resolve."""


def dipole(m: int) -> np.ndarray:
    return DIPOLES[SUBLEVELS.index(m)]


@dataclass(frozen=True)
class AtomSite:
    x: float
    y: float
    z: float

    @property
    def point(self) -> TransversePoint:
        return TransversePoint(self.x, self.y)


@dataclass(frozen=True)
class CouplingOptions:
    max_index: int = DEFAULT_MAX_INDEX
    min_axial_separation: float = 0.05
    evanescent_tol: float = 1e-12


@dataclass
class CouplingMatrix:
    sigma: np.ndarray
    sites: Tuple[AtomSite, ...]
    geom: WaveguideGeometry
    options: CouplingOptions = field(default_factory=CouplingOptions)

    @property
    def n_atoms(self) -> int:
        return len(self.sites)

    @property
    def sublevel_m(self) -> np.ndarray:
        return np.tile(SUBLEVELS, self.n_atoms)

    def decay_matrix(self) -> np.ndarray:
        """Gamma = i (Sigma - Sigma^dagger), Hermitian and positive semidefinite."""
        return 1j * (self.sigma - self.sigma.conj().T)


def gamma_prime(geom: WaveguideGeometry, x: float) -> float:
    """Decay rate of a circular sublevel into TE10 at transverse position x."""
    if not is_single_mode(geom):
        raise GeometryError("gamma_prime assumes a single propagating TE10 channel")
    if not 0.0 < x < geom.ka:
        raise GeometryError(f"x={x} outside (0, {geom.ka})")
    kappa = math.sqrt(1.0 - (math.pi / geom.ka) ** 2)
    return 3 * math.pi / (geom.ka * geom.kb * kappa) * math.sin(math.pi * x / geom.ka) ** 2


def _self_tensor(geom: WaveguideGeometry, p: TransversePoint, modes: Sequence[GuidedMode]) -> np.ndarray:
    # Both propagation directions averaged; evanescent modes only feed the
    # discarded Lamb shift.
    g = np.zeros((3, 3), dtype=complex)
    for mode in modes:
        kap = mode.axial.real
        u = mode_profile(mode, geom, p)
        nrm = transverse_norm(mode, geom)
        if mode.family == "TE":
            outer = np.outer(u, u)
        else:
            e = np.array([kap * u[0], kap * u[1], u[2]])
            outer = np.outer(e, e)
            outer[:2, 2] = 0.0
            outer[2, :2] = 0.0
        g += -1.5j * math.pi * outer / (kap * nrm)
    return g


def _project(g: np.ndarray) -> np.ndarray:
    return DIPOLES.conj() @ g @ DIPOLES.T


def site_block(geom: WaveguideGeometry, si: AtomSite, sj: AtomSite,
               opts: CouplingOptions = CouplingOptions(), modes=None) -> np.ndarray:
    """3x3 block of Sigma coupling the sublevels of ``si`` to those of ``sj``."""
    si.point.check_inside(geom)
    sj.point.check_inside(geom)
    if si == sj:
        if modes is None:
            modes = propagating_modes(geom)
        return _project(_self_tensor(geom, si.point, modes))
    if abs(si.z - sj.z) < opts.min_axial_separation:
        raise SeparationError(
            f"axial separation {abs(si.z - sj.z):.3g} below "
            f"{opts.min_axial_separation}")
    g = pair_tensor(geom.ka, geom.kb, si.x, si.y, si.z, sj.x, sj.y, sj.z,
                    opts.max_index, opts.evanescent_tol)
    return _project(g)


def sigma_element(geom: WaveguideGeometry, si: AtomSite, e: int, sj: AtomSite, e2: int,
                  opts: CouplingOptions = CouplingOptions()) -> complex:
    block = site_block(geom, si, sj, opts)
    return complex(block[SUBLEVELS.index(e), SUBLEVELS.index(e2)])


def build_sigma(geom: WaveguideGeometry, sites: Sequence[AtomSite],
                opts: CouplingOptions = CouplingOptions()) -> CouplingMatrix:
    """Assemble the full 3N x 3N coupling matrix.

    Only the upper triangle of inter-atomic blocks is summed; the lower one
    follows from reciprocity, G(r_j, r_i) = G(r_i, r_j)^T.
    """
    sites = tuple(sites)
    n = len(sites)
    for s in sites:
        s.point.check_inside(geom)
    zs = sorted(s.z for s in sites)
    for a, b in zip(zs, zs[1:]):
        if b - a < opts.min_axial_separation:
            raise SeparationError(f"axial separation {b - a:.3g} below {opts.min_axial_separation}")

    modes = propagating_modes(geom)
    sigma = np.zeros((3 * n, 3 * n), dtype=complex)
    for i, si in enumerate(sites):
        sigma[3 * i:3 * i + 3, 3 * i:3 * i + 3] = _project(_self_tensor(geom, si.point, modes))
        for j in range(i + 1, n):
            sj = sites[j]
            g = pair_tensor(geom.ka, geom.kb, si.x, si.y, si.z, sj.x, sj.y, sj.z,
                            opts.max_index, opts.evanescent_tol)
            sigma[3 * i:3 * i + 3, 3 * j:3 * j + 3] = _project(g)
            sigma[3 * j:3 * j + 3, 3 * i:3 * i + 3] = _project(g.T)
    return CouplingMatrix(sigma, sites, geom, opts)


def guided_decay_rate(geom: WaveguideGeometry, p: TransversePoint, d: np.ndarray) -> float:
    """Total rate (gamma0 units) into all propagating modes for dipole vector ``d``."""
    g = _self_tensor(geom, p, propagating_modes(geom))
    d = np.asarray(d, dtype=complex)
    return float(-2 * (d.conj() @ g @ d).imag)


def calibrate_normalization(geom: WaveguideGeometry) -> float:
    """Ratio of the mode-sum TE10 self-term to the closed-form gamma_prime.

    The mode-sum prefactor 3*pi/2 needs no rescaling, so this is 1 up to
    rounding; kept as an explicit consistency check.
    """
    p = geom.center
    te10 = GuidedMode.make("TE", 1, 0, geom)
    block = _project(_self_tensor(geom, p, [te10]))
    return float(-2 * block[0, 0].imag / gamma_prime(geom, p.x))


def write_sigma_csv(cm: CouplingMatrix, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["row", "col", "re", "im"])
        for (r, c), v in np.ndenumerate(cm.sigma):
            w.writerow([r, c, repr(float(v.real)), repr(float(v.imag))])
