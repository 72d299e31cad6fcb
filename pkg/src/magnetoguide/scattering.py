"""Stationary scattering of a guided TE10 probe by a set of atoms.

The probe comes from a weak monochromatic point source far upstream.  Its
field, the field of every atom at a distant detector, and its drive on every
atom are all one TE10 propagator, ``guided_link``; evanescent tails are
negligible at the standoff distances used here.  Detuning ``delta`` is
counted from the m=-1 resonance, so sublevel m sees delta - (m + 1) dz.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .coupling import AtomSite, CouplingMatrix, CouplingOptions, build_sigma
from .geometry import GeometryError, WaveguideGeometry

DEFAULT_STANDOFF = 50.0
COND_LIMIT = 1e12
REGULARIZATION = 1e-9


def guided_link(geom: WaveguideGeometry, x1: float, z1: float, x2: float, z2: float) -> complex:
    """TE10 field of a sigma-sublevel emitter at (x1, z1) seen at (x2, z2).

    Equals the Sigma element between circular sublevels of two atoms joined
    only through TE10.
    """
    kappa = math.sqrt(1.0 - (math.pi / geom.ka) ** 2)
    amp = 1.5 * math.pi / (geom.ka * geom.kb * kappa)
    amp *= math.sin(math.pi * x1 / geom.ka) * math.sin(math.pi * x2 / geom.ka)
    return -1j * amp * np.exp(1j * kappa * abs(z1 - z2))


@dataclass(frozen=True)
class ProbeSpec:
    """Probe source and detector placement.

    ``None`` positions are resolved against the atom set: transverse
    coordinates default to the guide center, axial ones to ``standoff``
    beyond the sample on each side.
    """
    delta: float
    source_x: Optional[float] = None
    source_z: Optional[float] = None
    detector_x: Optional[float] = None
    standoff: float = DEFAULT_STANDOFF

    def resolve(self, geom: WaveguideGeometry, sites: Sequence[AtomSite]) -> "Placement":
        zs = [s.z for s in sites] or [0.0]
        zmin, zmax = min(zs), max(zs)
        sx = geom.ka / 2 if self.source_x is None else self.source_x
        dx = geom.ka / 2 if self.detector_x is None else self.detector_x
        sz = zmin - self.standoff if self.source_z is None else self.source_z
        if sz > zmin - self.standoff + 1e-9:
            raise GeometryError(
                f"source at z={sz} is closer than {self.standoff} to the sample")
        return Placement(sx, sz, dx, zmax + self.standoff, zmin - self.standoff)


@dataclass(frozen=True)
class Placement:
    source_x: float
    source_z: float
    detector_x: float
    transmit_z: float
    reflect_z: float


@dataclass
class StationarySolution:
    b: np.ndarray
    regularized: bool = False
    condition: float = 1.0


@dataclass
class TransportResult:
    t_amp: complex
    r_amp: complex
    T: float
    R: float
    regularized: bool = False

    @property
    def energy_error(self) -> float:
        return abs(abs(self.t_amp) ** 2 + abs(self.r_amp) ** 2 - 1.0)


def drive_vector(geom: WaveguideGeometry, sites: Sequence[AtomSite], probe: ProbeSpec) -> np.ndarray:
    pl = probe.resolve(geom, sites)
    f = np.zeros(3 * len(sites), dtype=complex)
    for i, s in enumerate(sites):
        a1 = guided_link(geom, pl.source_x, pl.source_z, s.x, s.z)
        f[3 * i] = a1
        f[3 * i + 2] = a1
    return f


def solve_stationary(cm: CouplingMatrix, dz: float, probe: ProbeSpec) -> StationarySolution:
    """Solve [(w_s - w_e) - Sigma] b = drive for the stationary amplitudes.

    Sublevels with an identically zero Sigma row and column and no drive
    carry b = 0 exactly and are dropped.  If the remaining kernel is nearly
    singular (a real pole, e.g. the dark state at dz = delta = 0), a small
    +i eps is added to the diagonal and the solution is flagged.
    """
    n = 3 * cm.n_atoms
    if n == 0:
        return StationarySolution(np.zeros(0, dtype=complex))
    f = drive_vector(cm.geom, cm.sites, probe)
    detuning = probe.delta - (cm.sublevel_m + 1) * dz
    sig = cm.sigma
    live = np.any(sig != 0, axis=0) | np.any(sig != 0, axis=1) | (f != 0)
    kern = np.diag(detuning).astype(complex) - sig
    kern = kern[np.ix_(live, live)]
    cond = float(np.linalg.cond(kern)) if kern.size else 1.0
    regularized = not cond <= COND_LIMIT
    if regularized:
        kern = kern + 1j * REGULARIZATION * np.eye(kern.shape[0])
    b = np.zeros(n, dtype=complex)
    if kern.size:
        b[live] = np.linalg.solve(kern, f[live])
    return StationarySolution(b, regularized, cond)


def _scattered(geom, sites, sol: StationarySolution, x: float, z: float) -> complex:
    total = 0j
    for i, s in enumerate(sites):
        total += guided_link(geom, s.x, s.z, x, z) * (sol.b[3 * i] + sol.b[3 * i + 2])
    return total


def transmitted_amplitude(geom: WaveguideGeometry, sites: Sequence[AtomSite],
                          sol: StationarySolution, probe: ProbeSpec,
                          detector_z: Optional[float] = None) -> complex:
    """Incident plus forward-scattered TE10 field behind the sample."""
    pl = probe.resolve(geom, sites)
    z = pl.transmit_z if detector_z is None else detector_z
    if sites and z < max(s.z for s in sites) + probe.standoff - 1e-9:
        raise GeometryError("transmission detector must sit beyond the sample")
    incident = guided_link(geom, pl.source_x, pl.source_z, pl.detector_x, z)
    return incident + _scattered(geom, sites, sol, pl.detector_x, z)


def reflected_amplitude(geom: WaveguideGeometry, sites: Sequence[AtomSite],
                        sol: StationarySolution, probe: ProbeSpec,
                        detector_z: Optional[float] = None) -> complex:
    """Backward-scattered TE10 field in front of the sample (no incident term)."""
    pl = probe.resolve(geom, sites)
    z = pl.reflect_z if detector_z is None else detector_z
    if sites and z > min(s.z for s in sites) - probe.standoff + 1e-9:
        raise GeometryError("reflection detector must sit before the sample")
    return _scattered(geom, sites, sol, pl.detector_x, z)


def transport(cm: CouplingMatrix, dz: float, delta: float, probe: Optional[ProbeSpec] = None) -> TransportResult:
    """Transmission and reflection of the TE10 probe.

    Amplitudes are normalized to the incident field at each detector plane.
    Only TE10 reaches the detectors, so averaging over the detector
    cross-section rescales both powers equally and drops out of T and R.
    """
    probe = ProbeSpec(delta) if probe is None else probe
    geom, sites = cm.geom, cm.sites
    sol = solve_stationary(cm, dz, probe)
    pl = probe.resolve(geom, sites)
    e_t = transmitted_amplitude(geom, sites, sol, probe, pl.transmit_z)
    e_r = reflected_amplitude(geom, sites, sol, probe, pl.reflect_z)
    t_amp = e_t / guided_link(geom, pl.source_x, pl.source_z, pl.detector_x, pl.transmit_z)
    r_amp = e_r / guided_link(geom, pl.source_x, pl.source_z, pl.detector_x, pl.reflect_z)
    pt, pr = abs(t_amp) ** 2, abs(r_amp) ** 2
    return TransportResult(complex(t_amp), complex(r_amp), pt / (pt + pr), pr / (pt + pr),
                           sol.regularized)


def transport_for_sites(geom: WaveguideGeometry, sites: Sequence[AtomSite], dz: float, delta: float,
                        opts: CouplingOptions = CouplingOptions()) -> TransportResult:
    return transport(build_sigma(geom, sites, opts), dz, delta)


def spectrum_scan(cm: CouplingMatrix, *, delta, dz) -> np.ndarray:
    """Transport over a grid of either ``delta`` or ``dz`` (the other fixed).

    Returns rows (scan value, T, R) in grid order.
    """
    d_arr, z_arr = np.atleast_1d(delta), np.atleast_1d(dz)
    if d_arr.size > 1 and z_arr.size > 1:
        raise ValueError("scan exactly one of delta and dz")
    if d_arr.size == 0 or z_arr.size == 0:
        raise ValueError("scan grid must be nonempty")
    if z_arr.size > 1 or (np.ndim(dz) > 0 and np.ndim(delta) == 0):
        grid = z_arr
        results = [transport(cm, float(v), float(d_arr[0])) for v in grid]
    else:
        grid = d_arr
        results = [transport(cm, float(z_arr[0]), float(v)) for v in grid]
    return np.array([(v, r.T, r.R) for v, r in zip(grid, results)])
