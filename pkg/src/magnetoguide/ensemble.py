"""Random atomic ensembles and configuration-averaged transport."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .coupling import AtomSite, CouplingMatrix, CouplingOptions, build_sigma
from .geometry import WaveguideGeometry
from .scattering import transport

MAX_ATTEMPTS = 1000


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class EnsembleSpec:
    """Uniform random sample of atoms filling a slab of the guide.

    ``density`` is n * lambdabar**3, ``length`` is k0 * L.  ``n_atoms``
    overrides the count implied by density (1 gives single-atom averaging).
    """
    density: float = 2e-3
    length: float = 750.0
    n_configs: int = 1
    seed: int = 0
    min_axial_sep: float = 0.05
    n_atoms: Optional[int] = None

    def __post_init__(self):
        if self.n_configs < 1:
            raise ValueError("n_configs must be >= 1")
        if self.length <= 0 or self.density < 0:
            raise ValueError("length must be positive and density nonnegative")

    def atom_count(self, geom: WaveguideGeometry) -> int:
        if self.n_atoms is not None:
            n = self.n_atoms
        else:
            n = int(round(self.density * geom.ka * geom.kb * self.length))
        if n < 1:
            raise ValueError("ensemble must contain at least one atom")
        return n


def config_rng(seed: int, index: int) -> np.random.Generator:
    # one independent stream per configuration, whatever the evaluation order
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def sample_sites(spec: EnsembleSpec, geom: WaveguideGeometry, index: int) -> List[AtomSite]:
    n = spec.atom_count(geom)
    rng = config_rng(spec.seed, index)
    for _ in range(MAX_ATTEMPTS):
        pts = rng.random((n, 3))
        # open interval: a zero draw would put the atom on a wall
        if np.any(pts[:, :2] == 0.0):
            continue
        pts *= (geom.ka, geom.kb, spec.length)
        zs = np.sort(pts[:, 2])
        if n == 1 or np.diff(zs).min() >= spec.min_axial_sep:
            order = np.argsort(pts[:, 2], kind="stable")
            return [AtomSite(float(x), float(y), float(z)) for x, y, z in pts[order]]
    raise SamplingError(
        f"no configuration with axial spacing >= {spec.min_axial_sep} "
        f"after {MAX_ATTEMPTS} attempts")


def config_coupling(spec: EnsembleSpec, geom: WaveguideGeometry, index: int) -> CouplingMatrix:
    opts = CouplingOptions(min_axial_separation=spec.min_axial_sep)
    return build_sigma(geom, sample_sites(spec, geom, index), opts)


@dataclass
class AveragedScan:
    grid: np.ndarray
    T_mean: np.ndarray
    T_stderr: np.ndarray
    R_mean: np.ndarray
    per_config_T: np.ndarray
    max_energy_error: float
    max_regularized_energy_error: float
    regularized: int


def averaged_scan(spec: EnsembleSpec, geom: WaveguideGeometry, *, delta, dz) -> AveragedScan:
    """Configuration-averaged T and R over a scan of ``dz`` or ``delta``.

    Sigma is built once per configuration and reused along the scan.
    Reduction runs in configuration-index order.
    """
    d_arr, z_arr = np.atleast_1d(np.asarray(delta, float)), np.atleast_1d(np.asarray(dz, float))
    if d_arr.size > 1 and z_arr.size > 1:
        raise ValueError("scan exactly one of delta and dz")
    scan_dz = z_arr.size > 1 or (np.ndim(dz) > 0 and np.ndim(delta) == 0)
    grid = z_arr if scan_dz else d_arr
    if grid.size == 0:
        raise ValueError("scan grid must be nonempty")
    ts = np.empty((spec.n_configs, grid.size))
    rs = np.empty_like(ts)
    worst, worst_reg, nreg = 0.0, 0.0, 0
    for k in range(spec.n_configs):
        cm = config_coupling(spec, geom, k)
        for j, v in enumerate(grid):
            if scan_dz:
                res = transport(cm, float(v), float(d_arr[0]))
            else:
                res = transport(cm, float(z_arr[0]), float(v))
            ts[k, j], rs[k, j] = res.T, res.R
            if res.regularized:
                worst_reg = max(worst_reg, res.energy_error)
                nreg += 1
            else:
                worst = max(worst, res.energy_error)
    if spec.n_configs > 1:
        stderr = ts.std(axis=0, ddof=1) / np.sqrt(spec.n_configs)
    else:
        stderr = np.zeros(grid.size)
    return AveragedScan(grid, ts.mean(axis=0), stderr, rs.mean(axis=0), ts, worst, worst_reg, nreg)


def averaged_transport(spec: EnsembleSpec, geom: WaveguideGeometry, dz: float, delta: float):
    """(T_mean, T_stderr, R_mean) at a single field and detuning."""
    scan = averaged_scan(spec, geom, delta=delta, dz=np.array([dz]))
    return float(scan.T_mean[0]), float(scan.T_stderr[0]), float(scan.R_mean[0])

