import numpy as np
import pytest

from magnetoguide.ensemble import (EnsembleSpec, SamplingError, averaged_scan,
                                   averaged_transport, sample_sites)
from magnetoguide.geometry import WaveguideGeometry


def test_atom_count(geom):
    assert EnsembleSpec().atom_count(geom) == 12
    assert EnsembleSpec(n_atoms=1).atom_count(geom) == 1
    with pytest.raises(ValueError):
        EnsembleSpec(density=0.0).atom_count(geom)
    with pytest.raises(ValueError):
        EnsembleSpec(n_configs=0)


def test_sampling_reproducible_and_valid(geom):
    spec = EnsembleSpec(seed=3)
    a = sample_sites(spec, geom, 5)
    assert a == sample_sites(spec, geom, 5)
    assert a != sample_sites(spec, geom, 6)
    assert a != sample_sites(EnsembleSpec(seed=4), geom, 5)
    zs = [s.z for s in a]
    assert zs == sorted(zs)
    assert min(np.diff(zs)) >= 0.05
    assert all(geom.contains(s.x, s.y) and 0 <= s.z <= 750 for s in a)


def test_sampling_gives_up(geom):
    spec = EnsembleSpec(n_atoms=50, length=1.0)
    with pytest.raises(SamplingError):
        sample_sites(spec, geom, 0)


def test_averaged_scan_shapes(geom):
    spec = EnsembleSpec(n_configs=4, seed=1)
    scan = averaged_scan(spec, geom, delta=10.0, dz=np.array([4.0, 5.0, 10.0]))
    assert scan.per_config_T.shape == (4, 3)
    assert np.allclose(scan.T_mean, scan.per_config_T.mean(axis=0))
    assert np.all(scan.T_stderr >= 0)
    assert scan.max_energy_error < 1e-8
    assert np.allclose(scan.T_mean + scan.R_mean, 1.0, atol=1e-2)


def test_single_atom_averaging(geom):
    # one randomly placed atom still opens the gate at dz = delta
    spec = EnsembleSpec(n_atoms=1, n_configs=20, seed=2)
    t_open, _, _ = averaged_transport(spec, geom, 10.0, 10.0)
    t_shut, _, _ = averaged_transport(spec, geom, 5.0, 10.0)
    assert t_open == pytest.approx(1.0, abs=1e-9)
    assert t_shut < t_open


def test_scan_order_independent(geom):
    spec = EnsembleSpec(n_configs=3, seed=9)
    grid = np.array([3.0, 6.0, 9.0])
    fwd = averaged_scan(spec, geom, delta=8.0, dz=grid)
    rev = averaged_scan(spec, geom, delta=8.0, dz=grid[::-1])
    assert np.array_equal(fwd.T_mean, rev.T_mean[::-1])
