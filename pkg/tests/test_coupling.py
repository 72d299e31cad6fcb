import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from magnetoguide import _kernel_py, kernel
from magnetoguide.coupling import (DIPOLES, AtomSite, CouplingOptions, SeparationError,
                                   build_sigma, calibrate_normalization, dipole,
                                   gamma_prime, guided_decay_rate, sigma_element,
                                   write_sigma_csv)
from magnetoguide.geometry import GeometryError, WaveguideGeometry

from conftest import GAMMA_PRIME_CENTER


def test_dipole_basis_orthonormal():
    assert np.allclose(DIPOLES.conj() @ DIPOLES.T, np.eye(3))
    assert np.allclose(dipole(0), [0, 0, 1])
    with pytest.raises(ValueError):
        dipole(2)


def test_gamma_prime_center(geom):
    assert gamma_prime(geom, 2.0) == pytest.approx(GAMMA_PRIME_CENTER, rel=1e-15)


def test_gamma_prime_edges(geom):
    assert gamma_prime(geom, 1e-9) < 1e-15
    with pytest.raises(GeometryError):
        gamma_prime(geom, 0.0)
    with pytest.raises(GeometryError):
        gamma_prime(WaveguideGeometry(8.0, 2.0), 4.0)


def test_self_block_center(geom):
    site = AtomSite(2.0, 1.0, 0.0)
    g = GAMMA_PRIME_CENTER
    assert sigma_element(geom, site, -1, site, -1) == pytest.approx(-0.5j * g, rel=1e-14)
    assert sigma_element(geom, site, 1, site, 1) == pytest.approx(-0.5j * g, rel=1e-14)
    # the shared TE10 channel couples the circular sublevels
    assert sigma_element(geom, site, -1, site, 1) == pytest.approx(-0.5j * g, rel=1e-14)
    # no E_z in TE10: the pi sublevel is decoupled
    assert sigma_element(geom, site, 0, site, 0) == 0


def test_single_atom_decay_spectrum(center_atom):
    w = np.sort(np.linalg.eigvalsh(center_atom.decay_matrix()))
    assert np.allclose(w, [0, 0, 2 * GAMMA_PRIME_CENTER], atol=1e-12)


def test_calibration_is_identity(geom):
    assert calibrate_normalization(geom) == pytest.approx(1.0, abs=1e-14)


def test_two_atoms_te10_link(geom):
    # far apart, only TE10 survives and the circular coupling is the guided link
    a, b = AtomSite(2.0, 1.0, 0.0), AtomSite(2.0, 1.0, 40.0)
    kap = math.sqrt(1 - (math.pi / 4) ** 2)
    expect = -0.5j * GAMMA_PRIME_CENTER * np.exp(1j * kap * 40.0)
    assert sigma_element(geom, a, -1, b, -1) == pytest.approx(expect, rel=1e-10)


def test_separation_guard(geom):
    with pytest.raises(SeparationError):
        build_sigma(geom, [AtomSite(2.0, 1.0, 0.0), AtomSite(1.0, 1.0, 0.01)])
    with pytest.raises(GeometryError):
        build_sigma(geom, [AtomSite(5.0, 1.0, 0.0)])


def test_reciprocity(geom):
    sites = [AtomSite(1.2, 0.7, 0.0), AtomSite(3.1, 1.4, 0.8), AtomSite(2.2, 0.3, 2.1)]
    sig = build_sigma(geom, sites).sigma
    # G_ji = G_ij^T and conj(d_m) = (-1)^m d_-m give
    # Sigma_{je',ie} = (-1)^(e+e') Sigma_{i,-e; j,-e'}
    perm = np.array([2, 1, 0] * 3) + np.repeat([0, 3, 6], 3)
    sign = np.tile([-1, 1, -1], 3)
    assert np.allclose(sig.T, np.outer(sign, sign) * sig[np.ix_(perm, perm)], atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(0.05, 3.95), st.floats(0.05, 1.95), st.floats(0, 30)),
                min_size=2, max_size=6))
def test_decay_matrix_psd(points):
    geom = WaveguideGeometry(4.0, 2.0)
    zs = sorted(p[2] for p in points)
    if min(np.diff(zs)) < 0.05:
        return
    cm = build_sigma(geom, [AtomSite(*p) for p in points])
    gam = cm.decay_matrix()
    assert np.allclose(gam, gam.conj().T)
    assert np.linalg.eigvalsh(gam).min() >= -1e-10 * np.linalg.norm(gam, 2)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 3.9), st.floats(0.1, 1.9), st.floats(0.1, 3.9), st.floats(0.1, 1.9),
       st.floats(0.05, 20.0))
def test_backends_agree(x1, y1, x2, y2, dz):
    args = (4.0, 2.0, x1, y1, 0.0, x2, y2, dz, 60, 1e-12)
    ref = _kernel_py.pair_tensor(*args)
    got = kernel.pair_tensor(*args)
    assert np.allclose(got, ref, rtol=1e-12, atol=1e-13 * np.abs(ref).max())


def test_guided_rate_large_guide():
    # rates approach gamma0 only slowly; a broad band is all that holds here
    geom = WaveguideGeometry(300.0, 300.0)
    rate = guided_decay_rate(geom, geom.center, dipole(-1))
    assert rate == pytest.approx(1.0, abs=0.02)


def test_sigma_csv(tmp_path, center_atom):
    path = tmp_path / "s.csv"
    write_sigma_csv(center_atom, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "row,col,re,im"
    assert len(lines) == 10
    r, c, re, im = lines[1].split(",")
    assert complex(float(re), float(im)) == center_atom.sigma[0, 0]


def test_evanescent_truncation_converged(geom):
    # close pair: the pi-pi coupling lives entirely on evanescent TM tails
    a, b = AtomSite(1.0, 0.6, 0.0), AtomSite(3.0, 1.3, 0.3)
    finer = CouplingOptions(evanescent_tol=1e-14, max_index=200)
    for e, e2 in [(0, 0), (-1, 1), (1, 0)]:
        default = sigma_element(geom, a, e, b, e2)
        ref = sigma_element(geom, a, e, b, e2, finer)
        assert abs(default - ref) < 1e-8


def test_pure_python_switch():
    import os
    import subprocess
    import sys
    env = dict(os.environ, MAGNETOGUIDE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import magnetoguide; print(magnetoguide.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
