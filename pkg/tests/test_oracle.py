import math

import numpy as np
import pytest

from magnetoguide.oracle import (OracleInputs, PoleError, analytic_amplitudes,
                                 analytic_coefficients, analytic_transport,
                                 oracle_gamma_prime)

from conftest import GAMMA_PRIME_CENTER as G


def test_gamma_prime():
    assert oracle_gamma_prime(4.0, 2.0, 2.0) == pytest.approx(G, rel=1e-15)


def test_a1_magnitude_and_phase():
    # one full guide wavelength between source and atom
    lam = 2 * math.pi / math.sqrt(1 - (math.pi / 4) ** 2)
    a1 = analytic_coefficients(OracleInputs(0.0, 1.0, zs=-5 * lam))[0]
    assert abs(a1) == pytest.approx(G / 2, rel=1e-12)
    assert a1 / -1j == pytest.approx(G / 2, rel=1e-10)


def test_edge_atom_decouples():
    a1, _, a3 = analytic_coefficients(OracleInputs(1.0, 1.0, xa=1e-10))
    assert abs(a1) < 1e-9 and abs(a3) < 1e-9


def test_a1_mirrors_a2():
    p = OracleInputs(1.0, 1.0, xd=2.0, zd=0.0)
    a1, a2, _ = analytic_coefficients(p)
    assert a1 == pytest.approx(a2, rel=1e-15)


def test_blocking_point():
    p = OracleInputs(20.0, 10.0)
    bm, bp = analytic_amplitudes(p)
    assert bm == 0
    a3 = analytic_coefficients(p)[2]
    a2 = analytic_coefficients(p)[1]
    assert bp * a3 == pytest.approx(a2, rel=1e-12)
    tr = analytic_transport(p)
    assert tr.T == pytest.approx(0, abs=1e-15) and tr.R == pytest.approx(1)


def test_open_point():
    bm, bp = analytic_amplitudes(OracleInputs(7.0, 7.0))
    assert bm == pytest.approx(-bp, rel=1e-14)
    tr = analytic_transport(OracleInputs(7.0, 7.0))
    assert tr.T == pytest.approx(1, abs=1e-15) and tr.R == pytest.approx(0, abs=1e-15)


def test_zero_field_lorentzian():
    p = OracleInputs(G, 0.0)
    a1 = analytic_coefficients(p)[0]
    bm, bp = analytic_amplitudes(p)
    assert bm == pytest.approx(a1 / (G * (1 + 1j)), rel=1e-14)
    assert bp == pytest.approx(bm, rel=1e-14)
    assert analytic_transport(p).T == pytest.approx(0.5, rel=1e-14)


def test_pole():
    with pytest.raises(PoleError):
        analytic_amplitudes(OracleInputs(0.0, 0.0))
    tr = analytic_transport(OracleInputs(0.0, 0.0))
    assert (tr.T, tr.R) == (0.0, 1.0)
    assert abs(tr.r_amp) == pytest.approx(1.0, rel=1e-12)


@pytest.mark.parametrize("dz", [0.0, 2.5, 10.0])
def test_swap_symmetry_and_unitarity(dz):
    for d in np.linspace(-15, 25, 41):
        if d == 0 and dz == 0:
            continue
        bm = analytic_amplitudes(OracleInputs(d, dz))[0]
        bp = analytic_amplitudes(OracleInputs(2 * dz - d, dz))[1] if (2 * dz - d, dz) != (0, 0) else None
        if bp is not None:
            assert abs(bm) == pytest.approx(abs(bp), rel=1e-12)
        tr = analytic_transport(OracleInputs(d, dz))
        assert abs(tr.t_amp) ** 2 + abs(tr.r_amp) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_rejects_bad_inputs():
    with pytest.raises(ValueError):
        OracleInputs(0.0, 1.0, xa=4.0)
    with pytest.raises(ValueError):
        OracleInputs(0.0, 1.0, ka=7.0)
