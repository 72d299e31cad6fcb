"""Closed-form single-atom solution, kept free of the numeric machinery.

Nothing here imports the coupling or scattering modules, so agreement
between the two routes is a real check.  Coordinates are k0-scaled; rates
and detunings are in units of gamma0; the probe amplitude constant is 1.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass


class PoleError(ArithmeticError):
    """The two-channel denominator vanishes (dz = 0, delta = 0)."""


@dataclass(frozen=True)
class OracleInputs:
    delta: float
    dz: float
    ka: float = 4.0
    kb: float = 2.0
    xa: float = 2.0
    za: float = 0.0
    xs: float = 2.0
    zs: float = -50.0
    xd: float = 2.0
    zd: float = 50.0
    zr: float = -50.0

    def __post_init__(self):
        if not 0 < self.xa < self.ka:
            raise ValueError("atom must lie strictly inside the guide")
        if not math.pi / self.ka < 1 <= min(2 * math.pi / self.ka, math.pi / self.kb):
            raise ValueError("closed form needs a guide where only TE10 propagates")


def _kz(ka):
    return math.sqrt(1 - (math.pi / ka) ** 2)


def oracle_gamma_prime(ka: float, kb: float, xa: float) -> float:
    return 3 * math.pi / (ka * kb * _kz(ka)) * math.sin(math.pi * xa / ka) ** 2


def _coefficient(sign, ka, kb, x1, x2, z1, z2):
    kz = _kz(ka)
    pre = sign * math.pi * 1j / (ka * kb * kz)
    return pre * math.sin(math.pi * x1 / ka) * math.sin(math.pi * x2 / ka) * 1.5 * cmath.exp(1j * abs(z1 - z2) * kz)


def analytic_coefficients(p: OracleInputs, zd: float | None = None):
    """(A1, A2, A3): source drive on the atom, incident field at the
    detector, and atom-to-detector scattering coefficient."""
    zd = p.zd if zd is None else zd
    a1 = _coefficient(-1, p.ka, p.kb, p.xa, p.xs, p.za, p.zs)
    a2 = _coefficient(-1, p.ka, p.kb, p.xd, p.xs, zd, p.zs)
    a3 = _coefficient(+1, p.ka, p.kb, p.xa, p.xd, p.za, zd)
    return a1, a2, a3


def analytic_amplitudes(p: OracleInputs):
    g = oracle_gamma_prime(p.ka, p.kb, p.xa)
    a1 = analytic_coefficients(p)[0]
    d, dz = p.delta, p.dz
    den = (d + 0.5j * g) * (d - 2 * dz + 0.5j * g) + (g / 2) ** 2
    if den == 0:
        raise PoleError("denominator vanishes at dz = delta = 0")
    return a1 * (d - 2 * dz) / den, a1 * d / den


@dataclass(frozen=True)
class OracleTransport:
    t_amp: complex
    r_amp: complex
    T: float
    R: float


def analytic_transport(p: OracleInputs) -> OracleTransport:
    a1, a2, a3 = analytic_coefficients(p)
    _, a2r, a3r = analytic_coefficients(p, zd=p.zr)
    try:
        bm, bp = analytic_amplitudes(p)
    except PoleError:
        # delta -> 0 at dz = 0: b- + b+ -> 2 A1 / (i gamma'), a perfect mirror
        g = oracle_gamma_prime(p.ka, p.kb, p.xa)
        return OracleTransport(0j, -a3r * a1 / (a2r * 0.5j * g), 0.0, 1.0)
    e_t = a2 - a3 * (bm + bp)
    e_r = -a3r * (bm + bp)
    t, r = e_t / a2, e_r / a2r
    pt, pr = abs(t) ** 2, abs(r) ** 2
    return OracleTransport(t, r, pt / (pt + pr), pr / (pt + pr))
