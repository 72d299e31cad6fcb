"""Cross-check of the general numeric solver against the closed form."""
from __future__ import annotations

import numpy as np

from .coupling import AtomSite, build_sigma
from .geometry import WaveguideGeometry
from .oracle import (OracleInputs, analytic_amplitudes, analytic_coefficients,
                     analytic_transport, oracle_gamma_prime, PoleError)
from .scattering import ProbeSpec, solve_stationary, transport

DEFAULT_POSITIONS = (
    (2.0, 1.0, 0.0),
    (1.0, 0.5, 3.7),
    (3.1, 1.6, -12.4),
    (0.45, 0.2, 101.0),
    (3.8, 1.9, 7.25),
)


def oracle_grid(n: int = 50):
    """Detuning and Zeeman grids; an even-sized detuning grid avoids the
    dark-state pole at delta = dz = 0, where the closed form is undefined."""
    return np.linspace(-30.0, 30.0, n), np.linspace(0.0, 25.0, n)


def oracle_deviation(n: int = 50, positions=DEFAULT_POSITIONS, ka: float = 4.0, kb: float = 2.0) -> dict:
    """Largest deviation between the numeric and closed-form solutions.

    Amplitudes b are compared relative to max(|b_oracle|, |A1| / gamma'),
    t and r relative to max(|oracle|, 1); both scales are the natural size
    of the quantity, so zeros of the closed form do not blow up the ratio.
    """
    geom = WaveguideGeometry(ka, kb)
    deltas, fields = oracle_grid(n)
    worst = {"b_minus": 0.0, "b_plus": 0.0, "t": 0.0, "r": 0.0}
    for x, y, z in positions:
        cm = build_sigma(geom, [AtomSite(x, y, z)])
        g = oracle_gamma_prime(ka, kb, x)
        for dz in fields:
            for d in deltas:
                probe = ProbeSpec(float(d))
                inp = OracleInputs(float(d), float(dz), ka, kb, xa=x, za=z,
                                   xs=ka / 2, zs=z - probe.standoff,
                                   xd=ka / 2, zd=z + probe.standoff, zr=z - probe.standoff)
                ref = analytic_transport(inp)
                res = transport(cm, float(dz), float(d), probe)
                try:
                    bm, bp = analytic_amplitudes(inp)
                except PoleError:
                    # only the regularized limit exists here; compare powers
                    worst["T"] = max(worst.get("T", 0.0), abs(res.T - ref.T))
                    continue
                sol = solve_stationary(cm, float(dz), probe)
                bscale = abs(analytic_coefficients(inp)[0]) / g
                pairs = (("b_minus", sol.b[0], bm, bscale), ("b_plus", sol.b[2], bp, bscale),
                         ("t", res.t_amp, ref.t_amp, 1.0), ("r", res.r_amp, ref.r_amp, 1.0))
                for key, num, orc, scale in pairs:
                    dev = abs(num - orc) / max(abs(orc), scale)
                    worst[key] = max(worst[key], dev)
    worst["max"] = max(worst.values())
    return worst
