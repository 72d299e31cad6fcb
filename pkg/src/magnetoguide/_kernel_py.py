"""Vectorized NumPy mode sum for the inter-atomic Green tensor.

Fallback for the compiled ``_kernel`` extension; both must agree to rounding.
"""
import numpy as np

_PREFACTOR = 1.5 * np.pi


def pair_tensor(ka, kb, xi, yi, zi, xj, yj, zj, max_index, tol):
    """Green tensor G with Sigma_ij = conj(d_e) . G . d_e' for distinct sites.

    Sums TE and TM modes with indices up to ``max_index``.  Propagating modes
    are always kept; an evanescent mode is kept while
    exp(-|kappa| dz) / |kappa| >= tol.
    """
    dz = abs(zi - zj)
    s = 1.0 if zi > zj else -1.0
    idx = np.arange(max_index + 1, dtype=float)
    km = (idx * np.pi / ka)[:, None]
    kn = (idx * np.pi / kb)[None, :]
    c2 = km * km + kn * kn
    prop = c2 < 1.0
    evan = c2 > 1.0
    kabs = np.sqrt(np.abs(1.0 - c2))
    with np.errstate(divide="ignore", over="ignore"):
        reach = np.exp(-kabs * dz) / kabs
    keep = prop | (evan & (reach >= tol))
    kap = np.where(prop, kabs + 0j, 1j * kabs)
    kap = np.where(keep, kap, 1.0)

    cxi, sxi = np.cos(km * xi), np.sin(km * xi)
    cxj, sxj = np.cos(km * xj), np.sin(km * xj)
    cyi, syi = np.cos(kn * yi), np.sin(kn * yi)
    cyj, syj = np.cos(kn * yj), np.sin(kn * yj)
    phase = np.exp(1j * kap * dz) / kap

    m0 = idx[:, None] == 0
    n0 = idx[None, :] == 0
    te = keep & ~(m0 & n0)
    tm = keep & ~m0 & ~n0

    half_a = np.where(m0, ka, ka / 2)
    half_b = np.where(n0, kb, kb / 2)
    sin_a = np.where(m0, 0.0, ka / 2)
    sin_b = np.where(n0, 0.0, kb / 2)
    n_te = kn * kn * half_a * sin_b + km * km * sin_a * half_b
    n_te = np.where(te, n_te, 1.0)
    n_tm = np.where(tm, c2 * ka * kb / 4, 1.0)

    w_te = np.where(te, -1j * _PREFACTOR * phase / n_te, 0.0)
    w_tm = np.where(tm, -1j * _PREFACTOR * phase / n_tm, 0.0)

    ui = (kn * cxi * syi, -km * sxi * cyi)
    uj = (kn * cxj * syj, -km * sxj * cyj)
    ei = (kap * km * cxi * syi, kap * kn * sxi * cyi, -1j * s * c2 * sxi * syi)
    fj = (kap * km * cxj * syj, kap * kn * sxj * cyj, 1j * s * c2 * sxj * syj)

    g = np.zeros((3, 3), dtype=complex)
    for a in range(2):
        for b in range(2):
            g[a, b] += np.sum(w_te * ui[a] * uj[b])
    for a in range(3):
        for b in range(3):
            g[a, b] += np.sum(w_tm * ei[a] * fj[b])
    return g
