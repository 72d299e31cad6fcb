# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled mode sum for the inter-atomic Green tensor (see _kernel_py)."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, sqrt, exp, fabs, M_PI

cnp.import_array()


def pair_tensor(double ka, double kb, double xi, double yi, double zi,
                double xj, double yj, double zj, int max_index, double tol):
    cdef double dz = fabs(zi - zj)
    cdef double s = 1.0 if zi > zj else -1.0
    cdef double pref = 1.5 * M_PI
    cdef int m, n, a, b
    cdef double km, kn, c2, kabs, nrm
    cdef double complex kap, w, phase
    cdef double complex g[3][3]
    cdef double complex ei[3]
    cdef double complex fj[3]
    cdef double ui[2]
    cdef double uj[2]
    cdef double cxi, sxi, cxj, sxj, cyi, syi, cyj, syj

    cdef cnp.ndarray[double, ndim=1] tcxi = np.empty(max_index + 1)
    cdef cnp.ndarray[double, ndim=1] tsxi = np.empty(max_index + 1)
    cdef cnp.ndarray[double, ndim=1] tcxj = np.empty(max_index + 1)
    cdef cnp.ndarray[double, ndim=1] tsxj = np.empty(max_index + 1)
    cdef cnp.ndarray[double, ndim=1] tcyi = np.empty(max_index + 1)
    cdef cnp.ndarray[double, ndim=1] tsyi = np.empty(max_index + 1)
    cdef cnp.ndarray[double, ndim=1] tcyj = np.empty(max_index + 1)
    cdef cnp.ndarray[double, ndim=1] tsyj = np.empty(max_index + 1)

    for m in range(max_index + 1):
        km = m * M_PI / ka
        kn = m * M_PI / kb
        tcxi[m] = cos(km * xi); tsxi[m] = sin(km * xi)
        tcxj[m] = cos(km * xj); tsxj[m] = sin(km * xj)
        tcyi[m] = cos(kn * yi); tsyi[m] = sin(kn * yi)
        tcyj[m] = cos(kn * yj); tsyj[m] = sin(kn * yj)

    for a in range(3):
        for b in range(3):
            g[a][b] = 0

    for n in range(max_index + 1):
        kn = n * M_PI / kb
        cyi = tcyi[n]; syi = tsyi[n]; cyj = tcyj[n]; syj = tsyj[n]
        for m in range(max_index + 1):
            if m == 0 and n == 0:
                continue
            km = m * M_PI / ka
            c2 = km * km + kn * kn
            if c2 == 1.0:
                continue
            if c2 < 1.0:
                kabs = sqrt(1.0 - c2)
                kap = kabs
                phase = (cos(kabs * dz) + 1j * sin(kabs * dz)) / kabs
            else:
                kabs = sqrt(c2 - 1.0)
                # reach shrinks monotonically in m at fixed n
                if exp(-kabs * dz) / kabs < tol:
                    break
                kap = 1j * kabs
                phase = exp(-kabs * dz) / kap
            cxi = tcxi[m]; sxi = tsxi[m]; cxj = tcxj[m]; sxj = tsxj[m]

            if m == 0:
                nrm = kn * kn * ka * (kb / 2)
            elif n == 0:
                nrm = km * km * (ka / 2) * kb
            else:
                nrm = c2 * ka * kb / 4
            w = -1j * pref * phase / nrm
            ui[0] = kn * cxi * syi; ui[1] = -km * sxi * cyi
            uj[0] = kn * cxj * syj; uj[1] = -km * sxj * cyj
            for a in range(2):
                for b in range(2):
                    g[a][b] += w * ui[a] * uj[b]

            if m == 0 or n == 0:
                continue
            w = -1j * pref * phase / (c2 * ka * kb / 4)
            ei[0] = kap * km * cxi * syi
            ei[1] = kap * kn * sxi * cyi
            ei[2] = -1j * s * c2 * sxi * syi
            fj[0] = kap * km * cxj * syj
            fj[1] = kap * kn * sxj * cyj
            fj[2] = 1j * s * c2 * sxj * syj
            for a in range(3):
                for b in range(3):
                    g[a][b] += w * ei[a] * fj[b]

    out = np.empty((3, 3), dtype=complex)
    for a in range(3):
        for b in range(3):
            out[a, b] = g[a][b]
    return out
