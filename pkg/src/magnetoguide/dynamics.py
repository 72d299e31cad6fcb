"""Single-excitation dynamics under the non-Hermitian matrix M = Zeeman + Sigma.

Amplitudes obey db/dt = -i M b in the frame rotating at the bare frequency,
with time in units of 1/gamma0.  The Zeeman field shifts sublevel m by
m * dz; it never touches Sigma.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np
import scipy.linalg

from .coupling import CouplingMatrix

# eig error grows like eps * cond(V); past this, use expm
EIGEN_COND_LIMIT = 1e6


def effective_matrix(cm: CouplingMatrix, dz: float) -> np.ndarray:
    return np.diag(cm.sublevel_m * float(dz)).astype(complex) + cm.sigma


def dark_fraction(b: np.ndarray, atom: int = 0) -> float:
    """Population of |X> = (|-1> - |+1>)/sqrt(2) on the given atom."""
    b = np.asarray(b)
    if not 0 <= atom < b.shape[-1] // 3:
        raise IndexError(f"atom index {atom} out of range")
    amp = (b[..., 3 * atom] - b[..., 3 * atom + 2]) / math.sqrt(2)
    return np.abs(amp) ** 2


@dataclass
class DecayTrace:
    times: np.ndarray
    amplitudes: np.ndarray  # (len(times), 3N)
    method: str = "eig"

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def excitation(self) -> np.ndarray:
        return self.populations.sum(axis=1)

    @property
    def emitted(self) -> np.ndarray:
        return 1.0 - self.excitation

    def sublevel(self, m: int, atom: int = 0) -> np.ndarray:
        return self.populations[:, 3 * atom + m + 1]

    def dark(self, atom: int = 0) -> np.ndarray:
        return dark_fraction(self.amplitudes, atom)


def evolve(m: np.ndarray, b0: np.ndarray, times: Sequence[float]) -> DecayTrace:
    """b(t) = exp(-i M t) b0 on the given grid.

    Uses the eigendecomposition of M unless its eigenbasis is too
    ill-conditioned (near an exceptional point); then falls back to a dense
    matrix exponential per time point.  ``trace.method`` records which.
    """
    b0 = np.asarray(b0, dtype=complex)
    times = np.asarray(times, dtype=float)
    if np.vdot(b0, b0).real > 1 + 1e-12:
        raise ValueError("initial state must have norm <= 1")
    if times.size and (times[0] < 0 or np.any(np.diff(times) < 0)):
        raise ValueError("times must be nonnegative and ascending")
    w, v = np.linalg.eig(m)
    if np.linalg.cond(v) <= EIGEN_COND_LIMIT:
        c = np.linalg.solve(v, b0)
        amps = (np.exp(-1j * np.outer(times, w)) * c) @ v.T
        amps[times == 0] = b0
        method = "eig"
    else:
        amps = np.array([scipy.linalg.expm(-1j * m * t) @ b0 for t in times])
        amps = amps.reshape(times.size, b0.size)
        method = "expm"
    return DecayTrace(times, amps, method)


def default_times(gamma: float, points: int = 600, span: float = 12.0) -> np.ndarray:
    """Uniform grid over [0, span / gamma]."""
    return np.linspace(0.0, span / gamma, points)


@dataclass(frozen=True)
class ProtocolStage:
    dz: float
    duration: float

    def __post_init__(self):
        if not math.isfinite(self.duration) or self.duration < 0:
            raise ValueError(f"stage duration must be finite and >= 0, got {self.duration}")
        if not math.isfinite(self.dz):
            raise ValueError("Zeeman splitting must be finite")


@dataclass
class ProtocolResult:
    trace: DecayTrace
    flux: np.ndarray
    stage_starts: List[float]
    emitted_per_stage: List[float] = field(default_factory=list)
    methods: List[str] = field(default_factory=list)


def _stage_grid(duration: float, dt: float, refine: int) -> np.ndarray:
    if duration == 0:
        return np.zeros(1)
    steps = max(1, math.ceil(duration / dt - 1e-9))
    grid = np.linspace(0.0, duration, steps + 1)
    # geometric points just after the switch resolve the onset of emission
    extra = dt * 0.5 ** np.arange(1, refine + 1)
    extra = extra[extra < duration]
    return np.unique(np.concatenate([grid, extra]))


def simulate_protocol(cm: CouplingMatrix, stages: Sequence[ProtocolStage], b0: np.ndarray,
                      dt: float, refine: int = 6) -> ProtocolResult:
    """Piecewise-constant field evolution with instantaneous switching.

    The photon waveform is -dP_exc/dt on the output grid.
    """
    if not stages:
        raise ValueError("at least one stage is required")
    if dt <= 0:
        raise ValueError("dt must be positive")
    b = np.asarray(b0, dtype=complex)
    t0 = 0.0
    times, amps, starts, emitted, methods = [], [], [], [], []
    for k, stage in enumerate(stages):
        local = _stage_grid(stage.duration, dt, refine)
        tr = evolve(effective_matrix(cm, stage.dz), b, local)
        skip = 0 if k == 0 else 1
        times.append(t0 + local[skip:])
        amps.append(tr.amplitudes[skip:])
        starts.append(t0)
        p_start = float(np.vdot(b, b).real)
        b = tr.amplitudes[-1]
        emitted.append(p_start - float(np.vdot(b, b).real))
        methods.append(tr.method)
        t0 += stage.duration
    times = np.concatenate(times)
    amps = np.concatenate(amps)
    trace = DecayTrace(times, amps, "+".join(sorted(set(methods))))
    if times.size > 1:
        flux = -np.gradient(trace.excitation, times)
    else:
        flux = np.zeros_like(times)
    return ProtocolResult(trace, flux, starts, emitted, methods)
