"""
Closed-form evolution of the cascade atom + field at resonance.

The atom starts in the middle level |e1>. Each Fock component |e1, n> only
mixes with |e2, n-1> (absorption, coupling sqrt(n) g(n)) and |g, n+1>
(emission, coupling beta sqrt(n+1) g(n+1)), and oscillates at

    Omega_n = sqrt(n g(n)^2 + beta^2 (n+1) g(n+1)^2).

Time is the scaled time tau = lambda_1 t. The free phase
exp(-i omega_0 (S_z + n) t) is constant on each such triplet and is not
stored; no observable depends on it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .coherent_state import CoefficientVector
from .errors import InvalidSpec
from .nonlinearity import NonlinearitySpec, evaluate, n_g_squared

__all__ = [
    "CouplingParams",
    "EvolvedState",
    "rabi_frequency",
    "sin_over",
    "evolve",
]


@dataclass(frozen=True)
class CouplingParams:
    g_spec: NonlinearitySpec = field(default_factory=NonlinearitySpec.unit)
    beta: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta < 0:
            raise InvalidSpec(f"beta must be finite and >= 0, got {self.beta}")


def rabi_frequency(coupling: CouplingParams, n):
    """Omega_n for scalar or array ``n >= 0``."""
    n = np.asarray(n, dtype=np.int64)
    absorb = n_g_squared(coupling.g_spec, n)
    emit = coupling.beta**2 * n_g_squared(coupling.g_spec, n + 1)
    out = np.sqrt(absorb + emit)
    return float(out) if out.ndim == 0 else out


def sin_over(omega, tau):
    """sin(omega tau) / omega, equal to tau where omega == 0."""
    omega, tau = np.broadcast_arrays(np.asarray(omega, float), np.asarray(tau, float))
    out = np.array(tau, dtype=float, copy=True)
    nz = omega != 0
    out[nz] = np.sin(omega[nz] * tau[nz]) / omega[nz]
    return out


@dataclass(frozen=True, eq=False)
class EvolvedState:
    """
    Branch amplitudes at time ``tau``.

    ``a_e1[n]`` multiplies |e1, n> and ``a_g[n]`` multiplies |g, n+1>
    (n = 0..N); ``a_e2[k]`` multiplies |e2, k> for k = 0..N-1, i.e. it is
    the amplitude coming from the n = k+1 triplet.
    """

    a_e1: np.ndarray
    a_g: np.ndarray
    a_e2: np.ndarray
    tau: float

    @property
    def p_e1(self) -> float:
        return float(np.sum(np.abs(self.a_e1) ** 2))

    @property
    def p_g(self) -> float:
        return float(np.sum(np.abs(self.a_g) ** 2))

    @property
    def p_e2(self) -> float:
        return float(np.sum(np.abs(self.a_e2) ** 2))

    @property
    def norm(self) -> float:
        return self.p_e1 + self.p_g + self.p_e2

    def mean_photon_number(self) -> float:
        n = np.arange(len(self.a_e1))
        return float(
            np.sum(n * np.abs(self.a_e1) ** 2)
            + np.sum((n + 1) * np.abs(self.a_g) ** 2)
            + np.sum(n[:-1] * np.abs(self.a_e2) ** 2)
        )


def evolve(coeffs: CoefficientVector, coupling: CouplingParams, tau: float) -> EvolvedState:
    c = coeffs.coeffs
    n = coeffs.n
    g = coupling.g_spec
    omega = rabi_frequency(coupling, n)
    s = sin_over(omega, tau)

    emit = coupling.beta * np.sqrt(n + 1.0) * evaluate(g, n + 1)
    a_e1 = c * np.cos(omega * tau)
    a_g = -1j * c * emit * s
    k = n[1:]
    a_e2 = -1j * c[1:] * np.sqrt(k) * evaluate(g, k) * s[1:]
    return EvolvedState(a_e1, a_g, a_e2, float(tau))
