"""
Closed-form field and atom observables of the evolved cascade system.

Every function accepts a scalar ``tau`` or an array of times and returns a
float or an array of matching shape. They are evaluated directly from the
coefficient moduli and Rabi frequencies, never from an
:class:`~nlcascade.dynamics.EvolvedState`, so the two code paths can be
checked against each other.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coherent_state import CoefficientVector
from .dynamics import CouplingParams, rabi_frequency, sin_over
from .errors import RealityViolation
from .nonlinearity import evaluate, n_g_squared

__all__ = [
    "ObservableSample",
    "mean_photon_number",
    "atomic_inversion",
    "mean_photon_number_squared",
    "mandel_q",
    "b1",
    "b2",
    "squeezing",
    "norm_residual",
    "sample",
    "sample_grid",
]

REALITY_TOL = 1e-10


@dataclass(frozen=True)
class ObservableSample:
    tau: float
    mean_n: float
    s_z: float
    mandel_q: float  # nan when <n> = 0
    s1: float
    s2: float
    norm_residual: float

    def as_row(self) -> tuple:
        return (self.tau, self.mean_n, self.s_z, self.mandel_q, self.s1, self.s2,
                self.norm_residual)


class _Series:
    """Tau-independent ingredients shared by all closed forms."""

    def __init__(self, coeffs: CoefficientVector, coupling: CouplingParams):
        g = coupling.g_spec
        beta2 = coupling.beta**2
        n = coeffs.n
        big = len(n)
        self.n = n.astype(float)
        self.p = coeffs.probabilities
        self.c = coeffs.coeffs
        self.phase = coeffs.phase
        self.omega = rabi_frequency(coupling, n)
        self.absorb = n_g_squared(g, n)           # n g(n)^2
        self.emit = beta2 * n_g_squared(g, n + 1)  # beta^2 (n+1) g(n+1)^2

        # entry k holds g(k) for k = 1..N+1; entry 0 unused
        gv = np.zeros(big + 1)
        gv[1:] = evaluate(g, np.arange(1, big + 1))
        ng = n * gv[:big]  # n g(n), exactly zero at n = 0
        self.beta2 = beta2
        self.gv = gv
        self.ng = ng

    def trig(self, tau):
        tau = np.asarray(tau, dtype=float)[..., None]
        return np.cos(self.omega * tau), sin_over(self.omega, tau)

    def mean_n(self, cos, so):
        n = self.n
        body = n * cos**2 + so**2 * ((n - 1) * self.absorb + (n + 1) * self.emit)
        return np.sum(self.p * body, axis=-1)

    def mean_n2(self, cos, so):
        n = self.n
        body = n**2 * cos**2 + so**2 * ((n - 1) ** 2 * self.absorb + (n + 1) ** 2 * self.emit)
        return np.sum(self.p * body, axis=-1)

    def s_z(self, cos, so):
        return np.sum(self.p * so**2 * (self.absorb - self.emit), axis=-1)

    def norm_residual(self, cos, so):
        return np.sum(self.p * (cos**2 + so**2 * (self.absorb + self.emit)), axis=-1) - 1.0

    def b1(self, cos, so):
        if len(self.n) < 2:
            return np.zeros(cos.shape[:-1])
        n = self.n[:-1]
        gv, b2 = self.gv, self.beta2
        pair = np.conj(self.c[:-1]) * self.c[1:]
        side = np.sqrt(n + 1) * gv[1:-1] * (self.ng[:-1] + b2 * (n + 2) * gv[2:])
        term = (np.sqrt(n + 1) * cos[..., :-1] * cos[..., 1:]
                + so[..., :-1] * so[..., 1:] * side)
        val = np.exp(-1j * self.phase) * np.sum(pair * term, axis=-1)
        return _real(val, "B1")

    def b2(self, cos, so):
        if len(self.n) < 3:
            return np.zeros(cos.shape[:-1])
        n = self.n[:-2]
        gv, b2 = self.gv, self.beta2
        pair = np.conj(self.c[:-2]) * self.c[2:]
        root = np.sqrt((n + 1) * (n + 2))
        side = self.ng[:-2] * gv[2:-1] + b2 * (n + 3) * gv[1:-2] * gv[3:]
        term = root * (cos[..., :-2] * cos[..., 2:] + so[..., :-2] * so[..., 2:] * side)
        val = np.exp(-2j * self.phase) * np.sum(pair * term, axis=-1)
        return _real(val, "B2")


def _real(val, name):
    val = np.asarray(val)
    bad = np.abs(val.imag) >= REALITY_TOL * (1.0 + np.abs(val.real))
    if np.any(bad):
        worst = np.max(np.abs(val.imag))
        raise RealityViolation(f"{name} has imaginary part {worst:.3e}")
    return val.real


def _out(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def _q(mean_n, mean_n2):
    mean_n = np.asarray(mean_n, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = (mean_n2 - mean_n**2) / mean_n - 1.0
    return np.where(mean_n == 0, np.nan, q)


def _squeeze(b0, b1_, b2_, phi):
    base = 2.0 * (b0 - b2_)
    spread = 4.0 * (b2_ - b1_**2)
    return base + np.cos(phi) ** 2 * spread, base + np.sin(phi) ** 2 * spread


def mean_photon_number(coeffs, coupling, tau):
    """<n>(tau)."""
    s = _Series(coeffs, coupling)
    return _out(s.mean_n(*s.trig(tau)))


def atomic_inversion(coeffs, coupling, tau):
    """<S_z>(tau) = P(e2) - P(g)."""
    s = _Series(coeffs, coupling)
    return _out(s.s_z(*s.trig(tau)))


def mean_photon_number_squared(coeffs, coupling, tau):
    s = _Series(coeffs, coupling)
    return _out(s.mean_n2(*s.trig(tau)))


def norm_residual(coeffs, coupling, tau):
    s = _Series(coeffs, coupling)
    return _out(s.norm_residual(*s.trig(tau)))


def mandel_q(coeffs, coupling, tau):
    """
    Mandel Q = (<n^2> - <n>^2) / <n> - 1.

    Returns nan where <n> vanishes (vacuum field with the atom still in |e1>).
    """
    s = _Series(coeffs, coupling)
    cos, so = s.trig(tau)
    return _out(_q(s.mean_n(cos, so), s.mean_n2(cos, so)))


def b1(coeffs, coupling, tau):
    """Phase-stripped <a>: <a> = exp(-i(omega t - phi)) B1.

    Raises
    ------
    RealityViolation
        If the summed value is not real to within 1e-10 relative.
    """
    s = _Series(coeffs, coupling)
    return _out(s.b1(*s.trig(tau)))


def b2(coeffs, coupling, tau):
    """Phase-stripped <a^2>: <a^2> = exp(-2i(omega t - phi)) B2."""
    s = _Series(coeffs, coupling)
    return _out(s.b2(*s.trig(tau)))


def squeezing(coeffs, coupling, phi, tau):
    """
    Quadrature squeezing parameters ``(S1, S2)`` with S_j = 4 Var(X_j) - 1.

    ``phi`` is the coherent-state phase; negative S_j signals squeezing.
    """
    s = _Series(coeffs, coupling)
    cos, so = s.trig(tau)
    s1, s2 = _squeeze(s.mean_n(cos, so), s.b1(cos, so), s.b2(cos, so), phi)
    return _out(s1), _out(s2)


def sample_grid(coeffs, coupling, phi, taus, chunk=256) -> list[ObservableSample]:
    """Evaluate every observable on a grid of times, in grid order."""
    s = _Series(coeffs, coupling)
    taus = np.asarray(taus, dtype=float).ravel()
    out = []
    for start in range(0, len(taus), chunk):
        block = taus[start:start + chunk]
        cos, so = s.trig(block)
        b0 = s.mean_n(cos, so)
        q = _q(b0, s.mean_n2(cos, so))
        s1, s2 = _squeeze(b0, s.b1(cos, so), s.b2(cos, so), phi)
        sz = s.s_z(cos, so)
        res = s.norm_residual(cos, so)
        for i, t in enumerate(block):
            out.append(ObservableSample(float(t), float(b0[i]), float(sz[i]), float(q[i]),
                                        float(s1[i]), float(s2[i]), float(res[i])))
    return out


def sample(coeffs, coupling, phi, tau) -> ObservableSample:
    return sample_grid(coeffs, coupling, phi, [tau])[0]
