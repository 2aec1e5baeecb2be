"""
Fock-basis coefficients of the nonlinear coherent state |alpha, f>.

    C_n = N_f alpha**n / (sqrt(n!) [f(n)]!),    alpha = |alpha| exp(i phi)

Everything is computed in the log domain: ``n!`` overflows a double near
n = 171 and the factorial of f can over- or underflow even earlier.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import ConvergenceError, InvalidSpec
from .nonlinearity import Kind, NonlinearitySpec, log_f_factorial

__all__ = [
    "FieldParams",
    "CoefficientVector",
    "truncation_order",
    "coefficients",
    "DEFAULT_EPS",
    "DEFAULT_MAX_ORDER",
]

DEFAULT_EPS = 1e-12
DEFAULT_MAX_ORDER = 100_000

# consecutive terms that must satisfy the decay criteria past the cut
_RUN = 10


@dataclass(frozen=True)
class FieldParams:
    alpha_mag: float
    alpha_phase: float = 0.0
    f_spec: NonlinearitySpec = field(default_factory=NonlinearitySpec.unit)

    def __post_init__(self):
        if not np.isfinite(self.alpha_mag) or self.alpha_mag < 0:
            raise InvalidSpec(f"|alpha| must be a finite nonnegative number, got {self.alpha_mag}")
        if not np.isfinite(self.alpha_phase):
            raise InvalidSpec("alpha phase must be finite")
        if self.f_spec.kind is Kind.GILMORE_PERELOMOV and self.alpha_mag >= 1:
            raise InvalidSpec(
                f"Gilmore-Perelomov states need |alpha| < 1, got {self.alpha_mag}"
            )

    @property
    def alpha(self) -> complex:
        return self.alpha_mag * np.exp(1j * self.alpha_phase)


@dataclass(frozen=True, eq=False)
class CoefficientVector:
    """
    Truncated expansion of the initial field state.

    ``modulus`` and ``phase`` are stored separately so that rotating alpha
    leaves the moduli untouched.
    """

    modulus: np.ndarray
    phase: float
    tail_bound: float

    def __post_init__(self):
        self.modulus.setflags(write=False)

    @property
    def n_max(self) -> int:
        return len(self.modulus) - 1

    @property
    def n(self) -> np.ndarray:
        return np.arange(len(self.modulus))

    @property
    def coeffs(self) -> np.ndarray:
        return self.modulus * np.exp(1j * self.phase * self.n)

    @property
    def probabilities(self) -> np.ndarray:
        return self.modulus**2

    def __len__(self):
        return len(self.modulus)

    @classmethod
    def vacuum(cls) -> CoefficientVector:
        return cls(np.array([1.0]), 0.0, 0.0)


def _log_weights(params: FieldParams, n: np.ndarray) -> np.ndarray:
    """ln of the unnormalized |C_n|**2."""
    return (
        2.0 * n * np.log(params.alpha_mag)
        - gammaln(n + 1.0)
        - 2.0 * log_f_factorial(params.f_spec, n)
    )


def _tails(params: FieldParams, eps: float, max_order: int):
    """
    Return ``(N, tail, weighted_tail, log_weights)`` for the smallest cut N.

    The scan length doubles until the last ``_RUN`` weighted terms decay
    geometrically and the estimated remainder past the scan is negligible
    next to ``eps``.
    """
    limit = min(max_order + _RUN + 1, params.f_spec.max_n)
    m = 64
    while True:
        m = int(min(m, limit))
        n = np.arange(m + 1)
        lw = _log_weights(params, n)
        p = np.exp(lw - logsumexp(lw))
        weighted = p * (n + 1.0) ** 2

        ratio = np.exp(np.diff(lw[-_RUN - 1:])) * ((n[-_RUN:] + 1.0) / n[-_RUN:]) ** 2
        decaying = m > _RUN and np.all(ratio < 1.0)
        if decaying:
            r = ratio.max()
            rest = weighted[-1] * r / (1.0 - r)
            # p_n <= (n+1)^2 p_n, so `rest` bounds both remainders
            if rest < 1e-3 * eps:
                tail = np.concatenate((np.cumsum(p[::-1])[::-1][1:], [0.0])) + rest
                wtail = np.concatenate((np.cumsum(weighted[::-1])[::-1][1:], [0.0])) + rest
                ok = (tail < eps) & (wtail < eps)
                cut = int(np.argmax(ok)) if ok.any() else m
                if ok.any() and cut + _RUN <= m:
                    if cut > max_order:
                        break
                    return cut, float(tail[cut]), float(wtail[cut]), lw[: cut + 1]
        if m >= limit:
            break
        m *= 2
    if limit == params.f_spec.max_n and limit < max_order:
        raise ConvergenceError(
            f"tabulated f covers n <= {int(limit)}, too short for eps={eps:g}"
        )
    raise ConvergenceError(
        f"Fock series for |alpha|={params.alpha_mag} with f={params.f_spec.describe()} "
        f"did not converge below order {max_order}"
    )


def _check_eps(eps: float) -> None:
    if not 0.0 < eps < 1.0:
        raise InvalidSpec(f"eps must lie in (0, 1), got {eps}")


def truncation_order(
    params: FieldParams, eps: float = DEFAULT_EPS, max_order: int = DEFAULT_MAX_ORDER
) -> int:
    """
    Smallest N whose discarded tail satisfies both

        sum_{n>N} |C_n|^2 < eps   and   sum_{n>N} (n+1)^2 |C_n|^2 < eps.

    Raises
    ------
    ConvergenceError
        If N would exceed ``max_order`` (divergent or very slowly decaying series).
    """
    _check_eps(eps)
    if params.alpha_mag == 0:
        return 0
    return _tails(params, eps, max_order)[0]


def coefficients(
    params: FieldParams, eps: float = DEFAULT_EPS, max_order: int = DEFAULT_MAX_ORDER
) -> CoefficientVector:
    """Build the truncated, renormalized coefficient vector of |alpha, f>."""
    _check_eps(eps)
    if params.alpha_mag == 0:
        return CoefficientVector(np.array([1.0]), float(params.alpha_phase), 0.0)
    _, tail, _, lw = _tails(params, eps, max_order)
    modulus = np.exp(0.5 * (lw - logsumexp(lw)))
    modulus = modulus / np.sqrt(np.sum(modulus**2))
    return CoefficientVector(modulus, float(params.alpha_phase), tail)
