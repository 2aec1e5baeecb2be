"""
Intensity functions f(n), g(n) used to deform the field ladder operators.

A :class:`NonlinearitySpec` is an immutable description of one function.
Both the initial field state (through ``f``) and the atom-field coupling
(through ``g``) are described by the same type.

Supported kinds
---------------
unit
    f(n) = 1 (canonical coherent state / intensity-independent coupling)
gilmore_perelomov
    f(n) = 1 / sqrt(n + 2 kappa - 1)
barut_girardello
    f(n) = sqrt(n + 2 kappa - 1)
tabulated
    values read from a table covering n = 1..N
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, InvalidSpec

__all__ = [
    "Kind",
    "NonlinearitySpec",
    "evaluate",
    "log_f_factorial",
    "n_g_squared",
    "load_table",
]


class Kind(enum.Enum):
    UNIT = "unit"
    GILMORE_PERELOMOV = "gp"
    BARUT_GIRARDELLO = "bg"
    TABULATED = "table"


@dataclass(frozen=True)
class NonlinearitySpec:
    kind: Kind
    kappa: float | None = None
    table: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind in (Kind.GILMORE_PERELOMOV, Kind.BARUT_GIRARDELLO):
            if self.kappa is None or not np.isfinite(self.kappa) or self.kappa < 0.5:
                raise InvalidSpec(f"Bargmann index kappa must be >= 1/2, got {self.kappa}")
        elif self.kappa is not None:
            raise InvalidSpec(f"kappa is meaningless for kind {self.kind.value}")
        if self.kind is Kind.TABULATED:
            if len(self.table) == 0:
                raise InvalidSpec("tabulated nonlinearity needs at least one entry")
            vals = np.asarray(self.table, dtype=float)
            if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
                raise InvalidSpec("tabulated values must be finite and strictly positive")
        elif self.table:
            raise InvalidSpec(f"table given for non-tabulated kind {self.kind.value}")

    # constructors -------------------------------------------------------
    @classmethod
    def unit(cls) -> NonlinearitySpec:
        return cls(Kind.UNIT)

    @classmethod
    def gilmore_perelomov(cls, kappa: float) -> NonlinearitySpec:
        return cls(Kind.GILMORE_PERELOMOV, float(kappa))

    @classmethod
    def barut_girardello(cls, kappa: float) -> NonlinearitySpec:
        return cls(Kind.BARUT_GIRARDELLO, float(kappa))

    @classmethod
    def tabulated(cls, values) -> NonlinearitySpec:
        """Table of f(1), f(2), ..., f(N)."""
        return cls(Kind.TABULATED, None, tuple(float(v) for v in values))

    @classmethod
    def from_file(cls, path) -> NonlinearitySpec:
        return cls.tabulated(load_table(path))

    @property
    def max_n(self) -> float:
        """Largest n at which the function may be evaluated."""
        return len(self.table) if self.kind is Kind.TABULATED else np.inf

    def __call__(self, n):
        return evaluate(self, n)

    def describe(self) -> str:
        if self.kind in (Kind.GILMORE_PERELOMOV, Kind.BARUT_GIRARDELLO):
            return f"{self.kind.value}(kappa={self.kappa:g})"
        if self.kind is Kind.TABULATED:
            return f"table(N={len(self.table)})"
        return self.kind.value


def _check_domain(spec: NonlinearitySpec, n: np.ndarray) -> None:
    if n.size == 0:
        return
    if np.any(n < 1):
        raise DomainError("nonlinearity functions are defined for n >= 1 only")
    if np.any(n > spec.max_n):
        raise DomainError(
            f"n={int(n.max())} outside tabulated range 1..{len(spec.table)}"
        )


def evaluate(spec: NonlinearitySpec, n):
    """
    Evaluate ``f(n)`` for integer ``n >= 1``.

    Accepts a scalar or an integer array; returns the same shape.
    """
    arr = np.asarray(n)
    if arr.dtype.kind not in "iu":
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise DomainError("n must be an integer")
        arr = arr.astype(np.int64)
    _check_domain(spec, arr)
    if spec.kind is Kind.UNIT:
        out = np.ones(arr.shape)
    elif spec.kind is Kind.GILMORE_PERELOMOV:
        out = 1.0 / np.sqrt(arr + 2.0 * spec.kappa - 1.0)
    elif spec.kind is Kind.BARUT_GIRARDELLO:
        out = np.sqrt(arr + 2.0 * spec.kappa - 1.0)
    else:
        out = np.asarray(spec.table)[arr - 1]
    return float(out) if np.ndim(n) == 0 else out


def log_f_factorial(spec: NonlinearitySpec, n):
    """
    ln [f(n)]! = sum_{k=1..n} ln f(k), with the empty product at n = 0.

    GP and BG use the log-gamma closed form
    sum_{k=1..n} ln(k + 2 kappa - 1) = lnGamma(n + 2 kappa) - lnGamma(2 kappa);
    tabulated functions use a running sum.
    """
    arr = np.asarray(n)
    if np.any(arr < 0):
        raise DomainError("factorial index must be >= 0")
    arr = arr.astype(np.int64)
    if spec.kind is Kind.UNIT:
        out = np.zeros(arr.shape)
    elif spec.kind in (Kind.GILMORE_PERELOMOV, Kind.BARUT_GIRARDELLO):
        two_k = 2.0 * spec.kappa
        half = 0.5 * (gammaln(arr + two_k) - gammaln(two_k))
        out = -half if spec.kind is Kind.GILMORE_PERELOMOV else half
        out = np.where(arr == 0, 0.0, out)
    else:
        if arr.size and arr.max() > len(spec.table):
            raise DomainError(
                f"n={int(arr.max())} outside tabulated range 1..{len(spec.table)}"
            )
        cums = np.concatenate(([0.0], np.cumsum(np.log(spec.table))))
        out = cums[arr]
    return float(out) if np.ndim(n) == 0 else out


def n_g_squared(spec: NonlinearitySpec, n):
    """
    n * g(n)**2 with the n = 0 entry fixed to exactly zero.

    g(0) is never defined; the factor n kills it, so it is never evaluated.
    """
    arr = np.atleast_1d(np.asarray(n, dtype=np.int64))
    out = np.zeros(arr.shape)
    pos = arr > 0
    out[pos] = arr[pos] * evaluate(spec, arr[pos]) ** 2
    return float(out[0]) if np.ndim(n) == 0 else out


def load_table(path) -> np.ndarray:
    """
    Read a tabulated nonlinearity: one ``n value`` pair per line, ``#`` comments.

    ``n`` must run 1, 2, ..., N without gaps.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    ns, vals = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InvalidSpec(f"{path}:{lineno}: expected 'n value', got {raw!r}")
        try:
            n_val = int(parts[0])
            v = float(parts[1])
        except ValueError as exc:
            raise InvalidSpec(f"{path}:{lineno}: {exc}") from None
        ns.append(n_val)
        vals.append(v)
    if not ns:
        raise InvalidSpec(f"{path}: no entries")
    if ns != list(range(1, len(ns) + 1)):
        raise InvalidSpec(f"{path}: n must increase contiguously from 1")
    vals = np.array(vals)
    if np.any(vals <= 0) or not np.all(np.isfinite(vals)):
        raise InvalidSpec(f"{path}: values must be finite and strictly positive")
    return vals
