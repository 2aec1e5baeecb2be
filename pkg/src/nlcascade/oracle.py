"""
Brute-force reference solution.

Builds the resonant interaction Hamiltonian on the truncated product basis
{|g,n>, |e1,n>, |e2,n> : n = 0..N+1} from its matrix elements, propagates
the initial state numerically and measures observables from the raw
amplitudes. Nothing here reuses the closed forms of
:mod:`nlcascade.dynamics` or :mod:`nlcascade.observables`.

Basis index of ``|level, n>`` is ``3 n + level`` with g = 0, e1 = 1, e2 = 2.
Energies are in units of hbar lambda_1; time is tau = lambda_1 t.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .coherent_state import CoefficientVector
from .dynamics import CouplingParams
from .errors import ConvergenceError, InvalidSpec
from .nonlinearity import evaluate
from .observables import ObservableSample

__all__ = [
    "G", "E1", "E2",
    "OracleState",
    "index",
    "build_hamiltonian",
    "triplet_blocks",
    "integrate",
    "observables_from_state",
    "field_moments",
    "phase_invariance_gap",
]

G, E1, E2 = 0, 1, 2
# S_z eigenvalue per level
_SZ = np.array([-1.0, 0.0, 1.0])


def index(level: int, n: int) -> int:
    return 3 * n + level


@dataclass(frozen=True, eq=False)
class OracleState:
    amplitudes: np.ndarray
    tau: float
    omega0: float = 0.0

    @property
    def n_levels(self) -> int:
        """Number of photon levels in the basis (N + 2)."""
        return len(self.amplitudes) // 3

    def grid(self) -> np.ndarray:
        """Amplitudes reshaped as ``[n, level]``."""
        return self.amplitudes.reshape(self.n_levels, 3)

    @property
    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


def build_hamiltonian(coupling: CouplingParams, n_max: int, sparse: bool = False):
    """
    Real symmetric interaction Hamiltonian on photon numbers 0..n_max+1.

    Nonzero elements (plus transposes):
        <e2, n-1 | H | e1, n> = sqrt(n) g(n)             n = 1..n_max+1
        <g,  n+1 | H | e1, n> = beta sqrt(n+1) g(n+1)    n = 0..n_max
    """
    if n_max < 1:
        raise InvalidSpec("oracle basis needs n_max >= 1")
    dim = 3 * (n_max + 2)
    rows, cols, vals = [], [], []
    g = coupling.g_spec
    for n in range(1, n_max + 2):
        rows.append(index(E2, n - 1))
        cols.append(index(E1, n))
        vals.append(np.sqrt(n) * evaluate(g, n))
    if coupling.beta != 0:
        for n in range(0, n_max + 1):
            rows.append(index(G, n + 1))
            cols.append(index(E1, n))
            vals.append(coupling.beta * np.sqrt(n + 1) * evaluate(g, n + 1))
    upper = sp.coo_matrix((vals, (rows, cols)), shape=(dim, dim))
    h = (upper + upper.T).tocsr()
    return h if sparse else h.toarray()


def triplet_blocks(h: np.ndarray, n_top: int):
    """
    Cut ``h`` into the invariant subspaces {|e2,n-1>, |e1,n>, |g,n+1>}.

    Returns a list of (basis indices, block matrix) for n = 0..n_top and
    verifies that ``h`` has no element linking different subspaces.
    """
    dim = h.shape[0]
    blocks = []
    owner = -np.ones(dim, dtype=int)
    for n in range(n_top + 1):
        idx = [index(E1, n), index(G, n + 1)]
        if n >= 1:
            idx.insert(0, index(E2, n - 1))
        idx = np.array(idx)
        owner[idx] = n
        blocks.append((idx, h[np.ix_(idx, idx)]))
    # leakage check: any element touching a block must stay inside it
    r, c = np.nonzero(h)
    touched = (owner[r] >= 0) | (owner[c] >= 0)
    if np.any(owner[r][touched] != owner[c][touched]):
        raise ConvergenceError("Hamiltonian couples different excitation triplets")
    return blocks


def _free_phase(n_levels: int, omega0: float, tau: float) -> np.ndarray:
    n = np.repeat(np.arange(n_levels, dtype=float), 3)
    sz = np.tile(_SZ, n_levels)
    return np.exp(-1j * omega0 * (sz + n) * tau)


def _initial(initial: CoefficientVector, n_levels: int) -> np.ndarray:
    psi = np.zeros(3 * n_levels, dtype=complex)
    psi[index(E1, 0)::3][: len(initial)] = initial.coeffs
    return psi


def _basis_size(initial: CoefficientVector) -> int:
    return max(initial.n_max, 1)


def integrate(
    initial: CoefficientVector,
    coupling: CouplingParams,
    tau: float,
    omega0: float = 0.0,
    method: str = "eigh",
    dt: float = 1e-3,
) -> OracleState:
    """
    Propagate |e1> x sum C_n |n> to time ``tau`` and return Schrodinger-picture
    amplitudes.

    method
        ``"eigh"``: numerical diagonalization of every triplet block.
        ``"rk4"``: fixed-step fourth-order Runge-Kutta on the full sparse
        Hamiltonian with step ``dt`` (second opinion, slower).
    """
    if tau < 0:
        raise InvalidSpec("oracle integrates forward in time only")
    n_max = _basis_size(initial)
    n_levels = n_max + 2
    psi0 = _initial(initial, n_levels)

    if method == "eigh":
        h = build_hamiltonian(coupling, n_max)
        psi = np.zeros_like(psi0)
        for idx, block in triplet_blocks(h, initial.n_max):
            try:
                w, v = np.linalg.eigh(block)
            except np.linalg.LinAlgError as exc:
                raise ConvergenceError(f"eigen-solver failed: {exc}") from exc
            u = (v * np.exp(-1j * w * tau)) @ v.conj().T
            psi[idx] = u @ psi0[idx]
    elif method == "rk4":
        h = build_hamiltonian(coupling, n_max, sparse=True)
        steps = max(1, int(np.ceil(tau / dt)))
        step = tau / steps
        psi = psi0.copy()

        def rhs(y):
            return -1j * (h @ y)

        for _ in range(steps):
            k1 = rhs(psi)
            k2 = rhs(psi + 0.5 * step * k1)
            k3 = rhs(psi + 0.5 * step * k2)
            k4 = rhs(psi + step * k3)
            psi = psi + step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    else:
        raise InvalidSpec(f"unknown oracle method {method!r}")

    psi = psi * _free_phase(n_levels, omega0, tau)
    return OracleState(psi, float(tau), float(omega0))


def _lowering(n_levels: int) -> sp.csr_matrix:
    """Field annihilation operator a (x) 1_atom on the product basis."""
    a = sp.diags(np.sqrt(np.arange(1, n_levels, dtype=float)), 1)
    return sp.kron(a, sp.identity(3), format="csr")


def field_moments(state: OracleState) -> tuple[complex, complex]:
    """
    Rotating-frame moments (<A>, <A^2>) with A = a exp(i omega0 tau).
    """
    psi = state.amplitudes
    a = _lowering(state.n_levels)
    a_psi = a @ psi
    rot = np.exp(1j * state.omega0 * state.tau)
    mean_a = np.vdot(psi, a_psi) * rot
    mean_a2 = np.vdot(psi, a @ a_psi) * rot**2
    return complex(mean_a), complex(mean_a2)


def observables_from_state(state: OracleState) -> ObservableSample:
    """Measure every observable by direct summation over the amplitudes."""
    amp = state.grid()
    prob = np.abs(amp) ** 2
    n = np.arange(state.n_levels, dtype=float)
    p_n = prob.sum(axis=1)
    norm = p_n.sum()
    mean_n = float(np.sum(n * p_n))
    mean_n2 = float(np.sum(n**2 * p_n))
    s_z = float(prob[:, E2].sum() - prob[:, G].sum())

    mean_a, mean_a2 = field_moments(state)
    # 4 Var(X1) and 4 Var(X2) for X1 = (A + A^+)/2, X2 = (A - A^+)/(2i)
    var1 = 2 * mean_a2.real + 2 * mean_n + 1 - 4 * mean_a.real**2
    var2 = -2 * mean_a2.real + 2 * mean_n + 1 - 4 * mean_a.imag**2
    q = (mean_n2 - mean_n**2) / mean_n - 1.0 if mean_n != 0 else float("nan")
    return ObservableSample(
        tau=state.tau,
        mean_n=mean_n,
        s_z=s_z,
        mandel_q=q,
        s1=var1 - 1.0,
        s2=var2 - 1.0,
        norm_residual=float(norm - 1.0),
    )


def phase_invariance_gap(initial, coupling, tau, omegas=(0.0, 5.0)) -> float:
    """Largest change of any oracle observable across the given omega0 values."""
    rows = [np.array(observables_from_state(integrate(initial, coupling, tau, w)).as_row())
            for w in omegas]
    ref = rows[0]
    gaps = [np.nanmax(np.abs(r - ref)) for r in rows[1:]]
    return float(max(gaps)) if gaps else 0.0
