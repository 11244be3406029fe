"""Triangular transverse-field Ising Hamiltonian and its exact diagonalization.

Basis convention (used by every module in the package)::

    index = 4*s_A + 2*s_B + s_C,   s in {0, 1}

with ``|0>`` the +1 eigenvector of sigma^z.  So ``|111>`` (index 7) is the
all-down state, the ground state of the bare field term.

The Hamiltonian is

    H = J (X_A X_B + omega X_B X_C + eta X_C X_A) + h (Z_A + Z_B + Z_C)

which is real symmetric; everything here works with real 8x8 matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from triq.errors import ConvergenceError, InvalidConfigError

QUBITS = ("A", "B", "C")
DIM = 8

# bit position of each qubit inside the basis index
_BIT = {"A": 2, "B": 1, "C": 0}


@dataclass(frozen=True)
class CouplingConfig:
    """Parameters of one Hamiltonian instance (J in units of h).

    ``j > 0`` is the frustrated (antiferromagnetic) regime, ``j < 0`` the
    nonfrustrated one.  ``omega = 1`` gives the single-anisotropy model.
    """

    j: float
    h: float = 1.0
    eta: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        for name in ("j", "h", "eta", "omega"):
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.floating, np.integer)):
                raise InvalidConfigError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise InvalidConfigError(f"{name} must be finite, got {value!r}")
        if self.h <= 0:
            raise InvalidConfigError(f"h must be positive, got {self.h}")
        if self.eta < 0 or self.omega < 0:
            raise InvalidConfigError(
                f"anisotropies must be non-negative, got eta={self.eta}, omega={self.omega}"
            )

    def replace(self, **changes) -> "CouplingConfig":
        fields = {"j": self.j, "h": self.h, "eta": self.eta, "omega": self.omega}
        fields.update(changes)
        return CouplingConfig(**fields)

    def bonds(self):
        """Bond strengths as ``{(q1, q2): coupling}``."""
        return {
            ("A", "B"): self.j,
            ("B", "C"): self.j * self.omega,
            ("A", "C"): self.j * self.eta,
        }


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with eigenvectors stored as matrix columns."""

    energies: np.ndarray
    vectors: np.ndarray

    @property
    def gap(self) -> float:
        return float(self.energies[1] - self.energies[0])

    def __len__(self):
        return len(self.energies)


def _bit(index: int, qubit: str) -> int:
    return (index >> _BIT[qubit]) & 1


def build_hamiltonian(config: CouplingConfig) -> np.ndarray:
    """Assemble the 8x8 Hamiltonian matrix for ``config``.

    Entries are written pairwise, so the result is exactly symmetric.
    """
    if not isinstance(config, CouplingConfig):
        raise InvalidConfigError("build_hamiltonian expects a CouplingConfig")
    H = np.zeros((DIM, DIM))
    for i in range(DIM):
        H[i, i] = config.h * sum(1 - 2 * _bit(i, q) for q in QUBITS)
    for (q1, q2), coupling in config.bonds().items():
        if coupling == 0.0:
            continue
        flip = (1 << _BIT[q1]) | (1 << _BIT[q2])
        for i in range(DIM):
            k = i ^ flip
            if i < k:
                H[i, k] += coupling
                H[k, i] += coupling
    return H


def _check_symmetric(M: np.ndarray):
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidConfigError(f"expected a square matrix, got shape {M.shape}")
    scale = max(1.0, float(np.max(np.sum(np.abs(M), axis=1))))
    if np.max(np.abs(M - M.T)) > 1e-12 * scale:
        raise InvalidConfigError("matrix is not symmetric")
    if not np.all(np.isfinite(M)):
        raise InvalidConfigError("matrix has non-finite entries")
    return M


def jacobi_eigh(M, tol=1e-13, max_sweeps=50):
    """Cyclic Jacobi diagonalization of a small real symmetric matrix.

    Rotations whose pivot is tiny compared with the remaining off-diagonal
    mass are skipped during the first three sweeps (threshold pivoting).
    Iteration stops once the off-diagonal Frobenius norm drops below
    ``tol * ||M||_F``.

    Returns
    -------
    energies : ndarray, ascending
    vectors : ndarray, eigenvectors as columns in matching order
    """
    M = _check_symmetric(M)
    n = M.shape[0]
    # plain lists beat numpy for n <= 8 by a wide margin
    A = [[float(x) for x in row] for row in M]
    V = [[1.0 if r == c else 0.0 for c in range(n)] for r in range(n)]
    norm_f = math.sqrt(sum(x * x for row in A for x in row))
    target = tol * norm_f

    for sweep in range(max_sweeps + 1):
        off = math.sqrt(sum(A[r][c] ** 2 for r in range(n) for c in range(n) if r != c))
        if off <= target:
            break
        if sweep == max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps", residual=off
            )
        threshold = 0.2 * off / (n * n) if sweep < 3 else 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p][q]
                if apq == 0.0 or abs(apq) < threshold:
                    continue
                theta = (A[q][q] - A[p][p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    row = A[k]
                    x, y = row[p], row[q]
                    row[p] = c * x - s * y
                    row[q] = s * x + c * y
                rp, rq = A[p], A[q]
                for k in range(n):
                    x, y = rp[k], rq[k]
                    rp[k] = c * x - s * y
                    rq[k] = s * x + c * y
                for k in range(n):
                    row = V[k]
                    x, y = row[p], row[q]
                    row[p] = c * x - s * y
                    row[q] = s * x + c * y

    diag = [A[r][r] for r in range(n)]
    order = sorted(range(n), key=lambda r: (diag[r], r))
    energies = np.array([diag[r] for r in order])
    vectors = np.array(V)[:, order]
    return energies, vectors


def eigvalsh(M) -> np.ndarray:
    return jacobi_eigh(M)[0]


def eigendecompose(op) -> Spectrum:
    """Full spectral decomposition of a Hamiltonian matrix."""
    energies, vectors = jacobi_eigh(op)
    return Spectrum(energies=energies, vectors=vectors)


def gauge_fix(vector, tol=1e-10) -> np.ndarray:
    """Flip the global sign so the first non-negligible amplitude is positive."""
    v = np.asarray(vector, dtype=float)
    for amp in v:
        if abs(amp) > tol:
            return v if amp > 0 else -v
    return v


def ground_state(spectrum: Spectrum, degeneracy_tol=1e-9):
    """Lowest eigenvector (gauge fixed) and whether the ground level is degenerate."""
    state = gauge_fix(spectrum.vectors[:, 0])
    return state, bool(spectrum.gap < degeneracy_tol)


def total_sz() -> np.ndarray:
    """Diagonal of Z_A + Z_B + Z_C in the computational basis."""
    return np.array([sum(1 - 2 * _bit(i, q) for q in QUBITS) for i in range(DIM)], dtype=float)


def relabel_qubits(vector_or_matrix, mapping) -> np.ndarray:
    """Apply a qubit relabeling, e.g. ``{"A": "B", "B": "A"}``.

    The amplitude of basis state with old labels ``s`` moves to the index
    where each old qubit's bit sits at its new label's position.
    """
    perm = np.empty(DIM, dtype=int)
    for i in range(DIM):
        k = 0
        for old in QUBITS:
            new = mapping.get(old, old)
            k |= _bit(i, old) << _BIT[new]
        perm[i] = k
    x = np.asarray(vector_or_matrix, dtype=float)
    out = np.zeros_like(x)
    if x.ndim == 1:
        out[perm] = x
    else:
        out[np.ix_(perm, perm)] = x
    return out
