"""Density-matrix algebra and the correlation measures built on it.

Negativities use the in-house Jacobi solver for the partially transposed
matrices, so the numeric and analytic paths share no code with
``numpy.linalg``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from triq import analytic
from triq.errors import AnalyticDomainError, InvalidConfigError
from triq.hamiltonian import (
    QUBITS,
    CouplingConfig,
    build_hamiltonian,
    eigendecompose,
    eigvalsh,
    ground_state,
    total_sz,
)

PATHS = ("analytic-first", "numeric-only")
NEG_CLAMP = 1e-12


@dataclass(frozen=True)
class DensityMatrix:
    matrix: np.ndarray
    labels: tuple = QUBITS

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        d = 2 ** len(self.labels)
        if m.shape != (d, d):
            raise InvalidConfigError(f"matrix shape {m.shape} does not match labels {self.labels}")
        if abs(np.trace(m) - 1.0) > 1e-10:
            raise InvalidConfigError(f"density matrix trace is {np.trace(m)}")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def nqubits(self):
        return len(self.labels)

    def is_valid(self, tol=1e-10) -> bool:
        m = self.matrix
        return bool(
            np.max(np.abs(m - m.T)) <= tol
            and abs(np.trace(m) - 1.0) <= 1e-12
            and eigvalsh(0.5 * (m + m.T))[0] >= -tol
        )


def pure_density(state, labels=QUBITS) -> DensityMatrix:
    psi = np.asarray(state, dtype=float)
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(np.outer(psi, psi), labels)


def _as_density(rho) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    m = np.asarray(rho, dtype=float)
    if m.ndim == 1:
        return pure_density(m, QUBITS[: int(round(math.log2(m.size)))])
    n = int(round(math.log2(m.shape[0])))
    return DensityMatrix(m, QUBITS[:n])


def partial_trace(rho, keep) -> DensityMatrix:
    """Trace out every qubit not in ``keep``; kept qubits retain their order."""
    rho = _as_density(rho)
    keep = [q for q in rho.labels if q in set(keep)]
    if not keep:
        raise InvalidConfigError("partial_trace must keep at least one qubit")
    n = rho.nqubits
    t = rho.matrix.reshape((2,) * (2 * n))
    # contract traced axes pairwise from the highest axis down
    for q in reversed(rho.labels):
        if q in keep:
            continue
        i = rho.labels.index(q)
        nk = t.ndim // 2
        t = np.trace(t, axis1=i, axis2=i + nk)
    d = 2 ** len(keep)
    return DensityMatrix(t.reshape(d, d), tuple(keep))


def partial_transpose(rho, subsystem) -> np.ndarray:
    """Swap bra/ket indices of the qubits in ``subsystem`` (a label or labels)."""
    rho = _as_density(rho)
    subs = [subsystem] if isinstance(subsystem, str) else list(subsystem)
    n = rho.nqubits
    t = rho.matrix.reshape((2,) * (2 * n))
    for q in subs:
        if q not in rho.labels:
            raise InvalidConfigError(f"qubit {q!r} not in {rho.labels}")
        i = rho.labels.index(q)
        t = np.swapaxes(t, i, n + i)
    return t.reshape(2**n, 2**n)


def negativity(rho, subsystem) -> float:
    """Negativity across the cut separating ``subsystem`` from the rest.

    Equals ``||rho^T||_1 - 1 = 2 * sum |negative eigenvalues|``.
    """
    pt = partial_transpose(rho, subsystem)
    neg = sum(x for x in eigvalsh(0.5 * (pt + pt.T)) if x < 0)
    value = -2.0 * neg
    return 0.0 if value < NEG_CLAMP else value


def _others(central):
    if central not in QUBITS:
        raise InvalidConfigError(f"central qubit must be one of {QUBITS}, got {central!r}")
    return [q for q in QUBITS if q != central]


def pair_negativity(rho, q1, q2) -> float:
    reduced = partial_trace(rho, (q1, q2))
    return negativity(reduced, q1)


def one_vs_rest_negativity_pure(state, central) -> float:
    """``N_{c|rest}`` of a pure state from amplitudes: ``2 sqrt(det rho_c)``."""
    psi = np.asarray(state, dtype=float)
    psi = psi / np.linalg.norm(psi)
    bit = 2 - QUBITS.index(central)
    zero = [i for i in range(8) if not (i >> bit) & 1]
    a = [psi[i] for i in zero]
    b = [psi[i | (1 << bit)] for i in zero]
    # det rho_c = |a|^2 |b|^2 - (a.b)^2 written as a sum of squares
    # (Lagrange identity), which stays accurate for nearly product states
    det = sum((a[i] * b[k] - a[k] * b[i]) ** 2 for i in range(4) for k in range(i + 1, 4))
    return 2.0 * math.sqrt(det)


def t3_squared(state_or_rho, central="B") -> float:
    """Monogamy residual ``N_{c|rest}^2 - N_{c,x}^2 - N_{c,y}^2`` (unclamped)."""
    x, y = _others(central)
    arr = state_or_rho.matrix if isinstance(state_or_rho, DensityMatrix) else np.asarray(state_or_rho)
    if arr.ndim == 1:
        rho = pure_density(arr)
        n_c = one_vs_rest_negativity_pure(arr, central)
    else:
        rho = _as_density(state_or_rho)
        n_c = negativity(rho, central)
    return n_c**2 - pair_negativity(rho, *sorted((central, x), key=QUBITS.index)) ** 2 - pair_negativity(
        rho, *sorted((central, y), key=QUBITS.index)
    ) ** 2


def t3(state_or_rho, central="B") -> float:
    """Tripartite correlation with ``central`` as the focus qubit.

    Pure states (1-d input) use the amplitude route for ``N_{c|rest}``;
    density matrices use the full partial transpose (mixed-state extension).
    Roundoff-negative residuals are clamped to zero before the root.
    """
    return math.sqrt(max(0.0, t3_squared(state_or_rho, central)))


def magnetization(state) -> float:
    """``<psi| Z_A + Z_B + Z_C |psi>``."""
    psi = np.asarray(state, dtype=float)
    return float(np.dot(psi * psi, total_sz()) / np.dot(psi, psi))


# --------------------------------------------------------------------------
# ground states by path


def _check_path(path):
    if path not in PATHS:
        raise InvalidConfigError(f"path must be one of {PATHS}, got {path!r}")


def solve_ground(config: CouplingConfig, path="analytic-first"):
    """Ground state of ``config``.

    Returns ``(state, energy, path_used, flags)`` where ``path_used`` is
    ``"analytic"`` or ``"numeric"``.
    """
    _check_path(path)
    flags = []
    if path == "analytic-first" and analytic.analytic_available(
        config.j, config.h, config.eta, config.omega
    ):
        try:
            vec, e0 = analytic.analytic_ground_vector(config.j, config.eta, config.omega)
            return vec, e0, "analytic", flags
        except AnalyticDomainError:
            flags.append("analytic-fallback")
    spec = eigendecompose(build_hamiltonian(config))
    vec, degenerate = ground_state(spec)
    if degenerate:
        flags.append("degenerate-ground")
    return vec, float(spec.energies[0]), "numeric", flags


def ground_t3(config: CouplingConfig, central="B", path="analytic-first") -> float:
    if (
        central == "B"
        and path == "analytic-first"
        and analytic.analytic_available(config.j, config.h, config.eta, config.omega)
    ):
        try:
            return analytic.analytic_t3_central_b(config.j, config.eta, config.omega)
        except AnalyticDomainError:
            pass
    state = solve_ground(config, path)[0]
    return t3(state, central)


def default_step(j) -> float:
    return 1e-4 * max(1.0, abs(j))


def derivative_in_j(fn, j, step=None):
    """Finite-difference derivative of ``fn(j)``.

    Central difference with the step shrunk so ``j +- step`` never crosses
    zero; exactly at ``j = 0`` a second-order forward stencil is used.
    Returns ``(value, one_sided)``.
    """
    d = default_step(j) if step is None else float(step)
    if not d > 0:
        raise InvalidConfigError(f"finite-difference step must be positive, got {step}")
    if j == 0:
        return (-3 * fn(0.0) + 4 * fn(d) - fn(2 * d)) / (2 * d), True
    d = min(d, abs(j) / 2)
    return (fn(j + d) - fn(j - d)) / (2 * d), False


def mqc_susceptibility(config: CouplingConfig, central="B", step=None, path="analytic-first") -> float:
    """``dT3/dJ`` of the ground state by finite differences."""
    value, _ = derivative_in_j(lambda j: ground_t3(config.replace(j=j), central, path), config.j, step)
    return value


def magnetic_susceptibility(config: CouplingConfig, step=None, path="analytic-first") -> float:
    """``d<sum_i Z_i>/dJ`` of the ground state (constant prefactor dropped)."""
    value, _ = derivative_in_j(
        lambda j: magnetization(solve_ground(config.replace(j=j), path)[0]), config.j, step
    )
    return value


def classify_regime(t3_value, chi_t3, j_sign_hint=None, dead_band=1e-3) -> str:
    """Regime from the sign of the MQC susceptibility.

    Inside the dead band the answer is ``"indeterminate"`` unless a sign
    hint for J is supplied.
    """
    if chi_t3 > dead_band:
        return "frustrated"
    if chi_t3 < -dead_band:
        return "nonfrustrated"
    if j_sign_hint:
        return "frustrated" if j_sign_hint > 0 else "nonfrustrated"
    return "indeterminate"


@dataclass
class CorrelationReport:
    n_a_bc: float
    n_b_ac: float
    n_c_ab: float
    n_ab: float
    n_ac: float
    n_bc: float
    t3_central_a: float
    t3_central_b: float
    t3_central_c: float
    chi_t3: float
    chi_m: float
    energy: float
    regime: str
    path: str
    flags: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


def state_measures(state) -> dict:
    """All one-vs-two and pairwise negativities plus T3 for each central qubit."""
    rho = pure_density(state)
    out = {}
    for q in QUBITS:
        out[f"n_{q.lower()}_{''.join(x.lower() for x in _others(q))}"] = one_vs_rest_negativity_pure(state, q)
    for q1, q2 in (("A", "B"), ("A", "C"), ("B", "C")):
        out[f"n_{q1.lower()}{q2.lower()}"] = pair_negativity(rho, q1, q2)
    for q in QUBITS:
        x, y = _others(q)
        pairs = {"A": ("n_ab", "n_ac"), "B": ("n_ab", "n_bc"), "C": ("n_ac", "n_bc")}[q]
        one = out[f"n_{q.lower()}_{x.lower()}{y.lower()}"]
        out[f"t3_central_{q.lower()}"] = math.sqrt(
            max(0.0, one**2 - out[pairs[0]] ** 2 - out[pairs[1]] ** 2)
        )
    return out


def correlation_report(
    config: CouplingConfig, path="analytic-first", step=None, central="B", dead_band=1e-3
) -> CorrelationReport:
    state, energy, used, flags = solve_ground(config, path)
    measures = state_measures(state)
    chi_t3, one_sided = derivative_in_j(
        lambda j: ground_t3(config.replace(j=j), central, path), config.j, step
    )
    chi_m = magnetic_susceptibility(config, step, path)
    if one_sided:
        flags.append("one-sided")
    t3_value = measures[f"t3_central_{central.lower()}"]
    regime = classify_regime(t3_value, chi_t3, dead_band=dead_band)
    return CorrelationReport(
        chi_t3=chi_t3,
        chi_m=chi_m,
        energy=energy,
        regime=regime,
        path=used,
        flags=flags,
        **measures,
    )
