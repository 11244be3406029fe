"""Closed-form spectra, eigenvectors and correlation measures.

This is an independent evaluation path: nothing here calls the numeric
eigensolver.  Energies come from trigonometric roots of the sector cubics
(single anisotropy, ``omega = 1``) or from the resolvent cubic of the odd
sector quartic (``omega`` in {0.8, 1.2}).  All formulas assume ``h = 1``.

A few printed coefficients in the source derivation are known to be
transcription errors; the forms used here are the ones that reproduce the
exact Hamiltonian (see the test-suite oracles).

Sector bases used internally (basis convention as in :mod:`triq.hamiltonian`):

* odd symmetric block: ``(|001>+|100>)/sqrt2, |010>, |111>``
* even symmetric block: ``|000>, (|011>+|110>)/sqrt2, |101>``
* antisymmetric states ``(|110>-|011>)/sqrt2`` and ``(|100>-|001>)/sqrt2``
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from triq.errors import (
    AnalyticDomainError,
    BranchAmbiguityError,
    UnsupportedBranchError,
)
from triq.hamiltonian import gauge_fix

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
ACOS_GUARD = 1e-10
BRANCH_OMEGAS = (0.8, 1.2)


def _acos(x):
    if not math.isfinite(x) or abs(x) > 1.0 + ACOS_GUARD:
        raise AnalyticDomainError(f"arccos argument {x!r} outside [-1, 1]")
    return math.acos(min(1.0, max(-1.0, x)))


def _check_point(j, eta):
    if not (math.isfinite(j) and math.isfinite(eta)) or eta < 0:
        raise AnalyticDomainError(f"closed forms need finite j and eta >= 0 (j={j}, eta={eta})")


# --------------------------------------------------------------------------
# single anisotropy (omega = 1)


@dataclass(frozen=True)
class TrigCubicParamsA:
    """Coefficients of the two sector cubics and their trigonometric angles."""

    a1: float
    a2: float
    b1: float
    b2: float
    c1: float
    c2: float
    p1: float
    p2: float
    q1: float
    q2: float
    theta1: float
    theta2: float


def cubic_params_one_param(j, eta) -> TrigCubicParamsA:
    _check_point(j, eta)
    a1 = 1 - j * eta
    a2 = -1 - j * eta
    b1 = -5 - 4 * j**2 - 2 * j * eta - j**2 * eta**2
    b2 = -5 - 4 * j**2 + 2 * j * eta - j**2 * eta**2
    c1 = 3 - 4 * j**2 + 3 * j * eta - 4 * j**3 * eta + j**2 * eta**2 + j**3 * eta**3
    c2 = -3 + 4 * j**2 + 3 * j * eta - 4 * j**3 * eta - j**2 * eta**2 + j**3 * eta**3
    p1 = -b1 + a1**2 / 3
    p2 = -b2 + a2**2 / 3
    if p1 <= 0 or p2 <= 0:
        raise AnalyticDomainError(f"non-positive cubic parameter p (p1={p1}, p2={p2})")
    q1 = -c1 - 2 * a1**3 / 27 + a1 * b1 / 3
    q2 = -c2 - 2 * a2**3 / 27 + a2 * b2 / 3
    theta1 = _acos(3 * q1 * math.sqrt(3 * p1) / (2 * p1**2)) / 3
    theta2 = _acos(3 * q2 * math.sqrt(3 * p2) / (2 * p2**2)) / 3
    return TrigCubicParamsA(a1, a2, b1, b2, c1, c2, p1, p2, q1, q2, theta1, theta2)


def _cubic_roots(p, theta, a):
    # (lowest, highest, middle) root of the depressed-cubic trig solution
    s = math.sqrt(p / 3)
    low = -s * (math.cos(theta) + SQRT3 * math.sin(theta)) - a / 3
    top = 2 * s * math.cos(theta) - a / 3
    mid = -s * (math.cos(theta) - SQRT3 * math.sin(theta)) - a / 3
    return low, top, mid


def analytic_spectrum_one_param(j, eta) -> np.ndarray:
    """Energies ``E0..E7`` in closed-form labelling (not sorted).

    ``E0`` is always the ground energy.  ``E2 = a2`` and ``E3 = a1`` are the
    antisymmetric levels.
    """
    prm = cubic_params_one_param(j, eta)
    lo1, top1, mid1 = _cubic_roots(prm.p1, prm.theta1, prm.a1)
    lo2, top2, mid2 = _cubic_roots(prm.p2, prm.theta2, prm.a2)
    return np.array([lo1, lo2, prm.a2, prm.a1, top2, mid2, top1, mid1])


def _odd_block(j, eta):
    r = SQRT2 * j
    return np.array([[1 + eta * j, r, r], [r, 1.0, eta * j], [r, eta * j, -3.0]])


def _even_block(j, eta):
    r = SQRT2 * j
    return np.array([[3.0, r, eta * j], [r, -1 + eta * j, r], [eta * j, r, -1.0]])


def _embed_odd(x):
    v = np.zeros(8)
    v[1] = v[4] = x[0] / SQRT2
    v[2] = x[1]
    v[7] = x[2]
    return v


def _embed_even(x):
    v = np.zeros(8)
    v[0] = x[0]
    v[3] = v[6] = x[1] / SQRT2
    v[5] = x[2]
    return v


def _null_vector(block, energy):
    """Null vector of ``block - energy*I`` as the largest row cross product."""
    A = block - energy * np.eye(3)
    rows = (A[0], A[1], A[2])
    cands = [np.cross(rows[0], rows[1]), np.cross(rows[0], rows[2]), np.cross(rows[1], rows[2])]
    best = max(cands, key=lambda c: float(np.dot(c, c)))
    norm = math.sqrt(float(np.dot(best, best)))
    scale = max(1.0, float(np.max(np.abs(A)))) ** 2
    if norm <= 1e-12 * scale:
        raise AnalyticDomainError(f"degenerate level {energy} inside a symmetry block")
    return best / norm


def _block_vector(block, energy, candidate):
    """Normalize ``candidate`` if it solves the block, else fall back to the null vector."""
    tol = 1e-8 * max(1.0, abs(energy))
    cand = np.asarray(candidate, dtype=float)
    if np.all(np.isfinite(cand)):
        norm = float(np.linalg.norm(cand))
        if norm > 0:
            x = cand / norm
            if np.linalg.norm(block @ x - energy * x) <= tol:
                return x
    return _null_vector(block, energy)


def _tetra_amplitudes(j, eta, e):
    alpha = j * (2 * j + 2 * j * e + (2 * e + e**2 - 3) * eta - j**2 * eta * (eta**2 - 2))
    gamma = j * (e + j * eta - 1) * (e + j * eta + 3)
    chi = j * (e + j * eta - 1) ** 2
    return alpha, gamma, chi


@dataclass(frozen=True)
class AnalyticGroundStateA:
    """Ground state ``(alpha|001> + gamma|010> + alpha|100> + chi|111>)/k0``."""

    alpha: float
    gamma: float
    chi: float
    k0: float
    e0: float

    @property
    def vector(self) -> np.ndarray:
        v = np.zeros(8)
        v[[1, 2, 4, 7]] = np.array([self.alpha, self.gamma, self.alpha, self.chi]) / self.k0
        return v


def analytic_ground_state_one_param(j, eta) -> AnalyticGroundStateA:
    e0 = float(analytic_spectrum_one_param(j, eta)[0])
    alpha, gamma, chi = _tetra_amplitudes(j, eta, e0)
    x = _block_vector(_odd_block(j, eta), e0, (SQRT2 * alpha, gamma, chi))
    k0 = math.sqrt(2 * alpha**2 + gamma**2 + chi**2)
    expected = np.array([SQRT2 * alpha, gamma, chi]) / k0 if k0 > 0 else None
    if expected is None or not np.allclose(np.abs(expected), np.abs(x), atol=1e-9):
        # printed amplitudes degenerate here; rebuild them from the null vector
        alpha, gamma, chi, k0 = x[0] / SQRT2, x[1], x[2], 1.0
    return AnalyticGroundStateA(alpha=alpha, gamma=gamma, chi=chi, k0=k0, e0=e0)


def analytic_eigenvectors_one_param(j, eta):
    """Closed-form eigenbasis.

    Returns
    -------
    energies : ndarray (8,), labelled as in :func:`analytic_spectrum_one_param`
    vectors : ndarray (8, 8), column ``i`` is the eigenvector for ``energies[i]``
    """
    energies = analytic_spectrum_one_param(j, eta)
    odd, even = _odd_block(j, eta), _even_block(j, eta)
    cols = [None] * 8
    for i in (0, 6, 7):
        e = energies[i]
        alpha, gamma, chi = _tetra_amplitudes(j, eta, e)
        cols[i] = _embed_odd(_block_vector(odd, e, (SQRT2 * alpha, gamma, chi)))
    for i in (1, 4, 5):
        e = energies[i]
        # amplitudes multiplied through by (E + 1 + J eta) to remove the pole
        den = e + 1 + j * eta
        num_alpha = ((e + 1) * (e + 1 - j * eta) - 2 * j**2) / j if j != 0 else math.nan
        num_delta = e * eta + 2 * j + eta - j * eta**2
        cols[i] = _embed_even(_block_vector(even, e, (num_alpha, SQRT2 * den, num_delta)))
    anti_even = np.zeros(8)
    anti_even[6], anti_even[3] = 1 / SQRT2, -1 / SQRT2
    anti_odd = np.zeros(8)
    anti_odd[4], anti_odd[1] = 1 / SQRT2, -1 / SQRT2
    cols[2], cols[3] = anti_even, anti_odd
    vectors = np.column_stack([gauge_fix(c) for c in cols])
    return energies, vectors


def analytic_nab_t3_one_param(j, eta):
    """``N_AB`` and ``T3^{B|AC}`` of the ground state from its amplitudes.

    With ``m = sqrt((a^2-g^2)^2 + 4 a^2 c^2)``::

        N_AB = (m - a^2 - g^2) / K0^2
        T3   = 2 sqrt((a^2+g^2) m - (a^2-g^2)^2) / K0^2
    """
    gs = analytic_ground_state_one_param(j, eta)
    a2, g2, c2, k2 = gs.alpha**2, gs.gamma**2, gs.chi**2, gs.k0**2
    m = math.sqrt((a2 - g2) ** 2 + 4 * a2 * c2)
    n_ab = max(0.0, (m - a2 - g2) / k2)
    t3 = 2 * math.sqrt(max(0.0, (a2 + g2) * m - (a2 - g2) ** 2)) / k2
    return n_ab, t3


def t3_closed_form_unrooted(j, eta):
    """``2 sqrt2 ((a^2+g^2) m - (a^2-g^2)^2) / K0^2`` with no root over the bracket.

    Not a valid T3; kept so the discrepancy with the definitional value
    can be reported.
    """
    gs = analytic_ground_state_one_param(j, eta)
    a2, g2, c2, k2 = gs.alpha**2, gs.gamma**2, gs.chi**2, gs.k0**2
    m = math.sqrt((a2 - g2) ** 2 + 4 * a2 * c2)
    return 2 * SQRT2 * ((a2 + g2) * m - (a2 - g2) ** 2) / k2


def isotropic_levels(j) -> np.ndarray:
    """All eight energies at ``eta = omega = h = 1``, ascending.

    The spectrum splits into the spin-3/2 multiplet (two 2x2 blocks) and two
    spin-1/2 doublets at ``-J +- 1``.
    """
    r_minus = math.sqrt(j * j - j + 1)
    r_plus = math.sqrt(j * j + j + 1)
    levels = [
        j + 1 - 2 * r_minus,
        j + 1 + 2 * r_minus,
        j - 1 - 2 * r_plus,
        j - 1 + 2 * r_plus,
        -j - 1,
        -j - 1,
        -j + 1,
        -j + 1,
    ]
    return np.array(sorted(levels))


def isotropic_low_eigenvectors(j):
    """Lowest state of each symmetric sector at ``eta = omega = 1``.

    ``e0 = (|001>+|010>+|100> + a|111>)/K0`` with ``a = (E0+J-1)/(E0+J+3)``,
    ``e1 = (b|000> + |011>+|101>+|110>)/K1`` with ``b = (E1-2J+1)/J``.
    Returns ``(E0, e0, E1, e1)``; ``e0`` is always the ground state, ``e1``
    is the first excited state only for ``J < 0``.
    """
    if j == 0:
        raise AnalyticDomainError("isotropic even-sector form is singular at J = 0")
    e0 = j - 1 - 2 * math.sqrt(j * j + j + 1)
    e1 = j + 1 - 2 * math.sqrt(j * j - j + 1)
    a = (e0 + j - 1) / (e0 + j + 3)
    b = (e1 - 2 * j + 1) / j
    v0 = np.zeros(8)
    v0[[1, 2, 4, 7]] = [1, 1, 1, a]
    v1 = np.zeros(8)
    v1[[0, 3, 5, 6]] = [b, 1, 1, 1]
    return e0, gauge_fix(v0 / np.linalg.norm(v0)), e1, gauge_fix(v1 / np.linalg.norm(v1))


# --------------------------------------------------------------------------
# two anisotropies, omega in {0.8, 1.2}

# omega -> (J^2 coeff in a, J^3 eta coeff in b, J^4 coeff in c, threshold numerator)
_BRANCH_COEFFS = {0.8: (82, 800, 81, 5 / 4), 1.2: (122, 1200, 121, 5 / 6)}


def _branch(omega):
    for key in BRANCH_OMEGAS:
        if omega == key:
            return key
    raise UnsupportedBranchError(f"closed forms exist only for omega in {BRANCH_OMEGAS}, got {omega}")


def branch_threshold(eta, omega) -> float:
    """Coupling where the piecewise forms switch branch: ``(k/eta)^(1/3)``."""
    omega = _branch(omega)
    if eta <= 0:
        return math.inf
    return (_BRANCH_COEFFS[omega][3] / eta) ** (1.0 / 3.0)


def _upper_branch(j, eta, omega):
    thr = branch_threshold(eta, omega)
    if abs(j - thr) < 1e-9:
        raise BranchAmbiguityError(f"j={j} is within 1e-9 of the branch threshold {thr}")
    return j > thr


def ground_energy_two_param(j, eta, omega) -> float:
    """Ground energy via the resolvent cubic of the odd-sector quartic.

    With ``y = 10 E`` the quartic reads ``y^4 + 4a y^2 + 8b y + 16c = 0``.
    """
    _check_point(j, eta)
    omega = _branch(omega)
    k2, kb, k4, _ = _BRANCH_COEFFS[omega]
    upper = _upper_branch(j, eta, omega)
    a = -150 - k2 * j**2 - 50 * j**2 * eta**2
    b = 1000 - kb * j**3 * eta
    c = 25 * j**2 * (50 * eta**2 - k2 * j**2 * eta**2 + 25 * j**2 * eta**4 + k2) + k4 * j**4 - 1875
    u = -16 * a**2 + 64 * c + 64 * a**2 / 3
    if u <= 0:
        raise AnalyticDomainError(f"resolvent parameter u={u} is not positive")
    v = 64 * b**2 + 128 * a**3 / 27 - 512 * a * c / 3
    theta = _acos(3 * v * math.sqrt(3 * u) / (2 * u**2)) / 3
    s = math.sqrt(u / 3)
    shift = 8 * a / 3
    l1 = 2 * s * math.cos(theta) - shift
    l2 = -s * (math.cos(theta) + SQRT3 * math.sin(theta)) - shift
    l3 = -s * (math.cos(theta) - SQRT3 * math.sin(theta)) - shift
    guard = 1e-9 * max(1.0, abs(shift))
    if min(l1, l2, l3) < -guard:
        raise AnalyticDomainError(f"negative resolvent root ({l1}, {l2}, {l3})")
    r1, r2, r3 = (math.sqrt(max(0.0, x)) for x in (l1, l2, l3))
    sign = 1.0 if upper else -1.0
    return (-r1 + sign * r2 - r3) / 20


def _tetra_amplitudes_two_param(j, eta, omega, e):
    if omega == 0.8:
        xi = 125 * (e - 1) ** 2 * (e + 3) - 200 * j**3 * eta - 5 * j**2 * (
            41 * e + 25 * eta**2 * e - 25 * eta**2 + 59
        )
        zeta = 250 * j**2 * (e + 1) * eta + 4 * j**3 * (25 * eta**2 + 9) + 100 * j * (e**2 + 2 * e - 3)
        delta = 200 * j**2 * (e + 1) + 5 * j**3 * (41 * eta - 25 * eta**3) + 125 * (
            e**2 + 2 * e - 3
        ) * j * eta
        tau = 125 * j * (e - 1) ** 2 + 200 * j**2 * (e - 1) * eta + 5 * j**3 * (25 * eta**2 - 9)
    else:
        xi = 125 * (e - 1) ** 2 * (e + 3) - 300 * j**3 * eta - 5 * j**2 * (
            61 * e + 25 * eta**2 * e - 25 * eta**2 + 39
        )
        zeta = 250 * j**2 * (e + 1) * eta + 2 * j**3 * (75 * eta**2 - 33) + 150 * j * (e**2 + 2 * e - 3)
        delta = 300 * j**2 * (e + 1) + 5 * j**3 * (61 * eta - 25 * eta**3) + 125 * (
            e**2 + 2 * e - 3
        ) * j * eta
        tau = 125 * j * (e - 1) ** 2 + 300 * j**2 * (e - 1) * eta + 5 * j**3 * (25 * eta**2 + 11)
    return xi, zeta, delta, tau


def odd_sector_block(j, eta, omega) -> np.ndarray:
    """Hamiltonian restricted to ``|001>, |010>, |100>, |111>`` (h = 1)."""
    w, n = omega * j, eta * j
    return np.array(
        [
            [1.0, w, n, j],
            [w, 1.0, j, n],
            [n, j, 1.0, w],
            [j, n, w, -3.0],
        ]
    )


@dataclass(frozen=True)
class AnalyticGroundStateB:
    """Ground state ``(xi|001> + zeta|010> + delta|100> + tau|111>)/kcal0``."""

    xi: float
    zeta: float
    delta: float
    tau: float
    kcal0: float
    e0: float
    omega_branch: float

    @property
    def vector(self) -> np.ndarray:
        v = np.zeros(8)
        v[[1, 2, 4, 7]] = np.array([self.xi, self.zeta, self.delta, self.tau]) / self.kcal0
        return v


def analytic_ground_two_param(j, eta, omega) -> AnalyticGroundStateB:
    omega = _branch(omega)
    e0 = ground_energy_two_param(j, eta, omega)
    xi, zeta, delta, tau = _tetra_amplitudes_two_param(j, eta, omega, e0)
    kcal0 = math.sqrt(xi**2 + zeta**2 + delta**2 + tau**2)
    if not kcal0 > 0:
        raise AnalyticDomainError(f"amplitudes vanish at j={j}, eta={eta}, omega={omega}")
    x = np.array([xi, zeta, delta, tau]) / kcal0
    block = odd_sector_block(j, eta, omega)
    if np.linalg.norm(block @ x - e0 * x) > 1e-8 * max(1.0, abs(e0)):
        raise AnalyticDomainError(f"amplitude formula degenerate at j={j}, eta={eta}, omega={omega}")
    return AnalyticGroundStateB(xi, zeta, delta, tau, kcal0, e0, omega)


def analytic_negativities_two_param(j, eta, omega) -> dict:
    """``N_{B|AC}``, ``N_AB``, ``N_BC`` and ``T3^{B|AC}`` from the piecewise forms.

    Amplitudes are normalized first, so every normalization factor is 1.
    """
    gs = analytic_ground_two_param(j, eta, omega)
    upper = _upper_branch(j, eta, gs.omega_branch)
    k = gs.kcal0
    xi, ze, de, ta = ((x / k) ** 2 for x in (gs.xi, gs.zeta, gs.delta, gs.tau))
    t0 = math.sqrt((ze - de) ** 2 + 4 * xi * ta)
    n0 = math.sqrt((xi - ze) ** 2 + 4 * de * ta)
    n_b_ac = 2 * math.sqrt((xi + de) * (ze + ta))
    f0 = (xi + ze) * n0 + (ze + de) * t0 - (xi - ze) ** 2
    if gs.omega_branch == 0.8:
        s0 = math.sqrt((de - ta) ** 2 + 4 * xi * ze)
        w0 = xi + ze + de + ta + n0 + s0 + abs(xi + ze - n0) + abs(de + ta - s0)
        n_ab = t0 - ze - de
        if upper:
            n_bc = 0.5 * w0 - 1
            f1 = 4 * (xi + de) * (ze + ta) - (de + ze - t0) ** 2
            t3 = math.sqrt(max(0.0, f1 - 0.25 * (w0 - 2) ** 2))
        else:
            n_bc = n0 - xi - ze
            t3 = SQRT2 * math.sqrt(max(0.0, f0 - (ze - de) ** 2))
    else:
        r = math.sqrt((xi - ta) ** 2 + 4 * ze * de)
        w = xi + ze + de + ta + t0 + r + abs(xi + ta - r) + abs(ze + de - t0)
        n_bc = n0 - xi - ze
        if upper:
            n_ab = 0.5 * w - 1
            f1 = 4 * (xi + de) * (ze + ta) - (xi + ze - n0) ** 2
            t3 = math.sqrt(max(0.0, f1 - 0.25 * (w - 2) ** 2))
        else:
            n_ab = t0 - ze - de
            t3 = SQRT2 * math.sqrt(max(0.0, f0 - (ze - de) ** 2))
    return {
        "n_b_ac": n_b_ac,
        "n_ab": max(0.0, n_ab),
        "n_bc": max(0.0, n_bc),
        "t3": t3,
    }


def analytic_t3_two_param(j, eta, omega) -> float:
    return analytic_negativities_two_param(j, eta, omega)["t3"]


# --------------------------------------------------------------------------
# dispatch used by the report/sweep layers


def analytic_available(j, h, eta, omega) -> bool:
    return h == 1.0 and (omega == 1.0 or omega in BRANCH_OMEGAS)


def analytic_ground_vector(j, eta, omega) -> tuple[np.ndarray, float]:
    """Ground state vector and energy from whichever closed form covers ``omega``."""
    if omega == 1.0:
        gs = analytic_ground_state_one_param(j, eta)
    else:
        gs = analytic_ground_two_param(j, eta, omega)
    return gauge_fix(gs.vector), gs.e0


def analytic_t3_central_b(j, eta, omega) -> float:
    if omega == 1.0:
        return analytic_nab_t3_one_param(j, eta)[1]
    return analytic_t3_two_param(j, eta, omega)
