"""Classical XY spins on a triangle (the cold-atom phase model)."""

from __future__ import annotations

import math

import numpy as np

from triq.errors import InvalidConfigError

# bond order: (A,B), (B,C), (A,C)
_PAIRS = ((0, 1), (1, 2), (0, 2))


def classical_xy_energy(thetas, couplings) -> float:
    """``E = -sum_<ij> J_ij cos(theta_i - theta_j)`` over the three bonds."""
    th = [float(t) for t in thetas]
    jj = [float(c) for c in couplings]
    if len(th) != 3 or len(jj) != 3:
        raise InvalidConfigError("need three angles and three couplings")
    return -sum(c * math.cos(th[p] - th[q]) for c, (p, q) in zip(jj, _PAIRS))


def _grid_energy(t2, t3, couplings):
    j_ab, j_bc, j_ac = couplings
    return -(j_ab * np.cos(t2) + j_bc * np.cos(t2 - t3) + j_ac * np.cos(t3))


def classical_ground_search(couplings, resolution=96, refine=10):
    """Global minimum of the triangle energy.

    theta_A is pinned to 0 (global rotation symmetry).  A coarse
    ``resolution x resolution`` grid over (theta_B, theta_C) is followed by
    one pass at ``refine`` times the density around the best cell.

    Returns ``(thetas, energy)``.
    """
    if resolution < 8:
        raise InvalidConfigError(f"resolution must be >= 8, got {resolution}")
    couplings = tuple(float(c) for c in couplings)
    if len(couplings) != 3 or not all(math.isfinite(c) for c in couplings):
        raise InvalidConfigError("need three finite couplings")
    step = 2 * math.pi / resolution
    axis = np.arange(resolution) * step
    t2, t3 = np.meshgrid(axis, axis, indexing="ij")
    e = _grid_energy(t2, t3, couplings)
    i, k = np.unravel_index(int(np.argmin(e)), e.shape)
    c2, c3 = axis[i], axis[k]

    fine = np.linspace(-step, step, 2 * refine + 1)
    f2, f3 = np.meshgrid(c2 + fine, c3 + fine, indexing="ij")
    ef = _grid_energy(f2, f3, couplings)
    i, k = np.unravel_index(int(np.argmin(ef)), ef.shape)
    best2 = float(f2[i, k]) % (2 * math.pi)
    best3 = float(f3[i, k]) % (2 * math.pi)
    thetas = (0.0, best2, best3)
    return thetas, classical_xy_energy(thetas, couplings)
