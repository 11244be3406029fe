"""Closed-form versus exact-diagonalization cross-check over parameter grids."""

from __future__ import annotations

import numpy as np

from triq import analytic
from triq.correlations import state_measures
from triq.errors import AnalyticDomainError
from triq.hamiltonian import CouplingConfig, build_hamiltonian, eigendecompose, ground_state

GRIDS = {
    # (one-parameter grid size, per-branch grid size)
    "default": (20, 15),
    "quick": (6, 5),
}


def _axis(lo, hi, n):
    return [lo + k * (hi - lo) / (n - 1) for k in range(n)]


def _j_axis(n):
    # an even count on the symmetric interval never lands on j = 0
    values = _axis(-8.0, 8.0, n if n % 2 == 0 else n + 1)
    return [v for v in values if v != 0.0]


def oracle_check(grid="default"):
    """Maximum analytic-vs-numeric deviations.

    Returns a dict with ``energy_dev``, ``measure_dev``, ``points``,
    ``skipped`` (points the closed forms refuse, e.g. a branch boundary)
    and ``worst`` (the parameters of the largest measure deviation).
    """
    n1, n2 = GRIDS[grid]
    energy_dev = 0.0
    measure_dev = 0.0
    worst = None
    points = 0
    skipped = []

    def record(dev, where):
        nonlocal measure_dev, worst
        if dev > measure_dev:
            measure_dev, worst = dev, where

    for j in _j_axis(n1):
        for eta in _axis(0.1, 2.0, n1):
            points += 1
            spec = eigendecompose(build_hamiltonian(CouplingConfig(j, eta=eta)))
            try:
                levels = np.sort(analytic.analytic_spectrum_one_param(j, eta))
                n_ab, t3 = analytic.analytic_nab_t3_one_param(j, eta)
            except AnalyticDomainError:
                skipped.append({"j": j, "eta": eta, "omega": 1.0})
                continue
            energy_dev = max(energy_dev, float(np.max(np.abs(levels - spec.energies))))
            num = state_measures(ground_state(spec)[0])
            dev = max(abs(n_ab - num["n_ab"]), abs(t3 - num["t3_central_b"]))
            record(float(dev), {"j": j, "eta": eta, "omega": 1.0})

    for omega in analytic.BRANCH_OMEGAS:
        for j in _j_axis(n2):
            for eta in _axis(0.1, 2.0, n2):
                points += 1
                spec = eigendecompose(build_hamiltonian(CouplingConfig(j, eta=eta, omega=omega)))
                try:
                    e0 = analytic.ground_energy_two_param(j, eta, omega)
                    meas = analytic.analytic_negativities_two_param(j, eta, omega)
                except AnalyticDomainError:
                    skipped.append({"j": j, "eta": eta, "omega": omega})
                    continue
                energy_dev = max(energy_dev, abs(e0 - float(spec.energies[0])))
                num = state_measures(ground_state(spec)[0])
                dev = max(
                    abs(meas["n_b_ac"] - num["n_b_ac"]),
                    abs(meas["n_ab"] - num["n_ab"]),
                    abs(meas["n_bc"] - num["n_bc"]),
                    abs(meas["t3"] - num["t3_central_b"]),
                )
                record(float(dev), {"j": j, "eta": eta, "omega": omega})

    return {
        "grid": grid,
        "points": points,
        "energy_dev": energy_dev,
        "measure_dev": float(measure_dev),
        "max_deviation": float(max(energy_dev, measure_dev)),
        "skipped": skipped,
        "worst": worst,
    }
