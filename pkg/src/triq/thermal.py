"""Gibbs states and finite-temperature tripartite correlations (k_B = 1)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from triq import analytic
from triq.correlations import DensityMatrix, t3
from triq.errors import AnalyticDomainError, InvalidConfigError
from triq.hamiltonian import CouplingConfig, Spectrum, build_hamiltonian, eigendecompose


@dataclass(frozen=True)
class ThermalPoint:
    temperature: float
    weights: np.ndarray
    rho: DensityMatrix


def gibbs_state(spectrum: Spectrum, temperature, degeneracy_tol=1e-9) -> ThermalPoint:
    """Thermal state ``sum_i exp(-E_i/T) |e_i><e_i| / Z``.

    Energies are shifted by the ground energy before exponentiation.  At
    ``T = 0`` the result is the equal mixture over the (possibly
    degenerate) ground level.
    """
    if not temperature >= 0 or not math.isfinite(temperature):
        raise InvalidConfigError(f"temperature must be finite and >= 0, got {temperature}")
    energies = np.asarray(spectrum.energies, dtype=float)
    shifted = energies - energies[0]
    if temperature == 0:
        weights = (shifted < degeneracy_tol).astype(float)
    else:
        weights = np.exp(-shifted / temperature)
    weights = weights / weights.sum()
    V = spectrum.vectors
    rho = (V * weights) @ V.T
    rho = 0.5 * (rho + rho.T)
    rho /= np.trace(rho)
    return ThermalPoint(float(temperature), weights, DensityMatrix(rho))


def thermal_spectrum(config: CouplingConfig, path="numeric-only"):
    """Spectrum for Gibbs states; closed-form eigenbasis when ``omega = h = 1``.

    Returns ``(spectrum, path_used)``.
    """
    if path == "analytic-first" and config.omega == 1.0 and config.h == 1.0:
        try:
            energies, vectors = analytic.analytic_eigenvectors_one_param(config.j, config.eta)
            order = np.argsort(energies, kind="stable")
            return Spectrum(energies[order], vectors[:, order]), "analytic"
        except AnalyticDomainError:
            pass
    return eigendecompose(build_hamiltonian(config)), "numeric"


def thermal_t3(config: CouplingConfig, temperature, central="B", path="numeric-only") -> float:
    spectrum, _ = thermal_spectrum(config, path)
    return t3(gibbs_state(spectrum, temperature).rho, central)


def thermal_t3_curve(config: CouplingConfig, temperatures, central="B", path="numeric-only"):
    spectrum, used = thermal_spectrum(config, path)
    values = np.array([t3(gibbs_state(spectrum, T).rho, central) for T in temperatures])
    return values, used


def robustness_delta(config: CouplingConfig, temperature, central="B", path="numeric-only") -> float:
    """Drop in T3 between zero temperature and ``temperature``."""
    if not temperature > 0:
        raise InvalidConfigError(f"robustness delta needs temperature > 0, got {temperature}")
    spectrum, _ = thermal_spectrum(config, path)
    t0 = t3(gibbs_state(spectrum, 0.0).rho, central)
    return t0 - t3(gibbs_state(spectrum, temperature).rho, central)


def temperature_grid(t_max, count=50, first=1e-3):
    """Geometric spacing near zero followed by a linear run up to ``t_max``.

    A fifth of the points (at least two) are geometric from ``first`` up to
    the knee ``min(0.05, t_max/10)``; the rest are linear from the knee.
    """
    if count < 4 or not t_max > first:
        raise InvalidConfigError(f"need count >= 4 and t_max > {first}")
    n_geo = max(2, count // 5)
    knee = max(min(0.05, t_max / 10), first * 2)
    geo = [first * (knee / first) ** (k / (n_geo - 1)) for k in range(n_geo)]
    n_lin = count - n_geo
    lin = [knee + (t_max - knee) * (k + 1) / n_lin for k in range(n_lin)]
    return np.array(geo + lin)


def crossing_temperature(config_a, config_b, lo, hi, central="B", tol=1e-10, max_iter=200):
    """Temperature in ``[lo, hi]`` where the two T3 curves cross, by bisection."""
    spec_a = eigendecompose(build_hamiltonian(config_a))
    spec_b = eigendecompose(build_hamiltonian(config_b))

    def diff(T):
        return t3(gibbs_state(spec_a, T).rho, central) - t3(gibbs_state(spec_b, T).rho, central)

    f_lo, f_hi = diff(lo), diff(hi)
    if f_lo == 0:
        return lo
    if f_lo * f_hi > 0:
        raise InvalidConfigError(f"no sign change of the T3 difference on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = diff(mid)
        if f_mid == 0 or hi - lo < tol:
            return mid
        if f_lo * f_mid < 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)
