"""Parameter-grid and temperature-sweep drivers.

Grid points are independent; they are evaluated on a thread pool and
gathered back in row-index order, so the result never depends on the
worker count.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from triq.correlations import (
    PATHS,
    derivative_in_j,
    ground_t3,
    magnetization,
    pair_negativity,
    pure_density,
    solve_ground,
)
from triq.errors import InvalidConfigError, TriqError
from triq.hamiltonian import CouplingConfig
from triq.thermal import gibbs_state, thermal_spectrum
from triq.correlations import t3 as t3_of

# the classical triangle lives in its own module but is part of this API
from triq.classical import classical_ground_search, classical_xy_energy

__all__ = [
    "AXIS_NAMES",
    "QUANTITIES",
    "Axis",
    "SweepSpec",
    "SweepResult",
    "evaluate_point",
    "run_sweep",
    "classical_xy_energy",
    "classical_ground_search",
]

AXIS_NAMES = ("j", "eta", "omega", "T")
QUANTITIES = ("n_ab", "t3", "chi_t3", "chi_m", "thermal_t3", "delta")
THERMAL_QUANTITIES = ("thermal_t3", "delta")


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple

    @classmethod
    def linear(cls, name, lo, hi, count):
        count = int(count)
        if count < 1:
            raise InvalidConfigError(f"axis {name}: count must be >= 1")
        if count == 1:
            if lo != hi:
                raise InvalidConfigError(f"axis {name}: a single point needs min == max")
            return cls(name, (float(lo),))
        if not lo < hi:
            raise InvalidConfigError(f"axis {name}: need min < max, got {lo}, {hi}")
        # index arithmetic, never accumulation
        return cls(name, tuple(lo + k * (hi - lo) / (count - 1) for k in range(count)))

    @classmethod
    def parse(cls, text):
        """``name:min:max:count`` or ``name=v1,v2,...``."""
        try:
            if "=" in text:
                name, rest = text.split("=", 1)
                values = tuple(float(v) for v in rest.split(",") if v.strip())
                axis = cls(name.strip(), values)
            else:
                name, lo, hi, count = text.split(":")
                axis = cls.linear(name.strip(), float(lo), float(hi), int(count))
        except ValueError as exc:
            raise InvalidConfigError(f"cannot parse axis {text!r}: {exc}") from None
        axis.validate()
        return axis

    def validate(self):
        if self.name not in AXIS_NAMES:
            raise InvalidConfigError(f"axis name must be one of {AXIS_NAMES}, got {self.name!r}")
        if not self.values:
            raise InvalidConfigError(f"axis {self.name} is empty")
        if not all(math.isfinite(v) for v in self.values):
            raise InvalidConfigError(f"axis {self.name} has non-finite values")

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class SweepSpec:
    axis1: Axis
    axis2: Axis | None = None
    fixed: dict = field(default_factory=dict)
    quantities: tuple = ("t3",)
    temperature_list: tuple | None = None
    central: str = "B"
    path: str = "analytic-first"
    fd_step: float | None = None

    def axes(self):
        axes = [self.axis1] + ([self.axis2] if self.axis2 is not None else [])
        if self.temperature_list is not None:
            axes.append(Axis("T", tuple(float(t) for t in self.temperature_list)))
        return axes

    def validate(self):
        axes = self.axes()
        for axis in axes:
            axis.validate()
        names = [a.name for a in axes]
        if len(set(names)) != len(names):
            raise InvalidConfigError(f"duplicate sweep axes {names}")
        if not self.quantities:
            raise InvalidConfigError("no quantities requested")
        for q in self.quantities:
            if q not in QUANTITIES:
                raise InvalidConfigError(f"unknown quantity {q!r}; choose from {QUANTITIES}")
        if self.path not in PATHS:
            raise InvalidConfigError(f"path must be one of {PATHS}")
        if any(q in THERMAL_QUANTITIES for q in self.quantities):
            if "T" not in names and "T" not in self.fixed:
                raise InvalidConfigError("thermal quantities need a temperature (axis T or fixed T)")
        for key in self.fixed:
            if key not in ("j", "h", "eta", "omega", "T"):
                raise InvalidConfigError(f"unknown fixed parameter {key!r}")


@dataclass
class SweepResult:
    header: list
    rows: list
    axis_names: list
    quantities: list

    def column(self, name):
        k = self.header.index(name)
        return [row[k] for row in self.rows]


def evaluate_point(params: dict, quantities, central="B", path="analytic-first", fd_step=None):
    """All requested quantities at one grid point.

    Returns ``(values, path_used, flags)``.  With ``analytic-first`` every
    quantity of the row is computed on the closed-form path; if any of them
    is unavailable the whole row is recomputed numerically.
    """
    config = CouplingConfig(
        j=params.get("j", 1.0),
        h=params.get("h", 1.0),
        eta=params.get("eta", 1.0),
        omega=params.get("omega", 1.0),
    )
    temperature = params.get("T")
    flags = []

    def compute(p):
        state, _, used, fl = solve_ground(config, p)
        values = {}
        for q in quantities:
            if q == "n_ab":
                values[q] = pair_negativity(pure_density(state), "A", "B")
            elif q == "t3":
                values[q] = ground_t3(config, central, p) if used == "analytic" else t3_of(state, central)
            elif q == "chi_t3":
                values[q], one_sided = derivative_in_j(
                    lambda j: ground_t3(config.replace(j=j), central, p), config.j, fd_step
                )
                if one_sided and "one-sided" not in fl:
                    fl.append("one-sided")
            elif q == "chi_m":
                values[q], one_sided = derivative_in_j(
                    lambda j: magnetization(solve_ground(config.replace(j=j), p)[0]), config.j, fd_step
                )
                if one_sided and "one-sided" not in fl:
                    fl.append("one-sided")
            else:
                if "mixed-state-extension" not in fl:
                    fl.append("mixed-state-extension")
                spectrum, tused = thermal_spectrum(config, p)
                if tused != used:
                    used = "numeric"
                t_zero = t3_of(gibbs_state(spectrum, 0.0).rho, central)
                t_val = t3_of(gibbs_state(spectrum, temperature).rho, central)
                if q == "thermal_t3":
                    values[q] = t_val
                else:
                    if not temperature > 0:
                        raise InvalidConfigError("delta needs T > 0")
                    values[q] = t_zero - t_val
        return values, used, fl

    values, used, fl = compute(path)
    if path == "analytic-first" and used != "analytic":
        # mixed paths in one row are not allowed; redo everything numerically
        values, used, fl = compute("numeric-only")
        if "analytic-fallback" not in fl and config.h == 1.0 and config.omega in (0.8, 1.0, 1.2):
            fl.append("analytic-fallback")
    flags.extend(fl)
    return values, used, flags


def _threads(threads):
    if threads is None:
        env = os.environ.get("TRIQ_THREADS")
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def run_sweep(spec: SweepSpec, threads=None) -> SweepResult:
    """Evaluate ``spec`` on its full grid (axis1 outermost)."""
    spec.validate()
    axes = spec.axes()
    names = [a.name for a in axes]
    points = list(itertools.product(*(a.values for a in axes)))

    def work(point):
        params = dict(spec.fixed)
        params.update(zip(names, point))
        try:
            values, used, flags = evaluate_point(
                params, spec.quantities, spec.central, spec.path, spec.fd_step
            )
            return values, used, flags, ""
        except TriqError as exc:
            return {}, "failed", [], f"{type(exc).__name__}: {exc}"

    n = _threads(threads)
    if n == 1 or len(points) < 2:
        outcomes = [work(p) for p in points]
    else:
        with ThreadPoolExecutor(max_workers=n) as pool:
            outcomes = list(pool.map(work, points))

    any_flags = any(o[2] for o in outcomes)
    any_error = any(o[3] for o in outcomes)
    header = names + list(spec.quantities) + ["path"]
    if any_flags:
        header.append("flags")
    if any_error:
        header.append("error")
    rows = []
    for point, (values, used, flags, error) in zip(points, outcomes):
        row = list(point)
        # failed points keep the row but carry an empty value and the error text
        row += [values.get(q, "") for q in spec.quantities]
        row.append(used)
        if any_flags:
            row.append(";".join(flags))
        if any_error:
            row.append(error)
        rows.append(row)
    return SweepResult(header=header, rows=rows, axis_names=names, quantities=list(spec.quantities))
