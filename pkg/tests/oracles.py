"""Independent brute-force reference implementations used by the tests.

Everything here recomputes fleet economics from the raw problem
statement (grids, enumeration, min-plus convolution) without touching
the library's merit-order or closed-form shortcuts, so agreement is
meaningful.  Grids use integer-friendly steps; the builtin fixtures
have integer segment capacities and minimum outputs, which makes the
grid optima exact there.
"""
from __future__ import annotations

import dataclasses
import itertools
import math

import numpy as np

from chpricing import Fleet, GeneratorType


def segment_fill_cost(gtype: GeneratorType, g: float) -> float:
    """Variable cost of one unit producing g, filling segments in order."""
    cost, rem = 0.0, g
    for seg in gtype.segments:
        take = min(rem, seg.capacity)
        cost += take * seg.marginal_cost
        rem -= take
    return cost


def unit_cost_grid(gtype: GeneratorType, step: float) -> np.ndarray:
    """Cost of one committed unit on the output grid; +inf below min_output."""
    n = round(gtype.max_output / step)
    out = np.full(n + 1, np.inf)
    lo = math.ceil(gtype.min_output / step - 1e-9)
    for i in range(lo, n + 1):
        out[i] = segment_fill_cost(gtype, i * step)
    return out


def minplus(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.full(a.size + b.size - 1, np.inf)
    for i, av in enumerate(a):
        if np.isfinite(av):
            out[i:i + b.size] = np.minimum(out[i:i + b.size], av + b)
    return out


def commitment_cost_grid(fleet: Fleet, counts: tuple[int, ...],
                         step: float) -> np.ndarray:
    """Startup plus optimal dispatch cost of one commitment, on the y grid."""
    acc = np.zeros(1)
    startup = 0.0
    for gtype, n in zip(fleet.types, counts):
        unit = unit_cost_grid(gtype, step)
        for _ in range(n):
            acc = minplus(acc, unit)
        startup += n * gtype.startup_cost
    return acc + startup


def fleet_value_grid(fleet: Fleet, step: float) -> np.ndarray:
    """v on the y grid: exhaustive commitment enumeration over count vectors."""
    size = round(fleet.total_capacity / step) + 1
    best = np.full(size, np.inf)
    for counts in itertools.product(
            *[range(t.unit_count + 1) for t in fleet.types]):
        grid = commitment_cost_grid(fleet, counts, step)
        m = min(size, grid.size)
        best[:m] = np.minimum(best[:m], grid[:m])
    return best


def unit_best_response_grid(gtype: GeneratorType, price: float,
                            step: float = 0.01) -> tuple[float, float]:
    """One unit's profit-maximal (supply, profit) by grid search over g.

    Ties in profit resolve to the largest output, matching the library's
    maximal-supply convention.
    """
    best_profit, best_g = 0.0, 0.0
    n = round(gtype.max_output / step)
    lo = math.ceil(gtype.min_output / step - 1e-9)
    for i in range(lo, n + 1):
        g = i * step
        profit = price * g - segment_fill_cost(gtype, g) - gtype.startup_cost
        if profit > best_profit + 1e-12 or (
                profit > best_profit - 1e-12 and g > best_g):
            best_profit, best_g = profit, g
    if best_profit < -1e-12:
        return 0.0, 0.0
    return best_g, max(best_profit, 0.0)


def relaxed_unit_grid(gtype: GeneratorType, g: float,
                      z_steps: int = 40000) -> float:
    """Relaxed per-unit cost by grid search over the commitment level z."""
    if g == 0.0:
        return 0.0
    z_lo = g / gtype.max_output
    z_hi = 1.0 if gtype.min_output == 0 else min(1.0, g / gtype.min_output)
    if z_lo > z_hi + 1e-12:
        return math.inf
    best = math.inf
    for j in range(z_steps + 1):
        z = z_lo + (z_hi - z_lo) * j / z_steps
        cost, rem = gtype.startup_cost * z, g
        for seg in gtype.segments:
            take = min(rem, seg.capacity * z)
            cost += take * seg.marginal_cost
            rem -= take
        if rem <= 1e-9:
            best = min(best, cost)
    return best


def reduced_scarf(fleet: Fleet, per_type: int = 2) -> Fleet:
    return Fleet(tuple(dataclasses.replace(t, unit_count=per_type)
                       for t in fleet.types))
