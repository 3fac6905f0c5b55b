"""Unit commitment economics for startup-cost fleets.

Exact value function by commitment enumeration, merit-order dispatch,
closed-form supplier best response (the Fenchel conjugate of the cost
function), the continuous commitment relaxation, and the startup-free
convex baselines used for LMP-style pricing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from itertools import product

import numpy as np

from .fleet import Fleet, GeneratorType

__all__ = [
    "Commitment",
    "Dispatch",
    "BestResponse",
    "QuadraticCost",
    "InfeasibleError",
    "unit_variable_cost",
    "dispatch_committed",
    "ucp_value",
    "best_response",
    "fleet_supply",
    "conjugate",
    "relaxed_unit_cost",
    "relaxed_blocks",
    "relaxed_value",
    "relaxed_supply",
    "no_startup_value",
    "quadratic_fit",
]

# absolute slack for MW feasibility comparisons
FEAS_EPS = 1e-9
# positivity floor for the fitted quadratic curvature ($/MW^2)
ALPHA_FLOOR = 1e-9


class InfeasibleError(Exception):
    """The requested output level cannot be met; the cost is +inf.

    Distinct from ValueError so callers can treat infeasibility as an
    outcome (a demand excursion beyond capacity) rather than a bug.
    """


@dataclass(frozen=True)
class Commitment:
    """Number of committed units per generator type, in fleet order."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", tuple(int(n) for n in self.counts))
        if any(n < 0 for n in self.counts):
            raise ValueError(f"commitment counts must be >= 0, got {self.counts}")


@dataclass(frozen=True)
class Dispatch:
    """A feasible dispatch: who is on, what each unit produces, what it costs."""

    commitment: Commitment
    outputs: tuple[tuple[float, ...], ...]  # per type, per unit; 0.0 when off
    total_output: float                     # MW
    total_cost: float                       # $ (startup + variable)


@dataclass(frozen=True)
class BestResponse:
    """Profit-maximizing fleet reaction to a fixed price."""

    supply: float        # MW
    profit: float        # $, equals the conjugate of the fleet cost function
    commitment: Commitment
    dispatch: Dispatch


@dataclass(frozen=True)
class QuadraticCost:
    """Convex cost model C(y) = alpha*y^2 + beta*y fitted to a fleet.

    Carries the fleet capacity so the implied marginal-cost supply curve
    can be clamped without further context.
    """

    alpha: float     # $/MW^2, strictly positive
    beta: float      # $/MWh
    capacity: float  # MW

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")

    def cost(self, y: float) -> float:
        return self.alpha * y * y + self.beta * y

    def supply(self, price: float) -> float:
        """Profit-maximizing output at a price: clamp((p - beta)/(2 alpha))."""
        return min(max((price - self.beta) / (2.0 * self.alpha), 0.0), self.capacity)

    def conjugate(self, price: float) -> float:
        """Maximum profit at a price under this cost model."""
        y = self.supply(price)
        return price * y - self.cost(y)


def unit_variable_cost(gtype: GeneratorType, g: float) -> float:
    """Variable cost of one unit producing g MW, filling segments in order."""
    if g < -FEAS_EPS or g > gtype.max_output + FEAS_EPS:
        raise ValueError(
            f"{gtype.name}: output {g} outside [0, {gtype.max_output}]")
    remaining = min(max(g, 0.0), gtype.max_output)
    cost = 0.0
    for seg in gtype.segments:
        take = min(remaining, seg.capacity)
        cost += take * seg.marginal_cost
        remaining -= take
        if remaining <= 0.0:
            break
    return cost


def _validate_commitment(fleet: Fleet, commitment: Commitment) -> None:
    if len(commitment.counts) != len(fleet.types):
        raise ValueError(
            f"commitment has {len(commitment.counts)} entries for "
            f"{len(fleet.types)} types")
    for gtype, n in zip(fleet.types, commitment.counts):
        if n > gtype.unit_count:
            raise ValueError(
                f"{gtype.name}: committed {n} of {gtype.unit_count} units")


def dispatch_committed(fleet: Fleet, commitment: Commitment, y: float) -> Dispatch:
    """Cheapest dispatch of a fixed commitment meeting total output y.

    Every committed unit first runs at its minimum output; the residual is
    then assigned to the cheapest remaining segment capacity across the
    committed units.  Because per-unit variable costs are convex piecewise
    linear, this merit order is exact.  Units of one type share their
    type's allocation equally, which costs the same as any other split.
    """
    _validate_commitment(fleet, commitment)
    if y < -FEAS_EPS:
        raise ValueError(f"demand must be >= 0, got {y}")
    floor_mw = sum(n * t.min_output for t, n in zip(fleet.types, commitment.counts))
    ceil_mw = sum(n * t.max_output for t, n in zip(fleet.types, commitment.counts))
    if y < floor_mw - FEAS_EPS or y > ceil_mw + FEAS_EPS:
        raise InfeasibleError(
            f"commitment {commitment.counts} covers [{floor_mw}, {ceil_mw}] MW, "
            f"cannot meet {y} MW")

    # residual segment capacity after the mandatory minimum runs
    blocks = []  # (marginal_cost, type_idx, seg_idx, free MW)
    for ti, (gtype, n) in enumerate(zip(fleet.types, commitment.counts)):
        if n == 0:
            continue
        rem_min = gtype.min_output
        for si, seg in enumerate(gtype.segments):
            used = min(rem_min, seg.capacity)
            rem_min -= used
            free = (seg.capacity - used) * n
            if free > 0.0:
                blocks.append((seg.marginal_cost, ti, si, free))
    blocks.sort()

    residual = max(y - floor_mw, 0.0)
    extra = [0.0] * len(fleet.types)
    for cost, ti, _si, free in blocks:
        if residual <= 0.0:
            break
        take = min(residual, free)
        extra[ti] += take
        residual -= take

    outputs = []
    total_cost = 0.0
    total_output = 0.0
    for gtype, n, add in zip(fleet.types, commitment.counts, extra):
        if n == 0:
            outputs.append((0.0,) * gtype.unit_count)
            continue
        per_unit = gtype.min_output + add / n
        outputs.append((per_unit,) * n + (0.0,) * (gtype.unit_count - n))
        total_cost += n * (gtype.startup_cost + unit_variable_cost(gtype, per_unit))
        total_output += n * per_unit
    return Dispatch(commitment, tuple(outputs), total_output, total_cost)


def ucp_value(fleet: Fleet, y: float) -> tuple[float, Dispatch]:
    """Exact unit commitment cost at demand y, by commitment enumeration.

    Units of a type are interchangeable, so only per-type counts are
    enumerated.  Raises InfeasibleError when no commitment covers y.
    """
    if y < -FEAS_EPS or y > fleet.total_capacity + FEAS_EPS:
        raise InfeasibleError(
            f"demand {y} outside feasible range [0, {fleet.total_capacity}] MW")
    best: Dispatch | None = None
    mins = [t.min_output for t in fleet.types]
    maxs = [t.max_output for t in fleet.types]
    for counts in product(*(range(t.unit_count + 1) for t in fleet.types)):
        floor_mw = sum(n * m for n, m in zip(counts, mins))
        ceil_mw = sum(n * m for n, m in zip(counts, maxs))
        if y < floor_mw - FEAS_EPS or y > ceil_mw + FEAS_EPS:
            continue
        cand = dispatch_committed(fleet, Commitment(counts), y)
        if best is None or cand.total_cost < best.total_cost:
            best = cand
    if best is None:
        raise InfeasibleError(f"no commitment can meet {y} MW")
    return best.total_cost, best


def _unit_best(gtype: GeneratorType, price: float, maximal: bool) -> tuple[float, float]:
    """Optimal committed output and profit of one unit at a price.

    The committed profit price*g - C(g) - S is concave in g, so the
    unconstrained optimum takes every segment cheaper than the price and
    is then clamped to the minimum output.  ``maximal`` decides whether
    zero-margin segments are taken in full (the maximal-supply optimizer)
    or left out (the minimal one); both have equal profit.
    """
    g = 0.0
    for seg in gtype.segments:
        if price > seg.marginal_cost or (maximal and price == seg.marginal_cost):
            g += seg.capacity
    if g < gtype.min_output:
        g = gtype.min_output
    profit = price * g - unit_variable_cost(gtype, g) - gtype.startup_cost
    return g, profit


def _commit(g: float, profit: float, maximal: bool) -> bool:
    # profit-neutral units commit under the maximal tie-break (unless idle)
    if maximal:
        return profit > 0.0 or (profit == 0.0 and g > 0.0)
    return profit > 0.0


def fleet_supply(fleet: Fleet, price: float, maximal: bool = True) -> float:
    """Aggregate best-response supply at a price (MW).

    Nondecreasing step function of the price; ``maximal`` picks the upper
    or lower value at tie prices.
    """
    supply = 0.0
    for gtype in fleet.types:
        g, profit = _unit_best(gtype, price, maximal)
        if _commit(g, profit, maximal):
            supply += gtype.unit_count * g
    return supply


def best_response(fleet: Fleet, price: float) -> BestResponse:
    """Fleet best response to a price, maximal-supply tie-break.

    Each unit decides independently: commit when the committed profit is
    nonnegative, produce the profit-maximizing output.  The total profit
    equals the convex conjugate of the fleet cost function at the price.
    """
    counts = []
    outputs = []
    supply = 0.0
    profit_total = 0.0
    cost_total = 0.0
    for gtype in fleet.types:
        g, profit = _unit_best(gtype, price, maximal=True)
        if _commit(g, profit, maximal=True):
            n = gtype.unit_count
            supply += n * g
            profit_total += n * max(profit, 0.0)
            cost_total += n * (gtype.startup_cost + unit_variable_cost(gtype, g))
            outputs.append((g,) * n)
        else:
            n = 0
            outputs.append((0.0,) * gtype.unit_count)
        counts.append(n)
    commitment = Commitment(tuple(counts))
    dispatch = Dispatch(commitment, tuple(outputs), supply, cost_total)
    return BestResponse(supply, profit_total, commitment, dispatch)


def conjugate(fleet: Fleet, price: float) -> float:
    """max_y (price*y - v(y)): the fleet's best-response profit at the price."""
    total = 0.0
    for gtype in fleet.types:
        _g, profit = _unit_best(gtype, price, maximal=True)
        if profit > 0.0:
            total += gtype.unit_count * profit
    return total


def relaxed_unit_cost(gtype: GeneratorType, g: float) -> float:
    """Optimal cost of one unit at output g with a continuous commitment.

    Solves min S*z + sum(c_s * g_s) over z in [0,1], 0 <= g_s <= cap_s * z,
    m*z <= sum(g_s) = g.  For fixed z the inner fill is a merit order over
    the scaled segments, and the outer objective is piecewise linear in z,
    so only finitely many z are candidates: the feasibility endpoints and
    the points where g exactly exhausts a scaled segment prefix.
    """
    if g < -FEAS_EPS or g > gtype.max_output + FEAS_EPS:
        raise ValueError(f"{gtype.name}: output {g} outside [0, {gtype.max_output}]")
    if g <= FEAS_EPS:
        return 0.0
    g = min(g, gtype.max_output)
    z_lo = g / gtype.max_output
    z_hi = 1.0 if gtype.min_output == 0 else min(1.0, g / gtype.min_output)
    candidates = {z_lo, z_hi}
    cum = 0.0
    for seg in gtype.segments:
        cum += seg.capacity
        z = g / cum
        if z_lo - 1e-12 <= z <= z_hi + 1e-12:
            candidates.add(min(max(z, z_lo), z_hi))
    best = math.inf
    for z in candidates:
        remaining = g
        cost = gtype.startup_cost * z
        for seg in gtype.segments:
            take = min(remaining, seg.capacity * z)
            cost += take * seg.marginal_cost
            remaining -= take
            if remaining <= 0.0:
                break
        if remaining > FEAS_EPS:
            continue
        best = min(best, cost)
    return best


@lru_cache(maxsize=None)
def relaxed_blocks(gtype: GeneratorType) -> tuple[tuple[float, float], ...]:
    """(slope, width) pieces of the relaxed per-unit cost, slopes increasing.

    The relaxed cost is the lower convex envelope of the committed cost
    graph together with the off point (0, 0), so the pieces come from the
    lower hull of the committed cost vertices.
    """
    xs = {gtype.min_output}
    cum = 0.0
    for seg in gtype.segments:
        cum += seg.capacity
        if cum >= gtype.min_output:
            xs.add(cum)
    points = [(0.0, 0.0)]
    for x in sorted(xs):
        if x > 0.0:
            points.append((x, gtype.startup_cost + unit_variable_cost(gtype, x)))
    hull: list[tuple[float, float]] = []
    for p in points:
        while len(hull) >= 2:
            (ox, oy), (ax, ay) = hull[-2], hull[-1]
            if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) <= 0.0:
                hull.pop()
            else:
                break
        hull.append(p)
    blocks = []
    for (x0, c0), (x1, c1) in zip(hull, hull[1:]):
        blocks.append(((c1 - c0) / (x1 - x0), x1 - x0))
    return tuple(blocks)


def _fleet_blocks(fleet: Fleet) -> list[tuple[float, int, int, float]]:
    blocks = []
    for ti, gtype in enumerate(fleet.types):
        for bi, (slope, width) in enumerate(relaxed_blocks(gtype)):
            blocks.append((slope, ti, bi, width * gtype.unit_count))
    blocks.sort()
    return blocks


def relaxed_value(fleet: Fleet, y: float) -> tuple[float, float]:
    """Optimal relaxed-commitment cost at demand y and its marginal price.

    Merit order over the relaxed per-unit cost pieces; the price is the
    right-hand derivative (the slope of the next marginal MW).
    """
    if y < -FEAS_EPS or y > fleet.total_capacity + FEAS_EPS:
        raise InfeasibleError(
            f"demand {y} outside feasible range [0, {fleet.total_capacity}] MW")
    y = min(max(y, 0.0), fleet.total_capacity)
    blocks = _fleet_blocks(fleet)
    remaining = y
    value = 0.0
    price = blocks[0][0]
    for i, (slope, _ti, _bi, width) in enumerate(blocks):
        take = min(remaining, width)
        value += take * slope
        remaining -= take
        if remaining <= FEAS_EPS:
            # an exactly exhausted block prices the next MW off the next block
            if take >= width - FEAS_EPS and i + 1 < len(blocks):
                price = blocks[i + 1][0]
            else:
                price = slope
            break
    return value, price


def relaxed_supply(fleet: Fleet, price: float) -> float:
    """Capacity of relaxed merit-order blocks priced at or below price (MW)."""
    return sum(width for slope, _ti, _bi, width in _fleet_blocks(fleet)
               if slope <= price)


@lru_cache(maxsize=None)
def _zero_startup(fleet: Fleet) -> Fleet:
    return Fleet(tuple(replace(t, startup_cost=0.0) for t in fleet.types))


def no_startup_value(fleet: Fleet, y: float) -> float:
    """Fleet cost at demand y with all startup costs removed."""
    return ucp_value(_zero_startup(fleet), y)[0]


def quadratic_fit(fleet: Fleet, sample_count: int = 121) -> QuadraticCost:
    """Least-squares fit of alpha*y^2 + beta*y to the startup-free cost curve.

    Sampled on a uniform grid over [0, capacity].  The curvature is clamped
    to a small positive floor so the fitted model stays strictly convex
    even for a single-segment fleet.
    """
    if sample_count < 3:
        raise ValueError(f"sample_count must be >= 3, got {sample_count}")
    cap = fleet.total_capacity
    ys = np.linspace(0.0, cap, sample_count)
    target = np.array([no_startup_value(fleet, float(y)) for y in ys])
    if not np.any(target > 0.0):
        raise ValueError("degenerate cost curve: all sampled costs are zero")
    design = np.column_stack([ys * ys, ys])
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    alpha, beta = float(coef[0]), float(coef[1])
    if alpha < ALPHA_FLOOR:
        alpha = ALPHA_FLOOR
        denom = float(np.dot(ys, ys))
        beta = float(np.dot(ys, target - alpha * ys * ys) / denom)
    return QuadraticCost(alpha, beta, cap)
