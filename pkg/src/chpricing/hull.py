"""Convex hull of the unit commitment value function, and hull prices.

Everything is computed through the conjugate: the hull value at demand y
is max over prices of price*y - conjugate(price), a concave piecewise
linear function whose derivative sign is y minus the best-response supply.
The supply staircase is monotone, so a bisection on the derivative sign
locates the maximizing price without ever constructing the hull's graph.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .fleet import Fleet
from .ucp import FEAS_EPS, InfeasibleError, conjugate, fleet_supply, ucp_value

__all__ = [
    "HullPoint",
    "default_price_cap",
    "hull_value",
    "chp_fixed_demand",
    "uplift",
    "bisect_first_true",
]

# absolute price tolerance for all bisections ($/MWh)
PRICE_TOL = 1e-9


@dataclass(frozen=True)
class HullPoint:
    """Hull value at one demand, with the supporting price interval.

    [price_lo, price_hi] is the set of prices whose best-response supply
    brackets the demand; every price in it supports the hull at demand.
    """

    demand: float      # MW
    hull_value: float  # $
    price_lo: float    # $/MWh
    price_hi: float    # $/MWh


def bisect_first_true(pred: Callable[[float], bool], lo: float, hi: float,
                      tol: float = PRICE_TOL) -> float:
    """Smallest x in [lo, hi] with pred(x), for pred monotone false -> true.

    Assumes pred(hi) holds; returns lo immediately when pred(lo) holds.
    """
    if pred(lo):
        return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def default_price_cap(fleet: Fleet) -> float:
    """A price at which every unit runs flat out.

    Above the worst segment cost plus the startup cost spread over the
    smallest segment, every unit's committed profit is strictly positive.
    """
    worst = 0.0
    for gtype in fleet.types:
        top_cost = max(s.marginal_cost for s in gtype.segments)
        min_cap = min(s.capacity for s in gtype.segments)
        worst = max(worst, top_cost + gtype.startup_cost / min_cap)
    return worst + 1.0


def hull_value(fleet: Fleet, y: float, price_cap: float | None = None) -> HullPoint:
    """Hull value and supporting price interval at demand y.

    price_lo is the smallest price whose maximal best-response supply
    reaches y; price_hi the largest price whose minimal supply does not
    exceed y.  The hull value is the conjugate-based objective evaluated
    inside that interval (exact there, since the whole interval maximizes
    it).  At y = 0 the interval starts at 0; at full capacity it is
    truncated at the price cap.
    """
    cap_mw = fleet.total_capacity
    if y < -FEAS_EPS or y > cap_mw + FEAS_EPS:
        raise InfeasibleError(f"demand {y} outside [0, {cap_mw}] MW")
    y = min(max(y, 0.0), cap_mw)
    price_cap = default_price_cap(fleet) if price_cap is None else price_cap
    if fleet_supply(fleet, price_cap, maximal=True) < y - FEAS_EPS:
        raise ValueError(
            f"price cap {price_cap} cannot elicit {y} MW of supply")

    lo = bisect_first_true(
        lambda p: fleet_supply(fleet, p, maximal=True) >= y - FEAS_EPS,
        0.0, price_cap)
    if fleet_supply(fleet, price_cap, maximal=False) <= y + FEAS_EPS:
        hi = price_cap
    else:
        hi = bisect_first_true(
            lambda p: fleet_supply(fleet, p, maximal=False) > y + FEAS_EPS,
            0.0, price_cap)
    lo, hi = min(lo, hi), max(lo, hi)
    value = max(p * y - conjugate(fleet, p) for p in (lo, 0.5 * (lo + hi), hi))
    return HullPoint(y, value, lo, hi)


def chp_fixed_demand(fleet: Fleet, y: float, price_cap: float | None = None) -> float:
    """Hull price at a fixed demand: midpoint of the supporting interval."""
    point = hull_value(fleet, y, price_cap)
    return 0.5 * (point.price_lo + point.price_hi)


def uplift(fleet: Fleet, price: float, y: float) -> float:
    """Lost-profit payment that makes the scheduled outcome incentive compatible.

    The fleet's best attainable profit at the price, minus the profit it
    earns producing y: conjugate(price) - (price*y - v(y)).  Nonnegative
    for every price, zero exactly when the price supports v at y.
    """
    value, _dispatch = ucp_value(fleet, y)
    return conjugate(fleet, price) - (price * y - value)
