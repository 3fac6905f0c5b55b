"""Price formation: dual descent, exact dual prices, and convex baselines.

The hourly partial dual is phi(p) = [U(D(p)) - p*D(p)] + conjugate(p),
convex in the price with subgradient supply(p) - demand(p).  The dynamic
pricing loop walks down phi with diminishing steps; the exact dual price
is the bisected sign change of the subgradient.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .fleet import Fleet
from .hull import bisect_first_true, default_price_cap
from .market import DayProfile, DemandModel, hourly_demand, hourly_utility
from .ucp import (
    InfeasibleError,
    QuadraticCost,
    best_response,
    conjugate,
    fleet_supply,
    relaxed_supply,
    relaxed_value,
    ucp_value,
)

__all__ = [
    "PRICE_FLOOR",
    "METHODS",
    "HarmonicStep",
    "IterateRecord",
    "PricingTrace",
    "dual_value",
    "run_subgradient",
    "exact_dual",
    "run_lmp",
    "lmp_equilibrium",
    "dispatchable_price",
    "dispatchable_equilibrium",
]

PRICE_FLOOR = 1e-6  # $/MWh; keeps the elastic demand term finite

METHODS = ("chp_subgradient", "chp_exact", "lmp", "dispatchable")


@dataclass(frozen=True)
class HarmonicStep:
    """Diminishing step rule gamma_k = coef / k.

    A plain object rather than a closure so traces and worker processes
    can carry it around (picklable, printable).
    """

    coef: float

    def __post_init__(self) -> None:
        if not self.coef > 0:
            raise ValueError(f"step coefficient must be > 0, got {self.coef}")

    def __call__(self, k: int) -> float:
        return self.coef / k


@dataclass(frozen=True)
class IterateRecord:
    """One accepted iterate of a price-formation loop."""

    k: int
    price: float       # $/MWh, after the k-th update
    demand: float      # MW at this price
    supply: float      # MW at this price
    step: float        # step size used to produce this price
    dual_value: float  # phi at this price
    uplift: float      # lost-profit payment at (price, demand); inf if demand infeasible
    elapsed_s: float = 0.0  # wall clock since loop start; excluded from determinism


@dataclass(frozen=True)
class PricingTrace:
    method: str
    records: tuple[IterateRecord, ...]
    final_price: float
    final_demand: float


def _check_price(price: float) -> None:
    if price <= PRICE_FLOOR:
        raise ValueError(f"price must exceed the floor {PRICE_FLOOR}, got {price}")


def dual_value(fleet: Fleet, model: DemandModel, profile: DayProfile, t: int,
               price: float) -> tuple[float, float]:
    """(phi, subgradient) of the hourly dual at a price.

    phi carries the utility's additive constant; the subgradient is
    supply minus demand, positive when the price is above the crossing.
    """
    _check_price(price)
    demand = hourly_demand(model, profile, t, price)
    utility = hourly_utility(model, profile, t, demand)
    phi = utility - price * demand + conjugate(fleet, price)
    return phi, fleet_supply(fleet, price) - demand


def _iterate_uplift(fleet: Fleet, price: float, demand: float,
                    profit: float) -> float:
    # conjugate(price) == profit from the best response already in hand
    try:
        value, _dispatch = ucp_value(fleet, demand)
    except InfeasibleError:
        return math.inf
    return profit - (price * demand - value)


def run_subgradient(fleet: Fleet, model: DemandModel, profile: DayProfile, t: int,
                    price0: float, n_iters: int,
                    step_rule: HarmonicStep) -> PricingTrace:
    """Dynamic pricing by subgradient descent on the hourly dual.

    Starting from price0, each round the suppliers and the consumer report
    their best responses and the price moves against the imbalance:
    p_k = p_{k-1} - gamma_k * (supply - demand), clamped to the floor.
    Runs a fixed n_iters rounds and accepts the final price.
    """
    _check_price(price0)
    if n_iters < 1:
        raise ValueError(f"n_iters must be >= 1, got {n_iters}")
    start = time.perf_counter()
    price = price0
    demand = hourly_demand(model, profile, t, price)
    reaction = best_response(fleet, price)
    records = []
    for k in range(1, n_iters + 1):
        step = step_rule(k)
        price = max(PRICE_FLOOR, price - step * (reaction.supply - demand))
        demand = hourly_demand(model, profile, t, price)
        reaction = best_response(fleet, price)
        phi = (hourly_utility(model, profile, t, demand) - price * demand
               + reaction.profit)
        records.append(IterateRecord(
            k=k, price=price, demand=demand, supply=reaction.supply, step=step,
            dual_value=phi,
            uplift=_iterate_uplift(fleet, price, demand, reaction.profit),
            elapsed_s=time.perf_counter() - start))
    return PricingTrace("chp_subgradient", tuple(records), price, demand)


def exact_dual(fleet: Fleet, model: DemandModel, profile: DayProfile, t: int,
               price_cap: float | None = None) -> tuple[float, float]:
    """Exact dual price: the bisected sign change of supply minus demand.

    Returns (price, demand at that price).  The price is the smallest one
    whose maximal best-response supply covers the demand, located to the
    bisection tolerance.
    """
    price_cap = default_price_cap(fleet) if price_cap is None else price_cap
    demand_at_cap = hourly_demand(model, profile, t, price_cap)
    if fleet_supply(fleet, price_cap) < demand_at_cap:
        raise InfeasibleError(
            f"no crossing: demand {demand_at_cap} MW exceeds supply at the "
            f"price cap {price_cap}")

    def covered(price: float) -> bool:
        return fleet_supply(fleet, price) >= hourly_demand(model, profile, t, price)

    price = bisect_first_true(covered, PRICE_FLOOR, price_cap)
    return price, hourly_demand(model, profile, t, price)


def run_lmp(quad: QuadraticCost, model: DemandModel, profile: DayProfile, t: int,
            price0: float, n_iters: int, step_rule: HarmonicStep,
            uplift_fleet: Fleet | None = None) -> PricingTrace:
    """The same price iteration with the fitted convex cost model supplying.

    Supply comes from the quadratic marginal-cost curve.  When
    uplift_fleet is given, the per-iterate uplift is priced against the
    true nonconvex fleet, which is what the convex model's prices will
    actually have to pay.
    """
    _check_price(price0)
    if n_iters < 1:
        raise ValueError(f"n_iters must be >= 1, got {n_iters}")
    start = time.perf_counter()
    price = price0
    demand = hourly_demand(model, profile, t, price)
    supply = quad.supply(price)
    records = []
    for k in range(1, n_iters + 1):
        step = step_rule(k)
        price = max(PRICE_FLOOR, price - step * (supply - demand))
        demand = hourly_demand(model, profile, t, price)
        supply = quad.supply(price)
        phi = (hourly_utility(model, profile, t, demand) - price * demand
               + quad.conjugate(price))
        if uplift_fleet is None:
            up = math.nan
        else:
            up = _iterate_uplift(uplift_fleet, price, demand,
                                 conjugate(uplift_fleet, price))
        records.append(IterateRecord(
            k=k, price=price, demand=demand, supply=supply, step=step,
            dual_value=phi, uplift=up, elapsed_s=time.perf_counter() - start))
    return PricingTrace("lmp", tuple(records), price, demand)


def lmp_equilibrium(quad: QuadraticCost, model: DemandModel, profile: DayProfile,
                    t: int) -> tuple[float, float]:
    """Exact crossing of the quadratic supply curve with hourly demand."""
    hi = quad.beta + 2.0 * quad.alpha * quad.capacity + 1.0
    while quad.supply(hi) < hourly_demand(model, profile, t, hi):
        hi *= 2.0
        if hi > 1e12:
            raise InfeasibleError("no crossing for the quadratic supply curve")

    def covered(price: float) -> bool:
        return quad.supply(price) >= hourly_demand(model, profile, t, price)

    price = bisect_first_true(covered, PRICE_FLOOR, hi)
    return price, hourly_demand(model, profile, t, price)


def dispatchable_price(fleet: Fleet, y: float) -> float:
    """Marginal price of the relaxed-commitment cost at demand y."""
    _value, price = relaxed_value(fleet, y)
    return price


def dispatchable_equilibrium(fleet: Fleet, model: DemandModel, profile: DayProfile,
                             t: int) -> tuple[float, float]:
    """Clear the relaxed merit-order supply curve against hourly demand."""
    price_cap = default_price_cap(fleet)
    demand_at_cap = hourly_demand(model, profile, t, price_cap)
    if relaxed_supply(fleet, price_cap) < demand_at_cap:
        raise InfeasibleError(
            f"no crossing: demand {demand_at_cap} MW exceeds relaxed supply "
            f"at the price cap {price_cap}")

    def covered(price: float) -> bool:
        return relaxed_supply(fleet, price) >= hourly_demand(model, profile, t, price)

    price = bisect_first_true(covered, PRICE_FLOOR, price_cap)
    return price, hourly_demand(model, profile, t, price)
