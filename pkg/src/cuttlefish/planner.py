"""Optimal plan search over the joint battery/appliance state space.

The search is A* over (state, timestep) pairs with exact integer costs.
Step costs are shifted per timestep by an offset that makes every joint
action cost non-negative; because every plan contains exactly one action
per timestep, the shift raises all plan costs by the same constant, so
the ranking of plans is untouched and the true cost is recovered by
subtracting the summed offsets at the end.

Tie-breaking is total and deterministic: lower f, then lower g, then
insertion order.  Duplicate detection keys on (state, timestep) and keeps
the smallest g per key; the visited counter counts distinct keys.

The default heuristic combines three admissible ingredients:

  * a per-requirement feasibility prune (greedy leftmost placement of
    the still-needed task runs; exact for equal-length runs),
  * a battery-only value table (dynamic programming over charge levels;
    appliance load can only raise a step's normalised cost when both
    prices are non-negative, and the table is a plain reachability prune
    otherwise),
  * a marginal-load bound per appliance: each still-required on-step
    costs at least rate * min(import, export) on top of the battery-only
    cost, summed over the cheapest admissible timesteps (only when all
    prices are non-negative).

``heuristic_mode="zero"`` keeps only the feasibility prune and returns a
zero bound, which is the simplest admissible configuration.
"""

from __future__ import annotations

import bisect
import logging
import time
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from heapq import heappop, heappush
from typing import Iterable, Optional

from .canon import content_hash
from .model import HomeModel, JointAction, JointState, Plan

logger = logging.getLogger(__name__)

INFEASIBLE = 1 << 62  # sentinel bound: no completion exists through this node


@dataclass(frozen=True)
class SearchBudget:
    """Wall-clock and visited-state limits for one solve."""

    max_runtime_seconds: float = 180.0
    max_visited_states: int = 8_000_000

    def __post_init__(self) -> None:
        if self.max_runtime_seconds <= 0:
            raise ValueError("max_runtime_seconds must be positive")
        if self.max_visited_states <= 0:
            raise ValueError("max_visited_states must be positive")


class SolveStatus(str, Enum):
    SOLVED = "solved"
    UNSOLVABLE = "unsolvable"
    TIME_BUDGET_EXCEEDED = "time_budget_exceeded"
    STATE_BUDGET_EXCEEDED = "state_budget_exceeded"


@dataclass(frozen=True)
class SearchStats:
    visited: int
    expanded: int
    elapsed_seconds: float


@dataclass(frozen=True)
class SolveOutcome:
    status: SolveStatus
    plan: Optional[Plan]
    stats: SearchStats


@dataclass(frozen=True)
class NormalizedCosts:
    """Per-timestep offsets making every joint action cost non-negative."""

    offsets: tuple[int, ...]
    total_offset: int


def _pattern_usage(model: HomeModel) -> list[int]:
    """Net usage in Wh for every joint action pattern.

    Pattern index = (battery_action + 1) * 2^n + appliance bits.
    """
    n = len(model.appliances)
    rates = [a.rate for a in model.appliances]
    usage = []
    for b in (-1, 0, 1):
        for bits in range(1 << n):
            u = b * model.battery.rate
            for i in range(n):
                if bits >> i & 1:
                    u += rates[i]
            usage.append(u)
    return usage


def _raw_cost_rows(model: HomeModel) -> list[list[int]]:
    usage = _pattern_usage(model)
    rows = []
    for t in range(1, model.horizon + 1):
        pi = model.tariff.import_at(t)
        pe = model.tariff.export_at(t)
        rows.append([(pe if u < 0 else pi) * u for u in usage])
    return rows


def normalize_costs(model: HomeModel) -> NormalizedCosts:
    """Offsets K_t = max(0, -min over all joint actions of the raw step cost)."""
    offsets = tuple(max(0, -min(row)) for row in _raw_cost_rows(model))
    return NormalizedCosts(offsets=offsets, total_offset=sum(offsets))


def requirement_feasible(
    window: Iterable[int],
    from_t: int,
    needed: int,
    duration: int,
    horizon: int,
    in_progress_start: Optional[int] = None,
) -> bool:
    """Can `needed` disjoint duration-length runs still fit inside the window?

    Placement is greedy leftmost from `from_t`, which is optimal because
    all candidate runs have the same length.  A run already in progress
    (started at `in_progress_start`) blocks the appliance until it
    completes and is credited when it lies fully inside the window.
    """
    window = frozenset(window)
    remaining = needed
    start_at = from_t
    if in_progress_start is not None:
        completion = in_progress_start + duration - 1
        if completion > horizon:
            return remaining <= 0  # stuck mid-task; nothing more can be placed
        if all(u in window for u in range(in_progress_start, completion + 1)):
            remaining -= 1
        start_at = max(start_at, completion + 1)
    u = start_at
    while remaining > 0 and u + duration - 1 <= horizon:
        if all(v in window for v in range(u, u + duration)):
            remaining -= 1
            u += duration
        else:
            u += 1
    return remaining <= 0


class _CompiledModel:
    """Integer tables for the search hot loop.

    States pack into a single int via mixed-radix encoding (battery
    charge, then per appliance: progress and one capped counter per
    requirement), so the seen-set is an int->int dict.
    """

    def __init__(self, model: HomeModel, mode: str):
        if mode not in ("auto", "zero"):
            raise ValueError(f"unknown heuristic mode {mode!r}")
        self.model = model
        self.mode = mode
        self.instance_hash = content_hash(model.canonical_dict())
        h = model.horizon
        self.h = h
        n = len(model.appliances)
        self.n = n
        self.npat = 3 * (1 << n)
        self.batt_cap = model.battery.capacity_steps
        self.durations = [a.duration_steps for a in model.appliances]
        self.caps = [[r.min_tasks for r in a.requirements] for a in model.appliances]

        raw = _raw_cost_rows(model)
        self.offsets = [max(0, -min(row)) for row in raw]
        self.total_offset = sum(self.offsets)
        self.ntable = [[c + k for c in row] for row, k in zip(raw, self.offsets)]

        # mixed-radix layout
        stride = 1
        self.batt_stride = stride
        stride *= self.batt_cap + 1
        self.p_stride: list[int] = []
        self.c_stride: list[list[int]] = []
        for a in model.appliances:
            self.p_stride.append(stride)
            stride *= a.duration_steps + 1
            per_req = []
            for r in a.requirements:
                per_req.append(stride)
                stride *= r.min_tasks + 1
            self.c_stride.append(per_req)
        self.state_count = stride

        # requirement indices bumped by a task completing at timestep t
        self.bumps: list[list[tuple[int, ...]]] = []
        for i, a in enumerate(model.appliances):
            d = a.duration_steps
            per_t: list[tuple[int, ...]] = [()] * (h + 2)
            for t in range(d, h + 1):
                run = range(t - d + 1, t + 1)
                per_t[t] = tuple(
                    j for j, r in enumerate(a.requirements) if all(u in r.window for u in run)
                )
            self.bumps.append(per_t)

        # per-requirement placement tables: can_start[u] and the greedy
        # count of disjoint runs placeable at or after u
        self.can_start: list[list[list[bool]]] = []
        self.max_place: list[list[list[int]]] = []
        for i, a in enumerate(model.appliances):
            d = a.duration_steps
            starts_i = []
            place_i = []
            for r in a.requirements:
                can = [False] * (h + d + 3)
                for u in range(1, h - d + 2):
                    can[u] = all(v in r.window for v in range(u, u + d))
                place = [0] * (h + d + 3)
                for u in range(h + 1, 0, -1):
                    place[u] = 1 + place[u + d] if can[u] else place[u + 1]
                starts_i.append(can)
                place_i.append(place)
            self.can_start.append(starts_i)
            self.max_place.append(place_i)

        prices_nonneg = all(p >= 0 for p in model.tariff.import_prices) and all(
            p >= 0 for p in model.tariff.export_prices
        )
        self.use_bounds = mode == "auto"
        use_marginals = self.use_bounds and prices_nonneg

        # marginal cost of one on-step per appliance, lower-bounded by the
        # smaller price branch (only sound when both prices >= 0)
        if use_marginals:
            pmin = [
                min(model.tariff.import_at(t), model.tariff.export_at(t))
                for t in range(1, h + 1)
            ]
        else:
            pmin = [0] * h
        self.forced_prefix: list[list[int]] = []
        for a in model.appliances:
            pref = [0] * (h + 1)
            for t in range(1, h + 1):
                pref[t] = pref[t - 1] + a.rate * pmin[t - 1]
            self.forced_prefix.append(pref)

        # ksum[i][j][u][m]: sum of the m*duration cheapest marginal steps
        # inside requirement j's window at or after u (INFEASIBLE if fewer)
        self.ksum: list[list[list[list[int]]]] = []
        for i, a in enumerate(model.appliances):
            d = a.duration_steps
            per_req = []
            for r in a.requirements:
                table = [[0] * (r.min_tasks + 1) for _ in range(h + 3)]
                vals: list[int] = []
                for u in range(h + 1, 0, -1):
                    if u <= h and u in r.window:
                        bisect.insort(vals, a.rate * pmin[u - 1])
                    row = table[u]
                    for m in range(1, r.min_tasks + 1):
                        steps = m * d
                        row[m] = sum(vals[:steps]) if steps <= len(vals) else INFEASIBLE
                per_req.append(table)
            self.ksum.append(per_req)

        # battery-only value to go under normalised costs; INFEASIBLE marks
        # charges that cannot reach a goal charge in the remaining steps
        goals = model.battery.goal_charges
        cap = self.batt_cap
        base = 1 << n
        vnext = [0 if s in goals else INFEASIBLE for s in range(cap + 1)]
        self.batt_value: list[list[int]] = [vnext]
        for t in range(h, 0, -1):
            row = self.ntable[t - 1]
            vt = []
            for s in range(cap + 1):
                best = INFEASIBLE
                for b in (-1, 0, 1):
                    s2 = s + b
                    if 0 <= s2 <= cap and vnext[s2] < INFEASIBLE:
                        c = row[(b + 1) * base] + vnext[s2]
                        if c < best:
                            best = c
                vt.append(best)
            self.batt_value.append(vt)
            vnext = vt
        self.batt_value.reverse()  # batt_value[t-1] is the table for timestep t, t in 1..h+1
        if not self.use_bounds:
            self.batt_value = [[0] * (cap + 1) for _ in range(h + 1)]
        elif not prices_nonneg:
            # appliance load can lower a step's cost under negative prices,
            # so only the reachability part of the table is admissible
            self.batt_value = [
                [0 if v < INFEASIBLE else INFEASIBLE for v in row] for row in self.batt_value
            ]

    # --- packing -----------------------------------------------------

    def encode(self, state: JointState) -> int:
        packed = state.battery_charge * self.batt_stride
        for i, s in enumerate(state.appliances):
            packed += s.progress * self.p_stride[i]
            for j, c in enumerate(s.completed):
                packed += min(c, self.caps[i][j]) * self.c_stride[i][j]
        return packed

    def decode(self, packed: int) -> tuple[int, list[int], list[list[int]]]:
        charge = packed % (self.batt_cap + 1)
        packed //= self.batt_cap + 1
        progresses = []
        counters = []
        for i in range(self.n):
            progresses.append(packed % (self.durations[i] + 1))
            packed //= self.durations[i] + 1
            counts = []
            for cap in self.caps[i]:
                counts.append(packed % (cap + 1))
                packed //= cap + 1
            counters.append(counts)
        return charge, progresses, counters

    def is_goal_packed(self, packed: int) -> bool:
        charge, _, counters = self.decode(packed)
        if charge not in self.model.battery.goal_charges:
            return False
        for counts, caps in zip(counters, self.caps):
            for c, cap in zip(counts, caps):
                if c < cap:
                    return False
        return True

    # --- admissible bounds -------------------------------------------

    def _batt_bound(self, t: int, charge: int) -> int:
        return self.batt_value[t - 1][charge]

    def _app_bound(self, i: int, t: int, progress: int, counts: list[int]) -> int:
        """Lower bound on appliance i's remaining marginal cost from (t, state).

        Returns INFEASIBLE when some requirement can no longer be met.
        """
        d = self.durations[i]
        h = self.h
        forced = 0
        credit_start = -1
        fresh_from = t
        if 0 < progress < d:
            start0 = t - progress
            if start0 < 1:
                return INFEASIBLE  # more progress than elapsed steps allow
            completion = start0 + d - 1
            if completion > h:
                return INFEASIBLE  # mid-task with no room to finish
            pref = self.forced_prefix[i]
            forced = pref[completion] - pref[t - 1]
            credit_start = start0
            fresh_from = completion + 1
        worst = 0
        caps = self.caps[i]
        for j, cap in enumerate(caps):
            needed = cap - counts[j]
            if credit_start >= 0 and self.can_start[i][j][credit_start]:
                needed -= 1
            if needed <= 0:
                continue
            if self.max_place[i][j][fresh_from] < needed:
                return INFEASIBLE
            bound = self.ksum[i][j][fresh_from][needed]
            if bound >= INFEASIBLE:
                return INFEASIBLE
            if bound > worst:
                worst = bound
        return forced + worst

    def node_bound(self, t: int, charge: int, progresses: list[int], counters: list[list[int]]) -> int:
        """Admissible bound for a whole node; INFEASIBLE prunes it."""
        total = self._batt_bound(t, charge)
        if total >= INFEASIBLE:
            return INFEASIBLE
        for i in range(self.n):
            b = self._app_bound(i, t, progresses[i], counters[i])
            if b >= INFEASIBLE:
                return INFEASIBLE
            total += b
        return total


@lru_cache(maxsize=16)
def _compile(model: HomeModel, mode: str) -> _CompiledModel:
    return _CompiledModel(model, mode)


def heuristic(state: JointState, t: int, model: HomeModel, mode: str = "auto") -> Optional[int]:
    """Admissible lower bound on the remaining normalised cost, or None
    when no valid completion can exist from (state, t)."""
    cm = _compile(model, mode)
    progresses = [s.progress for s in state.appliances]
    counters = [list(s.completed) for s in state.appliances]
    bound = cm.node_bound(t, state.battery_charge, progresses, counters)
    return None if bound >= INFEASIBLE else bound


def astar_solve(
    model: HomeModel,
    budget: Optional[SearchBudget] = None,
    *,
    heuristic_mode: str = "auto",
) -> SolveOutcome:
    """Minimise total cost over all valid plans, within the given budget.

    Returns SOLVED with an optimal plan, UNSOLVABLE when the search space
    is exhausted, or one of the budget statuses.  Deterministic: the same
    instance always yields the same outcome and plan.
    """
    if budget is None:
        budget = SearchBudget()
    cm = _compile(model, heuristic_mode)
    started = time.monotonic()
    h = cm.h
    n = cm.n
    tkey = h + 2
    npat = cm.npat
    base = 1 << n
    durations = cm.durations
    caps = cm.caps
    use_bounds = cm.use_bounds

    def finish(status: SolveStatus, plan: Optional[Plan], visited: int, expanded: int) -> SolveOutcome:
        elapsed = time.monotonic() - started
        stats = SearchStats(visited=visited, expanded=expanded, elapsed_seconds=elapsed)
        logger.info(
            "solve hash=%s status=%s cost=%s visited=%d expanded=%d elapsed_ms=%.1f",
            cm.instance_hash[:12],
            status.value,
            plan.total_cost if plan else None,
            visited,
            expanded,
            elapsed * 1000,
        )
        return SolveOutcome(status=status, plan=plan, stats=stats)

    init = model.initial_state()
    start_int = cm.encode(init)
    start_key = start_int * tkey + 1
    h0 = cm.node_bound(
        1,
        init.battery_charge,
        [s.progress for s in init.appliances],
        [list(s.completed) for s in init.appliances],
    )
    visited = 1
    expanded = 0
    if h0 >= INFEASIBLE:
        return finish(SolveStatus.UNSOLVABLE, None, visited, expanded)

    seen: dict[int, int] = {start_key: 0}
    parent: dict[int, int] = {}
    heap: list[tuple[int, int, int, int, int]] = [(h0, 0, 0, 1, start_int)]
    seq = 1
    ntable = cm.ntable
    batt_value = cm.batt_value
    max_seconds = budget.max_runtime_seconds
    max_visited = budget.max_visited_states

    while heap:
        f, g, _, t, state_int = heappop(heap)
        key = state_int * tkey + t
        if g != seen[key]:
            continue  # superseded by a cheaper path
        if time.monotonic() - started > max_seconds:
            return finish(SolveStatus.TIME_BUDGET_EXCEEDED, None, visited, expanded)
        if visited > max_visited:
            return finish(SolveStatus.STATE_BUDGET_EXCEEDED, None, visited, expanded)
        if t == h + 1:
            if not cm.is_goal_packed(state_int):
                continue
            actions = []
            k = key
            while k != start_key:
                link = parent[k]
                pat = link % npat
                k = link // npat
                bits = pat % base
                actions.append(
                    JointAction(pat // base - 1, tuple(bits >> i & 1 for i in range(n)))
                )
            actions.reverse()
            plan = Plan(actions=tuple(actions), total_cost=g - cm.total_offset)
            return finish(SolveStatus.SOLVED, plan, visited, expanded)

        expanded += 1
        charge, progresses, counters = cm.decode(state_int)
        t2 = t + 1

        # battery options: (action, packed delta, bound term)
        vrow = batt_value[t2 - 1]
        batt_opts = []
        for b in (-1, 0, 1):
            c2 = charge + b
            if c2 < 0 or c2 > cm.batt_cap:
                continue
            vb = vrow[c2]
            if use_bounds and vb >= INFEASIBLE:
                continue
            batt_opts.append((b, b * cm.batt_stride, vb if use_bounds else 0))
        if not batt_opts:
            continue

        # appliance options: (bit, packed delta, bound term); empty = dead end
        dead = False
        combos: list[tuple[int, int, int]] = [(0, 0, 0)]
        for i in range(n):
            p = progresses[i]
            counts = counters[i]
            d = durations[i]
            opts = []
            if p == 0 or p == d:
                b_off = cm._app_bound(i, t2, 0, counts)
                if b_off < INFEASIBLE:
                    opts.append((0, -p * cm.p_stride[i], b_off))
            remaining = d - p if 0 < p < d else d
            if remaining <= h - t + 1:
                p2 = p + 1 if p != d else 1
                delta = (p2 - p) * cm.p_stride[i]
                if p2 == d:
                    new_counts = list(counts)
                    for j in cm.bumps[i][t]:
                        if new_counts[j] < caps[i][j]:
                            delta += cm.c_stride[i][j]
                            new_counts[j] += 1
                else:
                    new_counts = counts
                b_on = cm._app_bound(i, t2, p2, new_counts)
                if b_on < INFEASIBLE:
                    opts.append((1, delta, b_on))
            if not opts:
                dead = True
                break
            combos = [
                (bits | (bit << i), dsum + delta, lbsum + lb)
                for bits, dsum, lbsum in combos
                for bit, delta, lb in opts
            ]
        if dead:
            continue

        row = ntable[t - 1]
        for b, bdelta, vb in batt_opts:
            pat_base = (b + 1) * base
            for bits, adelta, alb in combos:
                g2 = g + row[pat_base + bits]
                child_int = state_int + bdelta + adelta
                ckey = child_int * tkey + t2
                old = seen.get(ckey)
                if old is not None and old <= g2:
                    continue
                seen[ckey] = g2
                parent[ckey] = key * npat + pat_base + bits
                if old is None:
                    visited += 1
                heappush(heap, (g2 + vb + alb, g2, seq, t2, child_int))
                seq += 1

    return finish(SolveStatus.UNSOLVABLE, None, visited, expanded)
