"""Crew schedules, energization times and the harm objective.

A schedule assigns every line to one crew; crews work back to back from
time 0 with no idling.  An island is energized when the last repair in it
and in every island on the path back to the source is finished.  Harm is
the weighted sum of island energization times.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Mapping, Sequence

from gridrepair.model import IslandSet, PrecedenceGraph


class ListNotPermutation(ValueError):
    """Priority list does not cover every line exactly once."""


@dataclass(frozen=True)
class Assignment:
    line: str
    start: float
    completion: float


@dataclass(frozen=True)
class Schedule:
    """Per-crew ordered job assignments plus the priority list that built them."""

    crews: tuple[tuple[Assignment, ...], ...]
    m: int
    priority: tuple[str, ...]

    def completions(self) -> dict[str, float]:
        return {a.line: a.completion for crew in self.crews for a in crew}

    def starts(self) -> dict[str, float]:
        return {a.line: a.start for crew in self.crews for a in crew}

    def makespan(self) -> float:
        return max((a.completion for crew in self.crews for a in crew), default=0.0)


@dataclass(frozen=True)
class HarmReport:
    """Harm value with its per-island breakdown and optional reference bounds."""

    harm: float
    per_island: tuple[tuple[str, float, float], ...]  # (island, weight, energization)
    algorithm: str
    single_crew_optimum: float | None = None
    infinite_crew_optimum: float | None = None


def list_schedule(
    priority: Sequence[str], m: int, repair_times: Mapping[str, float]
) -> Schedule:
    """Greedy list scheduling: the next list job goes to the earliest-free crew.

    Ties between free crews go to the lowest crew index, so the first m
    jobs land on crews 0..m-1 in list order.  Zero-time jobs occupy a crew
    for zero time and complete at their start instant.
    """
    if m < 1:
        raise ValueError(f"crew count must be >= 1, got {m}")
    if sorted(priority) != sorted(repair_times) or len(priority) != len(repair_times):
        raise ListNotPermutation(
            "priority list is not a permutation of the damaged lines"
        )
    crews: list[list[Assignment]] = [[] for _ in range(m)]
    free: list[tuple[float, int]] = [(0.0, k) for k in range(m)]
    heapq.heapify(free)
    for line in priority:
        start, crew = heapq.heappop(free)
        completion = start + repair_times[line]
        crews[crew].append(Assignment(line, start, completion))
        heapq.heappush(free, (completion, crew))
    return Schedule(
        crews=tuple(tuple(c) for c in crews), m=m, priority=tuple(priority)
    )


def island_completions(
    completions: Mapping[str, float], islands: IslandSet
) -> dict[str, float]:
    """Completion of each island's last repair (0 for islands with no lines)."""
    return {
        isl.id: max((completions[lid] for lid in isl.line_ids), default=0.0)
        for isl in islands.islands
    }


def energization_times(
    schedule: Schedule, islands: IslandSet, precedence: PrecedenceGraph
) -> dict[str, float]:
    """Energization instant per island under the given schedule.

    Computed top-down over the out-tree: an island lights up at the later
    of its own last repair and its parent's energization, which equals the
    max completion over the island and all its ancestors.
    """
    group = island_completions(schedule.completions(), islands)
    energization: dict[str, float] = {}
    for isl in precedence.topological_order():
        parent_e = energization.get(precedence.parent.get(isl, ""), 0.0)
        energization[isl] = max(group[isl], parent_e)
    return energization


def harm(energization: Mapping[str, float], island_weights: Mapping[str, float]) -> float:
    """Total weighted energization time, summed in island id order."""
    return sum(island_weights[isl] * energization[isl] for isl in sorted(energization))


def infinite_crew_energization(
    islands: IslandSet, precedence: PrecedenceGraph, repair_times: Mapping[str, float]
) -> tuple[dict[str, float], float]:
    """Best possible energization: every line on its own crew.

    Each line then completes at its repair time, so an island's
    energization is the largest single repair time on its ancestor path.
    Returns the energization map and its harm, the unlimited-crew optimum.
    """
    repair_max = {
        isl.id: max((repair_times[lid] for lid in isl.line_ids), default=0.0)
        for isl in islands.islands
    }
    energization: dict[str, float] = {}
    for isl in precedence.topological_order():
        parent_e = energization.get(precedence.parent.get(isl, ""), 0.0)
        energization[isl] = max(repair_max[isl], parent_e)
    return energization, harm(energization, islands.weights())


def harm_report(
    energization: Mapping[str, float],
    islands: IslandSet,
    algorithm: str,
    single_crew_optimum: float | None = None,
    infinite_crew_optimum: float | None = None,
) -> HarmReport:
    weights = islands.weights()
    return HarmReport(
        harm=harm(energization, weights),
        per_island=tuple(
            (isl, weights[isl], energization[isl]) for isl in sorted(energization)
        ),
        algorithm=algorithm,
        single_crew_optimum=single_crew_optimum,
        infinite_crew_optimum=infinite_crew_optimum,
    )
