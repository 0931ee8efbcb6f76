"""Island decomposition of sparse point sets and cleaning schedules.

A dirty set splits into (alpha, beta)-islands: groups of diameter at most
alpha (Chebyshev metric) whose beta-neighborhood contains no other dirty
point.  Rank-by-rank cleaning removes islands at growing scales; schedules
whose parameters grow fast enough clean Bernoulli-random dirt almost
surely while touching only a small fraction of the plane.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

Point = tuple[int, int]


def chebyshev(p: Point, q: Point, torus: tuple[int, int] | None = None) -> int:
    """Max-coordinate distance, optionally wrapping on a torus (w, h)."""
    dx = abs(p[0] - q[0])
    dy = abs(p[1] - q[1])
    if torus is not None:
        w, h = torus
        dx = min(dx, w - dx)
        dy = min(dy, h - dy)
    return max(dx, dy)


def diameter(points: Iterable[Point], torus: tuple[int, int] | None = None) -> int:
    """Largest pairwise distance; 0 for singletons and the empty set."""
    pts = list(points)
    best = 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = chebyshev(pts[i], pts[j], torus)
            if d > best:
                best = d
    return best


def find_islands(
    points: Iterable[Point],
    alpha: int,
    beta: int,
    torus: tuple[int, int] | None = None,
) -> tuple[list[frozenset[Point]], list[frozenset[Point]]]:
    """Split a dirty set into (alpha, beta)-islands and oversize groups.

    Distance > beta between groups makes the beta-proximity components the
    only candidates: an island must be a whole component (a part would have
    a neighbor within beta), and a union of several would already have
    diameter above beta >= alpha.  Components are therefore islands exactly
    when their diameter is at most alpha; wider ones are returned in the
    second list, untouched.
    """
    if not (0 < alpha <= beta):
        raise ValueError("need 0 < alpha <= beta")
    pts = sorted(set(points))
    n = len(pts)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if chebyshev(pts[i], pts[j], torus) <= beta:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[Point]] = {}
    for i, p in enumerate(pts):
        groups.setdefault(find(i), []).append(p)
    islands: list[frozenset[Point]] = []
    oversize: list[frozenset[Point]] = []
    for g in groups.values():
        (islands if diameter(g, torus) <= alpha else oversize).append(frozenset(g))
    islands.sort(key=min)
    oversize.sort(key=min)
    return islands, oversize


@dataclass(frozen=True)
class Schedule:
    """Per-rank island scales: rank k removes (alphas[k-1], betas[k-1])-islands."""

    c: int
    alpha1: int
    alphas: tuple[int, ...]
    betas: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.alphas)

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.alphas, self.betas))

    def to_json(self) -> dict:
        return {"c": self.c, "alpha1": self.alpha1, "pairs": [list(p) for p in self.pairs()]}

    @classmethod
    def from_json(cls, obj: dict) -> "Schedule":
        pairs = [tuple(p) for p in obj["pairs"]]
        return cls(
            obj["c"],
            obj["alpha1"],
            tuple(a for a, _ in pairs),
            tuple(b for _, b in pairs),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, s: str) -> "Schedule":
        return cls.from_json(json.loads(s))


def make_schedule(c: int, alpha1: int, count: int) -> Schedule:
    """The stock growth pattern: beta_k = c*k*alpha_k, alpha_{k+1} = 8*sum(betas)+1.

    Scales grow roughly like k! * c^k, so log(beta_k) is polynomial in k and
    the survival bound series converges while each rank still leaves room
    for the next one.
    """
    if c < 1 or alpha1 < 1 or count < 1:
        raise ValueError("schedule parameters must be positive")
    alphas = [alpha1]
    betas = []
    for k in range(1, count + 1):
        betas.append(c * k * alphas[-1])
        if k < count:
            alphas.append(8 * sum(betas) + 1)
    return Schedule(c, alpha1, tuple(alphas), tuple(betas))


def schedule_growth_ok(schedule: Schedule) -> list[bool]:
    """Per rank n: 8 * sum of earlier betas < alpha_n <= beta_n.

    This spacing keeps the doubling trees of distinct survivors disjoint,
    which is what makes the survival bound count each dirty point once.
    """
    out = []
    for n in range(1, len(schedule) + 1):
        a, b = schedule.alphas[n - 1], schedule.betas[n - 1]
        out.append(8 * sum(schedule.betas[: n - 1]) < a <= b)
    return out


def correction_gap_ok(schedule: Schedule, c2: int) -> list[bool]:
    """Per rank k: beta_k > 4*c2*alpha_k.

    Guarantees that the half-beta neighborhoods used to repair rank-k
    islands are disjoint and wide enough for a c2-sized repair collar.
    """
    return [b > 4 * c2 * a for a, b in schedule.pairs()]


def changed_fraction_bound(schedule: Schedule, c1: int) -> float:
    """Upper bound on the density of cells touched when repairing islands.

    Repairing a rank-k island rewrites at most its 2*c1*alpha_k
    neighborhood, a square of side (4*c1+1)*alpha_k, and distinct rank-k
    islands are more than beta_k apart; summing the per-rank densities
    bounds the total changed fraction.
    """
    return sum(((4 * c1 + 1) * a / b) ** 2 for a, b in schedule.pairs())


def survival_log2_bound(schedule: Schedule, n: int, epsilon: float) -> float:
    """log2 of a bound on P(a fixed point is still dirty after n ranks).

    A survivor of rank n roots a binary tree of depth n whose 2^n leaves
    are distinct dirty points (epsilon^(2^n)); encoding the displacement at
    each branch costs 2*log2(4*beta_i) bits at rank i, with 2^(n-i) branches.
    """
    if not (1 <= n <= len(schedule)):
        raise ValueError("rank out of schedule range")
    if not (0 < epsilon < 1):
        raise ValueError("epsilon must be in (0, 1)")
    total = (2**n) * math.log2(epsilon)
    for i in range(1, n + 1):
        total += 2 ** (n - i + 1) * math.log2(4 * schedule.betas[i - 1])
    return total


@dataclass
class RankOutcome:
    rank: int
    alpha: int
    beta: int
    islands: tuple[frozenset[Point], ...]
    oversize: tuple[frozenset[Point], ...]
    removed: int
    remaining: int


@dataclass
class CleaningReport:
    ranks: list[RankOutcome]
    success: bool
    residual: frozenset[Point]


def clean(
    points: Iterable[Point],
    schedule: Schedule,
    torus: tuple[int, int] | None = None,
) -> CleaningReport:
    """Remove islands rank by rank; success means nothing is left."""
    current = set(points)
    ranks: list[RankOutcome] = []
    for k, (a, b) in enumerate(schedule.pairs(), start=1):
        islands, oversize = find_islands(current, a, b, torus)
        removed = sum(len(i) for i in islands)
        for isl in islands:
            current -= isl
        ranks.append(
            RankOutcome(k, a, b, tuple(islands), tuple(oversize), removed, len(current))
        )
        if not current:
            break
    return CleaningReport(ranks, not current, frozenset(current))


def sample_bernoulli(
    width: int, height: int, epsilon: float, seed: int | Sequence[int]
) -> set[Point]:
    """Each cell of the width x height grid is dirty independently w.p. epsilon."""
    if not (0 <= epsilon <= 1):
        raise ValueError("epsilon must be a probability")
    rng = np.random.default_rng(seed)
    mask = rng.random((height, width)) < epsilon
    return {(int(x), int(y)) for y, x in np.argwhere(mask)}
