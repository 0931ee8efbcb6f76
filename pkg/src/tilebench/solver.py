"""Finite-window solving for Wang tile sets.

Deterministic backtracking over cells in row-major order (bottom row first,
x inner), trying tile ids in ascending order, so results are reproducible.
Searches carry an explicit node budget; exceeding it yields the status
``"inconclusive"`` rather than a wrong verdict.

Bounded mode leaves window borders free unless explicit boundary colors are
given; toroidal mode wraps both axes instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from .core import HOLE, MalformedPatchError, PatchGrid, TileSet


class InconclusiveError(RuntimeError):
    """A search hit its budget before reaching a verdict."""


@dataclass
class SolveResult:
    status: str  # "solved" | "unsatisfiable" | "inconclusive"
    patch: PatchGrid | None
    count: int
    nodes: int
    solutions: tuple[PatchGrid, ...] = ()


def _boundary_side(boundary: Mapping | None, side: str, length: int) -> tuple[int, ...] | None:
    if boundary is None:
        return None
    v = boundary.get(side)
    if v is None:
        return None
    if isinstance(v, int):
        return (v,) * length
    v = tuple(int(c) for c in v)
    if len(v) != length:
        raise ValueError(f"boundary {side!r} must have {length} colors")
    return v


def solve(
    tile_set: TileSet,
    width: int,
    height: int,
    *,
    template: PatchGrid | None = None,
    boundary: Mapping | None = None,
    toroidal: bool = False,
    mode: str = "first",
    max_nodes: int = 2_000_000,
    max_solutions: int | None = None,
) -> SolveResult:
    """Search for tilings of a width x height window.

    Args:
        template: optional partial patch; HOLE cells are free, other cells
            are pinned to their tile id.
        boundary: optional mapping with any of the keys "left", "right",
            "top", "bottom"; each value is a single color or a per-cell
            sequence (bottom-to-top for the vertical sides, left-to-right
            for the horizontal ones).  Only allowed in bounded mode.
        toroidal: wrap both axes (periodic tiling of the w x h torus).
        mode: "first" stops at one tiling, "count" counts all, "enumerate"
            counts and also returns them.
        max_nodes: candidate-placement budget; exceeding it gives status
            "inconclusive".
        max_solutions: optional cap for count/enumerate; hitting it also
            gives "inconclusive" (the count is then a lower bound).
    """
    if mode not in ("first", "count", "enumerate"):
        raise ValueError(f"unknown mode {mode!r}")
    if toroidal and boundary:
        raise ValueError("boundary colors make no sense on a torus")
    if width < 1 or height < 1:
        raise ValueError("window dimensions must be positive")

    tiles = tile_set.tiles
    n_tiles = len(tiles)
    left_of = [t.left for t in tiles]
    right_of = [t.right for t in tiles]
    top_of = [t.top for t in tiles]
    bottom_of = [t.bottom for t in tiles]

    if template is not None:
        if template.width != width or template.height != height:
            raise ValueError("template dimensions must match the window")
        for (x, y) in ((x, y) for y in range(height) for x in range(width)):
            v = template.cells[y][x]
            if v != HOLE and not (0 <= v < n_tiles):
                raise MalformedPatchError(f"template cell ({x}, {y}) holds unknown tile id {v}")

    b_left = _boundary_side(boundary, "left", height)
    b_right = _boundary_side(boundary, "right", height)
    b_top = _boundary_side(boundary, "top", width)
    b_bottom = _boundary_side(boundary, "bottom", width)

    cand_cache: dict[tuple[int | None, int | None], tuple[int, ...]] = {}

    def candidates(l: int | None, b: int | None) -> tuple[int, ...]:
        got = cand_cache.get((l, b))
        if got is None:
            got = tuple(
                i
                for i in range(n_tiles)
                if (l is None or left_of[i] == l) and (b is None or bottom_of[i] == b)
            )
            cand_cache[(l, b)] = got
        return got

    order = [(x, y) for y in range(height) for x in range(width)]
    ncells = width * height
    grid = [[-2] * width for _ in range(height)]
    iters: list[list | None] = [None] * ncells
    nodes = 0
    count = 0
    first: PatchGrid | None = None
    sols: list[PatchGrid] = []
    budget_hit = False
    cap_hit = False

    pos = 0
    while pos >= 0:
        if pos == ncells:
            count += 1
            snap = PatchGrid(width, height, [row[:] for row in grid])
            if first is None:
                first = snap
            if mode == "enumerate":
                sols.append(snap)
            if mode == "first":
                break
            if max_solutions is not None and count >= max_solutions:
                cap_hit = True
                break
            pos -= 1
            continue
        x, y = order[pos]
        state = iters[pos]
        if state is None:
            if x > 0:
                need_l: int | None = right_of[grid[y][x - 1]]
            elif not toroidal and b_left is not None:
                need_l = b_left[y]
            else:
                need_l = None
            if y > 0:
                need_b: int | None = top_of[grid[y - 1][x]]
            elif not toroidal and b_bottom is not None:
                need_b = b_bottom[x]
            else:
                need_b = None
            cands = candidates(need_l, need_b)
            if template is not None:
                pin = template.cells[y][x]
                if pin != HOLE:
                    cands = (pin,) if pin in cands else ()
            state = [cands, 0]
            iters[pos] = state
        cands, i = state
        placed = False
        while i < len(cands):
            t = cands[i]
            i += 1
            nodes += 1
            if nodes > max_nodes:
                budget_hit = True
                break
            if toroidal:
                if x == width - 1 and right_of[t] != left_of[t if width == 1 else grid[y][0]]:
                    continue
                if y == height - 1 and top_of[t] != bottom_of[t if height == 1 else grid[0][x]]:
                    continue
            else:
                if x == width - 1 and b_right is not None and right_of[t] != b_right[y]:
                    continue
                if y == height - 1 and b_top is not None and top_of[t] != b_top[x]:
                    continue
            grid[y][x] = t
            state[1] = i
            pos += 1
            placed = True
            break
        if budget_hit:
            break
        if not placed:
            iters[pos] = None
            grid[y][x] = -2
            pos -= 1

    if budget_hit or cap_hit:
        status = "inconclusive"
    elif mode == "first":
        status = "solved" if first is not None else "unsatisfiable"
    else:
        status = "solved" if count > 0 else "unsatisfiable"
    return SolveResult(status, first, count, nodes, tuple(sols))


def count_patch_tilings(tile_set: TileSet, width: int, height: int, **kw) -> int:
    """Exact number of tilings of the window; raises InconclusiveError on budget."""
    r = solve(tile_set, width, height, mode="count", **kw)
    if r.status == "inconclusive":
        raise InconclusiveError(f"count hit the search budget after {r.nodes} nodes")
    return r.count


def enumerate_patch_tilings(tile_set: TileSet, width: int, height: int, **kw) -> tuple[PatchGrid, ...]:
    r = solve(tile_set, width, height, mode="enumerate", **kw)
    if r.status == "inconclusive":
        raise InconclusiveError(f"enumeration hit its cap after {r.count} tilings / {r.nodes} nodes")
    return r.solutions


def fill_template(tile_set: TileSet, template: PatchGrid, **kw) -> PatchGrid | None:
    """Complete the HOLE cells of a partial patch, or None if impossible."""
    r = solve(tile_set, template.width, template.height, template=template, mode="first", **kw)
    if r.status == "inconclusive":
        raise InconclusiveError(f"fill hit the search budget after {r.nodes} nodes")
    return r.patch


def find_periods(tile_set: TileSet, max_period: int, *, max_nodes: int = 500_000) -> set[tuple[int, int]]:
    """All (px, py) with 1 <= px, py <= max_period admitting a toroidal tiling.

    A tiling of the px x py torus unrolls to a plane tiling with periods
    (px, 0) and (0, py), so this is the exhaustive small-period census.
    """
    out: set[tuple[int, int]] = set()
    for px in range(1, max_period + 1):
        for py in range(1, max_period + 1):
            r = solve(tile_set, px, py, toroidal=True, mode="first", max_nodes=max_nodes)
            if r.status == "inconclusive":
                raise InconclusiveError(f"period ({px}, {py}) hit the search budget")
            if r.status == "solved":
                out.add((px, py))
    return out


Block = tuple[tuple[int, ...], ...]


def _blocks_at(patch: PatchGrid, n: int, ox: int, oy: int) -> frozenset[Block]:
    out = set()
    for ay in range(oy, patch.height - n + 1, n):
        for ax in range(ox, patch.width - n + 1, n):
            out.add(
                tuple(tuple(patch.cells[ay + dy][ax + dx] for dx in range(n)) for dy in range(n))
            )
    return frozenset(out)


def find_cut_offsets(
    patch: PatchGrid, n: int, family: frozenset[Block] | set[Block] | None = None
) -> list[tuple[int, int]]:
    """Offsets (ox, oy) in [0, n)^2 where the patch cuts into known n x n blocks.

    Every complete block of the cut anchored at x = ox (mod n), y = oy (mod n)
    must belong to ``family``.  With family=None the reference family is the
    patch's own blocks at offset (0, 0), so (0, 0) always qualifies and the
    question becomes whether any *other* alignment reproduces those blocks.
    """
    if n < 1 or patch.width < 2 * n - 1 or patch.height < 2 * n - 1:
        raise ValueError("patch too small to compare cut alignments")
    if patch.holes():
        raise ValueError("cut analysis needs a hole-free patch")
    if family is None:
        family = _blocks_at(patch, n, 0, 0)
    family = frozenset(family)
    out = []
    for oy in range(n):
        for ox in range(n):
            blocks = _blocks_at(patch, n, ox, oy)
            if blocks and blocks <= family:
                out.append((ox, oy))
    return out


def _macro_sides(block: Block, tile_set: TileSet):
    tiles = tile_set.tiles
    nb = len(block)
    left = tuple(tiles[block[dy][0]].left for dy in range(nb))
    right = tuple(tiles[block[dy][-1]].right for dy in range(nb))
    bottom = tuple(tiles[block[0][dx]].bottom for dx in range(nb))
    top = tuple(tiles[block[-1][dx]].top for dx in range(nb))
    return left, right, top, bottom


def _macro_tiles_embed(blocks: Sequence[Block], tau: TileSet, rho: TileSet) -> bool:
    """Can each block act as a rho tile, under injective per-axis color maps?

    Vertical-side macro colors (left/right N-tuples) and horizontal-side ones
    (top/bottom) live in separate namespaces, since Wang matching never
    compares across axes.
    """
    sides = [_macro_sides(b, tau) for b in blocks]
    hmap: dict[tuple, int] = {}
    vmap: dict[tuple, int] = {}
    hused: set[int] = set()
    vused: set[int] = set()

    def rec(i: int) -> bool:
        if i == len(sides):
            return True
        ml, mr, mt, mb = sides[i]
        for rt in rho.tiles:
            undo = []
            ok = True
            for m, c, mp, used in (
                (ml, rt.left, hmap, hused),
                (mr, rt.right, hmap, hused),
                (mt, rt.top, vmap, vused),
                (mb, rt.bottom, vmap, vused),
            ):
                cur = mp.get(m)
                if cur is None:
                    if c in used:
                        ok = False
                        break
                    mp[m] = c
                    used.add(c)
                    undo.append((mp, used, m, c))
                elif cur != c:
                    ok = False
                    break
            if ok and rec(i + 1):
                return True
            for mp, used, m, c in undo:
                del mp[m]
                used.discard(c)
        return False

    return rec(0)


@dataclass
class SimulationCheck:
    status: str  # "verified" | "refuted" | "inconclusive"
    detail: str
    offset: tuple[int, int] | None = None
    family_size: int = 0
    tilings_seen: int = 0
    counterexample_tiling: PatchGrid | None = None
    counterexample_offsets: tuple[tuple[int, int], ...] = ()


def check_simulation_window(
    tau: TileSet,
    rho: TileSet,
    n: int,
    window: int,
    *,
    max_solutions: int = 4096,
    max_nodes: int = 5_000_000,
) -> SimulationCheck:
    """Window evidence that tau simulates rho with zoom n.

    Enumerates every tau-tiling of a window x window square, infers a
    candidate macro-tile family from the first tiling at each cut offset,
    and accepts when some candidate (a) cuts *every* tiling at exactly one
    offset and (b) embeds into rho as macro-tiles under injective per-axis
    color maps.  Bounded windows are evidence, not proof; enumeration caps
    surface as "inconclusive" rather than a verdict.
    """
    if window < 2 * n - 1:
        raise ValueError("window must be at least 2n-1 so every offset has a complete block")
    r = solve(tau, window, window, mode="enumerate", max_solutions=max_solutions, max_nodes=max_nodes)
    if r.status == "inconclusive":
        return SimulationCheck(
            "inconclusive",
            f"enumeration capped at {r.count} tilings / {r.nodes} nodes",
            tilings_seen=r.count,
        )
    if r.status == "unsatisfiable":
        return SimulationCheck("refuted", "tile set admits no tiling of the window")
    tilings = r.solutions
    offsets = list(product(range(n), range(n)))
    first_bad: tuple[PatchGrid, tuple[tuple[int, int], ...]] | None = None
    embed_failed = False
    for off0 in offsets:
        family = _blocks_at(tilings[0], n, *off0)
        unique = True
        for u in tilings:
            valid = tuple(off for off in offsets if _blocks_at(u, n, *off) <= family)
            if len(valid) != 1:
                unique = False
                if first_bad is None:
                    first_bad = (u, valid)
                break
        if not unique:
            continue
        if _macro_tiles_embed(sorted(family), tau, rho):
            return SimulationCheck(
                "verified",
                f"unique cut in all {len(tilings)} tilings; {len(family)} macro-tiles embed",
                offset=off0,
                family_size=len(family),
                tilings_seen=len(tilings),
            )
        embed_failed = True
    if embed_failed and first_bad is None:
        return SimulationCheck(
            "refuted",
            "cuts are unique but the macro-tiles do not embed into the target set",
            tilings_seen=len(tilings),
        )
    assert first_bad is not None
    u, valid = first_bad
    return SimulationCheck(
        "refuted",
        f"a tiling admits {len(valid)} valid cut offsets instead of 1",
        tilings_seen=len(tilings),
        counterexample_tiling=u,
        counterexample_offsets=valid,
    )
