"""Compile a machine-checked color predicate into a simulating tile set.

The input is a machine R that reads 4k letters (two per payload bit value)
and accepts or gets stuck; the output is a tile set whose tilings are
exactly the grids of N x N macro-tiles whose border payload bits satisfy R
on every macro-tile, read in input order [left, right, top, bottom].

Every edge color carries its position mod N, so the macro-tile cut is
unique; the free content is the payload bits on macro borders, the wire
bits that ferry them to the computation zone, and the zone's space-time
diagram, which the machine's determinism pins down once the inputs are
fixed.  The zone's top edge only exists in an accepting diagram, so a
rejected payload combination simply cannot be tiled over.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from ..core import PatchGrid, Tile, TileSet
from ..machine import (
    SYM_ZERO,
    Machine,
    diagram_local_rules,
    encode_program,
    run_machine,
)
from .layout import SimulationLayout, plan_layout

_NO_SIG = object()


class CompileError(ValueError):
    """The machine cannot be compiled at the requested geometry."""


class _ColorCoder:
    """Position-aware edge colors, interned to dense ints.

    The kind of an edge is a function of its position alone (payload window,
    wire segment, zone floor/interior/ceiling, plain); callers only supply
    the dynamic content: a carried bit, a zone configuration, a head signal.
    """

    def __init__(self, lay: SimulationLayout, trk: tuple[int, ...]):
        self.lay = lay
        self.trk = trk
        self.table: dict[tuple, int] = {}
        self._hwin = frozenset(lay.hwin_rows)
        self._vwin = frozenset(lay.vwin_cols)

    def _cid(self, t: tuple) -> int:
        v = self.table.get(t)
        if v is None:
            v = self.table[t] = len(self.table)
        return v

    def h(self, i: int, j: int, bit: int | None = None, sig=_NO_SIG) -> int:
        lay = self.lay
        i %= lay.n
        if i == 0:
            if j in self._hwin:
                assert bit is not None
                return self._cid(("H", 0, j, "pay", bit))
            return self._cid(("H", 0, j, "plain"))
        if (
            lay.sx0 + 1 <= i <= lay.sx0 + lay.zone_w - 1
            and lay.zy0 <= j < lay.zy0 + lay.zone_h
        ):
            assert sig is not _NO_SIG
            return self._cid(("H", i, j, "sig", sig))
        if bit is not None:
            return self._cid(("H", i, j, "wire", bit))
        return self._cid(("H", i, j, "plain"))

    def v(self, i: int, j: int, bit: int | None = None, cfg=None) -> int:
        lay = self.lay
        j %= lay.n
        if j == 0:
            if i in self._vwin:
                assert bit is not None
                return self._cid(("V", i, 0, "pay", bit))
            return self._cid(("V", i, 0, "plain"))
        if lay.sx0 <= i < lay.sx0 + lay.zone_w and lay.zy0 <= j <= lay.zy0 + lay.zone_h:
            c = i - lay.sx0
            if j == lay.zy0:
                if c < 2 * lay.k or 3 * lay.k <= c < 4 * lay.k:
                    assert bit is not None
                    return self._cid(("V", i, j, "deliver", bit))
                return self._cid(("V", i, j, "floor"))
            if j == lay.zy0 + lay.zone_h:
                if i in self._vwin:
                    assert bit is not None
                    return self._cid(("V", i, j, "close", bit))
                return self._cid(("V", i, j, "close"))
            assert cfg is not None
            if i in self._vwin:
                assert bit is not None
                return self._cid(("V", i, j, "cfg", cfg, bit))
            return self._cid(("V", i, j, "cfg", cfg))
        if bit is not None:
            return self._cid(("V", i, j, "wire", bit))
        return self._cid(("V", i, j, "plain"))


@dataclass
class CompiledTileSet:
    """A simulating tile set plus everything needed to read it back."""

    tile_set: TileSet
    layout: SimulationLayout
    machine: Machine
    accepted: frozenset[tuple[int, ...]]
    steps_needed: int
    track: tuple[int, ...]
    colors: tuple[tuple, ...]
    meta: dict
    coder: _ColorCoder = field(repr=False)


def _probe_capacity(
    machine: Machine, k: int, track: Sequence[int] | None, probe_steps: int
) -> tuple[frozenset[tuple[int, ...]], int, int]:
    """Run the checker on all 2^(4k) payloads; bound its time and space.

    Payloads it rejects must reject by getting stuck or walking off, not by
    running forever - a looping checker cannot be given a finite zone.
    """
    accepted = set()
    t_max, w_need = 0, 4 * k
    for bits in itertools.product((0, 1), repeat=4 * k):
        tape = [SYM_ZERO + b for b in bits]
        res = run_machine(machine, tape, track=track, max_steps=probe_steps, grow=True)
        if res.status == "accepted":
            accepted.add(bits)
            t_max = max(t_max, res.steps)
            w_need = max(w_need, len(res.tape))
        elif res.status == "timeout":
            raise CompileError(
                f"checker still running on payload {bits} after {probe_steps} steps"
            )
    if not accepted:
        raise CompileError("checker accepts no payload; the tile set would be empty")
    return frozenset(accepted), t_max, w_need


def compile_simulation(
    machine: Machine,
    k: int,
    *,
    zoom: int | None = None,
    track: Sequence[int] | None = None,
    probe_steps: int = 10_000,
) -> CompiledTileSet:
    """Build the simulating tile set for a 4k-bit checker machine.

    The zone is sized from an exhaustive run over all payloads, and the
    zoom defaults to the smallest feasible power of two.  ``track`` pins
    read-only track bits under the zone's tape cells (position c of the
    track sits under tape cell c; missing positions read 0).
    """
    if k < 1:
        raise CompileError("need at least one payload bit per side")
    if track is not None and not machine.program_track:
        raise CompileError("track bits supplied for a machine without a track")
    accepted, t_max, w_need = _probe_capacity(machine, k, track, probe_steps)
    zone_w = w_need
    zone_h = max(2, t_max + 1)
    lay = plan_layout(k, zone_w, zone_h, zoom=zoom)
    trk = tuple(
        (track[c] if track is not None and c < len(track) else 0) for c in range(zone_w)
    )
    rules = list(dict.fromkeys(diagram_local_rules(machine)))

    coder = _ColorCoder(lay, trk)
    tiles: list[Tile] = []
    names: list[str] = []

    def emit(left: int, right: int, top: int, bottom: int, name: str) -> None:
        tiles.append(Tile(left, right, top, bottom))
        names.append(name)

    runs = lay.wire_runs()
    inc: dict[tuple[int, int], list] = {}
    for wid in sorted(runs):
        for cell, sides in runs[wid]:
            inc.setdefault(cell, []).append((wid, sides))

    n, sx0, zy0 = lay.n, lay.sx0, lay.zy0
    vwin = frozenset(lay.vwin_cols)
    for j in range(n):
        for i in range(n):
            if lay.in_zone(i, j):
                c, t = i - sx0, j - zy0
                transit = i in vwin
                if t == 0:
                    left = coder.h(i, j, sig=None)
                    right = coder.h(i + 1, j, sig=None)
                    if c < 4 * k:
                        for b in (0, 1):
                            cfg0 = (SYM_ZERO + b, machine.start if c == 0 else None, trk[c])
                            if transit:
                                top = coder.v(i, j + 1, cfg=cfg0, bit=b)
                                bottom = coder.v(i, j)
                            else:
                                top = coder.v(i, j + 1, cfg=cfg0)
                                bottom = coder.v(i, j, bit=b)
                            emit(left, right, top, bottom, f"{i},{j} in{c}={b}")
                    else:
                        cfg0 = (machine.blank, None, trk[c])
                        emit(
                            left,
                            right,
                            coder.v(i, j + 1, cfg=cfg0),
                            coder.v(i, j),
                            f"{i},{j} pad",
                        )
                    continue
                ceiling = t == lay.zone_h - 1
                for ridx, rule in enumerate(rules):
                    if rule.below[2] != trk[c] or rule.above[2] != trk[c]:
                        continue
                    if c == 0 and rule.left is not None:
                        continue
                    if c == zone_w - 1 and rule.right is not None:
                        continue
                    if ceiling and rule.above[1] not in (None, machine.accept):
                        continue
                    left = coder.h(i, j, sig=rule.left)
                    right = coder.h(i + 1, j, sig=rule.right)
                    for tb in (0, 1) if transit else (None,):
                        bottom = coder.v(i, j, cfg=rule.below, bit=tb)
                        if ceiling:
                            top = coder.v(i, j + 1, bit=tb)
                        else:
                            top = coder.v(i, j + 1, cfg=rule.above, bit=tb)
                        suffix = "" if tb is None else f" t={tb}"
                        emit(left, right, top, bottom, f"{i},{j} z{ridx}{suffix}")
                continue
            entries = inc.get((i, j), ())
            for bits in itertools.product((0, 1), repeat=len(entries)):
                side_bit: dict[str, int] = {}
                for (wid, sides), b in zip(entries, bits):
                    for side in sides:
                        side_bit[side] = b
                left = coder.h(i, j, bit=side_bit.get("left"))
                right = coder.h(i + 1, j, bit=side_bit.get("right"))
                top = coder.v(i, j + 1, bit=side_bit.get("top"))
                bottom = coder.v(i, j, bit=side_bit.get("bottom"))
                tag = " ".join(
                    f"{wid[0]}{wid[1]}={b}" for (wid, _), b in zip(entries, bits)
                )
                emit(left, right, top, bottom, f"{i},{j}" + (f" {tag}" if tag else ""))

    tile_set = TileSet(len(coder.table), tiles, names)
    colors = [()] * len(coder.table)
    for tup, idx in coder.table.items():
        colors[idx] = tup
    try:
        program_bits = len(encode_program(machine))
    except ValueError:
        program_bits = None
    meta = {
        "layout_version": 1,
        "zoom": lay.n,
        "payload_bits": k,
        "zone": [lay.zone_w, lay.zone_h],
        "zone_origin": [lay.sx0, lay.zy0],
        "h_window_rows": list(lay.hwin_rows),
        "v_window_cols": list(lay.vwin_cols),
        "input_cols": [lay.strip_col(idx) for idx in range(4 * k)],
        "steps_needed": t_max,
        "accepted_payloads": len(accepted),
        "tile_count": len(tiles),
        "color_count": len(coder.table),
        "program_bits": program_bits,
    }
    return CompiledTileSet(
        tile_set, lay, machine, accepted, t_max, trk, tuple(colors), meta, coder
    )


def payload_accepted(
    compiled: CompiledTileSet,
    left: Sequence[int],
    right: Sequence[int],
    top: Sequence[int],
    bottom: Sequence[int],
) -> bool:
    return (*left, *right, *top, *bottom) in compiled.accepted


def _zone_run(compiled: CompiledTileSet, bits: tuple[int, ...]):
    """Configs and head signals of the accepting diagram, frozen to zone height."""
    lay, machine = compiled.layout, compiled.machine
    tape = [SYM_ZERO + b for b in bits] + [machine.blank] * (lay.zone_w - 4 * lay.k)
    res = run_machine(
        compiled.machine,
        tape,
        track=compiled.track,
        max_steps=lay.zone_h,
        record=True,
    )
    if res.status != "accepted" or res.steps > lay.zone_h - 1:
        raise ValueError(f"payload {bits} is rejected by the checker")
    hist = res.history
    rows = [hist[t] if t < len(hist) else hist[-1] for t in range(lay.zone_h)]
    cfgs = [
        tuple(
            (tape_t[c], state if head == c else None, compiled.track[c])
            for c in range(lay.zone_w)
        )
        for (state, head, tape_t) in rows
    ]
    sigs: list[dict[int, tuple[str, int]]] = [{}]
    for t in range(1, lay.zone_h):
        _, h_prev, _ = rows[t - 1]
        state, h_now, _ = rows[t]
        cross: dict[int, tuple[str, int]] = {}
        if h_now == h_prev + 1:
            cross[h_now] = ("R", state)
        elif h_now == h_prev - 1:
            cross[h_prev] = ("L", state)
        sigs.append(cross)
    return cfgs, sigs


def assemble_macro_tile(
    compiled: CompiledTileSet,
    left: Sequence[int],
    right: Sequence[int],
    top: Sequence[int],
    bottom: Sequence[int],
) -> PatchGrid:
    """The unique macro-tile content for an accepted payload quadruple."""
    hook = getattr(compiled, "assemble_macro", None)
    if hook is not None:  # self-describing sets carry their own assembler
        return hook(left, right, top, bottom)
    lay = compiled.layout
    k, n, sx0, zy0 = lay.k, lay.n, lay.sx0, lay.zy0
    for side in (left, right, top, bottom):
        if len(side) != k or any(b not in (0, 1) for b in side):
            raise ValueError("each side needs exactly k payload bits")
    bits = (*left, *right, *top, *bottom)
    cfgs, sigs = _zone_run(compiled, bits)
    coder, ts = compiled.coder, compiled.tile_set
    wire_bit = {("L", r): left[r] for r in range(k)}
    wire_bit |= {("R", r): right[r] for r in range(k)}
    wire_bit |= {("T", r): top[r] for r in range(k)}
    wire_bit |= {("B", r): bottom[r] for r in range(k)}
    inc: dict[tuple[int, int], list] = {}
    for wid, path in compiled.layout.wire_runs().items():
        for cell, sides in path:
            inc.setdefault(cell, []).append((wid, sides))
    vwin = frozenset(lay.vwin_cols)
    grid = [[0] * n for _ in range(n)]
    for j in range(n):
        for i in range(n):
            if lay.in_zone(i, j):
                c, t = i - sx0, j - zy0
                tb = top[i - sx0 - 2 * k] if i in vwin else None
                if t == 0:
                    lc = coder.h(i, j, sig=None)
                    rc = coder.h(i + 1, j, sig=None)
                    if c < 4 * k:
                        b = bits[c]
                        cfg0 = (SYM_ZERO + b, compiled.machine.start if c == 0 else None, compiled.track[c])
                        if i in vwin:
                            quad = (lc, rc, coder.v(i, j + 1, cfg=cfg0, bit=b), coder.v(i, j))
                        else:
                            quad = (lc, rc, coder.v(i, j + 1, cfg=cfg0), coder.v(i, j, bit=b))
                    else:
                        cfg0 = (compiled.machine.blank, None, compiled.track[c])
                        quad = (lc, rc, coder.v(i, j + 1, cfg=cfg0), coder.v(i, j))
                else:
                    below, above = cfgs[t - 1][c], cfgs[t][c]
                    sl, sr = sigs[t].get(c), sigs[t].get(c + 1)
                    lc = coder.h(i, j, sig=sl)
                    rc = coder.h(i + 1, j, sig=sr)
                    bottom_c = coder.v(i, j, cfg=below, bit=tb)
                    if t == lay.zone_h - 1:
                        top_c = coder.v(i, j + 1, bit=tb)
                    else:
                        top_c = coder.v(i, j + 1, cfg=above, bit=tb)
                    quad = (lc, rc, top_c, bottom_c)
            else:
                side_bit: dict[str, int] = {}
                for wid, sides in inc.get((i, j), ()):
                    for side in sides:
                        side_bit[side] = wire_bit[wid]
                quad = (
                    coder.h(i, j, bit=side_bit.get("left")),
                    coder.h(i + 1, j, bit=side_bit.get("right")),
                    coder.v(i, j + 1, bit=side_bit.get("top")),
                    coder.v(i, j, bit=side_bit.get("bottom")),
                )
            tid = ts.tile_id(quad)
            if tid is None:
                raise AssertionError(f"no tile matches cell {(i, j)}")
            grid[j][i] = tid
    return PatchGrid(n, n, grid)


def macro_payloads(
    compiled: CompiledTileSet, patch: PatchGrid, ox: int, oy: int
) -> dict[str, tuple[int, ...]]:
    """Read the four payload bit vectors off the macro-tile block at (ox, oy)."""
    lay, ts = compiled.layout, compiled.tile_set
    n = lay.n
    if not (0 <= ox <= patch.width - n and 0 <= oy <= patch.height - n):
        raise ValueError("block sticks out of the patch")

    def pay_bit(color: int) -> int:
        tup = compiled.colors[color]
        if tup[3] != "pay":
            raise ValueError(f"edge color {tup} is not a payload color")
        return tup[4]

    return {
        "left": tuple(
            pay_bit(ts.tiles[patch.get(ox, oy + row)].left) for row in lay.hwin_rows
        ),
        "right": tuple(
            pay_bit(ts.tiles[patch.get(ox + n - 1, oy + row)].right)
            for row in lay.hwin_rows
        ),
        "top": tuple(
            pay_bit(ts.tiles[patch.get(ox + col, oy + n - 1)].top)
            for col in lay.vwin_cols
        ),
        "bottom": tuple(
            pay_bit(ts.tiles[patch.get(ox + col, oy)].bottom) for col in lay.vwin_cols
        ),
    }


def chessboard_predicate_machine() -> Machine:
    """Accepts payloads (l, r, t, b) with r != l, t != l, b == l, k = 1.

    The accepted quadruples 0110 and 1001 are exactly the two chessboard
    tiles, so the compiled tile set simulates the chessboard up to renaming.
    """
    from ..machine import SYM_ONE, Transition

    Z, O = SYM_ZERO, SYM_ONE
    ts = [
        Transition(0, Z, None, 2, Z, "R"),
        Transition(0, O, None, 3, O, "R"),
        Transition(2, O, None, 4, O, "R"),
        Transition(3, Z, None, 5, Z, "R"),
        Transition(4, O, None, 6, O, "R"),
        Transition(5, Z, None, 7, Z, "R"),
        Transition(6, Z, None, 1, Z, "S"),
        Transition(7, O, None, 1, O, "S"),
    ]
    return Machine(8, 4, 0, 1, 0, False, tuple(ts))
