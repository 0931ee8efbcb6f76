import pytest

from tilebench.compiler import (
    CompileError,
    LayoutError,
    assemble_macro_tile,
    chessboard_predicate_machine,
    compile_simulation,
    macro_payloads,
    payload_accepted,
    plan_layout,
)
from tilebench.core import verify_patch
from tilebench.machine import SYM_ONE, SYM_ZERO, Machine, Transition, run_machine
from tilebench.solver import find_cut_offsets, solve


def first_bit_zero_machine():
    # k=2 exercise: accepts iff input cell 0 reads a 0 bit
    return Machine(2, 4, 0, 1, 0, False, (Transition(0, SYM_ZERO, None, 1, SYM_ZERO, "S"),))


class TestLayout:
    def test_plan_picks_smallest_power_of_two(self):
        lay = plan_layout(1, 4, 5)
        assert (lay.n, lay.sx0, lay.zy0) == (8, 2, 2)

    def test_explicit_zoom_too_small(self):
        with pytest.raises(LayoutError):
            plan_layout(1, 4, 5, zoom=4)

    def test_zoom_must_be_power_of_two(self):
        with pytest.raises(LayoutError):
            plan_layout(1, 4, 5, zoom=12)

    def test_wire_runs_frozen_geometry(self):
        runs = plan_layout(1, 4, 5).wire_runs()
        assert runs[("L", 0)] == (
            ((0, 1), ("left", "right")),
            ((1, 1), ("left", "right")),
            ((2, 1), ("left", "top")),
        )
        assert runs[("R", 0)] == (
            ((7, 1), ("left", "right")),
            ((6, 1), ("left", "right")),
            ((5, 1), ("left", "right")),
            ((4, 1), ("left", "right")),
            ((3, 1), ("right", "top")),
        )
        assert runs[("T", 0)] == (((4, 7), ("bottom", "top")),)
        assert runs[("B", 0)] == (
            ((4, 0), ("bottom", "right")),
            ((5, 0), ("left", "top")),
            ((5, 1), ("bottom", "top")),
        )

    def test_wire_runs_avoid_zone_and_share_no_edges(self):
        # the constructor itself raises if a run clips the zone or two runs
        # claim one edge; sweep a range of shapes to exercise that audit
        for k, zw, zh in [(1, 4, 5), (2, 8, 2), (2, 8, 9), (3, 12, 4), (4, 16, 30)]:
            lay = plan_layout(k, zw, zh)
            for wid, path in lay.wire_runs().items():
                for (i, j), _ in path:
                    assert not lay.in_zone(i, j), (wid, i, j)

    def test_in_zone(self):
        lay = plan_layout(1, 4, 5)
        assert lay.in_zone(2, 2) and lay.in_zone(5, 6)
        assert not lay.in_zone(1, 2) and not lay.in_zone(2, 1)
        assert not lay.in_zone(6, 2) and not lay.in_zone(2, 7)


@pytest.fixture(scope="module")
def chess():
    return compile_simulation(chessboard_predicate_machine(), 1)


class TestChessboardPredicate:
    def test_machine_accepts_exactly_chessboard_payloads(self):
        m = chessboard_predicate_machine()
        for bits in [(l, r, t, b) for l in (0, 1) for r in (0, 1) for t in (0, 1) for b in (0, 1)]:
            tape = [SYM_ZERO + x for x in bits]
            res = run_machine(m, tape, max_steps=100)
            want = bits in {(0, 1, 1, 0), (1, 0, 0, 1)}
            assert (res.status == "accepted") == want, bits

    def test_compiled_shape(self, chess):
        assert chess.meta["zoom"] == 8
        assert chess.meta["zone"] == [4, 5]
        assert chess.meta["zone_origin"] == [2, 2]
        assert chess.meta["steps_needed"] == 4
        assert chess.meta["tile_count"] == 1161
        assert chess.meta["color_count"] == 908
        assert chess.accepted == {(0, 1, 1, 0), (1, 0, 0, 1)}

    def test_assemble_accepted_payloads(self, chess):
        for l, r, t, b in sorted(chess.accepted):
            patch = assemble_macro_tile(chess, (l,), (r,), (t,), (b,))
            assert patch.width == patch.height == 8
            assert verify_patch(chess.tile_set, patch) == []
            assert macro_payloads(chess, patch, 0, 0) == {
                "left": (l,),
                "right": (r,),
                "top": (t,),
                "bottom": (b,),
            }

    def test_assemble_rejected_payload_raises(self, chess):
        with pytest.raises(ValueError):
            assemble_macro_tile(chess, (0,), (0,), (0,), (0,))

    def test_payload_accepted(self, chess):
        assert payload_accepted(chess, (0,), (1,), (1,), (0,))
        assert payload_accepted(chess, (1,), (0,), (0,), (1,))
        assert not payload_accepted(chess, (1,), (1,), (0,), (1,))

    def test_solver_window_cuts_uniquely(self, chess):
        res = solve(chess.tile_set, 16, 16, mode="first")
        assert res.status == "solved"
        patch = res.patch
        assert verify_patch(chess.tile_set, patch) == []
        assert find_cut_offsets(patch, 8) == [(0, 0)]
        pays = {}
        for ox in (0, 8):
            for oy in (0, 8):
                p = macro_payloads(chess, patch, ox, oy)
                assert payload_accepted(chess, **p)
                pays[(ox, oy)] = p["left"][0]
        # the macro-tiles themselves form a chessboard
        assert pays[(0, 0)] == pays[(8, 8)] != pays[(8, 0)] == pays[(0, 8)]

    def test_macro_payloads_bounds(self, chess):
        patch = assemble_macro_tile(chess, (0,), (1,), (1,), (0,))
        with pytest.raises(ValueError):
            macro_payloads(chess, patch, 1, 0)


class TestTwoBitPayloads:
    def test_compile_and_assemble(self):
        c = compile_simulation(first_bit_zero_machine(), 2)
        assert c.meta["zoom"] == 8
        assert c.meta["zone"] == [8, 2]
        assert c.meta["zone_origin"] == [0, 4]
        assert c.meta["tile_count"] == 265
        assert len(c.accepted) == 128
        assert all(bits[0] == 0 for bits in c.accepted)
        patch = assemble_macro_tile(c, (0, 1), (1, 0), (0, 0), (1, 1))
        assert verify_patch(c.tile_set, patch) == []
        assert macro_payloads(c, patch, 0, 0) == {
            "left": (0, 1),
            "right": (1, 0),
            "top": (0, 0),
            "bottom": (1, 1),
        }


class TestCompileErrors:
    def test_k_must_be_positive(self):
        with pytest.raises(CompileError):
            compile_simulation(chessboard_predicate_machine(), 0)

    def test_checker_accepting_nothing(self):
        m = Machine(2, 4, 0, 1, 0, False, ())
        with pytest.raises(CompileError, match="no payload"):
            compile_simulation(m, 1)

    def test_looping_checker(self):
        m = Machine(2, 4, 0, 1, 0, False, (
            Transition(0, SYM_ZERO, None, 0, SYM_ZERO, "S"),
            Transition(0, SYM_ONE, None, 1, SYM_ONE, "S"),
        ))
        with pytest.raises(CompileError, match="still running"):
            compile_simulation(m, 1, probe_steps=500)

    def test_track_needs_track_machine(self):
        with pytest.raises(CompileError, match="track"):
            compile_simulation(chessboard_predicate_machine(), 1, track=[0, 1])
