import pytest

from tilebench.compiler import (
    CompileError,
    assemble_macro_tile,
    assemble_self_patch,
    build_fixed_point,
    certificate,
    decode_self_patch,
    mutation_trials,
    run_checker,
)
from tilebench.compiler.fixedpoint import (
    ANCHOR,
    build_checker,
    checker_tape,
    encode_quad,
    pack_record,
    record_from_window,
    unpack_record,
    window_bits,
    walks,
)
from tilebench.core import verify_patch
from tilebench.machine import encode_program


@pytest.fixture(scope="module")
def fp():
    return build_fixed_point(256)


class TestRecords:
    def test_pack_unpack_roundtrip(self):
        for i, j, v in [(0, 0, 0), (255, 255, 1), (17, 200, 0), (1, 2, 1)]:
            assert unpack_record(8, pack_record(8, i, j, v)) == (i, j, v)

    def test_window_roundtrip(self):
        rec = pack_record(8, 93, 170, 1)
        bits = window_bits(8, rec)
        assert len(bits) == 32
        assert bits[17:] == (0,) * 15  # i and j take 16 bits, val one more
        assert record_from_window(8, bits) == rec

    def test_window_rejects_dirty_padding(self):
        bits = list(window_bits(8, pack_record(8, 1, 1, 0)))
        bits[20] = 1
        with pytest.raises(ValueError):
            record_from_window(8, tuple(bits))

    def test_encoding_geometry(self):
        tape = encode_quad(8, *(pack_record(8, 5, 9, 0),) * 4)
        assert len(tape) == 162
        full = checker_tape(8, *(pack_record(8, 5, 9, 0),) * 4)
        assert len(full) == ANCHOR + 1
        assert full[0] == full[161] == full[ANCHOR] == 3


class TestBuildFrozen:
    def test_checker_census(self):
        mach, names = build_checker(8)
        assert mach.states == 267
        assert len(mach.transitions) == 612
        assert len(names) == mach.states
        assert len(encode_program(mach, state_bits=9)) == 16525

    def test_set_census(self, fp):
        assert fp.size == 256 and fp.n == 8
        assert len(fp.tile_set.tiles) == 258 * 258 == 66564
        assert fp.tile_set.color_count == 131584
        assert fp.capacity == 40960
        assert len(fp.program) == 16525
        assert fp.state_bits == 9
        assert fp.track_offset == 256
        assert fp.band == range(64, 224)

    def test_block_too_small(self):
        with pytest.raises(CompileError):
            build_fixed_point(128)

    def test_side_must_be_power_of_two(self):
        with pytest.raises(CompileError):
            build_fixed_point(200)

    def test_program_bits_ride_the_block_rows(self, fp):
        # the first program bits appear verbatim as pinned bottom vals
        row = fp.size // 4
        for x in range(12):
            quad = fp.edge_records(x, row, 0, 0, fp.padded[fp.fold(x, row + 1)],
                                   fp.program[x])
            assert quad in fp.accepted


class TestChecker:
    def test_accepts_resident_tiles(self, fp):
        for x, y, vals in [
            (150, 10, (0, 0, 0, 0)),
            (0, 0, (1, 0, 0, 1)),
            (0, 30, (1, 0, 0, 0)),
            (255, 30, (0, 1, 0, 0)),
            (9, 255, (0, 0, 1, 0)),
        ]:
            quad = fp.edge_records(x, y, *vals)
            assert run_checker(fp, quad).status == "accepted"

    def test_accepts_block_tiles(self, fp):
        for x, y in [(0, 64), (5, 64), (128, 100), (255, 223), (7, 63)]:
            vb = fp.padded[fp.fold(x, y)] if y in fp.band else 0
            vt = fp.padded[fp.fold(x, y + 1)] if y + 1 in fp.band else 0
            quad = fp.edge_records(x, y, 0, 0, vt, vb)
            assert walks(fp, x, y)
            assert run_checker(fp, quad).status == "accepted"

    def test_rejects_each_discipline_break(self, fp):
        base = fp.edge_records(40, 10, 0, 0, 0, 0)
        n = fp.n
        bad = [
            (base[0], pack_record(n, 42, 10, 0), base[2], base[3]),
            (base[0], base[1], pack_record(n, 41, 11, 0), base[3]),
            (pack_record(n, 40, 11, 0), base[1], base[2], base[3]),
            (pack_record(n, 40, 10, 1), base[1], base[2], base[3]),
            (base[0], pack_record(n, 41, 10, 1), base[2], base[3]),
            (base[0], base[1], pack_record(n, 40, 11, 1), base[3]),
            (base[0], base[1], base[2], pack_record(n, 40, 10, 1)),
        ]
        for quad in bad:
            assert quad not in fp.accepted
            assert run_checker(fp, quad).status == "stuck"

    def test_rejects_wrong_block_bit(self, fp):
        x, y = 5, 64
        vt = fp.padded[fp.fold(x, y + 1)]
        quad = fp.edge_records(x, y, 0, 0, vt, 1 - fp.padded[fp.fold(x, y)])
        res = run_checker(fp, quad)
        assert res.status == "stuck"
        # stuck exactly on the counter sentinel over the disputed track bit
        assert res.head == fp.track_offset + fp.fold(x, y)

    def test_mutated_track_bit_is_caught(self, fp):
        report = mutation_trials(fp, count=3, seed=11)
        assert report.all_caught


class TestMacroTiles:
    def test_roundtrip_block_tile(self, fp):
        x, y = 128, 100
        quad = fp.edge_records(x, y, 0, 0, fp.padded[fp.fold(x, y + 1)],
                               fp.padded[fp.fold(x, y)])
        patch = assemble_self_patch(fp, quad)
        assert patch.width == patch.height == 256
        assert verify_patch(fp.tile_set, patch) == []
        assert decode_self_patch(fp, patch) == quad

    def test_dispatch_through_compiler_entry(self, fp):
        quad = fp.edge_records(0, 0, 1, 0, 0, 1)
        sides = [window_bits(fp.n, r) for r in quad]
        patch = assemble_macro_tile(fp, *sides)
        assert decode_self_patch(fp, patch) == quad

    def test_rejects_foreign_records(self, fp):
        quad = list(fp.edge_records(3, 3, 0, 0, 0, 0))
        quad[3] = pack_record(fp.n, 3, 3, 1)
        with pytest.raises(ValueError):
            assemble_self_patch(fp, tuple(quad))


class TestCertificate:
    def test_trimmed_audit_passes(self, fp):
        cert = certificate(fp, walk_samples=2, reject_samples=25,
                           block_probes=1, utm_accepts=1, utm_rejects=1,
                           resident_samples=120, seed=5)
        assert cert.ok
        assert cert.resident_checked == 120
        assert cert.probes_checked == 26
        assert cert.utm_runs == 2
        assert cert.patches_checked == 6
