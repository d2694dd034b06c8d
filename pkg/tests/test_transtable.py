import io

import pytest

from fbar import addressing, transtable
from fbar.transtable import (
    OCCUPANT_ALPHABET,
    TEXT_ROW_BYTES,
    TEXT_TOTAL_BYTES,
    TT_ROWS,
    TranslationTable,
    TtError,
    TtFormatError,
    TtSet4,
    generate_tt,
    load_binary,
    serialize_binary,
    serialize_text,
    text_row,
    verify_tt,
)


def test_occupant_alphabet():
    assert len(OCCUPANT_ALPHABET) == 95
    assert len(set(OCCUPANT_ALPHABET)) == 95
    assert OCCUPANT_ALPHABET.startswith(b"abcd")
    assert all(32 <= b <= 126 for b in OCCUPANT_ALPHABET)
    assert set(OCCUPANT_ALPHABET) == set(range(32, 127))


def test_generation_is_deterministic(tt):
    assert generate_tt() == tt
    assert tt.row_count == TT_ROWS


def test_record_anchor_re(tt):
    row = addressing.row_of_address((7, 6, 1, 4))
    assert tt.original_at(row) == b"re"
    record = tt.record_at(row)
    assert record.address == (7, 6, 1, 4)
    assert record.row == row


def test_every_row_matches_addressing(tt):
    for row in range(0, TT_ROWS, 997):
        assert tt.original_at(row) == bytes(addressing.pair_of_row(row))


def test_verify_canonical_ok(tt):
    report = verify_tt(tt)
    assert report.ok
    assert report.row_count == TT_ROWS
    assert report.violations == []


def test_verify_swapped_rows_two_violations(tt):
    buf = bytearray(tt.originals)
    a, b = 5, 9
    buf[2 * a : 2 * a + 2], buf[2 * b : 2 * b + 2] = (
        buf[2 * b : 2 * b + 2],
        buf[2 * a : 2 * a + 2],
    )
    report = verify_tt(TranslationTable(bytes(buf)))
    assert not report.ok
    assert len(report.violations) == 2
    assert {v[0] for v in report.violations} == {a, b}


def test_verify_missing_row_count_violation(tt):
    short = TranslationTable(tt.originals[:-2])
    report = verify_tt(short)
    assert not report.ok
    assert any(row is None and "count" in msg for row, msg in report.violations)


def test_verify_corrupt_record_names_row(tt):
    buf = bytearray(tt.originals)
    row = 12345
    buf[2 * row] ^= 0xFF
    report = verify_tt(TranslationTable(bytes(buf)))
    assert not report.ok
    assert report.violations[0][0] == row
    assert str(row) in report.violations[0][1]


def test_text_serialization_exact_size(tt):
    sink = io.BytesIO()
    written = serialize_text(tt, sink)
    data = sink.getvalue()
    assert written == len(data) == TEXT_TOTAL_BYTES == 8388608


def test_text_rows_fixed_width(tt):
    sink = io.BytesIO()
    serialize_text(tt, sink)
    data = sink.getvalue()
    # every row self-terminates at a 128-byte boundary
    for offset in range(TEXT_ROW_BYTES - 1, 4 * TEXT_ROW_BYTES, TEXT_ROW_BYTES):
        assert data[offset] == ord("\n")
    assert data[TEXT_TOTAL_BYTES - 1] == ord("\n")
    first = data[:TEXT_ROW_BYTES].decode("ascii")
    assert first.startswith("1 1x1x1x1 ")
    assert OCCUPANT_ALPHABET.decode("ascii") in first
    # row 1 holds the pair stored at row 0: "UU"
    assert " UU" in first
    last = data[-TEXT_ROW_BYTES:].decode("ascii")
    assert last.startswith("65536 16x16x16x16 ")


def test_text_row_escapes_nonprintables(tt):
    # row for the pair (0x00, 0x00) renders as %00%00
    row = addressing.row_of_pair(0, 0)
    line = text_row(tt, row).decode("ascii")
    assert "%00%00" in line
    assert len(line) == TEXT_ROW_BYTES


def test_binary_roundtrip(tt):
    sink = io.BytesIO()
    written = serialize_binary(tt, sink)
    assert written == 4 + 1 + 4 * TT_ROWS
    loaded = load_binary(io.BytesIO(sink.getvalue()))
    assert loaded == tt


def test_binary_bad_magic(tt):
    with pytest.raises(TtFormatError) as err:
        load_binary(io.BytesIO(b"NOPE" + b"\x00" * 16))
    assert err.value.offset == 0


def test_binary_truncation_names_offset(tt):
    sink = io.BytesIO()
    serialize_binary(tt, sink)
    data = sink.getvalue()[:-3]  # cut into the last record
    with pytest.raises(TtFormatError) as err:
        load_binary(io.BytesIO(data))
    assert err.value.offset is not None
    assert "truncated" in str(err.value)


def test_binary_short_row_count(tt):
    sink = io.BytesIO()
    serialize_binary(tt, sink)
    data = sink.getvalue()[:-400]  # drop 100 whole records
    with pytest.raises(TtFormatError) as err:
        load_binary(io.BytesIO(data))
    assert "row count" in str(err.value)


def test_binary_duplicate_row(tt):
    sink = io.BytesIO()
    serialize_binary(tt, sink)
    data = bytearray(sink.getvalue())
    # rewrite the second record's row number to 0
    data[5 + 4 : 5 + 6] = (0).to_bytes(2, "big")
    with pytest.raises(TtFormatError) as err:
        load_binary(io.BytesIO(bytes(data)))
    assert "duplicate row 0" in str(err.value)


def test_loaded_mutation_caught_by_verify(tt):
    sink = io.BytesIO()
    serialize_binary(tt, sink)
    data = bytearray(sink.getvalue())
    row = 777
    data[5 + 4 * row + 2] ^= 0x01  # flip one bit of the original pair
    loaded = load_binary(io.BytesIO(bytes(data)))
    report = verify_tt(loaded)
    assert not report.ok
    assert report.violations[0][0] == row


def test_ensure_verified_caches_and_raises(tt):
    tt.ensure_verified()  # canonical: passes and caches
    broken = TranslationTable(b"\x00\x00" * TT_ROWS)
    with pytest.raises(TtError):
        broken.ensure_verified()


def test_ttset4_canonical(set4):
    assert len(set4.tables) == 4
    assert all(report.ok for report in set4.verify_all())
    with pytest.raises(TtError):
        TtSet4(set4.tables[:3])


def test_grouped_layout_table_verifies(tt_grouped):
    assert verify_tt(tt_grouped).ok
    assert tt_grouped.layout == "grouped"
