"""Translation table (TT): the static 65,536-row dictionary.

Row r stores the 2-byte pair whose flag address linearizes to r.  Two
serializations are provided: a fixed-width text form of exactly
65,536 x 128 bytes = 8 MiB, and a compact binary form with a magic
header.  Tables are immutable after construction and safe to share.
"""

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from . import addressing

TT_ROWS = addressing.ROWS
TEXT_ROW_BYTES = 128
TEXT_TOTAL_BYTES = TT_ROWS * TEXT_ROW_BYTES  # 8,388,608

BINARY_MAGIC = b"FBTT"
BINARY_VERSION = 1
_RECORD_BYTES = 4  # row (2 bytes, big-endian) + original pair (2 bytes)

# The 95 printable occupant characters: letters first, then digits with 0
# last, then the remaining printables in ascending code order.  The n-th
# pair within a block is tagged with the n-th character.
_LETTERS_DIGITS = (
    "abcdefghijklmnopqrstuvwxyz" "ABCDEFGHIJKLMNOPQRSTUVWXYZ" "1234567890"
)
OCCUPANT_ALPHABET = (
    _LETTERS_DIGITS
    + "".join(chr(c) for c in range(32, 127) if chr(c) not in _LETTERS_DIGITS)
).encode("ascii")
assert len(OCCUPANT_ALPHABET) == 95
assert len(set(OCCUPANT_ALPHABET)) == 95

_ESCAPE_MARK = 0x25  # '%', escaped as %25 when it appears in an original pair


class TtError(Exception):
    pass


class TtFormatError(TtError):
    """Malformed serialized table; carries the byte offset of the problem."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)


class TtRecord(NamedTuple):
    row: int
    address: addressing.FlagAddress
    original: bytes


class TranslationTable:
    """Immutable row -> original-pair dictionary."""

    def __init__(self, originals, layout="interleaved"):
        if len(originals) % 2:
            raise TtError("originals buffer must hold whole 2-byte records")
        self._originals = bytes(originals)
        self.layout = layout
        self._verified_ok = False

    @property
    def originals(self):
        return self._originals

    @property
    def row_count(self):
        return len(self._originals) // 2

    def original_at(self, row):
        if not 0 <= row < self.row_count:
            raise TtError(f"row out of range: {row}")
        return self._originals[2 * row : 2 * row + 2]

    def record_at(self, row):
        return TtRecord(row, addressing.address_of_row(row), self.original_at(row))

    def records(self) -> Iterator[TtRecord]:
        for row in range(self.row_count):
            yield self.record_at(row)

    def __eq__(self, other):
        return (
            isinstance(other, TranslationTable)
            and self._originals == other._originals
            and self.layout == other.layout
        )

    def __repr__(self):
        return f"TranslationTable(rows={self.row_count}, layout={self.layout!r})"

    def ensure_verified(self):
        """Verify once and cache; raises TtError on any violation."""
        if not self._verified_ok:
            report = verify_tt(self)
            if not report.ok:
                raise TtError(f"table failed verification: {report.violations[0][1]}")
            self._verified_ok = True


def generate_tt(layout="interleaved"):
    """Build the canonical table: record r holds the pair stored at row r."""
    return TranslationTable(addressing.pair_table(layout), layout)


@dataclass
class TtVerifyReport:
    row_count: int
    violations: list = field(default_factory=list)  # (row or None, message)

    @property
    def ok(self):
        return not self.violations


def verify_tt(tt):
    """Check row count, per-row address consistency and bijectivity."""
    report = TtVerifyReport(row_count=tt.row_count)
    if tt.row_count != TT_ROWS:
        report.violations.append(
            (None, f"row count {tt.row_count}, expected {TT_ROWS}")
        )
    expected = addressing.pair_table(tt.layout)
    originals = tt.originals
    seen = set()
    for row in range(tt.row_count):
        got = originals[2 * row : 2 * row + 2]
        want = expected[2 * row : 2 * row + 2] if row < TT_ROWS else None
        if got != want:
            report.violations.append(
                (row, f"row {row} holds {got.hex()}, expected {want.hex() if want else '??'}")
            )
        if got in seen:
            report.violations.append((row, f"row {row} duplicates original {got.hex()}"))
        seen.add(got)
    return report


def _escape_original(pair):
    out = []
    for b in pair:
        if 32 <= b <= 126 and b != _ESCAPE_MARK:
            out.append(chr(b))
        else:
            out.append(f"%{b:02X}")
    return "".join(out)


def text_row(tt, row):
    """One fixed-width 128-byte text row, newline-terminated."""
    i, j, k, l = addressing.address_of_row(row)
    body = (
        f"{row + 1} {i}x{j}x{k}x{l} "
        f"{OCCUPANT_ALPHABET.decode('ascii')} "
        f"{_escape_original(tt.original_at(row))}"
    )
    line = body.ljust(TEXT_ROW_BYTES - 1) + "\n"
    return line.encode("ascii")


def serialize_text(tt, sink):
    """Write the fixed-width text form; returns the byte count (8 MiB)."""
    written = 0
    try:
        for row in range(tt.row_count):
            written += sink.write(text_row(tt, row))
    except OSError as exc:
        raise TtError(f"text serialization failed after {written} bytes: {exc}") from exc
    return written


def serialize_binary(tt, sink):
    """Write the compact binary form; returns the byte count."""
    buf = bytearray()
    buf += BINARY_MAGIC
    buf.append(BINARY_VERSION)
    for row in range(tt.row_count):
        buf += row.to_bytes(2, "big")
        buf += tt.original_at(row)
    try:
        sink.write(bytes(buf))
    except OSError as exc:
        raise TtError(f"binary serialization failed: {exc}") from exc
    return len(buf)


def load_binary(source, layout="interleaved"):
    """Exact inverse of serialize_binary.

    Addresses are recomputed from row numbers, never stored.  Raises
    TtFormatError naming the offending offset on bad magic, truncation
    or duplicate/missing rows.
    """
    data = source.read()
    if data[:4] != BINARY_MAGIC:
        raise TtFormatError(f"bad magic {data[:4]!r}", offset=0)
    if len(data) < 5:
        raise TtFormatError("truncated before version byte", offset=len(data))
    if data[4] != BINARY_VERSION:
        raise TtFormatError(f"unsupported version {data[4]}", offset=4)
    body = len(data) - 5
    if body % _RECORD_BYTES:
        raise TtFormatError(
            "truncated record", offset=5 + body - body % _RECORD_BYTES
        )
    count = body // _RECORD_BYTES
    if count != TT_ROWS:
        raise TtFormatError(f"row count {count}, expected {TT_ROWS}", offset=len(data))
    originals = bytearray(2 * TT_ROWS)
    seen = bytearray(TT_ROWS)
    for n in range(count):
        off = 5 + n * _RECORD_BYTES
        row = int.from_bytes(data[off : off + 2], "big")
        if row >= TT_ROWS:
            raise TtFormatError(f"row number {row} out of range", offset=off)
        if seen[row]:
            raise TtFormatError(f"duplicate row {row}", offset=off)
        seen[row] = 1
        originals[2 * row : 2 * row + 2] = data[off + 2 : off + 4]
    return TranslationTable(bytes(originals), layout)


class TtSet4:
    """Four tables for 4-TT mode; all carry the identical canonical mapping."""

    def __init__(self, tables):
        tables = tuple(tables)
        if len(tables) != 4:
            raise TtError(f"need exactly 4 tables, got {len(tables)}")
        layouts = {t.layout for t in tables}
        if len(layouts) != 1:
            raise TtError(f"mixed layouts in table set: {sorted(layouts)}")
        self.tables = tables
        self.layout = tables[0].layout

    @classmethod
    def canonical(cls, layout="interleaved"):
        tt = generate_tt(layout)
        return cls((tt, tt, tt, tt))

    def verify_all(self):
        return [verify_tt(t) for t in self.tables]

    def ensure_verified(self):
        for t in self.tables:
            t.ensure_verified()
