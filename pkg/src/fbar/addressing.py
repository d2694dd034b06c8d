"""Mapping between 2-byte pairs, 4D flag addresses and linear rows.

Each byte canonically factors into an (ip-combo, zn-combo) pair; the
1-based positions of those combos in their listed alphabets are the
address coordinates.  A pair of bytes therefore yields four coordinates
(i, j, k, l), each in 1..16, linearized into a row in 0..65535 with l
varying fastest.  The whole chain is a bijection on 16-bit inputs.

Two coordinate layouts are supported and must simply be used
consistently end to end:

    interleaved (default): (ip(x), zn(x), ip(x2), zn(x2))
    grouped:               (ip(x), ip(x2), zn(x), zn(x2))
"""

from typing import NamedTuple

from . import pairops

ROWS = 65536
LAYOUTS = ("interleaved", "grouped")

IP_INDEX = {combo: pos for pos, combo in enumerate(pairops.IP_COMBOS, start=1)}
ZN_INDEX = {combo: pos for pos, combo in enumerate(pairops.ZN_COMBOS, start=1)}


class FlagAddress(NamedTuple):
    i: int
    j: int
    k: int
    l: int


def combo_index(combo):
    """1-based position of a combo in its 16-element alphabet."""
    pos = IP_INDEX.get(combo) or ZN_INDEX.get(combo)
    if pos is None:
        raise ValueError(f"not an alphabet combo: {combo!r}")
    return pos


# Per-byte coordinate tables, built once from the canonical factorization.
_BYTE_COORDS = []
_BYTE_FROM_COORDS = {}
for _b in range(256):
    _s1, _s2 = pairops.canonical_factor(_b)
    _ij = (IP_INDEX[_s1], ZN_INDEX[_s2])
    _BYTE_COORDS.append(_ij)
    _BYTE_FROM_COORDS[_ij] = _b
del _b, _s1, _s2, _ij


def _check_layout(layout):
    if layout not in LAYOUTS:
        raise ValueError(f"unknown layout {layout!r}; expected one of {LAYOUTS}")


def address_of_pair(x, x2, layout="interleaved"):
    """4D flag address of a 2-byte pair."""
    _check_layout(layout)
    a, b = _BYTE_COORDS[x], _BYTE_COORDS[x2]
    if layout == "interleaved":
        return FlagAddress(a[0], a[1], b[0], b[1])
    return FlagAddress(a[0], b[0], a[1], b[1])


def row_of_address(address):
    """Zero-based linear row of an address, l fastest-varying."""
    i, j, k, l = address
    for coord in (i, j, k, l):
        if not 1 <= coord <= 16:
            raise ValueError(f"coordinate out of range 1..16: {address}")
    return (i - 1) * 4096 + (j - 1) * 256 + (k - 1) * 16 + (l - 1)


def address_of_row(row):
    """Inverse of row_of_address."""
    if not 0 <= row < ROWS:
        raise ValueError(f"row out of range 0..65535: {row!r}")
    i, rest = divmod(row, 4096)
    j, rest = divmod(rest, 256)
    k, l = divmod(rest, 16)
    return FlagAddress(i + 1, j + 1, k + 1, l + 1)


def pair_of_row(row, layout="interleaved"):
    """Recover the 2-byte pair stored at a row; exact inverse of row_of_pair."""
    _check_layout(layout)
    i, j, k, l = address_of_row(row)
    if layout == "interleaved":
        return _BYTE_FROM_COORDS[(i, j)], _BYTE_FROM_COORDS[(k, l)]
    return _BYTE_FROM_COORDS[(i, k)], _BYTE_FROM_COORDS[(j, l)]


def row_of_pair(x, x2, layout="interleaved"):
    return row_of_address(address_of_pair(x, x2, layout))


# Flat lookup tables for the codec hot path, built lazily per layout.
_ROW_TABLES = {}
_PAIR_TABLES = {}


def row_table(layout="interleaved"):
    """List mapping (x << 8 | x2) -> row for all 65,536 pairs."""
    _check_layout(layout)
    table = _ROW_TABLES.get(layout)
    if table is None:
        table = [0] * ROWS
        for x in range(256):
            for x2 in range(256):
                table[x << 8 | x2] = row_of_pair(x, x2, layout)
        _ROW_TABLES[layout] = table
    return table


def pair_table(layout="interleaved"):
    """Bytes of length 131,072 mapping row -> its original 2-byte pair."""
    _check_layout(layout)
    table = _PAIR_TABLES.get(layout)
    if table is None:
        buf = bytearray(2 * ROWS)
        for row in range(ROWS):
            x, x2 = pair_of_row(row, layout)
            buf[2 * row] = x
            buf[2 * row + 1] = x2
        table = bytes(buf)
        _PAIR_TABLES[layout] = table
    return table
