"""End-to-end compression and decompression pipelines.

1-TT mode maps every 2-byte pair to one occupant char plus one row;
4-TT mode maps every 8-byte chunk (4 pairs, one row per table) to one
occupant char plus four rows.  Either pipeline emits the paper-style
or the honest artifact format and is lossless for arbitrary byte
input, including odd lengths.
"""

import io
import time
from dataclasses import dataclass
from typing import Optional, Union

from . import addressing, gridfile, metrics
from .gridfile import MODE_1TT, MODE_4TT, GridArtifact, GridFormatError
from .transtable import TranslationTable, TtSet4

FORMAT_PAPER = "paper"
FORMAT_HONEST = "honest"
FORMATS = (FORMAT_PAPER, FORMAT_HONEST)

Tables = Union[TranslationTable, TtSet4]


class ModeMismatchError(Exception):
    """Artifact mode disagrees with the supplied tables or request."""


def _primary_table(tables) -> TranslationTable:
    return tables.tables[0] if isinstance(tables, TtSet4) else tables


def _check_tables(tables, mode):
    if mode == MODE_4TT and not isinstance(tables, TtSet4):
        raise ModeMismatchError("4tt mode needs a 4-table set")
    if mode == MODE_1TT and isinstance(tables, TtSet4):
        raise ModeMismatchError("1tt mode takes a single table")
    tables.ensure_verified()


@dataclass
class CompressJob:
    data: bytes
    tables: Tables
    mode: str = MODE_1TT
    fmt: str = FORMAT_PAPER


@dataclass
class DecompressJob:
    artifact: bytes
    tables: Tables
    mode: Optional[str] = None  # None: trust the header


@dataclass
class CompressResult:
    artifact: bytes
    summary: Optional[GridArtifact]  # None for the honest format
    report: metrics.MetricsReport


def encode_rows(data, layout="interleaved"):
    """Rows for every complete pair of the input, plus the tail byte."""
    lookup = addressing.row_table(layout)
    even = len(data) - len(data) % 2
    rows = [lookup[data[i] << 8 | data[i + 1]] for i in range(0, even, 2)]
    tail = data[-1] if len(data) % 2 else None
    return rows, tail


def chunk_4tt(data, layout="interleaved"):
    """Group input into 8-byte chunks of (occupant ordinal, rows).

    The ordinal is the chunk's 1-based position within its nominal
    95-chunk block; the final chunk may carry fewer than four rows and
    an odd final byte is left to tail handling.
    """
    rows, _tail = encode_rows(data, layout)
    chunks = []
    for n in range(0, len(rows), 4):
        ordinal = (n // 4) % gridfile.BLOCK_UNITS + 1
        chunks.append((ordinal, tuple(rows[n : n + 4])))
    return chunks


def compress(job: CompressJob) -> CompressResult:
    """Run one compression job; the report carries both accountings."""
    if job.mode not in (MODE_1TT, MODE_4TT):
        raise ValueError(f"unknown mode {job.mode!r}")
    if job.fmt not in FORMATS:
        raise ValueError(f"unknown format {job.fmt!r}")
    _check_tables(job.tables, job.mode)
    layout = _primary_table(job.tables).layout

    start = time.perf_counter()
    rows, tail = encode_rows(job.data, layout)
    sink = io.BytesIO()
    if job.fmt == FORMAT_PAPER:
        summary = gridfile.write_grid(rows, job.mode, sink, tail)
        paper_accounted = summary.occupant_len
        honest_size = summary.honest_payload_size
    else:
        summary = None
        total = gridfile.write_honest(rows, sink, tail)
        paper_accounted = None
        honest_size = total - gridfile.HONEST_OVERHEAD
    elapsed = time.perf_counter() - start

    artifact = sink.getvalue()
    report = metrics.build_report(
        job.data,
        job.mode,
        job.fmt,
        elapsed,
        paper_accounted=paper_accounted,
        honest_size=honest_size,
        artifact_size=len(artifact),
    )
    return CompressResult(artifact=artifact, summary=summary, report=report)


def decompress(job: DecompressJob) -> bytes:
    """Reconstruct the original input; bit-identical to what was compressed."""
    kind = gridfile.artifact_kind(job.artifact)
    if kind is None:
        raise GridFormatError(
            f"unrecognized artifact magic {bytes(job.artifact[:4])!r}", offset=0
        )
    if kind == "paper":
        parsed = gridfile.parse_grid(io.BytesIO(job.artifact))
        if job.mode is not None and parsed.mode != job.mode:
            raise ModeMismatchError(
                f"artifact mode {parsed.mode} does not match requested {job.mode}"
            )
        _check_tables(job.tables, parsed.mode)
    else:
        parsed = gridfile.parse_honest(io.BytesIO(job.artifact))
        job.tables.ensure_verified()

    table = _primary_table(job.tables)
    originals = table.originals
    out = bytearray()
    for row in parsed.rows:
        out += originals[2 * row : 2 * row + 2]
    if parsed.tail is not None:
        out.append(parsed.tail)
    return bytes(out)


def roundtrip(data, tables, mode=MODE_1TT, fmt=FORMAT_PAPER):
    """Compress then decompress; convenience for tests and benches."""
    result = compress(CompressJob(data=data, tables=tables, mode=mode, fmt=fmt))
    restored = decompress(DecompressJob(artifact=result.artifact, tables=tables))
    return result, restored
