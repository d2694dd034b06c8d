"""fbar: a fixed-codebook bit-pair codec with honest information accounting.

The library compresses byte streams through a static 65,536-row
translation table addressed by 4D bit-pair flags, writes grid-file
artifacts in a nominal and a self-contained format, and ships a
metrics/audit layer that reports both the scheme's fixed 2:1 / 8:1
accounting and the true per-channel cost of decoding.
"""

from .codec import (
    CompressJob,
    CompressResult,
    DecompressJob,
    FORMAT_HONEST,
    FORMAT_PAPER,
    ModeMismatchError,
    compress,
    decompress,
    roundtrip,
)
from .gridfile import GridFormatError, MODE_1TT, MODE_4TT
from .metrics import MetricsReport, paper_size, pigeonhole_audit
from .transtable import (
    TranslationTable,
    TtError,
    TtFormatError,
    TtSet4,
    generate_tt,
    load_binary,
    serialize_binary,
    serialize_text,
    verify_tt,
)

__version__ = "0.1.0"

__all__ = [
    "CompressJob",
    "CompressResult",
    "DecompressJob",
    "FORMAT_HONEST",
    "FORMAT_PAPER",
    "GridFormatError",
    "MetricsReport",
    "MODE_1TT",
    "MODE_4TT",
    "ModeMismatchError",
    "TranslationTable",
    "TtError",
    "TtFormatError",
    "TtSet4",
    "compress",
    "decompress",
    "generate_tt",
    "load_binary",
    "paper_size",
    "pigeonhole_audit",
    "roundtrip",
    "serialize_binary",
    "serialize_text",
    "verify_tt",
]
