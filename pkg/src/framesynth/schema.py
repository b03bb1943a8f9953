"""Labeled 16-feature frame records and their byte-exact CSV encoding.

The column set is the refined Wi-Fi frame feature schema: frame-control
type/subtype/DS direction, frame length, duration, radiotap channel and
PHY flags, radiotap header length, TSFT presence, antenna signal, and the
five frame-control flag bits, plus a trailing integer class label.
File headers use the capture-style dotted names; Python identifiers use
underscores. See docs/schema.md for the full alias table.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields
from typing import BinaryIO

SCHEMA_VERSION = "frame16.v1"

# (field identifier, CSV header) in fixed column order; label is always last.
_COLUMNS: tuple[tuple[str, str], ...] = (
    ("wlan_fc_type", "wlan.fc.type"),
    ("wlan_fc_subtype", "wlan.fc.subtype"),
    ("wlan_fc_ds", "wlan.fc.ds"),
    ("frame_len", "frame.len"),
    ("wlan_duration", "wlan.duration"),
    ("radiotap_channel_freq", "radiotap.channel.freq"),
    ("radiotap_flags_cck", "radiotap.channel.flags.cck"),
    ("radiotap_flags_ofdm", "radiotap.channel.flags.ofdm"),
    ("radiotap_length", "radiotap.length"),
    ("radiotap_present_tsft", "radiotap.present.tsft"),
    ("radiotap_dbm_antsignal", "radiotap.dbm_antsignal"),
    ("wlan_fc_frag", "wlan.fc.frag"),
    ("wlan_fc_retry", "wlan.fc.retry"),
    ("wlan_fc_pwrmgt", "wlan.fc.pwrmgt"),
    ("wlan_fc_moredata", "wlan.fc.moredata"),
    ("wlan_fc_protected", "wlan.fc.protected"),
)

FEATURE_FIELDS: tuple[str, ...] = tuple(f for f, _ in _COLUMNS)
FEATURE_HEADERS: tuple[str, ...] = tuple(h for _, h in _COLUMNS)
LABEL_FIELD = "label"
LABEL_HEADER = "Label"
ALL_FIELDS: tuple[str, ...] = FEATURE_FIELDS + (LABEL_FIELD,)
CSV_HEADER = ",".join(FEATURE_HEADERS + (LABEL_HEADER,))

# Accept dotted capture names, underscore identifiers, and either label
# casing when decoding externally produced files.
HEADER_ALIASES: dict[str, str] = {}
for _f, _h in _COLUMNS:
    HEADER_ALIASES[_h] = _f
    HEADER_ALIASES[_f] = _f
HEADER_ALIASES[LABEL_HEADER] = LABEL_FIELD
HEADER_ALIASES["label"] = LABEL_FIELD

_INT_RE = re.compile(rb"^-?[0-9]+$")


class CsvFormatError(ValueError):
    """Malformed CSV input: bad header, wrong field count, or non-integer field."""


@dataclass(frozen=True, slots=True)
class FrameRecord:
    """One labeled frame-feature row. All fields are integers."""

    wlan_fc_type: int
    wlan_fc_subtype: int
    wlan_fc_ds: int
    frame_len: int
    wlan_duration: int
    radiotap_channel_freq: int
    radiotap_flags_cck: int
    radiotap_flags_ofdm: int
    radiotap_length: int
    radiotap_present_tsft: int
    radiotap_dbm_antsignal: int
    wlan_fc_frag: int
    wlan_fc_retry: int
    wlan_fc_pwrmgt: int
    wlan_fc_moredata: int
    wlan_fc_protected: int
    label: int


def record_invariant_violations(r: FrameRecord) -> list[str]:
    """Structural invariants a well-formed record must satisfy.

    These are the record-local constraints; ruleset-dependent validation
    (allowlists, legal durations, supported lengths) lives in the generator's
    check pass.
    """
    problems: list[str] = []
    if r.radiotap_flags_cck == 1 and r.radiotap_flags_ofdm == 1:
        problems.append("cck and ofdm both set")
    if r.radiotap_channel_freq == 5180 and not (r.radiotap_flags_ofdm == 1 and r.radiotap_flags_cck == 0):
        problems.append("5180 MHz requires ofdm=1, cck=0")
    if r.radiotap_length == 64 and r.radiotap_present_tsft == 1:
        problems.append("tsft must be 0 at radiotap length 64")
    if r.wlan_fc_type in (0, 1) and r.wlan_fc_ds != 1:
        problems.append("management/control frames require ds=1")
    if r.wlan_fc_type == 2 and r.wlan_fc_ds not in (2, 3):
        problems.append("data frames require ds in {2, 3}")
    if r.frame_len <= 0:
        problems.append("frame_len must be positive")
    if r.radiotap_length <= 0:
        problems.append("radiotap_length must be positive")
    if r.radiotap_dbm_antsignal >= 0:
        problems.append("antenna signal must be negative dBm")
    if r.wlan_duration < 0:
        problems.append("duration must be non-negative")
    if r.label not in (0, 1, 2):
        problems.append("label must be 0, 1 or 2")
    return problems


@dataclass
class Dataset:
    """Ordered rows sharing the fixed column schema."""

    rows: list[FrameRecord] = field(default_factory=list)
    schema_version: str = SCHEMA_VERSION

    def __len__(self) -> int:
        return len(self.rows)


_FIELD_ORDER = [f.name for f in fields(FrameRecord)]
assert tuple(_FIELD_ORDER) == ALL_FIELDS, "FrameRecord field order must match the column order"


def encode_csv(ds: Dataset, sink: BinaryIO) -> int:
    """Write the dataset as CSV and return the row count.

    Output is byte-deterministic: fixed dotted-name header, base-10 integers,
    comma separators, one LF per line, no quoting and no padding.
    """
    out = [CSV_HEADER]
    for r in ds.rows:
        out.append(
            f"{r.wlan_fc_type},{r.wlan_fc_subtype},{r.wlan_fc_ds},{r.frame_len},"
            f"{r.wlan_duration},{r.radiotap_channel_freq},{r.radiotap_flags_cck},"
            f"{r.radiotap_flags_ofdm},{r.radiotap_length},{r.radiotap_present_tsft},"
            f"{r.radiotap_dbm_antsignal},{r.wlan_fc_frag},{r.wlan_fc_retry},"
            f"{r.wlan_fc_pwrmgt},{r.wlan_fc_moredata},{r.wlan_fc_protected},{r.label}"
        )
    out.append("")
    sink.write("\n".join(out).encode("ascii"))
    return len(ds.rows)


def decode_csv(source: BinaryIO) -> Dataset:
    """Read a CSV stream into a Dataset, mapping header aliases.

    No invariant checking happens here: externally produced files may violate
    generator rules and are validated by a separate pass. A single trailing CR
    per line and a missing final newline are tolerated on input.
    """
    data = source.read()
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    if not lines:
        raise CsvFormatError("empty input: missing header line")

    header_cells = [c.decode("utf-8", "replace").strip("\r") for c in lines[0].split(b",")]
    if len(header_cells) != len(ALL_FIELDS):
        raise CsvFormatError(
            f"expected {len(ALL_FIELDS)} columns, found {len(header_cells)} in header"
        )
    positions: list[str] = []
    for cell in header_cells:
        try:
            positions.append(HEADER_ALIASES[cell])
        except KeyError:
            raise CsvFormatError(f"unknown header column {cell!r}") from None
    if len(set(positions)) != len(ALL_FIELDS):
        raise CsvFormatError("duplicate columns in header")

    rows: list[FrameRecord] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        if raw.endswith(b"\r"):
            raw = raw[:-1]
        cells = raw.split(b",")
        if len(cells) != len(ALL_FIELDS):
            raise CsvFormatError(f"line {lineno}: expected {len(ALL_FIELDS)} fields, found {len(cells)}")
        values: dict[str, int] = {}
        for name, cell in zip(positions, cells):
            if not _INT_RE.match(cell):
                raise CsvFormatError(f"line {lineno}: non-integer field {cell.decode('utf-8', 'replace')!r}")
            values[name] = int(cell)
        rows.append(FrameRecord(**values))
    return Dataset(rows=rows)
