"""Decomposition notation (``4×1+1×2+2×3``) and TSV decomposition tables.

A term ``k×w`` reads "k components (or connections) of weight-code w".
Codes are decoded by context: in a components cell 1/2/3 are point, line
and arch, and ``2*`` is a filled area; in a connections cell 1/2/3 are
continuous, crisp and crossing.  A dash means "none".
"""

from __future__ import annotations

import enum
import io
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional, TextIO, Tuple, Union

from .exceptions import DatasetError, NotationError
from .model import (
    DEFAULT_WEIGHTS,
    ComponentKind,
    ConnectionKind,
    ConsistencyReport,
    GlyphRecord,
    WeightScheme,
    check_consistency,
)

__all__ = [
    "Context",
    "Dataset",
    "HEADER",
    "parse_expression",
    "format_expression",
    "load_dataset",
    "dump_dataset",
    "dataset_consistency_report",
    "load_known_discrepancies",
    "data_dir",
    "bundled_path",
    "load_vai",
]

HEADER = ("id", "translit", "components", "connections", "complexity")

DASHES = {"", "—", "–", "-"}
_SEPARATORS = "×xX"
_TERM_RE = re.compile(rf"^(\d+)\s*[{_SEPARATORS}]\s*(\d+)\s*(\*?)$")


class Context(enum.Enum):
    COMPONENTS = "components"
    CONNECTIONS = "connections"


_CODES = {
    Context.COMPONENTS: {
        ("1", False): ComponentKind.POINT,
        ("2", False): ComponentKind.LINE,
        ("3", False): ComponentKind.ARCH,
        ("2", True): ComponentKind.FILL,
    },
    Context.CONNECTIONS: {
        ("1", False): ConnectionKind.CONTINUOUS,
        ("2", False): ConnectionKind.CRISP,
        ("3", False): ConnectionKind.CROSSING,
    },
}

_ORDER = {
    Context.COMPONENTS: [
        (ComponentKind.POINT, "1"),
        (ComponentKind.LINE, "2"),
        (ComponentKind.ARCH, "3"),
        (ComponentKind.FILL, "2*"),
    ],
    Context.CONNECTIONS: [
        (ConnectionKind.CONTINUOUS, "1"),
        (ConnectionKind.CRISP, "2"),
        (ConnectionKind.CROSSING, "3"),
    ],
}


def _context(context) -> Context:
    return context if isinstance(context, Context) else Context(context)


def parse_expression(text: str, context) -> Dict:
    """Parse one table cell into a count map keyed by kind.

    Kinds that do not occur are absent from the result; repeated kinds
    are summed.

    >>> parse_expression("4×1+1×2+2×3", "components")[ComponentKind.POINT]
    4
    """
    context = _context(context)
    stripped = text.strip()
    if stripped in DASHES:
        return {}
    codes = _CODES[context]
    counts: Dict = {}
    for raw in stripped.split("+"):
        term = raw.strip()
        m = _TERM_RE.match(term)
        if m is None:
            raise NotationError(f"malformed term {term!r} in {text!r}")
        count, code, star = int(m.group(1)), m.group(2), bool(m.group(3))
        if count == 0:
            raise NotationError(f"zero count in term {term!r}")
        if star and context is Context.CONNECTIONS:
            raise NotationError(f"fill marker not allowed in connections: {term!r}")
        try:
            kind = codes[(code, star)]
        except KeyError:
            raise NotationError(
                f"unknown {context.value} code {code + ('*' if star else '')!r} in term {term!r}"
            ) from None
        counts[kind] = counts.get(kind, 0) + count
    return counts


def format_expression(counts, context) -> str:
    """Canonical cell text: kinds in fixed order, zero counts omitted."""
    context = _context(context)
    terms = [f"{counts[k]}×{code}" for k, code in _ORDER[context] if counts.get(k, 0)]
    return "+".join(terms) if terms else "—"


@dataclass(frozen=True)
class Dataset:
    name: str
    records: Tuple[GlyphRecord, ...]
    source_note: str = ""

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if not self.records:
            raise DatasetError("empty dataset")
        ids = [r.id for r in self.records]
        if any(b <= a for a, b in zip(ids, ids[1:])):
            raise DatasetError("record ids must be strictly increasing")

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, record_id: int) -> GlyphRecord:
        for r in self.records:
            if r.id == record_id:
                return r
        raise KeyError(record_id)


def _open_text(source) -> Tuple[TextIO, str, bool]:
    if hasattr(source, "read"):
        return source, getattr(source, "name", "<stream>"), False
    path = Path(source)
    return open(path, encoding="utf-8"), path.stem, True


def load_dataset(source: Union[str, os.PathLike, TextIO], name: Optional[str] = None) -> Dataset:
    """Read a tab-separated decomposition table.

    The first non-comment line must be the header
    ``id<TAB>translit<TAB>components<TAB>connections<TAB>complexity``
    (the ``complexity`` column may be dropped).  Leading ``#`` lines are
    kept as the dataset's source note.
    """
    stream, default_name, close = _open_text(source)
    try:
        lines = stream.read().splitlines()
    finally:
        if close:
            stream.close()

    notes: List[str] = []
    header = None
    records: List[GlyphRecord] = []
    seen = set()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            if header is None:
                notes.append(line[1:].strip())
            continue
        cells = line.split("\t")
        if header is None:
            if tuple(cells) not in (HEADER, HEADER[:4]):
                raise DatasetError(f"bad header {line!r}", lineno)
            header = tuple(cells)
            continue
        if len(cells) == len(header) - 1 and len(header) == 5:
            cells.append("")
        if len(cells) != len(header):
            raise DatasetError(f"expected {len(header)} fields, got {len(cells)}", lineno)
        try:
            rid = int(cells[0])
        except ValueError:
            raise DatasetError(f"non-integer id {cells[0]!r}", lineno) from None
        if rid in seen:
            raise DatasetError(f"duplicate id {rid}", lineno)
        seen.add(rid)
        stated = None
        if len(cells) == 5 and cells[4].strip():
            try:
                stated = int(cells[4])
            except ValueError:
                raise DatasetError(f"non-integer complexity {cells[4]!r}", lineno) from None
        try:
            comps = parse_expression(cells[2], Context.COMPONENTS)
            conns = parse_expression(cells[3], Context.CONNECTIONS)
            records.append(GlyphRecord(rid, cells[1], comps, conns, stated))
        except ValueError as exc:
            raise DatasetError(str(exc), lineno) from None

    if header is None:
        raise DatasetError("missing header")
    if not records:
        raise DatasetError("empty dataset")
    return Dataset(name or default_name, records, "\n".join(notes))


def dump_dataset(dataset: Dataset, stream: Optional[TextIO] = None) -> str:
    """Write ``dataset`` in the format read by :func:`load_dataset`."""
    buf = io.StringIO()
    for note in dataset.source_note.splitlines():
        buf.write(f"# {note}\n")
    buf.write("\t".join(HEADER) + "\n")
    for r in dataset.records:
        stated = "" if r.stated_complexity is None else str(r.stated_complexity)
        buf.write(
            "\t".join(
                [
                    str(r.id),
                    r.transliteration,
                    format_expression(r.components, Context.COMPONENTS),
                    format_expression(r.connections, Context.CONNECTIONS),
                    stated,
                ]
            )
            + "\n"
        )
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def dataset_consistency_report(
    dataset: Iterable[GlyphRecord], w: WeightScheme = DEFAULT_WEIGHTS
) -> List[ConsistencyReport]:
    """Rows whose computed complexity differs from the stated one, by id."""
    reports = (check_consistency(r, w) for r in dataset)
    return sorted((r for r in reports if r.match is False), key=lambda r: r.id)


def data_dir() -> Path:
    """Directory of bundled data; ``SCRIPTOMETRICS_DATA`` overrides it."""
    override = os.environ.get("SCRIPTOMETRICS_DATA")
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "data"


def bundled_path(filename: str) -> Path:
    return data_dir() / filename


def load_vai() -> Dataset:
    """The bundled 229-glyph Vai table."""
    return load_dataset(bundled_path("vai_table1.tsv"), name="vai")


def load_known_discrepancies(source=None) -> List[ConsistencyReport]:
    if source is None:
        source = bundled_path("known_discrepancies.tsv")
    stream, _, close = _open_text(source)
    try:
        lines = [ln for ln in stream.read().splitlines() if ln.strip() and not ln.startswith("#")]
    finally:
        if close:
            stream.close()
    if not lines or lines[0].split("\t") != ["id", "translit", "stated", "computed"]:
        raise DatasetError("bad discrepancy file header")
    out = []
    for line in lines[1:]:
        rid, translit, stated, computed = line.split("\t")
        out.append(ConsistencyReport(int(rid), translit, int(computed), int(stated)))
    return out
