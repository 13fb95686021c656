"""Corpus ingestion, veracity-label normalization, and label statistics.

Source files are either delimiter-separated (CSV with a header) or
line-delimited JSON records. Both carry the same logical columns:
``id, headline, body, published, source_domain, raw_label`` plus an
optional ``claim`` column holding a manually written reference claim.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field, replace
from datetime import date
from enum import Enum, IntEnum
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

from .errors import IngestError, LabelMappingError

logger = logging.getLogger(__name__)


class VeracityLabel(IntEnum):
    """4-way veracity outcome. Integer codes are part of the wire format."""

    FALSE = 0
    PARTIAL_TRUE = 1
    TRUE = 2
    NEI = 3


class DatasetKind(str, Enum):
    SNOPES = "snopes"
    DNF300 = "dnf300"
    FIXTURE = "fixture"


class _Drop:
    """Sentinel: the row carries a label that removes it from the corpus."""

    def __repr__(self) -> str:  # pragma: no cover - repr cosmetics
        return "DROP"


DROP = _Drop()

# Raw ratings observed in the source data, lowercased. The three graded
# ratings collapse into PARTIAL_TRUE; opinion pieces leave the corpus.
DEFAULT_LABEL_TABLE: Mapping[str, Union[VeracityLabel, _Drop]] = {
    "true": VeracityLabel.TRUE,
    "false": VeracityLabel.FALSE,
    "mostly true": VeracityLabel.PARTIAL_TRUE,
    "mixture": VeracityLabel.PARTIAL_TRUE,
    "mostly false": VeracityLabel.PARTIAL_TRUE,
    "opinion": DROP,
}

_REQUIRED_COLUMNS = ("id", "headline", "body", "raw_label")
_OPTIONAL_COLUMNS = ("published", "source_domain", "claim")

# Default on-disk format per dataset; override via the ``fmt`` argument.
_DEFAULT_FORMATS = {
    DatasetKind.SNOPES: "csv",
    DatasetKind.DNF300: "csv",
    DatasetKind.FIXTURE: "jsonl",
}


@dataclass
class Article:
    """A news item as it flows through the pipeline.

    ``label`` stays None until normalization; NEI is never assigned here,
    only by the pipeline after evidence gathering.
    """

    id: str
    headline: str
    body: str
    dataset: DatasetKind
    raw_label: str
    published: date | None = None
    source_domain: str | None = None
    label: VeracityLabel | None = None
    claim: str | None = None


@dataclass
class IngestResult:
    """Articles plus the bookkeeping needed for count-conservation checks."""

    articles: list[Article]
    rows_read: int = 0
    dropped_empty: int = 0
    skipped_malformed: int = 0
    warnings: list[str] = field(default_factory=list)


def normalize_label(
    raw_label: str,
    dataset: DatasetKind,
    table: Mapping[str, Union[VeracityLabel, _Drop]] | None = None,
) -> Union[VeracityLabel, _Drop]:
    """Map a raw rating string onto the 4-way label set, or DROP.

    Matching is case-insensitive after trimming whitespace. Anything outside
    the mapping table raises LabelMappingError: an unmapped rating means the
    source schema drifted and should be surfaced, not silently dropped.
    """
    mapping = DEFAULT_LABEL_TABLE if table is None else table
    key = raw_label.strip().lower()
    if not key:
        raise LabelMappingError(f"empty raw label in dataset {dataset.value!r}")
    try:
        return mapping[key]
    except KeyError:
        raise LabelMappingError(
            f"unmapped raw label {raw_label!r} in dataset {dataset.value!r}"
        ) from None


def ingest(
    path: str | Path,
    dataset: DatasetKind | str,
    fmt: str | None = None,
    delimiter: str = ",",
) -> IngestResult:
    """Read a corpus file into Article objects, raw labels preserved.

    Rows with an empty headline or body are dropped and counted; rows that
    do not parse are skipped with a warning count. A duplicate article id is
    an error: ids are the join key for every later stage.
    """
    try:
        dataset = DatasetKind(dataset)
    except ValueError:
        raise IngestError(f"unknown dataset {dataset!r}") from None
    fmt = fmt or _DEFAULT_FORMATS[dataset]
    if fmt not in ("csv", "jsonl"):
        raise IngestError(f"unknown corpus format {fmt!r} (expected csv or jsonl)")

    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IngestError(f"cannot read corpus file {path}: {exc}") from exc

    rows = _read_csv(text, delimiter) if fmt == "csv" else _read_jsonl(text)

    result = IngestResult(articles=[])
    seen_ids: set[str] = set()
    for line_no, row in rows:
        result.rows_read += 1
        if isinstance(row, str):  # parse failure, message in the row slot
            result.skipped_malformed += 1
            result.warnings.append(f"row {line_no}: {row}")
            continue
        try:
            article = _row_to_article(row, dataset)
        except ValueError as exc:
            result.skipped_malformed += 1
            result.warnings.append(f"row {line_no}: {exc}")
            continue
        if not article.headline.strip() or not article.body.strip():
            result.dropped_empty += 1
            continue
        if article.id in seen_ids:
            raise IngestError(f"duplicate article id {article.id!r} at row {line_no}")
        seen_ids.add(article.id)
        result.articles.append(article)

    for message in result.warnings:
        logger.warning("ingest %s: %s", path.name, message)
    return result


def _read_csv(text: str, delimiter: str):
    reader = csv.DictReader(text.splitlines(), delimiter=delimiter)
    if reader.fieldnames is None:
        raise IngestError("corpus file is empty")
    missing = [c for c in _REQUIRED_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise IngestError(f"corpus file missing required columns: {missing}")
    for line_no, row in enumerate(reader, start=2):
        if None in row.values() or None in row:
            yield line_no, "column count does not match the header"
            continue
        yield line_no, row


def _read_jsonl(text: str):
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            yield line_no, f"invalid JSON ({exc.msg})"
            continue
        if not isinstance(obj, dict):
            yield line_no, "record is not an object"
            continue
        missing = [c for c in _REQUIRED_COLUMNS if c not in obj]
        if missing:
            yield line_no, f"missing keys {missing}"
            continue
        yield line_no, obj


def _row_to_article(row: Mapping[str, object], dataset: DatasetKind) -> Article:
    published_raw = row.get("published")
    published = None
    if published_raw not in (None, ""):
        try:
            published = date.fromisoformat(str(published_raw).strip())
        except ValueError:
            raise ValueError(f"bad published date {published_raw!r}") from None
    source_domain = row.get("source_domain") or None
    claim = row.get("claim") or None
    return Article(
        id=str(row["id"]).strip(),
        headline=str(row["headline"]),
        body=str(row["body"]),
        dataset=dataset,
        raw_label=str(row["raw_label"]),
        published=published,
        source_domain=str(source_domain).strip().lower() if source_domain else None,
        claim=str(claim) if claim else None,
    )


@dataclass
class NormalizeResult:
    articles: list[Article]
    dropped: int = 0


def normalize_articles(
    articles: Iterable[Article],
    table: Mapping[str, Union[VeracityLabel, _Drop]] | None = None,
) -> NormalizeResult:
    """Assign normalized labels; rows mapping to DROP leave the corpus."""
    result = NormalizeResult(articles=[])
    for article in articles:
        outcome = normalize_label(article.raw_label, article.dataset, table)
        if outcome is DROP or isinstance(outcome, _Drop):
            result.dropped += 1
            continue
        result.articles.append(replace(article, label=outcome))
    return result


def label_distribution(articles: Sequence[Article]) -> dict[VeracityLabel, int]:
    """Count articles per label; every article must already be labeled."""
    counts = {label: 0 for label in VeracityLabel}
    for article in articles:
        if article.label is None:
            raise ValueError(f"article {article.id!r} has no label")
        counts[article.label] += 1
    return counts


def save_store(articles: Sequence[Article], path: str | Path) -> None:
    """Write normalized articles as deterministic JSON lines."""
    lines = []
    for a in articles:
        obj = {
            "id": a.id,
            "headline": a.headline,
            "body": a.body,
            "dataset": a.dataset.value,
            "raw_label": a.raw_label,
            "published": a.published.isoformat() if a.published else None,
            "source_domain": a.source_domain,
            "label": int(a.label) if a.label is not None else None,
            "claim": a.claim,
        }
        lines.append(json.dumps(obj, sort_keys=True, separators=(",", ":")))
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def load_store(path: str | Path) -> list[Article]:
    """Read articles written by ``save_store``."""
    articles = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestError(f"store line {line_no}: invalid JSON ({exc.msg})") from None
        articles.append(
            Article(
                id=obj["id"],
                headline=obj["headline"],
                body=obj["body"],
                dataset=DatasetKind(obj["dataset"]),
                raw_label=obj["raw_label"],
                published=date.fromisoformat(obj["published"]) if obj.get("published") else None,
                source_domain=obj.get("source_domain"),
                label=VeracityLabel(obj["label"]) if obj.get("label") is not None else None,
                claim=obj.get("claim"),
            )
        )
    return articles
