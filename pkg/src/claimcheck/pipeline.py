"""End-to-end orchestration of the three fact-checking pipeline variants.

Variant p1 ranks body sentences against the headline, p2 against a
generated summary; p3 skips ranking and sends headline plus summary
straight downstream. Each article produces one self-contained record:
signal, selected claims, query, filtered evidence, and the assigned label
(the gold label, overridden to NEI when no evidence survived). Records are
persisted as deterministic JSON lines so classifier experiments replay
without re-searching.
"""

from __future__ import annotations

import json
import logging
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import date
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .claimrank import (
    ClaimSet,
    InternalSignal,
    RankedSentence,
    SignalKind,
    rank_sentences,
    select_claims,
)
from .config import (
    PipelineConfig,
    build_classifier,
    build_encoder,
    build_provider,
    build_summarizer,
    load_abbreviation_guard,
    load_credible_list,
)
from .corpus import Article, VeracityLabel
from .encode import EncoderBackend
from .errors import PipelineError
from .evidence import (
    CredibleDomainList,
    EvidenceArticle,
    EvidenceSentence,
    EvidenceSet,
    Query,
    QueryOrigin,
    SearchProvider,
    SearchResult,
    build_query,
    gather_evidence,
)
from .summarize import SummarizerBackend, summarize
from .textproc import rouge1, rouge_l, tokenize
from .veracity import ClassifierBackend, LabeledText, featurize_concat, featurize_content

logger = logging.getLogger(__name__)

RECORD_SCHEMA = "pipeline-record.v1"


class PipelineVariant(str, Enum):
    """Variant ids; values double as CLI names."""

    P1_HEADLINE = "p1"
    P2_SUMMARY = "p2"
    P3_HEADLINE_PLUS_SUMMARY = "p3"


@dataclass
class PipelineRuntime:
    """Resolved backends and knobs for one pipeline run."""

    encoder: EncoderBackend
    summarizer: SummarizerBackend
    provider: SearchProvider
    credible: CredibleDomainList
    claims_k: int = 3
    min_claim_sentence_tokens: int = 0
    query_word_limit: int = 40
    date_window_months: int = 3
    max_search_results: int = 35
    max_evidence_articles: int = 3
    max_evidence_sentences: int = 3
    abbreviations: frozenset[str] | None = None
    workers: int = 1


def build_runtime(config: PipelineConfig, provider: SearchProvider | None = None) -> PipelineRuntime:
    abbreviations = load_abbreviation_guard(config)
    return PipelineRuntime(
        encoder=build_encoder(config.encoder),
        summarizer=build_summarizer(config.summarizer, abbreviations),
        provider=provider if provider is not None else build_provider(config.provider),
        credible=load_credible_list(config),
        claims_k=config.claims_k,
        min_claim_sentence_tokens=config.min_claim_sentence_tokens,
        query_word_limit=config.query_word_limit,
        date_window_months=config.date_window_months,
        max_search_results=config.max_search_results,
        max_evidence_articles=config.max_evidence_articles,
        max_evidence_sentences=config.max_evidence_sentences,
        abbreviations=abbreviations,
        workers=config.workers,
    )


@dataclass(frozen=True)
class StageOutputs:
    """Signal, ranking, claims, and query for one article under one variant."""

    signal: InternalSignal
    ranked: tuple[RankedSentence, ...] | None  # None for p3
    claim: str
    query: Query


def derive_stages(article: Article, variant: PipelineVariant, runtime: PipelineRuntime) -> StageOutputs:
    """Run the pre-retrieval stages. Shared by the pipeline and by fixture
    tooling so query text is derived in exactly one place."""
    if variant is PipelineVariant.P1_HEADLINE:
        signal = InternalSignal(SignalKind.HEADLINE, article.headline)
    elif variant is PipelineVariant.P2_SUMMARY:
        summary = summarize(runtime.summarizer, article.body)
        signal = InternalSignal(SignalKind.SUMMARY, summary)
    else:
        summary = summarize(runtime.summarizer, article.body)
        signal = InternalSignal(SignalKind.HEADLINE_PLUS_SUMMARY, f"{article.headline} {summary}")

    if variant is PipelineVariant.P3_HEADLINE_PLUS_SUMMARY:
        # No per-sentence ranking: the gist itself goes downstream.
        claim = signal.text
        query = build_query(article.headline, summary, QueryOrigin.P3, runtime.query_word_limit)
        return StageOutputs(signal=signal, ranked=None, claim=claim, query=query)

    ranked = tuple(
        rank_sentences(
            article.body,
            signal,
            runtime.encoder,
            min_sentence_tokens=runtime.min_claim_sentence_tokens,
            abbreviations=runtime.abbreviations,
        )
    )
    claims: ClaimSet = select_claims(list(ranked), runtime.claims_k)
    query = build_query(article.headline, claims.concatenated, QueryOrigin.P1_P2, runtime.query_word_limit)
    return StageOutputs(signal=signal, ranked=ranked, claim=claims.concatenated, query=query)


@dataclass
class PipelineRecord:
    """Per-article trace of one pipeline run.

    ``label`` is the gold label with the NEI override applied; ``timings``
    are diagnostic and deliberately excluded from serialization so records
    files are byte-stable across runs.
    """

    article_id: str
    variant: PipelineVariant
    gold_label: VeracityLabel | None = None
    label: VeracityLabel | None = None
    signal_kind: str | None = None
    signal_text: str | None = None
    ranked: tuple[RankedSentence, ...] | None = None
    claim: str | None = None
    query: str | None = None
    article_date_missing: bool = False
    evidence: EvidenceSet | None = None
    predicted_label: VeracityLabel | None = None
    predicted_probabilities: tuple[float, ...] | None = None
    error: str | None = None
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        evidence = None
        if self.evidence is not None:
            evidence = {
                "articles": [
                    {
                        "url": ea.result.url,
                        "domain": ea.result.domain,
                        "title": ea.result.title,
                        "published": ea.result.published.isoformat() if ea.result.published else None,
                        "provider_rank": ea.result.provider_rank,
                        "passed_filters": ea.passed_filters,
                        "date_check_applicable": ea.date_check_applicable,
                    }
                    for ea in self.evidence.articles
                ],
                "sentences": [
                    {
                        "text": s.text,
                        "distance": float(s.distance),
                        "source_url": s.source_url,
                        "article_order": s.article_order,
                        "sentence_index": s.sentence_index,
                    }
                    for s in self.evidence.sentences
                ],
                "concatenated": self.evidence.concatenated,
            }
        return {
            "schema": RECORD_SCHEMA,
            "article_id": self.article_id,
            "variant": self.variant.value,
            "gold_label": int(self.gold_label) if self.gold_label is not None else None,
            "label": int(self.label) if self.label is not None else None,
            "signal_kind": self.signal_kind,
            "signal_text": self.signal_text,
            "ranked": [
                {"index": r.index, "text": r.text, "distance": float(r.distance), "rank": r.rank}
                for r in self.ranked
            ]
            if self.ranked is not None
            else None,
            "claim": self.claim,
            "query": self.query,
            "article_date_missing": self.article_date_missing,
            "evidence": evidence,
            "predicted_label": int(self.predicted_label) if self.predicted_label is not None else None,
            "predicted_probabilities": list(self.predicted_probabilities)
            if self.predicted_probabilities is not None
            else None,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineRecord":
        if data.get("schema") != RECORD_SCHEMA:
            raise ValueError(f"unsupported record schema {data.get('schema')!r}")
        evidence = None
        if data.get("evidence") is not None:
            ev = data["evidence"]
            evidence = EvidenceSet(
                articles=tuple(
                    EvidenceArticle(
                        result=SearchResult(
                            url=a["url"],
                            domain=a["domain"],
                            title=a.get("title", ""),
                            body="",  # full bodies are not persisted
                            provider_rank=a["provider_rank"],
                            published=date.fromisoformat(a["published"]) if a.get("published") else None,
                        ),
                        date_check_applicable=a["date_check_applicable"],
                    )
                    for a in ev["articles"]
                ),
                sentences=tuple(
                    EvidenceSentence(
                        text=s["text"],
                        distance=s["distance"],
                        source_url=s["source_url"],
                        article_order=s["article_order"],
                        sentence_index=s["sentence_index"],
                    )
                    for s in ev["sentences"]
                ),
                concatenated=ev["concatenated"],
            )
        return cls(
            article_id=data["article_id"],
            variant=PipelineVariant(data["variant"]),
            gold_label=VeracityLabel(data["gold_label"]) if data.get("gold_label") is not None else None,
            label=VeracityLabel(data["label"]) if data.get("label") is not None else None,
            signal_kind=data.get("signal_kind"),
            signal_text=data.get("signal_text"),
            ranked=tuple(
                RankedSentence(index=r["index"], text=r["text"], distance=r["distance"], rank=r["rank"])
                for r in data["ranked"]
            )
            if data.get("ranked") is not None
            else None,
            claim=data.get("claim"),
            query=data.get("query"),
            article_date_missing=data.get("article_date_missing", False),
            evidence=evidence,
            predicted_label=VeracityLabel(data["predicted_label"])
            if data.get("predicted_label") is not None
            else None,
            predicted_probabilities=tuple(data["predicted_probabilities"])
            if data.get("predicted_probabilities") is not None
            else None,
            error=data.get("error"),
        )


def _process_article(article: Article, variant: PipelineVariant, runtime: PipelineRuntime) -> PipelineRecord:
    record = PipelineRecord(
        article_id=article.id,
        variant=variant,
        gold_label=article.label,
        article_date_missing=article.published is None,
    )
    started = time.monotonic()
    try:
        stages = derive_stages(article, variant, runtime)
        record.signal_kind = stages.signal.kind.value
        record.signal_text = stages.signal.text
        record.ranked = stages.ranked
        record.claim = stages.claim
        record.query = stages.query.text
        record.timings["stages"] = time.monotonic() - started

        retrieval_started = time.monotonic()
        evidence = gather_evidence(
            article,
            stages.claim,
            stages.query,
            runtime.provider,
            runtime.credible,
            runtime.encoder,
            months=runtime.date_window_months,
            max_results=runtime.max_search_results,
            max_articles=runtime.max_evidence_articles,
            max_sentences=runtime.max_evidence_sentences,
            abbreviations=runtime.abbreviations,
        )
        record.evidence = evidence
        record.timings["evidence"] = time.monotonic() - retrieval_started
        record.label = VeracityLabel.NEI if evidence.is_empty else article.label
    except Exception as exc:  # noqa: BLE001  (batch resilience: capture, keep going)
        logger.warning("article %s failed in variant %s: %s", article.id, variant.value, exc)
        record.error = f"{type(exc).__name__}: {exc}"
    record.timings["total"] = time.monotonic() - started
    return record


def run_pipeline(
    articles: Sequence[Article], variant: PipelineVariant, runtime: PipelineRuntime
) -> list[PipelineRecord]:
    """Process every article under one variant; records keep input order.

    One article failing (a flaky provider, an unencodable sentence) marks
    that record with an error and the batch continues. Only a batch where
    every article failed raises.
    """
    if not articles:
        return []
    workers = runtime.workers
    if not (runtime.encoder.thread_safe and runtime.summarizer.thread_safe):
        workers = 1  # a backend declared itself single-threaded
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            records = list(executor.map(lambda a: _process_article(a, variant, runtime), articles))
    else:
        records = [_process_article(article, variant, runtime) for article in articles]
    if all(r.error for r in records):
        raise PipelineError(
            f"every article failed in variant {variant.value}; first error: {records[0].error}"
        )
    return records


def write_records(records: Sequence[PipelineRecord], path: str | Path) -> None:
    """One canonical-JSON record per line; stable bytes for fixed inputs."""
    lines = [json.dumps(r.to_dict(), sort_keys=True, separators=(",", ":")) for r in records]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_records(path: str | Path) -> list[PipelineRecord]:
    records = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            records.append(PipelineRecord.from_dict(json.loads(line)))
    return records


def records_label_distribution(records: Sequence[PipelineRecord]) -> dict[VeracityLabel, int]:
    """Count assigned labels; errored/unlabeled records are not counted."""
    counts = {label: 0 for label in VeracityLabel}
    for record in records:
        if record.label is not None:
            counts[record.label] += 1
    return counts


def build_examples(
    records: Sequence[PipelineRecord],
    kind: str = "concat",
    articles_by_id: Mapping[str, Article] | None = None,
    content_words: int = 500,
) -> list[LabeledText]:
    """Turn records into labeled classifier inputs.

    ``concat`` joins each record's claim and evidence text; ``content``
    needs the original articles to recover body text. Errored or unlabeled
    records are skipped.
    """
    if kind not in ("concat", "content"):
        raise ValueError(f"unknown feature kind {kind!r} (expected concat or content)")
    if kind == "content" and articles_by_id is None:
        raise ValueError("content features require articles_by_id")
    examples = []
    for record in records:
        if record.error or record.label is None or not record.claim:
            continue
        if kind == "concat":
            evidence_text = record.evidence.concatenated if record.evidence else ""
            text = featurize_concat(record.claim, evidence_text)
        else:
            article = articles_by_id.get(record.article_id)
            if article is None:
                raise ValueError(f"record {record.article_id!r} has no matching article")
            text = featurize_content(article.body, content_words)
        examples.append(LabeledText(text=text, label=record.label))
    return examples


def annotate_predictions(
    records: Sequence[PipelineRecord], backend: ClassifierBackend
) -> list[PipelineRecord]:
    """Fill predicted label and probabilities from claim+evidence features."""
    annotated = []
    for record in records:
        if record.error or not record.claim:
            annotated.append(record)
            continue
        evidence_text = record.evidence.concatenated if record.evidence else ""
        probs = backend.predict_proba(featurize_concat(record.claim, evidence_text))
        annotated.append(
            replace(
                record,
                predicted_label=VeracityLabel(int(np.argmax(probs))),
                predicted_probabilities=tuple(float(p) for p in probs),
            )
        )
    return annotated


@dataclass(frozen=True)
class GistRow:
    signal: str
    rouge1_f1: float  # mean F1 x 100
    rouge_l_f1: float  # mean F1 x 100


@dataclass(frozen=True)
class GistReport:
    rows: tuple[GistRow, ...]
    sample_size: int


def run_gist_experiment(
    articles: Sequence[Article],
    summarizers: Sequence[SummarizerBackend],
    sample_size: int | None = None,
    seed: int = 0,
) -> GistReport:
    """Score headline and summaries against manually written reference claims.

    Articles without a reference claim are skipped. Reported numbers are
    mean F1 scaled by 100.
    """
    eligible = [a for a in articles if a.claim and a.claim.strip()]
    if not eligible:
        raise ValueError("no articles carry a reference claim")
    if sample_size is not None and 0 < sample_size < len(eligible):
        eligible = random.Random(seed).sample(eligible, sample_size)

    references = [tokenize(a.claim) for a in eligible]
    rows = [_gist_row("headline", [tokenize(a.headline) for a in eligible], references)]
    for backend in summarizers:
        candidates = [tokenize(summarize(backend, a.body)) for a in eligible]
        rows.append(_gist_row(f"summary:{backend.name}", candidates, references))
    return GistReport(rows=tuple(rows), sample_size=len(eligible))


def _gist_row(signal: str, candidates: list, references: list) -> GistRow:
    r1 = [rouge1(c, r).f1 for c, r in zip(candidates, references)]
    rl = [rouge_l(c, r).f1 for c, r in zip(candidates, references)]
    return GistRow(
        signal=signal,
        rouge1_f1=100.0 * sum(r1) / len(r1),
        rouge_l_f1=100.0 * sum(rl) / len(rl),
    )
