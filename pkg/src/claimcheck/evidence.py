"""Evidence gathering: bounded queries, retrieval, filtering, and selection.

A query is the article headline plus either its selected claim sentences or
its summary, cut to a word budget. Results come back through a provider
interface, get filtered on publication date and source credibility, and the
surviving articles contribute the evidence sentences closest to the claim.
"""

from __future__ import annotations

import calendar
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from datetime import date
from enum import Enum
from pathlib import Path

from .corpus import Article
from .encode import EncoderBackend, cosine_distance, encode
from .errors import ConfigError, FatalSearchError
from .textproc import split_sentences, tokenize

logger = logging.getLogger(__name__)

DEFAULT_QUERY_WORD_LIMIT = 40
DEFAULT_MAX_RESULTS = 35
DEFAULT_MAX_EVIDENCE_ARTICLES = 3
DEFAULT_MAX_EVIDENCE_SENTENCES = 3
DEFAULT_WINDOW_MONTHS = 3


class QueryOrigin(str, Enum):
    P1_P2 = "p1_p2"  # headline + selected claim sentences
    P3 = "p3"  # headline + summary


@dataclass(frozen=True)
class Query:
    text: str
    origin: QueryOrigin

    def __post_init__(self) -> None:
        if not self.text or not self.text.strip():
            raise ValueError("query text must be non-empty")


def build_query(
    headline: str,
    claims_or_summary: str,
    origin: QueryOrigin,
    word_limit: int = DEFAULT_QUERY_WORD_LIMIT,
) -> Query:
    """Concatenate headline and claim/summary text, keep the first words.

    The output is always the exact word-sequence prefix of
    ``headline + " " + claims_or_summary``, at most ``word_limit`` words.
    """
    if not headline or not headline.strip():
        raise ValueError("cannot build a query from an empty headline")
    if word_limit < 1:
        raise ValueError(f"word limit must be positive, got {word_limit}")
    words = headline.split()
    if claims_or_summary:
        words += claims_or_summary.split()
    return Query(text=" ".join(words[:word_limit]), origin=origin)


@dataclass(frozen=True)
class SearchResult:
    url: str
    domain: str
    title: str
    body: str
    provider_rank: int  # 1-based position in the provider response
    published: date | None = None


class SearchProvider(ABC):
    """Web-search slot. Implementations return results in provider order."""

    name: str

    @abstractmethod
    def search(self, query_text: str) -> list[SearchResult]:
        """Run a query and return ranked results."""


def search(provider: SearchProvider, query: Query, max_results: int = DEFAULT_MAX_RESULTS) -> list[SearchResult]:
    """Query a provider, keep at most ``max_results`` in provider order."""
    results = list(provider.search(query.text))
    ranks = [r.provider_rank for r in results]
    if len(set(ranks)) != len(ranks):
        raise FatalSearchError(f"provider {provider.name!r} returned duplicate ranks")
    return results[:max_results]


def shift_months(day: date, months: int) -> date:
    """Shift by whole calendar months, clamping to the end of short months."""
    month_index = day.year * 12 + (day.month - 1) + months
    year, month0 = divmod(month_index, 12)
    month = month0 + 1
    return date(year, month, min(day.day, calendar.monthrange(year, month)[1]))


def date_window(article_date: date, evidence_date: date, months: int = DEFAULT_WINDOW_MONTHS) -> bool:
    """True iff the evidence date falls within +/- ``months`` calendar months.

    Bounds are inclusive; month arithmetic clamps (e.g. a May 31 article has
    a February 28/29 lower bound).
    """
    lower = shift_months(article_date, -months)
    upper = shift_months(article_date, months)
    return lower <= evidence_date <= upper


# Second-level suffixes under which registrable names take one more label.
# Snapshot of the common cases; extend the list via CredibleDomainList if an
# operator corpus needs more.
_MULTI_LABEL_SUFFIXES = frozenset(
    {
        "co.uk", "org.uk", "ac.uk", "gov.uk", "net.uk",
        "com.au", "net.au", "org.au", "gov.au",
        "co.jp", "ne.jp", "or.jp", "ac.jp", "go.jp",
        "co.in", "net.in", "org.in",
        "co.nz", "net.nz", "org.nz",
        "com.br", "net.br", "org.br",
        "com.mx", "com.ar", "com.cn", "net.cn", "org.cn",
        "com.sg", "com.hk", "com.tw", "com.tr",
        "co.kr", "or.kr", "co.za", "org.za", "co.il", "org.il",
    }
)


def registrable_domain(value: str) -> str | None:
    """Reduce a host name or URL to its registrable domain, lowercased.

    Returns None when no registrable domain can be derived (empty input,
    bare labels, IP addresses).
    """
    if not value:
        return None
    host = value.strip().lower()
    if "://" in host:
        host = host.split("://", 1)[1]
    host = host.split("/", 1)[0].split("?", 1)[0]
    if "@" in host:
        host = host.rsplit("@", 1)[1]
    host = host.split(":", 1)[0].rstrip(".")
    if not host:
        return None
    labels = host.split(".")
    if len(labels) < 2 or any(not label for label in labels):
        return None
    if all(label.isdigit() for label in labels):
        return None  # IPv4 literal
    if len(labels) >= 3 and ".".join(labels[-2:]) in _MULTI_LABEL_SUFFIXES:
        return ".".join(labels[-3:])
    return ".".join(labels[-2:])


@dataclass(frozen=True)
class CredibleDomainList:
    """Allowlist of registrable domains considered credible sources."""

    domains: frozenset[str]

    def __post_init__(self) -> None:
        if not self.domains:
            raise ConfigError("credible domain list is empty")

    @classmethod
    def from_file(cls, path: str | Path) -> "CredibleDomainList":
        """One domain per line; ``#`` starts a comment. Entries should be
        registrable domains (no scheme, no path)."""
        domains = set()
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            entry = line.split("#", 1)[0].strip().lower()
            if not entry:
                continue
            if "/" in entry or ":" in entry:
                raise ConfigError(f"credible-list entry {entry!r} carries a scheme or path")
            domains.add(entry)
        return cls(domains=frozenset(domains))


def is_credible(domain: str, credible: CredibleDomainList) -> bool:
    """True iff the registrable domain of ``domain`` is in the allowlist."""
    reg = registrable_domain(domain)
    if reg is None:
        logger.warning("domain %r is unparseable; treating as non-credible", domain)
        return False
    return reg in credible.domains


@dataclass(frozen=True)
class EvidenceArticle:
    """A search result that passed both filters at construction time."""

    result: SearchResult
    date_check_applicable: bool  # False when the source article has no date
    passed_filters: bool = True


@dataclass(frozen=True)
class EvidenceSentence:
    text: str
    distance: float
    source_url: str
    article_order: int  # 0-based order among surviving evidence articles
    sentence_index: int  # 0-based position within its evidence article


@dataclass(frozen=True)
class EvidenceSet:
    articles: tuple[EvidenceArticle, ...] = ()
    sentences: tuple[EvidenceSentence, ...] = ()
    concatenated: str = ""

    @property
    def is_empty(self) -> bool:
        return not self.articles


def gather_evidence(
    article: Article,
    claim_text: str,
    query: Query,
    provider: SearchProvider,
    credible: CredibleDomainList,
    backend: EncoderBackend,
    months: int = DEFAULT_WINDOW_MONTHS,
    max_results: int = DEFAULT_MAX_RESULTS,
    max_articles: int = DEFAULT_MAX_EVIDENCE_ARTICLES,
    max_sentences: int = DEFAULT_MAX_EVIDENCE_SENTENCES,
    abbreviations: frozenset[str] | None = None,
) -> EvidenceSet:
    """Search, filter, and pick the evidence sentences closest to the claim.

    Filtering: a result must come from a credible registrable domain and
    carry a publication date inside the article's window. A result without a
    date fails the window check; an article without a date passes it (the
    record keeps a flag so this is auditable). The first ``max_articles``
    survivors, in provider order, contribute sentences; the global top
    ``max_sentences`` by distance to the claim (ties by article order, then
    sentence position) form the evidence text E.
    """
    results = search(provider, query, max_results=max_results)

    survivors: list[EvidenceArticle] = []
    for result in results:
        if not is_credible(result.domain, credible):
            continue
        if result.published is None:
            continue  # undated evidence is conservatively rejected
        applicable = article.published is not None
        if applicable and not date_window(article.published, result.published, months):
            continue
        survivors.append(EvidenceArticle(result=result, date_check_applicable=applicable))
        if len(survivors) == max_articles:
            break

    if not survivors:
        return EvidenceSet()

    claim_vec = encode(backend, claim_text)
    pool: list[EvidenceSentence] = []
    for order, evidence_article in enumerate(survivors):
        for idx, sentence in enumerate(split_sentences(evidence_article.result.body, abbreviations)):
            if not tokenize(sentence):
                continue  # nothing to embed
            distance = cosine_distance(claim_vec, encode(backend, sentence))
            pool.append(
                EvidenceSentence(
                    text=sentence,
                    distance=distance,
                    source_url=evidence_article.result.url,
                    article_order=order,
                    sentence_index=idx,
                )
            )
    pool.sort(key=lambda s: (s.distance, s.article_order, s.sentence_index))
    top = tuple(pool[:max_sentences])
    return EvidenceSet(
        articles=tuple(survivors),
        sentences=top,
        concatenated=" ".join(s.text for s in top),
    )
