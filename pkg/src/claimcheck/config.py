"""Declarative configuration and backend construction.

Config files are JSON with one object per subsystem. Every key has a
default that points at the shipped offline backends and fixture data, so an
empty config runs the whole pipeline hermetically.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import fixtures
from .encode import EncoderBackend, HashedBagEncoder
from .errors import ConfigError
from .evidence import (
    DEFAULT_MAX_EVIDENCE_ARTICLES,
    DEFAULT_MAX_EVIDENCE_SENTENCES,
    DEFAULT_MAX_RESULTS,
    DEFAULT_QUERY_WORD_LIMIT,
    DEFAULT_WINDOW_MONTHS,
    CredibleDomainList,
    SearchProvider,
)
from .providers import FixtureSearchProvider, LiveSearchProvider, RateLimiter
from .summarize import DEFAULT_MAX_TOKENS, DEFAULT_MIN_TOKENS, LeadSummarizer, SummarizerBackend
from .textproc import load_abbreviations
from .veracity import ClassifierBackend, HashedLinearClassifier, TrainConfig


@dataclass(frozen=True)
class EncoderSettings:
    backend: str = "hashed"
    dimension: int = 256
    seed: int = 0
    model_id: str | None = None  # adapter slot for remote/neural encoders


@dataclass(frozen=True)
class SummarizerSettings:
    backend: str = "lead"
    min_tokens: int = DEFAULT_MIN_TOKENS
    max_tokens: int = DEFAULT_MAX_TOKENS
    model_id: str | None = None  # adapter slot for abstractive models


@dataclass(frozen=True)
class ClassifierSettings:
    backend: str = "hashed_linear"
    dimension: int = 1024
    seed: int = 0
    learning_rate: float = 1.0
    batch_size: int | None = 8  # None = one full-batch step per epoch


@dataclass(frozen=True)
class ProviderSettings:
    kind: str = "fixture"  # fixture | live
    fixture_path: str | None = None  # defaults to the shipped file
    endpoint: str | None = None
    api_key_env: str = "CLAIMCHECK_SEARCH_API_KEY"
    cache_dir: str | None = None
    requests_per_second: float = 3.0
    max_in_flight: int = 2
    timeout: float = 10.0


@dataclass(frozen=True)
class PipelineConfig:
    encoder: EncoderSettings = field(default_factory=EncoderSettings)
    summarizer: SummarizerSettings = field(default_factory=SummarizerSettings)
    classifier: ClassifierSettings = field(default_factory=ClassifierSettings)
    provider: ProviderSettings = field(default_factory=ProviderSettings)
    train: TrainConfig = field(default_factory=TrainConfig)
    credible_list_path: str | None = None  # defaults to the shipped test list
    abbreviations_path: str | None = None  # None = built-in guard list
    claims_k: int = 3
    min_claim_sentence_tokens: int = 0  # 0 = rank every sentence
    query_word_limit: int = DEFAULT_QUERY_WORD_LIMIT
    date_window_months: int = DEFAULT_WINDOW_MONTHS
    max_search_results: int = DEFAULT_MAX_RESULTS
    max_evidence_articles: int = DEFAULT_MAX_EVIDENCE_ARTICLES
    max_evidence_sentences: int = DEFAULT_MAX_EVIDENCE_SENTENCES
    workers: int = 1
    seed: int = 0


def _build(cls, data: dict, context: str):
    if not isinstance(data, dict):
        raise ConfigError(f"config section {context!r} must be an object")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown keys in config section {context!r}: {sorted(unknown)}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config section {context!r}: {exc}") from exc


def config_from_dict(data: dict) -> PipelineConfig:
    if not isinstance(data, dict):
        raise ConfigError("config root must be an object")
    sections = {
        "encoder": EncoderSettings,
        "summarizer": SummarizerSettings,
        "classifier": ClassifierSettings,
        "provider": ProviderSettings,
        "train": TrainConfig,
    }
    kwargs = {}
    for key, cls in sections.items():
        if key in data:
            section = dict(data[key])
            if key == "train" and "split" in section:
                section["split"] = tuple(section["split"])
            kwargs[key] = _build(cls, section, key)
    scalar_keys = {f.name for f in dataclasses.fields(PipelineConfig)} - set(sections)
    unknown = set(data) - set(sections) - scalar_keys
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for key in scalar_keys & set(data):
        kwargs[key] = data[key]
    try:
        return PipelineConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad config: {exc}") from exc


def load_config(path: str | Path) -> PipelineConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data)


def build_encoder(settings: EncoderSettings) -> EncoderBackend:
    if settings.backend == "hashed":
        return HashedBagEncoder(dimension=settings.dimension, seed=settings.seed)
    raise ConfigError(f"unknown encoder backend {settings.backend!r} (available: hashed)")


def build_summarizer(
    settings: SummarizerSettings, abbreviations: frozenset[str] | None = None
) -> SummarizerBackend:
    if settings.backend == "lead":
        return LeadSummarizer(
            min_tokens=settings.min_tokens,
            max_tokens=settings.max_tokens,
            abbreviations=abbreviations,
        )
    raise ConfigError(f"unknown summarizer backend {settings.backend!r} (available: lead)")


def build_classifier(settings: ClassifierSettings) -> ClassifierBackend:
    if settings.backend == "hashed_linear":
        return HashedLinearClassifier(
            dimension=settings.dimension,
            seed=settings.seed,
            learning_rate=settings.learning_rate,
            batch_size=settings.batch_size,
        )
    raise ConfigError(f"unknown classifier backend {settings.backend!r} (available: hashed_linear)")


def build_provider(settings: ProviderSettings) -> SearchProvider:
    if settings.kind == "fixture":
        path = settings.fixture_path or fixtures.fixture_search_path()
        return FixtureSearchProvider.from_file(path)
    if settings.kind == "live":
        if not settings.endpoint:
            raise ConfigError("live provider requires provider.endpoint")
        limiter = RateLimiter(
            requests_per_second=settings.requests_per_second,
            max_in_flight=settings.max_in_flight,
        )
        return LiveSearchProvider(
            endpoint=settings.endpoint,
            api_key_env=settings.api_key_env,
            cache_dir=settings.cache_dir,
            rate_limiter=limiter,
            timeout=settings.timeout,
        )
    raise ConfigError(f"unknown provider kind {settings.kind!r} (available: fixture, live)")


def load_credible_list(config: PipelineConfig) -> CredibleDomainList:
    path = config.credible_list_path or fixtures.credible_domains_path()
    return CredibleDomainList.from_file(path)


def load_abbreviation_guard(config: PipelineConfig) -> frozenset[str] | None:
    """Custom sentence-splitter guard list, or None for the built-in one."""
    if config.abbreviations_path is None:
        return None
    return load_abbreviations(config.abbreviations_path)
