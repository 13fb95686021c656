import json

import pytest

from claimcheck.config import (
    ClassifierSettings,
    EncoderSettings,
    PipelineConfig,
    ProviderSettings,
    SummarizerSettings,
    build_classifier,
    build_encoder,
    build_provider,
    build_summarizer,
    config_from_dict,
    load_abbreviation_guard,
    load_config,
    load_credible_list,
)
from claimcheck.errors import ConfigError
from claimcheck.pipeline import build_runtime
from claimcheck.providers import FixtureSearchProvider, LiveSearchProvider


def test_default_config_is_fully_offline():
    config = PipelineConfig()
    runtime = build_runtime(config)
    assert isinstance(runtime.provider, FixtureSearchProvider)
    assert runtime.encoder.dimension == 256
    assert runtime.summarizer.max_tokens == 180
    assert runtime.abbreviations is None
    assert runtime.credible.domains  # shipped test list


def test_load_config_roundtrip(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(
        json.dumps(
            {
                "encoder": {"dimension": 128, "seed": 5},
                "summarizer": {"min_tokens": 30, "max_tokens": 90},
                "classifier": {"learning_rate": 0.5, "batch_size": 4},
                "provider": {"kind": "fixture"},
                "train": {"epochs": 2, "split": [0.8, 0.1, 0.1], "seed": 4},
                "claims_k": 2,
                "workers": 2,
            }
        ),
        encoding="utf-8",
    )
    config = load_config(path)
    assert config.encoder.dimension == 128
    assert config.summarizer.max_tokens == 90
    assert config.classifier.batch_size == 4
    assert config.train.epochs == 2
    assert config.claims_k == 2
    assert config.workers == 2


def test_unknown_section_key_rejected():
    with pytest.raises(ConfigError, match="unknown keys"):
        config_from_dict({"encoder": {"dimensions": 128}})


def test_unknown_top_level_key_rejected():
    with pytest.raises(ConfigError, match="unknown config keys"):
        config_from_dict({"encoders": {}})


def test_invalid_train_section_rejected():
    with pytest.raises(ConfigError, match="train"):
        config_from_dict({"train": {"epochs": 0}})


def test_missing_config_file():
    with pytest.raises(ConfigError, match="cannot read"):
        load_config("/nonexistent/config.json")


def test_unknown_backends_rejected():
    with pytest.raises(ConfigError, match="encoder"):
        build_encoder(EncoderSettings(backend="transformer"))
    with pytest.raises(ConfigError, match="summarizer"):
        build_summarizer(SummarizerSettings(backend="seq2seq"))
    with pytest.raises(ConfigError, match="classifier"):
        build_classifier(ClassifierSettings(backend="bert"))
    with pytest.raises(ConfigError, match="provider"):
        build_provider(ProviderSettings(kind="crawler"))


def test_live_provider_requires_endpoint():
    with pytest.raises(ConfigError, match="endpoint"):
        build_provider(ProviderSettings(kind="live"))
    provider = build_provider(
        ProviderSettings(kind="live", endpoint="https://search.example/api")
    )
    assert isinstance(provider, LiveSearchProvider)


def test_custom_credible_list(tmp_path):
    path = tmp_path / "domains.txt"
    path.write_text("trusted.org\n", encoding="utf-8")
    config = PipelineConfig(credible_list_path=str(path))
    assert load_credible_list(config).domains == frozenset({"trusted.org"})


def test_abbreviation_guard_plumbed_through_runtime(tmp_path):
    path = tmp_path / "abbrev.txt"
    path.write_text("qq\n", encoding="utf-8")
    config = PipelineConfig(abbreviations_path=str(path))
    runtime = build_runtime(config)
    assert runtime.abbreviations == frozenset({"qq"})
    assert runtime.summarizer.abbreviations == frozenset({"qq"})
