"""4-way veracity classification: features, splits, training, and metrics.

Two feature routes exist. The content route sees only the leading words of
the article body; the claim+evidence route sees the selected claim sentences
and the retrieved evidence text joined by a separator marker. The shipped
classifier is a linear softmax over hashed bag-of-tokens features with
analytically computed gradients, so training is fast, deterministic, and
checkable against finite differences.
"""

from __future__ import annotations

import copy
import json
import logging
import math
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import VeracityLabel
from .encode import l2_normalize, stable_bucket
from .errors import ConfigError
from .textproc import tokenize

logger = logging.getLogger(__name__)

SEPARATOR = "[SEP]"
NO_EVIDENCE = "[NO_EVIDENCE]"

NUM_CLASSES = 4
CLASS_ORDER = ("false", "partial_true", "true", "nei")
SNAPSHOT_FORMAT = "classifier-snapshot.v1"

DEFAULT_CONTENT_WORDS = 500


def featurize_content(article_body: str, n: int = DEFAULT_CONTENT_WORDS) -> str:
    """First ``min(n, available)`` whitespace words of the body."""
    if not article_body or not article_body.strip():
        raise ValueError("cannot featurize an empty body")
    if n < 1:
        raise ValueError(f"word budget must be positive, got {n}")
    return " ".join(article_body.split()[:n])


def featurize_concat(claim: str, evidence: str) -> str:
    """Join claim and evidence text with the separator marker.

    Empty evidence becomes the reserved no-evidence marker so the model can
    condition on "nothing was found" explicitly.
    """
    if not claim or not claim.strip():
        raise ValueError("cannot featurize an empty claim")
    evidence_part = evidence.strip() if evidence else ""
    return f"{claim} {SEPARATOR} {evidence_part or NO_EVIDENCE}"


@dataclass(frozen=True)
class LabeledText:
    text: str
    label: VeracityLabel


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 3
    split: tuple[float, float, float] = (0.8, 0.1, 0.1)
    seed: int = 0
    learning_rate: float = 1.0

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValueError(f"epochs must be positive, got {self.epochs}")
        if len(self.split) != 3 or any(r < 0 for r in self.split):
            raise ValueError(f"split must be three non-negative ratios, got {self.split}")
        if abs(sum(self.split) - 1.0) > 1e-9:
            raise ValueError(f"split ratios must sum to 1, got {self.split}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning rate must be positive, got {self.learning_rate}")


def split_dataset(items: Sequence, config: TrainConfig) -> tuple[list, list, list]:
    """Seeded shuffle then train/validation/test partition.

    Validation and test get ``floor(ratio * N)`` items each; the remainder
    goes to train. Partitions are disjoint and cover the input.
    """
    n = len(items)
    if n < 10:
        raise ValueError(f"need at least 10 items to split, got {n}")
    order = list(range(n))
    random.Random(config.seed).shuffle(order)
    n_val = math.floor(config.split[1] * n)
    n_test = math.floor(config.split[2] * n)
    n_train = n - n_val - n_test
    train = [items[i] for i in order[:n_train]]
    val = [items[i] for i in order[n_train : n_train + n_val]]
    test = [items[i] for i in order[n_train + n_val :]]
    return train, val, test


class ClassifierBackend(ABC):
    """4-way classifier slot: deterministic inference, epoch-wise training."""

    name: str
    num_classes: int = NUM_CLASSES

    @abstractmethod
    def predict_proba(self, text: str) -> np.ndarray:
        """Probability vector over the 4 classes, summing to 1."""

    @abstractmethod
    def train_epoch(self, examples: Sequence[LabeledText]) -> float:
        """Run one training pass; return the loss before the update."""

    @abstractmethod
    def get_params(self) -> dict:
        """Snapshot of the trainable parameters."""

    @abstractmethod
    def set_params(self, params: dict) -> None:
        """Restore a snapshot taken by ``get_params``."""


class HashedLinearClassifier(ClassifierBackend):
    """Linear softmax over hashed bag-of-tokens features.

    Parameters start at zero, which makes the untrained prediction exactly
    uniform. Training is minibatch gradient descent on the mean
    cross-entropy, with batches taken in input order (no shuffling), so a
    run is fully determined by the data order and the hyperparameters.
    ``batch_size=None`` means one full-batch step per epoch.
    """

    name = "hashed_linear"

    def __init__(
        self,
        dimension: int = 1024,
        seed: int = 0,
        learning_rate: float = 1.0,
        batch_size: int | None = 8,
    ):
        if dimension < 8:
            raise ValueError(f"feature dimension must be >= 8, got {dimension}")
        if learning_rate <= 0:
            raise ValueError(f"learning rate must be positive, got {learning_rate}")
        if batch_size is not None and batch_size < 1:
            raise ValueError(f"batch size must be positive, got {batch_size}")
        self.dimension = int(dimension)
        self.seed = int(seed)
        self.learning_rate = float(learning_rate)
        self.batch_size = batch_size
        self.weights = np.zeros((NUM_CLASSES, self.dimension), dtype=np.float64)
        self.bias = np.zeros(NUM_CLASSES, dtype=np.float64)

    def features(self, text: str) -> np.ndarray:
        vec = np.zeros(self.dimension, dtype=np.float64)
        for token in tokenize(text):
            vec[stable_bucket(token, self.seed, self.dimension)] += 1.0
        return l2_normalize(vec)

    def predict_proba(self, text: str) -> np.ndarray:
        logits = self.weights @ self.features(text) + self.bias
        return _softmax(logits)

    def batch_loss_and_grad(
        self, features: np.ndarray, labels: np.ndarray
    ) -> tuple[float, np.ndarray, np.ndarray]:
        """Mean cross-entropy and its gradients w.r.t. weights and bias."""
        n = features.shape[0]
        logits = features @ self.weights.T + self.bias
        logits -= logits.max(axis=1, keepdims=True)
        exp = np.exp(logits)
        probs = exp / exp.sum(axis=1, keepdims=True)
        loss = float(-np.mean(np.log(probs[np.arange(n), labels])))
        delta = probs
        delta[np.arange(n), labels] -= 1.0
        delta /= n
        return loss, delta.T @ features, delta.sum(axis=0)

    def train_epoch(self, examples: Sequence[LabeledText]) -> float:
        """One pass over the examples; returns the example-weighted mean of
        the per-batch losses, each measured before that batch's update."""
        if not examples:
            raise ValueError("cannot train on an empty batch")
        features = np.stack([self.features(ex.text) for ex in examples])
        labels = np.array([int(ex.label) for ex in examples], dtype=np.intp)
        n = len(examples)
        step = self.batch_size or n
        total_loss = 0.0
        for start in range(0, n, step):
            batch = slice(start, start + step)
            loss, grad_w, grad_b = self.batch_loss_and_grad(features[batch], labels[batch])
            self.weights -= self.learning_rate * grad_w
            self.bias -= self.learning_rate * grad_b
            total_loss += loss * (min(start + step, n) - start)
        return total_loss / n

    def get_params(self) -> dict:
        return {"weights": self.weights.copy(), "bias": self.bias.copy()}

    def set_params(self, params: dict) -> None:
        weights = np.asarray(params["weights"], dtype=np.float64)
        bias = np.asarray(params["bias"], dtype=np.float64)
        if weights.shape != self.weights.shape or bias.shape != self.bias.shape:
            raise ValueError("parameter snapshot shape mismatch")
        self.weights = weights.copy()
        self.bias = bias.copy()

    def save(self, path: str | Path) -> None:
        snapshot = {
            "format": SNAPSHOT_FORMAT,
            "name": self.name,
            "dimension": self.dimension,
            "seed": self.seed,
            "learning_rate": self.learning_rate,
            "batch_size": self.batch_size,
            "class_order": list(CLASS_ORDER),
            "weights": self.weights.tolist(),
            "bias": self.bias.tolist(),
        }
        Path(path).write_text(json.dumps(snapshot, sort_keys=True), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "HashedLinearClassifier":
        try:
            snapshot = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot load classifier snapshot {path}: {exc}") from exc
        if snapshot.get("format") != SNAPSHOT_FORMAT:
            raise ConfigError(f"snapshot {path} is not in {SNAPSHOT_FORMAT!r} format")
        if tuple(snapshot.get("class_order", ())) != CLASS_ORDER:
            raise ConfigError(f"snapshot {path} has an unexpected class order")
        model = cls(
            dimension=snapshot["dimension"],
            seed=snapshot["seed"],
            learning_rate=snapshot.get("learning_rate", 1.0),
            batch_size=snapshot.get("batch_size", 8),
        )
        model.set_params({"weights": snapshot["weights"], "bias": snapshot["bias"]})
        return model


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max()
    exp = np.exp(shifted)
    return exp / exp.sum()


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    train_loss: float
    val_label_accuracy: float


@dataclass(frozen=True)
class TrainResult:
    log: tuple[EpochStats, ...]
    best_epoch: int
    best_val_label_accuracy: float
    params: dict


def label_accuracy(backend: ClassifierBackend, examples: Sequence[LabeledText]) -> float:
    """Fraction of examples whose argmax prediction matches the gold label."""
    if not examples:
        raise ValueError("cannot score an empty example set")
    hits = sum(
        1 for ex in examples if int(np.argmax(backend.predict_proba(ex.text))) == int(ex.label)
    )
    return hits / len(examples)


def train(
    backend: ClassifierBackend,
    train_set: Sequence[LabeledText],
    validation_set: Sequence[LabeledText],
    config: TrainConfig,
) -> TrainResult:
    """Run exactly ``config.epochs`` epochs; keep the best-validation snapshot.

    The backend is left holding the snapshot with the highest validation
    label accuracy (earliest epoch wins ties).
    """
    if not train_set:
        raise ValueError("training set is empty")
    if not validation_set:
        raise ValueError("validation set is empty")
    if config.epochs < 1:
        raise ValueError(f"epochs must be positive, got {config.epochs}")
    classes = {ex.label for ex in train_set}
    if len(classes) == 1:
        logger.warning("training set contains a single class (%s)", next(iter(classes)).name)

    log: list[EpochStats] = []
    best_params: dict | None = None
    best_epoch = 0
    best_la = -1.0
    for epoch in range(1, config.epochs + 1):
        loss = backend.train_epoch(train_set)
        val_la = label_accuracy(backend, validation_set)
        log.append(EpochStats(epoch=epoch, train_loss=loss, val_label_accuracy=val_la))
        logger.info("epoch %d: train loss %.6f, validation LA %.4f", epoch, loss, val_la)
        if val_la > best_la:
            best_la = val_la
            best_epoch = epoch
            best_params = copy.deepcopy(backend.get_params())
    assert best_params is not None
    backend.set_params(best_params)
    return TrainResult(
        log=tuple(log),
        best_epoch=best_epoch,
        best_val_label_accuracy=best_la,
        params=best_params,
    )


@dataclass(frozen=True)
class ClassMetrics:
    label: VeracityLabel
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    label_accuracy: float
    macro_f1: float
    per_class: tuple[ClassMetrics, ...]
    confusion: np.ndarray  # rows gold, columns predicted
    missing_classes: tuple[VeracityLabel, ...]  # absent from both gold and predictions


def score_predictions(
    gold: Sequence[VeracityLabel | int], predicted: Sequence[VeracityLabel | int]
) -> EvalReport:
    """Confusion matrix, label accuracy, and macro F1 from label vectors.

    Macro F1 is the unweighted mean over all four classes; a class absent
    from both gold and predictions contributes 0 and is flagged.
    """
    if len(gold) != len(predicted):
        raise ValueError("gold and predicted label vectors differ in length")
    if not gold:
        raise ValueError("cannot evaluate an empty test set")
    confusion = np.zeros((NUM_CLASSES, NUM_CLASSES), dtype=np.int64)
    for g, p in zip(gold, predicted):
        confusion[int(g), int(p)] += 1

    total = int(confusion.sum())
    per_class = []
    missing = []
    for c in range(NUM_CLASSES):
        tp = int(confusion[c, c])
        gold_count = int(confusion[c, :].sum())
        pred_count = int(confusion[:, c].sum())
        precision = tp / pred_count if pred_count else 0.0
        recall = tp / gold_count if gold_count else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class.append(
            ClassMetrics(
                label=VeracityLabel(c),
                precision=precision,
                recall=recall,
                f1=f1,
                support=gold_count,
            )
        )
        if gold_count == 0 and pred_count == 0:
            missing.append(VeracityLabel(c))
    return EvalReport(
        label_accuracy=float(np.trace(confusion)) / total,
        macro_f1=sum(m.f1 for m in per_class) / NUM_CLASSES,
        per_class=tuple(per_class),
        confusion=confusion,
        missing_classes=tuple(missing),
    )


def evaluate(backend: ClassifierBackend, test_set: Sequence[LabeledText]) -> EvalReport:
    """Score a backend's argmax predictions on a labeled test set."""
    if not test_set:
        raise ValueError("cannot evaluate on an empty test set")
    gold = [ex.label for ex in test_set]
    predicted = [VeracityLabel(int(np.argmax(backend.predict_proba(ex.text)))) for ex in test_set]
    return score_predictions(gold, predicted)
