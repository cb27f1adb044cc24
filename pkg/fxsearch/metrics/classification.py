"""
Effect configuration metrics: type classification, sequence distance, parameter error.
"""

from collections.abc import Hashable, Iterable, Sequence
from typing import Any

import numpy as np

from fxsearch.exceptions import DimensionError, EmptyInputError, TypeMismatchError
from fxsearch.models.params import EffectParams


def _is_label_set(item: Any) -> bool:
    return isinstance(item, set | frozenset)


def macro_f1(
    predicted: Sequence[Any],
    truth: Sequence[Any],
    classes: Iterable[Hashable],
) -> float:
    """
    Unweighted mean of per-class F1 scores.

    Items may be label sets (multi-label presence per class) or single labels
    (one-vs-rest per class). A class with no true positives, false
    positives or false negatives scores 0.

    Args:
        predicted: Predicted label sets or labels
        truth: True label sets or labels, aligned with predicted
        classes: Classes to average over

    Returns:
        Macro F1 in [0, 1]

    Raises:
        EmptyInputError: If there are no items or no classes
        DimensionError: If the lists differ in length
    """
    class_list = list(classes)
    if not predicted or not class_list:
        raise EmptyInputError("macro_f1 needs at least one item and one class")
    if len(predicted) != len(truth):
        raise DimensionError(
            "macro_f1 inputs differ in length",
            details={"predicted": len(predicted), "truth": len(truth)},
        )

    def as_set(item: Any) -> frozenset[Any]:
        return frozenset(item) if _is_label_set(item) else frozenset([item])

    pred_sets = [as_set(p) for p in predicted]
    true_sets = [as_set(t) for t in truth]

    scores = []
    for cls in class_list:
        tp = fp = fn = 0
        for p, t in zip(pred_sets, true_sets, strict=True):
            in_p = cls in p
            in_t = cls in t
            tp += in_p and in_t
            fp += in_p and not in_t
            fn += in_t and not in_p
        denominator = 2 * tp + fp + fn
        scores.append(2 * tp / denominator if tp else 0.0)

    return float(np.mean(scores))


def levenshtein(a: Sequence[Hashable], b: Sequence[Hashable]) -> int:
    """Minimal number of unit-cost insertions, deletions and substitutions."""
    previous = list(range(len(b) + 1))
    for i, item_a in enumerate(a, start=1):
        current = [i]
        for j, item_b in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,
                    current[j - 1] + 1,
                    previous[j - 1] + (item_a != item_b),
                )
            )
        previous = current
    return previous[-1]


def exact_match(predicted: Sequence[Sequence[Hashable]], truth: Sequence[Sequence[Hashable]]) -> float:
    """
    Fraction of sequences equal to the truth in content, order and length.

    Raises:
        EmptyInputError: If there are no sequences
        DimensionError: If the lists differ in length
    """
    if not predicted:
        raise EmptyInputError("exact_match needs at least one sequence")
    if len(predicted) != len(truth):
        raise DimensionError(
            "exact_match inputs differ in length",
            details={"predicted": len(predicted), "truth": len(truth)},
        )
    hits = sum(tuple(p) == tuple(t) for p, t in zip(predicted, truth, strict=True))
    return hits / len(predicted)


def param_mae(predicted: EffectParams, truth: EffectParams) -> float:
    """
    Mean absolute error between normalized parameter vectors.

    Raises:
        TypeMismatchError: If the effect types differ
    """
    if predicted.effect_type is not truth.effect_type:
        raise TypeMismatchError(
            "param_mae requires parameters of the same effect type",
            details={
                "predicted": predicted.effect_type.value,
                "truth": truth.effect_type.value,
            },
        )
    diff = np.abs(np.asarray(predicted.values) - np.asarray(truth.values))
    return float(np.mean(diff))
