"""Baselines and agreement statistics.

Positive class throughout: "the predicted formalization is correct".
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .parser import tokenize

UNDEFINED = "0/0"
SWEEP_COLUMNS = ("theta", "tp", "tn", "fp", "fn", "precision", "recall", "accuracy", "kappa")


class EmptyInput(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


def identity_match(label: str, pred: str) -> bool:
    strip = lambda s: "".join(ch for ch in s if not ch.isspace())  # noqa: E731
    return strip(label) == strip(pred)


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu(pred: str, ref: str, max_n: int = 4) -> float:
    """Sentence BLEU over lexer tokens, no smoothing.

    Orders above the candidate length are dropped (so identical short
    statements still score 1).  Brevity penalty ``exp(1 - r/c)`` when the
    candidate is shorter than the reference."""
    cand = [t.text for t in tokenize(pred)]
    refs = [t.text for t in tokenize(ref)]
    if not cand or not refs:
        raise EmptyInput("BLEU needs at least one token on each side")
    order = min(max_n, len(cand))
    log_sum = 0.0
    for n in range(1, order + 1):
        c_counts = _ngrams(cand, n)
        r_counts = _ngrams(refs, n)
        clipped = sum(min(c, r_counts[g]) for g, c in c_counts.items())
        if clipped == 0:
            return 0.0
        log_sum += math.log(clipped / sum(c_counts.values()))
    c, r = len(cand), len(refs)
    bp = 1.0 if c >= r else math.exp(1 - r / c)
    return bp * math.exp(log_sum / order)


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    @property
    def predicted_positive(self) -> int:
        return self.tp + self.fp


@dataclass(frozen=True)
class MetricReport:
    precision: Optional[float]  # None when tp + fp == 0
    recall: Optional[float]
    accuracy: float
    kappa: float

    def formatted(self) -> dict[str, str]:
        """Percentages to two decimals, kappa to three."""
        pct = lambda v: UNDEFINED if v is None else f"{100 * v:.2f}%"  # noqa: E731
        return {
            "precision": pct(self.precision),
            "recall": pct(self.recall),
            "accuracy": pct(self.accuracy),
            "kappa": f"{self.kappa:.3f}",
        }


def confusion(decisions: Sequence[bool], truth: Sequence[bool]) -> ConfusionMatrix:
    if len(decisions) != len(truth):
        raise LengthMismatch(f"{len(decisions)} decisions vs {len(truth)} verdicts")
    if not decisions:
        raise LengthMismatch("need at least one decision")
    counts = Counter((bool(d), bool(t)) for d, t in zip(decisions, truth))
    return ConfusionMatrix(
        tp=counts[True, True], tn=counts[False, False], fp=counts[True, False], fn=counts[False, True]
    )


def cohen_kappa(cm: ConfusionMatrix) -> float:
    n = cm.total
    p_o = (cm.tp + cm.tn) / n
    p_e = ((cm.tp + cm.fp) * (cm.tp + cm.fn) + (cm.fn + cm.tn) * (cm.fp + cm.tn)) / n**2
    if p_e == 1:
        return 0.0
    return (p_o - p_e) / (1 - p_e)


def report(cm: ConfusionMatrix) -> MetricReport:
    if cm.total < 1:
        raise ValueError("empty confusion matrix")
    precision = cm.tp / (cm.tp + cm.fp) if cm.tp + cm.fp else None
    recall = cm.tp / (cm.tp + cm.fn) if cm.tp + cm.fn else None
    return MetricReport(precision, recall, (cm.tp + cm.tn) / cm.total, cohen_kappa(cm))


@dataclass(frozen=True)
class SweepPoint:
    theta: float
    confusion: ConfusionMatrix
    report: MetricReport


def sweep(pairs: Sequence[tuple[Optional[float], bool]], thetas: Sequence[float]) -> list[SweepPoint]:
    """Threshold each similarity at every theta (strictly greater is positive;
    ``None`` is never positive)."""
    for a, b in zip(thetas, thetas[1:]):
        if not a < b:
            raise ValueError("thetas must be strictly increasing")
    if thetas and not (0 <= thetas[0] and thetas[-1] <= 1):
        raise ValueError("thetas must lie in [0, 1]")
    truth = [t for _, t in pairs]
    points = []
    for theta in thetas:
        decisions = [s is not None and s > theta for s, _ in pairs]
        cm = confusion(decisions, truth)
        points.append(SweepPoint(theta, cm, report(cm)))
    return points


def _num(v: Optional[float]) -> str:
    return UNDEFINED if v is None else f"{v:.6f}"


def sweep_rows(points: Iterable[SweepPoint]) -> list[dict[str, str]]:
    rows = []
    for p in points:
        cm, r = p.confusion, p.report
        rows.append({
            "theta": f"{p.theta:g}",
            "tp": str(cm.tp),
            "tn": str(cm.tn),
            "fp": str(cm.fp),
            "fn": str(cm.fn),
            "precision": _num(r.precision),
            "recall": _num(r.recall),
            "accuracy": _num(r.accuracy),
            "kappa": _num(r.kappa),
        })
    return rows


def sweep_csv(points: Iterable[SweepPoint]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(sweep_rows(points))
    return buf.getvalue()


def theta_grid(spec: str) -> list[float]:
    """``"0:1:0.1"`` (inclusive range) or ``"0.2,0.5,0.8"``."""
    if ":" in spec:
        start, stop, step = (float(x) for x in spec.split(":"))
        if step <= 0:
            raise ValueError("grid step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 10) for i in range(count)]
    return [float(x) for x in spec.split(",") if x.strip()]
