"""Dataset ingestion, configuration and end-to-end evaluation runs."""

from __future__ import annotations

import configparser
import json
import logging
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from . import evalkit
from .evalkit import ConfusionMatrix, MetricReport, SweepPoint
from .fixtures import fixture_trees
from .gted import (
    ALPHA_MODES,
    DEFAULT_THETA,
    ConfigError,
    TransformationSet,
    alpha_transformation,
    gted_distance,
    similarity,
    threshold,
)
from .opt import OperatorTree, build_opt
from .parser import ParseError, parse_theorem
from .standardize import StandardizeConfig, standardize
from .ted import UnitCostModel

log = logging.getLogger(__name__)


class FormatError(ValueError):
    pass


@dataclass(frozen=True)
class EvalRecord:
    id: str
    label_fl: str
    pred_fl: str
    nl: Optional[str] = None
    human: Optional[bool] = None


class Dataset(list):
    """Records in file order; ``malformed`` holds ``(line_no, reason)``."""

    def __init__(self, records=(), malformed=(), path: str = ""):
        super().__init__(records)
        self.malformed = list(malformed)
        self.path = path


def _record_from(obj, seen: set[str]) -> EvalRecord:
    if not isinstance(obj, dict):
        raise FormatError("line is not an object")
    rid = obj.get("id")
    if isinstance(rid, int) and not isinstance(rid, bool):
        rid = str(rid)
    if not isinstance(rid, str) or not rid:
        raise FormatError("missing or empty 'id'")
    if rid in seen:
        raise FormatError(f"duplicate id {rid!r}")
    for key in ("label_fl", "pred_fl"):
        if not isinstance(obj.get(key), str) or not obj[key].strip():
            raise FormatError(f"missing or empty {key!r}")
    nl = obj.get("nl")
    if nl is not None and not isinstance(nl, str):
        raise FormatError("'nl' must be a string")
    human = obj.get("human")
    if human is not None and not isinstance(human, bool):
        raise FormatError("'human' must be true, false or null")
    return EvalRecord(rid, obj["label_fl"], obj["pred_fl"], nl, human)


def load_dataset(path) -> Dataset:
    """Read a JSON-lines dataset.  Bad lines are collected, not fatal, unless
    nothing parses at all."""
    text = Path(path).read_text(encoding="utf-8")
    records, malformed, seen = [], [], set()
    for no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            rec = _record_from(json.loads(line), seen)
        except (json.JSONDecodeError, FormatError) as e:
            malformed.append((no, str(e)))
            continue
        seen.add(rec.id)
        records.append(rec)
    if not records:
        raise FormatError(f"{path}: no records parsed ({len(malformed)} malformed lines)")
    for no, reason in malformed:
        log.warning("%s:%d skipped: %s", path, no, reason)
    return Dataset(records, malformed, str(path))


# ------------------------------------------------------------------ config


_BOOL = {"on": True, "off": False, "true": True, "false": False, "yes": True, "no": False, "1": True, "0": False}


@dataclass(frozen=True)
class EvalConfig:
    theta: float = DEFAULT_THETA
    alpha: str = "scoped"  # off | rename-only | scoped
    dumb_ops: bool = True
    costs: UnitCostModel = UnitCostModel()
    alpha_cost: float = 0.0
    clamp_negative: bool = True
    standardize: StandardizeConfig = StandardizeConfig()
    report_path: Optional[str] = None
    summary_path: Optional[str] = None
    sweep_path: Optional[str] = None

    def __post_init__(self):
        if not (isinstance(self.theta, (int, float)) and 0 <= self.theta <= 1):
            raise ConfigError(f"theta must lie in [0, 1], got {self.theta!r}")
        if self.alpha != "off" and self.alpha not in ALPHA_MODES:
            raise ConfigError(f"alpha must be one of off, {', '.join(ALPHA_MODES)}; got {self.alpha!r}")
        if self.alpha_cost < 0:
            raise ConfigError("alpha_cost must be non-negative")

    def transformation_set(self) -> TransformationSet:
        members = () if self.alpha == "off" else (alpha_transformation(self.alpha, self.alpha_cost),)
        return TransformationSet(members, self.dumb_ops).validate(fixture_trees())

    def snapshot(self) -> dict:
        out = asdict(self)
        out["costs"] = asdict(self.costs)
        out["standardize"] = asdict(self.standardize)
        return out


def _flag(section, key, default: bool) -> bool:
    raw = section.get(key)
    if raw is None:
        return default
    try:
        return _BOOL[raw.strip().lower()]
    except KeyError:
        raise ConfigError(f"{key}: expected on/off, got {raw!r}") from None


def _number(section, key, default: float) -> float:
    raw = section.get(key)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {raw!r}") from None


def load_config(path=None, **overrides) -> EvalConfig:
    """Read an INI-style config with ``[standardize]``, ``[gted]`` and
    ``[output]`` sections.  Keyword overrides that are not None win."""
    parser = configparser.ConfigParser()
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except (OSError, configparser.Error) as e:
            raise ConfigError(f"{path}: {e}") from None
    std = parser["standardize"] if parser.has_section("standardize") else {}
    g = parser["gted"] if parser.has_section("gted") else {}
    out = parser["output"] if parser.has_section("output") else {}
    try:
        costs = UnitCostModel(
            insert=_number(g, "insert_cost", 1),
            delete=_number(g, "delete_cost", 1),
            relabel=_number(g, "relabel_cost", 1),
        )
    except ValueError as e:
        raise ConfigError(str(e)) from None
    values = dict(
        theta=_number(g, "theta", DEFAULT_THETA),
        alpha=g.get("alpha", "scoped").strip(),
        dumb_ops=_flag(g, "dumb_ops", True),
        costs=costs,
        alpha_cost=_number(g, "alpha_cost", 0.0),
        clamp_negative=_flag(g, "clamp_negative", True),
        standardize=StandardizeConfig(rewrite=_flag(std, "rewrite", True), expand=_flag(std, "expand", True)),
        report_path=out.get("report"),
        summary_path=out.get("summary"),
        sweep_path=out.get("sweep"),
    )
    values.update({k: v for k, v in overrides.items() if v is not None})
    return EvalConfig(**values)


# ------------------------------------------------------------------ scoring


def statement_tree(source: str, config: StandardizeConfig = StandardizeConfig()) -> OperatorTree:
    return build_opt(standardize(parse_theorem(source), config))


@dataclass(frozen=True)
class PairScore:
    distance: float
    similarity: Optional[float]
    size_label: int
    size_pred: int


def score_pair(label_fl: str, pred_fl: str, config: EvalConfig, hset: Optional[TransformationSet] = None) -> PairScore:
    hset = hset if hset is not None else config.transformation_set()
    t1 = statement_tree(label_fl, config.standardize)
    t2 = statement_tree(pred_fl, config.standardize)
    d = gted_distance(t1, t2, hset, config.costs)
    s = similarity(t1, t2, hset, config.costs, config.clamp_negative, distance=d)
    return PairScore(d, s, t1.size, t2.size)


def _score(args) -> tuple[Optional[PairScore], Optional[str]]:
    record, config, hset = args
    try:
        return score_pair(record.label_fl, record.pred_fl, config, hset), None
    except ParseError as e:
        return None, f"parse error: {e}"


def score_records(records: Sequence[EvalRecord], config: EvalConfig, workers: int = 1):
    """Per-record ``(PairScore | None, skip reason | None)`` in dataset order."""
    hset = config.transformation_set()
    jobs = [(r, config, hset) for r in records]
    if workers > 1 and len(jobs) > 1:
        # drop the unpicklable matcher closures; workers rebuild them
        jobs = [(r, config, None) for r in records]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_score, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return [_score(j) for j in jobs]


@dataclass
class RecordRow:
    id: str
    distance: Optional[float]
    similarity: Optional[float]
    decision: bool
    human: Optional[bool]


@dataclass
class RunReport:
    dataset_path: str
    config: dict
    rows: list[RecordRow]
    confusion: ConfusionMatrix
    metrics: MetricReport
    skipped: list[dict]
    created: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def to_dict(self, with_timestamp: bool = True) -> dict:
        rows = []
        for r in self.rows:
            d = asdict(r)
            if d["distance"] is not None and math.isinf(d["distance"]):
                d["distance"] = "inf"
            rows.append(d)
        out = {
            "dataset": self.dataset_path,
            "config": self.config,
            "records": rows,
            "skipped": self.skipped,
            "confusion": asdict(self.confusion),
            "metrics": {**asdict(self.metrics), "formatted": self.metrics.formatted()},
        }
        if with_timestamp:
            out["created"] = self.created
        return out

    def to_json(self, with_timestamp: bool = True) -> str:
        return json.dumps(self.to_dict(with_timestamp), ensure_ascii=False, indent=2, sort_keys=True)

    def summary_csv(self) -> str:
        cm, fmt = self.confusion, self.metrics.formatted()
        header = "tp,tn,fp,fn,precision,recall,accuracy,kappa\n"
        return header + f"{cm.tp},{cm.tn},{cm.fp},{cm.fn},{fmt['precision']},{fmt['recall']},{fmt['accuracy']},{fmt['kappa']}\n"


def _require_verdicts(records: Sequence[EvalRecord]) -> None:
    missing = [r.id for r in records if r.human is None]
    if missing:
        raise FormatError(f"records without a human verdict: {', '.join(missing[:5])}")


def evaluate(records: Sequence[EvalRecord], config: EvalConfig = EvalConfig(), workers: int = 1) -> RunReport:
    """Score every record and aggregate against the human verdicts.  Records
    that fail to parse count as negative decisions and are listed as
    skipped."""
    _require_verdicts(records)
    scores = score_records(records, config, workers)
    rows, skipped, decisions = [], [], []
    for rec, (score, reason) in zip(records, scores):
        if score is None:
            skipped.append({"id": rec.id, "reason": reason, "human": rec.human})
            decisions.append(False)
            continue
        decision = threshold(score.similarity, config.theta)
        decisions.append(decision)
        rows.append(RecordRow(rec.id, score.distance, score.similarity, decision, rec.human))
    cm = evalkit.confusion(decisions, [r.human for r in records])
    return RunReport(
        dataset_path=getattr(records, "path", ""),
        config=config.snapshot(),
        rows=rows,
        confusion=cm,
        metrics=evalkit.report(cm),
        skipped=skipped,
    )


def sweep_command(
    records: Sequence[EvalRecord], config: EvalConfig, thetas: Sequence[float], workers: int = 1
) -> list[SweepPoint]:
    """Similarity is computed once per record and reused at every theta."""
    _require_verdicts(records)
    scores = score_records(records, config, workers)
    pairs = [(s.similarity if s is not None else None, r.human) for r, (s, _) in zip(records, scores)]
    return evalkit.sweep(pairs, thetas)


_NAME = re.compile(r"^(\s*)(theorem|lemma)(\s+)([^\s:({\[]+)")


def normalize_name_text(stmt: str) -> str:
    return _NAME.sub(lambda m: f"{m.group(1)}{m.group(2)}{m.group(3)}thm", stmt, count=1)


def baselines(records: Sequence[EvalRecord], metric: str = "identity", theta: float = 0.5):
    """Identity Match or thresholded BLEU over name-normalized statements.
    Returns ``(scores, ConfusionMatrix, MetricReport)``."""
    _require_verdicts(records)
    scores = []
    for r in records:
        label, pred = normalize_name_text(r.label_fl), normalize_name_text(r.pred_fl)
        if metric == "identity":
            scores.append(1.0 if evalkit.identity_match(label, pred) else 0.0)
        elif metric == "bleu":
            scores.append(evalkit.bleu(pred, label))
        else:
            raise ConfigError(f"unknown baseline {metric!r}")
    if metric == "identity":
        decisions = [s == 1.0 for s in scores]
    else:
        decisions = [s > theta for s in scores]
    cm = evalkit.confusion(decisions, [r.human for r in records])
    return scores, cm, evalkit.report(cm)
