"""Study analysis: repeated-measures ANOVA, effect sizes, A/B tallies.

Records travel as line-delimited JSON (one record per line), matching the
files the calibration service appends to, so logs are crash-safe, diff-able
and directly loadable here.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
from scipy import stats as sps

from .core import ControlVector, Emotion, InsufficientDataError
from .pipeline import EmotionPreset


@dataclass(frozen=True)
class CalibrationRecord:
    subject_id: str
    image_id: str
    target_emotion: Emotion
    chosen: ControlVector
    timestamp: str = ""

    def __post_init__(self) -> None:
        if self.target_emotion == Emotion.NEUTRAL:
            raise ValueError("calibration trials never target the neutral emotion")

    def as_dict(self) -> dict:
        return {
            "subject_id": self.subject_id,
            "image_id": self.image_id,
            "target_emotion": self.target_emotion.value,
            "chosen": self.chosen.as_dict(),
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CalibrationRecord":
        return cls(
            subject_id=d["subject_id"],
            image_id=d["image_id"],
            target_emotion=Emotion(d["target_emotion"]),
            chosen=ControlVector(**d["chosen"]),
            timestamp=d.get("timestamp", ""),
        )


@dataclass(frozen=True)
class ABRecord:
    subject_id: str
    clip_id: str
    shown_emotion: Emotion
    is_correct_emotion: bool
    side: str  # side holding the emotion render: "left" | "right"
    choice: str  # "emotion_side" | "neutral_side"
    timestamp: str = ""

    def __post_init__(self) -> None:
        if self.choice not in ("emotion_side", "neutral_side"):
            raise ValueError(f"invalid choice token {self.choice!r}")
        if self.side not in ("left", "right"):
            raise ValueError(f"invalid side {self.side!r}")

    def as_dict(self) -> dict:
        return {
            "subject_id": self.subject_id,
            "clip_id": self.clip_id,
            "shown_emotion": self.shown_emotion.value,
            "is_correct_emotion": self.is_correct_emotion,
            "side": self.side,
            "choice": self.choice,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ABRecord":
        return cls(
            subject_id=d["subject_id"],
            clip_id=d["clip_id"],
            shown_emotion=Emotion(d["shown_emotion"]),
            is_correct_emotion=bool(d["is_correct_emotion"]),
            side=d["side"],
            choice=d["choice"],
            timestamp=d.get("timestamp", ""),
        )


# ---------------------------------------------------------------------------
# record files

def read_calibration_records(path) -> List[CalibrationRecord]:
    return [CalibrationRecord.from_dict(json.loads(line))
            for line in Path(path).read_text().splitlines() if line.strip()]


def write_calibration_records(records: Iterable[CalibrationRecord], path) -> None:
    Path(path).write_text(
        "".join(json.dumps(r.as_dict()) + "\n" for r in records))


def read_ab_records(path) -> List[ABRecord]:
    return [ABRecord.from_dict(json.loads(line))
            for line in Path(path).read_text().splitlines() if line.strip()]


def write_ab_records(records: Iterable[ABRecord], path) -> None:
    Path(path).write_text(
        "".join(json.dumps(r.as_dict()) + "\n" for r in records))


# ---------------------------------------------------------------------------
# repeated-measures ANOVA

@dataclass(frozen=True)
class AnovaResult:
    parameter: str
    f_stat: float
    p_value: float
    eta2: float
    label: str


def effect_size_class(eta2: float) -> str:
    """Cohen-style label: Small [0, 0.06), Medium [0.06, 0.14), Large >= 0.14."""
    if not 0.0 <= eta2 <= 1.0:
        raise ValueError(f"eta2 must lie in [0, 1], got {eta2}")
    if eta2 < 0.06:
        return "Small"
    if eta2 < 0.14:
        return "Medium"
    return "Large"


def _cell_means(records: Sequence[CalibrationRecord], parameter: str):
    """(n_subjects, k_emotions) cell matrix of per-subject-per-emotion means."""
    if parameter not in ControlVector.ORDER:
        raise ValueError(f"unknown parameter {parameter!r}")
    subjects = sorted({r.subject_id for r in records})
    emotions = sorted({r.target_emotion for r in records}, key=lambda e: e.value)
    if len(subjects) < 2 or len(emotions) < 2:
        raise InsufficientDataError(
            f"need >= 2 subjects and >= 2 emotions, got {len(subjects)}/{len(emotions)}")
    cells = np.empty((len(subjects), len(emotions)), dtype=np.float64)
    for i, s in enumerate(subjects):
        for j, e in enumerate(emotions):
            vals = [getattr(r.chosen, parameter) for r in records
                    if r.subject_id == s and r.target_emotion == e]
            if not vals:
                raise InsufficientDataError(
                    f"subject {s!r} has no record for emotion {e.value!r}")
            cells[i, j] = float(np.mean(vals))
    return cells, subjects, emotions


def rm_anova_cells(cells: np.ndarray) -> Tuple[float, float, float]:
    """One-way within-subject ANOVA on an (n, k) cell matrix.

    Returns (F, p, partial eta^2) with emotion as the within-subject factor
    and the subject-by-emotion residual as the error term.
    """
    n, k = cells.shape
    grand = cells.mean()
    emo_means = cells.mean(axis=0)
    subj_means = cells.mean(axis=1)
    ss_emotion = n * float(((emo_means - grand) ** 2).sum())
    resid = cells - subj_means[:, None] - emo_means[None, :] + grand
    ss_error = float((resid ** 2).sum())
    # guard against float dust: data constant across emotions must give F=0
    scale = float((cells * cells).sum())
    if ss_emotion <= 1e-12 * max(scale, 1e-300):
        return 0.0, 1.0, 0.0
    df_e = k - 1
    df_err = (k - 1) * (n - 1)
    f_stat = (ss_emotion / df_e) / (ss_error / df_err)
    p = float(sps.f.sf(f_stat, df_e, df_err))
    eta2 = ss_emotion / (ss_emotion + ss_error)
    return f_stat, p, eta2


def rm_anova(records: Sequence[CalibrationRecord], parameter: str) -> AnovaResult:
    """Repeated-measures ANOVA of one control parameter across emotions."""
    cells, _, _ = _cell_means(records, parameter)
    f_stat, p, eta2 = rm_anova_cells(cells)
    return AnovaResult(parameter=parameter, f_stat=f_stat, p_value=p,
                       eta2=eta2, label=effect_size_class(eta2))


# ---------------------------------------------------------------------------
# preset calibration

def calibrate_presets(records: Sequence[CalibrationRecord]) -> List[EmotionPreset]:
    """Aggregate chosen vectors into presets.

    Per emotion and per parameter: median across per-subject means, rounded
    to 2 decimals.  Only emotions present in the records appear.
    """
    if not records:
        raise InsufficientDataError("no calibration records")
    emotions = sorted({r.target_emotion for r in records}, key=lambda e: e.value)
    presets = []
    for e in emotions:
        sub = [r for r in records if r.target_emotion == e]
        subjects = sorted({r.subject_id for r in sub})
        values = {}
        for name in ControlVector.ORDER:
            per_subject = [
                float(np.mean([getattr(r.chosen, name) for r in sub
                               if r.subject_id == s]))
                for s in subjects
            ]
            values[name] = round(float(np.median(per_subject)), 2)
        presets.append(EmotionPreset(emotion=e, vector=ControlVector(**values)))
    return presets


# ---------------------------------------------------------------------------
# A/B tally

@dataclass(frozen=True)
class ABTallyRow:
    condition: str  # "correct" | "wrong"
    n: int
    prefer_emotion: int
    prefer_neutral: int
    pct_emotion: int
    pct_neutral: int
    p_value: float


@dataclass(frozen=True)
class ABTally:
    rows: Tuple[ABTallyRow, ...]


def _pct_pair(a: int, b: int) -> Tuple[int, int]:
    """Round-half-up percentages that sum to exactly 100.

    Any rounding residual is absorbed by the larger cell.
    """
    n = a + b
    pa = math.floor(100.0 * a / n + 0.5)
    pb = math.floor(100.0 * b / n + 0.5)
    if pa + pb != 100:
        if pa >= pb:
            pa = 100 - pb
        else:
            pb = 100 - pa
    return pa, pb


def ab_tally(records: Sequence[ABRecord]) -> ABTally:
    """Preference table: {correct, wrong} x {prefer emotion, prefer neutral}.

    Each row carries raw counts, integer percentages summing to 100, and a
    two-sided exact binomial p-value against 50%.
    """
    if not records:
        raise InsufficientDataError("no A/B records")
    rows = []
    for condition, flag in (("correct", True), ("wrong", False)):
        sub = [r for r in records if r.is_correct_emotion == flag]
        if not sub:
            continue
        emo = sum(1 for r in sub if r.choice == "emotion_side")
        neu = len(sub) - emo
        pe, pn = _pct_pair(emo, neu)
        p = float(sps.binomtest(emo, len(sub), 0.5).pvalue)
        rows.append(ABTallyRow(condition=condition, n=len(sub),
                               prefer_emotion=emo, prefer_neutral=neu,
                               pct_emotion=pe, pct_neutral=pn, p_value=p))
    return ABTally(rows=tuple(rows))


# ---------------------------------------------------------------------------
# human-readable reports

def format_anova_table(results: Sequence[AnovaResult]) -> str:
    lines = [f"{'parameter':<10} {'F':>10} {'p':>12} {'eta2':>8}  effect"]
    for r in results:
        lines.append(f"{r.parameter:<10} {r.f_stat:>10.3f} {r.p_value:>12.3e} "
                     f"{r.eta2:>8.3f}  {r.label}")
    return "\n".join(lines)


def format_preset_table(presets: Sequence[EmotionPreset]) -> str:
    lines = [f"{'emotion':<8} " + " ".join(f"{n:>9}" for n in ControlVector.ORDER)]
    for p in presets:
        vals = " ".join(f"{getattr(p.vector, n):>9.2f}" for n in ControlVector.ORDER)
        lines.append(f"{p.emotion.value:<8} {vals}")
    return "\n".join(lines)


def format_ab_table(tally: ABTally) -> str:
    lines = [f"{'condition':<10} {'n':>5} {'emotion':>9} {'neutral':>9} "
             f"{'%emo':>5} {'%neu':>5} {'p(binom)':>10}"]
    for r in tally.rows:
        lines.append(f"{r.condition:<10} {r.n:>5} {r.prefer_emotion:>9} "
                     f"{r.prefer_neutral:>9} {r.pct_emotion:>5} {r.pct_neutral:>5} "
                     f"{r.p_value:>10.3e}")
    return "\n".join(lines)
