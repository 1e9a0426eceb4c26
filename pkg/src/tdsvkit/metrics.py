"""Detection metrics over labeled score sets.

Implements the SRE08-style detection cost function, its normalized minimum
over decision thresholds, equal error rate, DET operating points, and trial
subset selection. Candidate thresholds are the midpoints between adjacent
distinct scores plus one sentinel below the minimum and one above the
maximum; the decision rule is accept iff score >= threshold. Along ascending
thresholds p_miss is non-decreasing and p_fa is non-increasing.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .core import TrialLabel
from .errors import (
    ConfigInvalid,
    EmptySide,
    NoNonTargets,
    NoTargets,
    UnlabeledRecords,
)


@dataclass(frozen=True)
class DcfParams:
    """Detection cost weights. Defaults give norm_const 0.1 exactly."""

    c_miss: float = 10.0
    c_fa: float = 1.0
    p_target: float = 0.01

    def __post_init__(self):
        if not (math.isfinite(self.c_miss) and self.c_miss > 0):
            raise ConfigInvalid(f"c_miss must be finite and > 0, got {self.c_miss}")
        if not (math.isfinite(self.c_fa) and self.c_fa > 0):
            raise ConfigInvalid(f"c_fa must be finite and > 0, got {self.c_fa}")
        if not (0.0 < self.p_target < 1.0):
            raise ConfigInvalid(f"p_target must lie in (0, 1), got {self.p_target}")

    @property
    def norm_const(self) -> float:
        """Cost of the better of the two trivial systems (always a recompute,
        so it can never go stale against the primaries)."""
        return min(self.c_miss * self.p_target, self.c_fa * (1.0 - self.p_target))


@dataclass(frozen=True)
class ErrorRates:
    """One operating point of the threshold sweep."""

    threshold: float
    p_miss: float
    p_fa: float
    n_target: int
    n_nontarget: int


@dataclass(frozen=True)
class SubsetMode:
    """Which trial labels enter the evaluation. keep=None keeps everything."""

    name: str
    keep: Optional[frozenset] = None


ALL = SubsetMode("all")
TC_VS_TW = SubsetMode("tc-vs-tw", frozenset({TrialLabel.TC, TrialLabel.TW}))
TC_VS_IC = SubsetMode("tc-vs-ic", frozenset({TrialLabel.TC, TrialLabel.IC}))
TC_VS_IW = SubsetMode("tc-vs-iw", frozenset({TrialLabel.TC, TrialLabel.IW}))

SUBSETS = {m.name: m for m in (ALL, TC_VS_TW, TC_VS_IC, TC_VS_IW)}


def dcf(rates: ErrorRates, params: DcfParams) -> Tuple[float, float]:
    """Weighted detection cost of one operating point: (raw, normalized)."""
    raw = (
        params.c_miss * rates.p_miss * params.p_target
        + params.c_fa * rates.p_fa * (1.0 - params.p_target)
    )
    return raw, raw / params.norm_const


def _split_scores(records) -> Tuple[np.ndarray, np.ndarray]:
    targets = []
    nontargets = []
    for rec in records:
        if rec.label is None:
            raise UnlabeledRecords(f"record '{rec.trial_id}' has no label")
        if rec.label.is_target:
            targets.append(rec.score)
        else:
            nontargets.append(rec.score)
    if not targets:
        raise NoTargets("score set has no target (TC) records")
    if not nontargets:
        raise NoNonTargets("score set has no non-target records")
    return np.asarray(targets, dtype=np.float64), np.asarray(nontargets, dtype=np.float64)


def sweep(records: Sequence) -> list:
    """Error rates at every threshold that can change the confusion counts.

    Output is sorted ascending by threshold, from accept-everything
    (p_miss=0, p_fa=1) to reject-everything (p_miss=1, p_fa=0).
    """
    target_scores, nontarget_scores = _split_scores(records)
    distinct = np.unique(np.concatenate([target_scores, nontarget_scores]))
    midpoints = (distinct[:-1] + distinct[1:]) / 2.0
    thresholds = np.concatenate(
        [[distinct[0] - 1.0], midpoints, [distinct[-1] + 1.0]]
    )
    targets_sorted = np.sort(target_scores)
    nontargets_sorted = np.sort(nontarget_scores)
    n_target = int(target_scores.size)
    n_nontarget = int(nontarget_scores.size)
    # accept iff score >= threshold: misses are targets strictly below,
    # false alarms are non-targets at or above.
    misses = np.searchsorted(targets_sorted, thresholds, side="left")
    false_alarms = n_nontarget - np.searchsorted(
        nontargets_sorted, thresholds, side="left"
    )
    return [
        ErrorRates(
            threshold=float(t),
            p_miss=int(m) / n_target,
            p_fa=int(f) / n_nontarget,
            n_target=n_target,
            n_nontarget=n_nontarget,
        )
        for t, m, f in zip(thresholds, misses, false_alarms)
    ]


def min_dcf(records: Sequence, params: Optional[DcfParams] = None) -> Tuple[float, float]:
    """Minimum normalized detection cost over the sweep.

    Returns (normalized_min, argmin_threshold); ties on cost resolve to the
    smallest threshold.
    """
    if params is None:
        params = DcfParams()
    best_value = math.inf
    best_threshold = math.nan
    for rates in sweep(records):
        _, normalized = dcf(rates, params)
        if normalized < best_value:
            best_value = normalized
            best_threshold = rates.threshold
    return best_value, best_threshold


def eer(records: Sequence) -> float:
    """Equal error rate of the sweep.

    If some operating point has p_miss == p_fa exactly, return that value.
    Otherwise linearly interpolate across the adjacent pair of points whose
    miss/false-alarm difference changes sign; if no crossing segment exists,
    fall back to (p_miss + p_fa)/2 at the point minimizing |p_miss - p_fa|.
    """
    points = sweep(records)
    for pt in points:
        if pt.p_miss == pt.p_fa:
            return pt.p_miss
    prev = points[0]
    for cur in points[1:]:
        d_prev = prev.p_miss - prev.p_fa
        d_cur = cur.p_miss - cur.p_fa
        if d_prev < 0.0 < d_cur:
            m1, f1 = prev.p_miss, prev.p_fa
            m2, f2 = cur.p_miss, cur.p_fa
            alpha = (f1 - m1) / ((m2 - m1) + (f1 - f2))
            return m1 + alpha * (m2 - m1)
        prev = cur
    best = min(points, key=lambda pt: abs(pt.p_miss - pt.p_fa))
    return (best.p_miss + best.p_fa) / 2.0


def det_points(records: Sequence) -> list:
    """Sweep operating points with consecutive duplicate (p_miss, p_fa)
    pairs dropped; ordered by threshold, ready for external plotting."""
    points = sweep(records)
    out = [points[0]]
    for pt in points[1:]:
        if pt.p_miss != out[-1].p_miss or pt.p_fa != out[-1].p_fa:
            out.append(pt)
    return out


def select_subset(records: Sequence, mode: SubsetMode) -> list:
    """Filter records to the labels the mode keeps, preserving order.

    Every record must be labeled, and the survivors must include at least
    one target and one non-target.
    """
    kept = []
    n_target = 0
    n_nontarget = 0
    for rec in records:
        if rec.label is None:
            raise UnlabeledRecords(f"record '{rec.trial_id}' has no label")
        if mode.keep is not None and rec.label not in mode.keep:
            continue
        kept.append(rec)
        if rec.label.is_target:
            n_target += 1
        else:
            n_nontarget += 1
    if n_target == 0:
        raise EmptySide(f"subset '{mode.name}' keeps no target (TC) records")
    if n_nontarget == 0:
        raise EmptySide(f"subset '{mode.name}' keeps no non-target records")
    return kept
