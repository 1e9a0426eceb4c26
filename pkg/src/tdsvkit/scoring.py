"""Enrollment models, embedding fusion, and trial scoring.

An enrollment model is built from three repetitions of one phrase by one
speaker: per embedding space, the repetitions are unit-normalized, averaged,
and re-normalized. Multiple model spaces are fused by concatenating the
per-space unit vectors in a declared order; the cosine of two such fused
vectors equals the mean of the per-space cosines. A trial's final score is
that cosine if the phrase gate passes, else the punitive floor.
"""

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .core import Trial, TrialLabel, as_embedding, check_token, cosine, l2_normalize
from .errors import (
    DimensionMismatch,
    DuplicateId,
    MissingModel,
    MissingPhrase,
    MissingSpace,
    MissingTranscript,
    TdsvError,
)
from .textgate import GateConfig, GateOutcome, Phrase, Transcript, gate

REPS_PER_MODEL = 3


@dataclass(frozen=True)
class EnrollEntry:
    """Raw enrollmap record: which repetitions build which model."""

    model_id: str
    phrase_id: str
    rep_ids: tuple

    def __post_init__(self):
        check_token(self.model_id, "model_id")
        check_token(self.phrase_id, "phrase_id")
        if len(self.rep_ids) != REPS_PER_MODEL:
            raise ValueError(
                f"model '{self.model_id}' needs exactly {REPS_PER_MODEL} "
                f"repetition ids, got {len(self.rep_ids)}"
            )
        for rid in self.rep_ids:
            check_token(rid, "rep_id")


@dataclass(frozen=True)
class EnrollmentModel:
    """Speaker model: one unit-norm centroid per embedding space."""

    model_id: str
    phrase_id: str
    rep_ids: tuple
    centroid_per_space: Mapping[str, np.ndarray]

    def __post_init__(self):
        if len(self.rep_ids) != REPS_PER_MODEL:
            raise ValueError(
                f"model '{self.model_id}' needs exactly {REPS_PER_MODEL} "
                f"repetition ids, got {len(self.rep_ids)}"
            )


@dataclass(frozen=True)
class FusedEmbedding:
    """Concatenation of per-space unit vectors in declared space order."""

    values: np.ndarray
    dims: tuple


@dataclass(frozen=True)
class ScoreRecord:
    """Final trial score with its gate outcome; label carried for evaluation."""

    trial_id: str
    score: float
    gate: GateOutcome
    label: Optional[TrialLabel] = None


@dataclass
class ScoreRun:
    """Batch scoring result. skipped holds (trial_id, reason) pairs and is
    only populated in lenient mode."""

    records: list = field(default_factory=list)
    skipped: list = field(default_factory=list)


def enroll(reps: Sequence) -> np.ndarray:
    """Aggregate repetition embeddings into a unit-norm speaker centroid.

    normalize(mean(normalize(rep_i))): scale-invariant per repetition and
    permutation-invariant up to float summation order.
    """
    if not reps:
        raise DimensionMismatch("enroll requires at least one repetition")
    units = [l2_normalize(r) for r in reps]
    dims = {u.shape[0] for u in units}
    if len(dims) > 1:
        raise DimensionMismatch(f"repetitions have mixed dims {sorted(dims)}")
    return l2_normalize(np.mean(units, axis=0))


def fuse(per_space: Sequence) -> FusedEmbedding:
    """Unit-normalize each space's vector and concatenate in the given order.

    Every block carries weight 1.0; any uniform positive weight yields the
    same cosines, and for two spaces cosine(fused, fused') is the mean of
    the per-space cosines.
    """
    if not per_space:
        raise ValueError("fuse requires at least one space")
    blocks = [l2_normalize(v) for v in per_space]
    return FusedEmbedding(
        values=np.concatenate(blocks),
        dims=tuple(b.shape[0] for b in blocks),
    )


def build_enrollment(
    entry: EnrollEntry,
    embeddings_by_space: Mapping[str, Mapping[str, np.ndarray]],
    space_order: Sequence[str],
) -> EnrollmentModel:
    """Compute per-space centroids for one enrollmap entry."""
    centroids = {}
    for space in space_order:
        table = embeddings_by_space.get(space)
        if table is None:
            raise MissingSpace(f"no embeddings for declared space '{space}'")
        reps = []
        for rid in entry.rep_ids:
            vec = table.get(rid)
            if vec is None:
                raise MissingSpace(
                    f"repetition '{rid}' of model '{entry.model_id}' "
                    f"missing from space '{space}'"
                )
            reps.append(vec)
        centroids[space] = enroll(reps)
    return EnrollmentModel(
        model_id=entry.model_id,
        phrase_id=entry.phrase_id,
        rep_ids=tuple(entry.rep_ids),
        centroid_per_space=centroids,
    )


def score_trial(
    trial: Trial,
    enrollment: EnrollmentModel,
    test_per_space: Mapping[str, np.ndarray],
    hyp: Optional[Transcript],
    phrases: Mapping[str, Phrase],
    cfg: GateConfig,
    space_order: Sequence[str],
) -> ScoreRecord:
    """Score one trial: punitive floor on gate failure, fused cosine otherwise.

    Enrollment and test must cover every space in space_order; the same
    order is applied to both sides so blocks line up.
    """
    phrase = phrases.get(enrollment.phrase_id)
    if phrase is None:
        raise MissingPhrase(
            f"phrase '{enrollment.phrase_id}' of model '{enrollment.model_id}' "
            "not in phrase table"
        )
    if hyp is None:
        raise MissingTranscript(f"no transcript for test utterance '{trial.test_id}'")

    enr_vecs = []
    test_vecs = []
    for space in space_order:
        c = enrollment.centroid_per_space.get(space)
        if c is None:
            raise MissingSpace(
                f"model '{enrollment.model_id}' has no centroid for space '{space}'"
            )
        t = test_per_space.get(space)
        if t is None:
            raise MissingSpace(
                f"test utterance '{trial.test_id}' missing from space '{space}'"
            )
        enr_vecs.append(c)
        test_vecs.append(as_embedding(t))

    outcome = gate(hyp, phrase, cfg)
    if outcome.passed:
        score = cosine(fuse(enr_vecs).values, fuse(test_vecs).values)
    else:
        score = cfg.punitive_score
    return ScoreRecord(trial.trial_id, score, outcome, trial.label)


def score_all(
    trials: Sequence[Trial],
    enrollments: Mapping[str, EnrollmentModel],
    test_embeddings: Mapping[str, Mapping[str, np.ndarray]],
    transcripts: Mapping[str, Transcript],
    phrases: Mapping[str, Phrase],
    cfg: GateConfig,
    space_order: Sequence[str],
    strict: bool = True,
) -> ScoreRun:
    """Score every trial in input order.

    strict: abort on the first integrity error, with the offending trial id
    in the message. lenient: skip broken trials and report them in
    ScoreRun.skipped. Duplicate trial ids are an integrity error.
    """
    run = ScoreRun()
    seen = set()
    for trial in trials:
        try:
            if trial.trial_id in seen:
                raise DuplicateId(f"duplicate trial id '{trial.trial_id}'")
            seen.add(trial.trial_id)
            enrollment = enrollments.get(trial.model_id)
            if enrollment is None:
                raise MissingModel(
                    f"no enrollment model '{trial.model_id}' in enrollmap"
                )
            test_per_space = {}
            for space in space_order:
                table = test_embeddings.get(space)
                if table is None:
                    raise MissingSpace(f"no embeddings for declared space '{space}'")
                vec = table.get(trial.test_id)
                if vec is None:
                    raise MissingSpace(
                        f"test utterance '{trial.test_id}' missing from "
                        f"space '{space}'"
                    )
                test_per_space[space] = vec
            record = score_trial(
                trial,
                enrollment,
                test_per_space,
                transcripts.get(trial.test_id),
                phrases,
                cfg,
                space_order,
            )
        except TdsvError as exc:
            if strict:
                raise type(exc)(f"trial '{trial.trial_id}': {exc}") from exc
            run.skipped.append((trial.trial_id, f"{type(exc).__name__}: {exc}"))
            continue
        run.records.append(record)
    return run
