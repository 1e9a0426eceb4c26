"""Text-dependent speaker verification scoring and evaluation toolkit.

Phrase gating by character error rate with punitive scoring, multi-space
embedding fusion with cosine scoring, SRE08-style detection metrics, TSV
pipeline formats, and a seeded synthetic dataset generator.
"""

from .core import EPS, Trial, TrialLabel, as_embedding, cosine, l2_normalize
from .errors import (
    BadHeader,
    BadLabel,
    BadRepCount,
    ConfigInvalid,
    DegenerateVector,
    DimMismatch,
    DimensionMismatch,
    DuplicateId,
    EmptyReference,
    EmptySide,
    MalformedLine,
    MissingModel,
    MissingPhrase,
    MissingSpace,
    MissingTranscript,
    NoNonTargets,
    NoTargets,
    ParseError,
    TdsvError,
    UnlabeledRecords,
    UnparseableFloat,
)
from .metrics import (
    ALL,
    SUBSETS,
    TC_VS_IC,
    TC_VS_IW,
    TC_VS_TW,
    DcfParams,
    ErrorRates,
    SubsetMode,
    dcf,
    det_points,
    eer,
    min_dcf,
    select_subset,
    sweep,
)
from .scoring import (
    REPS_PER_MODEL,
    EnrollEntry,
    EnrollmentModel,
    FusedEmbedding,
    ScoreRecord,
    ScoreRun,
    build_enrollment,
    enroll,
    fuse,
    score_all,
    score_trial,
)
from .synth import (
    SimConfig,
    SpaceSpec,
    SyntheticDataset,
    corrupt_transcript,
    derive_seed,
    gen_dataset,
    gen_speakers,
    gen_utterance,
    validate_labels,
)
from .textgate import (
    GateConfig,
    GateOutcome,
    Phrase,
    Transcript,
    cer,
    edit_distance,
    gate,
    normalize_text,
)

__version__ = "0.1.0"

__all__ = [
    "EPS",
    "Trial",
    "TrialLabel",
    "as_embedding",
    "cosine",
    "l2_normalize",
    "TdsvError",
    "DegenerateVector",
    "DimensionMismatch",
    "EmptyReference",
    "MissingSpace",
    "MissingPhrase",
    "MissingTranscript",
    "MissingModel",
    "DuplicateId",
    "NoTargets",
    "NoNonTargets",
    "UnlabeledRecords",
    "EmptySide",
    "ConfigInvalid",
    "ParseError",
    "BadHeader",
    "DimMismatch",
    "UnparseableFloat",
    "BadRepCount",
    "BadLabel",
    "MalformedLine",
    "GateConfig",
    "GateOutcome",
    "Phrase",
    "Transcript",
    "normalize_text",
    "edit_distance",
    "cer",
    "gate",
    "REPS_PER_MODEL",
    "EnrollEntry",
    "EnrollmentModel",
    "FusedEmbedding",
    "ScoreRecord",
    "ScoreRun",
    "enroll",
    "fuse",
    "build_enrollment",
    "score_trial",
    "score_all",
    "DcfParams",
    "ErrorRates",
    "SubsetMode",
    "ALL",
    "TC_VS_TW",
    "TC_VS_IC",
    "TC_VS_IW",
    "SUBSETS",
    "dcf",
    "sweep",
    "min_dcf",
    "eer",
    "det_points",
    "select_subset",
    "SimConfig",
    "SpaceSpec",
    "SyntheticDataset",
    "derive_seed",
    "gen_speakers",
    "gen_utterance",
    "corrupt_transcript",
    "gen_dataset",
    "validate_labels",
    "__version__",
]
