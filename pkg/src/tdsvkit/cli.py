"""Command-line interface.

Four batch subcommands wire the pipeline together:

    simulate   seeded synthetic dataset -> TSV files
    score      trials + enrollmap + embeddings + transcripts -> score file
    evaluate   score file + labeled trials -> min-DCF / EER report
    det        score file + labeled trials -> DET points TSV

Any toolkit error prints a single machine-parseable stderr line
`error=<ClassName>: <detail>` and exits 1; OS-level file problems report as
`error=IoError: ...`. Reports go to stdout as stable key=value lines.
"""

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from typing import Optional, Tuple

from .core import TrialLabel
from .errors import ConfigInvalid, TdsvError, UnlabeledRecords
from .metrics import SUBSETS, DcfParams, SubsetMode, det_points, eer, min_dcf, select_subset
from .scoring import build_enrollment, score_all
from .synth import SimConfig, SpaceSpec, gen_dataset
from .textgate import GateConfig
from . import tsvio


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings for one scoring run."""

    spaces: Tuple[Tuple[str, str], ...]  # (name, embeddings path) in declared order
    trials_path: str
    enrollmap_path: str
    phrases_path: str
    transcripts_path: str
    out_path: str
    gate: GateConfig
    strict: bool = True


def _parse_space_args(pairs) -> Tuple[Tuple[str, str], ...]:
    """Each --embeddings argument is '<space>=<path>'; order is the declared
    fusion order."""
    spaces = []
    seen = set()
    for pair in pairs:
        name, sep, path = pair.partition("=")
        if not sep or not name or not path:
            raise ConfigInvalid(
                f"--embeddings expects '<space>=<path>', got {pair!r}"
            )
        if name in seen:
            raise ConfigInvalid(f"--embeddings declares space '{name}' twice")
        seen.add(name)
        spaces.append((name, path))
    return tuple(spaces)


def _load_labeled_scores(scores_path, trials_path) -> list:
    """Join a score file with the labels from a trial list."""
    records = tsvio.parse_scores(scores_path)
    labels = {}
    for trial in tsvio.parse_trials(trials_path):
        labels[trial.trial_id] = trial.label
    labeled = []
    for rec in records:
        if rec.trial_id not in labels:
            raise UnlabeledRecords(
                f"score record '{rec.trial_id}' has no matching trial"
            )
        label = labels[rec.trial_id]
        if label is None:
            raise UnlabeledRecords(f"trial '{rec.trial_id}' carries no label")
        labeled.append(dataclasses.replace(rec, label=label))
    return labeled


def cmd_score(args) -> int:
    cfg = RunConfig(
        spaces=_parse_space_args(args.embeddings),
        trials_path=args.trials,
        enrollmap_path=args.enrollmap,
        phrases_path=args.phrases,
        transcripts_path=args.transcripts,
        out_path=args.out,
        gate=GateConfig(args.cer_threshold, args.punitive_score),
        strict=args.strict,
    )
    trials = tsvio.parse_trials(cfg.trials_path)
    entries = tsvio.parse_enrollmap(cfg.enrollmap_path)
    phrases = tsvio.parse_phrases(cfg.phrases_path)
    transcripts = tsvio.parse_transcripts(cfg.transcripts_path)
    space_order = [name for name, _ in cfg.spaces]
    tables = {}
    for name, path in cfg.spaces:
        tables[name], _ = tsvio.parse_embeddings(path)

    enrollments = {}
    for entry in entries.values():
        try:
            enrollments[entry.model_id] = build_enrollment(entry, tables, space_order)
        except TdsvError:
            if cfg.strict:
                raise
            # lenient: model left out; its trials get skipped with a reason

    run = score_all(
        trials,
        enrollments,
        tables,
        transcripts,
        phrases,
        cfg.gate,
        space_order,
        strict=cfg.strict,
    )
    tsvio.write_scores(run.records, cfg.out_path)
    for trial_id, reason in run.skipped:
        print(f"skip {trial_id}: {reason}", file=sys.stderr)
    print(f"scored={len(run.records)}")
    print(f"skipped={len(run.skipped)}")
    return 0


def cmd_evaluate(args) -> int:
    labeled = _load_labeled_scores(args.scores, args.trials)
    mode: SubsetMode = SUBSETS[args.subset]
    params = DcfParams(args.c_miss, args.c_fa, args.p_target)
    kept = select_subset(labeled, mode)
    mdcf, threshold = min_dcf(kept, params)
    eer_value = eer(kept)

    by_label = {name: 0 for name in ("TC", "TW", "IC", "IW")}
    for rec in labeled:
        by_label[rec.label.name] += 1
    n_target = sum(1 for r in kept if r.label.is_target)
    report = [
        ("subset", mode.name),
        ("n_total", len(labeled)),
        ("n_tc", by_label["TC"]),
        ("n_tw", by_label["TW"]),
        ("n_ic", by_label["IC"]),
        ("n_iw", by_label["IW"]),
        ("n_target", n_target),
        ("n_nontarget", len(kept) - n_target),
        ("min_dcf", f"{mdcf:.6f}"),
        ("argmin_threshold", f"{threshold:.6f}"),
        ("eer", f"{eer_value:.6f}"),
        ("skipped", len(labeled) - len(kept)),
    ]
    for key, value in report:
        print(f"{key}={value}")
    if args.json is not None:
        payload = dict(report)
        payload["min_dcf"] = mdcf
        payload["argmin_threshold"] = threshold
        payload["eer"] = eer_value
        with open(args.json, "w", encoding="utf-8", newline="\n") as f:
            json.dump(payload, f, indent=2)
            f.write("\n")
    return 0


def cmd_det(args) -> int:
    labeled = _load_labeled_scores(args.scores, args.trials)
    kept = select_subset(labeled, SUBSETS[args.subset])
    points = det_points(kept)
    tsvio.write_det(points, args.out)
    print(f"points={len(points)}")
    return 0


def _parse_space_spec(text: str) -> SpaceSpec:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigInvalid(f"--space expects '<name>:<dim>:<sigma>', got {text!r}")
    name, dim_s, sigma_s = parts
    try:
        dim = int(dim_s)
        sigma = float(sigma_s)
    except ValueError:
        raise ConfigInvalid(
            f"--space expects integer dim and float sigma, got {text!r}"
        ) from None
    return SpaceSpec(name, dim, sigma)


def cmd_simulate(args) -> int:
    kwargs = {
        "n_speakers": args.n_speakers,
        "n_phrases": args.n_phrases,
        "trials_per_type": {label: args.trials_per_type for label in TrialLabel},
        "transcript_error_rate_correct": args.err_correct,
        "transcript_error_rate_wrong": args.err_wrong,
        "master_seed": args.seed,
    }
    if args.space:
        kwargs["spaces"] = tuple(_parse_space_spec(s) for s in args.space)
    cfg = SimConfig(**kwargs)
    ds = gen_dataset(cfg)
    tsvio.write_dataset(ds, args.out)
    print(f"speakers={cfg.n_speakers}")
    print(f"phrases={cfg.n_phrases}")
    print(f"models={len(ds.enroll_entries)}")
    print(f"trials={len(ds.trials)}")
    print(f"spaces={len(cfg.spaces)}")
    return 0


def _add_subset_flags(sub) -> None:
    sub.add_argument("--scores", required=True, help="score file from the score command")
    sub.add_argument("--trials", required=True, help="labeled trial list for the join")
    sub.add_argument(
        "--subset",
        choices=sorted(SUBSETS),
        default="all",
        help="which trial labels enter the evaluation",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tdsvkit",
        description="Text-dependent speaker verification scoring and evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser(
        "score", help="gate transcripts and score trials against enrollments"
    )
    p_score.add_argument("--trials", required=True)
    p_score.add_argument("--enrollmap", required=True)
    p_score.add_argument("--phrases", required=True)
    p_score.add_argument("--transcripts", required=True)
    p_score.add_argument(
        "--embeddings",
        action="append",
        required=True,
        metavar="SPACE=PATH",
        help="per-space embedding file; repeat to declare the fusion order",
    )
    p_score.add_argument("--cer-threshold", type=float, default=0.3)
    p_score.add_argument("--punitive-score", type=float, default=-1.0)
    mode = p_score.add_mutually_exclusive_group()
    mode.add_argument(
        "--strict",
        dest="strict",
        action="store_true",
        default=True,
        help="abort on the first broken reference (default)",
    )
    mode.add_argument(
        "--lenient",
        dest="strict",
        action="store_false",
        help="skip broken trials and report them on stderr",
    )
    p_score.add_argument("--out", required=True)
    p_score.set_defaults(func=cmd_score)

    p_eval = sub.add_parser(
        "evaluate", help="min-DCF and EER report from a labeled score file"
    )
    _add_subset_flags(p_eval)
    p_eval.add_argument("--c-miss", type=float, default=10.0)
    p_eval.add_argument("--c-fa", type=float, default=1.0)
    p_eval.add_argument("--p-target", type=float, default=0.01)
    p_eval.add_argument("--json", default=None, help="also write the report as JSON")
    p_eval.set_defaults(func=cmd_evaluate)

    p_det = sub.add_parser("det", help="DET operating points from a score file")
    _add_subset_flags(p_det)
    p_det.add_argument("--out", required=True)
    p_det.set_defaults(func=cmd_det)

    p_sim = sub.add_parser("simulate", help="generate a seeded synthetic dataset")
    p_sim.add_argument("--seed", type=int, default=0, help="master seed")
    p_sim.add_argument("--n-speakers", type=int, default=50)
    p_sim.add_argument("--n-phrases", type=int, default=10)
    p_sim.add_argument(
        "--space",
        action="append",
        metavar="NAME:DIM:SIGMA",
        help="embedding space spec; repeatable (default: alpha/beta, 64, 0.05)",
    )
    p_sim.add_argument(
        "--trials-per-type", type=int, default=10, help="trial count per label"
    )
    p_sim.add_argument("--err-correct", type=float, default=0.0)
    p_sim.add_argument("--err-wrong", type=float, default=0.0)
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TdsvError as exc:
        print(f"error={type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error=IoError: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
