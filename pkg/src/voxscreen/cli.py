"""Command-line entry point: ``voxscreen {extract,optimize,screen,agree,report,synth}``.

Exit codes: 0 clean run, 2 partial extraction failures, 1 fatal error.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import pipeline
from .config import AnalysisConfig
from .errors import VoxScreenError
from .features import FEATURE_KINDS
from .lab import RECIPES

log = logging.getLogger("voxscreen")


def _features(s: str):
    kinds = tuple(k.strip() for k in s.split(",") if k.strip())
    bad = [k for k in kinds if k not in FEATURE_KINDS]
    if bad or not kinds:
        raise argparse.ArgumentTypeError(f"features must be drawn from {FEATURE_KINDS}")
    return kinds


def _reported(s: str):
    # TAG:CATEGORY=PERCENT, e.g. wavernn:good=84.04
    try:
        key, pct = s.split("=")
        tag, cat = key.split(":")
        return (tag, cat.lower()), float(pct)
    except ValueError:
        raise argparse.ArgumentTypeError("expected TAG:CATEGORY=PERCENT")


def get_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="voxscreen", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract f0/HNR/VTL for every manifest pair")
    p.add_argument("--manifest", required=True)
    p.add_argument("--config", help="JSON file of analysis parameters")
    p.add_argument("--out", required=True, help="features CSV")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("optimize", help="fit asymmetric threshold bands")
    p.add_argument("--features-file", required=True)
    p.add_argument("--vocoder-tag", help="fit only this tag (default: every tag)")
    p.add_argument("--features", type=_features, default=FEATURE_KINDS)
    p.add_argument("--out", required=True, help="band profile JSON")

    p = sub.add_parser("screen", help="classify pairs with a band profile")
    p.add_argument("--features-file", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--features", type=_features, default=FEATURE_KINDS)
    p.add_argument("--rule", default="any", choices=pipeline.RULES)
    p.add_argument("--out", required=True, help="decisions CSV")

    p = sub.add_parser("agree", help="rater consensus and classifier flows")
    p.add_argument("--manifest", required=True)
    p.add_argument("--decisions")
    p.add_argument("--reported", type=_reported, action="append", default=[],
                   help="published percentage to check, TAG:CATEGORY=PERCENT")
    p.add_argument("--out", required=True)

    p = sub.add_parser("report", help="evaluation report, scatter data and flows")
    p.add_argument("--decisions", required=True)
    p.add_argument("--features-file", required=True)
    p.add_argument("--manifest")
    p.add_argument("--profile")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("synth", help="render a labelled synthetic corpus")
    p.add_argument("--recipe", default="mixed", choices=RECIPES)
    p.add_argument("--n-good", type=int, default=20)
    p.add_argument("--n-bad", type=int, default=20)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--raters", type=int, default=0, help="simulated raters per sample")
    p.add_argument("--vocoder-tag", default="synthetic")
    p.add_argument("--sample-rate", type=int, default=16000)
    p.add_argument("--duration", type=float, default=0.6)
    p.add_argument("--out", required=True, help="output directory")
    return parser


def run(args) -> int:
    if args.command == "extract":
        cfg = AnalysisConfig.from_json(args.config) if args.config else AnalysisConfig()
        res = pipeline.cmd_extract(args.manifest, args.out, cfg, args.workers)
        log.info("extracted %d pairs, %d failures", res.n_rows, len(res.failures))
        return res.exit_code
    if args.command == "optimize":
        pipeline.cmd_optimize(args.features_file, args.out, args.vocoder_tag, args.features)
    elif args.command == "screen":
        pipeline.cmd_screen(args.features_file, args.profile, args.out, args.rule, args.features)
    elif args.command == "agree":
        pipeline.cmd_agree(args.manifest, args.out, args.decisions, dict(args.reported))
    elif args.command == "report":
        pipeline.cmd_report(args.decisions, args.features_file, args.out, args.manifest, args.profile)
    elif args.command == "synth":
        pipeline.cmd_synth(args.out, args.recipe, args.n_good, args.n_bad, args.seed, args.raters,
                           args.vocoder_tag, args.sample_rate, args.duration)
    return 0


def main(argv=None) -> int:
    args = get_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except (VoxScreenError, OSError, ValueError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
