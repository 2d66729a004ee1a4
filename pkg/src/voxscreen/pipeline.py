"""File-level screening pipeline behind the command-line interface.

synth -> extract -> optimize -> screen -> report, with ``agree`` for rater
consensus. Every stage sorts by sample id before writing, so outputs are
byte-identical across runs and worker counts.
"""
from __future__ import annotations

import csv
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .agreement import RaterVotes, consensus_stats, flow_matrix, parse_votes
from .audio import decode_wav, encode_wav
from .classifier import (BAD, GOOD, REVIEW, Metrics, band_from_dict, confusion,
                         fit_to_dict, optimize_band, pair_deviations)
from .config import AnalysisConfig
from .corpus import (ManifestRow, features_row, load_features, load_manifest,
                     write_features, write_manifest)
from .errors import MissingBand, NoLabeledPairs, VoxScreenError
from .features import FEATURE_KINDS, extract_features
from .lab import build_corpus

log = logging.getLogger(__name__)

PROFILE_FORMAT = "voxscreen-band-profile/1"
RULES = ("any", "all") + FEATURE_KINDS


def dump_json(obj, path) -> None:
    with open(path, "w") as fh:
        fh.write(json.dumps(obj, indent=2, sort_keys=True, allow_nan=False))
        fh.write("\n")


def _errors_path(out_path) -> str:
    stem, _ = os.path.splitext(os.fspath(out_path))
    return stem + ".errors.csv"


# -- extract ------------------------------------------------------------------

@dataclass
class ExtractResult:
    n_rows: int
    failures: list = field(default_factory=list)  # (id, side, reason)

    @property
    def exit_code(self) -> int:
        return 2 if self.failures else 0


def _extract_one(job):
    row, cfg = job
    feats, failures = {}, []
    for side, path in (("in", row.input_path), ("out", row.output_path)):
        try:
            feats[side] = extract_features(decode_wav(path), cfg)
        except (OSError, VoxScreenError, ValueError) as exc:
            failures.append((row.id, side, f"{type(exc).__name__}: {exc}"))
    if failures:
        return None, failures
    return features_row(row.id, row.vocoder_tag, row.label, feats["in"], feats["out"]), []


def cmd_extract(manifest_path, out_path, cfg: AnalysisConfig | None = None,
                workers: int = 1) -> ExtractResult:
    """Extract input and output features for every manifest row.

    Rows whose audio cannot be read are written to ``<out>.errors.csv``
    instead of aborting the batch.
    """
    cfg = cfg or AnalysisConfig()
    rows = sorted(load_manifest(manifest_path), key=lambda r: r.id)
    jobs = [(r, cfg) for r in rows]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_extract_one, jobs, chunksize=4))
    else:
        results = [_extract_one(j) for j in jobs]
    table, failures = [], []
    for line, errs in results:
        if line is not None:
            table.append(line)
        failures.extend(errs)
    write_features(table, out_path)
    with open(_errors_path(out_path), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "side", "reason"])
        w.writerows(sorted(failures))
    for f in failures:
        log.warning("extraction failed for %s (%s): %s", *f)
    return ExtractResult(len(table), failures)


# -- optimize -----------------------------------------------------------------

def _by_tag(pairs, vocoder_tag=None):
    groups: dict = {}
    for p in pairs:
        if vocoder_tag is None or p.vocoder_tag == vocoder_tag:
            groups.setdefault(p.vocoder_tag, []).append(p)
    return dict(sorted(groups.items()))


def fit_profile(pairs, features=FEATURE_KINDS) -> dict:
    """Fitted bands and training diagnostics for one vocoder tag."""
    out = {}
    labelled = [p for p in pairs if p.human_label is not None]
    if not labelled:
        raise NoLabeledPairs("no labelled pairs")
    for kind in features:
        ids, devs, labs, review = pair_deviations(labelled, kind)
        if not ids:
            out[kind] = {"t_neg": None, "t_pos": None, "accuracy": None, "n_train": 0,
                         "n_review": len(review),
                         "warnings": [f"{kind}: no labelled pairs with this feature on both sides"],
                         "skipped": True}
            continue
        fit = optimize_band(devs, labs, kind)
        decisions = [GOOD if fit.band.accepts(d) else BAD for d in devs]
        cm = confusion(labs, decisions)
        entry = fit_to_dict(fit)
        entry.update(n_review=len(review), confusion=cm.as_dict(),
                     metrics=Metrics.from_counts(cm).as_dict())
        out[kind] = entry
    return out


def cmd_optimize(features_path, out_path, vocoder_tag: str | None = None,
                 features=FEATURE_KINDS) -> dict:
    """Fit one band profile per vocoder tag and write them as JSON."""
    groups = _by_tag(load_features(features_path), vocoder_tag)
    if not groups:
        raise NoLabeledPairs(f"no rows for vocoder tag {vocoder_tag!r}")
    doc = {"format": PROFILE_FORMAT,
           "profiles": {tag: fit_profile(pairs, features) for tag, pairs in groups.items()}}
    for tag, prof in doc["profiles"].items():
        for kind, entry in prof.items():
            for w in entry["warnings"]:
                log.warning("[%s] %s", tag, w)
    dump_json(doc, out_path)
    return doc


def load_profile(path) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format") != PROFILE_FORMAT:
        raise ValueError(f"{path}: not a band profile")
    return doc


# -- screen -------------------------------------------------------------------

def overall_verdict(decisions: dict, rule: str = "any") -> str:
    """Combine per-feature decisions.

    ``any``: bad if any feature is bad, else review if any is review.
    ``all``: bad only if every decided feature is bad and none is review.
    A feature name delegates to that feature alone.
    """
    vals = list(decisions.values())
    if rule in FEATURE_KINDS:
        return decisions[rule]
    if rule == "any":
        if BAD in vals:
            return BAD
        return REVIEW if REVIEW in vals else GOOD
    if rule == "all":
        if REVIEW in vals:
            return REVIEW
        return BAD if vals and all(v == BAD for v in vals) else GOOD
    raise ValueError(f"unknown rule {rule!r}; expected one of {RULES}")


DECISION_HEADER_TAIL = ["overall"]


def decisions_header(features=FEATURE_KINDS) -> list[str]:
    cols = ["id", "vocoder_tag", "label"]
    for k in features:
        cols += [f"d_{k}", f"decision_{k}"]
    return cols + DECISION_HEADER_TAIL


def cmd_screen(features_path, profile_path, out_path, rule: str = "any",
               features=FEATURE_KINDS) -> list[dict]:
    """Classify every pair against the band of its vocoder tag."""
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}")
    profiles = load_profile(profile_path)["profiles"]
    pairs = sorted(load_features(features_path), key=lambda p: p.id)
    rows = []
    for p in pairs:
        prof = profiles.get(p.vocoder_tag)
        if prof is None:
            raise MissingBand(f"profile has no vocoder tag {p.vocoder_tag!r}")
        row = {"id": p.id, "vocoder_tag": p.vocoder_tag, "label": p.human_label or ""}
        dec = {}
        for kind in features:
            entry = prof.get(kind)
            if entry is None or entry.get("skipped"):
                raise MissingBand(f"profile {p.vocoder_tag!r} has no {kind} band")
            band = band_from_dict(kind, entry)
            x, y = p.input_features.value(kind), p.output_features.value(kind)
            if x is None or y is None:
                row[f"d_{kind}"] = ""
                dec[kind] = REVIEW
            else:
                row[f"d_{kind}"] = repr(float(y - x))
                dec[kind] = GOOD if band.accepts(y - x) else BAD
            row[f"decision_{kind}"] = dec[kind]
        row["overall"] = overall_verdict(dec, rule)
        rows.append(row)
    header = decisions_header(features)
    with open(out_path, "w", newline="") as fh:
        w = csv.DictWriter(fh, header, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return rows


def load_decisions(path) -> list[dict]:
    with open(path, newline="") as fh:
        return sorted(csv.DictReader(fh), key=lambda r: r["id"])


# -- report -------------------------------------------------------------------

def _feature_section(rows, pairs_by_id, kind, band_entry):
    samples, labs, decs = [], [], []
    n_review = 0
    for r in rows:
        dec = r[f"decision_{kind}"]
        p = pairs_by_id.get(r["id"])
        x = p.input_features.value(kind) if p else None
        y = p.output_features.value(kind) if p else None
        samples.append({"id": r["id"], "x": x, "y": y,
                        "d": float(r[f"d_{kind}"]) if r[f"d_{kind}"] else None,
                        "label": r["label"] or None, "decision": dec})
        if dec == REVIEW:
            n_review += 1
        elif r["label"]:
            labs.append(r["label"])
            decs.append(dec)
    section = {"samples": samples, "n_review": n_review}
    if band_entry is not None:
        section["band"] = {"t_neg": band_entry.get("t_neg"), "t_pos": band_entry.get("t_pos")}
    if labs:
        cm = confusion(labs, decs)
        section["confusion"] = cm.as_dict()
        section["metrics"] = Metrics.from_counts(cm).as_dict()
    else:
        section["notice"] = "no labelled, decided samples; metrics omitted"
    return section


def _write_scatter(path, samples):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "x", "y", "d", "label", "decision"])
        for s in samples:
            w.writerow([s["id"], "" if s["x"] is None else repr(s["x"]),
                        "" if s["y"] is None else repr(s["y"]),
                        "" if s["d"] is None else repr(s["d"]), s["label"] or "", s["decision"]])


def consensus_block(manifest_rows) -> dict | None:
    votes = [RaterVotes(r.id, parse_votes(r.rater_votes)) for r in manifest_rows if r.rater_votes]
    if not votes:
        return None
    return consensus_stats(sorted(votes, key=lambda v: v.sample_id)).as_dict()


def cmd_report(decisions_path, features_path, out_dir, manifest_path=None,
               profile_path=None) -> dict:
    """Write ``report.json`` plus scatter CSVs and flow documents to ``out_dir``."""
    os.makedirs(out_dir, exist_ok=True)
    rows = load_decisions(decisions_path)
    pairs_by_id = {p.id: p for p in load_features(features_path)}
    profiles = load_profile(profile_path)["profiles"] if profile_path else {}
    manifest = load_manifest(manifest_path) if manifest_path else []
    kinds = [k for k in FEATURE_KINDS if rows and f"decision_{k}" in rows[0]]
    report = {"notices": [], "vocoders": {}}
    if not profile_path:
        report["notices"].append("no profile given; band sections omitted")

    tags = sorted({r["vocoder_tag"] for r in rows})
    for tag in tags:
        trows = [r for r in rows if r["vocoder_tag"] == tag]
        block = {"n_samples": len(trows), "features": {}, "flows": {}}
        for kind in kinds:
            sec = _feature_section(trows, pairs_by_id, kind, profiles.get(tag, {}).get(kind))
            _write_scatter(os.path.join(out_dir, f"scatter_{tag}_{kind}.csv"), sec["samples"])
            block["features"][kind] = sec
        for a, b in combinations(kinds, 2):
            decided = [r for r in trows if REVIEW not in (r[f"decision_{a}"], r[f"decision_{b}"])]
            fm = flow_matrix({r["id"]: r[f"decision_{a}"] for r in decided},
                             {r["id"]: r[f"decision_{b}"] for r in decided}, a, b)
            name = f"{a}_vs_{b}"
            dump_json({"vocoder_tag": tag, "flows": fm.flows()},
                      os.path.join(out_dir, f"flows_{tag}_{name}.json"))
            with open(os.path.join(out_dir, f"flows_{tag}_{name}.csv"), "w") as fh:
                fh.write(fm.to_csv())
            block["flows"][name] = {"both_good": fm.both_good, "a_good_b_bad": fm.a_good_b_bad,
                                    "a_bad_b_good": fm.a_bad_b_good, "both_bad": fm.both_bad,
                                    "marginals": fm.marginals()}
        labelled = [r for r in trows if r["label"] and r["overall"] != REVIEW]
        if labelled:
            cm = confusion([r["label"] for r in labelled], [r["overall"] for r in labelled])
            block["overall"] = {"confusion": cm.as_dict(), "metrics": Metrics.from_counts(cm).as_dict(),
                                "note": "combined verdict is an extension; per-feature sections are primary"}
        tag_manifest = [m for m in manifest if m.vocoder_tag == tag]
        cons = consensus_block(tag_manifest)
        if cons is not None:
            block["consensus"] = cons
        elif manifest_path:
            report["notices"].append(f"{tag}: no rater votes; consensus omitted")
        report["vocoders"][tag] = block
    dump_json(report, os.path.join(out_dir, "report.json"))
    return report


# -- agree --------------------------------------------------------------------

def cmd_agree(manifest_path, out_path, decisions_path=None, reported: dict | None = None) -> dict:
    """Consensus tables per vocoder tag, optionally with f0/HNR-style flows.

    ``reported`` maps ``(tag, category)`` to a published percentage; each is
    checked against the exact ratio and mismatches are listed.
    """
    manifest = load_manifest(manifest_path)
    doc = {"vocoders": {}, "discrepancies": []}
    for tag in sorted({m.vocoder_tag for m in manifest}):
        votes = [RaterVotes(m.id, parse_votes(m.rater_votes))
                 for m in manifest if m.vocoder_tag == tag and m.rater_votes]
        if not votes:
            continue
        table = consensus_stats(sorted(votes, key=lambda v: v.sample_id))
        doc["vocoders"][tag] = {"consensus": table.as_dict()}
        for cat, row in table.rows.items():
            ref = (reported or {}).get((tag, cat))
            if ref is not None and not row.matches_reported(ref):
                doc["discrepancies"].append({"vocoder_tag": tag, "category": cat,
                                             "reported_percent": ref,
                                             "computed_percent": round(row.percent, 2)})
    if decisions_path:
        rows = load_decisions(decisions_path)
        kinds = [k for k in FEATURE_KINDS if rows and f"decision_{k}" in rows[0]]
        for tag in sorted({r["vocoder_tag"] for r in rows}):
            trows = [r for r in rows if r["vocoder_tag"] == tag]
            block = doc["vocoders"].setdefault(tag, {})
            for a, b in combinations(kinds, 2):
                decided = [r for r in trows if REVIEW not in (r[f"decision_{a}"], r[f"decision_{b}"])]
                fm = flow_matrix({r["id"]: r[f"decision_{a}"] for r in decided},
                                 {r["id"]: r[f"decision_{b}"] for r in decided}, a, b)
                block.setdefault("flows", {})[f"{a}_vs_{b}"] = fm.flows()
    dump_json(doc, out_path)
    return doc


# -- synth --------------------------------------------------------------------

def simulated_votes(label: str, n_raters: int, rng, flip: float = 0.1) -> str:
    other = BAD if label == GOOD else GOOD
    return ";".join(other if rng.random() < flip else label for _ in range(n_raters))


def cmd_synth(out_dir, recipe: str = "mixed", n_good: int = 20, n_bad: int = 20, seed: int = 7,
              raters: int = 0, vocoder_tag: str = "synthetic", sample_rate_hz: int = 16000,
              duration_s: float = 0.6) -> list[ManifestRow]:
    """Render a labelled synthetic corpus to WAV files plus ``manifest.csv``."""
    audio_dir = os.path.join(out_dir, "audio")
    os.makedirs(audio_dir, exist_ok=True)
    items = build_corpus(n_good, n_bad, recipe, seed, sample_rate_hz, duration_s, vocoder_tag)
    if not items:
        log.warning("empty corpus requested (n_good=0, n_bad=0)")
    rng = np.random.default_rng([seed, 1])
    rows = []
    for it in items:
        src = os.path.join(audio_dir, f"{it.id}_in.wav")
        dst = os.path.join(audio_dir, f"{it.id}_out.wav")
        encode_wav(it.source, src)
        encode_wav(it.output, dst)
        votes = simulated_votes(it.label, raters, rng) if raters else ""
        rows.append(ManifestRow(it.id, src, dst, it.label, votes, it.vocoder_tag))
    write_manifest(rows, os.path.join(out_dir, "manifest.csv"))
    return rows
