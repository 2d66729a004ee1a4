"""Manifest and feature-table file formats."""
from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass

from .classifier import SamplePair, normalize_label
from .errors import ManifestInvalid
from .features import FEATURE_KINDS, AcousticFeatures

MANIFEST_FIELDS = ("id", "input_path", "output_path", "label", "rater_votes", "vocoder_tag")
FEATURE_COLUMNS = {"f0": "f0_hz", "hnr": "hnr_db", "vtl": "vtl_cm"}
FEATURES_HEADER = (
    ["id", "vocoder_tag", "label"]
    + [f"{side}_{FEATURE_COLUMNS[k]}" for side in ("in", "out") for k in FEATURE_KINDS]
    + ["in_voiced_frames", "in_total_frames", "out_voiced_frames", "out_total_frames",
       "in_vtl_in_range", "out_vtl_in_range", "errors"]
)


@dataclass(frozen=True)
class ManifestRow:
    id: str
    input_path: str
    output_path: str
    label: str | None = None
    rater_votes: str = ""
    vocoder_tag: str = "default"


def _resolve(base, p):
    return p if os.path.isabs(p) else os.path.normpath(os.path.join(base, p))


def load_manifest(path, check_files: bool = False) -> list[ManifestRow]:
    """Read a CSV or JSON manifest; relative paths resolve against its directory.

    JSON manifests are either a list of row objects or ``{"rows": [...]}``.
    """
    path = os.fspath(path)
    base = os.path.dirname(os.path.abspath(path))
    try:
        if path.lower().endswith(".json"):
            with open(path) as fh:
                doc = json.load(fh)
            records = doc["rows"] if isinstance(doc, dict) else doc
        else:
            with open(path, newline="") as fh:
                records = list(csv.DictReader(fh))
    except (OSError, ValueError, KeyError) as exc:
        raise ManifestInvalid(f"{path}: {exc}") from exc
    if not records:
        raise ManifestInvalid(f"{path}: manifest has no rows")
    rows, seen = [], set()
    for i, rec in enumerate(records):
        missing = [k for k in ("id", "input_path", "output_path") if not rec.get(k)]
        if missing:
            raise ManifestInvalid(f"{path}: row {i} lacks {missing}")
        sid = str(rec["id"])
        if sid in seen:
            raise ManifestInvalid(f"{path}: duplicate id {sid!r}")
        seen.add(sid)
        try:
            label = normalize_label(rec.get("label"))
        except ValueError as exc:
            raise ManifestInvalid(f"{path}: row {sid}: {exc}") from exc
        row = ManifestRow(sid, _resolve(base, rec["input_path"]), _resolve(base, rec["output_path"]),
                          label, rec.get("rater_votes") or "", rec.get("vocoder_tag") or "default")
        if check_files:
            for p in (row.input_path, row.output_path):
                if not os.path.exists(p):
                    raise ManifestInvalid(f"{path}: row {sid}: missing file {p}")
        rows.append(row)
    return rows


def write_manifest(rows, path, relative_to=None) -> None:
    base = relative_to or os.path.dirname(os.path.abspath(path))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(MANIFEST_FIELDS)
        for r in rows:
            w.writerow([r.id, os.path.relpath(r.input_path, base), os.path.relpath(r.output_path, base),
                        r.label or "", r.rater_votes, r.vocoder_tag])


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(float(v))


def _parse(v: str):
    return None if v == "" else float(v)


def features_row(sid, tag, label, fin: AcousticFeatures, fout: AcousticFeatures) -> list[str]:
    errs = [f"{side}:{k}:{f.errors[k]}" for side, f in (("in", fin), ("out", fout))
            for k in FEATURE_KINDS if k in f.errors]
    return ([sid, tag, label or ""]
            + [_fmt(f.value(k)) for f in (fin, fout) for k in FEATURE_KINDS]
            + [str(fin.voiced_frame_count), str(fin.total_frame_count),
               str(fout.voiced_frame_count), str(fout.total_frame_count),
               _fmt(fin.vtl_in_range), _fmt(fout.vtl_in_range), ";".join(errs)])


def write_features(rows: list[list[str]], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FEATURES_HEADER)
        w.writerows(sorted(rows, key=lambda r: r[0]))


def _side_features(rec: dict, side: str, errors: dict) -> AcousticFeatures:
    vals = [_parse(rec[f"{side}_{FEATURE_COLUMNS[k]}"]) for k in FEATURE_KINDS]
    return AcousticFeatures(*vals, int(rec[f"{side}_voiced_frames"] or 0),
                            int(rec[f"{side}_total_frames"] or 0), errors.get(side, {}))


def load_features(path) -> list[SamplePair]:
    """Parse a features table back into :class:`SamplePair` objects."""
    with open(path, newline="") as fh:
        records = list(csv.DictReader(fh))
    pairs = []
    for rec in records:
        errors: dict = {}
        for token in filter(None, rec.get("errors", "").split(";")):
            side, kind, name = token.split(":")
            errors.setdefault(side, {})[kind] = name
        pairs.append(SamplePair(rec["id"], _side_features(rec, "in", errors),
                                _side_features(rec, "out", errors), rec["label"] or None,
                                rec["vocoder_tag"]))
    return pairs
