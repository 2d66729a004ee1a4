"""
Screening a corpus from files
=============================

The file pipeline runs synth, extract, optimize, screen and report. The
same steps are available from the ``voxscreen`` command.
"""

import json
import os
import tempfile

from voxscreen import pipeline

work = tempfile.mkdtemp(prefix="voxscreen-demo-")
pipeline.cmd_synth(work, "mixed", n_good=6, n_bad=6, seed=7, raters=4)
manifest = os.path.join(work, "manifest.csv")
features = os.path.join(work, "features.csv")
profile = os.path.join(work, "profile.json")
decisions = os.path.join(work, "decisions.csv")

result = pipeline.cmd_extract(manifest, features, workers=2)
print("extracted", result.n_rows, "pairs, exit code", result.exit_code)

doc = pipeline.cmd_optimize(features, profile, features=("f0", "hnr"))
for kind, entry in doc["profiles"]["synthetic"].items():
    print(kind, entry["t_neg"], entry["t_pos"], entry["accuracy"])

rows = pipeline.cmd_screen(features, profile, decisions, rule="any", features=("f0", "hnr"))
for r in rows:
    print(r["id"], r["label"], r["decision_f0"], r["decision_hnr"], r["overall"])

report = pipeline.cmd_report(decisions, features, os.path.join(work, "report"), manifest, profile)
print(json.dumps(report["vocoders"]["synthetic"]["flows"], indent=2))
print("outputs in", work)
