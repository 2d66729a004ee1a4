"""
Two failure families, two detectors
===================================

A pitch-shift corpus is separable by f0 but not by HNR. A noise corpus is
the other way round. Fitting a band per feature on each corpus shows it.
"""

from voxscreen import SamplePair, build_corpus, extract_features, optimize_band, pair_deviations


def accuracies(items):
    pairs = [SamplePair(it.id, extract_features(it.source), extract_features(it.output), it.label)
             for it in items]
    out = {}
    for kind in ("f0", "hnr"):
        _, d, labels, _ = pair_deviations(pairs, kind)
        fit = optimize_band(d, labels, kind)
        out[kind] = (round(fit.training_accuracy, 3), fit.band.t_neg, fit.band.t_pos)
    return out


for recipe in ("pitch_shift", "noise"):
    items = build_corpus(10, 10, recipe, seed=0)
    print(recipe, accuracies(items))
