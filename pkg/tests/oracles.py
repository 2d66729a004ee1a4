"""Independent reference computations used by the test suite."""
import itertools
import math


def brute_force_accuracy(deviations, labels):
    """Best global accuracy over every distinct (t_neg, t_pos) classifier.

    Thresholds are taken at the observed deviations themselves (inclusive),
    at a point just inside zero (reject the whole side) and at infinity.
    Every acceptance pattern a band can produce is reached this way.
    """
    negs = sorted({d for d in deviations if d < 0})
    poss = sorted({d for d in deviations if d > 0})
    tiny = min([abs(d) for d in deviations if d != 0] + [1.0]) / 2
    neg_cands = [-tiny] + negs + [-math.inf]
    pos_cands = [tiny] + poss + [math.inf]
    best = 0.0
    n = len(deviations)
    for tn, tp in itertools.product(neg_cands, pos_cands):
        correct = sum((tn <= d <= tp) == (lab == "good") for d, lab in zip(deviations, labels))
        best = max(best, correct / n)
    return best


def corpus_accuracies(items, features=("f0", "hnr")):
    """Training accuracy of the fitted band per feature on a labelled corpus."""
    from voxscreen.classifier import SamplePair, optimize_band, pair_deviations
    from voxscreen.features import extract_features

    pairs = [SamplePair(it.id, extract_features(it.source), extract_features(it.output), it.label)
             for it in items]
    out = {}
    for kind in features:
        _, devs, labels, _ = pair_deviations(pairs, kind)
        out[kind] = optimize_band(devs, labels, kind).training_accuracy
    return out
