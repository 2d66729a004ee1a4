"""
Fitting an asymmetric threshold band
====================================

A pair is accepted when the output feature stays within an asymmetric band
around the input value. Each edge is fitted on its own side of zero.
"""

import numpy as np

from voxscreen import Deviation, ThresholdBand, classify, evaluate, optimize_band

# Labelled deviations d = output - input for twelve pairs.
rng = np.random.default_rng(0)
good = rng.normal(2, 4, 8)
bad = np.array([-25.0, 40.0, 55.0, 120.0])
d = np.concatenate([good, bad])
labels = ["good"] * len(good) + ["bad"] * len(bad)

fit = optimize_band(d, labels, "f0")
print(fit.band, "training accuracy", fit.training_accuracy)

cm, metrics = evaluate(d, labels, fit.band)
print(cm)
print(metrics)

# A fixed band can classify any new deviation.
band = ThresholdBand("f0", -11.2, 32.6)
for x, y in [(255.3, 428.6), (211.8, 217.2)]:
    print(f"{x} -> {y}: {classify(Deviation('f0', y - x), band)}")

# With no negative deviations the lower edge stays unbounded and a warning is kept.
print(optimize_band([1.0, 4.0], ["good", "bad"], "hnr").warnings)
