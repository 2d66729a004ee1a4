"""
Rater consensus and decision flows
==================================

Four listeners vote on each sample. Agreement is counted per vote against
the majority label, and two feature classifiers are compared sample by
sample in a 2x2 flow matrix.
"""

from voxscreen import RaterVotes, consensus_stats, flow_matrix

votes = [RaterVotes(f"g{i}", ("good",) * 4) for i in range(7)]
votes += [RaterVotes(f"m{i}", ("good", "good", "bad", "good")) for i in range(20)]
votes += [RaterVotes("tie", ("good", "bad", "good", "bad"))]
table = consensus_stats(votes)
row = table["good"]
print(f"good: {row.agreeing_votes}/{row.total_votes} = {row.percent:.2f} %")
print("a reported 84.04 % matches?", row.matches_reported(84.04))
print("ties left out:", table.ties)

# f0 rejects 13 samples, HNR rejects 24, and every f0 rejection is also an HNR rejection.
ids = [f"s{i:02d}" for i in range(40)]
f0 = {s: "bad" if i < 13 else "good" for i, s in enumerate(ids)}
hnr = {s: "bad" if i < 24 else "good" for i, s in enumerate(ids)}
fm = flow_matrix(f0, hnr, "f0", "hnr")
print(fm.to_csv())
print(fm.marginals())
print("accepted by f0, rejected by HNR:", fm.ids["a_good_b_bad"])
