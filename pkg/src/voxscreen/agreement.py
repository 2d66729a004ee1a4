"""Rater consensus tables and cross-classifier decision flows."""
from __future__ import annotations

import csv
import io
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .classifier import BAD, GOOD, normalize_label
from .errors import IdSetMismatch, TieVote


@dataclass(frozen=True)
class RaterVotes:
    sample_id: str
    votes: tuple

    def __post_init__(self):
        votes = tuple(normalize_label(v) for v in self.votes)
        if len(votes) < 2 or any(v is None for v in votes):
            raise ValueError(f"{self.sample_id}: need at least two good/bad votes")
        object.__setattr__(self, "votes", votes)

    def consensus(self) -> str:
        """Strict-majority label; an even split raises :class:`TieVote`."""
        c = Counter(self.votes)
        if c[GOOD] == c[BAD]:
            raise TieVote(f"{self.sample_id}: {c[GOOD]}-{c[BAD]} split")
        return GOOD if c[GOOD] > c[BAD] else BAD


@dataclass(frozen=True)
class AgreementRow:
    category: str
    agreeing_votes: int
    total_votes: int
    n_samples: int

    @property
    def percent(self) -> float | None:
        return 100.0 * self.agreeing_votes / self.total_votes if self.total_votes else None

    def matches_reported(self, reported_percent: float, tol: float = 0.005) -> bool:
        """Whether a published two-decimal percentage agrees with the exact ratio."""
        return self.percent is not None and abs(self.percent - reported_percent) <= tol


@dataclass(frozen=True)
class AgreementTable:
    rows: dict
    ties: tuple = ()

    def __getitem__(self, category: str) -> AgreementRow:
        return self.rows[category]

    def as_dict(self) -> dict:
        return {
            "categories": {
                k: {"agreeing_votes": r.agreeing_votes, "total_votes": r.total_votes,
                    "n_samples": r.n_samples,
                    "percent": None if r.percent is None else round(r.percent, 2)}
                for k, r in self.rows.items()
            },
            "ties": list(self.ties),
        }


def consensus_stats(votes: Sequence[RaterVotes]) -> AgreementTable:
    """Vote-level agreement with the majority label, grouped by that label.

    Tied samples are left out of the table and listed in ``ties``.
    """
    counts = {len(v.votes) for v in votes}
    if len(counts) > 1:
        raise ValueError(f"inconsistent rater counts: {sorted(counts)}")
    agree = {GOOD: 0, BAD: 0}
    total = {GOOD: 0, BAD: 0}
    n = {GOOD: 0, BAD: 0}
    ties = []
    for v in votes:
        try:
            label = v.consensus()
        except TieVote:
            ties.append(v.sample_id)
            continue
        agree[label] += sum(1 for x in v.votes if x == label)
        total[label] += len(v.votes)
        n[label] += 1
    rows = {k: AgreementRow(k, agree[k], total[k], n[k]) for k in (GOOD, BAD)}
    return AgreementTable(rows, tuple(sorted(ties)))


def parse_votes(text: str) -> tuple:
    """Split a semicolon-joined vote string such as ``"good;bad;good;good"``."""
    return tuple(s.strip() for s in text.split(";") if s.strip())


# -- flows --------------------------------------------------------------------

CELLS = ("both_good", "a_good_b_bad", "a_bad_b_good", "both_bad")


@dataclass(frozen=True)
class FlowMatrix:
    """2x2 cross-tabulation of two classifiers' decisions with drill-down ids."""

    ids: dict  # cell name -> sorted tuple of sample ids
    name_a: str = "a"
    name_b: str = "b"

    def count(self, cell: str) -> int:
        return len(self.ids[cell])

    @property
    def both_good(self) -> int:
        return self.count("both_good")

    @property
    def a_good_b_bad(self) -> int:
        return self.count("a_good_b_bad")

    @property
    def a_bad_b_good(self) -> int:
        return self.count("a_bad_b_good")

    @property
    def both_bad(self) -> int:
        return self.count("both_bad")

    @property
    def n(self) -> int:
        return sum(self.count(c) for c in CELLS)

    def marginals(self) -> dict:
        return {
            "a_good": self.both_good + self.a_good_b_bad,
            "a_bad": self.a_bad_b_good + self.both_bad,
            "b_good": self.both_good + self.a_bad_b_good,
            "b_bad": self.a_good_b_bad + self.both_bad,
        }

    def transpose(self) -> "FlowMatrix":
        return FlowMatrix({
            "both_good": self.ids["both_good"], "both_bad": self.ids["both_bad"],
            "a_good_b_bad": self.ids["a_bad_b_good"],
            "a_bad_b_good": self.ids["a_good_b_bad"],
        }, self.name_b, self.name_a)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"{self.name_a}\\{self.name_b}", GOOD, BAD])
        w.writerow([GOOD, self.both_good, self.a_good_b_bad])
        w.writerow([BAD, self.a_bad_b_good, self.both_bad])
        return buf.getvalue()

    def flows(self) -> list[dict]:
        """Source/target/count records for alluvial or Sankey plotting."""
        spec = [("both_good", GOOD, GOOD), ("a_good_b_bad", GOOD, BAD),
                ("a_bad_b_good", BAD, GOOD), ("both_bad", BAD, BAD)]
        return [{"source": f"{self.name_a}:{sa}", "target": f"{self.name_b}:{sb}",
                 "count": self.count(cell), "sample_ids": list(self.ids[cell])}
                for cell, sa, sb in spec]


def flow_matrix(decisions_a: Mapping[str, str], decisions_b: Mapping[str, str],
                name_a: str = "a", name_b: str = "b") -> FlowMatrix:
    """Cross-tabulate per-sample good/bad decisions keyed by sample id."""
    if set(decisions_a) != set(decisions_b):
        missing = sorted(set(decisions_a) ^ set(decisions_b))
        raise IdSetMismatch(f"sample ids differ: {missing[:5]}")
    cells = {c: [] for c in CELLS}
    for sid in sorted(decisions_a):
        a = normalize_label(decisions_a[sid])
        b = normalize_label(decisions_b[sid])
        key = {(GOOD, GOOD): "both_good", (GOOD, BAD): "a_good_b_bad",
               (BAD, GOOD): "a_bad_b_good", (BAD, BAD): "both_bad"}[(a, b)]
        cells[key].append(sid)
    return FlowMatrix({k: tuple(v) for k, v in cells.items()}, name_a, name_b)
