"""Per-match rank-prediction metrics.

All six metrics score one match: N teams, a predicted rank and an
observed rank per team, both strict permutations of 1..N.  The
per-team error is e_i = |predicted - observed|.

accuracy       fraction of exact hits (e_i = 0)
mae            mean absolute rank error
kendall_tau    tau-a, (concordant - discordant) / C(N, 2)
mrr            mean reciprocal rank, mean of 1 / (1 + e_i)
ap             average precision with graded relevance 1 / (1 + e_i)
ndcg           discounted cumulative gain against the ideal prefix

AP and NDCG walk leaderboard positions i = 1..N.  By default position i
is the team that actually finished i-th (``position_index="observed"``);
``"predicted"`` walks the predicted leaderboard instead.  Both are
reported by the harness summaries since the two conventions disagree on
imperfect predictions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .core import DomainError, MatchRecord, PredictedRanking

__all__ = [
    "RankPair",
    "MetricReport",
    "rank_pairs",
    "accuracy",
    "mae",
    "kendall_tau",
    "mrr",
    "average_precision",
    "ndcg",
    "score_match",
    "METRIC_NAMES",
]

# (team_id, predicted_rank, observed_rank)
RankPair = tuple[str, int, int]

METRIC_NAMES = ("accuracy", "mae", "kendall_tau", "mrr", "ap", "ndcg")

_POSITION_INDICES = ("observed", "predicted")


@dataclass(frozen=True, slots=True)
class MetricReport:
    accuracy: float
    mae: float
    kendall_tau: float
    mrr: float
    ap: float
    ndcg: float
    team_count: int

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in METRIC_NAMES}


def rank_pairs(ranking: PredictedRanking, match: MatchRecord) -> list[RankPair]:
    """Pair up predicted and observed ranks for one match's teams."""
    predicted = ranking.ranks
    missing = [t.team_id for t in match.teams if t.team_id not in predicted]
    if missing or len(ranking.order) != match.team_count:
        raise DomainError(
            f"match {match.match_id!r}: prediction does not cover its teams"
        )
    return [
        (t.team_id, predicted[t.team_id], t.observed_rank) for t in match.teams
    ]


def _validate(pairs: Sequence[RankPair]) -> int:
    n = len(pairs)
    if n < 2:
        raise DomainError(f"need >= 2 teams to score, got {n}")
    full = list(range(1, n + 1))
    if sorted(p for _, p, _ in pairs) != full:
        raise DomainError("predicted ranks are not a permutation of 1..N")
    if sorted(o for _, _, o in pairs) != full:
        raise DomainError("observed ranks are not a permutation of 1..N")
    return n


def accuracy(pairs: Sequence[RankPair]) -> float:
    """Fraction of teams whose rank was predicted exactly."""
    n = _validate(pairs)
    return sum(1 for _, p, o in pairs if p == o) / n


def mae(pairs: Sequence[RankPair]) -> float:
    """Mean absolute rank error; 0 iff the prediction is perfect."""
    n = _validate(pairs)
    return sum(abs(p - o) for _, p, o in pairs) / n


def _count_inversions(seq: list[int]) -> int:
    """Inversions via merge sort, O(N log N)."""
    if len(seq) <= 1:
        return 0
    mid = len(seq) // 2
    left, right = seq[:mid], seq[mid:]
    count = _count_inversions(left) + _count_inversions(right)
    merged: list[int] = []
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            merged.append(right[j])
            j += 1
            count += len(left) - i
    merged.extend(left[i:])
    merged.extend(right[j:])
    seq[:] = merged
    return count


def kendall_tau(pairs: Sequence[RankPair]) -> float:
    """Kendall tau-a between the two permutations, in [-1, 1].

    With strict ranks every pair is either concordant or discordant, so
    (concordant - discordant) = pairs - 2 inv where inv counts inversions
    of the observed ranks read in predicted order.  The quotient is formed
    from the exact integer numerator so the result rounds once.
    """
    n = _validate(pairs)
    observed_in_predicted_order = [
        o for _, _, o in sorted(pairs, key=lambda pair: pair[1])
    ]
    inversions = _count_inversions(observed_in_predicted_order)
    total = n * (n - 1) // 2
    return (total - 2 * inversions) / total


def mrr(pairs: Sequence[RankPair]) -> float:
    """Mean reciprocal rank with reciprocal 1 / (1 + |error|), in (0, 1]."""
    n = _validate(pairs)
    return sum(1.0 / (1 + abs(p - o)) for _, p, o in pairs) / n


def _errors_by_position(
    pairs: Sequence[RankPair], position_index: str
) -> list[int]:
    """Per-position |error|, position 1 first.

    Position i holds the team observed i-th (``"observed"``) or predicted
    i-th (``"predicted"``).
    """
    if position_index not in _POSITION_INDICES:
        raise DomainError(
            f"position_index must be one of {_POSITION_INDICES}, got {position_index!r}"
        )
    key = 2 if position_index == "observed" else 1
    ordered = sorted(pairs, key=lambda pair: pair[key])
    return [abs(p - o) for _, p, o in ordered]


def average_precision(
    pairs: Sequence[RankPair], position_index: str = "observed"
) -> float:
    """AP with prefix precision P(i) = exact hits in positions 1..i over i
    and graded relevance 1 / (1 + e_i); 0 when nothing was hit exactly."""
    n = _validate(pairs)
    errors = _errors_by_position(pairs, position_index)
    hits = 0
    total = 0.0
    for i, err in enumerate(errors, start=1):
        if err == 0:
            hits += 1
        total += (hits / i) * (1.0 / (1 + err))
    return total / n


def ndcg(
    pairs: Sequence[RankPair],
    weight_base: float = 2.0,
    position_index: str = "observed",
) -> float:
    """Normalized DCG with relevance 1 / (1 + e_i) and positional weight
    1 / log_base(i + 1), in (0, 1], 1 iff perfect.

    The base scales every weight by the same constant and cancels in the
    DCG/IDCG ratio; it is exposed for inspecting unnormalized DCG.
    """
    if not weight_base > 1:
        raise DomainError(f"weight_base must be > 1, got {weight_base}")
    _validate(pairs)
    errors = _errors_by_position(pairs, position_index)
    dcg = 0.0
    ideal = 0.0
    for i, err in enumerate(errors, start=1):
        weight = 1.0 / math.log(i + 1, weight_base)
        dcg += weight * (1.0 / (1 + err))
        ideal += weight
    return dcg / ideal


def score_match(
    pairs: Sequence[RankPair],
    *,
    ndcg_base: float = 2.0,
    position_index: str = "observed",
) -> MetricReport:
    """All six metrics for one match."""
    n = _validate(pairs)
    return MetricReport(
        accuracy=accuracy(pairs),
        mae=mae(pairs),
        kendall_tau=kendall_tau(pairs),
        mrr=mrr(pairs),
        ap=average_precision(pairs, position_index),
        ndcg=ndcg(pairs, ndcg_base, position_index),
        team_count=n,
    )
