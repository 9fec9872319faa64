"""What each rank-prediction metric rewards and punishes.

Run:  python3 demos/metrics_tour.py
"""

from __future__ import annotations

from royale_ratings import score_match

OBSERVED = {"t1": 1, "t2": 2, "t3": 3, "t4": 4, "t5": 5}

PREDICTIONS = {
    "perfect": {"t1": 1, "t2": 2, "t3": 3, "t4": 4, "t5": 5},
    "reversed": {"t1": 5, "t2": 4, "t3": 3, "t4": 2, "t5": 1},
    "swap winners": {"t1": 2, "t2": 1, "t3": 3, "t4": 4, "t5": 5},
    "swap tail": {"t1": 1, "t2": 2, "t3": 3, "t4": 5, "t5": 4},
    "winner buried": {"t1": 5, "t2": 1, "t3": 2, "t4": 3, "t5": 4},
}


def pairs_for(pred: dict[str, int]) -> list[tuple[str, int, int]]:
    return [(t, pred[t], OBSERVED[t]) for t in sorted(OBSERVED)]


header = f"{'prediction':14s}" + "".join(
    f"{name:>12s}" for name in ("accuracy", "mae", "tau", "mrr", "ap", "ndcg")
)
print(header)
print("-" * len(header))
for label, pred in PREDICTIONS.items():
    report = score_match(pairs_for(pred))
    row = (
        report.accuracy,
        report.mae,
        report.kendall_tau,
        report.mrr,
        report.ap,
        report.ndcg,
    )
    print(f"{label:14s}" + "".join(f"{value:12.4f}" for value in row))

print(
    """
Reading the table:
  accuracy only pays for exact placements, so one swap costs 2/5 at once.
  mae and tau degrade smoothly with distance and with pair disorder.
  mrr, ap and ndcg weight errors by 1/(1+e), so burying the winner
  (error 4) hurts far more than swapping the two tail teams (error 1).
"""
)

swap_top = score_match(pairs_for({"t1": 2, "t2": 1, "t3": 3, "t4": 4, "t5": 5}))
swap_tail = score_match(pairs_for({"t1": 1, "t2": 2, "t3": 3, "t4": 5, "t5": 4}))
print("Same size of error, different position:")
print(f"  swapping ranks 1 and 2 -> ndcg {swap_top.ndcg:.4f}")
print(f"  swapping ranks 4 and 5 -> ndcg {swap_tail.ndcg:.4f}")
print("NDCG discounts late positions, so the top swap costs more.")
