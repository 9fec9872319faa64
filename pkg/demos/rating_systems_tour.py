"""Walk one duo match through all four rating systems.

Run:  python3 demos/rating_systems_tour.py
"""

from __future__ import annotations

from datetime import datetime, timezone

from royale_ratings import MatchRecord, TeamEntry, make_system

STAMP = datetime(2021, 3, 14, 15, 9, tzinfo=timezone.utc)

match = MatchRecord(
    match_id="demo-1",
    timestamp=STAMP,
    teams=(
        TeamEntry(team_id="alpha", members=("ana", "bo"), observed_rank=2),
        TeamEntry(team_id="bravo", members=("cy", "dee"), observed_rank=1),
        TeamEntry(team_id="coyote", members=("eli", "fay"), observed_rank=4),
        TeamEntry(team_id="delta", members=("gus", "hana"), observed_rank=3),
    ),
)

print("One match, four teams of two. Observed finish:")
for team in sorted(match.teams, key=lambda t: t.observed_rank):
    print(f"  {team.observed_rank}. {team.team_id:7s} {team.members}")

for name in ("elo", "glicko", "trueskill", "prevrank"):
    system = make_system(name)
    state = {p: system.initial_rating() for p in match.players()}
    ranking = system.update_match(state, match, 0)

    print(f"\n=== {name} ===")
    print(f"pre-match prediction: {ranking.order}")
    if ranking.tie_groups:
        print(f"  (ties broken by seed: {ranking.tie_groups})")
    for team in match.teams:
        for player in team.members:
            rating = state[player]
            sigma = "" if rating.sigma is None else f"  sigma={rating.sigma:.3f}"
            print(f"  {player:5s} mu={rating.mu:10.4f}{sigma}")

print(
    "\nEvery system starts all players at its default, so the first"
    "\nprediction is a coin flip; the update already separates the teams"
    "\nby how far their finish beat or missed the pooled expectation."
)
