from __future__ import annotations

from datetime import datetime, timedelta, timezone

from royale_ratings.core import MatchRecord, TeamEntry

BASE_TIME = datetime(2020, 5, 1, tzinfo=timezone.utc)


def quick_match(
    ranks: list[int],
    team_size: int = 1,
    match_id: str = "m1",
    minute: int = 0,
    player_prefix: str = "",
) -> MatchRecord:
    """Match with teams t1..tN placed per ``ranks``; rosters are generated
    as ``{prefix}t{i}_p{j}``."""
    teams = tuple(
        TeamEntry(
            team_id=f"t{i}",
            members=tuple(
                f"{player_prefix}t{i}_p{j}" for j in range(1, team_size + 1)
            ),
            observed_rank=rank,
        )
        for i, rank in enumerate(ranks, start=1)
    )
    return MatchRecord(
        match_id=match_id,
        timestamp=BASE_TIME + timedelta(minutes=minute),
        teams=teams,
    )
