"""Common machinery for replaying one match through a rating system.

A rating system owns a ``PlayerRating`` default, a per-team prediction
score, and a belief update.  ``update_match`` glues them together in the
order the replay harness relies on: predict strictly from pre-match
state, then update, then bookkeep games_played / last_observed_rank.

State is an explicit ``dict[player_id, PlayerRating]`` owned by the
caller; updates replace entries in place and the replay loop is
sequential, so there is no hidden shared state.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import replace
from typing import Any

from .core import (
    MatchRecord,
    MissingStateError,
    PlayerRating,
    PredictedRanking,
    rank_teams_by_score,
)

__all__ = ["RatingSystem", "RatingState", "make_system", "SYSTEM_NAMES"]

RatingState = dict[str, PlayerRating]

SYSTEM_NAMES = ("elo", "glicko", "trueskill", "prevrank")


class RatingSystem(ABC):
    """Interface every rating system implements."""

    name: str = ""

    @abstractmethod
    def initial_rating(self) -> PlayerRating:
        """Belief assigned to a player never seen before."""

    @abstractmethod
    def team_score(
        self, state: RatingState, members: tuple[str, ...], team_count: int
    ) -> float:
        """Pre-match strength score for one roster; higher predicts better."""

    @abstractmethod
    def _apply(self, state: RatingState, match: MatchRecord) -> None:
        """Apply the system's belief update for one finished match."""

    @abstractmethod
    def params_dict(self) -> dict[str, Any]:
        """The system's full parameterization, for run summaries and snapshots."""

    def predict(
        self, state: RatingState, match: MatchRecord, rng_seed: int
    ) -> PredictedRanking:
        """Rank the match's teams from pre-match state only."""
        self._require_states(state, match)
        scores = [
            (t.team_id, self.team_score(state, t.members, match.team_count))
            for t in match.teams
        ]
        return rank_teams_by_score(scores, rng_seed)

    def update_match(
        self, state: RatingState, match: MatchRecord, rng_seed: int
    ) -> PredictedRanking:
        """Predict, then update beliefs from the observed placements.

        Returns the prediction made before any rating changed.  Every
        participant's games_played is incremented and last_observed_rank
        set to their team's placement.
        """
        ranking = self.predict(state, match, rng_seed)
        self._apply(state, match)
        for team in match.teams:
            for player in team.members:
                r = state[player]
                state[player] = replace(
                    r,
                    games_played=r.games_played + 1,
                    last_observed_rank=team.observed_rank,
                )
        return ranking

    def _require_states(self, state: RatingState, match: MatchRecord) -> None:
        missing = [p for p in match.players() if p not in state]
        if missing:
            raise MissingStateError(
                f"match {match.match_id!r}: no rating entry for "
                f"{len(missing)} player(s), first {missing[0]!r}"
            )


def make_system(name: str, **overrides: Any) -> RatingSystem:
    """Build a rating system by name with keyword parameter overrides."""
    from . import elo, glicko, prevrank, trueskill

    if name == "elo":
        return elo.EloSystem(elo.EloParams(**overrides))
    if name == "glicko":
        return glicko.GlickoSystem(glicko.GlickoParams(**overrides))
    if name == "trueskill":
        return trueskill.TrueSkillSystem(trueskill.TrueSkillParams(**overrides))
    if name == "prevrank":
        if overrides:
            raise ValueError("prevrank takes no parameters")
        return prevrank.PreviousRankSystem()
    raise ValueError(f"unknown rating system {name!r}, expected one of {SYSTEM_NAMES}")
