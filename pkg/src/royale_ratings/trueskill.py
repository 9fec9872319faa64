"""Gaussian skill beliefs with rank-ordered pairwise updates for
N-team matches.

Conventions
-----------
Each player carries a Gaussian belief N(mu, sigma^2).  A team's belief
sums member means and member variances.  For a decided pair (winner i,
loser j) the update is the classic two-player non-draw form

    t = mu_i - mu_j          (winner minus loser)
    c = sqrt(2 beta^2 + sigma_i^2 + sigma_j^2)
    mu_i'    = mu_i + (sigma_i^2 / c) v(t/c)
    mu_j'    = mu_j - (sigma_j^2 / c) v(t/c)
    sigma'   = sigma (1 - (sigma^2 / c^2) w(t/c))        for both sides

where v(x) = pdf(x)/cdf(x) for the standard normal and
w(x) = v(x) (v(x) + x).  Note the sigma update is applied to sigma
itself, not to the variance; the canonical variance form would shrink
slower.  Draws are not modelled: placements are strict.

A match of N ranked teams is processed as a chain of these pairwise
updates over adjacent observed ranks (1 vs 2, 2 vs 3, ...), each pair
reading the beliefs already updated by the previous pair.  Team deltas
reach members proportionally to member variance (or to member mu with
``member_share="mu"``), and a member's sigma scales by the team's
shrink factor so the team aggregate follows the pair update.  With two
single-player teams the chain is exactly one pair update.

The default dynamics noise tau = 0.833 is deliberately large, ten times
the usual sigma0/100 choice for mu0 = 25; it is kept as a parameter so
slower-moving beliefs are one flag away.  tau^2 is added to every
participant's variance at the start of each of their matches.
"""

from __future__ import annotations

import math
import sys
from dataclasses import asdict, dataclass, replace
from typing import Any

from scipy.special import log_ndtr

from .core import DomainError, MatchRecord, PlayerRating
from .elo import _weights_or_uniform
from .systems import RatingState, RatingSystem

__all__ = [
    "TrueSkillParams",
    "TrueSkillSystem",
    "v_exceeds",
    "w_exceeds",
    "update_pair",
]

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
# smallest positive normal double; keeps v > 0 when pdf(x) underflows (x ~ 40)
_TINY = sys.float_info.min

_MEMBER_SHARES = ("sigma_sq", "mu")


@dataclass(frozen=True, slots=True)
class TrueSkillParams:
    default_mu: float = 25.0
    default_sigma: float = 25.0 / 3.0
    beta: float = 4.16
    tau_dynamics: float = 0.833
    member_share: str = "sigma_sq"

    def __post_init__(self) -> None:
        if not self.default_sigma > 0:
            raise DomainError(f"default_sigma must be > 0, got {self.default_sigma}")
        if not self.beta > 0:
            raise DomainError(f"beta must be > 0, got {self.beta}")
        if self.tau_dynamics < 0:
            raise DomainError(f"tau_dynamics must be >= 0, got {self.tau_dynamics}")
        if self.member_share not in _MEMBER_SHARES:
            raise DomainError(
                f"member_share must be one of {_MEMBER_SHARES}, got {self.member_share!r}"
            )


def v_exceeds(x: float) -> float:
    """Mean additional performance the winner showed, v(x) = pdf(x)/cdf(x).

    Evaluated in log space so the deep losing tail stays finite:
    v(-10) ~ 10.098 rather than 0/0.  For large positive x the true value
    drops below the double-precision floor and is clamped to the smallest
    positive normal float, keeping v > 0 on |x| <= 40.
    """
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    value = math.exp(-0.5 * x * x - _LOG_SQRT_2PI - float(log_ndtr(x)))
    return max(value, _TINY)


def w_exceeds(x: float) -> float:
    """Variance shrink fraction w(x) = v(x) (v(x) + x), in (0, 1)."""
    v = v_exceeds(x)
    return max(v * (v + x), _TINY)


def update_pair(
    winner: tuple[float, float],
    loser: tuple[float, float],
    params: TrueSkillParams,
) -> tuple[tuple[float, float], tuple[float, float]]:
    """One decided two-sided update on (mu, sigma) beliefs.

    The beliefs may be single players or whole-team aggregates
    (mu = sum of member mus, sigma = sqrt of summed member variances).
    Dynamics noise is not added here; callers inflate variances first.
    Returns the posterior (mu, sigma) pairs, winner first.
    """
    mu_w, sigma_w = winner
    mu_l, sigma_l = loser
    if not sigma_w > 0 or not sigma_l > 0:
        raise DomainError("sigmas must be positive")
    c_sq = 2.0 * params.beta**2 + sigma_w**2 + sigma_l**2
    c = math.sqrt(c_sq)
    x = (mu_w - mu_l) / c
    v = v_exceeds(x)
    w = w_exceeds(x)
    new_mu_w = mu_w + (sigma_w**2 / c) * v
    new_mu_l = mu_l - (sigma_l**2 / c) * v
    new_sigma_w = sigma_w * (1.0 - (sigma_w**2 / c_sq) * w)
    new_sigma_l = sigma_l * (1.0 - (sigma_l**2 / c_sq) * w)
    return (new_mu_w, new_sigma_w), (new_mu_l, new_sigma_l)


class TrueSkillSystem(RatingSystem):
    name = "trueskill"

    def __init__(self, params: TrueSkillParams | None = None) -> None:
        self.params = params or TrueSkillParams()

    def params_dict(self) -> dict[str, Any]:
        return asdict(self.params)

    def initial_rating(self) -> PlayerRating:
        return PlayerRating(mu=self.params.default_mu, sigma=self.params.default_sigma)

    def team_score(
        self, state: RatingState, members: tuple[str, ...], team_count: int
    ) -> float:
        return float(sum(state[p].mu for p in members))

    def _team_belief(
        self, state: RatingState, members: tuple[str, ...]
    ) -> tuple[float, float]:
        mu = sum(state[p].mu for p in members)
        var = sum(state[p].sigma ** 2 for p in members)
        return float(mu), float(var)

    def _distribute(
        self,
        state: RatingState,
        members: tuple[str, ...],
        team_id: str,
        team_var: float,
        delta_mu: float,
        shrink: float,
    ) -> None:
        if self.params.member_share == "mu":
            shares = _weights_or_uniform([state[p].mu for p in members], team_id)
        else:
            shares = [state[p].sigma ** 2 / team_var for p in members]
        for player, share in zip(members, shares):
            r = state[player]
            state[player] = replace(
                r, mu=r.mu + share * delta_mu, sigma=r.sigma * shrink
            )

    def _apply(self, state: RatingState, match: MatchRecord) -> None:
        tau_sq = self.params.tau_dynamics**2
        if tau_sq > 0:
            for player in match.players():
                r = state[player]
                state[player] = replace(r, sigma=math.sqrt(r.sigma**2 + tau_sq))

        by_rank = sorted(match.teams, key=lambda t: t.observed_rank)
        for upper, lower in zip(by_rank, by_rank[1:]):
            mu_w, var_w = self._team_belief(state, upper.members)
            mu_l, var_l = self._team_belief(state, lower.members)
            sigma_w, sigma_l = math.sqrt(var_w), math.sqrt(var_l)
            (new_mu_w, new_sigma_w), (new_mu_l, new_sigma_l) = update_pair(
                (mu_w, sigma_w), (mu_l, sigma_l), self.params
            )
            self._distribute(
                state,
                upper.members,
                upper.team_id,
                var_w,
                new_mu_w - mu_w,
                new_sigma_w / sigma_w,
            )
            self._distribute(
                state,
                lower.members,
                lower.team_id,
                var_l,
                new_mu_l - mu_l,
                new_sigma_l / sigma_l,
            )
