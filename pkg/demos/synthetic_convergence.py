"""Ratings recover planted skills on a noiseless synthetic stream.

Generates 1,000 duo matches from fixed latent skills, replays them
through each rating system, and reports how well the final ratings
rank-order the players against the truth.

Run:  python3 demos/synthetic_convergence.py
"""

from __future__ import annotations

from scipy.stats import kendalltau

from royale_ratings import SynthConfig, generate, make_system, replay

config = SynthConfig(
    player_count=200,
    team_size=2,
    teams_per_match=10,
    match_count=1000,
    noise_spread=0.0,
    seed=7,
)
matches, skills = generate(config)
players = sorted(skills)
latent = [skills[p] for p in players]

print(
    f"{config.match_count} matches, {config.player_count} players, "
    f"{config.teams_per_match} duo teams per match, zero performance noise.\n"
)
print(f"{'system':10s} {'final tau':>10s} {'tau 1st decile':>15s} {'tau last decile':>16s}")

for name in ("elo", "glicko", "trueskill", "prevrank"):
    result = replay(matches, make_system(name), seed=11)
    final = [result.store.ratings[p].mu for p in players]
    against_truth = kendalltau(final, latent).statistic

    tenth = len(result.reports) // 10
    first = sum(r.metrics.kendall_tau for r in result.reports[:tenth]) / tenth
    last = sum(r.metrics.kendall_tau for r in result.reports[-tenth:]) / tenth
    print(f"{name:10s} {against_truth:10.4f} {first:15.4f} {last:16.4f}")

print(
    """
final tau compares end-of-stream ratings with the planted skills
(prevrank keeps mu at 0 for everyone, so its column is meaningless).
The decile columns are per-match prediction quality: every rating
system starts near chance and climbs as beliefs sharpen, which is the
convergence the synthetic stream is designed to exhibit.
"""
)
