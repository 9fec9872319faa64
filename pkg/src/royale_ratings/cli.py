"""Command line front end.

One binary, four subcommands:

    royale-ratings replay     --system elo --input matches.csv --output-dir out
    royale-ratings experiment --setup best --system trueskill --input matches.csv --output-dir out
    royale-ratings synth      --players 200 --teams 10 --team-size 2 --matches 1000 --output-dir out
    royale-ratings inspect    --input matches.csv

Every run ends by echoing a JSON summary to stdout that contains every
parameter the run actually used, defaulted or not; the same JSON is
written next to the other outputs.  Outputs carry no wall-clock state,
so identical flags and seed reproduce identical bytes.

Exit codes: 0 success, 1 unusable data, 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

# the replay module is imported by name because the package re-exports
# its replay() function under the same name, shadowing the module attribute
from . import synth
from .replay import (
    SETUP_NAMES,
    IngestStats,
    RatingStore,
    ingest,
    mean_metrics,
    mean_metrics_alt_index,
    replay,
    setup_all_players,
    setup_best_players,
    setup_frequent_players,
    write_match_metrics_csv,
    write_trend_csv,
)
from .core import RatingsError
from .systems import SYSTEM_NAMES, make_system

__all__ = ["main", "build_parser"]

_SETUP_DEFAULTS = {
    "best": {"min_games": 10, "horizon": 10},
    "frequent": {"min_games": 100, "horizon": 100},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="royale-ratings",
        description="Rate team battle-royale matches and score rank predictions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--input", required=True, help="match-log CSV to replay")
        p.add_argument("--output-dir", required=True, help="directory for outputs")
        p.add_argument("--seed", type=int, default=0, help="tie-break seed (default 0)")
        p.add_argument(
            "--team-size",
            type=int,
            default=None,
            help="keep only matches whose teams all have this size (e.g. 2 for duos)",
        )
        p.add_argument(
            "--system", required=True, choices=SYSTEM_NAMES, help="rating system"
        )
        p.add_argument("--ndcg-base", type=float, default=2.0)
        p.add_argument(
            "--position-index",
            choices=("observed", "predicted"),
            default="observed",
            help="leaderboard position convention for AP and NDCG",
        )
        group = p.add_argument_group("system parameters (defaults used when omitted)")
        group.add_argument("--k-factor", type=float, default=None, help="elo K")
        group.add_argument("--d-scale", type=float, default=None, help="elo curve scale")
        group.add_argument(
            "--default-rating", type=float, default=None, help="elo starting rating"
        )
        group.add_argument(
            "--glicko-mu", type=float, default=None, help="glicko starting rating"
        )
        group.add_argument(
            "--glicko-sigma", type=float, default=None, help="glicko starting deviation"
        )
        group.add_argument(
            "--ts-mu", type=float, default=None, help="trueskill starting mean"
        )
        group.add_argument(
            "--ts-sigma", type=float, default=None, help="trueskill starting deviation"
        )
        group.add_argument("--beta", type=float, default=None, help="trueskill beta")
        group.add_argument(
            "--tau", type=float, default=None, help="trueskill dynamics noise"
        )
        group.add_argument(
            "--member-share",
            choices=("sigma_sq", "mu"),
            default=None,
            help="how trueskill splits team deltas across members",
        )

    p_replay = sub.add_parser("replay", help="replay a match log, score every match")
    add_common(p_replay)

    p_exp = sub.add_parser("experiment", help="replay and build a metric trend")
    add_common(p_exp)
    p_exp.add_argument("--setup", required=True, choices=SETUP_NAMES)
    p_exp.add_argument(
        "--window", type=int, default=500, help="moving-average window (setup all)"
    )
    p_exp.add_argument(
        "--top-k", type=int, default=1000, help="cohort size (setup best)"
    )
    p_exp.add_argument(
        "--min-games",
        type=int,
        default=None,
        help="cohort needs more than this many games (default 10 best / 100 frequent)",
    )
    p_exp.add_argument(
        "--horizon",
        type=int,
        default=None,
        help="game indices to trend (default 10 best / 100 frequent)",
    )
    p_exp.add_argument(
        "--conservative-k",
        type=float,
        default=0.0,
        help="rank the best cohort by mu - k*sigma instead of mu",
    )

    p_synth = sub.add_parser("synth", help="generate a synthetic match log")
    p_synth.add_argument("--players", type=int, required=True)
    p_synth.add_argument("--team-size", type=int, default=2)
    p_synth.add_argument("--teams", type=int, default=10)
    p_synth.add_argument("--matches", type=int, default=1000)
    p_synth.add_argument("--skill-mean", type=float, default=0.0)
    p_synth.add_argument("--skill-spread", type=float, default=1.0)
    p_synth.add_argument("--noise-spread", type=float, default=0.0)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--output-dir", required=True)

    p_inspect = sub.add_parser(
        "inspect", help="summarize a match log or a rating-store snapshot"
    )
    p_inspect.add_argument("--input", required=True)

    return parser


def _system_overrides(args: argparse.Namespace) -> dict[str, Any]:
    by_system = {
        "elo": {
            "k_factor": args.k_factor,
            "d_scale": args.d_scale,
            "default_rating": args.default_rating,
        },
        "glicko": {
            "default_mu": args.glicko_mu,
            "default_sigma": args.glicko_sigma,
        },
        "trueskill": {
            "default_mu": args.ts_mu,
            "default_sigma": args.ts_sigma,
            "beta": args.beta,
            "tau_dynamics": args.tau,
            "member_share": args.member_share,
        },
        "prevrank": {},
    }
    return {k: v for k, v in by_system[args.system].items() if v is not None}


def _emit_summary(summary: dict[str, Any], output_dir: Path | None) -> None:
    text = json.dumps(summary, sort_keys=True, indent=2)
    if output_dir is not None:
        (output_dir / "run_summary.json").write_text(text + "\n")
    print(text)


def _load_matches(args: argparse.Namespace) -> tuple[list, IngestStats]:
    stats = IngestStats()
    matches = ingest(args.input, team_size=args.team_size, stats=stats)
    return matches, stats


def _base_summary(
    args: argparse.Namespace, system, stats: IngestStats, result
) -> dict[str, Any]:
    return {
        "command": args.command,
        "input": args.input,
        "output_dir": args.output_dir,
        "seed": args.seed,
        "team_size": args.team_size,
        "system": system.name,
        "system_params": system.params_dict(),
        "metric_options": {
            "ndcg_base": args.ndcg_base,
            "position_index": args.position_index,
        },
        "counts": {
            "rows": stats.rows,
            "matches_read": stats.matches_read,
            "matches_filtered": stats.filtered,
            "matches_rejected": len(stats.rejected),
            "matches_replayed": len(result.reports),
            "players": len(result.store.ratings),
        },
        "mean_metrics": mean_metrics(result.reports),
        "mean_metrics_alt_position_index": {
            "position_index": _other_index(args.position_index),
            **mean_metrics_alt_index(
                result.reports,
                ndcg_base=args.ndcg_base,
                position_index=_other_index(args.position_index),
            ),
        },
    }


def _other_index(position_index: str) -> str:
    return "predicted" if position_index == "observed" else "observed"


def _cmd_replay(args: argparse.Namespace) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    system = make_system(args.system, **_system_overrides(args))
    matches, stats = _load_matches(args)
    result = replay(
        matches,
        system,
        seed=args.seed,
        ndcg_base=args.ndcg_base,
        position_index=args.position_index,
    )
    write_match_metrics_csv(out / "per_match_metrics.csv", result.reports)
    result.store.save(out / "rating_store.txt")
    summary = _base_summary(args, system, stats, result)
    summary["outputs"] = {
        "per_match_metrics": "per_match_metrics.csv",
        "rating_store": "rating_store.txt",
        "run_summary": "run_summary.json",
    }
    _emit_summary(summary, out)
    return 0


def _cmd_experiment(args: argparse.Namespace) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    system = make_system(args.system, **_system_overrides(args))
    matches, stats = _load_matches(args)
    shared = {
        "seed": args.seed,
        "ndcg_base": args.ndcg_base,
        "position_index": args.position_index,
    }
    if args.setup == "all":
        setup_params: dict[str, Any] = {"window": args.window}
        trend, result = setup_all_players(
            matches, system, window=args.window, **shared
        )
    elif args.setup == "best":
        defaults = _SETUP_DEFAULTS["best"]
        setup_params = {
            "top_k": args.top_k,
            "min_games": args.min_games if args.min_games is not None else defaults["min_games"],
            "horizon": args.horizon if args.horizon is not None else defaults["horizon"],
            "conservative_k": args.conservative_k,
        }
        trend, result = setup_best_players(
            matches, system, **setup_params, **shared
        )
    else:
        defaults = _SETUP_DEFAULTS["frequent"]
        setup_params = {
            "min_games": args.min_games if args.min_games is not None else defaults["min_games"],
            "horizon": args.horizon if args.horizon is not None else defaults["horizon"],
        }
        trend, result = setup_frequent_players(
            matches, system, **setup_params, **shared
        )
    write_trend_csv(out / "trend.csv", trend)
    result.store.save(out / "rating_store.txt")
    summary = _base_summary(args, system, stats, result)
    summary["setup"] = args.setup
    summary["setup_params"] = setup_params
    summary["trend_points"] = len(trend.points)
    summary["outputs"] = {
        "trend": "trend.csv",
        "rating_store": "rating_store.txt",
        "run_summary": "run_summary.json",
    }
    _emit_summary(summary, out)
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = synth.SynthConfig(
        player_count=args.players,
        team_size=args.team_size,
        teams_per_match=args.teams,
        match_count=args.matches,
        skill_mean=args.skill_mean,
        skill_spread=args.skill_spread,
        noise_spread=args.noise_spread,
        seed=args.seed,
    )
    matches, skills = synth.generate(config)
    synth.write_match_log(out / "matches.csv", matches)
    synth.write_latent_skills(out / "latent_skills.csv", skills)
    summary = {
        "command": "synth",
        "output_dir": args.output_dir,
        "generator": synth.config_dict(config),
        "counts": {"matches": len(matches), "players": len(skills)},
        "outputs": {
            "matches": "matches.csv",
            "latent_skills": "latent_skills.csv",
            "run_summary": "run_summary.json",
        },
    }
    _emit_summary(summary, out)
    return 0


def _cmd_inspect(args: argparse.Namespace) -> int:
    path = Path(args.input)
    with open(path) as handle:
        first = handle.readline().rstrip("\n")
    if first.startswith("#royale-ratings-store"):
        store = RatingStore.load(path)
        with_sigma = sum(1 for r in store.ratings.values() if r.sigma is not None)
        summary: dict[str, Any] = {
            "command": "inspect",
            "input": args.input,
            "kind": "rating_store",
            "system": store.system,
            "system_params": store.params,
            "seed": store.seed,
            "matches_processed": store.matches_processed,
            "players": len(store.ratings),
            "players_with_sigma": with_sigma,
        }
        if store.ratings:
            top = sorted(
                store.ratings.items(), key=lambda kv: (-kv[1].mu, kv[0])
            )[:10]
            summary["top_players"] = [
                {"player_id": pid, "mu": r.mu, "games_played": r.games_played}
                for pid, r in top
            ]
    else:
        stats = IngestStats()
        matches = ingest(path, stats=stats)
        sizes: dict[int, int] = {}
        players: set[str] = set()
        for match in matches:
            for team in match.teams:
                sizes[len(team.members)] = sizes.get(len(team.members), 0) + 1
                players.update(team.members)
        summary = {
            "command": "inspect",
            "input": args.input,
            "kind": "match_log",
            "counts": {
                "rows": stats.rows,
                "matches_read": stats.matches_read,
                "matches_valid": len(matches),
                "matches_rejected": len(stats.rejected),
                "players": len(players),
            },
            "team_size_histogram": {str(k): sizes[k] for k in sorted(sizes)},
        }
        if matches:
            summary["time_range"] = [
                matches[0].timestamp.isoformat(),
                matches[-1].timestamp.isoformat(),
            ]
    _emit_summary(summary, None)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "replay": _cmd_replay,
        "experiment": _cmd_experiment,
        "synth": _cmd_synth,
        "inspect": _cmd_inspect,
    }
    try:
        return handlers[args.command](args)
    except (RatingsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
