"""The full file pipeline: generate, replay, trend, inspect.

Everything the command line does is also a function call; this demo
drives the CLI entry point directly so the artifacts on disk are
exactly what `royale-ratings ...` would produce.

Run:  python3 demos/file_workflow.py
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

from royale_ratings.cli import main

with tempfile.TemporaryDirectory() as tmp:
    root = Path(tmp)
    data = root / "data"
    run = root / "run"
    exp = root / "exp"

    print("1. synthesize a small match log")
    main(
        [
            "synth",
            "--players", "60",
            "--team-size", "2",
            "--teams", "10",
            "--matches", "200",
            "--noise-spread", "0.5",
            "--seed", "1",
            "--output-dir", str(data),
        ]
    )

    print("\n2. replay it through glicko, scoring every match")
    main(
        [
            "replay",
            "--input", str(data / "matches.csv"),
            "--output-dir", str(run),
            "--system", "glicko",
            "--seed", "2",
        ]
    )

    print("\n3. whole-population trend with a 50-match window")
    main(
        [
            "experiment",
            "--input", str(data / "matches.csv"),
            "--output-dir", str(exp),
            "--system", "glicko",
            "--setup", "all",
            "--window", "50",
            "--seed", "2",
        ]
    )

    print("\n4. inspect the rating store the replay left behind")
    main(["inspect", "--input", str(run / "rating_store.txt")])

    summary = json.loads((exp / "run_summary.json").read_text())
    trend_lines = (exp / "trend.csv").read_text().splitlines()
    print("\nWhat landed on disk:")
    for directory in (data, run, exp):
        for path in sorted(directory.iterdir()):
            print(f"  {path.relative_to(root)}")
    print(f"\ntrend.csv has {len(trend_lines) - 1} rows; the last one is:")
    print(f"  {trend_lines[0]}")
    print(f"  {trend_lines[-1]}")
    print(
        f"\nmean NDCG over the whole run: "
        f"{summary['mean_metrics']['ndcg']:.4f}"
    )
