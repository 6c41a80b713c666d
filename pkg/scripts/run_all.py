"""Run every experiment with the configs in configs/ and summarize the manifests."""

import argparse
import json
from pathlib import Path

from linfstab.experiments import EXPERIMENTS, ExperimentConfig, run_experiment

ROOT = Path(__file__).resolve().parents[1]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(ROOT / "runs"))
    ap.add_argument("--seed", default=None)
    args = ap.parse_args()
    failed = 0
    for name in EXPERIMENTS:
        cfg = ExperimentConfig.from_file(
            name, ROOT / "configs" / f"{name}.conf", args.seed, Path(args.out) / name
        )
        manifest = run_experiment(cfg)
        bad = [a.name for a in manifest.assertions if not a.passed]
        failed += bool(bad)
        print(f"{name:18s} {manifest.wall_clock_seconds:7.2f} s  "
              f"{len(manifest.assertions) - len(bad)}/{len(manifest.assertions)} assertions")
        for b in bad:
            print(f"    FAIL {b}")
    summary = {n: json.loads((Path(args.out) / n / "manifest.json").read_text())["summary"]
               for n in EXPERIMENTS}
    (Path(args.out) / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
