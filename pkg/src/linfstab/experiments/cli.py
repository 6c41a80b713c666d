"""``linfstab <experiment> --config <path> [--out <dir>] [--seed <u64>]``.

Exit status: 0 when every manifest assertion passes, 1 on an assertion
failure, 2 on a configuration error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import EXPERIMENTS, ConfigError, ExperimentConfig
from .runners import run_experiment

log = logging.getLogger("linfstab")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="linfstab", description=__doc__.splitlines()[0])
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--config", required=True, help="flat key = value config file")
    p.add_argument("--out", default=None, help="output directory (default runs/<experiment>)")
    p.add_argument("--seed", default=None, help="unsigned 64-bit seed, overrides the config")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        config = ExperimentConfig.from_file(args.experiment, args.config, args.seed, args.out)
        manifest = run_experiment(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    for a in manifest.assertions:
        status = "PASS" if a.passed else "FAIL"
        print(f"{status} {a.name}")
    print(f"manifest: {config.out_dir / 'manifest.json'}")
    return 0 if manifest.passed else 1


if __name__ == "__main__":
    sys.exit(main())
