# create_acceptance_report.py
"""
Run every acceptance check and write a JSON report.

Behavior:
 - Seed, random input sizes (random_word_length, random_terms, steps,
   walk_word_length) and output path come from config.yaml (or --config,
   HWTHETA_* environment), flags on top.
 - Trial counts are DEFAULT_TRIALS below, multiplied by --scale.
 - --only runs a subset by function name (e.g. --only realization involution).
 - --scale shrinks every randomized trial count for a quick smoke run.
 - Writes report_path (default results/acceptance.json); exits 1 if any check failed.
"""

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

from tqdm import tqdm

from hwtheta import __version__
from hwtheta.acceptance import CRITERIA, RandomSizes, run_criterion
from hwtheta.config import load_config
from hwtheta.errors import ConfigError
from hwtheta.log import setup_logging, verbosity_level

BASE = Path(__file__).resolve().parent
logger = logging.getLogger("hwtheta.report")

# default trial counts per check; None keeps the check's own fixed size
DEFAULT_TRIALS = {
    "delta_vanishing": None,
    "realization": 200,
    "involution": 500,
    "relation_soundness": 1000,
    "oracle_agreement": 500,
    "infinite_rank": 100,
    "meridian_vanishing": 100,
    "g_pairing": 100,
    "performance": None,
}


# ---------- Helpers ----------
def scaled(name, scale):
    n = DEFAULT_TRIALS.get(name)
    if n is None or scale >= 1.0:
        return n
    return max(1, int(n * scale))


def write_report(path: Path, report: dict):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2), encoding="utf8")
    logger.warning("wrote %s", path)


# ---------- Main ----------
def main(argv=None):
    parser = argparse.ArgumentParser(description="Run the acceptance checks and write a JSON report")
    parser.add_argument("--config", help="YAML config file", default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", "-o", help="report path (overrides report_path)", default=None)
    parser.add_argument("--only", nargs="*", default=None, help="check names to run")
    parser.add_argument("--scale", type=float, default=1.0, help="multiply randomized trial counts")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    setup_logging(verbosity_level(args.verbose, cfg["log_level"]))
    seed = args.seed if args.seed is not None else cfg["seed"]
    sizes = RandomSizes.from_config(cfg)

    checks = CRITERIA
    if args.only:
        known = {c.__name__ for c in CRITERIA}
        unknown = sorted(set(args.only) - known)
        if unknown:
            print(f"error: unknown check(s): {', '.join(unknown)}", file=sys.stderr)
            return 2
        checks = [c for c in CRITERIA if c.__name__ in args.only]

    results = []
    for check in tqdm(checks, desc="acceptance", unit="check", file=sys.stderr):
        trials = scaled(check.__name__, args.scale)
        results.append(run_criterion(check, seed=seed, trials=trials, sizes=sizes))

    report = {
        "generated_at": int(time.time()),
        "generated_iso": datetime.now(timezone.utc).isoformat(),
        "version": __version__,
        "seed": seed,
        "scale": args.scale,
        "sizes": asdict(sizes),
        "passed": all(r.ok for r in results),
        "criteria": [r.to_dict() for r in results],
    }
    out = Path(args.out) if args.out else BASE / cfg["report_path"]
    write_report(out, report)
    for r in results:
        print(f"{'ok  ' if r.ok else 'FAIL'} {r.name}: {r.passed}/{r.trials} ({r.seconds:.2f}s)")
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
