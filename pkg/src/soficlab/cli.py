"""Command-line experiment runner.

    soficlab <kind> --config <path> [--jobs k] [--out dir] [--plot]

Kinds: entropy, betti, defect, luck, oracle-check, chain-info.
Exit codes: 0 success, 2 config error, 3 cap exceeded, 4 invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import oracle, report, sofic
from .complexes import SignConventionError
from .config import KINDS, ConfigError, ExperimentConfig, load_config
from .fflinalg import DimensionCap
from .sofic import NotHomomorphism

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAP = 3
EXIT_INVARIANT = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="soficlab",
        description="Per-level entropy, Betti, and defect experiments on "
        "algebraic subshifts over sofic approximations.",
    )
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        sp = sub.add_parser(kind, help=f"run a {kind} experiment")
        sp.add_argument("--config", required=True, help="TOML experiment file")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes")
        sp.add_argument("--out", default=".", help="output directory")
        sp.add_argument("--plot", action="store_true", help="also write an SVG chart")
    return parser


def _compute_rows(cfg: ExperimentConfig, jobs: int) -> list[dict]:
    if cfg.kind == "chain-info":
        return report.chain_info_rows(cfg)
    indices = range(len(cfg.levels))
    if jobs > 1 and len(cfg.levels) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_level_job, [(cfg, i) for i in indices]))
    return [report.compute_level_row(cfg, i) for i in indices]


def _level_job(payload: tuple[ExperimentConfig, int]) -> dict:
    cfg, index = payload
    return report.compute_level_row(cfg, index)


def run(kind: str, config_path: str, jobs: int = 1, out: str = ".", plot: bool = False) -> int:
    try:
        cfg = load_config(config_path, kind)
        rows = _compute_rows(cfg, jobs)
        rep = report.Report(cfg, rows, report.build_summary(cfg, rows))
        out_dir = Path(out)
        out_dir.mkdir(parents=True, exist_ok=True)
        base = out_dir / f"{cfg.kind.replace('-', '_')}_{cfg.stem}"
        report.write_csv(rep, base.with_suffix(".csv"))
        report.write_json(rep, base.with_suffix(".json"))
        if plot:
            report.write_plot(rep, base.with_suffix(".svg"))
        if kind == "oracle-check":
            for row in rows:
                print(
                    f"level {row['level']} N={row['N']}: brute count "
                    f"{row['brute_count']} == p^kernel_dim {row['linear_count']}"
                )
        print(f"wrote {base.with_suffix('.csv')}")
        return EXIT_OK
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (sofic.CapExceeded, oracle.CapExceeded, DimensionCap) as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except (oracle.Mismatch, SignConventionError, NotHomomorphism, AssertionError) as e:
        print(f"invariant violation: {e}", file=sys.stderr)
        return EXIT_INVARIANT


def main(argv: list[str] | None = None) -> None:
    args = build_parser().parse_args(argv)
    sys.exit(run(args.kind, args.config, args.jobs, args.out, args.plot))


if __name__ == "__main__":
    main()
