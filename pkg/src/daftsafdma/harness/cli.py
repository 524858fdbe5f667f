"""Command-line entry point: ``daftsafdma {papr,ber} [options]``."""

from __future__ import annotations

import argparse
import logging
import sys

from ..enums import Scheme, Strategy
from ..errors import ConfigurationError
from .config import parse_config
from .experiments import run_ber_experiment, run_papr_experiment
from .output import emit_outputs

_BOTH_SCHEMES = [s.value for s in Scheme]
_BOTH_STRATEGIES = [s.value for s in Strategy]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="daftsafdma", description=__doc__)
    sub = parser.add_subparsers(dest="experiment", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (a previous run's .meta.json also works)")
    common.add_argument("--seed", type=int)
    common.add_argument("--frames", type=int)
    common.add_argument("--n", type=int, help="number of chirp subcarriers N")
    common.add_argument("--users", type=int, dest="k_users", help="number of users K")
    common.add_argument("--strategy", choices=_BOTH_STRATEGIES + ["both"])
    common.add_argument("--scheme", choices=["daft-s", "o-afdma", "both"])
    common.add_argument("--alpha-max", type=int, dest="alpha_max")
    common.add_argument("--workers", type=int)
    common.add_argument("--no-offset-compensation", action="store_const", const=False,
                        dest="offset_compensation", help="map spread users without offset-phase correction")
    common.add_argument("--plot-data", action="store_const", const=True, dest="plot_data")
    common.add_argument("--output")
    common.add_argument("-v", "--verbose", action="store_true")

    papr = sub.add_parser("papr", parents=[common], help="PAPR CCDF experiment")
    papr.add_argument("--papr-mode", choices=["composite", "per-user"], dest="papr_mode")
    papr.add_argument("--oversample", type=int)

    ber = sub.add_parser("ber", parents=[common], help="bit-error-rate experiment")
    ber.add_argument("--paths", type=int, dest="p_paths")
    ber.add_argument("--l-max", type=int, dest="l_max")
    ber.add_argument("--cpp-len", type=int, dest="cpp_len")
    ber.add_argument("--ebn0", type=float, nargs="+", dest="ebn0_grid_db", metavar="DB")
    ber.add_argument("--target-errors", type=int, dest="target_errors")
    ber.add_argument("--noiseless", action="store_const", const=True)
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    skip = {"experiment", "config", "verbose", "strategy", "scheme"}
    out = {k: v for k, v in vars(args).items() if k not in skip}
    if args.strategy:
        out["strategies"] = _BOTH_STRATEGIES if args.strategy == "both" else [args.strategy]
    if args.scheme:
        out["schemes"] = _BOTH_SCHEMES if args.scheme == "both" else [args.scheme]
    return out


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = parse_config(args.config, _overrides(args))
        if args.experiment == "papr":
            result = run_papr_experiment(cfg)
        else:
            result = run_ber_experiment(cfg)
        paths = emit_outputs(result, cfg, args.experiment)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
