"""Command-line runner: ``cdkernel <study> --config FILE --out DIR [--seed N]``.

Exit codes: 0 success, 2 configuration or usage error, 3 numerical failure.
"""

import argparse
import logging
import os
import sys

from .config import load_config
from .errors import InputError, NumericalError
from .experiments import RUNNERS

log = logging.getLogger("cdkernel")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cdkernel",
        description="Christoffel-Darboux kernel experiments; each study writes one CSV table.",
    )
    sub = parser.add_subparsers(dest="study", required=True, metavar="STUDY")
    for name in RUNNERS:
        p = sub.add_parser(name, help=f"run the {name} study")
        p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--out", help="output directory (default: config 'out' or '.')")
        p.add_argument("--seed", type=int, help="override the config seed")
    return parser


def run(study, config_path, out=None, seed=None):
    """Run one study and return the path of the CSV it wrote."""
    cfg = load_config(config_path)
    if seed is not None:
        if seed < 0:
            raise InputError("seed must be an unsigned integer")
        cfg = cfg.with_seed(seed)
    table = RUNNERS[study](cfg)
    out_dir = out or cfg.out or "."
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{study}.csv")
    comment = f"study={study} config_sha256={cfg.digest()} seed={cfg.seed}"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(table.to_csv(comment))
    return path


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        path = run(args.study, args.config, args.out, args.seed)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except NumericalError as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    log.info("wrote %s", path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
