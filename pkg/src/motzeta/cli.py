"""Command-line front end: series, local, poisson, igusa, height.

Exit codes: 0 on success, 2 on input/config validation errors, 3 on an
internal invariant failure.  ``--json`` switches to a machine-readable
report; identical inputs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import workbench
from .grot import MotError
from .workbench import WorkbenchError


def _read_config(path: str | None) -> dict:
    if path is None:
        raise WorkbenchError("this command needs --config PATH")
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise WorkbenchError(f"cannot read config: {exc}")
    except json.JSONDecodeError as exc:
        raise WorkbenchError(f"config is not valid JSON: {exc}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="motzeta",
        description="exact workbench for motivic height zeta computations")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p_series = sub.add_parser("series", help="rational series operations")
    p_series.add_argument("action", choices=["expand", "pfrac", "taub"])
    p_series.add_argument("--config", help="series spec (JSON)")
    p_series.add_argument("--depth", type=int, default=10,
                          help="expansion depth for 'expand'")
    p_series.add_argument("--precision", type=int, default=None,
                          help="alias accepted for --depth")

    p_local = sub.add_parser("local", help="local window computations")
    p_local.add_argument("action", choices=["fourier", "invert", "osc"])
    p_local.add_argument("--config", help="local function spec (JSON)")
    p_local.add_argument("--q", type=int, default=3)
    p_local.add_argument("--m", type=int, default=0)
    p_local.add_argument("--d", type=int, default=1)
    p_local.add_argument("--ord-a", type=int, default=None)
    p_local.add_argument("--depth", type=int, default=None)

    p_poisson = sub.add_parser("poisson", help="global Poisson check")
    p_poisson.add_argument("--config", required=True)

    p_igusa = sub.add_parser("igusa", help="boundary-datum local zeta")
    p_igusa.add_argument("--config", required=True)

    p_height = sub.add_parser("height", help="end-to-end toy height zeta")
    p_height.add_argument("--config")
    p_height.add_argument("--q", type=int, default=None)
    p_height.add_argument("--depth", type=int, default=4,
                          help="coefficient truncation n_max")
    return parser


def _dispatch(args) -> tuple[list[str], dict]:
    if args.command == "series":
        cfg = _read_config(args.config)
        if args.action == "expand":
            depth = args.precision if args.precision is not None else args.depth
            return workbench.cmd_series_expand(cfg, depth)
        if args.action == "pfrac":
            return workbench.cmd_series_pfrac(cfg)
        return workbench.cmd_series_taub(cfg)
    if args.command == "local":
        if args.action == "osc":
            cfg = _read_config(args.config) if args.config else {}
            if cfg:
                allowed = {"q", "m", "d", "ord_a", "a", "depth"}
                unknown = set(cfg) - allowed
                if unknown:
                    raise WorkbenchError(f"osc config: unknown fields {sorted(unknown)}")
            return workbench.cmd_local_osc(
                q=int(cfg.get("q", args.q)),
                m=int(cfg.get("m", args.m)),
                d=int(cfg.get("d", args.d)),
                ord_a=cfg.get("ord_a", args.ord_a),
                a_spec=cfg.get("a"),
                depth=cfg.get("depth", args.depth))
        cfg = _read_config(args.config)
        if args.action == "fourier":
            return workbench.cmd_local_fourier(cfg)
        return workbench.cmd_local_invert(cfg)
    if args.command == "poisson":
        return workbench.cmd_poisson(_read_config(args.config))
    if args.command == "igusa":
        return workbench.cmd_igusa(_read_config(args.config))
    if args.command == "height":
        cfg = _read_config(args.config) if args.config else {}
        if cfg:
            allowed = {"q", "n_max", "extra_good_places"}
            unknown = set(cfg) - allowed
            if unknown:
                raise WorkbenchError(f"height config: unknown fields {sorted(unknown)}")
        q = args.q if args.q is not None else int(cfg.get("q", 3))
        n_max = int(cfg.get("n_max", args.depth))
        extra = tuple(cfg.get("extra_good_places", ()))
        return workbench.cmd_height(q, n_max, extra)
    raise WorkbenchError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        lines, obj = _dispatch(args)
    except (WorkbenchError, MotError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return workbench.VALIDATION_EXIT
    except AssertionError as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return workbench.INTERNAL_EXIT
    if args.json:
        print(json.dumps(obj, sort_keys=True, separators=(",", ": "),
                         indent=1))
    else:
        for line in lines:
            print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
