"""Command-line interface.

Subcommands ``spectrum``, ``steady``, ``current``, ``rectify``, ``sweep``
and ``verify``. The chain and baths come from a JSON config
(``--config``) or inline flags (``--chain``, ``-p key=value``,
``--T-L``, ``--T-R``). Exit codes: 0 success, 2 invalid input,
3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .errors import ConfigError, OutputError, XXRectError
from .spectral import diagonalize
from .sweep import SweepConfig, format_float, load_config, parse_config, run_sweep
from .transport import rectify, transport


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file (schema_version 1)")
    parser.add_argument("--output", help="write results here instead of stdout")
    parser.add_argument("--threads", type=int, default=None, help="worker processes for sweeps")


def _inline(parser: argparse.ArgumentParser, baths: bool) -> None:
    parser.add_argument("--chain", help="chain template, e.g. boundary-perturbed")
    parser.add_argument("-p", "--param", action="append", default=[], metavar="KEY=VALUE",
                        help="template parameter; values are JSON (lists allowed)")
    if baths:
        parser.add_argument("--T-L", dest="T_L", help="left bath temperature (number, inf or zero)")
        parser.add_argument("--T-R", dest="T_R", help="right bath temperature")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xxrect", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_, needs_baths in (
        ("spectrum", "single-particle energies and boundary weights", False),
        ("steady", "steady-state mode occupations", True),
        ("current", "particle and energy currents", True),
        ("rectify", "forward/reverse heat currents and rectification factor", True),
    ):
        p = sub.add_parser(name, help=help_)
        _common(p)
        _inline(p, needs_baths)
    p = sub.add_parser("sweep", help="two-parameter rectification sweep to CSV")
    _common(p)
    p = sub.add_parser("verify", help="cross-check the formulas against independent routes")
    _common(p)
    p.add_argument("--quick", action="store_true", help="fewer random draws")
    return parser


def _inline_config(args, needs_baths: bool) -> SweepConfig:
    if not args.chain:
        raise ConfigError("give --config or --chain", field="chain")
    params = {}
    for item in args.param:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"parameter {item!r} is not KEY=VALUE", field=item)
        try:
            params[key] = json.loads(value)
        except json.JSONDecodeError:
            raise ConfigError(f"cannot read value of {key!r}: {value!r}", field=key) from None
    raw = {"schema_version": 1, "chain": {"template": args.chain, "params": params}}
    if needs_baths:
        if args.T_L is None or args.T_R is None:
            raise ConfigError("give both --T-L and --T-R", field="baths")
        raw["baths"] = {"T_L": args.T_L, "T_R": args.T_R}
    return parse_config(json.dumps(raw), require_sweep=False)


def _config(args, needs_baths: bool) -> SweepConfig:
    cfg = load_config(args.config, require_sweep=False) if args.config else _inline_config(args, needs_baths)
    if needs_baths and not cfg.baths:
        raise ConfigError("this command needs bath temperatures", field="baths")
    return cfg


def _write(text: str, path: str | None) -> None:
    if path and path != "-":
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise OutputError(f"cannot write {path}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _csv(header: str, rows) -> str:
    return "\n".join([header] + [",".join(r) for r in rows]) + "\n"


def cmd_spectrum(args) -> int:
    spec = diagonalize(_config(args, False).chain())
    rows = [(str(k + 1), format_float(e), format_float(a), format_float(b))
            for k, (e, a, b) in enumerate(zip(spec.eps, spec.gL, spec.gR))]
    _write(_csv("k,eps,gL,gR", rows), args.output)
    for w in spec.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def cmd_steady(args) -> int:
    cfg = _config(args, True)
    chain = cfg.chain()
    spec = diagonalize(chain)
    res = transport(spec, cfg.bath_pair(), chain.gamma)
    rows = [(str(k + 1), format_float(e), format_float(a), format_float(b), format_float(n))
            for k, (e, a, b, n) in enumerate(zip(spec.eps, spec.gL, spec.gR, res.occupations))]
    _write(_csv("k,eps,gL,gR,occupation", rows), args.output)
    for k in res.decoupled:
        print(f"warning: mode {k + 1} is coupled to neither bath; occupation undefined", file=sys.stderr)
    return 0


def cmd_current(args) -> int:
    cfg = _config(args, True)
    chain = cfg.chain()
    res = transport(diagonalize(chain), cfg.bath_pair(), chain.gamma)
    _write(_csv("J_N,J_E", [(format_float(res.J_N), format_float(res.J_E))]), args.output)
    return 0


def cmd_rectify(args) -> int:
    cfg = _config(args, True)
    res = rectify(cfg.chain(), cfg.bath_pair())
    row = (format_float(res.J_fwd), format_float(res.J_rev), format_float(res.R), ";".join(res.flags))
    _write(_csv("J_fwd,J_rev,R,flags", [row]), args.output)
    return 0


def cmd_sweep(args) -> int:
    if not args.config:
        raise ConfigError("sweep needs --config", field="config")
    cfg = load_config(args.config)
    output = args.output or cfg.output or "-"
    run_sweep(cfg, threads=args.threads, output=output)
    return 0


def cmd_verify(args) -> int:
    from .verify import format_table, run_all

    checks = run_all(quick=args.quick)
    _write(format_table(checks) + "\n", args.output)
    return 0 if all(c.passed for c in checks) else 3


COMMANDS = {
    "spectrum": cmd_spectrum,
    "steady": cmd_steady,
    "current": cmd_current,
    "rectify": cmd_rectify,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except XXRectError as exc:
        where = f" [{exc.field}]" if getattr(exc, "field", None) else ""
        print(f"xxrect: {type(exc).__name__}{where}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
