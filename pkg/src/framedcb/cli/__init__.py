"""Command-line entry point.

Every subcommand prints a JSON report (``--format text`` gives a short
summary instead). Exit status: 0 when every check passed, 1 when some check
failed, 2 for usage errors, 3 when the requested type has no canonical basis
here (only A1 and A2 do), 4 for internal errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from typing import Sequence

from .. import __version__
from ..canonical import UnsupportedTypeError
from ..report import Report
from . import commands
from .cache import CACHE_VERSION, TableCache
from .config import ConfigError, builtin_config, load_config

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3
EXIT_INTERNAL = 4

log = logging.getLogger("framedcb")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _common(p: argparse.ArgumentParser):
    g = p.add_argument_group("common options")
    src = g.add_mutually_exclusive_group()
    src.add_argument("--type", default=None, help="built-in Cartan type (A1, A2, A3)")
    src.add_argument("--config", default=None, help="datum file with [datum] and [weights] sections")
    g.add_argument("--output", "-o", default=None, help="write the report here instead of stdout")
    g.add_argument("--format", choices=("json", "text"), default="json")
    g.add_argument("--cache-dir", default=None, help="table cache directory (env FRAMEDCB_CACHE_DIR)")
    g.add_argument("--no-cache", action="store_true", help="do not read or write the table cache")
    g.add_argument("--seed", type=int, default=0, help="seed for randomized choices (default 0)")
    g.add_argument("--timing", action="store_true", help="include per-check timings in the report")
    g.add_argument("--verbose", "-v", action="count", default=0)


def _weights(p: argparse.ArgumentParser):
    p.add_argument("--xi", default=None, help="first weight: name from the config or pairings like 1,0")
    p.add_argument("--lam", "--lambda", dest="lam", default=None, help="second weight")
    p.add_argument("--m", type=int, default=None, help="shorthand for --xi in type A1")
    p.add_argument("--n", type=int, default=None, help="shorthand for --lam in type A1")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="framedcb", description="Framed construction of canonical bases: computations and checks.")
    parser.add_argument("--version", action="version", version=f"framedcb {__version__}")
    groups = parser.add_subparsers(dest="group", metavar="GROUP", parser_class=_Parser)
    groups.required = True

    def group(name, help_text):
        g = groups.add_parser(name, help=help_text)
        sub = g.add_subparsers(dest="action", metavar="ACTION", parser_class=_Parser)
        sub.required = True
        return sub

    def leaf(sub, name, help_text):
        p = sub.add_parser(name, help=help_text)
        _common(p)
        return p

    d = group("datum", "Cartan data")
    p = leaf(d, "frame", "frame a datum and print the new pairing matrix")
    p.add_argument("--generations", type=int, default=1)
    leaf(d, "show", "print the datum and named weights")

    f = group("falg", "the algebra f")
    p = leaf(f, "dim", "dimension of a weight space")
    p.add_argument("--nu", required=True)
    p = leaf(f, "gram", "pairing matrix of the words of a weight")
    p.add_argument("--nu", required=True)
    p.add_argument("--merged", action="store_true", help="only words with merged adjacent letters")
    p = leaf(f, "serre-check", "Serre elements lie in the radical of the form")
    p.add_argument("--max-degree", type=int, default=6)

    c = group("cb", "canonical bases (types A1 and A2)")
    p = leaf(c, "list", "list canonical basis elements")
    p.add_argument("--nu", default=None)
    p.add_argument("--max-degree", type=int, default=None)
    p = leaf(c, "expand", "canonical coordinates of a word")
    p.add_argument("--word", required=True, help="e.g. i(2).j.i")

    mo = group("module", "highest-weight modules")
    p = leaf(mo, "form", "admissible form of two vectors x eta, y eta")
    _weights(p)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p = leaf(mo, "weights", "weight multiplicities")
    _weights(p)
    p.add_argument("--max-degree", type=int, default=64)

    t = group("tensor", "tensor products")
    p = leaf(t, "diamond", "the canonical basis of Lambda_xi (x) Lambda_lambda")
    _weights(p)
    p = leaf(t, "theta", "apply the quasi-R-matrix to a basis tensor")
    _weights(p)
    p.add_argument("--b1", required=True)
    p.add_argument("--b2", required=True)

    fr = group("framed", "the framed construction")
    p = leaf(fr, "verify-cb", "framed basis versus the tensor canonical basis (base A1)")
    _weights(p)
    p = leaf(fr, "verify-positivity", "positivity of E_i, F_i on both bases")
    _weights(p)
    side = p.add_mutually_exclusive_group()
    side.add_argument("--tensor-only", action="store_true")
    side.add_argument("--framed-only", action="store_true")
    p = leaf(fr, "verify-pairings", "the two-pairings identity (base A1)")
    _weights(p)
    p.add_argument("--max-degree", type=int, default=4)
    p = leaf(fr, "phi", "image of a framed element in the tensor product")
    _weights(p)
    p.add_argument("--word", required=True, help="framed word, e.g. i.i'(2).i")

    cr = group("crystal", "Kashiwara operators")
    p = leaf(cr, "check", "run a crystal property suite")
    from ..crystal import SUITES

    p.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])
    return parser


def _weight_args(args, cfg, need_xi=True) -> tuple:
    xi = args.xi if args.xi is not None else (str(args.m) if args.m is not None else None)
    lam = args.lam if args.lam is not None else (str(args.n) if args.n is not None else None)
    if (need_xi and xi is None) or lam is None:
        raise ConfigError("weights required: give --xi/--lam (or --m/--n in type A1)")
    return xi, lam


def _a1_ints(args) -> tuple:
    xi, lam = _weight_args(args, None)
    try:
        return int(xi), int(lam)
    except ValueError:
        raise ConfigError("this command takes integer --m/--n (base type A1)") from None


def _dispatch(args, cfg, cache) -> Report:
    key = (args.group, args.action)
    if key == ("datum", "frame"):
        return commands.datum_frame(cfg, args.generations)
    if key == ("datum", "show"):
        return commands.datum_show(cfg)
    if key == ("falg", "dim"):
        return commands.falg_dim(cfg, cache, args.nu)
    if key == ("falg", "gram"):
        return commands.falg_gram(cfg, cache, args.nu, args.merged)
    if key == ("falg", "serre-check"):
        return commands.falg_serre_check(cfg, cache, args.max_degree)
    if key == ("cb", "list"):
        return commands.cb_list(cfg, cache, args.nu, args.max_degree)
    if key == ("cb", "expand"):
        return commands.cb_expand(cfg, args.word)
    if key == ("module", "form"):
        _, lam = _weight_args(args, cfg, need_xi=False)
        return commands.module_form(cfg, lam, args.x, args.y)
    if key == ("module", "weights"):
        _, lam = _weight_args(args, cfg, need_xi=False)
        return commands.module_weights(cfg, lam, args.max_degree)
    if key == ("tensor", "diamond"):
        return commands.tensor_diamond(cfg, *_weight_args(args, cfg))
    if key == ("tensor", "theta"):
        return commands.tensor_theta(cfg, *_weight_args(args, cfg), args.b1, args.b2)
    if key == ("framed", "verify-cb"):
        return commands.framed_verify_cb(cfg, *_a1_ints(args))
    if key == ("framed", "verify-pairings"):
        return commands.framed_verify_pairings(cfg, *_a1_ints(args), args.max_degree)
    if key == ("framed", "verify-positivity"):
        return commands.framed_verify_positivity(cfg, *_weight_args(args, cfg),
                                                 framed_side=not args.tensor_only, tensor_side=not args.framed_only)
    if key == ("framed", "phi"):
        return commands.framed_phi(cfg, *_weight_args(args, cfg), args.word)
    if key == ("crystal", "check"):
        return commands.crystal_check(args.suite)
    raise ConfigError(f"unknown command {args.group} {args.action}")


_ECHO_SKIP = {"output", "format", "cache_dir", "no_cache", "timing", "verbose", "group", "action", "seed"}


def _emit(text: str, output: "str | None"):
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _render(rep: Report, fmt: str, timing: bool) -> str:
    if fmt == "json":
        return rep.dumps(timing)
    lines = []
    text = rep.data.get("text")
    if text:
        lines.append(str(text))
    for c in rep.checks:
        lines.append(f"{'PASS' if c.passed else 'FAIL'}  {c.name}")
    lines.append(f"{len(rep.checks) - len(rep.failures)}/{len(rep.checks)} checks passed")
    return "\n".join(lines)


def _error_report(command: str, kind: str, message: str, meta: dict) -> Report:
    rep = Report(command, meta=dict(meta))
    rep.add(kind, False, {"message": message})
    return rep


def run(argv: "Sequence[str] | None" = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(name)s: %(message)s")
    command = f"{args.group} {args.action}"
    echo = {k: v for k, v in sorted(vars(args).items()) if k not in _ECHO_SKIP and v is not None}
    meta = {"version": __version__, "arguments": echo}
    try:
        cfg = load_config(args.config) if args.config else builtin_config(args.type or "A1")
    except (ConfigError, ValueError) as exc:
        sys.stderr.write(f"framedcb: {exc}\n")
        return EXIT_USAGE
    meta["datum"] = {"source": cfg.source, "fingerprint": cfg.datum.fingerprint()}
    meta["seed"] = args.seed
    cache = _NoCache() if args.no_cache else TableCache(args.cache_dir, rng=random.Random(args.seed))
    try:
        rep = _dispatch(args, cfg, cache)
    except ConfigError as exc:
        sys.stderr.write(f"framedcb: {exc}\n")
        return EXIT_USAGE
    except UnsupportedTypeError as exc:
        sys.stderr.write(f"framedcb: unsupported type: {exc}\n")
        _emit(_render(_error_report(command, "unsupported type", str(exc), meta), args.format, False), args.output)
        return EXIT_UNSUPPORTED
    except Exception as exc:  # report internal failures in the same machine-readable shape
        log.exception("internal error")
        _emit(_render(_error_report(command, "internal error", f"{type(exc).__name__}: {exc}", meta),
                      args.format, False), args.output)
        return EXIT_INTERNAL
    rep.command = command
    rep.meta = {**meta, **rep.meta}
    _emit(_render(rep, args.format, args.timing), args.output)
    return EXIT_OK if rep.passed else EXIT_FAILED


class _NoCache:
    """Stand-in with the ``TableCache.gram`` interface that never touches disk."""

    def gram(self, datum, nu, raw: bool = True):
        from ..falg import gram

        return gram(datum, nu, raw=raw)


def main() -> None:
    sys.exit(run())


__all__ = ["run", "main", "build_parser", "EXIT_OK", "EXIT_FAILED", "EXIT_USAGE", "EXIT_UNSUPPORTED",
           "EXIT_INTERNAL", "CACHE_VERSION"]
