"""Command-line interface: ``funbialign <subcommand> [flags]``.

Exit status is 0 on success, 1 for bad input and 2 when an internal
invariant breaks.  Every failure prints a single diagnostic line to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import __version__
from .errors import InputError, InvariantError

log = logging.getLogger("funbialign")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"UsageError: {self.prog}: {message}")


def _add_global(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threads", type=int, default=0, help="worker threads, 0 = all")
    p.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    p.add_argument("--config", default=None, help="flat key=value file; flags override it")


def build_parser() -> argparse.ArgumentParser:
    from .simulation import PRNG_NAME

    parser = _Parser(prog="funbialign", description="Functional motif discovery")
    parser.add_argument(
        "--version", action="version", version=f"funbialign {__version__} ({PRNG_NAME})"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a B-spline curve with embedded motifs")
    _add_global(p)
    p.add_argument("--points", type=int, default=7001)
    p.add_argument("--knot-spacing", type=int, default=10)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--n-motifs", type=int, default=4)
    p.add_argument("--occurrences", type=int, default=8)
    p.add_argument("--motif-spans", type=int, default=4)
    p.add_argument("--sigma", type=float, action="append", default=None,
                   help="noise sd; repeat once per motif or give a single shared value")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="curve file (.json or .csv)")
    p.add_argument("--truth", required=True, help="ground-truth JSON")

    p = sub.add_parser("discover", help="discover motifs in a set of curves")
    _add_global(p)
    p.add_argument("--input", required=True)
    p.add_argument("--csv-header", action="store_true", help="CSV input has a header row")
    p.add_argument("--length", type=int, required=True, help="motif length in grid points")
    p.add_argument("--min-card", type=int, required=True, help="minimum motif cardinality")
    p.add_argument("--criterion", default="rank-sum", choices=["hadj", "rank-sum", "variance"])
    p.add_argument("--max-results", type=int, default=0, help="0 = all")
    p.add_argument("--out", required=True)
    p.add_argument("--dump-dendrogram", default=None)
    p.add_argument("--seed", type=int, default=0, help="accepted for symmetry; unused")

    p = sub.add_parser("score", help="fMSR of a list of portions")
    _add_global(p)
    p.add_argument("--input", required=True)
    p.add_argument("--csv-header", action="store_true")
    p.add_argument("--portions", required=True, help="JSON list of {curve_id, start, length}")

    p = sub.add_parser("evaluate", help="compare discovered motifs with ground truth")
    _add_global(p)
    p.add_argument("--motifs", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", default=None, help="also write the report JSON here")

    p = sub.add_parser("verify-bias", help="check the sub-motif growth law by enumeration")
    _add_global(p)
    p.add_argument("--cardinality", type=int, default=6)
    p.add_argument("--length", type=int, default=20)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=1e-10)

    p = sub.add_parser("plot", help="render motifs and curves as SVG")
    _add_global(p)
    p.add_argument("--motifs", required=True)
    p.add_argument("--curves", required=True)
    p.add_argument("--csv-header", action="store_true")
    p.add_argument("--out-dir", required=True)
    return parser


def _subparser(parser: argparse.ArgumentParser, command: str) -> argparse.ArgumentParser:
    for action in parser._subparsers._group_actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)


def _config_path(argv) -> str | None:
    for k, tok in enumerate(argv):
        if tok == "--config" and k + 1 < len(argv):
            return argv[k + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _apply_config_file(parser, command: str, path: str) -> None:
    from .io import _read_text

    sub = _subparser(parser, command)
    dests = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    defaults = {}
    for lineno, line in enumerate(_read_text(path).splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"InvalidConfig: {path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        dest = key.lstrip("-").replace("-", "_")
        if dest not in dests:
            raise InputError(f"InvalidConfig: {path}:{lineno}: unknown key {key!r}")
        action = dests[dest]
        try:
            if isinstance(action, argparse._StoreTrueAction):
                defaults[dest] = value.lower() in ("1", "true", "yes", "on")
            elif isinstance(action, argparse._AppendAction):
                defaults[dest] = [action.type(v) for v in value.split(",") if v.strip()]
            else:
                defaults[dest] = action.type(value) if action.type else value
        except ValueError:
            raise InputError(f"InvalidConfig: {path}:{lineno}: bad value for {key!r}") from None
        if action.choices is not None and defaults[dest] not in action.choices:
            raise InputError(f"InvalidConfig: {path}:{lineno}: bad value for {key!r}")
    sub.set_defaults(**defaults)
    for action in sub._actions:
        if action.dest in defaults:
            action.required = False


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    path = _config_path(argv)
    command = next((tok for tok in argv if tok in COMMANDS), None)
    if path and command:
        _apply_config_file(parser, command, path)
    return parser.parse_args(argv)


def config_to_text(args: argparse.Namespace) -> str:
    """Flat key=value rendering of a parsed command (for ``--config``)."""
    lines = []
    for key, value in sorted(vars(args).items()):
        if key in ("command", "config") or value is None:
            continue
        if isinstance(value, list):
            value = ",".join(repr(v) for v in value)
        lines.append(f"{key.replace('_', '-')}={value}")
    return "\n".join(lines) + "\n"


def _cmd_simulate(args) -> int:
    from .io import write_curves, write_json
    from .simulation import SimulationConfig, simulate

    config = SimulationConfig(
        curve_points=args.points,
        knot_spacing=args.knot_spacing,
        spline_order=args.order,
        n_motifs=args.n_motifs,
        occurrences=args.occurrences,
        motif_spans=args.motif_spans,
        sigmas=tuple(args.sigma) if args.sigma else (0.1,),
        rng_seed=args.seed,
    )
    curves, truth = simulate(config)
    write_curves(args.out, curves)
    write_json(args.truth, {**truth.to_json(), "config": config.to_json()})
    log.info("wrote %s and %s", args.out, args.truth)
    return 0


def _cmd_discover(args) -> int:
    from .discovery import discover
    from .io import read_curves, write_json

    curves = read_curves(args.input, header=args.csv_header)
    result = discover(curves, args.length, args.min_card, args.criterion, threads=args.threads)
    if args.dump_dendrogram:
        write_json(args.dump_dendrogram, result.tree.to_json())
    write_json(args.out, result.to_json(args.max_results))
    print(f"{len(result.motifs)} motifs from {len(result.candidates)} candidates -> {args.out}")
    return 0


def _cmd_score(args) -> int:
    import numpy as np

    from .curves import portion_values
    from .io import read_curves, read_portion_refs
    from .scoring import fmsr_adjusted

    curves = read_curves(args.input, header=args.csv_header)
    refs = read_portion_refs(args.portions, curves)
    score = fmsr_adjusted(np.array([portion_values(r, curves) for r in refs]))
    print(f"h={score.h!r} h_adjusted={score.h_adjusted!r} n_Q={score.cardinality}")
    return 0


def _cmd_evaluate(args) -> int:
    from .io import dumps, load_json, write_json
    from .simulation import GroundTruth, evaluate

    motifs = load_json(args.motifs)
    truth = GroundTruth.from_json(load_json(args.truth))
    report = evaluate(motifs, truth, args.threshold)
    print(report.table())
    print(dumps(report.to_json()), end="")
    if args.out:
        write_json(args.out, report.to_json())
    return 0


def _cmd_verify_bias(args) -> int:
    from .scoring import verify_bias

    worst = verify_bias(args.cardinality, args.length, args.trials, args.seed)
    print(f"max relative deviation: {worst:.3e}")
    if not worst < args.tolerance:
        print(f"InvariantViolation: deviation {worst:.3e} exceeds {args.tolerance:.1e}", file=sys.stderr)
        return 2
    return 0


def _cmd_plot(args) -> int:
    from .io import load_json, read_curves
    from .plotting import plot

    motifs = load_json(args.motifs)
    curves = read_curves(args.curves, header=args.csv_header)
    for path in plot(motifs, curves, args.out_dir):
        print(path)
    return 0


COMMANDS = {
    "simulate": _cmd_simulate,
    "discover": _cmd_discover,
    "score": _cmd_score,
    "evaluate": _cmd_evaluate,
    "verify-bias": _cmd_verify_bias,
    "plot": _cmd_plot,
}


def run(args: argparse.Namespace) -> int:
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")
    from .clustering import set_threads

    set_threads(args.threads)
    try:
        return COMMANDS[args.command](args)
    except InvariantError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    except (InputError, KeyError, TypeError, IndexError) as exc:
        msg = str(exc) if isinstance(exc, InputError) else f"MalformedInput: {exc!r}"
        print(msg.splitlines()[0] if msg else type(exc).__name__, file=sys.stderr)
        return 1


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except InputError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
