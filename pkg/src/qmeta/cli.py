"""Command-line entry point.

Subcommands: gen-data, eval, simulate, tokenize, detokenize, targets,
flops.  Exit codes: 0 success, 1 usage error, 2 data/validation error.
With --json, errors are emitted as a JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, circuits, dsl, graphs, harness, targets, vocab
from .datagen import GenConfig, generate_corpus, read_corpus, verify_record
from .states import canonicalize, print_state

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class DataError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmeta",
        description="size-parametric quantum experiment programs: simulate, "
                    "generate data, evaluate")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--json", action="store_true",
                        help="machine-readable errors on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a training corpus")
    p.add_argument("--config", default="all",
                   help="'all' (32 optics configs), 'circuit', 'graph', or "
                        "comma-separated config tags")
    p.add_argument("--total", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--verify", action="store_true",
                   help="re-execute every record after writing")

    p = sub.add_parser("eval", help="evaluate candidate programs against a target")
    p.add_argument("--task", default="optics", choices=list(dsl.TASKS))
    p.add_argument("--target", required=True)
    p.add_argument("--candidates", required=True,
                   help="a .code file or a directory of .code files")
    p.add_argument("--nmax", type=int, default=harness.SCREEN_N_MAX)
    p.add_argument("--budget", type=float, default=harness.DEFAULT_BUDGET_S,
                   help="per-N wall clock budget in seconds")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("simulate", help="run a program or setup file, print the state")
    p.add_argument("--code", help="program text file")
    p.add_argument("--setup", help="serialized setup file")
    p.add_argument("--task", default="optics", choices=list(dsl.TASKS))
    p.add_argument("--n", type=int, default=0, help="size index N")
    p.add_argument("--raw", action="store_true",
                   help="print the un-normalized amplitudes (no gcd/sign step)")

    p = sub.add_parser("tokenize", help="program text -> token ids")
    p.add_argument("--task", default="optics", choices=list(dsl.TASKS))
    p.add_argument("--side", default="code", choices=["code", "states"])
    p.add_argument("--in", dest="infile", help="input file (default stdin)")

    p = sub.add_parser("detokenize", help="token ids -> text")
    p.add_argument("--task", default="optics", choices=list(dsl.TASKS))
    p.add_argument("--side", default="code", choices=["code", "states"])
    p.add_argument("--in", dest="infile", help="input file (default stdin)")

    p = sub.add_parser("targets", help="list the target catalog")
    p.add_argument("--task", default="optics", choices=list(dsl.TASKS))
    p.add_argument("--list", action="store_true")
    p.add_argument("--show", metavar="NAME", help="print fixture states of one class")

    p = sub.add_parser("flops", help="cost estimate for computing one setup state")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--particles", type=int, required=True)
    return parser


def _cmd_gen_data(args) -> int:
    if args.config == "all":
        configs = GenConfig.grid()
    else:
        configs = [GenConfig.from_tag(tag.strip()) for tag in args.config.split(",")]
    manifest = generate_corpus(configs, args.total, args.out, args.seed,
                               workers=args.threads)
    if args.verify:
        bad = sum(not verify_record(r) for r in read_corpus(args.out))
        if bad:
            raise DataError(f"{bad} records failed self-certification")
        manifest["verified"] = True
    print(json.dumps(manifest, indent=1, sort_keys=True))
    return EXIT_OK


def _load_candidates(path_str: str, task: str) -> list[harness.Candidate]:
    path = Path(path_str)
    if not path.exists():
        raise DataError(f"candidate path {path} does not exist")
    files = sorted(path.glob("*.code")) if path.is_dir() else [path]
    if not files:
        raise DataError(f"no .code files under {path}")
    out = []
    for f in files:
        try:
            out.append(harness.Candidate.from_text(
                f.read_text(), task, id=f.stem, origin="model-sample"))
        except dsl.CodeError:
            continue  # unparseable candidates score nothing
    if not out:
        raise DataError("no candidate parsed under the task grammar")
    return out


def _cmd_eval(args) -> int:
    candidates = _load_candidates(args.candidates, args.task)
    results = harness.evaluate_candidates(
        candidates, args.target, n_max=args.nmax, task=args.task,
        budget_s=args.budget, workers=args.threads)
    summary = harness.write_report(results, args.out)
    print(json.dumps(summary, indent=1, sort_keys=True))
    return EXIT_OK


def _cmd_simulate(args) -> int:
    if bool(args.code) == bool(args.setup):
        raise DataError("exactly one of --code / --setup is required")
    if args.setup:
        path = Path(args.setup)
        if not path.exists():
            raise DataError(f"no such file {path}")
        state = graphs.compute_state(graphs.parse_setup(path.read_text()))
        if not args.raw:
            state = canonicalize(state)
        style = "optics"
    else:
        path = Path(args.code)
        if not path.exists():
            raise DataError(f"no such file {path}")
        try:
            code = dsl.parse_code(path.read_text(), args.task)
        except dsl.CodeParseError as exc:
            raise DataError(str(exc)) from None
        try:
            if args.task == "optics":
                state = graphs.compute_state(dsl.instantiate(code, args.n))
                if not args.raw:
                    state = canonicalize(state)
            else:
                state = circuits.postprocess(
                    circuits.run_circuit(dsl.instantiate(code, args.n)))
        except (dsl.InstantiationError, circuits.PostprocessError) as exc:
            raise DataError(str(exc)) from None
        style = "optics" if args.task == "optics" else "circuit"
    if not state:
        raise DataError("setup admits no perfect matching (empty state)")
    print(print_state(state, style))
    return EXIT_OK


def _read_in(args) -> str:
    if args.infile:
        path = Path(args.infile)
        if not path.exists():
            raise DataError(f"no such file {path}")
        return path.read_text()
    return sys.stdin.read()


def _cmd_tokenize(args) -> int:
    text = _read_in(args)
    try:
        if args.side == "code":
            ids = vocab.encode_code(text, args.task)
        else:
            from .states import parse_state
            sep = "|" if args.task == "optics" else "<SEP>"
            style = "optics" if args.task == "optics" else "circuit"
            body = text.strip("\n")
            # states arrive either separator-joined (record format) or one
            # per line (targets --show output)
            parts = body.split(sep) if sep in body else body.splitlines()
            states = [parse_state(s, style) for s in parts]
            ids = vocab.encode_states(states, args.task)
    except (vocab.TokenizeError, ValueError) as exc:
        raise DataError(str(exc)) from None
    print(" ".join(str(i) for i in ids))
    return EXIT_OK


def _cmd_detokenize(args) -> int:
    try:
        ids = [int(tok) for tok in _read_in(args).split()]
        text = vocab.decode(ids, args.task, args.side)
    except (vocab.TokenizeError, ValueError) as exc:
        raise DataError(str(exc)) from None
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_OK


def _cmd_targets(args) -> int:
    if args.show:
        try:
            lines = targets.fixture_lines(args.show, args.task)
        except targets.TargetError as exc:
            raise DataError(str(exc)) from None
        print("\n".join(lines))
        return EXIT_OK
    rows = []
    for tc in targets.list_targets(args.task):
        correct = tc.correct_states
        rows.append({
            "name": tc.name, "slug": tc.slug,
            "correct_states": ("inf" if correct == float("inf") else correct),
            "previously_known": tc.previously_known,
        })
    print(json.dumps(rows, indent=1))
    return EXIT_OK


def _cmd_flops(args) -> int:
    try:
        print(graphs.flop_estimate(args.dim, args.particles))
    except ValueError as exc:
        raise DataError(str(exc)) from None
    return EXIT_OK


_COMMANDS = {
    "gen-data": _cmd_gen_data,
    "eval": _cmd_eval,
    "simulate": _cmd_simulate,
    "tokenize": _cmd_tokenize,
    "detokenize": _cmd_detokenize,
    "targets": _cmd_targets,
    "flops": _cmd_flops,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except (DataError, targets.TargetError, graphs.SetupError,
            vocab.TokenizeError) as exc:
        if args.json:
            print(json.dumps({"error": str(exc), "command": args.command}),
                  file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
