"""Command-line interface.

Exit codes: 0 success, 1 usage or missing file, 2 malformed input, 3 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .chunker import parse_islands
from .frames import assemble_hypotheses, k_best_frames
from .lattice import n_best_paths
from .pipeline import PipelineConfig, dumps, eval_corpus, load_resources, read_input, run_pipeline

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def non_negative(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    files = common.add_argument_group("resources (default: shipped fixtures)")
    files.add_argument("--grammar")
    files.add_argument("--schema")
    files.add_argument("--rules")
    files.add_argument("--defaults")
    files.add_argument("--kb")
    files.add_argument("--constraints")
    files.add_argument("--context", help="file of ground context facts")
    files.add_argument("--fact", action="append", default=[], metavar="FACT",
                       help="extra context fact, e.g. 'caller_prefix(p21)'; repeatable")
    common.add_argument("--k-paths", type=positive, default=3)
    common.add_argument("--k-frames", type=positive, default=5)
    common.add_argument("--max-gap", type=non_negative, default=2)
    common.add_argument("--depth-limit", type=positive, default=64)
    common.add_argument("--trace", action="store_true")

    source = _Parser(add_help=False)
    group = source.add_mutually_exclusive_group(required=True)
    group.add_argument("--lattice", help="lattice file")
    group.add_argument("--tokens", help="plain token string")

    parser = _Parser(prog="semfilter", description="Spoken directory query extraction.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("nbest", parents=[common, source], help="n-best lattice paths")
    sub.add_parser("chunk", parents=[common, source], help="semantic chunks per path")
    sub.add_parser("frames", parents=[common, source], help="ranked frame hypotheses per path")
    sub.add_parser("run", parents=[common, source], help="best completed query")
    ev = sub.add_parser("eval", parents=[common], help="score a corpus against gold frames")
    ev.add_argument("corpus", help="directory of <id>.lat/<id>.tok inputs and <id>.gold.json frames")
    return parser


def _config(args) -> PipelineConfig:
    return PipelineConfig(
        grammar=args.grammar,
        schema=args.schema,
        rules=args.rules,
        defaults=args.defaults,
        kb=args.kb,
        constraints=args.constraints,
        context=args.context,
        context_facts=tuple(args.fact),
        k_paths=args.k_paths,
        k_frames=args.k_frames,
        max_gap=args.max_gap,
        depth_limit=args.depth_limit,
        trace=args.trace,
    )


def _execute(args, out) -> None:
    config = _config(args)
    res = load_resources(config)
    if args.command == "eval":
        out.write(dumps(eval_corpus(config, args.corpus, res)) + "\n")
        return
    lattice = read_input(args.lattice, args.tokens)
    if args.command == "run":
        out.write(run_pipeline(config, lattice, res).to_jsonl(trace=config.trace))
        return
    for rank, path in enumerate(n_best_paths(lattice, config.k_paths)):
        if args.command == "nbest":
            out.write(dumps({"rank": rank, "tokens": path.text, "weight": path.weight}) + "\n")
            continue
        chunks = parse_islands(res.grammar, path.words, config.max_gap)
        if args.command == "chunk":
            for chunk in chunks:
                out.write(dumps({"path": rank, **chunk.to_dict()}) + "\n")
        else:
            frames = k_best_frames(assemble_hypotheses(chunks, res.schema), config.k_frames)
            for j, frame in enumerate(frames):
                out.write(dumps({"path": rank, "rank": j, **frame.to_dict()}) + "\n")


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"semfilter: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        _execute(args, out)
    except FileNotFoundError as exc:
        parser.print_usage(sys.stderr)
        print(f"semfilter: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"semfilter: input error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except Exception as exc:  # noqa: BLE001
        print(f"semfilter: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
