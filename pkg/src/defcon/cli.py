"""Command-line front end: ``defcon PROBLEM [options]``.

Writes ``diagram.csv``, ``diagram.json`` and a line-per-attempt ``run.log``
into the output directory. Exit status is 0 on success, 1 on I/O failure
and 2 on configuration errors.
"""

import argparse
import os
import sys
import time

from .continuation import ConfigurationError, jsonl_progress, run
from .diagram_io import PROBLEM_DEFAULTS, RunManifest, parse_config_text, write_diagram
from .problems import PROBLEMS, make_problem

FLAG_NAMES = {
    "min": "min", "max": "max", "step": "step", "mu": "mu", "grid": "grid",
    "p": "p", "sigma": "sigma", "distinct": "distinct", "max_iter": "max-iter",
    "tol": "tol", "backward": "backward", "retain": "retain", "out": "out",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigurationError(message)


def build_parser():
    parser = _Parser(prog="defcon", description="Deflated continuation bifurcation diagrams.")
    parser.add_argument("problem", choices=sorted(PROBLEMS), help="built-in problem to sweep")
    parser.add_argument("--config", metavar="FILE", help="flat 'key = value' file of option defaults")
    parser.add_argument("--min", type=float, help="first parameter value")
    parser.add_argument("--max", type=float, help="parameter value at which the sweep stops")
    parser.add_argument("--step", type=float, help="parameter step (negative sweeps downwards)")
    parser.add_argument("--mu", type=float, help="transverse load for the elastica")
    parser.add_argument("--grid", type=int, help="interior nodes (1-D) or nodes per side (2-D)")
    parser.add_argument("--p", type=float, help="deflation power")
    parser.add_argument("--sigma", type=float, help="deflation shift")
    parser.add_argument("--distinct", type=float, help="distinctness threshold for new solutions")
    parser.add_argument("--max-iter", dest="max_iter", type=int, help="Newton iteration limit")
    parser.add_argument("--tol", type=float, help="Newton residual tolerance")
    parser.add_argument("--backward", action="store_true", default=None,
                        help="walk newly found branches back after the sweep")
    parser.add_argument("--retain", choices=("none", "endpoints", "all"),
                        help="which solution vectors to keep in diagram.json")
    parser.add_argument("--out", metavar="DIR", help="output directory")
    return parser


def manifest_from_args(args):
    values = {"problem": args.problem, **PROBLEM_DEFAULTS[args.problem]}
    if args.config:
        with open(args.config) as fh:
            from_file = parse_config_text(fh.read())
        file_problem = from_file.pop("problem", args.problem)
        if file_problem != args.problem:
            raise ConfigurationError(
                f"config file is for {file_problem!r}, command line names {args.problem!r}"
            )
        values.update(from_file)
    for name in FLAG_NAMES:
        flag = getattr(args, name)
        if flag is not None:
            values[name] = flag
    return RunManifest(**values)


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        manifest = manifest_from_args(args)
        cfg = manifest.continuation_config()
        problem = make_problem(manifest.problem, mu=manifest.mu, grid=manifest.grid)
    except (ConfigurationError, ValueError) as exc:
        print(f"defcon: configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"defcon: cannot read config: {exc}", file=sys.stderr)
        return 2

    try:
        os.makedirs(manifest.out, exist_ok=True)
        log = open(os.path.join(manifest.out, "run.log"), "w")
    except OSError as exc:
        print(f"defcon: cannot write to {manifest.out}: {exc}", file=sys.stderr)
        return 1

    started = time.perf_counter()
    with log:
        try:
            diagram = run(problem, cfg, progress=jsonl_progress(log))
        except ConfigurationError as exc:
            print(f"defcon: configuration error: {exc}", file=sys.stderr)
            return 2
    try:
        write_diagram(diagram, manifest, problem)
        with open(os.path.join(manifest.out, "manifest.cfg"), "w") as fh:
            fh.write(manifest.to_text())
    except OSError as exc:
        print(f"defcon: cannot write results: {exc}", file=sys.stderr)
        return 1
    elapsed = time.perf_counter() - started
    print(
        f"{problem.name}: {len(diagram.branches)} branches, "
        f"{diagram.solution_counts[-1]} solutions at lambda = {diagram.lambda_grid[-1]:g} "
        f"({elapsed:.1f} s) -> {manifest.out}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
