"""Command-line interface.

Exit codes: 0 success, 1 verification failure (violations found),
2 usage error, 3 resource error.  All randomness flows through --seed
(default 0); identical command lines produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import aperiodic, density, lll, serialize
from .groups import InputError, ResourceLimitError, parse_group_spec
from .patterns import WindowConfig

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


def _write_artifacts(args, outputs: dict, started: float, seed=None,
                     caps=None):
    """Write output files plus one manifest per primary artifact."""
    paths = []
    for path, text in outputs.items():
        Path(path).write_text(text)
        paths.append(Path(path))
    if paths:
        serialize.write_manifest(
            paths[0], argv=list(args._argv),
            seed=seed, caps=caps or {}, outputs=paths,
            duration=time.time() - started,
        )


def _parse_radii(spec: str) -> list[int]:
    if ".." in spec:
        lo, hi = spec.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(s) for s in spec.split(",")]


# --- subcommand handlers ------------------------------------------------

def cmd_group_ball(args) -> int:
    group = parse_group_spec(args.group)
    center = group.canonicalize(args.center)
    ball = group.ball(center=center, radius=args.radius, cap=args.cap)
    payload = {
        "group": group.spec,
        "center": group.element_word(center),
        "radius": args.radius,
        "size": len(ball),
        "members": [group.element_word(g) for g in ball.members],
    }
    text = serialize.dumps(payload)
    if args.out:
        _write_artifacts(args, {args.out: text}, args._started,
                         caps={"ball": args.cap})
    else:
        sys.stdout.write(text)
    print(f"ball size {len(ball)}", file=sys.stderr)
    return EXIT_OK


def cmd_group_canon(args) -> int:
    group = parse_group_spec(args.group)
    g = group.canonicalize(args.word)
    print(group.element_word(g))
    return EXIT_OK


def cmd_lll_check_constant(args) -> int:
    c = lll.aperiodic_constant_scan(args.cmax)
    print(c)
    return EXIT_OK


def cmd_lll_alphabet_bound(args) -> int:
    print(lll.squarefree_alphabet_bound(args.s))
    return EXIT_OK


def cmd_lll_verify(args) -> int:
    import json

    data = json.loads(Path(args.instance).read_text())
    inst = serialize.instance_from_json(data)
    verdict = lll.verify_condition(inst)
    text = serialize.dumps(serialize.verdict_to_json(inst, verdict))
    if args.out:
        _write_artifacts(args, {args.out: text}, args._started)
    else:
        sys.stdout.write(text)
    print(f"condition {'holds' if verdict.holds else 'fails'}",
          file=sys.stderr)
    return EXIT_OK if verdict.holds else EXIT_VERIFICATION


def cmd_color_two(args) -> int:
    group = parse_group_spec(args.group)
    tsets = aperiodic.build_t_sets(group, args.c, args.levels)
    inst = aperiodic.build_2coloring_instance(
        group, args.radius, tsets, args.levels
    )
    run = lll.resample(inst, seed=args.seed, cap=args.cap)
    config = WindowConfig(
        group=group, radius=args.radius, cells=run.assignment,
        alphabet_size=2,
    )
    report = aperiodic.verify_distinct_neighborhood(
        config, tsets, args.levels
    )
    outputs = {args.out: serialize.dumps(serialize.window_to_json(config))}
    if args.instance_out:
        outputs[args.instance_out] = serialize.dumps(
            serialize.instance_to_json(inst)
        )
    if args.trace_out:
        outputs[args.trace_out] = serialize.dumps(
            {"seed": run.seed, "resamples": run.resamples,
             "trace": [list(i) for i in run.trace]}
        )
    _write_artifacts(args, outputs, args._started, seed=args.seed,
                     caps={"resample": args.cap})
    print(
        f"events {len(inst.events)} resamples {run.resamples} "
        f"checked {report.checked} violations {len(report.violations)}",
        file=sys.stderr,
    )
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def cmd_color_squarefree(args) -> int:
    group = parse_group_spec(args.group)
    window = aperiodic.PathWindow.from_ball(group, args.radius)
    if args.alphabet < lll.squarefree_alphabet_bound(len(group.labels)):
        print("warning: alphabet below the certified bound",
              file=sys.stderr)
    inst = aperiodic.build_squarefree_instance(
        window, args.alphabet, args.maxlen, len(group.labels),
        budget=args.cap,
    )
    run = lll.resample(inst, seed=args.seed, cap=args.cap)
    witness = aperiodic.find_vertex_square(run.assignment, window,
                                           args.maxlen)
    config = WindowConfig(
        group=group, radius=args.radius, cells=run.assignment,
        alphabet_size=args.alphabet,
    )
    outputs = {}
    if args.out:
        outputs[args.out] = serialize.dumps(serialize.window_to_json(config))
    _write_artifacts(args, outputs, args._started, seed=args.seed,
                     caps={"resample": args.cap})
    print(
        f"events {len(inst.events)} resamples {run.resamples} "
        f"square {'found' if witness else 'none'}",
        file=sys.stderr,
    )
    return EXIT_OK if witness is None else EXIT_VERIFICATION


def cmd_verify_distinct(args) -> int:
    import json

    config = serialize.window_from_json(
        json.loads(Path(args.config).read_text())
    )
    tsets = aperiodic.build_t_sets(config.group, args.c, args.levels)
    report = aperiodic.verify_distinct_neighborhood(
        config, tsets, args.levels
    )
    print(f"checked {report.checked} violations {len(report.violations)}")
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def cmd_witness(args) -> int:
    group = parse_group_spec(args.group)
    result = aperiodic.witness_path(group, args.word)
    if result.trivial:
        print("trivial")
        return EXIT_OK
    from .groups import format_word

    print(f"w {format_word(list(result.word))!r} "
          f"u {format_word(list(result.conjugator))!r} "
          f"path length {len(result.vertices) - 1}")
    if args.out:
        _write_artifacts(
            args,
            {args.out: serialize.path_to_dot(group, result.vertices)},
            args._started,
        )
    return EXIT_OK


def cmd_density_build_forest(args) -> int:
    group = parse_group_spec(args.group)
    forest = density.build_forest(group, args.radius, args.levels)
    if args.format == "dot":
        text = serialize.forest_to_dot(forest)
    else:
        text = serialize.dumps(serialize.forest_to_json(forest))
    if args.out:
        _write_artifacts(args, {args.out: text}, args._started)
    else:
        sys.stdout.write(text)
    sizes = [len(level.centers) for level in forest.levels]
    print(f"levels {sizes}", file=sys.stderr)
    return EXIT_OK


def cmd_density_fill(args) -> int:
    group = parse_group_spec(args.group)
    forest = density.build_forest(group, args.radius, args.levels)
    alpha = density.Slope.parse(args.alpha)
    config = density.fill_density(forest, alpha)
    if args.format == "csv":
        text = serialize.window_to_csv(config)
    elif args.format == "pgm":
        text = serialize.window_to_pgm(config)
    else:
        text = serialize.dumps(serialize.window_to_json(config))
    _write_artifacts(args, {args.out: text}, args._started)
    report = density.verify_condition1(config, forest, alpha)
    print(f"clusters {len(report.clusters)} "
          f"ok {report.ok}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def cmd_density_verify(args) -> int:
    import json

    config = serialize.window_from_json(
        json.loads(Path(args.config).read_text())
    )
    forest = density.build_forest(
        config.group, config.window.radius, args.levels
    )
    alpha = density.Slope.parse(args.alpha)
    report = density.verify_condition1(config, forest, alpha)
    failures = [c for c in report.clusters if not c.ok]
    bad_aggregates = [a for a in report.aggregates if not a.ok]
    print(f"clusters {len(report.clusters)} failures {len(failures)} "
          f"aggregates {len(report.aggregates)} "
          f"aggregate-failures {len(bad_aggregates)}")
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def cmd_density_measure(args) -> int:
    import json

    config = serialize.window_from_json(
        json.loads(Path(args.config).read_text())
    )
    radii = _parse_radii(args.balls)
    sets, descs = density.ball_sequence(config, radii)
    alpha = density.Slope.parse(args.alpha) if args.alpha else None
    report = density.measure_density(config, sets, alpha=alpha,
                                     descriptors=descs)
    payload = {
        "alpha": None if report.alpha is None else str(report.alpha),
        "entries": [
            {"set": d, "size": s, "ones": o, "dens": str(f)}
            for d, s, o, f in report.entries
        ],
    }
    text = serialize.dumps(payload)
    if args.out:
        _write_artifacts(args, {args.out: text}, args._started)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- parser -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupshift",
        description="Colorings, local-lemma resampling and density "
                    "configurations on finitely generated groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_group_flag(p):
        p.add_argument("--group", required=True,
                       help="z^d | free:k | z2*z3 | heisenberg")

    p_group = sub.add_parser("group", help="group model utilities")
    gsub = p_group.add_subparsers(dest="subcommand", required=True)
    p = gsub.add_parser("ball")
    add_group_flag(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--center", default="")
    p.add_argument("--cap", type=int, default=10 ** 6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_group_ball)
    p = gsub.add_parser("canon")
    add_group_flag(p)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_group_canon)

    p_lll = sub.add_parser("lll", help="local-lemma verification")
    lsub = p_lll.add_subparsers(dest="subcommand", required=True)
    p = lsub.add_parser("check-constant")
    p.add_argument("--cmax", type=int, default=32)
    p.set_defaults(func=cmd_lll_check_constant)
    p = lsub.add_parser("alphabet-bound")
    p.add_argument("--s", type=int, required=True)
    p.set_defaults(func=cmd_lll_alphabet_bound)
    p = lsub.add_parser("verify")
    p.add_argument("--instance", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lll_verify)

    p_color = sub.add_parser("color", help="coloring constructions")
    csub = p_color.add_subparsers(dest="subcommand", required=True)
    p = csub.add_parser("two")
    add_group_flag(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--c", type=int, default=17)
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=10 ** 6)
    p.add_argument("--out", required=True)
    p.add_argument("--instance-out")
    p.add_argument("--trace-out")
    p.set_defaults(func=cmd_color_two)
    p = csub.add_parser("squarefree")
    add_group_flag(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--alphabet", type=int, required=True)
    p.add_argument("--maxlen", type=int, required=True,
                   help="half-length L; paths up to length 2L-1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=10 ** 6)
    p.add_argument("--out")
    p.set_defaults(func=cmd_color_squarefree)

    p_verify = sub.add_parser("verify", help="re-check stored artifacts")
    vsub = p_verify.add_subparsers(dest="subcommand", required=True)
    p = vsub.add_parser("distinct")
    p.add_argument("--config", required=True)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--c", type=int, default=17)
    p.set_defaults(func=cmd_verify_distinct)

    p = sub.add_parser("witness", help="aperiodicity witness path")
    add_group_flag(p)
    p.add_argument("--word", required=True)
    p.add_argument("--out", help="DOT output path")
    p.set_defaults(func=cmd_witness)

    p_density = sub.add_parser("density", help="covering-forest densities")
    dsub = p_density.add_subparsers(dest="subcommand", required=True)
    p = dsub.add_parser("build-forest")
    add_group_flag(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_density_build_forest)
    p = dsub.add_parser("fill")
    add_group_flag(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--alpha", required=True, help="exact rational p/q")
    p.add_argument("--format", choices=["json", "csv", "pgm"],
                   default="json")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_density_fill)
    p = dsub.add_parser("verify")
    p.add_argument("--config", required=True)
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.set_defaults(func=cmd_density_verify)
    p = dsub.add_parser("measure")
    p.add_argument("--config", required=True)
    p.add_argument("--balls", required=True, help="e.g. 1..25 or 1,5,10")
    p.add_argument("--alpha")
    p.add_argument("--out")
    p.set_defaults(func=cmd_density_measure)

    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    args._started = time.time()
    args._argv = argv
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"error: resource: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except lll.NonterminatingInstanceError as exc:
        print(f"error: resource: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
