"""Command line interface: generate crystals, run verification suites.

Artifacts are deterministic: node and edge lists are emitted in sorted
order, rationals are written exactly, and files are written atomically.
Exit codes: 0 success, 1 a verification check failed, 2 invalid
configuration, 3 node cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile

from .cartan import CartanError, Weight, build_cartan
from .crystals import DEFAULT_NODE_CAP, GraphOps, NodeCapError, TensorOps, generate
from .embedding import affinized_tensor_crystal, fundamental_crystal, path_crystal_window
from .paths import PathError
from .verify import SUITE_ALIASES, SUITES, run_suite


def _node_cap(args) -> int:
    if args.node_cap is not None:
        return args.node_cap
    env = os.environ.get("LOOM_NODE_CAP")
    return int(env) if env else DEFAULT_NODE_CAP


def parse_weight_label(cartan, text: str) -> Weight:
    """Integer combinations of level-zero fundamentals and the null root.

    Grammar: terms like ``2w1``, ``-w2``, ``+3d`` joined by signs, or a
    bare ``0``; whitespace is ignored.
    """
    squeezed = text.replace(" ", "")
    if squeezed in ("0", "+0", "-0"):
        return cartan.zero_weight(classical=False)
    out = cartan.zero_weight(classical=False)
    pos = 0
    pattern = re.compile(r"([+-]?)(\d*)(?:w(\d+)|d)")
    while pos < len(squeezed):
        m = pattern.match(squeezed, pos)
        if m is None:
            raise ValueError("cannot parse weight term at %r" % squeezed[pos:])
        sign, count, index = m.groups()
        coeff = int(count) if count else 1
        if sign == "-":
            coeff = -coeff
        if index is None:
            out = out + coeff * cartan.null_root()
        else:
            out = out + coeff * cartan.classical_fundamental(int(index), classical=False)
        pos = m.end()
    return out


def _emit(args, text: str):
    if args.out:
        directory = os.path.dirname(os.path.abspath(args.out)) or "."
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".loom-")
        try:
            with os.fdopen(fd, "w") as handle:
                handle.write(text)
            os.replace(tmp, args.out)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def cmd_gen(args, parser) -> int:
    try:
        cartan = build_cartan(args.type, args.rank)
    except CartanError as err:
        parser.error(str(err))
    cap = _node_cap(args)
    try:
        if args.ls:
            if args.weight is None or args.window is None:
                parser.error("--ls needs --weight and --window")
            try:
                seed = parse_weight_label(cartan, args.weight)
            except (ValueError, CartanError) as err:
                parser.error(str(err))
            graph = path_crystal_window(
                cartan, seed, args.window, node_cap=cap, threads=args.threads
            )
        elif args.ambient == "affine":
            if args.window is None:
                parser.error("--ambient affine needs --window")
            if not 1 <= args.i <= args.rank:
                parser.error("--i must be between 1 and the rank")
            seed = cartan.classical_fundamental(args.i, classical=False)
            graph = path_crystal_window(
                cartan, seed, args.window, node_cap=cap, threads=args.threads
            )
        else:
            if not 1 <= args.i <= args.rank:
                parser.error("--i must be between 1 and the rank")
            base = fundamental_crystal(cartan, args.i, node_cap=cap, threads=args.threads)
            if args.affinize:
                if args.window is None:
                    parser.error("--affinize needs --window")
                graph = affinized_tensor_crystal(
                    cartan, base, args.power, args.window,
                    node_cap=cap, threads=args.threads,
                )
            elif args.power > 1:
                ops = TensorOps([GraphOps(base, cartan.pairing)] * args.power)
                graph = generate(
                    ops, (base.seed,) * args.power, node_cap=cap,
                    threads=args.threads,
                    label="%s:power%d" % (base.label, args.power),
                )
            else:
                graph = base
    except NodeCapError as err:
        sys.stderr.write("error: %s\n" % err)
        return 3
    except PathError as err:
        parser.error(str(err))

    if args.format == "dot":
        _emit(args, graph.to_dot())
    elif args.format == "summary":
        _emit(
            args,
            "label=%s nodes=%d edges=%d truncated=%s\n"
            % (graph.label, len(graph), graph.edge_count(), graph.truncated),
        )
    else:
        _emit(args, _dump_json(graph.to_json()))
    return 0


def cmd_verify(args, parser) -> int:
    name = SUITE_ALIASES.get(args.suite, args.suite)
    if name != "all" and name not in SUITES:
        parser.error("unknown suite %r" % args.suite)
    try:
        report = run_suite(
            name,
            type_label=args.type,
            rank=args.rank,
            i=args.i,
            power=args.m if args.m is not None else args.power,
            window=args.window if args.window is not None else 3,
            t1=args.t1,
            t2=args.t2,
            seeds=args.seeds,
            node_cap=_node_cap(args),
            threads=args.threads,
        )
    except NodeCapError as err:
        sys.stderr.write("error: %s\n" % err)
        return 3
    except (CartanError, PathError, ValueError) as err:
        parser.error(str(err))
    if args.json:
        _emit(args, _dump_json(report))
    else:
        lines = []
        reports = report.get("reports", [report])
        for sub in reports:
            for check in sub.get("checks", []):
                verdict = "pass" if check["pass"] else "FAIL"
                lines.append("%s %s.%s" % (verdict, sub["suite"], check["name"]))
        lines.append("overall %s" % ("pass" if report["pass"] else "FAIL"))
        _emit(args, "\n".join(lines) + "\n")
    return 0 if report["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loom",
        description="exact path-model computations for level-zero affine crystals",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a crystal graph artifact")
    gen.add_argument("--type", required=True, help="A, B, C, D, E6, E7, E8, F4 or G2")
    gen.add_argument("--rank", required=True, type=int)
    gen.add_argument("--i", type=int, default=1, help="fundamental index")
    gen.add_argument("--power", type=int, default=1, help="tensor power")
    gen.add_argument("--ambient", choices=["classical", "affine"], default="classical")
    gen.add_argument("--affinize", action="store_true",
                     help="affinise the tensor power inside --window")
    gen.add_argument("--ls", action="store_true",
                     help="windowed affine path crystal from a straight seed")
    gen.add_argument("--weight", help='seed for --ls, e.g. "2w1+1d"')
    gen.add_argument("--window", type=int)
    gen.add_argument("--format", choices=["json", "dot", "summary"], default="json")
    gen.add_argument("--out")
    gen.add_argument("--threads", type=int, default=1)
    gen.add_argument("--node-cap", type=int, dest="node_cap")
    gen.set_defaults(func=cmd_gen)

    ver = sub.add_parser("verify", help="run a verification suite")
    ver.add_argument("--suite", required=True,
                     help="one of %s, an alias, or 'all'" % ", ".join(sorted(SUITES)))
    ver.add_argument("--type", default="A")
    ver.add_argument("--rank", type=int, default=1)
    ver.add_argument("--i", type=int, default=1)
    ver.add_argument("--power", type=int, default=2)
    ver.add_argument("--m", type=int, help="alias for --power")
    ver.add_argument("--window", type=int)
    ver.add_argument("--t1", type=int, default=1)
    ver.add_argument("--t2", type=int, default=1)
    ver.add_argument("--seeds", type=int, default=20)
    ver.add_argument("--json", action="store_true")
    ver.add_argument("--out")
    ver.add_argument("--threads", type=int, default=1)
    ver.add_argument("--node-cap", type=int, dest="node_cap")
    ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
