"""Single command line entry point with versioned JSON reports.

Machine-readable output goes to standard output as one JSON report per
invocation; a short human summary goes to standard error.  Exit codes:
0 when every certificate in the report is true, 1 when some certificate
is false, 2 on input or usage errors.

Reports are byte-identical across repeated runs with the same inputs,
except for the timing field.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import traceback
from fractions import Fraction

from .core import Permutation
from .cycles import make_cycle, orbit_sizes, validate_precycle
from .group_engine import check_join_generation, generates_full_group
from .oracle import (
    SearchSpaceTooLargeError,
    brute_min_generating_support,
    brute_min_generators,
    brute_min_graphing_cost,
)
from .pipeline import MODES, ConfigError, PipelineConfig, run_pipeline
from .relations import (
    Graphing,
    Partition,
    cost_graphing,
    cost_relation,
    generate_relation,
    in_full_group,
    is_ergodic,
    join,
)

SCHEMA_VERSION = "1"


class InputError(ValueError):
    """Bad file, malformed JSON, or invalid field content: exit code 2."""


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _parse(path: str, parser, what: str):
    data = _load_json(path)
    try:
        return data, parser(data)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path} is not a valid {what}: {exc}") from exc


def _parse_perm_list(data) -> list[Permutation]:
    try:
        perms = data["perms"]
        n = data["n"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"generator JSON needs 'n' and 'perms': {exc}") from exc
    out = [Permutation.from_json_dict(p) for p in perms]
    for p in out:
        if p.n != n:
            raise ValueError(f"permutation on {p.n} points, header says {n}")
    return out


def _certificates_ok(certificates) -> bool:
    def leaves(obj):
        if isinstance(obj, bool):
            yield obj
        elif isinstance(obj, dict):
            for v in obj.values():
                yield from leaves(v)
        elif isinstance(obj, (list, tuple)):
            for v in obj:
                yield from leaves(v)

    return all(leaves(certificates))


def _module_prefix(exc: BaseException) -> str | None:
    last = None
    for frame in traceback.extract_tb(exc.__traceback__):
        fname = frame.filename.replace("\\", "/")
        if "/orbitlab/" in fname:
            stem = fname.rsplit("/", 1)[-1].removesuffix(".py")
            if stem != "cli":
                last = stem
    return last


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitlab",
        description="Exact computations on finite uniform spaces: partial "
        "injections, generated relations, full groups, chain cycles, "
        "certified generator pipelines, and brute-force oracles.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        help="recorded in the report; current constructions are deterministic",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    vp = sub.add_parser(
        "validate-precycle", parents=[common], help="check the chain conditions"
    )
    vp.add_argument("--in", dest="infile", required=True, metavar="GRAPHING_JSON")

    mc = sub.add_parser(
        "make-cycle", parents=[common], help="close a valid chain into its cycle"
    )
    mc.add_argument("--in", dest="infile", required=True, metavar="PRECYCLE_JSON")

    rel = sub.add_parser("relation", help="generated relations, costs, joins")
    relsub = rel.add_subparsers(dest="action", required=True)
    rg = relsub.add_parser("generate", parents=[common])
    rg.add_argument("--graphing", required=True, metavar="GRAPHING_JSON")
    rc = relsub.add_parser("cost", parents=[common])
    src = rc.add_mutually_exclusive_group(required=True)
    src.add_argument("--graphing", metavar="GRAPHING_JSON")
    src.add_argument("--relation", metavar="PARTITION_JSON")
    rj = relsub.add_parser("join", parents=[common])
    rj.add_argument(
        "--relation",
        action="append",
        required=True,
        dest="relations",
        metavar="PARTITION_JSON",
    )

    ver = sub.add_parser("verify", help="full-group membership and generation")
    versub = ver.add_subparsers(dest="action", required=True)
    vm = versub.add_parser("membership", parents=[common])
    vm.add_argument("--perm", required=True, metavar="PERM_JSON")
    vm.add_argument("--relation", required=True, metavar="PARTITION_JSON")
    vg = versub.add_parser("generation", parents=[common])
    vg.add_argument("--gens", required=True, metavar="GENS_JSON")
    vg.add_argument("--relation", required=True, metavar="PARTITION_JSON")
    vj = versub.add_parser("join-generation", parents=[common])
    vj.add_argument(
        "--relation",
        action="append",
        required=True,
        dest="relations",
        metavar="PARTITION_JSON",
    )

    pl = sub.add_parser(
        "pipeline", parents=[common], help="build and certify generator sets"
    )
    pl.add_argument("--n", type=int, required=True, help="number of chains")
    pl.add_argument("--N", type=int, required=True, dest="n_points", help="space size")
    pl.add_argument("--p", type=int, required=True, help="odd chain parameter")
    pl.add_argument("--m", type=int, required=True, help="block size")
    pl.add_argument("--graphing", default=None, metavar="GRAPHING_JSON")
    pl.add_argument("--mode", choices=MODES, default="both")
    pl.add_argument("--out", default=None, metavar="REPORT_JSON")

    orc = sub.add_parser("oracle", help="exhaustive searches at tiny sizes")
    orcsub = orc.add_subparsers(dest="action", required=True)
    for name in ("min-cost", "min-gens", "min-support"):
        op = orcsub.add_parser(name, parents=[common])
        op.add_argument("--relation", required=True, metavar="PARTITION_JSON")
        if name == "min-support":
            op.add_argument("--t", type=int, required=True, help="tuple length")
        op.add_argument("--out", default=None, metavar="RESULT_JSON")

    return parser


def _cmd_validate_precycle(args):
    data, graphing = _parse(args.infile, Graphing.from_json_dict, "graphing")
    try:
        pre = validate_precycle(graphing)
        cert = {"valid": True, "p": pre.p, "error": None}
        results = {"n": pre.n, "p": pre.p}
    except ValueError as exc:
        prefix = _module_prefix(exc)
        message = f"{prefix}: {exc}" if prefix else str(exc)
        cert = {"valid": False, "p": None, "error": message}
        results = {"n": graphing.n, "p": None}
    inputs = {"in": data, "seed": args.seed}
    return inputs, results, [{"name": "precycle_valid", "certificate": cert}]


def _cmd_make_cycle(args):
    data, graphing = _parse(args.infile, Graphing.from_json_dict, "graphing")
    pre = validate_precycle(graphing)
    cycle = make_cycle(pre)
    results = {
        "cycle": cycle.to_json_dict(),
        "orbit_sizes": list(orbit_sizes(cycle)),
        "p": pre.p,
    }
    return {"in": data, "seed": args.seed}, results, []


def _cmd_relation(args):
    if args.action == "generate":
        data, graphing = _parse(args.graphing, Graphing.from_json_dict, "graphing")
        rel = generate_relation(graphing)
        results = {
            "relation": rel.to_json_dict(),
            "num_classes": rel.num_classes,
            "is_ergodic": is_ergodic(rel),
            "cost_graphing": _frac(cost_graphing(graphing)),
            "cost_relation": _frac(cost_relation(rel)),
        }
        inputs = {"graphing": data, "seed": args.seed}
    elif args.action == "cost":
        if args.graphing is not None:
            data, graphing = _parse(args.graphing, Graphing.from_json_dict, "graphing")
            rel = generate_relation(graphing)
            results = {
                "cost_graphing": _frac(cost_graphing(graphing)),
                "cost_relation": _frac(cost_relation(rel)),
            }
            inputs = {"graphing": data, "relation": None, "seed": args.seed}
        else:
            data, rel = _parse(args.relation, Partition.from_json_dict, "partition")
            results = {"cost_relation": _frac(cost_relation(rel))}
            inputs = {"graphing": None, "relation": data, "seed": args.seed}
    else:  # join
        datas, rels = [], []
        for path in args.relations:
            data, rel = _parse(path, Partition.from_json_dict, "partition")
            datas.append(data)
            rels.append(rel)
        joined = join(rels)
        results = {
            "relation": joined.to_json_dict(),
            "num_classes": joined.num_classes,
            "cost_relation": _frac(cost_relation(joined)),
        }
        inputs = {"relations": datas, "seed": args.seed}
    return inputs, results, []


def _cmd_verify(args):
    if args.action == "membership":
        pdata, perm = _parse(args.perm, Permutation.from_json_dict, "permutation")
        rdata, rel = _parse(args.relation, Partition.from_json_dict, "partition")
        cert = {"in_full_group": in_full_group(perm, rel)}
        inputs = {"perm": pdata, "relation": rdata, "seed": args.seed}
        return inputs, {}, [{"name": "membership", "certificate": cert}]
    if args.action == "generation":
        gdata, gens = _parse(args.gens, _parse_perm_list, "generator list")
        rdata, rel = _parse(args.relation, Partition.from_json_dict, "partition")
        _, cert = generates_full_group(gens, rel)
        inputs = {"gens": gdata, "relation": rdata, "seed": args.seed}
        return inputs, {}, [{"name": "generation", "certificate": cert}]
    # join-generation
    datas, rels = [], []
    for path in args.relations:
        data, rel = _parse(path, Partition.from_json_dict, "partition")
        datas.append(data)
        rels.append(rel)
    _, cert = check_join_generation(rels)
    inputs = {"relations": datas, "seed": args.seed}
    return inputs, {}, [{"name": "join_generation", "certificate": cert}]


def _cmd_pipeline(args):
    graphing = None
    gdata = None
    if args.graphing is not None:
        gdata, graphing = _parse(args.graphing, Graphing.from_json_dict, "graphing")
    try:
        config = PipelineConfig(
            n_cycles=args.n,
            n_points=args.n_points,
            p=args.p,
            m=args.m,
            graphing=graphing,
            seed=args.seed,
        )
    except ConfigError as exc:
        raise InputError(f"pipeline: {exc}") from exc
    report = run_pipeline(config, mode=args.mode)
    certificates = []
    for name, value in report.certificates.items():
        if name == "isopgen":
            for i, cert in enumerate(value, start=1):
                certificates.append({"name": f"isopgen_cycle_{i}", "certificate": cert})
        else:
            certificates.append({"name": name, "certificate": value})
    inputs = config.to_json_dict()
    inputs["mode"] = args.mode
    if gdata is not None:
        inputs["graphing"] = gdata
    return inputs, report.to_json_dict(), certificates, args.out


def _cmd_oracle(args):
    data, rel = _parse(args.relation, Partition.from_json_dict, "partition")
    try:
        if args.action == "min-cost":
            result = brute_min_graphing_cost(rel)
        elif args.action == "min-gens":
            result = brute_min_generators(rel)
        else:
            if args.t < 0:
                raise InputError(f"--t must be non-negative, got {args.t}")
            result = brute_min_generating_support(rel, args.t)
    except SearchSpaceTooLargeError as exc:
        raise InputError(f"oracle: {exc}") from exc
    inputs = {"relation": data, "seed": args.seed}
    if args.action == "min-support":
        inputs["t"] = args.t
    return inputs, result.to_json_dict(), [], args.out


def dispatch(argv: list[str]) -> int:
    """Parse arguments, run the command, and print the JSON report."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    command = args.command
    if getattr(args, "action", None):
        command = f"{args.command} {args.action}"

    start = time.perf_counter()
    out_path = None
    try:
        if args.command == "validate-precycle":
            inputs, results, certificates = _cmd_validate_precycle(args)
        elif args.command == "make-cycle":
            inputs, results, certificates = _cmd_make_cycle(args)
        elif args.command == "relation":
            inputs, results, certificates = _cmd_relation(args)
        elif args.command == "verify":
            inputs, results, certificates = _cmd_verify(args)
        elif args.command == "pipeline":
            inputs, results, certificates, out_path = _cmd_pipeline(args)
        else:
            inputs, results, certificates, out_path = _cmd_oracle(args)
    except InputError as exc:
        return _fail(command, str(exc))
    except (ValueError, KeyError, TypeError) as exc:
        prefix = _module_prefix(exc)
        message = f"{prefix}: {exc}" if prefix else str(exc)
        return _fail(command, message)

    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": inputs,
        "results": results,
        "certificates": certificates,
        "timing_ms": round((time.perf_counter() - start) * 1000, 3),
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    print(text)
    if out_path is not None:
        try:
            with open(out_path, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        except OSError as exc:
            return _fail(command, f"cannot write {out_path}: {exc}")
    ok = _certificates_ok(certificates)
    status = "all certificates true" if ok else "FALSE certificate present"
    if not certificates:
        status = "no certificates"
    print(
        f"orbitlab {command}: {len(certificates)} certificate(s); {status}",
        file=sys.stderr,
    )
    return 0 if ok else 1


def _fail(command: str, message: str) -> int:
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "error": message,
    }
    print(json.dumps(report, indent=2, sort_keys=True))
    print(f"orbitlab {command}: error: {message}", file=sys.stderr)
    return 2


def main(argv: list[str] | None = None) -> int:
    return dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
