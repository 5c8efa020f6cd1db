"""Command-line front door: JSON in, JSON report out.

Exit status 0 on success, 1 on a domain error (with a machine-readable
{"error": ..., "detail": ...} report), 2 on malformed input.  Output is
byte-identical for identical inputs and seeds.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path
from typing import Optional

from . import galois, lattice, padic, torsor, torus
from .errors import DomainError

_EXAMPLES = {
    "snf": 'tametorus snf --matrix \'{"rows":2,"cols":2,"entries":[[2,4],[6,8]]}\'',
    "coinvariants": "tametorus coinvariants --module module.json --subgroup inertia",
    "tame-quotient": "tametorus tame-quotient --module module.json",
    "component-group": "tametorus component-group --torus norm --e 2   (order-2 group)",
    "h1": 'tametorus h1 --group \'{"free_rank":0,"invariant_factors":[2]}\' --frobenius identity',
    "norm-class": "tametorus norm-class --p 5 --e 2 --a 2 --precision 6",
    "oracle-norm-class": "tametorus oracle-norm-class --p 5 --e 2 --a 2 --precision 6 --search-precision 3",
    "eval-torsor": "tametorus eval-torsor --family family.json --point 1,2",
    "verify-diagram": "tametorus verify-diagram --family family.json --samples 10000 --seed 42",
    "constancy": "tametorus constancy --family family.json",
}


class MalformedInput(Exception):
    pass


def _camel_to_kebab(name: str) -> str:
    return re.sub(r"(?<!^)(?=[A-Z])", "-", name).lower()


def _load_json_arg(value: str) -> dict:
    """Accept inline JSON (starts with '{') or a path to a JSON file."""
    text = value
    if not value.lstrip().startswith("{"):
        try:
            text = Path(value).read_text()
        except OSError as exc:
            raise MalformedInput(f"cannot read {value}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedInput("expected a JSON object")
    return data


def _parse_matrix(value: str) -> lattice.IntegerMatrix:
    try:
        return lattice.IntegerMatrix.from_json_dict(_load_json_arg(value))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad matrix: {exc}") from exc


def _parse_module(value: str) -> galois.GaloisLatticeModule:
    data = _load_json_arg(value)
    try:
        return galois.GaloisLatticeModule.from_json_dict(data)
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"bad module: {exc}") from exc


def _parse_group(value: str) -> lattice.FgAbelianGroup:
    data = _load_json_arg(value)
    try:
        return lattice.FgAbelianGroup.from_json_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad group: {exc}") from exc


def _parse_family(value: str) -> torsor.NormTorsorFamily:
    data = _load_json_arg(value)
    try:
        return torsor.NormTorsorFamily.from_json_dict(data)
    except (KeyError, TypeError) as exc:
        raise MalformedInput(f"bad family: {exc}") from exc


def _parse_point(value: str, expected: int) -> list[int]:
    try:
        coords = [int(x) for x in value.split(",")]
    except ValueError as exc:
        raise MalformedInput(f"bad point {value!r}: {exc}") from exc
    if len(coords) != expected:
        raise MalformedInput(f"expected {expected} coordinates, got {len(coords)}")
    return coords


def _cmd_snf(args) -> dict:
    result = lattice.smith_normal_form(_parse_matrix(args.matrix))
    return {
        "U": result.U.to_json_dict(),
        "S": result.S.to_json_dict(),
        "V": result.V.to_json_dict(),
    }


def _cmd_coinvariants(args) -> dict:
    module = _parse_module(args.module)
    quotient = galois.coinvariants(module, args.subgroup)
    return {
        "group": quotient.group.to_json_dict(),
        "projection": quotient.projection.to_json_dict(),
    }


def _cmd_tame_quotient(args) -> dict:
    module = _parse_module(args.module)
    quotient = galois.largest_trivial_free_quotient(module)
    return {
        "group": quotient.group.to_json_dict(),
        "projection": quotient.projection.to_json_dict(),
    }


def _cmd_component_group(args) -> dict:
    if args.module is not None:
        data = _load_json_arg(args.module)
        try:
            spec = torus.TameTorusSpec.from_json_dict(data)
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad torus description: {exc}") from exc
    elif args.torus == "norm":
        if args.e is None:
            raise MalformedInput("--e is required with --torus norm")
        spec = torus.norm_torus_spec(args.e)
    else:
        raise MalformedInput("provide --torus norm --e N or --module")
    cg = torus.component_group(spec)
    if args.with_frobenius:
        return cg.to_json_dict()
    return cg.group.to_json_dict()


def _cmd_h1(args) -> dict:
    group = _parse_group(args.group)
    if args.frobenius == "identity":
        frob = lattice.IntegerMatrix.identity(group.num_generators)
    else:
        frob = _parse_matrix(args.frobenius)
    return galois.cyclic_h1(group, frob).to_json_dict()


def _make_context(args) -> padic.PadicContext:
    return padic.PadicContext(args.p, args.precision)


def _cmd_norm_class(args) -> dict:
    ctx = _make_context(args)
    return padic.norm_class(ctx.integer(args.a), args.e).to_json_dict()


def _cmd_oracle_norm_class(args) -> dict:
    ctx = _make_context(args)
    return padic.norm_class_oracle(ctx.integer(args.a), args.e, args.search_precision).to_json_dict()


def _cmd_eval_torsor(args) -> dict:
    family = _parse_family(args.family)
    point = _parse_point(args.point, family.n_vars)
    return torsor.evaluate(family, point).to_json_dict()


def _cmd_verify_diagram(args) -> dict:
    family = _parse_family(args.family)
    return torsor.verify_factorization(family, args.samples, args.seed).to_json_dict()


def _cmd_constancy(args) -> dict:
    family = _parse_family(args.family)
    return torsor.constancy_check(family).to_json_dict()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tametorus",
        description="Component groups of tame norm tori, p-adic norm classes, "
        "and torsor-evaluation checks over the special fibre.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, configure):
        p = sub.add_parser(name, epilog=f"example: {_EXAMPLES[name]}")
        configure(p)
        p.add_argument("--output", help="write the JSON report here instead of stdout")
        p.set_defaults(func=func)

    add("snf", _cmd_snf, lambda p: p.add_argument("--matrix", required=True,
        help="matrix JSON (inline or a file path)"))

    def conf_coinv(p):
        p.add_argument("--module", required=True, help="module JSON (inline or path)")
        p.add_argument("--subgroup", default="full", choices=galois.SUBGROUP_SELECTORS)
    add("coinvariants", _cmd_coinvariants, conf_coinv)

    add("tame-quotient", _cmd_tame_quotient, lambda p: p.add_argument(
        "--module", required=True, help="module JSON (inline or path)"))

    def conf_cg(p):
        p.add_argument("--torus", choices=["norm"], help="built-in torus family")
        p.add_argument("--e", type=int, help="degree of the norm torus")
        p.add_argument("--module", help="explicit character module JSON instead of --torus")
        p.add_argument("--with-frobenius", action="store_true",
                       help="include the descended Frobenius matrix in the report")
    add("component-group", _cmd_component_group, conf_cg)

    def conf_h1(p):
        p.add_argument("--group", required=True, help="group JSON (inline or path)")
        p.add_argument("--frobenius", required=True,
                       help="matrix JSON, or the literal 'identity'")
    add("h1", _cmd_h1, conf_h1)

    def conf_padic(p, oracle):
        p.add_argument("--p", type=int, required=True, help="odd prime")
        p.add_argument("--e", type=int, required=True, help="degree, must divide p-1")
        p.add_argument("--a", type=int, required=True, help="the element, as an integer")
        p.add_argument("--precision", type=int, default=6, help="working precision N")
        if oracle:
            p.add_argument("--search-precision", type=int, default=2,
                           help="coefficient vectors are exhausted mod p^this")
    add("norm-class", _cmd_norm_class, lambda p: conf_padic(p, oracle=False))
    add("oracle-norm-class", _cmd_oracle_norm_class, lambda p: conf_padic(p, oracle=True))

    def conf_eval(p):
        p.add_argument("--family", required=True, help="family JSON (inline or path)")
        p.add_argument("--point", required=True, help="comma-separated integer coordinates")
    add("eval-torsor", _cmd_eval_torsor, conf_eval)

    def conf_verify(p):
        p.add_argument("--family", required=True, help="family JSON (inline or path)")
        p.add_argument("--samples", type=int, default=10_000)
        p.add_argument("--seed", type=int, default=0)
    add("verify-diagram", _cmd_verify_diagram, conf_verify)

    add("constancy", _cmd_constancy, lambda p: p.add_argument(
        "--family", required=True, help="family JSON (inline or path)"))

    return parser


def _emit(report: dict, output: Optional[str], stream) -> None:
    text = json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        stream.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except MalformedInput as exc:
        _emit({"error": "malformed-input", "detail": str(exc)}, None, sys.stderr)
        return 2
    except DomainError as exc:
        _emit({"error": _camel_to_kebab(type(exc).__name__), "detail": str(exc)},
              None, sys.stderr)
        return 1
    except ValueError as exc:
        _emit({"error": "invalid-value", "detail": str(exc)}, None, sys.stderr)
        return 1
    _emit(report, args.output, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
