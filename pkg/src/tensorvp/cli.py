"""Command-line front end.

Exit status: 0 success / equivalent, 1 not equivalent, 2 usage or validation
error.  Every ``compile``/``tamify``/``decompose``/``flatten`` run writes its
result plus a ``<out>.stats.json`` sidecar carrying sizes and bound checks.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from . import compilers, equiv, serialize, transforms
from .circuit import (
    Circuit,
    LEAF_SHAPE,
    common_parse_shape,
    eval_circuit,
    gen_uniform_circuit,
    is_multiplicatively_disjoint,
    is_skew,
    parse_shape,
    random_shape,
)
from .errors import MalformedInput, TensorVPError
from .field import DEFAULT_MODULUS, make_field, use_modulus
from .formula import (
    Leaf,
    Star,
    StarIJ,
    eval_formula,
    is_pure_star,
    is_totally_tame,
    operator_kinds,
    star_to_ij,
    validate,
)
from .generate import random_formula, random_tensor
from .tensor import Tensor, eval_tensor


@dataclass(frozen=True)
class RunConfig:
    modulus: int = DEFAULT_MODULUS
    seed: int = 0
    trials: int = 50
    expand_limit: int = equiv.DEFAULT_EXPAND_LIMIT


class _Fail(Exception):
    """Internal: abort a command with exit status 2."""


def _load(path):
    return serialize.load_any(serialize.read_json(path))


def _load_formula(path, convert: bool = False):
    obj = _load(path)
    if not isinstance(obj, (Leaf, Star, StarIJ)):
        raise MalformedInput(f"{path} does not hold a formula")
    if convert:
        obj = normalize_operators(obj)
    return obj


def normalize_operators(f):
    """Rewrite every ``*_{dim(left),1}`` node as ``*``."""
    if isinstance(f, Leaf):
        return f
    left, right = normalize_operators(f.left), normalize_operators(f.right)
    if isinstance(f, StarIJ) and not (f.i == f.left.dim and f.j == 1):
        return StarIJ(f.i, f.j, left, right)
    return Star(left, right)


def _sidecar(out: Path, stats: dict) -> None:
    Path(str(out) + ".stats.json").write_text(json.dumps(stats, sort_keys=True) + "\n")


def _emit(obj) -> None:
    print(json.dumps(obj, separators=(",", ":")))


# ---------------------------------------------------------------------------


def cmd_eval(args, cfg: RunConfig) -> int:
    obj = _load(args.input)
    assignment = serialize.assignment_from_json(serialize.read_json(args.assign)) if args.assign else {}
    if isinstance(obj, Circuit):
        _emit(eval_circuit(obj, assignment))
    elif isinstance(obj, Tensor):
        _emit(serialize.tensor_to_json(eval_tensor(obj, assignment)))
    else:
        t = eval_formula(obj, assignment)
        _emit(t.entries[0] if t.dim == 0 else serialize.tensor_to_json(t))
    return 0


def cmd_stats(args, cfg: RunConfig) -> int:
    obj = _load(args.input)
    if isinstance(obj, Circuit):
        md = is_multiplicatively_disjoint(obj)
        shape = common_parse_shape(obj) if md else None
        _emit({
            "kind": "circuit",
            "size": obj.size,
            "multiplicatively_disjoint": md,
            "skew": is_skew(obj),
            "common_shape": None if shape is None else str(shape),
            "degree_bound": equiv.degree_bound(obj),
        })
    elif isinstance(obj, Tensor):
        _emit({"kind": "tensor", "order": list(obj.order), "size": obj.size, "maxorder": obj.maxorder})
    else:
        m = validate(obj)
        _emit({
            "kind": "formula",
            "operators": sorted(operator_kinds(obj)),
            "order": list(obj.order),
            "size": m.size,
            "dim": m.dim,
            "maxdim": m.maxdim,
            "input_dim": m.input_dim,
            "input_maxorder": obj.input_maxorder,
            "totally_tame": is_totally_tame(obj),
        })
    return 0


def cmd_compile(args, cfg: RunConfig) -> int:
    out = Path(args.output)
    if args.direction == "c2f":
        c = _load(args.input)
        if not isinstance(c, Circuit):
            raise MalformedInput(f"{args.input} does not hold a circuit")
        f = compilers.circuit_to_formula(c)
        bound = compilers.c2f_size_bound(c)
        serialize.write_json(out, f)
        _sidecar(out, {
            "direction": "c2f",
            "circuit_size": c.size,
            "shape_size": common_parse_shape(c).size,
            "size": f.size,
            "maxdim": f.maxdim,
            "bound": bound,
            "bound_ok": f.size <= bound,
            "maxdim_ok": f.maxdim <= 3,
        })
        return 0
    f = _load_formula(args.input, args.convert)
    if args.direction == "f2c":
        c, entry_map = compilers.formula_to_circuit(f)
        bound = compilers.f2c_size_bound(f)
        serialize.write_json(out, c)
        _sidecar(out, {
            "direction": "f2c",
            "formula_size": f.size,
            "size": c.size,
            "bound": bound,
            "bound_ok": c.size <= bound,
            "md_ok": is_multiplicatively_disjoint(c),
            "entry_gates": [[list(k), v] for k, v in entry_map.items()],
        })
        return 0
    entry = tuple(int(x) for x in args.entry.split(",")) if args.entry else (0,) * f.dim
    c = compilers.to_skew_circuit(f, entry)
    bound = compilers.skew_size_bound(f)
    serialize.write_json(out, c)
    _sidecar(out, {
        "direction": "skew",
        "entry": list(entry),
        "formula_size": f.size,
        "size": c.size,
        "bound": bound,
        "bound_ok": c.size <= bound,
        "skew_ok": is_skew(c),
    })
    return 0


def cmd_tamify(args, cfg: RunConfig) -> int:
    f = _load_formula(args.input, args.convert)
    validate(f)
    if args.ij:
        if is_pure_star(f) and not isinstance(f, Leaf):
            f = star_to_ij(f)
        g = transforms.tamify_ij(f)
    else:
        g = transforms.tamify(f)
    out = Path(args.output)
    serialize.write_json(out, g)
    _sidecar(out, {
        "size_in": f.size,
        "size_out": g.size,
        "size_preserved": f.size == g.size,
        "maxdim_in": f.maxdim,
        "maxdim_out": g.maxdim,
        "totally_tame": is_totally_tame(g),
    })
    return 0


def cmd_decompose(args, cfg: RunConfig) -> int:
    t = _load(args.input)
    if not isinstance(t, Tensor):
        raise MalformedInput(f"{args.input} does not hold a tensor")
    f = transforms.decompose_tensor(t, args.limit)
    out = Path(args.output)
    serialize.write_json(out, f)
    _sidecar(out, {
        "entries": t.size,
        "dim": t.dim,
        "size": f.size,
        "input_dim": f.input_dim,
        "factor_size_ok": all(t.size**2 * n <= t.size**3 for n in t.order),
    })
    return 0


def cmd_flatten(args, cfg: RunConfig) -> int:
    f = _load_formula(args.input, args.convert)
    g = transforms.flatten_inputs(f, args.limit)
    out = Path(args.output)
    serialize.write_json(out, g)
    _sidecar(out, {"size_in": f.size, "size_out": g.size, "input_dim": g.input_dim})
    return 0


def cmd_check(args, cfg: RunConfig) -> int:
    a, b = _load(args.a), _load(args.b)
    for obj, path in ((a, args.a), (b, args.b)):
        if isinstance(obj, Tensor):
            raise MalformedInput(f"{path}: check compares formulas and circuits, not tensors")
    if args.exact:
        verdict = equiv.exact_equiv(a, b, cfg.expand_limit, cfg.seed)
    else:
        verdict = equiv.random_equiv(a, b, cfg.trials, cfg.seed)
    _emit(verdict.to_json())
    return 1 if isinstance(verdict, equiv.NotEqual) else 0


def cmd_gen(args, cfg: RunConfig) -> int:
    rng = random.Random(cfg.seed)
    variables = [v for v in args.vars.split(",") if v]
    if args.kind == "circuit":
        if args.shape:
            shape = parse_shape(args.shape)
        elif args.nodes:
            shape = random_shape(rng, args.nodes)
        else:
            shape = LEAF_SHAPE
        obj = gen_uniform_circuit(shape, args.width, cfg.seed, variables)
    elif args.kind == "formula":
        obj = random_formula(
            rng,
            args.leaves,
            max_order=args.maxorder,
            max_dim=args.maxdim,
            max_input_dim=args.input_dim,
            root_dim=args.root_dim,
            vector_free=args.vector_free,
            ij=args.ij,
            variables=variables,
        )
    else:
        if not args.order:
            raise _Fail("gen tensor needs --order")
        obj = random_tensor(rng, [int(x) for x in args.order.split(",")], variables)
    text = serialize.dumps(obj)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tensorvp", description=__doc__.splitlines()[0])
    p.add_argument("--modulus", type=int, default=DEFAULT_MODULUS, help="prime field modulus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--expand-limit", type=int, default=equiv.DEFAULT_EXPAND_LIMIT)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", help="evaluate a tensor, formula or circuit")
    s.add_argument("input")
    s.add_argument("--assign", help="JSON file mapping variable names to values")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("stats", help="print metrics and structural predicates")
    s.add_argument("input")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("compile", help="lower between circuits and formulas")
    s.add_argument("direction", choices=["c2f", "f2c", "skew"])
    s.add_argument("input")
    s.add_argument("output")
    s.add_argument("--entry", help="comma-separated 0-based entry for skew")
    s.add_argument("--convert", action="store_true", help="rewrite *_{dim,1} nodes to * first")
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("tamify", help="make a formula totally tame")
    s.add_argument("input")
    s.add_argument("output")
    s.add_argument("--ij", action="store_true", help="treat as a *_{i,j} formula")
    s.add_argument("--convert", action="store_true", help="rewrite *_{dim,1} nodes to * first")
    s.set_defaults(func=cmd_tamify)

    for name, func, helptext in (
        ("decompose", cmd_decompose, "formula of input dimension 3 computing a tensor"),
        ("flatten", cmd_flatten, "replace leaves of dimension > 3"),
    ):
        s = sub.add_parser(name, help=helptext)
        s.add_argument("input")
        s.add_argument("output")
        s.add_argument("--limit", type=int, default=transforms.DEFAULT_DECOMPOSE_LIMIT,
                       help="largest tensor entry count to decompose")
        if name == "flatten":
            s.add_argument("--convert", action="store_true")
        s.set_defaults(func=func)

    s = sub.add_parser("check", help="test two scalar objects for equivalence")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--exact", action="store_true", help="compare exact expansions")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("gen", help="generate a random circuit, formula or tensor")
    s.add_argument("kind", choices=["circuit", "formula", "tensor"])
    s.add_argument("-o", "--output")
    s.add_argument("--vars", default="x0,x1,x2,x3")
    s.add_argument("--shape", help="shape like '+(*(.,.))' or 'leaf'")
    s.add_argument("--nodes", type=int, help="random shape with this many nodes")
    s.add_argument("--width", type=int, default=2)
    s.add_argument("--leaves", type=int, default=3)
    s.add_argument("--maxdim", type=int, default=3)
    s.add_argument("--maxorder", type=int, default=3)
    s.add_argument("--input-dim", type=int)
    s.add_argument("--root-dim", type=int)
    s.add_argument("--vector-free", action="store_true")
    s.add_argument("--ij", action="store_true")
    s.add_argument("--order", help="comma-separated tensor order")
    s.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        make_field(args.modulus)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    cfg = RunConfig(args.modulus, args.seed, args.trials, args.expand_limit)
    try:
        with use_modulus(cfg.modulus):
            return args.func(args, cfg)
    except (TensorVPError, _Fail, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
