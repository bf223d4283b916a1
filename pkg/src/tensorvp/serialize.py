"""JSON exchange formats.

Tensor::

    {"order": [n1, ..., nk], "entries": [e, ...]}      # row-major
    e := integer | {"var": "name"}

Formula (``i``/``j`` are 0-based here, 1-based in the Python objects)::

    {"leaf": <tensor>} | {"star": [<f>, <f>]}
    | {"star_ij": {"i": i, "j": j, "args": [<f>, <f>]}}

Circuit (topological order, 0-based gate indices)::

    {"gates": [{"in": e} | {"add": [l, r]} | {"mul": [l, r]}, ...], "output": i}

Assignment: ``{"name": value, ...}``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from .circuit import Add, Circuit, Input, Mul
from .errors import MalformedInput
from .formula import Formula, Leaf, Star, StarIJ
from .tensor import Tensor, Var


def entry_to_json(e):
    return {"var": e.name} if isinstance(e, Var) else e


def entry_from_json(x):
    if isinstance(x, bool):
        raise MalformedInput("booleans are not tensor entries")
    if isinstance(x, int):
        return x
    if isinstance(x, dict) and set(x) == {"var"} and isinstance(x["var"], (str, int)):
        return Var(x["var"])
    raise MalformedInput(f"bad tensor entry {x!r}")


def tensor_to_json(t: Tensor) -> dict:
    return {"order": list(t.order), "entries": [entry_to_json(e) for e in t.entries]}


def tensor_from_json(d) -> Tensor:
    if not isinstance(d, dict) or "order" not in d or "entries" not in d:
        raise MalformedInput("tensor must be an object with 'order' and 'entries'")
    try:
        return Tensor(tuple(d["order"]), tuple(entry_from_json(x) for x in d["entries"]))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, MalformedInput):
            raise
        raise MalformedInput(f"bad tensor: {exc}") from None


def formula_to_json(f: Formula) -> dict:
    if isinstance(f, Leaf):
        return {"leaf": tensor_to_json(f.tensor)}
    args = [formula_to_json(f.left), formula_to_json(f.right)]
    if isinstance(f, Star):
        return {"star": args}
    return {"star_ij": {"i": f.i - 1, "j": f.j - 1, "args": args}}


def formula_from_json(d) -> Formula:
    if not isinstance(d, dict) or len(d) != 1:
        raise MalformedInput(f"bad formula node {str(d)[:60]!r}")
    (kind, body), = d.items()
    if kind == "leaf":
        return Leaf(tensor_from_json(body))
    if kind == "star":
        if not isinstance(body, list) or len(body) != 2:
            raise MalformedInput("'star' takes exactly two arguments")
        return Star(formula_from_json(body[0]), formula_from_json(body[1]))
    if kind == "star_ij":
        try:
            i, j, args = int(body["i"]), int(body["j"]), body["args"]
        except (KeyError, TypeError, ValueError):
            raise MalformedInput("'star_ij' needs integer 'i', 'j' and 'args'") from None
        if not isinstance(args, list) or len(args) != 2:
            raise MalformedInput("'star_ij' takes exactly two arguments")
        return StarIJ(i + 1, j + 1, formula_from_json(args[0]), formula_from_json(args[1]))
    raise MalformedInput(f"unknown formula node {kind!r}")


def circuit_to_json(c: Circuit) -> dict:
    gates = []
    for g in c.gates:
        if isinstance(g, Input):
            gates.append({"in": entry_to_json(g.label)})
        elif isinstance(g, Add):
            gates.append({"add": [g.left, g.right]})
        else:
            gates.append({"mul": [g.left, g.right]})
    return {"gates": gates, "output": c.output}


def circuit_from_json(d) -> Circuit:
    if not isinstance(d, dict) or "gates" not in d or "output" not in d:
        raise MalformedInput("circuit must be an object with 'gates' and 'output'")
    gates = []
    for k, g in enumerate(d["gates"]):
        if not isinstance(g, dict) or len(g) != 1:
            raise MalformedInput(f"bad gate {k}: {g!r}")
        (kind, body), = g.items()
        if kind == "in":
            gates.append(Input(entry_from_json(body)))
        elif kind in ("add", "mul") and isinstance(body, list) and len(body) == 2:
            l, r = (int(x) for x in body)
            gates.append(Add(l, r) if kind == "add" else Mul(l, r))
        else:
            raise MalformedInput(f"bad gate {k}: {g!r}")
    return Circuit(tuple(gates), int(d["output"]))


def load_any(d) -> Union[Tensor, Formula, Circuit]:
    """Decode whichever of the three formats ``d`` is."""
    if isinstance(d, dict):
        if "gates" in d:
            return circuit_from_json(d)
        if "order" in d:
            return tensor_from_json(d)
        if len(d) == 1 and next(iter(d)) in ("leaf", "star", "star_ij"):
            return formula_from_json(d)
    raise MalformedInput("document is not a tensor, formula or circuit")


def to_json(obj) -> dict:
    if isinstance(obj, Tensor):
        return tensor_to_json(obj)
    if isinstance(obj, Circuit):
        return circuit_to_json(obj)
    return formula_to_json(obj)


def dumps(obj: Any) -> str:
    if isinstance(obj, (Tensor, Circuit, Leaf, Star, StarIJ)):
        obj = to_json(obj)
    return json.dumps(obj, separators=(",", ":"))


def read_json(path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON ({exc})") from None


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj) + "\n")


def assignment_from_json(d) -> dict:
    if not isinstance(d, dict):
        raise MalformedInput("assignment must be a JSON object")
    out = {}
    for k, v in d.items():
        if isinstance(v, bool) or not isinstance(v, int):
            raise MalformedInput(f"value of {k!r} must be an integer")
        out[k] = v
        if k.isdigit():
            out[int(k)] = v  # integer variable identifiers
    return out
