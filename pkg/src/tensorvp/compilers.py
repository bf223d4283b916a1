"""Lowering passes between circuits and contraction formulas.

* :func:`circuit_to_formula` builds a ``*``-formula of maximal dimension 3
  from a multiplicatively disjoint circuit whose parse trees share a shape.
* :func:`formula_to_circuit` emits one gate per entry of every node tensor.
* :func:`to_skew_circuit` computes a single entry of a vector-free formula
  with a skew circuit (an iterated matrix-vector product).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .circuit import Add, Circuit, Gate, Input, Mul, ShapeTree, common_parse_shape, is_multiplicatively_disjoint
from .errors import (
    IndexOutOfRange,
    MixedOperators,
    NoCommonShape,
    NotMultiplicativelyDisjoint,
    VectorLeafPresent,
)
from .formula import Formula, Leaf, Star, chain, is_pure_star, leaves, validate
from .tensor import Tensor, all_ones_vector


@dataclass(frozen=True)
class SelectorTensors:
    """The five constant/label tensors used by :func:`circuit_to_formula`.

    With gates ``v_0..v_{r-1}``:

    * ``I[i,i]`` is the label of ``v_i`` when it is an input, all else 0
    * ``M[i,j,j]`` counts the edges from ``v_i`` into the +-gate ``v_j``
    * ``ML[i,j,j]`` / ``MR[i,j,j]`` is 1 when ``v_i`` is the left / right
      child of the x-gate ``v_j``
    * ``E`` is the all-ones vector of length ``r``
    """

    I: Tensor
    M: Tensor
    ML: Tensor
    MR: Tensor
    E: Tensor


def selector_tensors(c: Circuit) -> SelectorTensors:
    r = c.size
    ident = [0] * (r * r)
    m = np.zeros((r, r, r), dtype=np.int64)
    ml = np.zeros((r, r, r), dtype=np.int64)
    mr = np.zeros((r, r, r), dtype=np.int64)
    for j, g in enumerate(c.gates):
        if isinstance(g, Input):
            ident[j * r + j] = g.label
        elif isinstance(g, Add):
            # Add(g, g) has two parse-tree edges into g; the count keeps 2*g.
            m[g.left, j, j] += 1
            m[g.right, j, j] += 1
        else:
            ml[g.left, j, j] = 1
            mr[g.right, j, j] = 1
    return SelectorTensors(
        I=Tensor((r, r), tuple(ident)),
        M=Tensor.from_array(m),
        ML=Tensor.from_array(ml),
        MR=Tensor.from_array(mr),
        E=all_ones_vector(r),
    )


def shape_formulas(c: Circuit, shape: ShapeTree | None = None) -> dict[tuple[int, ...], Formula]:
    """The ``(r, r)`` formula ``F_s`` for every node ``s`` of the common shape.

    ``F_s[i, i]`` sums the monomials of the partial parse trees rooted at
    ``s`` that map ``s`` to gate ``i``; off-diagonal entries are zero.
    """
    if not is_multiplicatively_disjoint(c):
        raise NotMultiplicativelyDisjoint("circuit_to_formula needs a multiplicatively disjoint circuit")
    if shape is None:
        shape = common_parse_shape(c)
        if shape is None:
            raise NoCommonShape("parse trees of the circuit do not share a common shape")
    sel = selector_tensors(c)
    leaf_i, leaf_m, leaf_ml, leaf_mr, leaf_e = (Leaf(t) for t in (sel.I, sel.M, sel.ML, sel.MR, sel.E))
    out: dict[tuple[int, ...], Formula] = {}
    for path, node in shape.nodes():
        if node.arity == 0:
            out[path] = leaf_i
        elif node.arity == 1:
            out[path] = Star(leaf_e, Star(out[path + (0,)], leaf_m))
        else:
            out[path] = Star(
                Star(leaf_e, Star(out[path + (0,)], leaf_ml)),
                Star(leaf_e, Star(out[path + (1,)], leaf_mr)),
            )
    return out


def circuit_to_formula(c: Circuit) -> Formula:
    """Scalar ``*``-formula ``E * F_root * E`` computing the circuit's polynomial."""
    fs = shape_formulas(c)
    e = Leaf(all_ones_vector(c.size))
    return Star(Star(e, fs[()]), e)


def c2f_size_bound(c: Circuit) -> int:
    shape = common_parse_shape(c)
    return 9 * c.size**3 * shape.size


# ---------------------------------------------------------------------------


def formula_to_circuit(f: Formula) -> tuple[Circuit, dict[tuple[int, ...], int]]:
    """Multiplicatively disjoint circuit with a gate for every entry of ``f``.

    Returns the circuit and the map from each output coordinate to the gate
    computing that entry.  The circuit's output is the gate of the first
    entry in row-major order.
    """
    validate(f)
    gates: list[Gate] = []

    def emit(g: Gate) -> int:
        gates.append(g)
        return len(gates) - 1

    def build(node) -> np.ndarray:
        if isinstance(node, Leaf):
            ids = [emit(Input(e)) for e in node.tensor.entries]
            return np.array(ids, dtype=np.int64).reshape(node.order)
        ga = build(node.left)
        gb = build(node.right)
        ax, bx = (ga.ndim - 1, 0) if isinstance(node, Star) else (node.i - 1, node.j - 1)
        ga = np.moveaxis(ga, ax, -1)
        gb = np.moveaxis(gb, bx, 0)
        out = np.empty(ga.shape[:-1] + gb.shape[1:], dtype=np.int64)
        for e1 in itertools.product(*(range(n) for n in ga.shape[:-1])):
            row = ga[e1]
            for e2 in itertools.product(*(range(n) for n in gb.shape[1:])):
                col = gb[(slice(None),) + e2]
                acc = emit(Mul(int(row[0]), int(col[0])))
                for k in range(1, len(row)):
                    acc = emit(Add(acc, emit(Mul(int(row[k]), int(col[k])))))
                out[e1 + e2] = acc
        return out

    top = build(f)
    entry_map = {idx: int(top[idx]) for idx in itertools.product(*(range(n) for n in top.shape))}
    first = next(iter(entry_map.values()))
    return Circuit(tuple(gates), first), entry_map


def f2c_size_bound(f: Formula) -> int:
    return 2 * f.input_maxorder ** (f.maxdim + 1) * f.size


# ---------------------------------------------------------------------------


def right_associate(f: Formula) -> Formula:
    """Rebuild a pure-``*`` formula as ``A1 * (A2 * (... * Aq))``.

    The tensor is unchanged when no leaf is a vector.
    """
    if not is_pure_star(f):
        raise MixedOperators("right_associate needs a pure * formula")
    return chain(leaves(f), right_assoc=True)


def to_skew_circuit(f: Formula, e: tuple[int, ...]) -> Circuit:
    """Skew circuit computing the single entry ``f[e]`` of a vector-free formula."""
    validate(f)
    if not is_pure_star(f):
        raise MixedOperators("to_skew_circuit needs a pure * formula")
    factors = leaves(f)
    if any(t.dim < 2 for t in factors):
        raise VectorLeafPresent("every leaf must have dimension >= 2")
    e = tuple(int(x) for x in e)
    if len(e) != f.dim or any(not 0 <= x < n for x, n in zip(e, f.order)):
        raise IndexOutOfRange(f"entry {e} outside order {f.order}")

    gates: list[Gate] = []

    def emit(g: Gate) -> int:
        gates.append(g)
        return len(gates) - 1

    if len(factors) == 1:
        emit(Input(factors[0][e]))
        return Circuit(tuple(gates), 0)

    # Split e into A1's leading indices, each inner factor's middle indices,
    # and the last factor's trailing indices.
    head = e[: factors[0].dim - 1]
    pos = len(head)
    mids = []
    for t in factors[1:-1]:
        mids.append(e[pos : pos + t.dim - 2])
        pos += t.dim - 2
    tail = e[pos:]
    last = factors[-1]
    w = [emit(Input(last[(l,) + tail])) for l in range(last.order[0])]

    def stage(rows, entry_of) -> list[int]:
        out = []
        for i in rows:
            acc = None
            for l, wl in enumerate(w):
                prod = emit(Mul(emit(Input(entry_of(i, l))), wl))
                acc = prod if acc is None else emit(Add(acc, prod))
            out.append(acc)
        return out

    for t, mid in zip(reversed(factors[1:-1]), reversed(mids)):
        w = stage(range(t.order[0]), lambda i, l, t=t, mid=mid: t[(i,) + mid + (l,)])
    first = factors[0]
    (root,) = stage([0], lambda _, l: first[head + (l,)])
    return Circuit(tuple(gates), root)


def skew_size_bound(f: Formula) -> int:
    return 2 * f.input_maxorder**3 * f.size
