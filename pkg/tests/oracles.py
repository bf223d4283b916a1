"""Independent reference implementations used as test oracles.

Nothing here calls into the numpy contraction path of the package: tensors
are plain nested loops over Python ints, so a bug in the library's fast
path cannot hide itself in both sides of a comparison.
"""

from __future__ import annotations

import itertools
import math

from tensorvp.circuit import Add, Circuit, Input, Mul, ShapeTree
from tensorvp.formula import Leaf, Star
from tensorvp.poly import SparsePoly
from tensorvp.tensor import Var


class Dense:
    """Minimal dense tensor: an order tuple and a dict from index to int."""

    def __init__(self, order, data):
        self.order = tuple(order)
        self.data = dict(data)

    @classmethod
    def from_tensor(cls, t, assignment=None, p=None):
        data = {}
        for idx, e in zip(itertools.product(*(range(n) for n in t.order)), t.entries):
            v = assignment[e.name] if isinstance(e, Var) else e
            data[idx] = v % p if p else v
        return cls(t.order, data)

    def flat(self):
        return [self.data[idx] for idx in itertools.product(*(range(n) for n in self.order))]


def naive_contract_ij(a: Dense, b: Dense, i: int, j: int, p: int) -> Dense:
    """``a *_{i,j} b`` straight from the definition (1-based i, j)."""
    assert a.order[i - 1] == b.order[j - 1]
    out_order = a.order[: i - 1] + a.order[i:] + b.order[: j - 1] + b.order[j:]
    data = {}
    for e1 in itertools.product(*(range(n) for n in a.order[: i - 1])):
        for e2 in itertools.product(*(range(n) for n in a.order[i:])):
            for e3 in itertools.product(*(range(n) for n in b.order[: j - 1])):
                for e4 in itertools.product(*(range(n) for n in b.order[j:])):
                    s = 0
                    for r in range(a.order[i - 1]):
                        s += a.data[e1 + (r,) + e2] * b.data[e3 + (r,) + e4]
                    data[e1 + e2 + e3 + e4] = s % p
    return Dense(out_order, data)


def naive_contract(a: Dense, b: Dense, p: int) -> Dense:
    return naive_contract_ij(a, b, len(a.order), 1, p)


def naive_matmul(a, b, p):
    """Textbook triple loop on lists of rows."""
    n, m, q = len(a), len(b), len(b[0])
    return [[sum(a[r][k] * b[k][c] for k in range(m)) % p for c in range(q)] for r in range(n)]


def naive_eval(f, assignment, p) -> Dense:
    if isinstance(f, Leaf):
        return Dense.from_tensor(f.tensor, assignment, p)
    a, b = naive_eval(f.left, assignment, p), naive_eval(f.right, assignment, p)
    if isinstance(f, Star):
        return naive_contract(a, b, p)
    return naive_contract_ij(a, b, f.i, f.j, p)


def recompute_metrics(f):
    """(size, dim, maxdim, input_dim) by a fresh walk, without cached properties."""
    nodes = []

    def walk(g):
        if isinstance(g, Leaf):
            nodes.append((len(g.tensor.order), True, math.prod(g.tensor.order)))
            return len(g.tensor.order)
        d = walk(g.left) + walk(g.right) - 2
        nodes.append((d, False, 1))
        return d

    root = walk(f)
    size = sum(s for _, _, s in nodes)
    return size, root, max(d for d, _, _ in nodes), max(d for d, leaf, _ in nodes if leaf)


def all_subtrees(f):
    yield f
    if not isinstance(f, Leaf):
        yield from all_subtrees(f.left)
        yield from all_subtrees(f.right)


# ---------------------------------------------------------------------------
# circuits


def eval_circuit_naive(c: Circuit, assignment, p: int) -> list[int]:
    vals = []
    for g in c.gates:
        if isinstance(g, Input):
            vals.append((assignment[g.label.name] if isinstance(g.label, Var) else g.label) % p)
        elif isinstance(g, Add):
            vals.append((vals[g.left] + vals[g.right]) % p)
        else:
            vals.append((vals[g.left] * vals[g.right]) % p)
    return vals


def descendants(c: Circuit, k: int) -> set[int]:
    seen, stack = set(), [k]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        g = c.gates[v]
        if not isinstance(g, Input):
            stack += [g.left, g.right]
    return seen


def md_naive(c: Circuit) -> bool:
    return all(
        not (descendants(c, g.left) & descendants(c, g.right))
        for g in c.gates
        if isinstance(g, Mul)
    )


def parse_tree_monomials(c: Circuit, k: int | None = None) -> list[SparsePoly]:
    """Every parse tree's monomial by exhaustive recursive choice."""
    k = c.output if k is None else k
    g = c.gates[k]
    if isinstance(g, Input):
        return [SparsePoly.from_entry(g.label)]
    if isinstance(g, Add):
        return parse_tree_monomials(c, g.left) + parse_tree_monomials(c, g.right)
    return [a * b for a in parse_tree_monomials(c, g.left) for b in parse_tree_monomials(c, g.right)]


def partial_parse_tree_sum(c: Circuit, shape: ShapeTree, gate: int) -> SparsePoly:
    """Sum of m(p) over all maps p from shape nodes to gates rooted at ``gate``.

    Every assignment of a same-kind gate to each shape node is tried and the
    parse-tree conditions are checked afterwards.  A +-node contributes the
    number of edges to the chosen child, so ``Add(g, g)`` counts twice.
    """
    nodes = list(shape.nodes())
    kinds = {0: Input, 1: Add, 2: Mul}
    cands = []
    for path, node in nodes:
        pool = [v for v, g in enumerate(c.gates) if isinstance(g, kinds[node.arity])]
        if path == ():
            pool = [v for v in pool if v == gate]
        cands.append(pool)
    total = SparsePoly.zero()
    for choice in itertools.product(*cands):
        p = {path: v for (path, _), v in zip(nodes, choice)}
        weight = 1
        mono = SparsePoly.const(1)
        for path, node in nodes:
            g = c.gates[p[path]]
            if node.arity == 0:
                mono = mono * SparsePoly.from_entry(g.label)
            elif node.arity == 1:
                weight *= (g.left == p[path + (0,)]) + (g.right == p[path + (0,)])
            else:
                weight *= g.left == p[path + (0,)] and g.right == p[path + (1,)]
            if not weight:
                break
        if weight:
            total = total + SparsePoly.const(weight) * mono
    return total
