"""Contraction formulas: binary trees of tensors joined by ``*`` or ``*_{i,j}``.

A formula is *pure-star* when every internal node is :class:`Star` and
*pure-ij* when every internal node is :class:`StarIJ`; :func:`validate`
rejects trees mixing the two.  ``StarIJ.i``/``StarIJ.j`` are 1-based.

Metrics follow the usual accounting:

* ``size``       number of contraction nodes plus the entry count of every leaf
* ``dim``        dimension of the computed tensor
* ``maxdim``     largest dimension computed at any node
* ``input_dim``  largest leaf dimension
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Union

from .errors import (
    IndexOutOfRange,
    LeafDimensionZero,
    MixedOperators,
    NotScalar,
    OrderMismatch,
    UnboundVariable,
)
from .field import modulus
from .tensor import Assignment, Tensor, contract_arrays


class _Node:
    @cached_property
    def size(self) -> int:
        if isinstance(self, Leaf):
            return self.tensor.size
        return self.left.size + self.right.size + 1

    @property
    def dim(self) -> int:
        return len(self.order)

    @cached_property
    def maxdim(self) -> int:
        if isinstance(self, Leaf):
            return self.dim
        return max(self.dim, self.left.maxdim, self.right.maxdim)

    @cached_property
    def input_dim(self) -> int:
        if isinstance(self, Leaf):
            return self.dim
        return max(self.left.input_dim, self.right.input_dim)

    @cached_property
    def input_maxorder(self) -> int:
        """Largest order component over all leaves (the ``n`` of the size bounds)."""
        if isinstance(self, Leaf):
            return self.tensor.maxorder
        return max(self.left.input_maxorder, self.right.input_maxorder)

    @cached_property
    def variables(self) -> frozenset:
        if isinstance(self, Leaf):
            return self.tensor.variables
        return self.left.variables | self.right.variables

    @cached_property
    def depth(self) -> int:
        if isinstance(self, Leaf):
            return 0
        return 1 + max(self.left.depth, self.right.depth)


@dataclass(frozen=True)
class Leaf(_Node):
    tensor: Tensor

    @property
    def order(self) -> tuple[int, ...]:
        return self.tensor.order

    def __str__(self) -> str:
        return "T" + "x".join(map(str, self.order))


@dataclass(frozen=True)
class Star(_Node):
    left: "Formula"
    right: "Formula"

    @cached_property
    def order(self) -> tuple[int, ...]:
        lo, ro = self.left.order, self.right.order
        if not lo or not ro:
            raise OrderMismatch("cannot contract a dimension-0 operand")
        if lo[-1] != ro[0]:
            raise OrderMismatch(f"cannot contract order {lo} with {ro}")
        return lo[:-1] + ro[1:]

    def __str__(self) -> str:
        return f"({self.left} * {self.right})"


@dataclass(frozen=True)
class StarIJ(_Node):
    i: int
    j: int
    left: "Formula"
    right: "Formula"

    @cached_property
    def order(self) -> tuple[int, ...]:
        lo, ro = self.left.order, self.right.order
        if not (1 <= self.i <= len(lo) and 1 <= self.j <= len(ro)):
            raise IndexOutOfRange(
                f"positions ({self.i},{self.j}) outside dimensions ({len(lo)},{len(ro)})"
            )
        if lo[self.i - 1] != ro[self.j - 1]:
            raise OrderMismatch(
                f"dimension {self.i} of {lo} does not match dimension {self.j} of {ro}"
            )
        return lo[: self.i - 1] + lo[self.i :] + ro[: self.j - 1] + ro[self.j :]

    def __str__(self) -> str:
        return f"({self.left} *{self.i},{self.j} {self.right})"


Formula = Union[Leaf, Star, StarIJ]


@dataclass(frozen=True)
class FormulaMetrics:
    size: int
    dim: int
    maxdim: int
    input_dim: int


def subformulas(f: Formula, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Formula]]:
    """Yield ``(path, node)`` in post-order; a path lists child positions from the root."""
    stack = [(path, f, False)]
    while stack:
        p, node, expanded = stack.pop()
        if isinstance(node, Leaf) or expanded:
            yield p, node
            continue
        stack.append((p, node, True))
        stack.append((p + (1,), node.right, False))
        stack.append((p + (0,), node.left, False))


def leaves(f: Formula) -> list[Tensor]:
    return [node.tensor for _, node in subformulas(f) if isinstance(node, Leaf)]


def operator_kinds(f: Formula) -> set[str]:
    kinds = set()
    for _, node in subformulas(f):
        if isinstance(node, Star):
            kinds.add("star")
        elif isinstance(node, StarIJ):
            kinds.add("star_ij")
    return kinds


def is_pure_star(f: Formula) -> bool:
    return "star_ij" not in operator_kinds(f)


def is_pure_ij(f: Formula) -> bool:
    return "star" not in operator_kinds(f)


def validate(f: Formula) -> FormulaMetrics:
    """Check well-formedness and return the metrics of ``f``.

    Errors carry the path of the offending node so a user can locate it in a
    JSON document.
    """
    if len(operator_kinds(f)) > 1:
        raise MixedOperators("formula mixes * and *_{i,j} nodes")
    for path, node in subformulas(f):
        if isinstance(node, Leaf):
            if node.tensor.dim == 0:
                raise LeafDimensionZero(f"leaf at path {list(path)} has dimension 0")
            continue
        try:
            node.order
        except OrderMismatch as exc:
            raise OrderMismatch(str(exc), path) from None
        except IndexOutOfRange as exc:
            raise IndexOutOfRange(f"{exc} (at node path {list(path)})") from None
    return metrics(f)


def metrics(f: Formula) -> FormulaMetrics:
    return FormulaMetrics(size=f.size, dim=f.dim, maxdim=f.maxdim, input_dim=f.input_dim)


def eval_array(f: Formula, assignment: Assignment, p: int):
    """Evaluate to a numpy array, following the tree exactly (no reassociation)."""
    if isinstance(f, Leaf):
        return f.tensor.to_array(assignment, p)
    a = eval_array(f.left, assignment, p)
    b = eval_array(f.right, assignment, p)
    if isinstance(f, Star):
        f.order  # raises on mismatch
        return contract_arrays(a, b, a.ndim - 1, 0, p)
    f.order
    return contract_arrays(a, b, f.i - 1, f.j - 1, p)


def eval_formula(f: Formula, assignment: Assignment | None = None) -> Tensor:
    assignment = {} if assignment is None else assignment
    validate(f)
    missing = f.variables - set(assignment)
    if missing:
        raise UnboundVariable(missing)
    return Tensor.from_array(eval_array(f, assignment, modulus()))


def is_tame(f: Formula) -> bool:
    return f.maxdim <= max(f.dim, f.input_dim)


def is_totally_tame(f: Formula) -> bool:
    return all(is_tame(node) for _, node in subformulas(f))


def scalar_of(f: Formula, assignment: Assignment | None = None) -> int:
    t = eval_formula(f, assignment)
    if t.size != 1:
        raise NotScalar(f"formula computes a tensor of order {t.order}, not a scalar")
    return t.entries[0]


def star_to_ij(f: Formula) -> Formula:
    """Rewrite every ``*`` node as ``*_{dim(left),1}`` (same tensor)."""
    if isinstance(f, Leaf):
        return f
    left, right = star_to_ij(f.left), star_to_ij(f.right)
    if isinstance(f, Star):
        return StarIJ(f.left.dim, 1, left, right)
    return StarIJ(f.i, f.j, left, right)


def ij_to_star(f: Formula) -> Formula:
    """Inverse of :func:`star_to_ij`; only ``*_{dim(left),1}`` nodes convert."""
    if isinstance(f, Leaf):
        return f
    left, right = ij_to_star(f.left), ij_to_star(f.right)
    if isinstance(f, StarIJ) and not (f.i == f.left.dim and f.j == 1):
        raise MixedOperators(
            f"*_{{{f.i},{f.j}}} with left dimension {f.left.dim} has no * equivalent"
        )
    return Star(left, right)


def chain(tensors, right_assoc: bool = False) -> Formula:
    """``T1 * T2 * ... * Tq`` associated to the left (default) or right."""
    nodes = [t if isinstance(t, (Leaf, Star, StarIJ)) else Leaf(t) for t in tensors]
    if not nodes:
        raise ValueError("empty chain")
    if right_assoc:
        acc = nodes[-1]
        for n in reversed(nodes[:-1]):
            acc = Star(n, acc)
        return acc
    acc = nodes[0]
    for n in nodes[1:]:
        acc = Star(acc, n)
    return acc
