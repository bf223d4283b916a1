"""Arithmetic circuits as topologically stored DAGs, plus parse-tree machinery.

Gates are kept in a tuple where every child index precedes its parent, so a
single forward sweep evaluates the circuit.  ``|C|`` is the number of gates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .errors import LimitExceeded, MalformedInput, NotMultiplicativelyDisjoint, UnboundVariable
from .field import modulus
from .poly import SparsePoly
from .tensor import Assignment, Entry, Var, _normalize_entry


@dataclass(frozen=True)
class Input:
    label: Entry


@dataclass(frozen=True)
class Add:
    left: int
    right: int


@dataclass(frozen=True)
class Mul:
    left: int
    right: int


Gate = Union[Input, Add, Mul]


@dataclass(frozen=True)
class Circuit:
    gates: tuple[Gate, ...]
    output: int

    def __post_init__(self):
        p = modulus()
        gates = []
        for k, g in enumerate(self.gates):
            if isinstance(g, Input):
                g = Input(_normalize_entry(g.label, p))
            elif isinstance(g, (Add, Mul)):
                if not (0 <= g.left < k and 0 <= g.right < k):
                    raise MalformedInput(
                        f"gate {k} refers to children ({g.left},{g.right}) not defined before it"
                    )
            else:
                raise MalformedInput(f"gate {k} has unknown type {type(g).__name__}")
            gates.append(g)
        if not gates:
            raise MalformedInput("circuit has no gates")
        if not 0 <= self.output < len(gates):
            raise MalformedInput(f"output {self.output} is not a gate index")
        object.__setattr__(self, "gates", tuple(gates))

    @property
    def size(self) -> int:
        return len(self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    @property
    def variables(self) -> frozenset:
        return frozenset(
            g.label.name for g in self.gates if isinstance(g, Input) and isinstance(g.label, Var)
        )

    def reachable(self, root: int | None = None) -> set[int]:
        root = self.output if root is None else root
        seen = {root}
        stack = [root]
        while stack:
            g = self.gates[stack.pop()]
            if isinstance(g, (Add, Mul)):
                for c in (g.left, g.right):
                    if c not in seen:
                        seen.add(c)
                        stack.append(c)
        return seen

    def with_output(self, output: int) -> "Circuit":
        return Circuit(self.gates, output)


def prune(c: Circuit) -> Circuit:
    """Drop gates unreachable from the output, keeping topological order."""
    keep = sorted(c.reachable())
    remap = {old: new for new, old in enumerate(keep)}
    gates = []
    for old in keep:
        g = c.gates[old]
        if isinstance(g, Add):
            g = Add(remap[g.left], remap[g.right])
        elif isinstance(g, Mul):
            g = Mul(remap[g.left], remap[g.right])
        gates.append(g)
    return Circuit(tuple(gates), remap[c.output])


def eval_gates(c: Circuit, assignment: Assignment) -> list[int]:
    p = modulus()
    missing = c.variables - set(assignment)
    if missing:
        raise UnboundVariable(missing)
    vals: list[int] = []
    for g in c.gates:
        if isinstance(g, Input):
            lab = g.label
            vals.append(int(assignment[lab.name]) % p if isinstance(lab, Var) else lab)
        elif isinstance(g, Add):
            vals.append((vals[g.left] + vals[g.right]) % p)
        else:
            vals.append(vals[g.left] * vals[g.right] % p)
    return vals


def eval_circuit(c: Circuit, assignment: Assignment | None = None) -> int:
    return eval_gates(c, {} if assignment is None else assignment)[c.output]


def is_multiplicatively_disjoint(c: Circuit) -> bool:
    # Descendant sets as int bitsets; fine for circuits up to ~10^4 gates.
    desc: list[int] = []
    for k, g in enumerate(c.gates):
        if isinstance(g, Input):
            desc.append(1 << k)
            continue
        if isinstance(g, Mul) and desc[g.left] & desc[g.right]:
            return False
        desc.append((1 << k) | desc[g.left] | desc[g.right])
    return True


def is_skew(c: Circuit) -> bool:
    return all(
        isinstance(c.gates[g.left], Input) or isinstance(c.gates[g.right], Input)
        for g in c.gates
        if isinstance(g, Mul)
    )


def _require_md(c: Circuit) -> None:
    if not is_multiplicatively_disjoint(c):
        raise NotMultiplicativelyDisjoint("some x-gate has overlapping child subcircuits")


# ---------------------------------------------------------------------------
# shapes and parse trees


@dataclass(frozen=True)
class ShapeTree:
    """Unlabelled tree with arities in {0, 1, 2} (input, +, x)."""

    children: tuple["ShapeTree", ...] = ()

    def __post_init__(self):
        if len(self.children) > 2:
            raise ValueError("shape nodes have at most two children")

    @property
    def arity(self) -> int:
        return len(self.children)

    @property
    def size(self) -> int:
        return 1 + sum(ch.size for ch in self.children)

    def nodes(self, path: tuple[int, ...] = ()):
        """Yield ``(path, subtree)`` in post-order."""
        for k, ch in enumerate(self.children):
            yield from ch.nodes(path + (k,))
        yield path, self

    def subtree(self, path: Sequence[int]) -> "ShapeTree":
        node = self
        for k in path:
            node = node.children[k]
        return node

    def __str__(self) -> str:
        if self.arity == 0:
            return "."
        if self.arity == 1:
            return f"+({self.children[0]})"
        return f"*({self.children[0]},{self.children[1]})"


LEAF_SHAPE = ShapeTree()


def parse_shape(text: str) -> ShapeTree:
    """Parse the ``.``, ``+(S)``, ``*(S,S)`` notation produced by ``str(shape)``."""
    s = "".join(text.split())
    if s == "leaf":
        return LEAF_SHAPE
    pos = 0

    def node() -> ShapeTree:
        nonlocal pos
        if pos >= len(s):
            raise MalformedInput(f"truncated shape {text!r}")
        ch = s[pos]
        if ch == ".":
            pos += 1
            return LEAF_SHAPE
        if ch in "+*" and s[pos + 1 : pos + 2] == "(":
            pos += 2
            kids = [node()]
            if ch == "*":
                expect(",")
                kids.append(node())
            expect(")")
            return ShapeTree(tuple(kids))
        raise MalformedInput(f"unexpected {ch!r} at {pos} in shape {text!r}")

    def expect(tok: str) -> None:
        nonlocal pos
        if s[pos : pos + 1] != tok:
            raise MalformedInput(f"expected {tok!r} at {pos} in shape {text!r}")
        pos += 1

    out = node()
    if pos != len(s):
        raise MalformedInput(f"trailing characters in shape {text!r}")
    return out


def random_shape(rng: random.Random, nodes: int) -> ShapeTree:
    if nodes < 1:
        raise ValueError("a shape has at least one node")
    if nodes == 1:
        return LEAF_SHAPE
    if nodes == 2 or rng.random() < 0.4:
        return ShapeTree((random_shape(rng, nodes - 1),))
    a = rng.randint(1, nodes - 2)
    return ShapeTree((random_shape(rng, a), random_shape(rng, nodes - 1 - a)))


@dataclass(frozen=True)
class ParseTree:
    """A parse tree: the gate used at each node plus the chosen children.

    ``side`` records which child a +-gate kept (0 left, 1 right), so the two
    trees through ``Add(g, g)`` stay distinct.
    """

    gate: int
    children: tuple["ParseTree", ...] = ()
    side: Optional[int] = None
    monomial: SparsePoly = field(default=None, compare=False, repr=False)

    @property
    def shape(self) -> ShapeTree:
        return ShapeTree(tuple(ch.shape for ch in self.children))

    def as_mapping(self) -> dict[tuple[int, ...], int]:
        """The tree as a map from shape-node paths to gate indices."""
        out = {(): self.gate}
        for k, ch in enumerate(self.children):
            for path, g in ch.as_mapping().items():
                out[(k,) + path] = g
        return out


def count_parse_trees(c: Circuit) -> int:
    counts: list[int] = []
    for g in c.gates:
        if isinstance(g, Input):
            counts.append(1)
        elif isinstance(g, Add):
            counts.append(counts[g.left] + counts[g.right])
        else:
            counts.append(counts[g.left] * counts[g.right])
    return counts[c.output]


def enumerate_parse_trees(c: Circuit, limit: int = 10_000) -> list[ParseTree]:
    _require_md(c)
    total = count_parse_trees(c)
    if total > limit:
        raise LimitExceeded(f"circuit has {total} parse trees, limit is {limit}")
    memo: dict[int, list[ParseTree]] = {}

    def trees(k: int) -> list[ParseTree]:
        if k in memo:
            return memo[k]
        g = c.gates[k]
        if isinstance(g, Input):
            out = [ParseTree(k, monomial=SparsePoly.from_entry(g.label))]
        elif isinstance(g, Add):
            out = [
                ParseTree(k, (t,), side, t.monomial)
                for side, child in ((0, g.left), (1, g.right))
                for t in trees(child)
            ]
        else:
            out = [
                ParseTree(k, (a, b), None, a.monomial * b.monomial)
                for a in trees(g.left)
                for b in trees(g.right)
            ]
        memo[k] = out
        return out

    return trees(c.output)


def monomial_sum_check(c: Circuit, limit: int = 10_000) -> bool:
    from .equiv import expand_circuit

    total = SparsePoly.zero()
    for t in enumerate_parse_trees(c, limit):
        total = total + t.monomial
    return total == expand_circuit(c)


def common_parse_shape(c: Circuit) -> Optional[ShapeTree]:
    """The shape shared by every parse tree of ``c``, or ``None`` if they differ."""
    _require_md(c)
    shapes: list[Optional[ShapeTree]] = []
    for g in c.gates:
        if isinstance(g, Input):
            shapes.append(LEAF_SHAPE)
            continue
        a, b = shapes[g.left], shapes[g.right]
        if a is None or b is None:
            shapes.append(None)
        elif isinstance(g, Add):
            shapes.append(ShapeTree((a,)) if a == b else None)
        else:
            shapes.append(ShapeTree((a, b)))
    return shapes[c.output]


DEFAULT_VARIABLES = ("x0", "x1", "x2", "x3")


def gen_uniform_circuit(
    shape: ShapeTree,
    width: int,
    seed: int,
    variables: Iterable = DEFAULT_VARIABLES,
    const_prob: float = 0.25,
) -> Circuit:
    """Random multiplicatively disjoint circuit whose parse trees all have ``shape``.

    Every shape node gets ``width`` candidate gates; +-gates draw both
    children from the pool of their single shape child, x-gates draw from
    the pools of the left and right shape children.  Unreachable gates are
    pruned, so ``|C|`` may be below ``width * |shape|``.
    """
    if width < 1:
        raise ValueError("width must be >= 1")
    rng = random.Random(seed)
    variables = list(variables)
    gates: list[Gate] = []
    pools: dict[tuple[int, ...], list[int]] = {}
    for path, node in shape.nodes():
        pool = []
        for _ in range(width):
            if node.arity == 0:
                if not variables or rng.random() < const_prob:
                    gates.append(Input(rng.randint(0, 9)))
                else:
                    gates.append(Input(Var(rng.choice(variables))))
            elif node.arity == 1:
                kids = pools[path + (0,)]
                gates.append(Add(rng.choice(kids), rng.choice(kids)))
            else:
                gates.append(Mul(rng.choice(pools[path + (0,)]), rng.choice(pools[path + (1,)])))
            pool.append(len(gates) - 1)
        pools[path] = pool
    return prune(Circuit(tuple(gates), rng.choice(pools[()])))
