"""Seeded random tensors and formulas for property suites and the ``gen`` command.

Formulas are grown top-down from a target output order: a contraction node
with output order ``O`` picks how many of ``O``'s dimensions come from each
operand and a fresh contracted dimension, so every generated tree is valid by
construction.
"""

from __future__ import annotations

import random
from typing import Optional, Sequence

from .circuit import DEFAULT_VARIABLES
from .formula import Formula, Leaf, Star, StarIJ
from .tensor import Tensor, Var


def random_tensor(
    rng: random.Random,
    order: Sequence[int],
    variables: Sequence = DEFAULT_VARIABLES,
    var_prob: float = 0.3,
    const_max: int = 9,
) -> Tensor:
    n = 1
    for d in order:
        n *= d
    ents = []
    for _ in range(n):
        if variables and rng.random() < var_prob:
            ents.append(Var(rng.choice(list(variables))))
        else:
            ents.append(rng.randint(0, const_max))
    return Tensor(tuple(order), tuple(ents))


def _grow(rng, target, nleaves, cfg) -> Optional[Formula]:
    max_order, max_dim, max_input_dim, vector_free, ij, variables, var_prob = cfg
    k = len(target)
    if nleaves == 1:
        if k == 0 or k > max_input_dim or (vector_free and k < 2):
            return None
        return Leaf(random_tensor(rng, target, variables, var_prob))
    a = rng.randint(1, nleaves - 1)
    splits = []
    for k1 in range(1, k + 2):
        k2 = k + 2 - k1
        if max(k1, k2) > max_dim or (vector_free and min(k1, k2) < 2):
            continue
        splits.append(k1)
    rng.shuffle(splits)
    for k1 in splits:
        k2 = k + 2 - k1
        c = rng.randint(1, max_order)
        head, rest = target[: k1 - 1], target[k1 - 1 :]
        if ij:
            i, j = rng.randint(1, k1), rng.randint(1, k2)
            lo = head[: i - 1] + (c,) + head[i - 1 :]
            ro = rest[: j - 1] + (c,) + rest[j - 1 :]
        else:
            i, j = k1, 1
            lo, ro = head + (c,), (c,) + rest
        left = _grow(rng, lo, a, cfg)
        if left is None:
            continue
        right = _grow(rng, ro, nleaves - a, cfg)
        if right is None:
            continue
        return StarIJ(i, j, left, right) if ij else Star(left, right)
    return None


def random_formula(
    rng: random.Random,
    leaves: int,
    max_order: int = 3,
    max_dim: int = 4,
    max_input_dim: Optional[int] = None,
    root_dim: Optional[int] = None,
    vector_free: bool = False,
    ij: bool = False,
    variables: Sequence = DEFAULT_VARIABLES,
    var_prob: float = 0.3,
    attempts: int = 200,
) -> Formula:
    """Random valid formula with exactly ``leaves`` leaves.

    ``max_order`` bounds every order component, ``max_dim`` the dimension
    of every node, ``max_input_dim`` the leaf dimensions.
    """
    if leaves < 1:
        raise ValueError("a formula has at least one leaf")
    max_input_dim = max_dim if max_input_dim is None else max_input_dim
    cfg = (max_order, max_dim, max_input_dim, vector_free, ij, tuple(variables), var_prob)
    lo_dim = 2 if vector_free else (1 if leaves == 1 else 0)
    for _ in range(attempts):
        k = rng.randint(lo_dim, max_dim) if root_dim is None else root_dim
        target = tuple(rng.randint(1, max_order) for _ in range(k))
        f = _grow(rng, target, leaves, cfg)
        if f is not None:
            return f
    raise ValueError("could not generate a formula with these constraints")
