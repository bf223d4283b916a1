"""Size-preserving formula rewrites.

* :func:`tamify` / :func:`tamify_ij` turn any formula into a totally tame one
  of exactly the same size by pushing vector contractions down the tree.
* :func:`rewrite_ij_identity` applies the four ``(F1 *_{i,j} F2) *_{k,1} E``
  identities that stand in for associativity with ``*_{i,j}``.
* :func:`decompose_tensor` / :func:`flatten_inputs` replace high-dimensional
  leaves by formulas whose inputs have dimension at most 3.
"""

from __future__ import annotations

import enum

from .errors import (
    DimensionZero,
    IndexOutOfRange,
    MixedOperators,
    NotTotallyTame,
    NotVector,
    SizeLimitExceeded,
)
from .formula import Formula, Leaf, Star, StarIJ, is_pure_ij, is_pure_star, is_tame, is_totally_tame, star_to_ij, validate
from .tensor import Tensor, all_ones_vector

DEFAULT_DECOMPOSE_LIMIT = 64


def _as_formula(x) -> Formula:
    return Leaf(x) if isinstance(x, Tensor) else x


# ---------------------------------------------------------------------------
# tamification for *


def _absorb_right(f: Formula, e: Formula) -> Formula:
    """Totally tame formula computing ``f * e`` for a vector ``e``."""
    if isinstance(f, Leaf) or f.right.dim == 1:
        return Star(f, e)
    f1, f2 = f.left, f.right
    if f2.dim == 2:
        return _absorb_right(f1, Star(f2, e))
    return Star(f1, _absorb_right(f2, e))


def _absorb_left(e: Formula, f: Formula) -> Formula:
    """Totally tame formula computing ``e * f`` for a vector ``e``."""
    if isinstance(f, Leaf) or f.left.dim == 1:
        return Star(e, f)
    f1, f2 = f.left, f.right
    if f1.dim == 2:
        return _absorb_left(Star(e, f1), f2)
    return Star(_absorb_left(e, f1), f2)


def absorb_vector(f: Formula, e: Formula, side: str = "right") -> Formula:
    """Contract a totally tame formula with a vector formula, staying totally tame.

    ``side="right"`` computes ``f * e`` and ``side="left"`` computes ``e * f``.
    The result has size ``|f| + |e| + 1``.  ``e`` must not have a larger input
    dimension than ``f``.
    """
    f, e = _as_formula(f), _as_formula(e)
    validate(f)
    validate(e)
    if not (is_pure_star(f) and is_pure_star(e)):
        raise MixedOperators("absorb_vector works on pure * formulas")
    if e.dim != 1:
        raise NotVector(f"expected a vector formula, got dimension {e.dim}")
    if not (is_totally_tame(f) and is_totally_tame(e)):
        raise NotTotallyTame("both operands must be totally tame")
    if e.input_dim > f.input_dim:
        raise NotTotallyTame(
            f"vector input dimension {e.input_dim} exceeds the formula's {f.input_dim}"
        )
    if side == "right":
        Star(f, e).order
        return _absorb_right(f, e)
    if side == "left":
        Star(e, f).order
        return _absorb_left(e, f)
    raise ValueError("side must be 'left' or 'right'")


def _tamify(f: Formula) -> Formula:
    if isinstance(f, Leaf):
        return f
    f1, f2 = _tamify(f.left), _tamify(f.right)
    joined = Star(f1, f2)
    # A rejoin that is already tame is kept; this makes tamify idempotent.
    if f.dim == 0 or is_tame(joined) or (f1.dim != 1 and f2.dim != 1):
        return joined
    if f2.dim == 1:
        return _absorb_right(f1, f2)
    return _absorb_left(f1, f2)


def tamify(f: Formula) -> Formula:
    """Equivalent totally tame ``*``-formula of identical size."""
    f = _as_formula(f)
    validate(f)
    if not is_pure_star(f):
        raise MixedOperators("tamify works on pure * formulas; use tamify_ij")
    return _tamify(f)


# ---------------------------------------------------------------------------
# *_{i,j} identities and tamification


class RewriteCase(enum.Enum):
    """Where dimension ``k`` of ``F1 *_{i,j} F2`` comes from."""

    RIGHT_AFTER = 1   # F2, at or after the contracted position j
    RIGHT_BEFORE = 2  # F2, before position j
    LEFT_AFTER = 3    # F1, after position i
    LEFT_BEFORE = 4   # F1, before position i


def classify_ij(k1: int, k2: int, i: int, j: int, k: int) -> RewriteCase:
    if not (1 <= i <= k1 and 1 <= j <= k2):
        raise IndexOutOfRange(f"positions ({i},{j}) outside dimensions ({k1},{k2})")
    if not 1 <= k <= k1 + k2 - 2:
        raise IndexOutOfRange(f"position {k} outside dimension {k1 + k2 - 2}")
    if k1 + j - 1 <= k:
        return RewriteCase.RIGHT_AFTER
    if k1 <= k:
        return RewriteCase.RIGHT_BEFORE
    if i <= k:
        return RewriteCase.LEFT_AFTER
    return RewriteCase.LEFT_BEFORE


def rewrite_ij_identity(f1, f2, i: int, j: int, k: int, e) -> Formula:
    """Right-hand side equal to ``(f1 *_{i,j} f2) *_{k,1} e``.

    The vector is pushed into whichever operand owns dimension ``k`` of the
    product, and the contracted positions are shifted accordingly.
    """
    f1, f2, e = _as_formula(f1), _as_formula(f2), _as_formula(e)
    if e.dim != 1:
        raise NotVector(f"expected a vector, got dimension {e.dim}")
    k1, k2 = f1.dim, f2.dim
    StarIJ(k, 1, StarIJ(i, j, f1, f2), e).order  # raises on incompatible orders
    case = classify_ij(k1, k2, i, j, k)
    if case is RewriteCase.RIGHT_AFTER:
        return StarIJ(i, j, f1, StarIJ(k - k1 + 2, 1, f2, e))
    if case is RewriteCase.RIGHT_BEFORE:
        return StarIJ(i, j - 1, f1, StarIJ(k - k1 + 1, 1, f2, e))
    if case is RewriteCase.LEFT_AFTER:
        return StarIJ(i, j, StarIJ(k + 1, 1, f1, e), f2)
    return StarIJ(i - 1, j, StarIJ(k, 1, f1, e), f2)


def _absorb_ij(f: Formula, e: Formula, l: int) -> Formula:
    """Totally tame formula computing ``f *_{l,1} e`` for a vector ``e``."""
    if isinstance(f, Leaf):
        return StarIJ(l, 1, f, e)
    f1, f2, i, j = f.left, f.right, f.i, f.j
    k1, k2 = f1.dim, f2.dim
    if l >= k1:
        # dimension l lives in f2
        q = l - k1 + 1
        jj = j
        if q >= j:
            q += 1
        else:
            jj = j - 1
        if k2 == 2:
            return _absorb_ij(f1, StarIJ(q, 1, f2, e), i)
        return StarIJ(i, jj, f1, _absorb_ij(f2, e, q))
    # dimension l lives in f1
    q = l
    ii = i
    if l >= i:
        q += 1
    else:
        ii = i - 1
    if k1 == 2:
        # (f1 *_{q,1} e) is a vector contracted at its only position with f2
        return _absorb_ij(f2, StarIJ(q, 1, f1, e), j)
    return StarIJ(ii, j, _absorb_ij(f1, e, q), f2)


def absorb_vector_ij(f, e, i: int) -> Formula:
    """Totally tame ``*_{i,j}``-formula computing ``f *_{i,1} e``; size ``|f| + |e| + 1``."""
    f, e = _as_formula(f), _as_formula(e)
    validate(f)
    validate(e)
    if not (is_pure_ij(f) and is_pure_ij(e)):
        raise MixedOperators("absorb_vector_ij works on pure *_{i,j} formulas")
    if e.dim != 1:
        raise NotVector(f"expected a vector formula, got dimension {e.dim}")
    if not 1 <= i <= f.dim:
        raise IndexOutOfRange(f"position {i} outside dimension {f.dim}")
    if not (is_totally_tame(f) and is_totally_tame(e)):
        raise NotTotallyTame("both operands must be totally tame")
    StarIJ(i, 1, f, e).order
    return _absorb_ij(f, e, i)


def _tamify_ij(f: Formula) -> Formula:
    if isinstance(f, Leaf):
        return f
    f1, f2 = _tamify_ij(f.left), _tamify_ij(f.right)
    joined = StarIJ(f.i, f.j, f1, f2)
    if f.dim == 0 or is_tame(joined) or (f1.dim != 1 and f2.dim != 1):
        return joined
    if f2.dim == 1:
        return _absorb_ij(f1, f2, f.i)
    # f1 *_{1,j} f2 with f1 a vector equals f2 *_{j,1} f1
    return _absorb_ij(f2, f1, f.j)


def tamify_ij(f: Formula) -> Formula:
    """Equivalent totally tame ``*_{i,j}``-formula of identical size."""
    f = _as_formula(f)
    validate(f)
    if not is_pure_ij(f):
        raise MixedOperators("tamify_ij works on pure *_{i,j} formulas")
    return _tamify_ij(f)


# ---------------------------------------------------------------------------
# input flattening


def index_bijection(order: tuple[int, ...]):
    """Row-major decoding of ``m in [0, L)`` into a coordinate of ``order``."""

    def decode(m: int) -> tuple[int, ...]:
        coords = []
        for n in reversed(order):
            m, c = divmod(m, n)
            coords.append(c)
        return tuple(reversed(coords))

    return decode


def decomposition_factors(t: Tensor, limit: int = DEFAULT_DECOMPOSE_LIMIT) -> list[Tensor]:
    """The dimension-3 factors ``T_1..T_r`` of order ``(L, n_i, L)``.

    ``T_1[m, k, m]`` holds ``t[B(m)]`` when ``B(m)`` has ``k`` in position 1;
    the later factors hold 1 where ``B(m)`` has ``k`` in position ``i``.
    """
    if t.dim == 0:
        raise DimensionZero("cannot decompose a dimension-0 tensor")
    big_l = t.size
    if big_l > limit:
        raise SizeLimitExceeded(f"tensor has {big_l} entries, limit is {limit}")
    decode = index_bijection(t.order)
    coords = [decode(m) for m in range(big_l)]
    factors = []
    for pos, n in enumerate(t.order):
        ents = [0] * (big_l * n * big_l)
        for m, c in enumerate(coords):
            ents[(m * n + c[pos]) * big_l + m] = t.entries[m] if pos == 0 else 1
        factors.append(Tensor((big_l, n, big_l), tuple(ents)))
    return factors


def decompose_tensor(t: Tensor, limit: int = DEFAULT_DECOMPOSE_LIMIT) -> Formula:
    """Formula of input dimension 3 computing ``t``: ``(E * ((T1*T2)*...*Tr)) * E``."""
    factors = decomposition_factors(t, limit)
    e = Leaf(all_ones_vector(t.size))
    prod: Formula = Leaf(factors[0])
    for ti in factors[1:]:
        prod = Star(prod, Leaf(ti))
    return Star(Star(e, prod), e)


def decompose_size(t: Tensor) -> int:
    """Exact size of :func:`decompose_tensor`'s output."""
    big_l = t.size
    return (t.dim + 1) + sum(big_l * big_l * n for n in t.order) + 2 * big_l


def flatten_inputs(f: Formula, limit: int = DEFAULT_DECOMPOSE_LIMIT) -> Formula:
    """Replace every leaf of dimension > 3 by its decomposition."""
    f = _as_formula(f)
    validate(f)
    ij = not is_pure_star(f)

    def go(node):
        if isinstance(node, Leaf):
            if node.dim <= 3:
                return node
            sub = decompose_tensor(node.tensor, limit)
            return star_to_ij(sub) if ij else sub
        left, right = go(node.left), go(node.right)
        if isinstance(node, Star):
            return Star(left, right)
        return StarIJ(node.i, node.j, left, right)

    return go(f)
