"""Dense tensors over a prime field with constant or variable entries.

A tensor of order ``(n1, ..., nk)`` stores its ``n1 * ... * nk`` entries as a
flat row-major tuple (last index fastest).  Entries are either ints (field
constants, reduced modulo the active prime at construction) or :class:`Var`.

Two contractions are provided.  ``contract(T, G)`` pairs the last dimension
of ``T`` with the first of ``G``; ``contract_ij(T, G, i, j)`` pairs dimension
``i`` of ``T`` with dimension ``j`` of ``G``.  Dimension positions are
1-based, entry coordinates are 0-based.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping, Union

import numpy as np

from .errors import IndexOutOfRange, OrderMismatch, SymbolicEntry, UnboundVariable
from .field import modulus


@dataclass(frozen=True, order=True)
class Var:
    """An opaque variable identifier used as a tensor entry or circuit input."""

    name: Union[str, int]

    def __str__(self) -> str:
        return str(self.name)


Entry = Union[int, Var]
Assignment = Mapping[Union[str, int], int]


def var_sort_key(name) -> tuple:
    return (type(name).__name__, name)


def _normalize_entry(e, p: int) -> Entry:
    if isinstance(e, Var):
        return e
    if isinstance(e, (bool, np.bool_)):
        raise TypeError("booleans are not field constants")
    if isinstance(e, (int, np.integer)):
        return int(e) % p
    raise TypeError(f"tensor entries must be ints or Var, got {type(e).__name__}")


def array_dtype(p: int):
    # The limb-split matmul below needs residues < 2**31.
    return np.int64 if p < 2**31 else object


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact ``(a @ b) mod p`` for 2-d integer arrays with entries in [0, p)."""
    k = a.shape[1]
    if a.dtype != object and b.dtype != object and p < 2**31 and k < 2**16:
        lo = b & 0xFFFF
        hi = b >> 16
        r_lo = (a @ lo) % p
        r_hi = (a @ hi) % p
        return (r_lo + (r_hi << 16) % p) % p
    out = a.astype(object) @ b.astype(object)
    return np.asarray(out % p, dtype=object)


def contract_arrays(a: np.ndarray, b: np.ndarray, axis_a: int, axis_b: int, p: int) -> np.ndarray:
    """Contract axis ``axis_a`` of ``a`` with axis ``axis_b`` of ``b`` (0-based)."""
    n = a.shape[axis_a]
    a2 = np.moveaxis(a, axis_a, -1)
    b2 = np.moveaxis(b, axis_b, 0)
    rest_a = a2.shape[:-1]
    rest_b = b2.shape[1:]
    out = matmul_mod(
        np.ascontiguousarray(a2).reshape(-1, n),
        np.ascontiguousarray(b2).reshape(n, -1),
        p,
    )
    return out.reshape(rest_a + rest_b)


@dataclass(frozen=True)
class Tensor:
    order: tuple[int, ...]
    entries: tuple[Entry, ...]

    def __post_init__(self):
        order = tuple(int(n) for n in self.order)
        if any(n < 1 for n in order):
            raise ValueError(f"every order component must be >= 1, got {order}")
        p = modulus()
        entries = tuple(_normalize_entry(e, p) for e in self.entries)
        if len(entries) != math.prod(order):
            raise ValueError(
                f"order {order} needs {math.prod(order)} entries, got {len(entries)}"
            )
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_array(cls, arr) -> "Tensor":
        arr = np.asarray(arr, dtype=object) if not isinstance(arr, np.ndarray) else arr
        return cls(tuple(arr.shape), tuple(arr.reshape(-1).tolist()))

    @classmethod
    def from_nested(cls, data) -> "Tensor":
        """Build from nested Python lists, e.g. ``[[1, 2], [3, Var('x')]]``."""
        if not isinstance(data, (list, tuple)):
            return cls((), (data,))
        shape = []
        probe = data
        while isinstance(probe, (list, tuple)):
            shape.append(len(probe))
            probe = probe[0]
        flat: list = []

        def walk(node, depth):
            if depth == len(shape):
                flat.append(node)
                return
            if not isinstance(node, (list, tuple)) or len(node) != shape[depth]:
                raise ValueError("ragged nested tensor data")
            for child in node:
                walk(child, depth + 1)

        walk(data, 0)
        return cls(tuple(shape), tuple(flat))

    @property
    def dim(self) -> int:
        return len(self.order)

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def maxorder(self) -> int:
        return max(self.order, default=1)

    @cached_property
    def variables(self) -> frozenset:
        return frozenset(e.name for e in self.entries if isinstance(e, Var))

    @property
    def is_constant(self) -> bool:
        return not self.variables

    def flat_index(self, idx: tuple[int, ...]) -> int:
        if len(idx) != self.dim:
            raise IndexOutOfRange(f"index {idx} has wrong length for order {self.order}")
        flat = 0
        for i, n in zip(idx, self.order):
            if not 0 <= i < n:
                raise IndexOutOfRange(f"index {idx} outside order {self.order}")
            flat = flat * n + i
        return flat

    def __getitem__(self, idx) -> Entry:
        if not isinstance(idx, tuple):
            idx = (idx,)
        return self.entries[self.flat_index(idx)]

    def indices(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(n) for n in self.order))

    @cached_property
    def _template(self):
        base = [0 if isinstance(e, Var) else e for e in self.entries]
        slots = [(k, e.name) for k, e in enumerate(self.entries) if isinstance(e, Var)]
        return base, slots

    def to_array(self, assignment: Assignment | None = None, p: int | None = None) -> np.ndarray:
        """Numeric array of shape ``order`` with variables substituted."""
        p = modulus() if p is None else p
        base, slots = self._template
        if slots:
            if assignment is None:
                raise SymbolicEntry("tensor has variable entries")
            missing = {name for _, name in slots if name not in assignment}
            if missing:
                raise UnboundVariable(missing)
        arr = np.array(base, dtype=array_dtype(p))
        for k, name in slots:
            arr[k] = int(assignment[name]) % p
        return arr.reshape(self.order)

    def __str__(self) -> str:
        return f"Tensor{self.order}[{', '.join(map(str, self.entries))}]"


def _require_constant(*tensors: Tensor) -> None:
    for t in tensors:
        if not t.is_constant:
            raise SymbolicEntry(
                "contraction needs constant entries; substitute with eval_tensor "
                "or expand symbolically"
            )


def contract(t: Tensor, g: Tensor) -> Tensor:
    """``T * G``: sum over the last index of ``t`` and the first of ``g``."""
    if t.dim < 1 or g.dim < 1:
        raise OrderMismatch("contraction operands must have dimension >= 1")
    if t.order[-1] != g.order[0]:
        raise OrderMismatch(f"cannot contract order {t.order} with {g.order}")
    _require_constant(t, g)
    p = modulus()
    return Tensor.from_array(contract_arrays(t.to_array(p=p), g.to_array(p=p), t.dim - 1, 0, p))


def contract_ij(t: Tensor, g: Tensor, i: int, j: int) -> Tensor:
    """``T *_{i,j} G`` with 1-based dimension positions ``i`` and ``j``."""
    if not (1 <= i <= t.dim and 1 <= j <= g.dim):
        raise IndexOutOfRange(
            f"contraction positions ({i},{j}) outside dimensions ({t.dim},{g.dim})"
        )
    if t.order[i - 1] != g.order[j - 1]:
        raise OrderMismatch(
            f"dimension {i} of {t.order} does not match dimension {j} of {g.order}"
        )
    _require_constant(t, g)
    p = modulus()
    return Tensor.from_array(contract_arrays(t.to_array(p=p), g.to_array(p=p), i - 1, j - 1, p))


def all_ones_vector(r: int) -> Tensor:
    if r < 1:
        raise ValueError("vector length must be positive")
    return Tensor((r,), (1,) * r)


def eval_tensor(t: Tensor, assignment: Assignment) -> Tensor:
    """Substitute every variable entry; the result is a constant tensor."""
    missing = t.variables - set(assignment)
    if missing:
        raise UnboundVariable(missing)
    return Tensor(
        t.order,
        tuple(assignment[e.name] if isinstance(e, Var) else e for e in t.entries),
    )
