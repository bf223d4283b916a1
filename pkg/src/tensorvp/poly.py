"""Exact sparse multivariate polynomials over the active prime field.

A polynomial maps monomials to nonzero coefficients.  A monomial is a sorted
tuple of ``(variable, exponent)`` pairs with positive exponents, so ``x^2*y``
is ``(("x", 2), ("y", 1))`` and the constant monomial is ``()``.  The zero
polynomial has no terms.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .errors import UnboundVariable
from .field import modulus
from .tensor import Var, var_sort_key

Monomial = tuple


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items(), key=lambda kv: var_sort_key(kv[0])))


class SparsePoly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        p = modulus()
        clean = {}
        for mono, c in (terms or {}).items():
            c %= p
            if c:
                clean[tuple(mono)] = c
        self.terms: dict[Monomial, int] = clean

    @classmethod
    def _raw(cls, terms: dict) -> "SparsePoly":
        out = cls.__new__(cls)
        out.terms = terms
        return out

    @classmethod
    def zero(cls) -> "SparsePoly":
        return cls._raw({})

    @classmethod
    def const(cls, c: int) -> "SparsePoly":
        return cls({(): c})

    @classmethod
    def var(cls, name) -> "SparsePoly":
        return cls._raw({((name, 1),): 1})

    @classmethod
    def from_entry(cls, e) -> "SparsePoly":
        return cls.var(e.name) if isinstance(e, Var) else cls.const(e)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = SparsePoly.const(other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        if isinstance(other, int):
            other = SparsePoly.const(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        p = modulus()
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = (out.get(mono, 0) + c) % p
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return SparsePoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        p = modulus()
        return SparsePoly._raw({m: (-c) % p for m, c in self.terms.items()})

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        if isinstance(other, int):
            other = SparsePoly.const(other)
        return self + (-other)

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        if isinstance(other, int):
            other = SparsePoly.const(other)
        if not self.terms or not other.terms:
            return SparsePoly._raw({})
        p = modulus()
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = (out.get(m, 0) + c1 * c2) % p
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return SparsePoly._raw(out)

    __rmul__ = __mul__

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e for _, e in m) for m in self.terms), default=-1)

    @property
    def variables(self) -> frozenset:
        return frozenset(v for m in self.terms for v, _ in m)

    def evaluate(self, assignment: Mapping) -> int:
        missing = self.variables - set(assignment)
        if missing:
            raise UnboundVariable(missing)
        p = modulus()
        total = 0
        for mono, c in self.terms.items():
            t = c
            for v, e in mono:
                t = t * pow(int(assignment[v]), e, p) % p
            total += t
        return total % p

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items(), key=lambda mc: [var_sort_key(v) + (e,) for v, e in mc[0]]):
            factors = [f"{v}^{e}" if e > 1 else str(v) for v, e in mono]
            if c != 1 or not factors:
                factors.insert(0, str(c))
            parts.append("*".join(factors))
        return " + ".join(parts)


def poly_sum(polys: Iterable[SparsePoly]) -> SparsePoly:
    acc = SparsePoly.zero()
    for q in polys:
        acc = acc + q
    return acc
