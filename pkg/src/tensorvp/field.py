"""Prime field arithmetic with a configurable, context-local modulus.

Field elements are plain Python ints in ``[0, p)``.  The active modulus lives
in a :class:`contextvars.ContextVar`, so concurrent callers can use different
primes without interfering::

    with use_modulus(101):
        assert current_field().mul(50, 3) == 49
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass

DEFAULT_MODULUS = 2147483647  # 2**31 - 1


def is_prime(n: int) -> bool:
    from sympy import isprime

    return bool(isprime(n))


@dataclass(frozen=True)
class Field:
    p: int

    def reduce(self, a: int) -> int:
        return a % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, -1, self.p)


_FIELD: contextvars.ContextVar[Field] = contextvars.ContextVar(
    "tensorvp_field", default=Field(DEFAULT_MODULUS)
)


def current_field() -> Field:
    return _FIELD.get()


def modulus() -> int:
    return _FIELD.get().p


def make_field(p: int) -> Field:
    if p < 2 or not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    return Field(p)


@contextlib.contextmanager
def use_modulus(p: int):
    """Temporarily switch the active prime modulus."""
    token = _FIELD.set(make_field(p))
    try:
        yield _FIELD.get()
    finally:
        _FIELD.reset(token)
