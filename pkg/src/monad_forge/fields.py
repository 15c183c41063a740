"""Exact coefficient fields: prime fields F_p and the rationals.

Elements of F_p are plain ints in [0, p); rational elements are
``fractions.Fraction`` (ints are accepted and canonicalized).  No
floating point is involved anywhere.
"""

from __future__ import annotations

from fractions import Fraction

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 2**64."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """F_p for a prime p < 2**63."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not (1 < p < 2**63) or not is_prime(p):
            raise ValueError(f"{p} is not a prime below 2**63")
        self.p = p

    def of(self, value) -> int:
        """Canonicalize an int or Fraction into F_p."""
        if isinstance(value, Fraction):
            num, den = value.numerator, value.denominator
            if den % self.p == 0:
                raise ZeroDivisionError(
                    f"denominator {den} not invertible modulo {self.p}"
                )
            return num * pow(den, -1, self.p) % self.p
        return int(value) % self.p

    zero = 0
    one = 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"F({self.p})"


class Rationals:
    """The field of exact rationals."""

    __slots__ = ()

    zero = Fraction(0)
    one = Fraction(1)

    def of(self, value) -> Fraction:
        return Fraction(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


QQ = Rationals()
