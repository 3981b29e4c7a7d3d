"""Exact field arithmetic over the rationals and prime fields GF(p).

Scalars are plain Python values: ``fractions.Fraction`` for the rationals
and canonical residues ``int`` in ``[0, p)`` for GF(p).  A ``Field`` object
supplies the arithmetic, so equality of scalars is bit-exact comparison of
canonical forms.  Everything here is immutable and pure.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NonPrimeModulus, NoRootOfUnity


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """The rationals (``p is None``) or GF(p) for a prime p."""

    def __init__(self, p: int | None = None):
        if p is not None and not _is_prime(p):
            raise NonPrimeModulus(f"modulus {p} is not prime")
        self.p = p

    @property
    def is_rationals(self) -> bool:
        return self.p is None

    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    # -- canonical constants --

    def zero(self):
        return Fraction(0) if self.p is None else 0

    def one(self):
        return Fraction(1) if self.p is None else 1

    def from_int(self, n: int):
        return Fraction(n) if self.p is None else n % self.p

    # -- arithmetic --

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / a
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        if self.p is not None:
            return pow(a, n, self.p)
        return a ** n

    # -- conversions --

    def parse(self, text: str):
        """Parse "n" or "n/m" into a canonical scalar."""
        text = text.strip()
        if self.p is None:
            return Fraction(text)
        if "/" in text:
            num, den = text.split("/", 1)
            return self.div(int(num) % self.p, int(den) % self.p)
        return int(text) % self.p

    def format(self, a) -> str:
        return str(a)

    # -- identity --

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Q" if self.p is None else f"GF({self.p})"


def make_field(spec) -> Field:
    """Build a field from "Q" or a prime modulus."""
    if spec == "Q":
        return Field(None)
    if isinstance(spec, int):
        return Field(spec)
    raise NonPrimeModulus(f"unrecognised field spec {spec!r}")


def _proper_divisors(n: int):
    return [m for m in range(1, n) if n % m == 0]


def primitive_root_of_unity(field: Field, n: int):
    """Return a scalar of exact multiplicative order n, if the field has one.

    Over the rationals only n = 1, 2 are possible.  Over GF(p) a root exists
    iff n divides p - 1; the search is exhaustive, which is fine at the
    intended scale.
    """
    if n < 1:
        raise ValueError("order must be positive")
    if field.is_rationals:
        if n == 1:
            return Fraction(1)
        if n == 2:
            return Fraction(-1)
        raise NoRootOfUnity(f"the rationals contain no primitive {n}-th root of unity")
    p = field.p
    if (p - 1) % n != 0:
        raise NoRootOfUnity(f"GF({p}) has no primitive {n}-th root of unity ({n} does not divide {p - 1})")
    for candidate in range(1, p):
        if pow(candidate, n, p) != 1:
            continue
        if all(pow(candidate, m, p) != 1 for m in _proper_divisors(n)):
            return candidate
    raise NoRootOfUnity(f"no primitive {n}-th root of unity in GF({p})")
