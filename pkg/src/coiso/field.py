"""Scalar fields: the rationals and prime fields F_p."""
from __future__ import annotations

from fractions import Fraction


class Fp:
    """Element of the prime field with modulus `p`."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError(f"mixed moduli {self.p} and {other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.v, self.p)

    def inverse(self) -> Fp:
        if self.v == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return Fp(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Fp(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o, self.p) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        if isinstance(other, (int, Fraction)):
            return self.v == self._coerce(other) % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class Field:
    """A scalar field. `Field()` is Q; `Field(p)` is F_p."""

    def __init__(self, p: int | None = None):
        if p is not None:
            if not _is_prime(p) or p >= 2**31:
                raise ValueError(f"F_p needs a prime p < 2^31, got {p}")
        self.p = p
        self.zero = self(0)
        self.one = self(1)

    def __call__(self, x) -> Fraction | Fp:
        if self.p is None:
            if isinstance(x, Fp):
                raise TypeError("cannot map an F_p element into Q")
            if isinstance(x, str):
                return Fraction(x.strip())
            return Fraction(x)
        if isinstance(x, Fp):
            if x.p != self.p:
                raise ValueError(f"mixed moduli {self.p} and {x.p}")
            return x
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
            return Fp(x.numerator * pow(x.denominator, -1, self.p), self.p)
        return Fp(int(x), self.p)

    def format(self, x) -> str:
        if self.p is None:
            return str(x) if x.denominator != 1 else str(x.numerator)
        return str(x.v)

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("field", self.p))

    def __repr__(self):
        return "Q" if self.p is None else f"F_{self.p}"

    def to_json(self):
        return "Q" if self.p is None else {"Fp": self.p}


QQ = Field()


def parse_field(spec) -> Field:
    """Read "Q", {"Fp": p}, or a string like "F7"/"Fp:7"."""
    if spec in (None, "Q", "QQ", "q"):
        return QQ
    if isinstance(spec, dict) and set(spec) == {"Fp"}:
        return Field(int(spec["Fp"]))
    if isinstance(spec, str):
        s = spec.strip().upper().replace("FP:", "").replace("F_", "").replace("F", "")
        if s.isdigit():
            return Field(int(s))
    raise ValueError(f"unknown field {spec!r}")
