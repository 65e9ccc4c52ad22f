"""Exact arithmetic in a real quadratic field Q(sqrt(D)).

Elements are ``a + b*sqrt(D)`` with rational ``a`` and ``b``.  When ``D`` is a
perfect square the radical is folded into the rational part, so every element
of Q(sqrt(s^2)) is stored with ``b == 0``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]

NEGATIVE = -1
ZERO = 0
POSITIVE = 1


class FieldMismatch(ValueError):
    """Raised when elements of different fields are combined."""


def check_disc(D: int) -> int:
    if isinstance(D, bool) or not isinstance(D, int):
        raise ValueError(f"discriminant must be an integer, got {D!r}")
    if D <= 0 or D % 4 not in (0, 1):
        raise ValueError(f"invalid discriminant {D}: need D > 0 and D = 0,1 mod 4")
    return D


def square_root_of(D: int) -> int | None:
    """Return s with s*s == D, or None when D is not a perfect square."""
    s = math.isqrt(D)
    return s if s * s == D else None


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True, eq=False)
class QF:
    a: Fraction
    b: Fraction
    D: int

    def __post_init__(self):
        a, b = _frac(self.a), _frac(self.b)
        check_disc(self.D)
        s = square_root_of(self.D)
        if s is not None and b:
            a, b = a + b * s, Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    # constructors -----------------------------------------------------------
    @classmethod
    def of(cls, x: "QF | Rational", D: int) -> "QF":
        if isinstance(x, QF):
            if x.D != D:
                raise FieldMismatch(f"element of Q(sqrt({x.D})) used in Q(sqrt({D}))")
            return x
        return cls(_frac(x), Fraction(0), D)

    @classmethod
    def sqrt(cls, D: int) -> "QF":
        return cls(Fraction(0), Fraction(1), D)

    # helpers ----------------------------------------------------------------
    def _coerce(self, other) -> "QF":
        if isinstance(other, QF):
            if other.D != self.D:
                raise FieldMismatch(
                    f"cannot combine Q(sqrt({self.D})) with Q(sqrt({other.D}))"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QF(Fraction(other), Fraction(0), self.D)
        return NotImplemented

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    # ring operations --------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QF(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QF(-self.a, -self.b, self.D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QF(self.a - o.a, self.b - o.b, self.D)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QF(
            self.a * o.a + self.b * o.b * self.D,
            self.a * o.b + self.b * o.a,
            self.D,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QF":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt(D))")
        return QF(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = QF.of(1, self.D), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # Galois structure -------------------------------------------------------
    def conjugate(self) -> "QF":
        return QF(self.a, -self.b, self.D)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    def trace(self) -> Fraction:
        return 2 * self.a

    # order ------------------------------------------------------------------
    def sign(self) -> int:
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if (a > 0) == (b > 0):
            return 1 if a > 0 else -1
        lhs, rhs = a * a, b * b * self.D
        if lhs > rhs:
            return 1 if a > 0 else -1
        if lhs < rhs:
            return 1 if b > 0 else -1
        return 0  # unreachable for a folded non-square D

    def __eq__(self, other):
        o = self._coerce(other) if isinstance(other, (QF, int, Fraction)) else NotImplemented
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash(self.a) if self.b == 0 else hash((self.a, self.b, self.D))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def floor(self) -> int:
        """Largest integer n with n <= self."""
        rad = self.b * self.b * self.D
        root = math.isqrt(rad.numerator // rad.denominator)
        guess = math.floor(self.a) + (root if self.b >= 0 else -root - 1)
        n = guess - 2
        while (self - (n + 1)).sign() >= 0:
            n += 1
        while (self - n).sign() < 0:
            n -= 1
        return n

    def mod(self, w: "QF | Rational") -> "QF":
        """Representative of self in [0, w) for positive w."""
        w = self._coerce(w)
        if w.sign() <= 0:
            raise ValueError("modulus must be positive")
        return self - w * (self / w).floor()

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.D)

    def approx(self, digits: int = 12) -> str:
        return f"{float(self):.{digits}g}"

    # text -------------------------------------------------------------------
    def __str__(self):
        return format_qf(self)

    def __repr__(self):
        return f"QF({format_qf(self)!r}, D={self.D})"


def format_qf(x: QF) -> str:
    if x.b == 0:
        return str(x.a)
    sign = "-" if x.b < 0 else "+"
    return f"{x.a} {sign} {abs(x.b)}*sqrt({x.D})"


_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:(?P<coef>\d+(?:\s*/\s*\d+)?)\s*\*?\s*)?"
    r"(?P<rad>sqrt\(\s*(?P<d>\d+)\s*\))?\s*"
)


def parse_qf(text: str | int, D: int) -> QF:
    """Parse ``"a/b + c/d*sqrt(D)"``; plain integers and fractions are accepted."""
    if isinstance(text, int) and not isinstance(text, bool):
        return QF.of(text, D)
    if not isinstance(text, str):
        raise ValueError(f"cannot parse field element from {text!r}")
    s = text.strip()
    if not s:
        raise ValueError("empty field element")
    a, b = Fraction(0), Fraction(0)
    pos = 0
    seen = False
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"malformed field element {text!r}")
        if not m.group("coef") and not m.group("rad"):
            raise ValueError(f"malformed field element {text!r}")
        if seen and not m.group("sign"):
            raise ValueError(f"missing operator in {text!r}")
        coef = Fraction(m.group("coef").replace(" ", "")) if m.group("coef") else Fraction(1)
        if m.group("sign") == "-":
            coef = -coef
        if m.group("rad"):
            d = int(m.group("d"))
            if d != D:
                raise FieldMismatch(f"sqrt({d}) in an element of Q(sqrt({D}))")
            b += coef
        else:
            a += coef
        seen = True
        pos = m.end()
    return QF(a, b, D)


def qf_sign(x: QF) -> int:
    return x.sign()


def qf_conjugate(x: QF) -> QF:
    return x.conjugate()


def qf_norm(x: QF) -> Fraction:
    return x.norm()
