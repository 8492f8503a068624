# models/analytic.py
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Tuple

from mpmath import mpc, mpf

from .quadfield import as_fraction
from ..addons.errors import NotPositiveError, LabError

DEFAULT_PRECISION = 30


def to_mpf(q):
    """Exact rational to mpf at the current working precision"""
    q = as_fraction(q)
    return mpf(q.numerator) / q.denominator


def _exact(value):
    if isinstance(value, float):
        return Fraction(repr(value))
    return as_fraction(value)


@dataclass(frozen=True)
class UHPoint:
    """z = x + iy in the upper half plane, kept exact so rescaled points stay exact"""
    x: Fraction
    y: Fraction
    precision: int = DEFAULT_PRECISION

    @classmethod
    def of(cls, x, y, precision=DEFAULT_PRECISION):
        x, y = _exact(x), _exact(y)
        if y <= 0:
            raise NotPositiveError(f"y = {y} is not positive")
        if precision < 15:
            raise LabError(f"working precision {precision} is below 15 digits")
        return cls(x, y, int(precision))

    @classmethod
    def parse(cls, text, precision=DEFAULT_PRECISION):
        """'x,y' or 'x+yi' / 'x-yi' / 'yi'"""
        text = text.replace(' ', '')
        if ',' in text:
            x, y = text.split(',', 1)
            return cls.of(x, y, precision)
        if not text.endswith('i'):
            raise LabError(f"cannot read {text!r} as a point of the upper half plane")
        body = text[:-1]
        cut = max(body.rfind('+', 1), body.rfind('-', 1))
        if cut <= 0:
            return cls.of(0, body or '1', precision)
        return cls.of(body[:cut], body[cut:].lstrip('+') or '1', precision)

    @property
    def z(self):
        return mpc(to_mpf(self.x), to_mpf(self.y))

    def translate(self, n):
        return UHPoint.of(self.x + as_fraction(n), self.y, self.precision)

    def scale(self, factor):
        factor = as_fraction(factor)
        if factor <= 0:
            raise NotPositiveError(f"scale factor {factor} is not positive")
        return UHPoint.of(self.x * factor, self.y * factor, self.precision)

    def invert(self):
        """-1/z"""
        r = self.x * self.x + self.y * self.y
        return UHPoint.of(-self.x / r, self.y / r, self.precision)

    def with_precision(self, precision):
        return UHPoint.of(self.x, self.y, precision)

    def __str__(self):
        return f"{self.x}+{self.y}i"

    def to_dict(self):
        return {'x': str(self.x), 'y': str(self.y), 'precision': self.precision}


@dataclass(frozen=True)
class ResidueVector:
    N: int
    w1: int
    w2: int

    def __post_init__(self):
        if self.N < 1:
            raise NotPositiveError(f"level {self.N} must be at least 1")
        object.__setattr__(self, 'w1', self.w1 % self.N)
        object.__setattr__(self, 'w2', self.w2 % self.N)

    @classmethod
    def nonzero(cls, N):
        return [cls(N, a, b) for a in range(N) for b in range(N) if a or b]

    @property
    def is_zero(self):
        return self.w1 == 0 and self.w2 == 0

    @property
    def w0(self):
        return Fraction(self.w1, self.N), Fraction(self.w2, self.N)

    def __neg__(self):
        return ResidueVector(self.N, -self.w1, -self.w2)

    def __str__(self):
        return f"({self.w1},{self.w2})/{self.N}"


def units(N):
    return [r for r in range(N) if gcd(r, N) == 1] if N > 1 else [0]


@dataclass
class SchwartzFiniteLevel:
    """Phi_f on Z-hat^2 invariant under N Z-hat^2, as a table on (Z/N)^2 (missing classes are 0)"""
    N: int
    values: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.N < 1:
            raise NotPositiveError(f"level {self.N} must be at least 1")
        self.values = {(m % self.N, n % self.N): as_fraction(v) for (m, n), v in self.values.items() if v}

    @classmethod
    def characteristic(cls, N=1):
        """char(Z-hat^2)"""
        return cls(N, {(m, n): 1 for m in range(N) for n in range(N)})

    @classmethod
    def phi_N(cls, N):
        """Sum over units n of char((0, n) + N Z-hat^2); char(Z-hat^2) when N = 1"""
        if N == 1:
            return cls.characteristic(1)
        return cls(N, {(0, n): 1 for n in units(N)})

    def __call__(self, m, n):
        return self.values.get((m % self.N, n % self.N), Fraction(0))

    @property
    def value_at_zero(self):
        return self(0, 0)

    @property
    def support(self):
        return sorted(self.values)

    def to_dict(self):
        return {'N': self.N, 'values': [{'m': m, 'n': n, 'value': str(v)} for (m, n), v in sorted(self.values.items())]}
