# models/quadfield.py
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, inf, isqrt
from typing import Optional, Sequence
import logging

from sympy import factorint, legendre_symbol, primefactors, sqrt_mod
from sympy.ntheory import multiplicity

from ..addons.errors import (
    DiscriminantError, SingularMatrixError, NotPositiveError, PlaceError, LabError,
)

logger = logging.getLogger(__name__)

DEFAULT_LIFT_PRECISION = 16


def as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"Cannot read {value!r} as an exact rational")


def vp(q, p):
    """p-adic valuation of a nonzero rational"""
    q = as_fraction(q)
    if q == 0:
        return inf
    return int(multiplicity(p, abs(q.numerator))) - int(multiplicity(p, q.denominator))


def is_squarefree(n):
    return all(e == 1 for e in factorint(n).values())


def kronecker_symbol(d, p):
    """Kronecker symbol (d/p) for a prime p"""
    if p == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    if d % p == 0:
        return 0
    return int(legendre_symbol(d % p, p))


class Discriminant:
    """Positive D such that -D is a fundamental discriminant"""

    __slots__ = ('D',)

    def __init__(self, D):
        D = int(D)
        if not self.is_fundamental(D):
            raise DiscriminantError(f"-{D} is not a fundamental discriminant")
        self.D = D

    @staticmethod
    def is_fundamental(D):
        if D < 3:
            return False
        if D % 4 == 3:
            return is_squarefree(D)
        if D % 4 == 0:
            D_prime = D // 4
            return D_prime % 4 in (1, 2) and is_squarefree(D_prime)
        return False

    @classmethod
    @lru_cache(maxsize=None)
    def of(cls, D):
        return cls(D)

    @property
    def odd(self):
        """True when -D = 1 mod 4"""
        return self.D % 4 == 3

    @property
    def delta(self):
        return FieldElem(0, 1, self.D)

    def element(self, a, b=0):
        return FieldElem(a, b, self.D)

    def __eq__(self, other):
        return isinstance(other, Discriminant) and other.D == self.D

    def __hash__(self):
        return hash(('Discriminant', self.D))

    def __repr__(self):
        return f"Discriminant({self.D})"


@dataclass(frozen=True)
class FieldElem:
    """a + b*delta in Q(sqrt(-D)), delta^2 = -D"""
    a: Fraction
    b: Fraction
    D: int

    def __post_init__(self):
        object.__setattr__(self, 'a', as_fraction(self.a))
        object.__setattr__(self, 'b', as_fraction(self.b))

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.D != self.D:
                raise LabError(f"Mixing Q(sqrt(-{self.D})) with Q(sqrt(-{other.D}))")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElem(other, 0, self.D)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.a + other.a, self.b + other.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(-self.a, -self.b, self.D)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.a - other.a, self.b - other.b, self.D)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(
            self.a * other.a - self.D * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.D,
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in E")
        return FieldElem(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = FieldElem(1, 0, self.D), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self):
        return FieldElem(self.a, -self.b, self.D)

    def norm(self):
        return self.a * self.a + self.D * self.b * self.b

    def trace(self):
        return 2 * self.a

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def is_rational(self):
        return self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*d"
        return f"({self.a} + {self.b}*d)"

    def to_dict(self):
        return {'a': f"{self.a.numerator}/{self.a.denominator}",
                'b': f"{self.b.numerator}/{self.b.denominator}",
                'D': self.D}

    @classmethod
    def from_dict(cls, data):
        return cls(Fraction(data['a']), Fraction(data['b']), int(data['D']))


def elem(value, D):
    if isinstance(value, FieldElem):
        return value
    return FieldElem(value, 0, D)


@dataclass(frozen=True)
class Matrix3E:
    rows: tuple
    D: int

    @classmethod
    def of(cls, rows, D):
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("Matrix3E needs exactly 3x3 entries")
        return cls(tuple(tuple(elem(x, D) for x in r) for r in rows), D)

    @classmethod
    def identity(cls, D):
        return cls.diag((1, 1, 1), D)

    @classmethod
    def diag(cls, entries, D):
        zero = FieldElem(0, 0, D)
        return cls(tuple(
            tuple(elem(entries[i], D) if i == j else zero for j in range(3))
            for i in range(3)
        ), D)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        return [x for r in self.rows for x in r]

    def __mul__(self, other):
        if isinstance(other, Matrix3E):
            return Matrix3E(tuple(
                tuple(
                    sum((self.rows[i][k] * other.rows[k][j] for k in range(3)), FieldElem(0, 0, self.D))
                    for j in range(3)
                )
                for i in range(3)
            ), self.D)
        scalar = elem(other, self.D) if not isinstance(other, FieldElem) else other
        return Matrix3E(tuple(tuple(x * scalar for x in r) for r in self.rows), self.D)

    def __rmul__(self, other):
        return self * other

    def apply(self, v):
        return tuple(
            sum((self.rows[i][k] * elem(v[k], self.D) for k in range(3)), FieldElem(0, 0, self.D))
            for i in range(3)
        )

    def star(self):
        """Conjugate transpose"""
        return Matrix3E(tuple(tuple(self.rows[j][i].conj() for j in range(3)) for i in range(3)), self.D)

    def det(self):
        m = self.rows
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    def minor(self, i, j):
        rows = [r for k, r in enumerate(self.rows) if k != i]
        a, b = [[x for l, x in enumerate(r) if l != j] for r in rows]
        return a[0] * b[1] - a[1] * b[0]

    def inverse(self):
        d = self.det()
        if d.is_zero():
            raise SingularMatrixError("matrix is singular")
        inv_d = d.inverse()
        return Matrix3E(tuple(
            tuple(self.minor(j, i) * (inv_d if (i + j) % 2 == 0 else -inv_d) for j in range(3))
            for i in range(3)
        ), self.D)

    def is_hermitian(self):
        return self.star() == self

    def to_dict(self):
        return [[x.to_dict() for x in r] for r in self.rows]

    def __repr__(self):
        return "Matrix3E(" + "; ".join(", ".join(repr(x) for x in r) for r in self.rows) + ")"


# ---------------------- HERMITIAN FORM ---------------------- #
def hermitian_form(D):
    """J = antidiag(delta^-1, 1, -delta^-1) with <v, w> = conj(v)^t J w"""
    d_inv = FieldElem(0, 1, D).inverse()
    zero = 0
    return Matrix3E.of([[zero, zero, d_inv], [zero, 1, zero], [-d_inv, zero, zero]], D)


def pairing(v, w, J):
    D = J.D
    total = FieldElem(0, 0, D)
    for i in range(3):
        vi = elem(v[i], D).conj()
        if vi.is_zero():
            continue
        for j in range(3):
            if not J.rows[i][j].is_zero():
                total = total + vi * J.rows[i][j] * elem(w[j], D)
    return total


def similitude(g, J):
    """mu with g* J g = mu J, or None when g is not a similitude of J"""
    if J.det().is_zero():
        raise SingularMatrixError("Hermitian form is singular")
    if not J.is_hermitian():
        raise LabError("form is not Hermitian")
    form = g.star() * J * g
    i, j = next((i, j) for i in range(3) for j in range(3) if not J.rows[i][j].is_zero())
    mu = form.rows[i][j] / J.rows[i][j]
    if not mu.is_rational() or mu.is_zero():
        return None
    if form != J * mu:
        return None
    return mu.a


def unipotent(r, s, D):
    """The upper unipotent element with parameters r in Q and s in E"""
    s = elem(s, D)
    delta = FieldElem(0, 1, D)
    corner = as_fraction(r) + s * s.conj() * delta / 2
    return Matrix3E.of([[1, s.conj() * delta, corner], [0, 1, s], [0, 0, 1]], D)


def weyl_element(D):
    return Matrix3E.of([[0, 0, 1], [0, -1, 0], [-1, 0, 0]], D)


def random_group_element(D, rng, length=4):
    """Product of random torus, unipotent, scalar and Weyl generators of GU(J)(Q)"""
    def small_rational():
        return Fraction(rng.randint(-4, 4), rng.randint(1, 3))

    def small_unit():
        while True:
            x = FieldElem(small_rational(), small_rational(), D)
            if not x.is_zero():
                return x

    g = Matrix3E.identity(D)
    for _ in range(length):
        kind = rng.choice(('torus', 'unipotent', 'scalar', 'weyl'))
        if kind == 'torus':
            a = small_unit()
            h = Matrix3E.diag((a * a.conj(), a, 1), D)
        elif kind == 'unipotent':
            h = unipotent(small_rational(), FieldElem(small_rational(), small_rational(), D), D)
        elif kind == 'scalar':
            h = Matrix3E.diag((small_unit(),) * 3, D)
        else:
            h = weyl_element(D)
        g = g * h
    return g


# ---------------------- LOCAL PLACES ---------------------- #
@lru_cache(maxsize=None)
def hensel_root(p, D, k):
    """Root of x^2 = -D lifted from a fixed base root; returns (root, digits of accuracy)"""
    if p == 2:
        r = 1
        for j in range(3, k):
            if ((r * r + D) >> j) & 1:
                r += 1 << (j - 1)
        accuracy = max(k - 1, 1)
        return r % (1 << accuracy), accuracy
    r = min(int(x) for x in sqrt_mod(-D % p, p, all_roots=True))
    accuracy = 1
    while accuracy < k:
        accuracy = min(2 * accuracy, k)
        modulus = p ** accuracy
        r = (r - (r * r + D) * pow(2 * r, -1, modulus)) % modulus
    return r, k


@dataclass(frozen=True)
class LocalPlace:
    p: int
    D: int
    behavior: str
    root: Optional[int] = None
    precision: int = 0

    SPLIT = 'split'
    INERT = 'inert'
    RAMIFIED = 'ramified'

    @classmethod
    def of(cls, p, D, precision=DEFAULT_LIFT_PRECISION):
        symbol = kronecker_symbol(-D, p)
        if symbol == 0:
            return cls(p, D, cls.RAMIFIED)
        if symbol == -1:
            return cls(p, D, cls.INERT)
        root, accuracy = hensel_root(p, D, precision)
        return cls(p, D, cls.SPLIT, root, accuracy)

    def lifted(self, precision):
        root, accuracy = hensel_root(self.p, self.D, precision)
        return LocalPlace(self.p, self.D, self.SPLIT, root, accuracy)

    @property
    def is_split(self):
        return self.behavior == self.SPLIT

    @property
    def is_inert(self):
        return self.behavior == self.INERT

    @property
    def is_ramified(self):
        return self.behavior == self.RAMIFIED

    def to_dict(self):
        return {'p': self.p, 'D': self.D, 'behavior': self.behavior}


def local_valuation(x, place, choice='only'):
    """Additive valuation with v(p) = 1 (split, inert) or v(uniformizer) = 1 (ramified)"""
    x = elem(x, place.D)
    if x.is_zero():
        return inf
    p = place.p
    if not place.is_split:
        if choice != 'only':
            raise PlaceError(f"{p} is {place.behavior}; only one prime lies above it")
        v = vp(x.norm(), p)
        return v // 2 if place.is_inert else v
    if choice not in ('first', 'second'):
        raise PlaceError(f"{p} splits; choose 'first' or 'second'")
    den = x.a.denominator * x.b.denominator // gcd(x.a.denominator, x.b.denominator)
    n1 = int(x.a * den)
    n2 = int(x.b * den) * (1 if choice == 'first' else -1)
    k = max(place.precision, 2)
    while True:
        r, accuracy = hensel_root(p, place.D, k)
        residue = (n1 + n2 * r) % p ** accuracy
        if residue:
            return int(multiplicity(p, residue)) - int(multiplicity(p, den))
        logger.debug(f"Re-lifting root of -{place.D} at {p} beyond {accuracy} digits")
        k *= 2


# ---------------------- NORM GROUP ---------------------- #
def _square_class(q):
    q = as_fraction(q)
    return q.numerator * q.denominator


def hilbert_symbol(a, b, p):
    """(a, b)_p for nonzero rationals and a finite prime p"""
    a, b = _square_class(a), _square_class(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of zero")
    alpha = int(multiplicity(p, abs(a)))
    beta = int(multiplicity(p, abs(b)))
    u, v = a // p ** alpha, b // p ** beta
    if p == 2:
        def eps(t):
            return ((t - 1) // 2) % 2

        def omega(t):
            return ((t * t - 1) // 8) % 2

        exponent = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if exponent % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * kronecker_symbol(u, p) ** beta * kronecker_symbol(v, p) ** alpha


def is_norm(q, D):
    """Whether q is a norm from Q(sqrt(-D)), by positivity and local Hilbert symbols"""
    q = as_fraction(q)
    if q == 0:
        raise ValueError("is_norm needs a nonzero rational")
    if q < 0:
        return False
    primes = primefactors(2 * D * q.numerator * q.denominator)
    return all(hilbert_symbol(q, -D, p) == 1 for p in primes)


def find_norm_witness(q, D, bound=40):
    """Search x = (m + n*delta)/d with d <= bound and Nm(x) = q"""
    q = as_fraction(q)
    if q <= 0:
        return None
    for d in range(1, bound + 1):
        target = q * d * d
        if target.denominator != 1:
            continue
        t = target.numerator
        y = 0
        while D * y * y <= t:
            rest = t - D * y * y
            x = isqrt(rest)
            if x * x == rest:
                return FieldElem(Fraction(x, d), Fraction(y, d), D)
            y += 1
    return None


def xi_membership(w, J):
    n = pairing(w, w, J)
    if not n.is_rational() or n.a <= 0:
        raise NotPositiveError(f"<w, w> = {n} is not positive", details={'norm': str(n)})
    return is_norm(n.a, J.D)


def orthogonal_complement(w, J):
    """Basis of w^perp"""
    D = J.D
    functional = [pairing(w, [1 if k == i else 0 for k in range(3)], J) for i in range(3)]
    pivot = next((i for i in (2, 1, 0) if not functional[i].is_zero()), None)
    if pivot is None:
        raise NotPositiveError("zero vector has no complement")
    basis = []
    for i in range(3):
        if i == pivot:
            continue
        v = [FieldElem(0, 0, D)] * 3
        v[i] = FieldElem(1, 0, D)
        v[pivot] = -functional[i] / functional[pivot]
        basis.append(tuple(v))
    return basis


def isotropic_search(w, J, bound=2):
    """Bounded search for an isotropic line in w^perp; None when nothing is found"""
    D = J.D
    u, v = orthogonal_complement(w, J)
    grid = [FieldElem(x, y, D) for x in range(-bound, bound + 1) for y in range(-bound, bound + 1)]
    for x in grid:
        for y in grid:
            if x.is_zero() and y.is_zero():
                continue
            candidate = tuple(x * u[i] + y * v[i] for i in range(3))
            if pairing(candidate, candidate, J).is_zero():
                return candidate
    return None


def invariant_ideal_valuation(w, place, J=None):
    """ord_p of (<w, L_p>)(<w, L_p>)^- / <w, w> intersected with Q_p"""
    J = J or hermitian_form(place.D)
    if all(elem(x, place.D).is_zero() for x in w):
        raise NotPositiveError("zero vector")
    basis = [[1 if k == i else 0 for k in range(3)] for i in range(3)]
    pairings = [pairing(w, e, J) for e in basis]
    pairings = [x for x in pairings if not x.is_zero()]
    n = pairing(w, w, J)
    if n.is_zero():
        raise NotPositiveError("w is isotropic")
    if place.is_split:
        m1 = min(local_valuation(x, place, 'first') for x in pairings)
        m2 = min(local_valuation(x, place, 'second') for x in pairings)
        return m1 + m2 - vp(n.a, place.p)
    m = min(local_valuation(x, place) for x in pairings)
    if place.is_inert:
        return 2 * m - vp(n.a, place.p)
    # ramified: v(p) = 2, so the ideal of Q_p is the ceiling of half the E-exponent
    exponent = 2 * m - 2 * vp(n.a, place.p)
    return -((-exponent) // 2)


def serialize_vector(v, D):
    return [elem(x, D).to_dict() for x in v]


def parse_vector(data):
    return tuple(FieldElem.from_dict(x) for x in data)
