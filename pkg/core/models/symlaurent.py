# models/symlaurent.py
"""
Exact multivariate Laurent polynomials over Q, rational functions and
truncated power series in X = p^-s.

Monomials are sorted tuples of (variable index, exponent) pairs with no zero
exponents; coefficients are Fractions. The symbol "h" obeys h^2 = p.
"""
from fractions import Fraction
from heapq import heappush, heappop
import logging
import re

from ..addons.errors import DivisionError, ReconstructionError

logger = logging.getLogger(__name__)

# canonical order: leading terms and text rendering follow it
_NAMES = ['X', 'h', 'p', 'a', 'b', 'a1', 'a2', 'a3', 'am', 'n1', 'n2', 'c', 'beta']
_INDEX = {name: i for i, name in enumerate(_NAMES)}
_H, _P = _INDEX['h'], _INDEX['p']


def var_index(name):
    if name not in _INDEX:
        _INDEX[name] = len(_NAMES)
        _NAMES.append(name)
    return _INDEX[name]


def var_name(index):
    return _NAMES[index]


def _monomial(exponents):
    """Canonical monomial from an index -> exponent dict"""
    e = exponents.get(_H)
    if e is not None and not 0 <= e <= 1:
        exponents[_H] = e % 2
        exponents[_P] = exponents.get(_P, 0) + e // 2
    return tuple(sorted((i, k) for i, k in exponents.items() if k))


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    exponents = dict(m1)
    for i, k in m2:
        exponents[i] = exponents.get(i, 0) + k
    return _monomial(exponents)


def _mono_inv(m):
    return _monomial({i: -k for i, k in m})


def _mono_pow(m, n):
    return _monomial({i: k * n for i, k in m})


def _coefficient(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"Laurent coefficients are rationals, got {value!r}")


class LaurentPoly:
    __slots__ = ('terms',)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    # ---------------------- CONSTRUCTORS ---------------------- #
    @classmethod
    def const(cls, value):
        return cls({(): _coefficient(value)})

    @classmethod
    def var(cls, name, power=1):
        return cls({_monomial({var_index(name): power}): Fraction(1)})

    @classmethod
    def monomial(cls, coeff=1, **exponents):
        return cls({_monomial({var_index(k): v for k, v in exponents.items()}): _coefficient(coeff)})

    @classmethod
    def coerce(cls, value):
        if isinstance(value, LaurentPoly):
            return value
        return cls.const(value)

    # ---------------------- RING ---------------------- #
    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return LaurentPoly(terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if len(other.terms) == 1 and () in other.terms:
            c = other.terms[()]
            return LaurentPoly({m: v * c for m, v in self.terms.items()})
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return LaurentPoly(terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if not self.is_monomial():
                raise DivisionError("negative power of a non-monomial Laurent polynomial")
            (m, c), = self.terms.items()
            return LaurentPoly({_mono_pow(m, n): Fraction(1) / c ** (-n)})
        result, base = LaurentPoly.const(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionError("division by zero")
            return LaurentPoly({m: c / other for m, c in self.terms.items()})
        return self.divide_exact(other)

    def _other(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.const(other)
        return NotImplemented

    def __eq__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # ---------------------- INSPECTION ---------------------- #
    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self):
        return self.terms.get((), Fraction(0))

    def variables(self):
        return sorted({var_name(i) for m in self.terms for i, _ in m}, key=var_index)

    def degree_in(self, name):
        i = var_index(name)
        return max((dict(m).get(i, 0) for m in self.terms), default=0)

    def low_degree_in(self, name):
        i = var_index(name)
        return min((dict(m).get(i, 0) for m in self.terms), default=0)

    def split_by(self, name):
        """Map k -> coefficient of name^k"""
        i = var_index(name)
        parts = {}
        for m, c in self.terms.items():
            exps = dict(m)
            k = exps.pop(i, 0)
            rest = tuple(sorted(exps.items()))
            parts.setdefault(k, {})[rest] = c
        return {k: LaurentPoly(v) for k, v in parts.items()}

    def coeff_in(self, name, k):
        return self.split_by(name).get(k, LaurentPoly())

    def inverse_monomial(self):
        if not self.is_monomial():
            raise DivisionError(f"{self} is not a unit of the Laurent ring")
        (m, c), = self.terms.items()
        return LaurentPoly({_mono_inv(m): 1 / c})

    # ---------------------- EXACT DIVISION ---------------------- #
    def divide_exact(self, other):
        """Quotient q with self = q * other, or DivisionError"""
        other = LaurentPoly.coerce(other)
        if other.is_zero():
            raise DivisionError("division by the zero polynomial")
        if other.is_monomial():
            return self * other.inverse_monomial()
        if self.is_zero():
            return LaurentPoly()
        universe = sorted({i for m in list(self.terms) + list(other.terms) for i, _ in m})
        if _H in universe:
            raise DivisionError("exact division is not defined in the presence of h")

        def key(m):
            exps = dict(m)
            return tuple(exps.get(i, 0) for i in universe)

        # degree box: for a true quotient, per-variable extreme degrees subtract
        high = [max(key(m)[j] for m in self.terms) - max(key(m)[j] for m in other.terms)
                for j in range(len(universe))]
        low = [min(key(m)[j] for m in self.terms) - min(key(m)[j] for m in other.terms)
               for j in range(len(universe))]

        lead = max(other.terms, key=key)
        lead_coeff, lead_key = other.terms[lead], key(lead)
        remainder = dict(self.terms)
        heap = []
        for m in remainder:
            heappush(heap, (tuple(-x for x in key(m)), m))
        quotient = {}
        while remainder:
            while True:
                _, m = heappop(heap)
                if remainder.get(m):
                    break
            rk = key(m)
            qk = [rk[j] - lead_key[j] for j in range(len(universe))]
            if any(q < lo or q > hi for q, lo, hi in zip(qk, low, high)):
                raise DivisionError("Laurent division is not exact")
            qm = tuple((universe[j], e) for j, e in enumerate(qk) if e)
            qc = remainder[m] / lead_coeff
            quotient[qm] = qc
            for gm, gc in other.terms.items():
                t = _mono_mul(qm, gm)
                value = remainder.get(t, 0) - qc * gc
                if value:
                    if t not in remainder:
                        heappush(heap, (tuple(-x for x in key(t)), t))
                    remainder[t] = value
                else:
                    remainder.pop(t, None)
        return LaurentPoly(quotient)

    # ---------------------- SUBSTITUTION ---------------------- #
    def evaluate(self, values):
        """Numeric value; values maps names to numbers (Fraction, int or mpmath)"""
        total = 0
        for m, c in self.terms.items():
            term = c
            for i, k in m:
                x = values[var_name(i)]
                term = term * (x ** k if k > 0 else 1 / x ** (-k))
            total = total + term
        return total

    def substitute(self, assignments):
        """RatFunc obtained by replacing variables with Laurent polynomials"""
        assignments = {var_index(k): LaurentPoly.coerce(v) for k, v in assignments.items()}
        shifts = {}
        for i, value in assignments.items():
            if not value.is_monomial():
                low = min((dict(m).get(i, 0) for m in self.terms), default=0)
                if low < 0:
                    shifts[i] = -low
        num = LaurentPoly()
        for m, c in self.terms.items():
            term = LaurentPoly.const(c)
            keep = {}
            for i, k in m:
                if i in assignments:
                    term = term * assignments[i] ** (k + shifts.get(i, 0))
                else:
                    keep[i] = k
            num = num + term * LaurentPoly({_monomial(keep): Fraction(1)})
        den = LaurentPoly.const(1)
        for i, s in shifts.items():
            den = den * assignments[i] ** s
        if den.is_zero():
            raise DivisionError("substitution sends a denominator to zero")
        return RatFunc(num, den)

    # ---------------------- RENDERING ---------------------- #
    def sorted_terms(self):
        universe = sorted({i for m in self.terms for i, _ in m})

        def key(item):
            exps = dict(item[0])
            return tuple(exps.get(i, 0) for i in universe)

        return sorted(self.terms.items(), key=key, reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            factors = [var_name(i) + (f"^{k}" if k != 1 else "") for i, k in m]
            if not factors:
                body = str(c)
            elif c == 1:
                body = "*".join(factors)
            elif c == -1:
                body = "-" + "*".join(factors)
            else:
                body = f"{c}*" + "*".join(factors)
            out.append(body)
        text = " + ".join(out)
        return text.replace("+ -", "- ")

    def __repr__(self):
        return f"LaurentPoly({self})"


def parse_poly(text):
    """Parse 'am*n1^2*a1^-1 - 3/2*b + 1' into a LaurentPoly"""
    cleaned = text.replace(" ", "").replace("**", "^").replace("^-", "^~")
    if not cleaned:
        raise ValueError("empty polynomial")
    total = LaurentPoly()
    for sign, body in re.findall(r"([+-]?)([^+-]+)", cleaned):
        body = body.replace("^~", "^-")
        term = LaurentPoly.const(-1 if sign == "-" else 1)
        for factor in body.split("*"):
            if re.fullmatch(r"\d+(/\d+)?", factor):
                term = term * Fraction(factor)
            else:
                match = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?", factor)
                if not match:
                    raise ValueError(f"cannot parse factor {factor!r}")
                term = term * LaurentPoly.var(match.group(1), int(match.group(2) or 1))
        total = total + term
    return total


# ---------------------- POWER SERIES ---------------------- #
class PowerSeries:
    """Truncated series sum_{k <= order} c_k X^k with Laurent coefficients"""

    __slots__ = ('coeffs', 'var')

    def __init__(self, coeffs, var='X'):
        self.coeffs = [LaurentPoly.coerce(c) for c in coeffs]
        self.var = var

    @property
    def order(self):
        return len(self.coeffs) - 1

    @classmethod
    def from_poly(cls, poly, order, var='X'):
        parts = poly.split_by(var)
        if parts and min(parts) < 0:
            raise DivisionError(f"negative powers of {var} have no power series")
        return cls([parts.get(k, LaurentPoly()) for k in range(order + 1)], var)

    def to_poly(self):
        x = LaurentPoly.var(self.var)
        return sum((c * x ** k for k, c in enumerate(self.coeffs) if c), LaurentPoly())

    def truncate(self, order):
        return PowerSeries(self.coeffs[:order + 1], self.var)

    def __add__(self, other):
        n = min(self.order, other.order)
        return PowerSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)], self.var)

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            return PowerSeries([c * other for c in self.coeffs], self.var)
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = LaurentPoly()
            for j in range(k + 1):
                if self.coeffs[j] and other.coeffs[k - j]:
                    acc = acc + self.coeffs[j] * other.coeffs[k - j]
            out.append(acc)
        return PowerSeries(out, self.var)

    __rmul__ = __mul__

    def inverse(self):
        c0 = self.coeffs[0]
        if not c0.is_monomial():
            raise DivisionError(f"constant term {c0} is not invertible")
        u = c0.inverse_monomial()
        out = [u]
        for n in range(1, self.order + 1):
            acc = LaurentPoly()
            for k in range(1, n + 1):
                if self.coeffs[k] and out[n - k]:
                    acc = acc + self.coeffs[k] * out[n - k]
            out.append(-(acc * u))
        return PowerSeries(out, self.var)

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        n = min(self.order, other.order)
        return all(self.coeffs[k] == other.coeffs[k] for k in range(n + 1))

    def first_mismatch(self, other):
        n = min(self.order, other.order)
        return next((k for k in range(n + 1) if self.coeffs[k] != other.coeffs[k]), None)

    def substitute(self, assignments):
        return PowerSeries([c.substitute(assignments).as_poly() for c in self.coeffs], self.var)

    def __str__(self):
        parts = [f"({c})*{self.var}^{k}" for k, c in enumerate(self.coeffs) if c]
        return " + ".join(parts) + f" + O({self.var}^{self.order + 1})"


# ---------------------- RATIONAL FUNCTIONS ---------------------- #
class RatFunc:
    __slots__ = ('num', 'den')

    def __init__(self, num, den=1):
        num, den = LaurentPoly.coerce(num), LaurentPoly.coerce(den)
        if den.is_zero():
            raise DivisionError("rational function with zero denominator")
        self.num, self.den = num, den

    @classmethod
    def product_inverse(cls, factors, numerator=1):
        """numerator / prod(factors)"""
        den = LaurentPoly.const(1)
        for f in factors:
            den = den * f
        return cls(numerator, den)

    def __add__(self, other):
        other = _as_ratfunc(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_ratfunc(other))

    def __mul__(self, other):
        other = _as_ratfunc(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfunc(other)
        if other.num.is_zero():
            raise DivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def equals(self, other):
        other = _as_ratfunc(other)
        return self.num * other.den == other.num * self.den

    def __eq__(self, other):
        if not isinstance(other, (RatFunc, LaurentPoly, int, Fraction)):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def normalize(self, var='X'):
        """Scale so the denominator has constant term 1 in var, when that term is a unit"""
        c0 = self.den.coeff_in(var, 0)
        if c0.is_zero():
            return self
        if c0.is_monomial():
            inv = c0.inverse_monomial()
            num, den = self.num * inv, self.den * inv
        else:
            try:
                num, den = self.num.divide_exact(c0), self.den.divide_exact(c0)
            except DivisionError:
                return self
        try:
            q = num.divide_exact(den)
            return RatFunc(q, 1)
        except DivisionError:
            return RatFunc(num, den)

    def as_poly(self):
        return self.num.divide_exact(self.den)

    def substitute(self, assignments):
        num = self.num.substitute(assignments)
        den = self.den.substitute(assignments)
        if den.num.is_zero():
            raise DivisionError("substitution sends the denominator to zero")
        return (num / den).normalize()

    def x_degrees(self, var='X'):
        return self.num.degree_in(var), self.den.degree_in(var)

    def evaluate(self, values):
        return self.num.evaluate(values) / self.den.evaluate(values)

    def to_dict(self):
        return {'num': str(self.num), 'den': str(self.den)}

    def __str__(self):
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


def _as_ratfunc(value):
    if isinstance(value, RatFunc):
        return value
    return RatFunc(value, 1)


def one_minus(monomial, power=1, var='X'):
    """1 - monomial * var^power"""
    return LaurentPoly.const(1) - LaurentPoly.coerce(monomial) * LaurentPoly.var(var, power)


# ---------------------- EXPANSION ---------------------- #
def expand(rf, order, var='X'):
    """Power series S with S * den = num mod var^(order + 1)"""
    rf = rf.normalize(var)
    den = PowerSeries.from_poly(rf.den, order, var)
    if not den.coeffs[0].is_monomial():
        raise DivisionError(f"denominator constant term {den.coeffs[0]} is not invertible")
    num = PowerSeries.from_poly(rf.num, order, var)
    return num * den.inverse()


# ---------------------- RECONSTRUCTION ---------------------- #
def _bareiss_solve(matrix, rhs):
    """Fraction-free solve: returns (det, [det * x_j]) or None when singular"""
    n = len(matrix)
    rows = [list(r) + [b] for r, b in zip(matrix, rhs)]
    sign, previous = 1, LaurentPoly.const(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if rows[i][k]), None)
        if pivot is None:
            return None
        if pivot != k:
            rows[k], rows[pivot] = rows[pivot], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                value = rows[k][k] * rows[i][j] - rows[i][k] * rows[k][j]
                rows[i][j] = value.divide_exact(previous)
            rows[i][k] = LaurentPoly()
        previous = rows[k][k]
    det = rows[n - 1][n - 1]
    scaled = [LaurentPoly()] * n
    for i in range(n - 1, -1, -1):
        acc = det * rows[i][n]
        for j in range(i + 1, n):
            acc = acc - rows[i][j] * scaled[j]
        scaled[i] = acc.divide_exact(rows[i][i])
    # the row swaps do not change the solution, only the sign of det
    return det, scaled


def reconstruct(series, max_num_deg, max_den_deg):
    """Rational function num/den with deg num <= max_num_deg, deg den <= max_den_deg matching series"""
    var, c = series.var, series.coeffs
    N = series.order
    if N < max_num_deg + max_den_deg + 1:
        raise ReconstructionError(
            f"order {N} too small for bounds ({max_num_deg}, {max_den_deg})",
            details={'order': N})

    def coeff(k):
        return c[k] if 0 <= k <= N else LaurentPoly()

    x = LaurentPoly.var(var)
    if max_num_deg == 0 and c[0].is_monomial():
        # num is a constant: den is c0 / series, which must terminate
        inverse = series.inverse()
        last = max((k for k, v in enumerate(inverse.coeffs) if v), default=0)
        if last > max_den_deg:
            raise ReconstructionError("no denominator within the bound", details={'degree_seen': last})
        den = sum((inverse.coeffs[k] * c[0] * x ** k for k in range(last + 1)), LaurentPoly())
        logger.debug(f"reconstructed with {N - last} surplus equations")
        return RatFunc(c[0], den).normalize(var)

    for m in range(max_den_deg + 1):
        n = max_num_deg
        if m == 0:
            q = [LaurentPoly.const(1)]
            scale = LaurentPoly.const(1)
        else:
            matrix = [[coeff(k - j) for j in range(1, m + 1)] for k in range(n + 1, n + m + 1)]
            rhs = [-coeff(k) for k in range(n + 1, n + m + 1)]
            solved = _bareiss_solve(matrix, rhs)
            if solved is None:
                continue
            scale, scaled = solved
            q = [scale] + scaled
        surplus_ok = all(
            sum((q[j] * coeff(k - j) for j in range(m + 1) if coeff(k - j)), LaurentPoly()).is_zero()
            for k in range(n + 1, N + 1)
        )
        if not surplus_ok:
            continue
        num = sum(
            (sum((q[j] * coeff(k - j) for j in range(min(k, m) + 1)), LaurentPoly()) * x ** k
             for k in range(n + 1)),
            LaurentPoly())
        den = sum((q[j] * x ** j for j in range(m + 1)), LaurentPoly())
        logger.debug(f"reconstructed with denominator degree {m}, {N - n - m} surplus equations")
        return RatFunc(num, den).normalize(var)
    raise ReconstructionError(
        f"no rational function with degrees <= ({max_num_deg}, {max_den_deg}) matches to order {N}")


def substitute(rf, assignments):
    return _as_ratfunc(rf).substitute(assignments)
