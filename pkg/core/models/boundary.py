# models/boundary.py
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Dict, List, Tuple
import csv
import io
import json

from sympy.core.intfunc import igcdex

from .quadfield import FieldElem, Matrix3E, elem, hermitian_form, pairing
from ..addons.errors import ShapeError, UnmappedCuspError


@dataclass(frozen=True)
class CoordBasis:
    """Basis v1, v2, v3 of E^3 in which the Hermitian form keeps the shape of J"""
    v1: tuple
    v2: tuple
    v3: tuple
    D: int

    @classmethod
    def of(cls, v1, v2, v3, D):
        return cls(*(tuple(elem(x, D) for x in v) for v in (v1, v2, v3)), D)

    @classmethod
    def standard(cls, D):
        return cls.of((1, 0, 0), (0, 1, 0), (0, 0, 1), D)

    @property
    def vectors(self):
        return (self.v1, self.v2, self.v3)

    def gram(self, J=None):
        J = J or hermitian_form(self.D)
        return Matrix3E.of([[pairing(v, w, J) for w in self.vectors] for v in self.vectors], self.D)

    def is_valid(self, J=None):
        J = J or hermitian_form(self.D)
        return self.gram(J) == J

    def matrix(self):
        """Columns are v1, v2, v3"""
        return Matrix3E.of([[v[i] for v in self.vectors] for i in range(3)], self.D)

    def to_dict(self):
        return {'D': self.D, 'vectors': [[x.to_dict() for x in v] for v in self.vectors]}


@dataclass(frozen=True)
class UnipotentParam:
    r: Fraction
    s: FieldElem

    def to_dict(self):
        return {'r': f"{self.r.numerator}/{self.r.denominator}", 's': self.s.to_dict()}


# ---------------------- LATTICES ---------------------- #
def _hermite_rows(rows):
    """Integer HNF of (delta-coefficient, rational part) rows: [(g, a)] plus [(0, h)] when nonzero"""
    pivot, rest = None, []
    for b, a in rows:
        if b == 0:
            rest.append(a)
            continue
        if pivot is None:
            pivot = (b, a)
            continue
        pb, pa = pivot
        x, y, g = igcdex(pb, b)
        x, y, g = int(x), int(y), int(g)
        pivot = (g, x * pa + y * a)
        # remaining combination has no delta part
        rest.append((b // g) * pa - (pb // g) * a)
    h = reduce(gcd, (abs(a) for a in rest), 0)
    if pivot is not None and pivot[0] < 0:
        pivot = (-pivot[0], -pivot[1])
    if pivot is not None and h:
        pivot = (pivot[0], pivot[1] % h)
    return pivot, h


@dataclass(frozen=True)
class LatticeE:
    """Z-lattice in E, stored by the integer Hermite form of its generators over one denominator"""
    D: int
    denominator: int = 1
    pivot: tuple = None
    height: int = 0

    @classmethod
    def from_generators(cls, generators, D):
        generators = [elem(g, D) for g in generators]
        den = reduce(lambda x, y: x * y // gcd(x, y),
                     (q.denominator for g in generators for q in (g.a, g.b)), 1)
        rows = [(int(g.b * den), int(g.a * den)) for g in generators]
        pivot, h = _hermite_rows(rows)
        if pivot is None and h == 0:
            return cls(D)
        # reduce the common denominator
        content = reduce(gcd, [h] + ([] if pivot is None else [pivot[0], pivot[1]]), 0)
        common = gcd(content, den)
        if pivot is not None:
            pivot = (pivot[0] // common, pivot[1] // common)
        return cls(D, den // common, pivot, h // common)

    @property
    def rank(self):
        return (self.pivot is not None) + (self.height != 0)

    @property
    def basis(self):
        out = []
        if self.pivot is not None:
            g, a = self.pivot
            out.append(FieldElem(Fraction(a, self.denominator), Fraction(g, self.denominator), self.D))
        if self.height:
            out.append(FieldElem(Fraction(self.height, self.denominator), 0, self.D))
        return out

    def scale(self, factor):
        factor = elem(factor, self.D)
        return LatticeE.from_generators([factor * x for x in self.basis], self.D)

    def coordinates(self, u):
        """(x, y) with u = x * basis[0] + y * basis[1]; rank 2 only"""
        u = elem(u, self.D)
        g, a = self.pivot
        x = u.b * self.denominator / g
        y = (u.a * self.denominator - x * a) / self.height
        return x, y

    def contains(self, u):
        x, y = self.coordinates(u)
        return x.denominator == 1 and y.denominator == 1

    def to_dict(self):
        return {'D': self.D, 'rank': self.rank, 'basis': [x.to_dict() for x in self.basis]}


# ---------------------- DIVISOR LEDGER ---------------------- #
@dataclass
class DivisorLedger:
    """Formal sum of (curve, cusp, multiplicity) with the cusp pushforward table"""
    entries: List[Tuple[str, str, int]] = field(default_factory=list)
    pushforward: Dict[Tuple[str, str], str] = field(default_factory=dict)

    def add(self, curve, cusp, mult):
        if int(mult) != mult:
            raise ValueError(f"multiplicity {mult} is not an integer")
        self.entries.append((str(curve), str(cusp), int(mult)))
        return self

    def __add__(self, other):
        table = dict(self.pushforward)
        table.update(other.pushforward)
        return DivisorLedger(list(self.entries) + list(other.entries), table)

    def scaled(self, factors):
        """Entries over global cusp j multiplied by factors[j]"""
        out = DivisorLedger(pushforward=dict(self.pushforward))
        for curve, cusp, mult in self.entries:
            j = self.global_cusp(curve, cusp)
            if j not in factors:
                raise UnmappedCuspError(f"no factor for global cusp {j}", details={"global": j})
            out.add(curve, cusp, mult * factors[j])
        return out

    def global_cusp(self, curve, cusp):
        try:
            return self.pushforward[(curve, cusp)]
        except KeyError:
            raise UnmappedCuspError(f"no global cusp for ({curve}, {cusp})",
                                    details={'curve': curve, 'cusp': cusp})

    def degrees(self):
        out = OrderedDict()
        for curve, _, mult in self.entries:
            out[curve] = out.get(curve, 0) + mult
        return out

    def unmapped(self):
        """(curve, cusp) pairs with no global cusp, in entry order"""
        seen = []
        for curve, cusp, _ in self.entries:
            if (curve, cusp) not in self.pushforward and (curve, cusp) not in seen:
                seen.append((curve, cusp))
        return seen

    def pushed_forward(self, skip_unmapped=False):
        out = OrderedDict()
        for curve, cusp, mult in self.entries:
            if skip_unmapped and (curve, cusp) not in self.pushforward:
                continue
            j = self.global_cusp(curve, cusp)
            out[j] = out.get(j, 0) + mult
        return out

    # ---------------------- I/O ---------------------- #
    @classmethod
    def from_jsonl(cls, text, pushforward=None):
        ledger = cls(pushforward=dict(pushforward or {}))
        for number, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
                ledger.add(row['curve'], row['cusp'], row['mult'])
                if 'global' in row:
                    ledger.pushforward[(str(row['curve']), str(row['cusp']))] = str(row['global'])
            except (ValueError, KeyError, TypeError) as e:
                raise ShapeError(f"ledger line {number}: {e}", details={'line': line})
        return ledger

    def to_jsonl(self):
        return "\n".join(json.dumps({'curve': c, 'cusp': p, 'mult': m}) for c, p, m in self.entries)

    @staticmethod
    def read_pushforward_csv(text):
        """Columns curve, cusp, global"""
        reader = csv.DictReader(io.StringIO(text))
        table = {}
        for row in reader:
            try:
                table[(row['curve'].strip(), row['cusp'].strip())] = row['global'].strip()
            except (KeyError, AttributeError):
                raise ShapeError("pushforward table needs columns curve, cusp, global")
        return table

    def to_dict(self):
        return {
            'entries': [{'curve': c, 'cusp': p, 'mult': m} for c, p, m in self.entries],
            'pushforward': [{'curve': c, 'cusp': p, 'global': j} for (c, p), j in self.pushforward.items()],
        }
