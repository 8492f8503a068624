# models/satake.py
from dataclasses import dataclass, field
from typing import Dict, Optional

from .symlaurent import LaurentPoly, parse_poly
from ..addons.errors import StrictModeViolation, CaseDataError, WrongVariantError, DivisionError

VARIANTS = ('inert', 'split', 'ramified')

PARAMETERS = {
    'inert': ('a', 'b'),
    'split': ('a1', 'a2', 'a3', 'am'),
    'ramified': ('a', 'b'),
}


def symbol_or_value(value, name):
    """None keeps the parameter symbolic; strings are parsed as Laurent polynomials"""
    if value is None:
        return LaurentPoly.var(name)
    if isinstance(value, str):
        return parse_poly(value)
    return LaurentPoly.coerce(value)


def _inverse(poly, what):
    try:
        return poly ** -1
    except DivisionError:
        raise StrictModeViolation(f"{what} = {poly} is not invertible, cannot impose the central character")


@dataclass
class SatakeData:
    """Satake parameters of one place plus the twist values n1, n2"""
    variant: str
    values: Dict[str, LaurentPoly] = field(default_factory=dict)
    strict: bool = False

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise WrongVariantError(f"unknown place variant {self.variant!r}")

    def __getitem__(self, name):
        return self.values[name]

    # ---------------------- CONSTRUCTORS ---------------------- #
    @classmethod
    def inert(cls, a=None, b=None, n1=None, n2=None, strict=False):
        return cls._with_eta('inert', a, b, n1, n2, strict)

    @classmethod
    def ramified(cls, a=None, b=None, n1=None, n2=None, strict=False):
        return cls._with_eta('ramified', a, b, n1, n2, strict)

    @classmethod
    def _with_eta(cls, variant, a, b, n1, n2, strict):
        values = {
            'a': symbol_or_value(a, 'a'),
            'n1': symbol_or_value(n1, 'n1'),
            'n2': symbol_or_value(n2, 'n2'),
        }
        if not strict:
            values['b'] = symbol_or_value(b, 'b')
            return cls(variant, values, strict)
        # the central character alpha_eta2 is (alpha_nu1 alpha_nu2)^-1
        expected = _inverse(values['n1'] * values['n2'], 'n1*n2')
        if b is None:
            values['b'] = expected
        else:
            values['b'] = symbol_or_value(b, 'b')
            if values['b'] != expected:
                raise StrictModeViolation(
                    f"b = {values['b']} but the central character forces {expected}")
        return cls(variant, values, strict)

    @classmethod
    def split(cls, a1=None, a2=None, a3=None, am=None, n1=None, n2=None, strict=False):
        values = {name: symbol_or_value(v, name) for name, v in
                  (('a1', a1), ('a2', a2), ('a3', a3), ('am', am), ('n1', n1))}
        if not strict:
            values['n2'] = symbol_or_value(n2, 'n2')
            return cls('split', values, strict)
        # a1 a2 a3 am^2 = (n1 n2)^-1
        product = values['a1'] * values['a2'] * values['a3'] * values['am'] * values['am']
        expected = _inverse(values['n1'] * product, 'n1*am^2*a1*a2*a3')
        if n2 is None:
            values['n2'] = expected
        else:
            values['n2'] = symbol_or_value(n2, 'n2')
            if values['n2'] != expected:
                raise StrictModeViolation(
                    f"n2 = {values['n2']} but the central character forces {expected}")
        return cls('split', values, strict)

    @classmethod
    def from_text(cls, variant, text, strict=False):
        """Parse 'a=1, b=b*n1^2' style assignments; missing names stay symbolic"""
        assignments = {}
        for chunk in filter(None, (c.strip() for c in (text or '').split(','))):
            if '=' not in chunk:
                raise ValueError(f"expected name=value, got {chunk!r}")
            name, value = (s.strip() for s in chunk.split('=', 1))
            assignments[name] = value
        allowed = set(PARAMETERS.get(variant, ())) | {'n1', 'n2'}
        unknown = set(assignments) - allowed
        if unknown:
            raise ValueError(f"unknown Satake parameters for {variant}: {sorted(unknown)}")
        if variant == 'inert':
            return cls.inert(strict=strict, **assignments)
        if variant == 'ramified':
            return cls.ramified(strict=strict, **assignments)
        if variant == 'split':
            return cls.split(strict=strict, **assignments)
        raise WrongVariantError(f"unknown place variant {variant!r}")

    # ---------------------- CHECKS ---------------------- #
    def central_character_defect(self):
        """Zero exactly when the central character relation holds"""
        v = self.values
        if self.variant == 'split':
            return v['a1'] * v['a2'] * v['a3'] * v['am'] * v['am'] * v['n1'] * v['n2'] - 1
        return v['b'] * v['n1'] * v['n2'] - 1

    def is_compatible(self):
        return self.central_character_defect().is_zero()

    def require(self, variant):
        if self.variant != variant:
            raise WrongVariantError(f"expected a {variant} place, got {self.variant}")
        return self

    def constrained(self):
        """Strict copy: b (inert, ramified) or n2 (split) eliminated through the central character"""
        v = self.values
        if self.variant == 'split':
            return SatakeData.split(v['a1'], v['a2'], v['a3'], v['am'], v['n1'], strict=True)
        return SatakeData._with_eta(self.variant, v['a'], None, v['n1'], v['n2'], True)

    def with_values(self, **changes):
        values = dict(self.values)
        values.update({k: LaurentPoly.coerce(v) for k, v in changes.items()})
        return SatakeData(self.variant, values, self.strict)

    def to_dict(self):
        return {
            'variant': self.variant,
            'strict': self.strict,
            'values': {k: str(v) for k, v in self.values.items()},
        }


@dataclass(frozen=True)
class Partition3:
    parts: tuple

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if len(parts) != 3 or not parts[0] >= parts[1] >= parts[2]:
            raise ValueError(f"{self.parts} is not a weakly decreasing triple")
        object.__setattr__(self, 'parts', parts)

    @classmethod
    def from_fundamental(cls, m1, m2, m3):
        """Highest weight with fundamental-weight coordinates [m1, m2, m3]"""
        return cls((m1 + m2 + m3, m2 + m3, m3))

    def shift(self):
        """(partition with last part 0, c) with self = shifted - c*(1,1,1)"""
        c = self.parts[2]
        return Partition3(tuple(x - c for x in self.parts)), c


FINE_KINDS = ('two_factor', 'one_factor', 'supercuspidal')
ONE_FACTOR_SUBCASES = ('steinberg', 'nonDS')


@dataclass
class FineSplitCase:
    """Case data for ramified representations at a split place"""
    kind: str
    conductor: int = 1
    a1: Optional[LaurentPoly] = None
    a2: Optional[LaurentPoly] = None
    subcase: Optional[str] = None
    beta: Optional[LaurentPoly] = None
    am: Optional[LaurentPoly] = None
    n1: Optional[LaurentPoly] = None

    def __post_init__(self):
        if self.kind not in FINE_KINDS:
            raise CaseDataError(f"unknown case {self.kind!r}")
        if int(self.conductor) < 1:
            raise CaseDataError("conductor must be at least 1")
        self.am = symbol_or_value(self.am, 'am')
        self.n1 = symbol_or_value(self.n1, 'n1')
        if self.kind in ('two_factor', 'one_factor'):
            self.a1 = symbol_or_value(self.a1, 'a1')
        if self.kind == 'two_factor':
            self.a2 = symbol_or_value(self.a2, 'a2')
        if self.kind == 'one_factor':
            if self.subcase not in ONE_FACTOR_SUBCASES:
                raise CaseDataError(f"one_factor needs subcase in {ONE_FACTOR_SUBCASES}")
            if self.subcase == 'nonDS':
                self.beta = symbol_or_value(self.beta, 'beta')
            elif self.beta is not None:
                raise CaseDataError("beta only belongs to the non discrete series subcase")
        elif self.subcase is not None:
            raise CaseDataError(f"{self.kind} takes no subcase")

    @property
    def twist(self):
        return self.am * self.n1

    def to_dict(self):
        return {
            'kind': self.kind,
            'conductor': self.conductor,
            'subcase': self.subcase,
            'a1': None if self.a1 is None else str(self.a1),
            'a2': None if self.a2 is None else str(self.a2),
            'beta': None if self.beta is None else str(self.beta),
            'am': str(self.am),
            'n1': str(self.n1),
        }
