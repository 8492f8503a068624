# models/hecke.py
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from .quadfield import Matrix3E, LocalPlace


@dataclass(frozen=True)
class CosetRep:
    """Left K-coset representative g with its label, e.g. ('M', x, y) or ('anti',)"""
    g: Matrix3E
    label: tuple
    place: LocalPlace

    @property
    def label_text(self):
        if self.label and self.label[0] == 'M':
            return f"M({self.label[1]},{self.label[2]})*tau"
        return "*".join(str(x) for x in self.label)

    def __mul__(self, other):
        return CosetRep(self.g * other.g, self.label + other.label, self.place)

    def to_dict(self):
        return {'label': self.label_text, 'matrix': self.g.to_dict()}


@dataclass
class HeckeElement:
    """Formal combination of double cosets at one prime, kept as its signed left-coset list"""
    place: LocalPlace
    terms: Dict[str, int] = field(default_factory=dict)
    cosets: List[Tuple[int, CosetRep]] = field(default_factory=list)

    @classmethod
    def identity(cls, place):
        rep = CosetRep(Matrix3E.identity(place.D), ('1',), place)
        return cls(place, {'K': 1}, [(1, rep)])

    def mass(self):
        """mu(xi): signed count of left cosets"""
        return sum(n for n, _ in self.cosets)

    def is_empty(self):
        return not self.cosets

    def __add__(self, other):
        terms = dict(self.terms)
        for label, n in other.terms.items():
            terms[label] = terms.get(label, 0) + n
        return HeckeElement(self.place, {k: v for k, v in terms.items() if v},
                            list(self.cosets) + list(other.cosets))

    def __rmul__(self, scalar):
        return HeckeElement(self.place, {k: scalar * v for k, v in self.terms.items() if scalar * v},
                            [(scalar * n, rep) for n, rep in self.cosets if scalar * n])

    def __neg__(self):
        return (-1) * self

    def __sub__(self, other):
        return self + (-other)

    def to_dict(self):
        return {
            'place': self.place.to_dict(),
            'terms': dict(self.terms),
            'mass': self.mass(),
            'cosets': [{'coefficient': n, **rep.to_dict()} for n, rep in self.cosets],
        }
