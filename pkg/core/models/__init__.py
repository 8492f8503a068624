# Value types shared by the calculators, the CLI and the controllers
from .quadfield import (
    Discriminant,
    FieldElem,
    Matrix3E,
    LocalPlace,
    hermitian_form,
    is_norm,
    find_norm_witness,
)
from .symlaurent import LaurentPoly, PowerSeries, RatFunc, parse_poly, reconstruct
from .satake import SatakeData, Partition3, FineSplitCase, VARIANTS
from .hecke import CosetRep, HeckeElement
from .boundary import CoordBasis, UnipotentParam, LatticeE, DivisorLedger
from .analytic import UHPoint, ResidueVector, SchwartzFiniteLevel

__all__ = [
    'Discriminant',
    'FieldElem',
    'Matrix3E',
    'LocalPlace',
    'hermitian_form',
    'is_norm',
    'find_norm_witness',
    'LaurentPoly',
    'PowerSeries',
    'RatFunc',
    'parse_poly',
    'reconstruct',
    'SatakeData',
    'Partition3',
    'FineSplitCase',
    'VARIANTS',
    'CosetRep',
    'HeckeElement',
    'CoordBasis',
    'UnipotentParam',
    'LatticeE',
    'DivisorLedger',
    'UHPoint',
    'ResidueVector',
    'SchwartzFiniteLevel',
]
