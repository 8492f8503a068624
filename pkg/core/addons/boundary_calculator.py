# addons/boundary_calculator.py
from math import lcm
import logging

from ..models.quadfield import FieldElem, elem, hermitian_form, pairing, unipotent
from ..models.boundary import CoordBasis, UnipotentParam, LatticeE
from .errors import ShapeError, DegeneratePairingError, RankError, LabError

logger = logging.getLogger(__name__)


class BoundaryCalculator:
    """Unipotent parameters, period lattices, cusp coordinates and divisor ledgers at a cusp"""

    @classmethod
    def validate_basis(cls, basis, J=None):
        if not basis.is_valid(J):
            raise ShapeError("Gram matrix of the basis is not J", details=basis.to_dict())
        return basis

    @classmethod
    def in_basis(cls, gamma, basis):
        B = basis.matrix()
        return B.inverse() * gamma * B

    @classmethod
    def gamma_params(cls, gamma, basis=None):
        """(r, s) with gamma = [[1, conj(s) delta, r + s conj(s) delta / 2], [0, 1, s], [0, 0, 1]]"""
        D = gamma.D
        basis = basis or CoordBasis.standard(D)
        g = cls.in_basis(gamma, basis)
        delta = FieldElem(0, 1, D)
        one, zero = elem(1, D), elem(0, D)
        if any(g[i, i] != one for i in range(3)) or any(g[i, j] != zero for i in range(3) for j in range(i)):
            raise ShapeError("not upper unipotent in this basis", details={'matrix': g.to_dict()})
        s = g[1, 2]
        if g[0, 1] != s.conj() * delta:
            raise ShapeError("(1,2) entry is not conj(s) * delta", details={'matrix': g.to_dict()})
        r = g[0, 2] - s * s.conj() * delta / 2
        if not r.is_rational():
            raise ShapeError("corner entry gives an irrational r", details={'r': r.to_dict()})
        return UnipotentParam(r.a, s)

    @classmethod
    def rebuild(cls, params, basis=None):
        D = params.s.D
        basis = basis or CoordBasis.standard(D)
        B = basis.matrix()
        return B * unipotent(params.r, params.s, D) * B.inverse()

    @staticmethod
    def cross_term(s1, s2):
        """r(g1 g2) - r(g1) - r(g2) = delta (conj(s1) s2 - s1 conj(s2)) / 2"""
        delta = FieldElem(0, 1, s1.D)
        value = delta * (s1.conj() * s2 - s1 * s2.conj()) / 2
        return value.a

    @classmethod
    def lattice_from_generators(cls, params, D):
        return LatticeE.from_generators([p.s for p in params], D)

    @classmethod
    def cusp_image(cls, w, basis=None, J=None):
        """-<w, v3> / <w, v2>"""
        if basis is None:
            D = next((x.D for x in w if isinstance(x, FieldElem)), None)
            if D is None:
                raise LabError("cusp_image needs a basis or FieldElem coordinates")
            basis = CoordBasis.standard(D)
        J = J or hermitian_form(basis.D)
        denominator = pairing(w, basis.v2, J)
        if denominator.is_zero():
            raise DegeneratePairingError("<w, v2> = 0")
        return -pairing(w, basis.v3, J) / denominator

    @classmethod
    def translate_basis(cls, basis, shift):
        """Basis moved by the unipotent with s = -shift; cusp images move by +shift"""
        D = basis.D
        M = basis.matrix() * unipotent(0, -elem(shift, D), D)
        return CoordBasis.of(*([M[i, j] for i in range(3)] for j in range(3)), D)

    @classmethod
    def coordinate_change(cls, u, lattice, case, value):
        value = elem(value, lattice.D)
        if case == 'rescale':
            if value.is_zero():
                raise ValueError("rescale needs a nonzero element")
            factor = value / (value.conj() * value.conj())
            return factor * u, lattice.scale(factor)
        if case == 'translate':
            return u + value, lattice
        raise ValueError(f"unknown coordinate change {case!r}")

    @classmethod
    def torsion_order(cls, u, lattice):
        if lattice.rank < 2:
            raise RankError(f"torsion order needs a rank-2 lattice, got rank {lattice.rank}")
        x, y = lattice.coordinates(u)
        return lcm(x.denominator, y.denominator)

    # ---------------------- LEDGER ---------------------- #
    @classmethod
    def boundary_divisors(cls, ledger):
        """Per global cusp: the contributing entries and their total degree"""
        out = {}
        for curve, cusp, mult in ledger.entries:
            if (curve, cusp) not in ledger.pushforward:
                continue
            j = ledger.global_cusp(curve, cusp)
            bucket = out.setdefault(j, {'entries': [], 'degree': 0})
            bucket['entries'].append({'curve': curve, 'cusp': cusp, 'mult': mult})
            bucket['degree'] += mult
        return out

    @classmethod
    def ledger_check(cls, ledger):
        """Cusps without a global image are listed under 'unmapped' and fail the pushforward condition"""
        degrees = ledger.degrees()
        pushed = ledger.pushed_forward(skip_unmapped=True)
        unmapped = ledger.unmapped()
        if unmapped:
            logger.info(f"{len(unmapped)} cusps have no global image")
        return {
            'deg_per_curve': dict(degrees),
            'pushforward': dict(pushed),
            'unmapped': [{'curve': curve, 'cusp': cusp} for curve, cusp in unmapped],
            'ok_2a': all(d == 0 for d in degrees.values()),
            'ok_2b': not unmapped and all(d == 0 for d in pushed.values()),
        }

    @classmethod
    def torsion_report(cls, u, generators, D):
        lattice = LatticeE.from_generators(generators, D)
        return {
            'u': elem(u, D).to_dict(),
            'lattice': lattice.to_dict(),
            'torsion_order': cls.torsion_order(elem(u, D), lattice),
        }
