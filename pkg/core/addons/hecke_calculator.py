# addons/hecke_calculator.py
from fractions import Fraction
from itertools import combinations
import logging

from ..models.quadfield import (
    FieldElem, Matrix3E, LocalPlace, hermitian_form, local_valuation, similitude, unipotent, vp,
)
from ..models.hecke import CosetRep, HeckeElement
from ..models.symlaurent import LaurentPoly
from .errors import NotRamifiedError, IwasawaFormError, LabError

logger = logging.getLogger(__name__)


class HeckeCalculator:
    """Left coset representatives of K tau K at a ramified prime and their action on characters"""

    @staticmethod
    def torus_generator(D, power=1):
        """tau = diag(delta, 1, -delta^-1), a similitude of J with mu = 1"""
        delta = FieldElem(0, 1, D)
        return Matrix3E.diag((delta ** power, 1, (-delta.inverse()) ** power), D)

    @classmethod
    def ramified_place(cls, p, D):
        if p == 2:
            raise NotRamifiedError("the coset list is only built at odd primes")
        place = LocalPlace.of(p, D)
        if not place.is_ramified:
            raise NotRamifiedError(f"{p} is {place.behavior} in Q(sqrt(-{D}))",
                                   details=place.to_dict())
        return place

    @classmethod
    def mab_representatives(cls, p, D):
        """M(x, y) tau for x, y in 0..p-1, then tau^-1"""
        place = cls.ramified_place(p, D)
        tau = cls.torus_generator(D)
        reps = [
            CosetRep(unipotent(x, y, D) * tau, ('M', x, y), place)
            for x in range(p) for y in range(p)
        ]
        reps.append(CosetRep(cls.torus_generator(D, -1), ('anti',), place))
        return reps

    @classmethod
    def in_K(cls, g, place):
        J = hermitian_form(place.D)
        mu = similitude(g, J)
        if mu is None or vp(mu, place.p) != 0:
            return False
        inverse = g.inverse()
        return all(local_valuation(x, place) >= 0 for x in g.entries() + inverse.entries())

    @classmethod
    def pairwise_distinct(cls, reps):
        for a, b in combinations(reps, 2):
            if cls.in_K(a.g.inverse() * b.g, a.place):
                logger.info(f"{a.label_text} and {b.label_text} lie in the same left coset")
                return False
        return True

    @classmethod
    def smith_valuations(cls, g, place):
        """Elementary divisor valuations over the local ring, from determinantal divisors"""
        m1 = min(local_valuation(x, place) for x in g.entries())
        m2 = min(local_valuation(g.minor(i, j), place) for i in range(3) for j in range(3))
        m3 = local_valuation(g.det(), place)
        return (m1, m2 - m1, m3 - m2)

    @classmethod
    def membership_consistent(cls, rep):
        """Necessary conditions for rep in K tau K: Smith valuations and a unit similitude"""
        place = rep.place
        mu = similitude(rep.g, hermitian_form(place.D))
        if mu is None or vp(mu, place.p) != 0:
            return False
        return cls.smith_valuations(rep.g, place) == cls.smith_valuations(cls.torus_generator(place.D), place)

    @classmethod
    def iwasawa_exponent(cls, rep):
        """e with rep = u tau^e and u upper unipotent"""
        g, place = rep.g, rep.place
        D = place.D
        if any(not g[i, j].is_zero() for i in range(3) for j in range(i)):
            raise IwasawaFormError(f"{rep.label_text} is not upper triangular")
        e = local_valuation(g[0, 0], place)
        torus = cls.torus_generator(D, e)
        if any(g[i, i] != torus[i, i] for i in range(3)):
            raise IwasawaFormError(f"torus part of {rep.label_text} is not a power of tau")
        return e

    # ---------------------- ELEMENTS ---------------------- #
    @classmethod
    def mab_element(cls, p, D):
        reps = cls.mab_representatives(p, D)
        return HeckeElement(reps[0].place, {'KtauK': 1}, [(1, rep) for rep in reps])

    @classmethod
    def annihilator(cls, h):
        """xi - mu(xi) 1_K"""
        return h - h.mass() * HeckeElement.identity(h.place)

    @classmethod
    def convolve(cls, h1, h2):
        """Product of left-coset lists; u t u' t' = u (t u' t^-1) t t' stays in Iwasawa form"""
        terms = {f"{a}*{b}": m * n for a, m in h1.terms.items() for b, n in h2.terms.items()}
        cosets = [(m * n, r1 * r2) for m, r1 in h1.cosets for n, r2 in h2.cosets]
        return HeckeElement(h1.place, terms, cosets)

    @classmethod
    def eigenvalue(cls, h, c=None):
        """sum n_alpha chi(t_alpha) for the unramified character with chi(tau) = c"""
        c = LaurentPoly.var('c') if c is None else c
        if isinstance(c, LaurentPoly):
            total = LaurentPoly()
            for n, rep in h.cosets:
                total = total + n * c ** cls.iwasawa_exponent(rep)
            return total
        c = Fraction(c)
        if c == 0:
            raise LabError("character values are nonzero")
        return sum((n * c ** cls.iwasawa_exponent(rep) for n, rep in h.cosets), Fraction(0))

    @classmethod
    def testvector_support_check(cls, h, k_max, seed=(0, 0)):
        """
        Solve up L_k = c L_k-1 - down L_k-2 for L_k = Lambda(tau^k v), symbolic in the character value c,
        starting from (L_-1, L_0) = seed. A step is forced only when L_k comes out identically zero.
        """
        up = sum(n for n, rep in h.cosets if cls.iwasawa_exponent(rep) == 1)
        down = sum(n for n, rep in h.cosets if cls.iwasawa_exponent(rep) == -1)
        report = {'up': up, 'down': down, 'seed': [str(v) for v in seed],
                  'steps': [], 'vanishing': [], 'contradiction': False}
        if h.is_empty() or up == 0:
            return report
        c = LaurentPoly.var('c')
        before, last = (LaurentPoly.coerce(Fraction(v)) for v in seed)
        for k in range(1, k_max + 1):
            value = (c * last - before * down) * Fraction(1, up)
            report['steps'].append({
                'k': k,
                'relation': f"{up}*L[{k}] = c*L[{k - 1}] - {down}*L[{k - 2}]",
                'value': str(value),
                'forced_zero': value.is_zero(),
            })
            if value.is_zero():
                report['vanishing'].append(k)
            before, last = last, value
        report['contradiction'] = report['vanishing'] == list(range(1, k_max + 1))
        return report

    @classmethod
    def transform_ledger(cls, ledger, h, characters):
        """Entries over global cusp j scaled by the eigenvalue of h on chi_j"""
        factors = {}
        for j, value in characters.items():
            factor = cls.eigenvalue(h, value)
            if factor.denominator != 1:
                raise LabError(f"eigenvalue {factor} at cusp {j} is not an integer")
            factors[j] = int(factor)
        return ledger.scaled(factors)

    @classmethod
    def cosets_report(cls, p, D):
        reps = cls.mab_representatives(p, D)
        h = cls.mab_element(p, D)
        return {
            'p': p,
            'D': D,
            'count': len(reps),
            'expected': p * p + 1,
            'distinct': cls.pairwise_distinct(reps),
            'smith_consistent': all(cls.membership_consistent(rep) for rep in reps),
            'mass': h.mass(),
            'eigenvalue_trivial': str(cls.eigenvalue(h, 1)),
            'annihilator_trivial': str(cls.eigenvalue(cls.annihilator(h), 1)),
            'eigenvalue_symbolic': str(cls.eigenvalue(h)),
            'representatives': [rep.to_dict() for rep in reps],
        }
