# addons/analytic_calculator.py
from fractions import Fraction
from math import floor
import logging

from mpmath import mp, mpf, mpc, mpmathify
from mpmath import besselk, euler, exp, expjpi, fabs, gamma, gammainc, log, pi, quad, sqrt, whitw, zeta
from sympy import divisors, factorint
from sympy.ntheory import mobius

from ..models.analytic import DEFAULT_PRECISION, ResidueVector, SchwartzFiniteLevel, to_mpf, units
from .errors import (
    PrecisionUnreachable, DivergentConfiguration, QuadratureError, PoleProximityError, NotPositiveError, LabError,
)

logger = logging.getLogger(__name__)


def _bernoulli2(x):
    return x * x - x + mpf(1) / 6


def _frac(q):
    return q - floor(q)


class AnalyticCalculator:
    """Eisenstein series by theta integrals, Kronecker limit formulas, W00 and archimedean factors"""

    # distance to s = 0 / s = 1 below which the unsubtracted series is refused
    POLE_DISTANCE = mpf('1e-6')
    # Gamma_C pole guard
    GAMMA_POLE_DISTANCE = mpf('1e-20')
    MAX_RADIUS = 200
    MAX_PRODUCT_TERMS = 200000
    # W00(y) below e^-(y/2) with y past this is reported as 0
    W00_UNDERFLOW_Y = 10 ** 8
    # split point of the dual expansion, different from 1 so the two sides do not share terms
    DUAL_SPLIT = Fraction(5, 4)
    GUARD_DIGITS = 10

    @classmethod
    def _budget(cls):
        """-log of the per-term cutoff at the current working precision"""
        return (mp.dps + cls.GUARD_DIGITS) * log(10)

    # ---------------------- THETA SUMS ---------------------- #
    @classmethod
    def _form(cls, z):
        """Q0(v) = |v1 z + v2|^2 / y and its least eigenvalue (the form has determinant 1)"""
        x, y = z.real, z.imag
        trace = (x * x + y * y + 1) / y
        least = (trace - sqrt(trace * trace - 4)) / 2
        return x, y, least

    @classmethod
    def _box(cls, least, t0, shift):
        budget = cls._budget()
        radius = sqrt(budget / (pi * t0 * least)) + 2
        if radius > cls.MAX_RADIUS:
            achieved = exp(-pi * t0 * least * cls.MAX_RADIUS ** 2)
            raise PrecisionUnreachable(
                f"theta sum needs radius {float(radius):.1f} > {cls.MAX_RADIUS}", achieved_bound=float(achieved))
        lo, hi = int(mp.floor(-radius - shift)), int(mp.ceil(radius - shift))
        return range(lo, hi + 1), budget

    @classmethod
    def _theta_part(cls, z, w0, s, t0):
        """sum over v in Z^2 + w0, v != 0, of (pi Q0(v))^-s Gamma(s, pi t0 Q0(v))"""
        x, y, least = cls._form(z)
        alpha, beta = to_mpf(w0[0]), to_mpf(w0[1])
        rows, budget = cls._box(least, t0, alpha)
        cols, _ = cls._box(least, t0, beta)
        total = mpc(0)
        for k1 in rows:
            v1 = k1 + alpha
            for k2 in cols:
                v2 = k2 + beta
                if v1 == 0 and v2 == 0:
                    continue
                q = ((v1 * x + v2) ** 2 + (v1 * y) ** 2) / y
                if pi * t0 * q > budget:
                    continue
                total += (pi * q) ** (-s) * gammainc(s, pi * q * t0)
        return total

    @classmethod
    def _dual_part(cls, z, w0, s, t0):
        """sum over l in Z^2, l != 0, of e(l.w0) (pi c_l)^-s Gamma(s, pi t0 c_l), c_l = |l2 z - l1|^2 / y"""
        x, y, least = cls._form(z)
        alpha, beta = to_mpf(w0[0]), to_mpf(w0[1])
        rows, budget = cls._box(least, t0, 0)
        total = mpc(0)
        for l1 in rows:
            for l2 in rows:
                if l1 == 0 and l2 == 0:
                    continue
                c = ((l2 * x - l1) ** 2 + (l2 * y) ** 2) / y
                if pi * t0 * c > budget:
                    continue
                phase = expjpi(2 * (l1 * alpha + l2 * beta))
                total += phase * (pi * c) ** (-s) * gammainc(s, pi * c * t0)
        return total

    # ---------------------- EISENSTEIN SERIES ---------------------- #
    @classmethod
    def _check_poles(cls, s, rv, subtract_pole):
        if subtract_pole != 1 and fabs(s - 1) < cls.POLE_DISTANCE:
            raise PoleProximityError(f"s = {s} is within {cls.POLE_DISTANCE} of the pole at 1")
        if rv.is_zero and subtract_pole != 0 and fabs(s) < cls.POLE_DISTANCE:
            raise PoleProximityError(f"s = {s} is within {cls.POLE_DISTANCE} of the pole at 0")

    @classmethod
    def eisenstein(cls, z, s, rv, subtract_pole=None, split=1):
        """
        E_{w,N}(z, s) = Gamma_R(2s) sum over (m, n) = w mod N of y^s / |mz + n|^2s, continued through

            N^2s E = sum_v (pi Q)^-s Gamma(s, pi t0 Q) + sum_l e(l.w0) (pi c)^(s-1) Gamma(1-s, pi c / t0)
                     - t0^(s-1) / (1 - s) - [w = 0] t0^s / s

        subtract_pole = 0 returns E + 1/s (level one, w = 0); subtract_pole = 1 returns E - N^-2 / (s - 1).
        """
        if subtract_pole not in (None, 0, 1):
            raise LabError(f"subtract_pole must be None, 0 or 1, got {subtract_pole!r}")
        with mp.workdps(z.precision):
            s = mpmathify(s)
            cls._check_poles(s, rv, subtract_pole)
            t0 = to_mpf(Fraction(split))
            zc, N, w0 = z.z, mpf(rv.N), rv.w0
            scale = N ** (-2 * s)
            body = cls._theta_part(zc, w0, s, t0) + cls._dual_part(zc, w0, 1 - s, 1 / t0)
            value = scale * body

            if subtract_pole == 1:
                value += (N ** -2 * (log(t0) - 2 * log(N)) if s == 1
                          else (scale * t0 ** (s - 1) - N ** -2) / (s - 1))
            else:
                value += scale * t0 ** (s - 1) / (s - 1)

            if rv.is_zero:
                if subtract_pole == 0:
                    value += 2 * log(N) - log(t0) if s == 0 else (1 - scale * t0 ** s) / s
                else:
                    value -= scale * t0 ** s / s
            return +value

    @classmethod
    def eisenstein_dual(cls, z, s, rv, split=None):
        """
        Dual series E^(z, s) = Gamma_R(2s) sum over l != 0 of e(l.w0) y^s / |l2 z - l1|^2s, by its own
        theta expansion split at t0.
        """
        split = cls.DUAL_SPLIT if split is None else Fraction(split)
        with mp.workdps(z.precision):
            s = mpmathify(s)
            if fabs(s) < cls.POLE_DISTANCE or (rv.is_zero and fabs(s - 1) < cls.POLE_DISTANCE):
                raise PoleProximityError(f"dual series has a pole near s = {s}")
            t0 = to_mpf(split)
            zc, w0 = z.z, rv.w0
            value = cls._dual_part(zc, w0, s, t0) + cls._theta_part(zc, w0, 1 - s, 1 / t0)
            value -= t0 ** s / s
            if rv.is_zero:
                value -= t0 ** (s - 1) / (1 - s)
            return +value

    @classmethod
    def functional_equation_residual(cls, z, s, rv):
        """|N^2s E(z, s) - E^(z, 1 - s)|"""
        with mp.workdps(z.precision):
            s = mpmathify(s)
            lhs = mpf(rv.N) ** (2 * s) * cls.eisenstein(z, s, rv)
            rhs = cls.eisenstein_dual(z, 1 - s, rv)
            return fabs(lhs - rhs)

    @classmethod
    def eisenstein_lattice_sum(cls, z, s, rv):
        """Direct lattice sum for Re(s) > 1, summed row by row: Hurwitz zeta for the constant terms, K-Bessel for the rest"""
        with mp.workdps(z.precision):
            s = mpmathify(s)
            if s.real <= 1:
                raise DivergentConfiguration(f"the lattice sum diverges at Re(s) = {s.real}")
            x, y = to_mpf(z.x), to_mpf(z.y)
            alpha, beta = (to_mpf(_frac(w)) for w in rv.w0)

            total = mpc(0)
            if alpha == 0:
                total += 2 * zeta(2 * s) if beta == 0 else zeta(2 * s, beta) + zeta(2 * s, 1 - beta)
                rows = 2 * zeta(2 * s - 1)
            else:
                rows = zeta(2 * s - 1, alpha) + zeta(2 * s - 1, 1 - alpha)
            total += sqrt(pi) * gamma(s - mpf(1) / 2) / gamma(s) * y ** (1 - 2 * s) * rows

            nu = s - mpf(1) / 2
            reach = cls._budget() / (2 * pi * y) + 2
            bessel = mpc(0)
            for k in range(-int(mp.ceil(reach + alpha)), int(mp.ceil(reach)) + 1):
                m = k + alpha
                if m == 0:
                    continue
                c = fabs(m) * y
                theta = beta + m * x
                inner = mpc(0)
                for l in range(1, int(reach / fabs(m)) + 2):
                    inner += 2 * mpf(l) ** nu * besselk(nu, 2 * pi * l * c) * mp.cos(2 * pi * l * theta)
                bessel += c ** (-nu) * inner
            total += 2 * pi ** s / gamma(s) * bessel
            value = mpf(rv.N) ** (-2 * s) * pi ** (-s) * gamma(s) * y ** s * total
            return +value

    # ---------------------- FINITE LEVEL ---------------------- #
    @classmethod
    def c_coefficient(cls, phi, eta, mn):
        """(1 / |(Z/N)^x|) sum over units r of eta(r) phi(r m, r n)"""
        N = phi.N
        rs = units(N)
        m, n = mn
        total = 0
        for r in rs:
            weight = 1 if eta is None else (eta(r) if callable(eta) else eta[r])
            total += weight * phi(r * m, r * n)
        return total / len(rs) if isinstance(total, (mpf, mpc, complex, float)) else Fraction(total, len(rs))

    @classmethod
    def adelic_eisenstein(cls, z, s, phi, eta=None, subtract_pole=None):
        """sum over w in (Z/N)^2 of c(phi, eta, w) E_{w,N}(z, s)"""
        N = phi.N
        with mp.workdps(z.precision):
            total = mpc(0)
            for m in range(N):
                for n in range(N):
                    c = cls.c_coefficient(phi, eta, (m, n))
                    if not c:
                        continue
                    rv = ResidueVector(N, m, n)
                    coefficient = to_mpf(c) if isinstance(c, Fraction) else c
                    total += coefficient * cls.eisenstein(z, s, rv, subtract_pole=subtract_pole if rv.is_zero else None)
            return +total

    @classmethod
    def level1_from_divisors(cls, z, N, s):
        """N^-s sum over d | N of mu(d) d^-s E(Nz/d, s)"""
        level1 = ResidueVector(1, 0, 0)
        with mp.workdps(z.precision):
            s = mpmathify(s)
            total = mpc(0)
            for d in divisors(N):
                mu = int(mobius(d))
                if mu:
                    total += mu * mpf(d) ** (-s) * cls.eisenstein(z.scale(Fraction(N, d)), s, level1)
            return mpf(N) ** (-s) * total

    @classmethod
    def level1_to_N_residual(cls, z, N, s=Fraction(13, 10)):
        with mp.workdps(z.precision):
            s = mpmathify(s) if not isinstance(s, Fraction) else to_mpf(s)
            adelic = cls.adelic_eisenstein(z, s, SchwartzFiniteLevel.phi_N(N))
            return fabs(adelic - cls.level1_from_divisors(z, N, s))

    # ---------------------- SIEGEL UNITS AND DELTA ---------------------- #
    @classmethod
    def _product_terms(cls, y, alpha=0):
        terms = int(mp.ceil(cls._budget() / (2 * pi * y) + alpha)) + 1
        if terms > cls.MAX_PRODUCT_TERMS:
            raise DivergentConfiguration(f"q-product needs {terms} factors at y = {y}")
        return terms

    @classmethod
    def siegel_logabs(cls, z, alpha, beta):
        """log|g_(alpha, beta)(z)| with q_z = e(alpha z + beta), alpha reduced into [0, 1)"""
        alpha, beta = _frac(Fraction(alpha)), _frac(Fraction(beta))
        if alpha == 0 and beta == 0:
            raise DivergentConfiguration("(alpha, beta) lies in Z^2; the Siegel unit is not defined")
        with mp.workdps(z.precision):
            zc, y = z.z, to_mpf(z.y)
            a, b = to_mpf(alpha), to_mpf(beta)
            q = expjpi(2 * zc)
            qz = expjpi(2 * (a * zc + b))
            value = -pi * y * _bernoulli2(a) + log(fabs(1 - qz))
            qn = mpc(1)
            for _ in range(cls._product_terms(y, a)):
                qn *= q
                value += log(fabs(1 - qn * qz)) + log(fabs(1 - qn / qz))
            return +value

    @classmethod
    def klf_residual(cls, z, rv):
        """|E_{w,N}(z, 0) + 2 log|g_w0(z)||"""
        if rv.is_zero:
            raise DivergentConfiguration("the limit formula needs a nonzero residue vector")
        with mp.workdps(z.precision):
            return fabs(cls.eisenstein(z, 0, rv) + 2 * cls.siegel_logabs(z, *rv.w0))

    @classmethod
    def delta_logabs(cls, z):
        """log|Delta(z)| = log|q| + 24 sum log|1 - q^n|"""
        with mp.workdps(z.precision):
            zc, y = z.z, to_mpf(z.y)
            q = expjpi(2 * zc)
            value = -2 * pi * y
            qn = mpc(1)
            for _ in range(cls._product_terms(y)):
                qn *= q
                value += 24 * log(fabs(1 - qn))
            return +value

    @classmethod
    def deltaN_logabs(cls, z, N):
        with mp.workdps(z.precision):
            total = mpf(0)
            for d in divisors(N):
                mu = int(mobius(d))
                if mu:
                    total += mu * cls.delta_logabs(z.scale(Fraction(N, d)))
            return total

    # ---------------------- GAMMA_0(N) LIMIT FORMULAS ---------------------- #
    @classmethod
    def gamma0_case(cls, N):
        if N == 1:
            return 1
        return 2 if len(factorint(N)) == 1 else 3

    @classmethod
    def phi_N_at_zero(cls, z, N, method='level1'):
        """
        E(z, Phi_N, 0). 'level1' expands N^-s d^-s (-1/s + E~(Nz/d)) at s = 0 with the
        pole-subtracted level-one series E~ = E + 1/s; 'direct' sums E_{(0,n),N}(z, 0) over units n.
        """
        level1 = ResidueVector(1, 0, 0)
        with mp.workdps(z.precision):
            if method == 'direct':
                if N == 1:
                    raise PoleProximityError("the level-one series has a pole at s = 0")
                return cls.adelic_eisenstein(z, 0, SchwartzFiniteLevel.phi_N(N)).real
            if method != 'level1':
                raise LabError(f"unknown method {method!r}")
            total = mpf(0)
            for d in divisors(N):
                mu = int(mobius(d))
                if mu:
                    reg = cls.eisenstein(z.scale(Fraction(N, d)), 0, level1, subtract_pole=0).real
                    total += mu * (reg + log(mpf(N * d)))
            return total

    @classmethod
    def gamma0_constant(cls, z, N):
        """Right-hand side of the limit formula for Gamma_0(N) in each of the three cases"""
        with mp.workdps(z.precision):
            case = cls.gamma0_case(N)
            if case == 1:
                y = to_mpf(z.y)
                return (euler - log(4 * pi)) - (6 * log(y) + cls.delta_logabs(z)) / 6
            tail = -cls.deltaN_logabs(z, N) / 6
            if case == 2:
                p = next(iter(factorint(N)))
                return -2 * log(p) + tail
            return tail

    @classmethod
    def _gamma0_log_term(cls, z, N):
        if N == 1:
            return 6 * log(to_mpf(z.y)) + cls.delta_logabs(z)
        return cls.deltaN_logabs(z, N)

    @classmethod
    def gamma0_klf_residual(cls, z, N, mode='absolute', z2=None):
        with mp.workdps(z.precision):
            if mode == 'absolute':
                return fabs(cls.phi_N_at_zero(z, N) - cls.gamma0_constant(z, N))
            if mode != 'difference':
                raise LabError(f"unknown mode {mode!r}")
            if z2 is None:
                raise LabError("difference mode needs a second point")
            lhs = cls.phi_N_at_zero(z, N) - cls.phi_N_at_zero(z2, N)
            rhs = (cls._gamma0_log_term(z, N) - cls._gamma0_log_term(z2, N)) / 6
            return fabs(lhs + rhs)

    # ---------------------- WHITTAKER FUNCTION ---------------------- #
    @classmethod
    def w00_underflows(cls, y):
        return y > cls.W00_UNDERFLOW_Y

    @classmethod
    def whittaker_w00(cls, y, precision=DEFAULT_PRECISION):
        """W_{0,0}(y) = sqrt(y / pi) K_0(y / 2)"""
        with mp.workdps(precision):
            y = mpmathify(y)
            if y <= 0:
                raise NotPositiveError(f"W00 needs y > 0, got {y}")
            if cls.w00_underflows(y):
                logger.warning(f"W00({y}) is below the representable range, returning 0")
                return mpf(0)
            return +(sqrt(y / pi) * besselk(0, y / 2))

    @classmethod
    def whittaker_w00_oracle(cls, y, method='integral', precision=DEFAULT_PRECISION):
        """W00 by the confluent-hypergeometric routine or by quadrature of its integral representation"""
        with mp.workdps(precision):
            y = mpmathify(y)
            if method == 'whitw':
                return +whitw(0, 0, y)
            if method != 'integral':
                raise LabError(f"unknown method {method!r}")
            integral = quad(lambda t: exp(-y * t) / sqrt(t * (1 + t)), [0, 1, mp.inf])
            return sqrt(y / pi) * exp(-y / 2) * integral

    # ---------------------- MELLIN IDENTITY ---------------------- #
    @classmethod
    def b_of(cls, D):
        """b = 32 pi^2 D^(-3/2)"""
        return 32 * pi ** 2 * mpf(D) ** (-mpf(3) / 2)

    @classmethod
    def ko_kappa(cls, b):
        return 4 * sqrt(2 * sqrt(b) / pi) / b ** 2

    @classmethod
    def ko_closed_form(cls, s, b, precision=DEFAULT_PRECISION):
        with mp.workdps(precision):
            s, b = mpmathify(s), mpmathify(b)
            return cls.ko_kappa(b) * (sqrt(b) / 2) ** (-s) * gamma(s / 2 + 2) ** 2

    @classmethod
    def ko_integral(cls, s, b, precision=DEFAULT_PRECISION):
        """integral over t > 0 of t^(7/2) W00(2 sqrt(b) t) t^s dt/t"""
        with mp.workdps(precision):
            s, b = mpmathify(s), mpmathify(b)
            if s.real <= -4:
                raise DivergentConfiguration(f"Mellin integral diverges at Re(s) = {s.real}")
            root = sqrt(b)

            def integrand(t):
                return t ** (s + mpf(5) / 2) * sqrt(2 * root * t / pi) * besselk(0, root * t)

            value, error = quad(integrand, [0, 1 / root, 10 / root, mp.inf], error=True)
            if error > mpf(10) ** (-(precision // 3)) * max(1, fabs(value)):
                raise QuadratureError(f"quadrature error estimate {error} at s = {s}",
                                      details={'s': str(s), 'error': str(error)})
            return value

    @classmethod
    def ko_mellin_residual(cls, s, b=None, D=3, precision=DEFAULT_PRECISION):
        """Relative difference between the quadrature and the closed form"""
        with mp.workdps(precision):
            b = cls.b_of(D) if b is None else mpmathify(b)
            closed = cls.ko_closed_form(s, b, precision)
            return fabs(cls.ko_integral(s, b, precision) - closed) / fabs(closed)

    # ---------------------- ARCHIMEDEAN FACTOR ---------------------- #
    @classmethod
    def gamma_c(cls, s, precision=DEFAULT_PRECISION):
        """Gamma_C(s) = 2 (2 pi)^-s Gamma(s)"""
        with mp.workdps(precision):
            s = mpmathify(s)
            n = mp.nint(s.real)
            if n <= 0 and fabs(s - n) < cls.GAMMA_POLE_DISTANCE:
                raise PoleProximityError(f"Gamma_C has a pole at s = {int(n)}")
            return 2 * (2 * pi) ** (-s) * gamma(s)

    @classmethod
    def gamma_c_residues(cls, k_max=6, precision=DEFAULT_PRECISION):
        """|s Gamma_C(s) - 2| on s = 10^-k; the residue at 0 is 2"""
        with mp.workdps(precision):
            return [fabs(mpf(10) ** -k * cls.gamma_c(mpf(10) ** -k, precision) - 2) for k in range(1, k_max + 1)]

    @classmethod
    def _w00_at_cusp(cls, D, precision):
        return cls.whittaker_w00(2 * sqrt(cls.b_of(D)), precision)

    @classmethod
    def arch_factor(cls, s, D, precision=DEFAULT_PRECISION):
        """8i W00(8 sqrt2 pi D^-3/4)^-1 pi^4 D^((3s-3)/2) Gamma_C(s) Gamma_C(s+1)^2"""
        with mp.workdps(precision):
            s = mpmathify(s)
            w = cls._w00_at_cusp(D, precision)
            return (8j / w * pi ** 4 * mpf(D) ** ((3 * s - 3) / 2)
                    * cls.gamma_c(s, precision) * cls.gamma_c(s + 1, precision) ** 2)

    @classmethod
    def assemble_rhs(cls, D, alphas, lprime, whittaker=1, completed=False, precision=DEFAULT_PRECISION):
        """
        Value at s = 0 of W I_inf(s) prod(1 - alpha_p p^-s) L(s) for L vanishing to first order.
        completed=True gives W 8i W00^-1 pi^4 D^-3/2 prod(1 - alpha_p) L'(0); otherwise the
        Gamma_C factors are resolved (s Gamma_C(s) -> 2, Gamma_C(1)^2 = pi^-2).
        """
        with mp.workdps(precision):
            euler_part = mpc(1)
            for a in alphas:
                euler_part *= 1 - mpmathify(a)
            w = cls._w00_at_cusp(D, precision)
            value = (mpmathify(whittaker) * 8j / w * pi ** 4 * mpf(D) ** (-mpf(3) / 2)
                     * euler_part * mpmathify(lprime))
            if not completed:
                value *= 2 / pi ** 2
            return value

    @classmethod
    def assemble_limit_check(cls, D, alphas, lprime, whittaker=1, s='1e-12', precision=DEFAULT_PRECISION):
        """Compare the resolved limit with the archimedean factor at small s times L'(0) s"""
        with mp.workdps(precision):
            s = mpmathify(s)
            limit = cls.assemble_rhs(D, alphas, lprime, whittaker, False, precision)
            euler_part = mpc(1)
            for a in alphas:
                euler_part *= 1 - mpmathify(a)
            numeric = mpmathify(whittaker) * cls.arch_factor(s, D, precision) * euler_part * mpmathify(lprime) * s
            relative = fabs(numeric - limit) / fabs(limit) if limit else fabs(numeric)
            return {'s': s, 'limit': limit, 'numeric': numeric, 'relative': relative}
