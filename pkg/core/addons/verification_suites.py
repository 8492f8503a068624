# addons/verification_suites.py
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
import logging
import random
import time

from mpmath import mp, mpf, pi, fabs

from ..models.quadfield import FieldElem, is_norm, find_norm_witness
from ..models.satake import SatakeData, FineSplitCase
from ..models.boundary import CoordBasis, UnipotentParam, LatticeE, DivisorLedger
from ..models.analytic import UHPoint, ResidueVector
from .localzeta_calculator import LocalZetaCalculator
from .hecke_calculator import HeckeCalculator
from .boundary_calculator import BoundaryCalculator
from .analytic_calculator import AnalyticCalculator
from .errors import LabError, UsageError

logger = logging.getLogger(__name__)

CSV_COLUMNS = ['suite', 'test', 'z', 's', 'N', 'w', 'residual', 'tolerance', 'passed', 'detail']

Z_GRID = ('i', '0.3+0.8i', '-0.25+2i')


def record(test, passed, residual=None, tolerance=None, **extra):
    out = {'test': test, 'passed': bool(passed), 'residual': residual, 'tolerance': tolerance}
    out.update(extra)
    return out


def residual_record(test, residual, tolerance, **extra):
    return record(test, residual <= tolerance, residual, tolerance, **extra)


def _small_rational(rng, bound=6, den=4):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, den))


def _small_elem(rng, D, nonzero=False):
    while True:
        x = FieldElem(_small_rational(rng), _small_rational(rng), D)
        if not nonzero or not x.is_zero():
            return x


class VerificationSuites:
    """The acceptance matrix: each suite returns a list of pass/fail records"""

    SUITES = ('inert', 'split', 'ramified', 'reconstruct', 'measure', 'hecke',
              'boundary', 'norm', 'klf', 'fe', 'gamma0', 'arch')

    KLF_TOLERANCE = mpf('1e-8')
    FE_TOLERANCE = mpf('1e-10')
    ORACLE_TOLERANCE = mpf('1e-12')
    LEVEL_TOLERANCE = mpf('1e-10')
    GAMMA0_TOLERANCE = mpf('1e-8')
    KO_TOLERANCE = mpf('1e-6')
    W00_TOLERANCE = mpf('1e-10')

    # ---------------------- LOCAL ZETA ---------------------- #
    @classmethod
    def suite_inert(cls, config):
        s = SatakeData.inert()
        check = LocalZetaCalculator.series_check(s, config.order_inert)
        specialized = LocalZetaCalculator.series_check(SatakeData.inert(a=2, n1=3, n2='n2'), config.order_inert)
        return [
            record('inert.series', check['equal'], detail=check),
            record('inert.series.specialized', specialized['equal'], detail=specialized),
            record('inert.degree', LocalZetaCalculator.degree_check(s)),
            record('inert.twist', LocalZetaCalculator.twist_check(s)),
        ]

    @classmethod
    def suite_split(cls, config):
        s = SatakeData.split()
        check = LocalZetaCalculator.series_check(s, config.order_split)
        out = [
            record('split.series', check['equal'], detail=check),
            record('split.pieri', LocalZetaCalculator.pieri_identity_check(10, 10)),
            record('split.degree', LocalZetaCalculator.degree_check(s)),
            record('split.twist', LocalZetaCalculator.twist_check(s)),
            record('split.series_twist', LocalZetaCalculator.split_series_twist_check(s, 6)),
        ]
        cases = [
            FineSplitCase('two_factor'),
            FineSplitCase('one_factor', subcase='steinberg'),
            FineSplitCase('one_factor', subcase='nonDS'),
            FineSplitCase('supercuspidal', conductor=2),
        ]
        for case in cases:
            name = case.kind if case.subcase is None else f"{case.kind}.{case.subcase}"
            alpha = LocalZetaCalculator.alpha_p(case)
            out.append(record(f'split.fine.{name}', LocalZetaCalculator.verify_alpha(case),
                              detail={'alpha': None if alpha is None else str(alpha)}))
        for p in config.primes:
            for n in (1, 2):
                value = LocalZetaCalculator.newvector_normalization(p, n)
                out.append(record(f'split.newvector.p{p}.n{n}', value == 1, detail={'value': value}))
        return out

    @classmethod
    def suite_ramified(cls, config):
        report = LocalZetaCalculator.ramified_identity(config.order_ramified)
        s = SatakeData.ramified()
        return [
            record('ramified.series', report['equal'], detail={'order': report['order'],
                                                               'first_mismatch': report['first_mismatch']}),
            record('ramified.unit_parameters', report['unit_parameters']),
            record('ramified.cancellation', report['cancellation']),
            record('ramified.shift', report['shift']),
            record('ramified.twist', report['twist']),
            record('ramified.degree', LocalZetaCalculator.degree_check(s)),
            record('ramified.standard_series', LocalZetaCalculator.series_check(s, config.order_ramified)['equal']),
        ]

    @classmethod
    def suite_reconstruct(cls, config):
        out = []
        for variant, data in (('inert', SatakeData.inert()), ('split', SatakeData.split()),
                              ('ramified', SatakeData.ramified())):
            check = LocalZetaCalculator.reconstruct_check(data, config.order_for(variant))
            ok = check['recovered'] and check['surplus'] >= LocalZetaCalculator.MIN_SURPLUS
            out.append(record(f'reconstruct.{variant}', ok, detail={'order': check['order'],
                                                                    'surplus': check['surplus']}))
        return out

    @classmethod
    def suite_measure(cls, config):
        out = []
        for p in (3, 5):
            for a3 in range(5):
                value = LocalZetaCalculator.unipotent_measure(a3, p)
                out.append(record(f'measure.p{p}.a{a3}', value == p ** a3,
                                  detail={'count': value, 'expected': p ** a3}))
        return out

    # ---------------------- HECKE ---------------------- #
    @classmethod
    def suite_hecke(cls, config):
        out = []
        for p in (3, 7):
            D = LocalZetaCalculator.ramified_discriminant(p)
            report = HeckeCalculator.cosets_report(p, D)
            out += [
                record(f'hecke.p{p}.count', report['count'] == report['expected'], detail={'count': report['count']}),
                record(f'hecke.p{p}.distinct', report['distinct']),
                record(f'hecke.p{p}.smith', report['smith_consistent']),
                record(f'hecke.p{p}.eigenvalue', report['eigenvalue_trivial'] == str(p * p + 1),
                       detail={'eigenvalue': report['eigenvalue_trivial']}),
                record(f'hecke.p{p}.annihilator', report['annihilator_trivial'] == '0'),
            ]
            support = HeckeCalculator.testvector_support_check(HeckeCalculator.mab_element(p, D), 3)
            out.append(record(f'hecke.p{p}.testvector', support['contradiction'],
                              detail={'up': support['up'], 'down': support['down']}))
        return out

    # ---------------------- BOUNDARY ---------------------- #
    @classmethod
    def suite_boundary(cls, config):
        rng = random.Random(config.seed)
        out = []
        for D in config.discriminants:
            round_trips, cross_terms = 0, 0
            for _ in range(100):
                params = UnipotentParam(_small_rational(rng), _small_elem(rng, D))
                if BoundaryCalculator.gamma_params(BoundaryCalculator.rebuild(params)) == params:
                    round_trips += 1
            for _ in range(20):
                p1 = UnipotentParam(_small_rational(rng), _small_elem(rng, D))
                p2 = UnipotentParam(_small_rational(rng), _small_elem(rng, D))
                product = BoundaryCalculator.rebuild(p1) * BoundaryCalculator.rebuild(p2)
                r = BoundaryCalculator.gamma_params(product).r
                if r == p1.r + p2.r + BoundaryCalculator.cross_term(p1.s, p2.s):
                    cross_terms += 1
            out.append(record(f'boundary.D{D}.round_trip', round_trips == 100, detail={'ok': round_trips}))
            out.append(record(f'boundary.D{D}.cross_term', cross_terms == 20, detail={'ok': cross_terms}))

            a, b = _small_elem(rng, D, nonzero=True), _small_elem(rng, D, nonzero=True)
            delta = FieldElem(0, 1, D)
            image = BoundaryCalculator.cusp_image((a, b, 0))
            out.append(record(f'boundary.D{D}.cusp_image', image == -delta.inverse() * a.conj() / b.conj()))

            shift = _small_elem(rng, D)
            moved = BoundaryCalculator.translate_basis(CoordBasis.standard(D), shift)
            valid = moved.is_valid()
            out.append(record(f'boundary.D{D}.translate',
                              valid and BoundaryCalculator.cusp_image((a, b, 0), moved) == image + shift))

            finite, invariant = 0, 0
            for _ in range(50):
                lattice = LatticeE.from_generators(
                    [FieldElem(rng.randint(1, 6), 0, D), FieldElem(_small_rational(rng), rng.randint(1, 4), D)], D)
                u = _small_elem(rng, D)
                order = BoundaryCalculator.torsion_order(u, lattice)
                if order >= 1 and lattice.contains(order * u):
                    finite += 1
                u2, lattice2 = BoundaryCalculator.coordinate_change(u, lattice, 'rescale', _small_elem(rng, D, True))
                if BoundaryCalculator.torsion_order(u2, lattice2) == order:
                    invariant += 1
            out.append(record(f'boundary.D{D}.torsion', finite == 50, detail={'ok': finite}))
            out.append(record(f'boundary.D{D}.rescale', invariant == 50, detail={'ok': invariant}))

        table = {('C1', 'c1'): 'A', ('C1', 'c2'): 'B', ('C2', 'c3'): 'B', ('C2', 'c4'): 'A'}
        good = DivisorLedger(pushforward=table).add('C1', 'c1', 1).add('C1', 'c2', -1) \
            .add('C2', 'c3', 1).add('C2', 'c4', -1)
        bad = DivisorLedger(pushforward={**table, ('C2', 'c3'): 'A', ('C2', 'c4'): 'B'}) \
            .add('C1', 'c1', 1).add('C1', 'c2', -1).add('C2', 'c3', 1).add('C2', 'c4', -1)
        good_check, bad_check = BoundaryCalculator.ledger_check(good), BoundaryCalculator.ledger_check(bad)
        out.append(record('boundary.ledger.positive', good_check['ok_2a'] and good_check['ok_2b']))
        out.append(record('boundary.ledger.negative', bad_check['ok_2a'] and not bad_check['ok_2b']))
        return out

    @classmethod
    def suite_norm(cls, config):
        rng = random.Random(config.seed)
        out = []
        for D in config.discriminants:
            contradictions, certified, unresolved = 0, 0, 0
            for _ in range(100):
                q = Fraction(rng.randint(1, 60), rng.randint(1, 12))
                decided = is_norm(q, D)
                witness = find_norm_witness(q, D, bound=24)
                if witness is not None:
                    if not decided or witness.norm() != q:
                        contradictions += 1
                    certified += 1
                elif decided:
                    unresolved += 1
            out.append(record(f'norm.D{D}', contradictions == 0,
                              detail={'certified': certified, 'unresolved': unresolved,
                                      'contradictions': contradictions}))
            out.append(record(f'norm.D{D}.negative', not is_norm(-1, D)))
        return out

    # ---------------------- ANALYTIC ---------------------- #
    @classmethod
    def _grid(cls, config):
        return [UHPoint.parse(z, config.precision) for z in Z_GRID]

    @classmethod
    def suite_klf(cls, config):
        out = []
        for z in cls._grid(config):
            for N in (3, 5):
                for rv in ResidueVector.nonzero(N):
                    residual = AnalyticCalculator.klf_residual(z, rv)
                    out.append(residual_record('klf', residual, cls.KLF_TOLERANCE, z=str(z), s=0, N=N, w=str(rv)))
        return out

    @classmethod
    def suite_fe(cls, config):
        out = []
        grid = cls._grid(config)
        for z in grid:
            for s in ('0.3', '0.5', mp.mpc('0.7', '0.2')):
                for rv in (ResidueVector(3, 1, 0), ResidueVector(3, 1, 2)):
                    residual = AnalyticCalculator.functional_equation_residual(z, s, rv)
                    out.append(residual_record('fe', residual, cls.FE_TOLERANCE, z=str(z), s=str(s), N=3, w=str(rv)))
            for N in (3, 5):
                rv = ResidueVector(N, 1, 0)
                residual = fabs(AnalyticCalculator.eisenstein(z, '1.2', rv)
                                - AnalyticCalculator.eisenstein_lattice_sum(z, '1.2', rv))
                out.append(residual_record('fe.oracle', residual, cls.ORACLE_TOLERANCE,
                                           z=str(z), s='1.2', N=N, w=str(rv)))
        for N in (6, 9):
            residual = AnalyticCalculator.level1_to_N_residual(grid[0], N)
            out.append(residual_record('fe.level1_to_N', residual, cls.LEVEL_TOLERANCE, z=str(grid[0]), s='1.3', N=N))
        return out

    @classmethod
    def suite_gamma0(cls, config):
        z, z2 = UHPoint.parse('0.1+1.1i', config.precision), UHPoint.parse('-0.2+0.9i', config.precision)
        out = []
        for N in (1, 9, 6):
            residual = AnalyticCalculator.gamma0_klf_residual(z, N, 'difference', z2)
            out.append(residual_record('gamma0.difference', residual, cls.GAMMA0_TOLERANCE, z=str(z), s=0, N=N))
        for N in (1, 9, 6):
            residual = AnalyticCalculator.gamma0_klf_residual(z, N, 'absolute')
            case = AnalyticCalculator.gamma0_case(N)
            out.append(residual_record('gamma0.absolute', residual, cls.GAMMA0_TOLERANCE, z=str(z), s=0, N=N,
                                       detail={'case': case,
                                               'measured': AnalyticCalculator.phi_N_at_zero(z, N)}))
        direct = AnalyticCalculator.phi_N_at_zero(z, 6, 'direct')
        residual = fabs(direct - AnalyticCalculator.phi_N_at_zero(z, 6))
        out.append(residual_record('gamma0.direct_sum', residual, cls.GAMMA0_TOLERANCE, z=str(z), s=0, N=6))
        return out

    @classmethod
    def suite_arch(cls, config):
        prec = config.precision
        out = []
        for D in (3, 4):
            for s in (1, 2, '3.5'):
                residual = AnalyticCalculator.ko_mellin_residual(s, D=D, precision=prec)
                out.append(residual_record('arch.ko_mellin', residual, cls.KO_TOLERANCE, s=str(s), detail={'D': D}))
        with mp.workdps(prec):
            for y in ('0.5', '1', '5'):
                value = AnalyticCalculator.whittaker_w00(y, prec)
                for method in ('integral', 'whitw'):
                    oracle = AnalyticCalculator.whittaker_w00_oracle(y, method, prec)
                    out.append(residual_record(f'arch.w00.{method}', fabs(value - oracle), cls.W00_TOLERANCE,
                                               detail={'y': y}))
            residues = AnalyticCalculator.gamma_c_residues(6, prec)
            monotone = all(b < a for a, b in zip(residues, residues[1:]))
            out.append(record('arch.gamma_c_residue', monotone and residues[-1] < mpf('1e-5'),
                              residues[-1], mpf('1e-5')))
            out.append(residual_record('arch.gamma_c_one', fabs(AnalyticCalculator.gamma_c(1, prec) - 1 / pi),
                                       mpf(10) ** (5 - prec)))
            check = AnalyticCalculator.assemble_limit_check(3, [], 1, 1, precision=prec)
            out.append(residual_record('arch.assemble_limit', check['relative'], mpf('1e-8'), detail={'D': 3}))
        return out

    # ---------------------- RUNNER ---------------------- #
    @classmethod
    def resolve(cls, names):
        names = list(names or ['all'])
        if 'all' in names:
            return list(cls.SUITES)
        unknown = [n for n in names if n not in cls.SUITES]
        if unknown:
            raise UsageError(f"unknown suite(s) {unknown}", details={'available': list(cls.SUITES)})
        return names

    @classmethod
    def run_suite(cls, name, config):
        started = time.perf_counter()
        try:
            records = getattr(cls, f"suite_{name}")(config)
        except LabError as e:
            logger.error(f"suite {name} raised {e.__class__.__name__}: {e.message}")
            records = [record(f'{name}.error', False, detail=e.to_dict())]
        except Exception as e:
            logger.exception(f"suite {name} crashed")
            records = [record(f'{name}.error', False, detail={'error': e.__class__.__name__, 'message': str(e)})]
        for r in records:
            r['suite'] = name
        elapsed = time.perf_counter() - started
        passed = all(r['passed'] for r in records)
        logger.info(f"suite {name}: {'pass' if passed else 'FAIL'} ({len(records)} checks, {elapsed:.2f}s)")
        return {'suite': name, 'passed': passed, 'records': records}

    @classmethod
    def run(cls, config, names=None):
        """Run suites in a thread pool; results come back in declaration order"""
        names = cls.resolve(names)
        # mpmath keeps one process-wide context: every suite runs at the run's precision
        mp.dps = config.precision
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            futures = [pool.submit(cls.run_suite, name, config) for name in names]
            results = [f.result() for f in futures]
        return {
            'config': config.model_dump(),
            'seed': config.seed,
            'below_minimum_orders': config.below_minimum(),
            'results': results,
            'passed': all(r['passed'] for r in results),
        }

    @staticmethod
    def flatten(summary):
        return [r for result in summary['results'] for r in result['records']]

    @staticmethod
    def failures(summary):
        return [r for r in VerificationSuites.flatten(summary) if not r['passed']]
