"""
Command line experiment harness.

Every subcommand validates its flags, runs ``--trials`` seeded trials
(in worker processes when ``--parallelism`` is above 1) and emits a
:py:class:`report.ResultRecord` as JSON, optionally also as CSV.

Exit codes: 0 on success, 1 on a runtime failure, 2 on a validation error
and 3 when ``--strict`` is set and a trial ended in ``Fail``.
"""
import argparse
import concurrent.futures
import json
import logging
import sys
import time

import numpy as np

from . import (cluster, codes, core, error, gap, instances, metrics, report,
               settings, transforms)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_VALIDATION = 2
EXIT_STRICT_FAIL = 3

VALIDATION_ERRORS = (
    error.HugeObjectConfigError,
    error.HugeObjectDistributionError,
    error.HugeObjectInitializationError,
    error.HugeObjectPreconditionError,
    error.HugeObjectDimensionError,
)

EMD_MODES = ('exact', 'lp', 'brute', 'permuted-exact', 'permuted-heuristic')
FAMILIES = ('pvc-yes', 'pvc-no-q', 'pvc-no-s', 'gap-yes', 'gap-no', 'pal')
TRANSFORMS = ('exp', 'quad', 'semi')
CODE_CHECK_SAMPLES = 16
DEFAULT_GAP_LEVEL = 4

# flags that steer output only and stay out of the echoed configuration
_OUTPUT_FLAGS = ('command', 'seed', 'trials', 'parallelism', 'out', 'csv',
                 'log_level', 'strict', 'timing', 'record')


def validate_distribution_file(path):
    """
    Load and validate a distribution file.

    :raises error.HugeObjectDistributionError: with the offending line
    :raises error.HugeObjectConfigError: when the file cannot be read
    """
    try:
        return core.load_distribution(path)
    except (IOError, OSError) as exc:
        raise error.HugeObjectConfigError(str(exc), field=path)
    except error.HugeObjectDistributionError as exc:
        raise error.HugeObjectDistributionError(
            '{path}: {message}'.format(path=path, message=exc)
        )


def _require(condition, field, message):
    if not condition:
        raise error.HugeObjectConfigError(message, field=field)


def _unit_interval(options, name, closed_low=False):
    value = options.get(name)
    _require(value is not None, name, 'is required.')
    low_ok = value >= 0 if closed_low else value > 0
    _require(low_ok and value < 1, name,
             'must lie in {lb}0, 1).'.format(lb='[' if closed_low else '('))


def _positive(options, name, allow_none=False):
    value = options.get(name)
    if value is None and allow_none:
        return
    _require(value is not None and value >= 1, name,
             'must be a positive integer.')


def _validate_emd(options):
    _require(options.get('d1') and options.get('d2'), 'd1',
             '--d1 and --d2 are required.')


def _validate_learn(options):
    _require(options.get('dist'), 'dist', '--dist is required.')
    _unit_interval(options, 'zeta', closed_low=True)
    _unit_interval(options, 'delta')
    _positive(options, 'r')
    for name in ('t1', 't2', 'r_size'):
        _positive(options, name, allow_none=True)


def _validate_test_vc(options):
    _require(options.get('dist'), 'dist', '--dist is required.')
    _require(options.get('candidates'), 'candidates',
             'at least one candidate file is required.')
    _unit_interval(options, 'epsilon')
    _require(options.get('d', -1) >= 0, 'd', 'must be non-negative.')
    for name in ('t1', 't2', 'r_size'):
        _positive(options, name, allow_none=True)


def gap_level(n=None, l=None, default=DEFAULT_GAP_LEVEL):
    """
    Resolve the gap level from an index count ``n = 2**l`` or ``l`` itself.

    :raises HugeObjectConfigError: if ``n`` is not a power of two or the
        two disagree
    """
    if n is None:
        return default if l is None else l
    _require(isinstance(n, int) and n >= 2 and n & (n - 1) == 0, 'n',
             'must be a power of two, at least 2.')
    level = n.bit_length() - 1
    _require(l is None or l == level, 'l',
             '{l} does not match n = {n}.'.format(l=l, n=n))
    return level


def _validate_gap(options):
    _require(bool(options.get('dist')) != bool(options.get('gen')), 'gen',
             'give exactly one of --dist and --gen.')
    _unit_interval(options, 'epsilon')
    options['l'] = gap_level(options.get('n'), options.get('l'))
    _require(1 <= options['l'] <= 8, 'l', 'must lie in [1, 8].')
    if options.get('gen'):
        _require(0 < options.get('eta', 0) < 0.125, 'eta',
                 'must lie in (0, 1/8).')
        _positive(options, 'z_count')
    _unit_interval(options, 'target_zeta')


def _validate_gen_instance(options):
    _require(options.get('family') in FAMILIES, 'family',
             'must be one of {f}.'.format(f=', '.join(FAMILIES)))
    _require(options.get('dist_out'), 'out',
             '--out is required for gen-instance.')
    _require(isinstance(options.get('params'), dict), 'params',
             'must be a JSON object.')


def _validate_simulate(options):
    _require(options.get('transform') in TRANSFORMS, 'transform',
             'must be one of {t}.'.format(t=', '.join(TRANSFORMS)))
    _require(options.get('n', 0) >= 3, 'n', 'must be at least 3.')


def _validate_codes(options):
    _require(1 <= options.get('l', 0) <= 8, 'l', 'must lie in [1, 8].')
    _positive(options, 'k', allow_none=True)
    _unit_interval(options, 'target_zeta')


_VALIDATORS = {
    'emd': _validate_emd,
    'learn': _validate_learn,
    'test-vc': _validate_test_vc,
    'gap-adaptive': _validate_gap,
    'gen-instance': _validate_gen_instance,
    'simulate-transform': _validate_simulate,
    'verify-codes': _validate_codes,
}


class ExperimentConfig(object):
    """
    A validated experiment description.

    Public Attributes:
        - ``command``
        - ``options`` (the subcommand's flags, echoed in the result)
        - ``master_seed``, ``trials``, ``parallelism``, ``strict``

    Public Methods:
        - :py:meth:`validate`
        - :py:meth:`to_dict`
        - :py:meth:`from_args`
    """

    def __init__(self, command, options, master_seed=0, trials=1,
                 parallelism=1, strict=False):
        self.command = command
        self.options = dict(options)
        self.master_seed = master_seed
        self.trials = trials
        self.parallelism = parallelism
        self.strict = strict

    @classmethod
    def from_args(cls, args):
        options = {
            key: value for key, value in vars(args).items()
            if key not in _OUTPUT_FLAGS
        }
        if args.command == 'gen-instance':
            options['dist_out'] = args.out
            try:
                options['params'] = json.loads(options.get('params') or '{}')
            except ValueError:
                raise error.HugeObjectConfigError('not valid JSON.',
                                                  field='params')
        return cls(
            args.command,
            options,
            master_seed=args.seed,
            trials=args.trials,
            parallelism=args.parallelism,
            strict=args.strict
        )

    def validate(self):
        _require(self.command in _VALIDATORS, 'command',
                 'unknown subcommand {c!r}.'.format(c=self.command))
        _require(isinstance(self.master_seed, int) and self.master_seed >= 0,
                 'seed', 'must be a non-negative integer.')
        _require(isinstance(self.trials, int) and self.trials >= 0,
                 'trials', 'must be a non-negative integer.')
        _require(isinstance(self.parallelism, int) and self.parallelism >= 1,
                 'parallelism', 'must be a positive integer.')
        _VALIDATORS[self.command](self.options)
        return self

    def to_dict(self):
        return {
            'command': self.command,
            'master_seed': self.master_seed,
            'trials': self.trials,
            'options': dict(
                (k, v) for k, v in sorted(self.options.items())
                if k != 'dist_out'
            ),
        }


def _trial_rng(master_seed, trial):
    return core.derive_rng(master_seed, trial)


def _size_overrides(options):
    return dict(
        (name, options[name]) for name in ('t1', 't2', 'r_size')
        if options.get(name) is not None
    )


def _emd_trial(options, master_seed, trial):
    d1 = validate_distribution_file(options['d1'])
    d2 = validate_distribution_file(options['d2'])
    mode = options['mode']
    if mode == 'exact':
        value = metrics.emd_exact(d1, d2)[0]
    elif mode == 'lp':
        value = metrics.emd_lp(d1, d2)
    elif mode == 'brute':
        value = metrics.emd_brute_force(d1, d2)
    else:
        value = metrics.emd_up_to_index_permutation(
            d1, d2, mode=mode.split('-', 1)[1]
        )
    return {'trial': trial, 'mode': mode, 'value': value}


def _learn_trial(options, master_seed, trial):
    distribution = validate_distribution_file(options['dist'])
    params = cluster.ClusterLearnParams(
        options['zeta'], options['delta'], options['r'],
        c_t1=options.get('c_t1'), c_t2=options.get('c_t2'),
        c_r=options.get('c_r'), **_size_overrides(options)
    )
    rng = _trial_rng(master_seed, trial)
    o = core.HugeObjectOracle(distribution, core.child_seed(rng))
    outcome = cluster.test_and_learn(o, params, core.child_seed(rng))
    record = outcome.to_dict()
    record['trial'] = trial
    record['distance'] = None
    record['success'] = False
    if outcome.learned:
        mode = 'exact' if distribution.dimension <= \
            metrics.EXACT_PERMUTATION_LIMIT else 'heuristic'
        distance = metrics.emd_up_to_index_permutation(
            distribution, outcome.distribution, mode=mode
        )
        record['distance'] = distance
        record['success'] = distance <= params.epsilon_out
    return record


def _test_vc_trial(options, master_seed, trial):
    distribution = validate_distribution_file(options['dist'])
    candidates = [validate_distribution_file(p) for p in options['candidates']]
    rng = _trial_rng(master_seed, trial)
    o = core.HugeObjectOracle(distribution, core.child_seed(rng))
    verdict = cluster.test_vc_property(
        o, candidates, options['epsilon'], options['d'], core.child_seed(rng),
        **_size_overrides(options)
    )
    record = {'trial': trial, 'verdict': verdict}
    record.update(o.counters())
    return record


def _gap_setup(options, master_seed):
    geo = codes.GapGeometry(options['l'], k=options.get('k'),
                            alpha=options.get('alpha'))
    code_seed = options.get('code_seed')
    code_seed = master_seed if code_seed is None else code_seed
    se, ge = codes.build_gap_codes(geo, code_seed, options['target_zeta'])
    return geo, se, ge


def _gap_descriptors(geo, se, ge):
    return {
        'geometry': geo.describe(se),
        'se': json.loads(se.to_json()),
        'ge': ge.describe(),
    }


def _gap_trial(options, master_seed, trial):
    geo, se, ge = _gap_setup(options, master_seed)
    rng = _trial_rng(master_seed, trial)
    if options.get('dist'):
        distribution = validate_distribution_file(options['dist'])
    else:
        base = instances.gen_supp_hard(
            instances.SuppHardParams(geo.n, options['eta'], options['gen']),
            core.child_seed(rng)
        )
        distribution = instances.gen_gap_distribution(
            geo, se, ge, base, core.child_seed(rng),
            z_count=options['z_count']
        )
    if distribution.dimension != geo.N:
        raise error.HugeObjectConfigError(
            'distribution has dimension {d}, the geometry needs {N}.'.format(
                d=distribution.dimension,
                N=geo.N
            ),
            field='dist'
        )
    o = core.HugeObjectOracle(distribution, core.child_seed(rng))
    outcome = gap.alg_adaptive(o, geo, se, ge, options['epsilon'],
                               core.child_seed(rng))
    record = outcome.to_dict()
    record['trial'] = trial
    return record


def _default_pair_distribution(n, master_seed):
    rng = core.derive_rng(master_seed)
    first = core.BitVector(rng.integers(0, 2, size=n))
    second = core.BitVector(rng.integers(0, 2, size=n))
    if first == second:
        second = first.complement()
    return core.ExplicitDistribution.uniform([first, second])


def _simulation_input(options, master_seed):
    if options.get('dist'):
        distribution = validate_distribution_file(options['dist'])
    else:
        distribution = _default_pair_distribution(options['n'], master_seed)
    tester = transforms.builtin_tester(options['tester'],
                                       distribution.dimension)
    return distribution, tester


def _simulate_trial(options, master_seed, trial):
    distribution, tester = _simulation_input(options, master_seed)
    simulated = transforms.simulate(options['transform'], tester)
    rng = _trial_rng(master_seed, trial)
    oracle_seed = core.child_seed(rng)
    coin_seed = core.child_seed(rng)
    original_input = distribution
    if options['transform'] == 'quad':
        original_input = core.permute_distribution(
            distribution, core.random_permutation(distribution.dimension, rng)
        )
    original, original_counts = transforms.run_tester(
        tester, core.HugeObjectOracle(original_input, oracle_seed), coin_seed
    )
    verdict, counts = transforms.run_tester(
        simulated, core.HugeObjectOracle(distribution, oracle_seed), coin_seed
    )
    return {
        'trial': trial,
        'original_verdict': original,
        'original_queries': original_counts['queries_made'],
        'simulated_verdict': verdict,
        'simulated_queries': counts['queries_made'],
        'agree': original == verdict,
    }


def _verify_codes_trial(options, master_seed, trial):
    geo = codes.GapGeometry(options['l'], k=options.get('k'))
    se = codes.build_se(geo.l, geo.k, options['target_zeta'], master_seed)
    ge = codes.build_ge(geo)
    rng = _trial_rng(master_seed, trial)
    ge_ok = True
    fe_ok = True
    detects = True
    for _ in range(CODE_CHECK_SAMPLES):
        z = rng.integers(0, geo.n, size=geo.m)
        word = codes.ge_encode(geo, ge, z)
        decoded = codes.ge_decode(geo, ge, word)
        ge_ok = ge_ok and decoded is not core.INVALID and \
            np.array_equal(decoded, z)
        if geo.m < geo.n:
            corrupted = word.copy()
            corrupted[-1] = (corrupted[-1] + 1) % geo.n
            detects = detects and \
                codes.ge_decode(geo, ge, corrupted) is core.INVALID
        x = core.BitVector(rng.integers(0, 2, size=geo.n))
        z_back, x_back, gamma = codes.fe_decode_all(
            geo, se, ge, codes.fe_encode(geo, se, ge, z, x)
        )
        fe_ok = fe_ok and not gamma and x_back == x and \
            z_back is not core.INVALID and np.array_equal(z_back, z)
    return {
        'trial': trial,
        'min_distance': se.min_distance,
        'dual_min_distance': se.dual_min_distance,
        'zeta_measured': se.zeta_measured,
        'target_met': se.meets_targets(),
        'ge_round_trip': bool(ge_ok),
        'ge_detects_corruption': bool(detects),
        'fe_round_trip': bool(fe_ok),
    }


_TRIAL_RUNNERS = {
    'emd': _emd_trial,
    'learn': _learn_trial,
    'test-vc': _test_vc_trial,
    'gap-adaptive': _gap_trial,
    'simulate-transform': _simulate_trial,
    'verify-codes': _verify_codes_trial,
}


def _run_trial(payload):
    command, options, master_seed, trial = payload
    return _TRIAL_RUNNERS[command](options, master_seed, trial)


def _rate(trials, key, value):
    if not trials:
        return None
    return sum(1 for t in trials if t.get(key) == value) / float(len(trials))


def _summarize(config, trials):
    command = config.command
    if command == 'emd':
        return {'value': trials[0]['value'] if trials else None}
    if command == 'learn':
        return {
            'success_rate': _rate(trials, 'success', True),
            'fail_rate': _rate(trials, 'outcome', core.FAIL),
        }
    if command in ('test-vc', 'gap-adaptive'):
        summary = {'accept_rate': _rate(trials, 'verdict', core.ACCEPT)}
        if trials:
            summary['max_queries'] = max(t['queries_made'] for t in trials)
        return summary
    if command == 'simulate-transform':
        _, tester = _simulation_input(config.options, config.master_seed)
        simulated = transforms.simulate(config.options['transform'], tester)
        return {
            'original_accept_rate': _rate(trials, 'original_verdict',
                                          core.ACCEPT),
            'simulated_accept_rate': _rate(trials, 'simulated_verdict',
                                           core.ACCEPT),
            'agreement_rate': _rate(trials, 'agree', True),
            'declared_queries': simulated.declared_q,
            'max_simulated_queries': max(
                (t['simulated_queries'] for t in trials), default=0
            ),
            'nonadaptive': transforms.verify_nonadaptive(simulated),
        }
    if command == 'verify-codes':
        return {'all_checks_passed': all(
            t['target_met'] and t['ge_round_trip'] and
            t['ge_detects_corruption'] and t['fe_round_trip']
            for t in trials
        )}
    return {}


def _generate_instance(config):
    options = config.options
    params = dict(options['params'])
    family = options['family']
    seed = config.master_seed
    descriptors = None
    if family.startswith('pvc'):
        p = instances.PvcParams(
            params.get('k_rows', 8), params.get('ell', 8),
            params.get('ell_prime', 2), params.get('k_prime', 2),
            params.get('n', 16), seed
        )
        generator = {
            'pvc-yes': instances.gen_pvc_yes,
            'pvc-no-q': instances.gen_pvc_no_query,
            'pvc-no-s': instances.gen_pvc_no_sample,
        }[family]
        distribution = generator(p)
    elif family.startswith('gap'):
        gap_options = {
            'l': gap_level(params.get('n'), params.get('l')),
            'k': params.get('k'),
            'alpha': params.get('alpha'),
            'target_zeta': params.get('target_zeta',
                                      codes.DEFAULT_TARGET_ZETA),
            'code_seed': params.get('code_seed'),
        }
        geo, se, ge = _gap_setup(gap_options, seed)
        rng = core.derive_rng(seed)
        base = instances.gen_supp_hard(
            instances.SuppHardParams(
                geo.n, params.get('eta', 1 / 9.0),
                instances.YES if family == 'gap-yes' else instances.NO
            ),
            core.child_seed(rng)
        )
        distribution = instances.gen_gap_distribution(
            geo, se, ge, base, core.child_seed(rng),
            z_count=params.get('z_count', instances.DEFAULT_Z_COUNT)
        )
        descriptors = _gap_descriptors(geo, se, ge)
    else:
        letters = instances.gen_pal_string(
            params.get('n', 16), params.get('mode', instances.YES), seed
        )
        distribution = instances.gen_pal_lift(letters)
    core.dump_distribution(distribution, options['dist_out'])
    trial = {
        'trial': 0,
        'family': family,
        'dimension': distribution.dimension,
        'support_size': distribution.support_size,
    }
    return [trial], descriptors


def run_experiment(config):
    """
    Run a validated configuration.

    :type config: ExperimentConfig
    :returns: A :py:class:`report.ResultRecord`
    """
    start = time.perf_counter()
    descriptors = None
    if config.command == 'gen-instance':
        trials, descriptors = _generate_instance(config)
    else:
        payloads = [
            (config.command, config.options, config.master_seed, trial)
            for trial in range(config.trials)
        ]
        if config.parallelism > 1 and len(payloads) > 1:
            with concurrent.futures.ProcessPoolExecutor(
                    max_workers=config.parallelism) as executor:
                trials = list(executor.map(_run_trial, payloads))
        else:
            trials = [_run_trial(payload) for payload in payloads]
        if config.command == 'gap-adaptive':
            descriptors = _gap_descriptors(
                *_gap_setup(config.options, config.master_seed)
            )
    logger.info('%s: %d trials', config.command, len(trials))
    return report.ResultRecord(
        config.command,
        config.to_dict(),
        trials,
        summary=_summarize(config, trials),
        descriptors=descriptors,
        wall_clock=time.perf_counter() - start
    )


def _common_parser():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--seed', type=int, default=0,
                        help='master seed (default: 0)')
    parser.add_argument('--trials', type=int, default=1)
    parser.add_argument('--out', help='JSON result file (default: stdout)')
    parser.add_argument('--csv', help='flat CSV export of the trials')
    parser.add_argument('--parallelism', type=int, default=1)
    parser.add_argument('--log-level', default=settings.LOG_LEVEL)
    parser.add_argument('--strict', action='store_true',
                        help='exit with 3 when a trial ends in Fail')
    parser.add_argument('--timing', action='store_true',
                        help='include wall-clock time in the JSON')
    return parser


def _size_flags(parser):
    parser.add_argument('--t1', type=int)
    parser.add_argument('--t2', type=int)
    parser.add_argument('--r-size', type=int)


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog='pyhugeobject',
        description='Huge object model property testing experiments.'
    )
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    emd = commands.add_parser('emd', parents=[common],
                              help='earth mover distance of two files')
    emd.add_argument('--d1', required=True)
    emd.add_argument('--d2', required=True)
    emd.add_argument('--mode', choices=EMD_MODES, default='exact')

    learn = commands.add_parser('learn', parents=[common],
                                help='learn a clusterable distribution')
    learn.add_argument('--dist', required=True)
    learn.add_argument('--zeta', type=float, required=True)
    learn.add_argument('--delta', type=float, required=True)
    learn.add_argument('--r', type=int, required=True)
    learn.add_argument('--c-t1', type=float)
    learn.add_argument('--c-t2', type=float)
    learn.add_argument('--c-r', type=float)
    _size_flags(learn)

    test_vc = commands.add_parser('test-vc', parents=[common],
                                  help='test a bounded VC-dimension property')
    test_vc.add_argument('--dist', required=True)
    test_vc.add_argument('--candidates', nargs='+', required=True)
    test_vc.add_argument('--epsilon', type=float, required=True)
    test_vc.add_argument('--d', type=int, required=True)
    _size_flags(test_vc)

    gap_parser = commands.add_parser('gap-adaptive', parents=[common],
                                     help='run the adaptive gap tester')
    gap_parser.add_argument('--dist')
    gap_parser.add_argument('--gen', choices=(instances.YES, instances.NO))
    gap_parser.add_argument('--n', type=int,
                            help='number of indices, a power of two')
    gap_parser.add_argument('--l', type=int, help='log2 of --n')
    gap_parser.add_argument('--k', type=int)
    gap_parser.add_argument('--alpha', type=float)
    gap_parser.add_argument('--epsilon', type=float, default=0.25)
    gap_parser.add_argument('--eta', type=float, default=1 / 9.0)
    gap_parser.add_argument('--z-count', type=int,
                            default=instances.DEFAULT_Z_COUNT)
    gap_parser.add_argument('--target-zeta', type=float,
                            default=codes.DEFAULT_TARGET_ZETA)
    gap_parser.add_argument('--code-seed', type=int)

    gen = commands.add_parser('gen-instance', parents=[common],
                              help='write a generated distribution file')
    gen.add_argument('--family', choices=FAMILIES, required=True)
    gen.add_argument('--params', default='{}', help='JSON object')
    gen.add_argument('--record', help='JSON result file')

    simulate = commands.add_parser('simulate-transform', parents=[common],
                                   help='compare a tester with a simulation')
    simulate.add_argument('--tester', default='complement-pair',
                          choices=sorted(list(transforms.BUILTIN_TESTERS) +
                                         ['pal-lift']))
    simulate.add_argument('--transform', choices=TRANSFORMS, required=True)
    simulate.add_argument('--n', type=int, default=8)
    simulate.add_argument('--dist')

    verify = commands.add_parser('verify-codes', parents=[common],
                                 help='build and check the gap codes')
    verify.add_argument('--l', type=int, default=2)
    verify.add_argument('--k', type=int)
    verify.add_argument('--target-zeta', type=float,
                        default=codes.DEFAULT_TARGET_ZETA)
    return parser


def _emit(record, args):
    json_path = args.record if args.command == 'gen-instance' else args.out
    if json_path:
        record.write_json(json_path, include_timing=args.timing)
    else:
        sys.stdout.write(record.to_json(include_timing=args.timing) + '\n')
    if args.csv:
        record.write_csv(args.csv)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=str(args.log_level).upper(),
        format='%(asctime)s %(name)s %(levelname)s: %(message)s'
    )
    try:
        config = ExperimentConfig.from_args(args).validate()
        record = run_experiment(config)
        _emit(record, args)
    except VALIDATION_ERRORS as exc:
        sys.stderr.write('error: {exc}\n'.format(exc=exc))
        return EXIT_VALIDATION
    except error.HugeObjectBaseError as exc:
        sys.stderr.write('failed: {exc}\n'.format(exc=exc))
        return EXIT_FAILURE
    if config.strict and any(t.get('outcome') == core.FAIL
                             for t in record.trials):
        return EXIT_STRICT_FAIL
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
