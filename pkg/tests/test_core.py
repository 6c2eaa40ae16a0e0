import os
import tempfile
import unittest

import numpy as np

from pyhugeobject import core, error

DATA_DIR = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
    'pyhugeobject', 'data'
)


class BaseCoreTestCase(unittest.TestCase):

    def setUp(self):
        self.v = core.BitVector('0110')
        self.distribution = core.ExplicitDistribution([
            (core.BitVector('000'), 0.5),
            (core.BitVector('011'), 0.25),
            (core.BitVector('110'), 0.25),
        ])


class TestSeeding(BaseCoreTestCase):

    def test_derive_rng_is_reproducible(self):
        a = core.derive_rng(7, 1).integers(0, 1000, size=10)
        b = core.derive_rng(7, 1).integers(0, 1000, size=10)
        self.assertTrue(np.array_equal(a, b))

    def test_distinct_paths_differ(self):
        a = core.derive_rng(7, 1).integers(0, 2 ** 32, size=4)
        b = core.derive_rng(7, 2).integers(0, 2 ** 32, size=4)
        self.assertFalse(np.array_equal(a, b))

    def test_negative_seed(self):
        with self.assertRaises(error.HugeObjectInitializationError):
            core.derive_rng(-1)

    def test_largest_remainder(self):
        rounded = core.largest_remainder([1.5, 1.5, 1.0], 4)
        self.assertEqual(rounded.tolist(), [2, 1, 1])
        self.assertEqual(int(core.largest_remainder([0.3, 0.3, 0.4], 1).sum()), 1)

    def test_construct_with_retries(self):
        calls = []

        def attempt():
            calls.append(1)
            if len(calls) < 3:
                raise core.Resample()
            return 'built'

        self.assertEqual(core.construct_with_retries(attempt, 'thing'), 'built')
        self.assertEqual(len(calls), 3)

    def test_construct_gives_up(self):
        def attempt():
            raise core.Resample()

        with self.assertRaises(error.HugeObjectConstructionError):
            core.construct_with_retries(attempt, 'thing', max_attempts=4)


class TestBitVector(BaseCoreTestCase):

    def test_attributes(self):
        self.assertEqual(self.v.length, 4)
        self.assertEqual(self.v.weight, 2)
        self.assertEqual(self.v[1], 1)
        self.assertEqual(str(self.v), '0110')
        self.assertEqual(list(self.v), [0, 1, 1, 0])

    def test_equality_and_hash(self):
        self.assertEqual(self.v, core.BitVector([0, 1, 1, 0]))
        self.assertEqual(len({self.v, core.BitVector('0110')}), 1)
        self.assertNotEqual(self.v, core.BitVector('0111'))

    def test_immutable(self):
        with self.assertRaises(ValueError):
            self.v.bits[0] = 1

    def test_bad_bits(self):
        with self.assertRaises(error.HugeObjectInitializationError):
            core.BitVector('0120')
        with self.assertRaises(error.HugeObjectInitializationError):
            core.BitVector('')
        with self.assertRaises(error.HugeObjectInitializationError):
            core.BitVector([0, 2])

    def test_restrict_and_complement(self):
        self.assertEqual(self.v.restrict([3, 1]).tolist(), [0, 1])
        self.assertEqual(str(self.v.complement()), '1001')
        with self.assertRaises(error.HugeObjectOracleError):
            self.v.restrict([4])


class TestPermutation(BaseCoreTestCase):

    def test_apply(self):
        p = core.Permutation([2, 0, 1, 3])
        self.assertEqual(str(core.apply_permutation(core.BitVector('1000'), p)),
                         '0100')

    def test_compose_matches_sequential_application(self):
        rng = core.derive_rng(3)
        v = core.BitVector(rng.integers(0, 2, size=12))
        p = core.random_permutation(12, rng)
        q = core.random_permutation(12, rng)
        self.assertEqual(
            core.apply_permutation(v, core.compose(p, q)),
            core.apply_permutation(core.apply_permutation(v, p), q)
        )

    def test_inverse(self):
        p = core.Permutation([3, 0, 2, 1])
        self.assertEqual(core.compose(p, core.inverse(p)),
                         core.Permutation.identity(4))
        self.assertEqual(core.apply_permutation(
            core.apply_permutation(self.v, p), core.inverse(p)), self.v)

    def test_not_a_bijection(self):
        with self.assertRaises(error.HugeObjectInitializationError):
            core.Permutation([0, 0, 1])

    def test_size_mismatch(self):
        with self.assertRaises(error.HugeObjectDimensionError):
            core.apply_permutation(self.v, core.Permutation.identity(3))


class TestExplicitDistribution(BaseCoreTestCase):

    def test_attributes(self):
        self.assertEqual(self.distribution.dimension, 3)
        self.assertEqual(self.distribution.support_size, 3)
        self.assertEqual(self.distribution.mass_of(core.BitVector('011')), 0.25)
        self.assertEqual(self.distribution.mass_of(core.BitVector('111')), 0.0)
        self.assertEqual(self.distribution.matrix().shape, (3, 3))

    def test_invalid_mass(self):
        with self.assertRaises(error.HugeObjectDistributionError):
            core.ExplicitDistribution([(core.BitVector('0'), 0.9)])

    def test_duplicate_vector(self):
        with self.assertRaises(error.HugeObjectDistributionError):
            core.ExplicitDistribution([
                (core.BitVector('01'), 0.5),
                (core.BitVector('01'), 0.5),
            ])

    def test_mixed_dimensions(self):
        with self.assertRaises(error.HugeObjectDistributionError):
            core.ExplicitDistribution([
                (core.BitVector('01'), 0.5),
                (core.BitVector('011'), 0.5),
            ])

    def test_uniform_accumulates_repeats(self):
        d = core.ExplicitDistribution.uniform([
            core.BitVector('00'), core.BitVector('00'), core.BitVector('11')
        ])
        self.assertEqual(d.support_size, 2)
        self.assertAlmostEqual(d.mass_of(core.BitVector('00')), 2 / 3.0)

    def test_restrict(self):
        projected = self.distribution.restrict([0])
        self.assertEqual(projected.support_size, 2)
        self.assertAlmostEqual(projected.mass_of(core.BitVector('0')), 0.75)

    def test_permute_distribution(self):
        p = core.Permutation([2, 1, 0])
        permuted = core.permute_distribution(self.distribution, p)
        self.assertAlmostEqual(permuted.mass_of(core.BitVector('011')), 0.25)
        self.assertAlmostEqual(permuted.mass_of(core.BitVector('110')), 0.25)

    def test_sampling_frequencies(self):
        rng = core.derive_rng(11)
        draws = [str(self.distribution.sample(rng)) for _ in range(4000)]
        self.assertAlmostEqual(draws.count('000') / 4000.0, 0.5, delta=0.05)


class TestOracle(BaseCoreTestCase):

    def test_sampling_reveals_nothing(self):
        o = core.HugeObjectOracle(self.distribution, 5)
        o.draw_sample()
        o.draw_sample()
        self.assertEqual(o.counters(), {'samples_taken': 2, 'queries_made': 0})

    def test_repeated_query_is_counted(self):
        o = core.HugeObjectOracle(
            core.ExplicitDistribution.point_mass(core.BitVector('101')), 3
        )
        sid = o.draw_sample()
        self.assertEqual(o.query_bit(sid, 1), 0)
        self.assertEqual(o.query_bit(sid, 1), 0)
        self.assertEqual(o.queries_made, 2)
        self.assertEqual(o.transcript[-1], ('query', sid, 1, 0))

    def test_query_bits_and_reveal(self):
        o = core.HugeObjectOracle(
            core.ExplicitDistribution.point_mass(core.BitVector('101')), 3
        )
        sid = o.draw_sample()
        self.assertEqual(o.query_bits(sid, [0, 2]).tolist(), [1, 1])
        self.assertEqual(str(o.reveal_full(sid)), '101')
        self.assertEqual(o.queries_made, 5)

    def test_bad_ids(self):
        o = core.HugeObjectOracle(self.distribution, 5)
        with self.assertRaises(error.HugeObjectOracleError):
            o.query_bit(0, 0)
        sid = o.draw_sample()
        with self.assertRaises(error.HugeObjectOracleError):
            o.query_bit(sid, 3)

    def test_budget(self):
        o = core.HugeObjectOracle(self.distribution, 5,
                                  core.QueryBudget(max_samples=1, max_queries=2))
        sid = o.draw_sample()
        with self.assertRaises(error.HugeObjectBudgetError):
            o.draw_sample()
        o.query_bits(sid, [0, 1])
        with self.assertRaises(error.HugeObjectBudgetError):
            o.query_bit(sid, 2)

    def test_same_seed_same_samples(self):
        first = core.HugeObjectOracle(self.distribution, 9)
        second = core.HugeObjectOracle(self.distribution, 9)
        for _ in range(20):
            a, b = first.draw_sample(), second.draw_sample()
            self.assertEqual(first.reveal_full(a), second.reveal_full(b))


class TestDistributionFiles(BaseCoreTestCase):

    def test_load_fixture(self):
        d = core.load_distribution(os.path.join(DATA_DIR, 'three_clusters.txt'))
        self.assertEqual(d.dimension, 64)
        self.assertEqual(d.support_size, 3)
        self.assertAlmostEqual(d.mass_of(core.BitVector('0' * 64)), 0.5)

    def test_bad_mass_fixture(self):
        with self.assertRaises(error.HugeObjectDistributionError):
            core.load_distribution(os.path.join(DATA_DIR, 'bad_mass.txt'))

    def test_duplicate_fixture_names_line(self):
        with self.assertRaises(error.HugeObjectDistributionError) as ctx:
            core.load_distribution(os.path.join(DATA_DIR, 'duplicate.txt'))
        self.assertEqual(ctx.exception.line_number, 3)

    def test_parse_errors(self):
        with self.assertRaises(error.HugeObjectDistributionError):
            core.parse_distribution(['0.5\t01', '0.5\t011'])
        with self.assertRaises(error.HugeObjectDistributionError):
            core.parse_distribution(['abc\t01'])
        with self.assertRaises(error.HugeObjectDistributionError):
            core.parse_distribution(['# only a comment'])

    def test_dump_and_load(self):
        handle, path = tempfile.mkstemp(suffix='.txt')
        os.close(handle)
        try:
            core.dump_distribution(self.distribution, path)
            self.assertEqual(core.load_distribution(path), self.distribution)
        finally:
            os.remove(path)
