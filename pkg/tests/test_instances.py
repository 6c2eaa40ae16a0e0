import unittest

import numpy as np

from pyhugeobject import codes, core, error, instances, metrics


class BaseInstancesTestCase(unittest.TestCase):

    def setUp(self):
        self.p = instances.PvcParams(8, 8, 2, 2, 16, 3)


class TestPvcInstances(BaseInstancesTestCase):

    def test_params(self):
        self.assertEqual(self.p.to_dict()['n'], 16)
        with self.assertRaises(error.HugeObjectInitializationError):
            instances.PvcParams(8, 6, 2, 2, 16, 3)
        with self.assertRaises(error.HugeObjectInitializationError):
            instances.PvcParams(8, 8, 2, 9, 16, 3)

    def test_matrix_columns_are_separated(self):
        matrix = instances.gen_pvc_matrix(self.p)
        self.assertEqual(matrix.shape, (8, 8))
        for a in range(8):
            for b in range(a + 1, 8):
                self.assertGreaterEqual(
                    np.count_nonzero(matrix[:, a] != matrix[:, b]), 8 / 3.0)

    def test_matrix_is_seeded(self):
        self.assertTrue(np.array_equal(instances.gen_pvc_matrix(self.p),
                                       instances.gen_pvc_matrix(self.p)))

    def test_blow_up(self):
        self.assertEqual(str(instances.blow_up(core.BitVector('01'), 4)),
                         '0011')
        with self.assertRaises(error.HugeObjectDimensionError):
            instances.blow_up(core.BitVector('011'), 4)

    def test_yes_instance_classes(self):
        yes = instances.gen_pvc_yes(self.p)
        self.assertEqual(yes.dimension, 16)
        classes = instances.index_classes(yes)
        self.assertEqual(sorted(len(c) for c in classes), [2] * 8)

    def test_query_hard_no_instance(self):
        no = instances.gen_pvc_no_query(self.p)
        self.assertLessEqual(no.support_size, 4)
        self.assertEqual(sorted(len(c) for c in instances.index_classes(no)),
                         [8, 8])

    def test_sample_hard_no_instance(self):
        no = instances.gen_pvc_no_sample(self.p)
        self.assertLessEqual(no.support_size, 2)
        self.assertEqual(no.dimension, 16)

    def test_matrices_vary_with_the_seed(self):
        column_sets = set()
        for seed in range(5):
            matrix = instances.gen_pvc_matrix(
                instances.PvcParams(8, 8, 2, 2, 16, seed))
            column_sets.add(frozenset(c.tobytes() for c in matrix.T))
        self.assertGreater(len(column_sets), 1)

    def test_more_columns_than_row_messages(self):
        matrix = instances.gen_pvc_matrix(
            instances.PvcParams(8, 16, 2, 2, 16, 1))
        self.assertEqual(matrix.shape, (8, 16))
        for a in range(16):
            for b in range(a + 1, 16):
                self.assertGreaterEqual(
                    np.count_nonzero(matrix[:, a] != matrix[:, b]), 3)

    def test_too_many_columns(self):
        with self.assertRaises(error.HugeObjectConstructionError):
            instances.gen_pvc_matrix(instances.PvcParams(2, 8, 2, 2, 8, 0),
                                     max_attempts=5)

    def test_farness_rate(self):
        far = sum(
            instances.pvc_farness(instances.PvcParams(8, 8, 2, 2, 16, seed))
            >= 1 / 8.0
            for seed in range(20)
        )
        self.assertGreaterEqual(far, 19)


class TestSupportInstances(BaseInstancesTestCase):

    def test_far_codewords(self):
        words = instances.gen_far_codeword_set(16, 8, 5, 0)
        self.assertEqual(len(set(words)), 8)
        for i, u in enumerate(words):
            for v in words[i + 1:]:
                self.assertGreaterEqual(metrics.hamming_abs(u, v), 5)

    def test_far_codewords_at_a_third_of_the_length(self):
        words = instances.gen_far_codeword_set(32, 64, 11, 1)
        self.assertEqual(len(set(words)), 64)
        self.assertGreaterEqual(
            min(metrics.hamming_abs(u, v)
                for i, u in enumerate(words) for v in words[i + 1:]),
            11)

    def test_far_codewords_beyond_the_plotkin_bound(self):
        with self.assertRaises(error.HugeObjectConstructionError):
            instances.gen_far_codeword_set(4, 8, 3, 0, max_attempts=10)

    def test_supp_hard_yes(self):
        base = instances.gen_supp_hard(
            instances.SuppHardParams(4, 1 / 9.0, instances.YES), 2)
        self.assertEqual(len(base), 4)
        self.assertTrue(all(0 <= e < 8 for e in base))
        self.assertEqual(set(base.values()), {0.25})

    def test_supp_hard_no(self):
        base = instances.gen_supp_hard(
            instances.SuppHardParams(4, 1 / 9.0, instances.NO), 2)
        self.assertEqual(len(base), 5)
        self.assertAlmostEqual(sum(base.values()), 1.0)
        for weight in base.values():
            self.assertAlmostEqual(weight * 8, round(weight * 8))

    def test_supp_hard_params(self):
        with self.assertRaises(error.HugeObjectInitializationError):
            instances.SuppHardParams(4, 0.2, instances.YES)
        with self.assertRaises(error.HugeObjectInitializationError):
            instances.SuppHardParams(4, 0.1, 'maybe')


class TestGapInstances(BaseInstancesTestCase):

    def setUp(self):
        super(TestGapInstances, self).setUp()
        self.geo = codes.GapGeometry(2, alpha=1 / 16.0)
        self.se, self.ge = codes.build_gap_codes(self.geo, 0)
        self.base = instances.gen_supp_hard(
            instances.SuppHardParams(4, 1 / 9.0, instances.YES), 2)

    def test_distribution_shape(self):
        observed = instances.gen_gap_distribution(
            self.geo, self.se, self.ge, self.base, 5)
        self.assertEqual(observed.dimension, self.geo.N)
        special = 1 + self.geo.b + self.geo.pattern_count
        self.assertGreater(observed.support_size, special + 3)
        self.assertLessEqual(observed.support_size,
                             special + 4 * instances.DEFAULT_Z_COUNT)

    def test_seeded(self):
        first = instances.gen_gap_distribution(
            self.geo, self.se, self.ge, self.base, 5)
        second = instances.gen_gap_distribution(
            self.geo, self.se, self.ge, self.base, 5)
        self.assertEqual(first, second)

    def test_alpha_range(self):
        with self.assertRaises(error.HugeObjectPreconditionError):
            instances.gen_gap_distribution(self.geo, self.se, self.ge,
                                           self.base, 5, alpha=0.4)

    def test_bad_base(self):
        with self.assertRaises(error.HugeObjectDistributionError):
            instances.gen_gap_distribution(self.geo, self.se, self.ge,
                                           {0: 0.3, 1: 0.7}, 5)
        with self.assertRaises(error.HugeObjectDistributionError):
            instances.gen_gap_distribution(self.geo, self.se, self.ge,
                                           {9: 1.0}, 5)


class TestPalindromes(BaseInstancesTestCase):

    def test_membership(self):
        self.assertTrue(instances.pal_is_member([0, 1, 0, 2, 3, 2]))
        self.assertTrue(instances.pal_is_member([0, 1, 1, 0, 3, 3]))
        self.assertTrue(instances.pal_is_member([]))
        self.assertFalse(instances.pal_is_member([0, 1, 2]))
        self.assertFalse(instances.pal_is_member([2, 0]))

    def test_encoding(self):
        v = instances.encode_pal_string([0, 1, 2, 3])
        self.assertEqual(str(v), '00011011')
        self.assertEqual(instances.decode_pal_string(v).tolist(), [0, 1, 2, 3])
        with self.assertRaises(error.HugeObjectDimensionError):
            instances.decode_pal_string(core.BitVector('011'))

    def test_generated_yes_strings_are_members(self):
        for seed in range(10):
            s = instances.gen_pal_string(12, instances.YES, seed)
            self.assertEqual(len(s), 12)
            self.assertTrue(instances.pal_is_member(s))

    def test_adaptive_tester(self):
        member = instances.gen_pal_string(16, instances.YES, 4)
        self.assertEqual(
            instances.pal_adaptive_test(instances.StringOracle(member), 0.5, 1),
            core.ACCEPT)
        self.assertEqual(
            instances.pal_adaptive_test(instances.StringOracle([2, 3] * 8),
                                        0.5, 1),
            core.REJECT)

    def test_string_oracle_letters(self):
        with self.assertRaises(error.HugeObjectInitializationError):
            instances.StringOracle([0, 4])

    def test_lifted_tester(self):
        member = instances.gen_pal_lift(
            instances.gen_pal_string(16, instances.YES, 4))
        o = core.HugeObjectOracle(member, 2)
        self.assertEqual(instances.lift_one_p_test(o, 0.5, 3), core.ACCEPT)
        self.assertGreater(o.queries_made, 0)
        far = instances.gen_pal_lift([2, 3] * 8)
        self.assertEqual(
            instances.lift_one_p_test(core.HugeObjectOracle(far, 2), 0.5, 3),
            core.REJECT)

    def test_members_are_always_accepted(self):
        for seed in range(100):
            s = instances.gen_pal_string(64, instances.YES, seed)
            self.assertEqual(
                instances.pal_adaptive_test(instances.StringOracle(s), 0.1,
                                            seed),
                core.ACCEPT)

    def test_uniform_strings_are_rejected(self):
        rejected = 0
        for seed in range(30):
            oracle = instances.StringOracle(
                instances.gen_pal_string(1024, instances.NO, seed))
            rejected += instances.pal_adaptive_test(oracle, 0.1, seed) == \
                core.REJECT
            self.assertLessEqual(oracle.queries_made, 2 * 10 + 40 / 0.1)
        self.assertGreaterEqual(rejected, 20)
