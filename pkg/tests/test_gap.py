import unittest

import numpy as np

from pyhugeobject import codes, core, error, gap, instances

ALPHA = 1 / 16.0


class InvalidStream(object):

    dimension = 4

    def __len__(self):
        return 5

    def bit(self, t, j):
        return core.INVALID


class BaseGapTestCase(unittest.TestCase):

    def setUp(self):
        self.geo = codes.GapGeometry(2, alpha=ALPHA)
        self.se, self.ge = codes.build_gap_codes(self.geo, 0)

    def instance(self, mode, seed=1):
        base = instances.gen_supp_hard(
            instances.SuppHardParams(self.geo.n, 1 / 9.0, mode), seed)
        return instances.gen_gap_distribution(
            self.geo, self.se, self.ge, base, seed + 1,
            return_permutation=True)


class TestSpecialVectors(BaseGapTestCase):

    def test_shapes(self):
        special = gap.special_vectors(self.geo)
        self.assertEqual(special.U.weight, 1)
        self.assertEqual(len(special.V), self.geo.b)
        self.assertEqual(len(special.W), self.geo.pattern_count)
        self.assertEqual([v.weight for v in special.V], [2, 3, 4])
        self.assertEqual(len(set(special.all())), 1 + 3 + 6)

    def test_masses(self):
        masses = gap.special_vectors(self.geo).masses(ALPHA)
        self.assertAlmostEqual(sum(masses.values()), 3 * ALPHA)

    def test_patterns_carry_offsets(self):
        special = gap.special_vectors(self.geo)
        offsets = sum(
            (1 << i) * w.bits[self.geo.encoding_start:].astype(np.int64)
            for i, w in enumerate(special.W)
        )
        self.assertEqual(offsets.tolist(), list(range(self.geo.k * self.geo.n)))


class TestFindPermutation(BaseGapTestCase):

    def test_recovers_sigma(self):
        observed, sigma = self.instance(instances.YES)
        o = core.HugeObjectOracle(observed, 3)
        recovery = gap.find_permutation(o, self.geo)
        self.assertFalse(recovery.failed)
        self.assertEqual(recovery.pi, sigma)
        size = gap.ordering_sample_size(self.geo)
        self.assertEqual(recovery.samples_taken, 2 * size)
        self.assertEqual(recovery.queries_made, 2 * size * self.geo.N)
        self.assertEqual(recovery.to_dict()['outcome'], 'Recovered')

    def test_chunk_positions(self):
        observed, sigma = self.instance(instances.YES)
        recovery = gap.find_permutation(core.HugeObjectOracle(observed, 3),
                                        self.geo)
        inverse = core.inverse(sigma).mapping
        for j in range(self.geo.n):
            chunk = self.geo.chunk(j)
            self.assertEqual(recovery.C_prime[j],
                             tuple(inverse[chunk.start:chunk.stop].tolist()))

    def test_fails_without_marker(self):
        zeros = core.ExplicitDistribution.point_mass(
            core.BitVector.zeros(self.geo.N))
        recovery = gap.find_permutation(core.HugeObjectOracle(zeros, 3),
                                        self.geo)
        self.assertTrue(recovery.failed)
        self.assertEqual(recovery.step, 'ii')
        self.assertEqual(recovery.to_dict()['outcome'], core.FAIL)

    def test_dimension_check(self):
        o = core.HugeObjectOracle(
            core.ExplicitDistribution.point_mass(core.BitVector('01')), 3)
        with self.assertRaises(error.HugeObjectDimensionError):
            gap.find_permutation(o, self.geo)


class TestClassification(BaseGapTestCase):

    def test_membership_of_canonical_form(self):
        observed, sigma = self.instance(instances.YES)
        canonical = core.permute_distribution(observed, core.inverse(sigma))
        self.assertTrue(gap.is_in_p0_gap(canonical, self.geo, self.se,
                                         self.ge))
        self.assertFalse(gap.is_in_p0_gap(observed, self.geo, self.se,
                                          self.ge))

    def test_no_instance_has_too_many_payloads(self):
        observed, sigma = self.instance(instances.NO)
        canonical = core.permute_distribution(observed, core.inverse(sigma))
        self.assertFalse(gap.is_in_p0_gap(canonical, self.geo, self.se,
                                          self.ge))

    def test_classify_vector(self):
        special = gap.special_vectors(self.geo)
        sigma = core.random_permutation(self.geo.N, core.derive_rng(4))
        observed_u = core.apply_permutation(special.U, sigma)
        self.assertEqual(gap.classify_vector(observed_u, sigma, self.geo),
                         gap.SPECIAL)
        encoding = codes.fe_encode(self.geo, self.se, self.ge, [0, 1],
                                   core.BitVector('1010'))
        self.assertEqual(
            gap.classify_vector(core.apply_permutation(encoding, sigma),
                                sigma, self.geo),
            gap.ENCODING
        )
        self.assertEqual(
            gap.classify_vector(core.BitVector.ones(self.geo.N), sigma,
                                self.geo),
            gap.OTHER
        )


class TestSupportTests(BaseGapTestCase):

    def setUp(self):
        super(TestSupportTests, self).setUp()
        vectors = [core.BitVector('0' * 64),
                   core.BitVector('1' * 32 + '0' * 32),
                   core.BitVector('0011' * 16)]
        self.stream = gap.VectorStream(vectors * 67)

    def test_support_one(self):
        point = core.ExplicitDistribution.point_mass(core.BitVector('0110'))
        self.assertEqual(
            gap.support_one_test(core.HugeObjectOracle(point, 1), 0.5, 2),
            core.ACCEPT)
        two = core.ExplicitDistribution.uniform(
            [core.BitVector('00'), core.BitVector('11')])
        self.assertEqual(
            gap.support_one_test(core.HugeObjectOracle(two, 1), 0.5, 2),
            core.REJECT)

    def test_supp_est(self):
        self.assertEqual(gap.supp_est(self.stream, 3, 0.25, 5), core.ACCEPT)
        self.assertEqual(gap.supp_est(self.stream, 2, 0.25, 5), core.REJECT)
        self.assertGreater(self.stream.queries_made, 0)

    def test_supp_est_invalid_bit(self):
        self.assertEqual(gap.supp_est(InvalidStream(), 4, 0.25, 5),
                         core.REJECT)

    def test_preconditions(self):
        with self.assertRaises(error.HugeObjectPreconditionError):
            gap.supp_est(self.stream, 0, 0.25, 5)
        with self.assertRaises(error.HugeObjectPreconditionError):
            gap.supp_est(self.stream, 3, 1.5, 5)
        with self.assertRaises(error.HugeObjectInitializationError):
            gap.VectorStream([])


class TestAdaptiveTester(BaseGapTestCase):

    def test_accepts_yes_instance(self):
        observed, _ = self.instance(instances.YES)
        outcome = gap.alg_adaptive(core.HugeObjectOracle(observed, 7),
                                   self.geo, self.se, self.ge, 0.25, 8,
                                   c_ab=8)
        self.assertEqual(outcome.verdict, core.ACCEPT)
        self.assertIsNone(outcome.step)
        self.assertGreater(outcome.encoded_fraction, 0.5)
        self.assertEqual(outcome.to_dict()['verdict'], core.ACCEPT)

    def test_rejects_no_instance(self):
        observed, _ = self.instance(instances.NO)
        outcome = gap.alg_adaptive(core.HugeObjectOracle(observed, 7),
                                   self.geo, self.se, self.ge, 0.25, 8,
                                   c_ab=8)
        self.assertEqual(outcome.verdict, core.REJECT)
        self.assertEqual(outcome.step, 'iv-c')

    def test_rejects_when_recovery_fails(self):
        zeros = core.ExplicitDistribution.point_mass(
            core.BitVector.zeros(self.geo.N))
        outcome = gap.alg_adaptive(core.HugeObjectOracle(zeros, 7), self.geo,
                                   self.se, self.ge, 0.25, 8)
        self.assertEqual((outcome.verdict, outcome.step), (core.REJECT, 'i'))
        self.assertTrue(outcome.recovery.failed)


class TestRates(BaseGapTestCase):

    def test_recovery_rate_at_sixteen_indices(self):
        geo = codes.GapGeometry(4)
        se, ge = codes.build_gap_codes(geo, 0)
        recovered = 0
        for trial in range(10):
            base = instances.gen_supp_hard(
                instances.SuppHardParams(geo.n, 1 / 9.0, instances.YES),
                trial)
            observed, sigma = instances.gen_gap_distribution(
                geo, se, ge, base, 100 + trial, return_permutation=True)
            recovery = gap.find_permutation(
                core.HugeObjectOracle(observed, 200 + trial), geo)
            recovered += not recovery.failed and recovery.pi == sigma
        self.assertGreaterEqual(recovered, 9)

    def test_mass_outside_the_encodings_fails_the_last_step(self):
        steps = []
        for trial in range(10):
            base = instances.gen_supp_hard(
                instances.SuppHardParams(self.geo.n, 1 / 9.0, instances.YES),
                trial)
            observed = instances.gen_gap_distribution(
                self.geo, self.se, self.ge, base, 100 + trial, alpha=1 / 6.0)
            recovery = gap.find_permutation(
                core.HugeObjectOracle(observed, trial), self.geo)
            steps.append(recovery.step)
        self.assertGreaterEqual(steps.count('vi'), 9)

    def verdicts(self, mode):
        verdicts = []
        for trial in range(9):
            observed, _ = self.instance(mode, seed=10 * trial + 1)
            outcome = gap.alg_adaptive(
                core.HugeObjectOracle(observed, trial), self.geo, self.se,
                self.ge, 0.25, trial, c_ab=8)
            verdicts.append(outcome.verdict)
        return verdicts

    def test_accept_rate(self):
        self.assertGreaterEqual(self.verdicts(instances.YES).count(core.ACCEPT),
                                6)

    def test_reject_rate(self):
        self.assertGreaterEqual(self.verdicts(instances.NO).count(core.REJECT),
                                6)
