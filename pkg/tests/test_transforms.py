import unittest

from pyhugeobject import core, error, transforms


def coupled_verdicts(t, simulated, distribution, seed):
    original, _ = transforms.run_tester(
        t, core.HugeObjectOracle(distribution, seed), seed + 100)
    verdict, counts = transforms.run_tester(
        simulated, core.HugeObjectOracle(distribution, seed), seed + 100)
    return original, verdict, counts


class BaseTransformsTestCase(unittest.TestCase):

    def setUp(self):
        rng = core.derive_rng(12)
        self.distribution = core.ExplicitDistribution.uniform(
            [core.BitVector(rng.integers(0, 2, size=8)) for _ in range(4)]
        )
        v = core.BitVector('01101001')
        self.pair = core.ExplicitDistribution.uniform([v, v.complement()])


class TestCoinsAndPrograms(BaseTransformsTestCase):

    def test_coins(self):
        coins = transforms.Coins.from_seed(3, 4)
        self.assertEqual(len(coins), 4)
        self.assertTrue(0 <= coins.below(2, 5) < 5)
        self.assertEqual(coins.below(1, 7),
                         transforms.Coins.from_seed(3, 4).below(1, 7))
        self.assertEqual(len(coins.prefix(2)), 2)
        with self.assertRaises(error.HugeObjectPreconditionError):
            coins.below(4, 2)

    def test_next_action(self):
        t = transforms.single_query_tester(8)
        coins = transforms.Coins.from_seed(0, t.coin_count)
        self.assertIsInstance(t.next_action(coins, []), transforms.DrawSample)
        action = t.next_action(coins, [0])
        self.assertIsInstance(action, transforms.Query)
        self.assertEqual(action.index, coins.below(0, 8))
        self.assertEqual(t.next_action(coins, [0, 0]),
                         transforms.Verdict(core.ACCEPT))

    def test_run_tester(self):
        point = core.ExplicitDistribution.point_mass(core.BitVector('0000'))
        verdict, counts = transforms.run_tester(
            transforms.single_query_tester(4), core.HugeObjectOracle(point, 1),
            2)
        self.assertEqual(verdict, core.ACCEPT)
        self.assertEqual(counts, {'samples_taken': 1, 'queries_made': 1})

    def test_budget_is_enforced(self):
        def script(coins):
            yield transforms.DrawSample()
            yield transforms.Query(0, 1)
            yield transforms.Verdict(core.ACCEPT)

        t = transforms.TesterProgram('greedy', 4, 1, 0, 0, script)
        with self.assertRaises(error.HugeObjectBudgetError):
            transforms.run_tester(t, core.HugeObjectOracle(self.pair, 1), 2)

    def test_undrawn_sample(self):
        def script(coins):
            yield transforms.Query(0, 1)
            yield transforms.Verdict(core.ACCEPT)

        t = transforms.TesterProgram('eager', 4, 1, 1, 0, script)
        with self.assertRaises(error.HugeObjectOracleError):
            transforms.run_tester(t, core.HugeObjectOracle(self.pair, 1), 2)

    def test_builtin_lookup(self):
        self.assertEqual(transforms.builtin_tester('pal-lift', 6).declared_q, 6)
        self.assertEqual(transforms.builtin_tester('complement-pair', 8).n, 8)
        with self.assertRaises(error.HugeObjectPreconditionError):
            transforms.builtin_tester('oracle-peek', 8)
        with self.assertRaises(error.HugeObjectPreconditionError):
            transforms.simulate('cubic', transforms.constant_tester(4))


class TestExponentialSimulation(BaseTransformsTestCase):

    def test_declared_budget(self):
        t = transforms.complement_pair_tester(8)
        self.assertEqual(transforms.exponential_sim(t).declared_q, 15)

    def test_same_verdicts(self):
        testers = [
            transforms.first_bit_branch_tester(8),
            transforms.complement_pair_tester(8),
            transforms.support_one_tester(8),
            transforms.pal_lift_tester(4),
        ]
        for t in testers:
            simulated = transforms.exponential_sim(t)
            for seed in range(6):
                original, verdict, counts = coupled_verdicts(
                    t, simulated, self.distribution, seed)
                self.assertEqual(original, verdict)
                self.assertLessEqual(counts['queries_made'],
                                     simulated.declared_q)

    def test_nonadaptive(self):
        t = transforms.first_bit_branch_tester(8)
        self.assertFalse(transforms.verify_nonadaptive(t))
        self.assertTrue(transforms.verify_nonadaptive(
            transforms.exponential_sim(t)))
        self.assertTrue(transforms.verify_nonadaptive(
            transforms.single_query_tester(8)))

    def test_query_limit(self):
        with self.assertRaises(error.HugeObjectPreconditionError):
            transforms.exponential_sim(
                transforms.complement_pair_tester(8, rounds=9))


class TestPhasedSimulations(BaseTransformsTestCase):

    def test_semi_adaptive_same_verdicts(self):
        for t in (transforms.first_bit_branch_tester(8),
                  transforms.complement_pair_tester(8),
                  transforms.prefix_majority_tester(8)):
            simulated = transforms.semi_adaptive_sim(t)
            for seed in range(6):
                original, verdict, counts = coupled_verdicts(
                    t, simulated, self.distribution, seed)
                self.assertEqual(original, verdict)
                self.assertEqual(counts['queries_made'],
                                 t.declared_s * t.declared_q)

    def test_quadratic_budget_and_shape(self):
        t = transforms.complement_pair_tester(8)
        simulated = transforms.quadratic_sim(t)
        self.assertEqual(simulated.declared_q, 8)
        self.assertEqual(simulated.coin_count, t.coin_count + t.declared_q)
        self.assertTrue(transforms.verify_nonadaptive(simulated))

    def test_quadratic_on_index_invariant_property(self):
        t = transforms.complement_pair_tester(8)
        simulated = transforms.quadratic_sim(t)
        for seed in range(6):
            original, verdict, counts = coupled_verdicts(
                t, simulated, self.pair, seed)
            self.assertEqual((original, verdict), (core.ACCEPT, core.ACCEPT))
            self.assertEqual(counts['queries_made'], 8)

    def test_semi_adaptive_pads_with_smallest_unused_indices(self):
        simulated = transforms.semi_adaptive_sim(
            transforms.complement_pair_tester(8))
        for seed in range(6):
            coins = transforms.Coins.from_seed(seed, simulated.coin_count)
            _, queries = transforms._drive(simulated, coins, lambda query: 0)
            j = coins.below(0, 8)
            asked = [j, (j + 1) % 8]
            padding = [i for i in range(8) if i not in asked][:2]
            self.assertEqual(queries, [(sample, i) for i in asked + padding
                                       for sample in (0, 1)])

    def test_quadratic_pads_through_its_sequence(self):
        t = transforms.complement_pair_tester(8)
        simulated = transforms.quadratic_sim(t)
        for seed in range(6):
            coins = transforms.Coins.from_seed(seed, simulated.coin_count)
            for bit in (0, 1):
                _, queries = transforms._drive(simulated, coins,
                                               lambda query: bit)
                sequence = transforms._substitution(coins, t.coin_count, 8, 4)
                self.assertEqual(queries, [(sample, i) for i in sequence
                                           for sample in (0, 1)])

    def test_phased_simulations_agree_on_complement_pairs(self):
        t = transforms.complement_pair_tester(8)
        semi = transforms.semi_adaptive_sim(t)
        quad = transforms.quadratic_sim(t)
        rng = core.derive_rng(3)
        for seed in range(6):
            v = core.BitVector(rng.integers(0, 2, size=8))
            pair = core.ExplicitDistribution.uniform([v, v.complement()])
            _, semi_verdict, _ = coupled_verdicts(t, semi, pair, seed)
            _, quad_verdict, _ = coupled_verdicts(t, quad, pair, seed)
            self.assertEqual(semi_verdict, quad_verdict)

    def test_too_many_queries(self):
        t = transforms.complement_pair_tester(3)
        with self.assertRaises(error.HugeObjectPreconditionError):
            transforms.quadratic_sim(t)
        with self.assertRaises(error.HugeObjectPreconditionError):
            transforms.semi_adaptive_sim(t)

    def test_simulate_by_name(self):
        t = transforms.single_query_tester(8)
        self.assertEqual(transforms.simulate('semi', t).name,
                         'semi(single-query)')
