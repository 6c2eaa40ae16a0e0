"""
Testers as replayable programs, and the simulations that turn an adaptive
tester into a non-adaptive one.

A :py:class:`TesterProgram` wraps a generator function ``script(coins)``
that yields actions and receives their answers through ``send``:

- ``DrawSample()`` is answered with the tester-local sample number
  (``0, 1, ...`` in draw order);
- ``Query(sample, index)`` is answered with the bit;
- ``Verdict(value)`` ends the run.

Given the same coins and the same answers a script always yields the same
actions, so any run can be replayed.
"""
import collections
import logging
import math

import numpy as np

from . import core, error

logger = logging.getLogger(__name__)

EXPONENTIAL_QUERY_LIMIT = 16

DrawSample = collections.namedtuple('DrawSample', [])
Query = collections.namedtuple('Query', ['sample', 'index'])
Verdict = collections.namedtuple('Verdict', ['value'])


class Coins(object):
    """
    A finite stream of uniform reals in ``[0, 1)`` with positional access.

    Public Methods:
        - :py:meth:`from_seed`
        - :py:meth:`below`
        - :py:meth:`prefix`
    """

    def __init__(self, values):
        self.values = np.asarray(values, dtype=float)

    @classmethod
    def from_seed(cls, seed, count):
        return cls(core.derive_rng(seed).random(count))

    def __len__(self):
        return int(self.values.size)

    def below(self, i, bound):
        """
        Coin ``i`` as an integer in ``[0, bound)``.
        """
        if not 0 <= i < self.values.size:
            raise error.HugeObjectPreconditionError(
                'Coin {i} requested from a stream of {c}.'.format(
                    i=i,
                    c=self.values.size
                )
            )
        return min(int(self.values[i] * bound), bound - 1)

    def prefix(self, count):
        return Coins(self.values[:count])


class TesterProgram(object):
    """
    A sample-and-query tester over ``{0,1}^n``.

    Public Attributes:
        - ``name``
        - ``n``
        - ``declared_s``, ``declared_q`` (budgets the script never exceeds)
        - ``coin_count`` (length of the coin stream it reads)

    Public Methods:
        - :py:meth:`script`
        - :py:meth:`next_action`
    """

    def __init__(self, name, n, declared_s, declared_q, coin_count, script):
        self.name = name
        self.n = int(n)
        self.declared_s = int(declared_s)
        self.declared_q = int(declared_q)
        self.coin_count = int(coin_count)
        self._script = script

    def script(self, coins):
        return self._script(coins)

    def next_action(self, coins, answers):
        """
        The action the script yields after receiving ``answers``.
        """
        script = self._script(coins)
        action = next(script)
        for answer in answers:
            action = script.send(answer)
        return action

    def __repr__(self):
        return 'TesterProgram(name={name!r}, s={s}, q={q})'.format(
            name=self.name,
            s=self.declared_s,
            q=self.declared_q
        )


def _drive(t, coins, answer, draw=None):
    """
    Run ``t`` to its verdict, answering every query with ``answer(query)``
    and calling ``draw()`` on every draw.

    :returns: ``(verdict, queries)`` where ``queries`` lists the
        ``(sample, index)`` cells in order
    """
    script = t.script(coins)
    samples = 0
    queries = []
    action = next(script)
    while not isinstance(action, Verdict):
        if isinstance(action, DrawSample):
            samples += 1
            if samples > t.declared_s:
                raise error.HugeObjectBudgetError(
                    '{name} drew more than {s} samples.'.format(
                        name=t.name,
                        s=t.declared_s
                    )
                )
            if draw is not None:
                draw()
            reply = samples - 1
        elif isinstance(action, Query):
            if not 0 <= action.sample < samples:
                raise error.HugeObjectOracleError(
                    '{name} queried undrawn sample {a}.'.format(
                        name=t.name,
                        a=action.sample
                    )
                )
            if len(queries) >= t.declared_q:
                raise error.HugeObjectBudgetError(
                    '{name} made more than {q} queries.'.format(
                        name=t.name,
                        q=t.declared_q
                    )
                )
            queries.append((action.sample, action.index))
            reply = answer(action)
        else:
            raise error.HugeObjectPreconditionError(
                'Unknown action {a!r}.'.format(a=action)
            )
        action = script.send(reply)
    return action.value, queries


def run_tester(t, o, seed):
    """
    Run ``t`` against an oracle with coins drawn from ``seed``.

    :returns: ``(verdict, counters)`` with the oracle's counters
    :raises error.HugeObjectBudgetError: when ``t`` exceeds its declared
        budgets
    """
    coins = Coins.from_seed(seed, t.coin_count)
    sample_ids = []
    verdict, _ = _drive(
        t,
        coins,
        lambda query: o.query_bit(sample_ids[query.sample], query.index),
        draw=lambda: sample_ids.append(o.draw_sample())
    )
    logger.debug('run_tester: %s -> %s', t.name, verdict)
    return verdict, o.counters()


def _reachable_cells(t, coins):
    """
    Every query cell ``t`` can reach under ``coins`` over all answer
    branches, and the largest number of samples any branch draws. A cell
    queried again on the same branch is answered consistently.
    """
    cells = set()
    most = [0]

    def explore(answers, path, drawn, asked):
        action = t.next_action(coins, answers)
        if isinstance(action, Verdict):
            return
        if isinstance(action, DrawSample):
            if drawn >= t.declared_s:
                raise error.HugeObjectBudgetError(
                    '{name} drew more than {s} samples.'.format(
                        name=t.name,
                        s=t.declared_s
                    )
                )
            most[0] = max(most[0], drawn + 1)
            explore(answers + [drawn], path, drawn + 1, asked)
            return
        if asked >= t.declared_q:
            raise error.HugeObjectBudgetError(
                '{name} made more than {q} queries.'.format(
                    name=t.name,
                    q=t.declared_q
                )
            )
        cell = (action.sample, action.index)
        cells.add(cell)
        if cell in path:
            explore(answers + [path[cell]], path, drawn, asked + 1)
            return
        for bit in (0, 1):
            branch = dict(path)
            branch[cell] = bit
            explore(answers + [bit], branch, drawn, asked + 1)

    explore([], {}, 0, 0)
    return cells, most[0]


def exponential_sim(t):
    """
    The non-adaptive tester that queries every cell ``t`` could reach under
    its coins, at most ``2^q - 1`` of them, and then replays ``t`` on the
    recorded answers.

    Driven by the same coins and samples, it returns exactly the verdict of
    ``t``.
    """
    if t.declared_q > EXPONENTIAL_QUERY_LIMIT:
        raise error.HugeObjectPreconditionError(
            'Tree enumeration supports at most {limit} queries, got {q}.'
            .format(limit=EXPONENTIAL_QUERY_LIMIT, q=t.declared_q)
        )

    def script(coins):
        cells, draws = _reachable_cells(t, coins)
        for _ in range(draws):
            yield DrawSample()
        recorded = {}
        for cell in sorted(cells):
            recorded[cell] = yield Query(*cell)
        verdict, _ = _drive(
            t, coins, lambda query: recorded[(query.sample, query.index)]
        )
        yield Verdict(verdict)

    return TesterProgram(
        'exp({name})'.format(name=t.name),
        t.n,
        t.declared_s,
        2 ** t.declared_q - 1,
        t.coin_count,
        script
    )


def _substitution(coins, offset, n, count):
    """
    A uniformly random non-repeating sequence of ``count`` indices from
    ``[n]``, by a partial Fisher-Yates shuffle on coins from ``offset``.
    """
    order = np.arange(n)
    for i in range(count):
        j = i + coins.below(offset + i, n - i)
        order[i], order[j] = order[j], order[i]
    return [int(x) for x in order[:count]]


def _phased(t, substitute):
    """
    The two-phase simulation: every new index ``t`` asks for is mapped by
    ``pick`` and queried in all ``s`` samples at once. Afterwards the
    smallest indices ``t`` never asked for are mapped and queried the same
    way until ``q`` are covered.

    :param substitute: ``coins -> pick`` where ``pick(index, rank)`` maps
        the ``rank``-th new index.
    """
    s, q = t.declared_s, t.declared_q

    def script(coins):
        own = coins.prefix(t.coin_count)
        pick = substitute(coins)
        for _ in range(s):
            yield DrawSample()
        recorded = {}
        mapped = {}

        def cover(index):
            mapped[index] = pick(index, len(mapped))
            for sample in range(s):
                recorded[(sample, mapped[index])] = yield Query(
                    sample, mapped[index]
                )

        runner = t.script(own)
        drawn = 0
        action = next(runner)
        while not isinstance(action, Verdict):
            if isinstance(action, DrawSample):
                drawn += 1
                action = runner.send(drawn - 1)
                continue
            if action.index not in mapped:
                yield from cover(action.index)
            action = runner.send(recorded[(action.sample,
                                           mapped[action.index])])
        for index in range(t.n):
            if len(mapped) >= q:
                break
            if index not in mapped:
                yield from cover(index)
        yield Verdict(action.value)

    return script


def quadratic_sim(t):
    """
    The non-adaptive tester that replaces the ``i``-th new index ``t`` asks
    for by ``r_i`` from a random non-repeating sequence ``r_1 .. r_q`` and
    queries it in all ``s`` samples. Padding indices are substituted the
    same way, so the queried cells are always ``r_1 .. r_q`` in every
    sample, for exactly ``s * q`` queries. It matches ``t`` for
    index-invariant properties only.

    :raises error.HugeObjectPreconditionError: when ``q > n``
    """
    if t.declared_q > t.n:
        raise error.HugeObjectPreconditionError(
            'q={q} distinct indices do not fit in n={n}.'.format(
                q=t.declared_q,
                n=t.n
            )
        )

    def substitute(coins):
        sequence = _substitution(coins, t.coin_count, t.n, t.declared_q)
        return lambda index, rank: sequence[rank]

    return TesterProgram(
        'quad({name})'.format(name=t.name),
        t.n,
        t.declared_s,
        t.declared_s * t.declared_q,
        t.coin_count + t.declared_q,
        _phased(t, substitute)
    )


def semi_adaptive_sim(t):
    """
    The intermediate of :py:func:`quadratic_sim` without substitution:
    each new index is queried in all ``s`` samples, then the smallest
    unused indices pad the run to ``q`` distinct indices. Same verdict as
    ``t`` on the same samples and coins.
    """
    if t.declared_q > t.n:
        raise error.HugeObjectPreconditionError(
            'q={q} distinct indices do not fit in n={n}.'.format(
                q=t.declared_q,
                n=t.n
            )
        )

    def substitute(coins):
        return lambda index, rank: index

    return TesterProgram(
        'semi({name})'.format(name=t.name),
        t.n,
        t.declared_s,
        t.declared_s * t.declared_q,
        t.coin_count,
        _phased(t, substitute)
    )



def verify_nonadaptive(t, seeds=range(8)):
    """
    Whether ``t`` asks the same query cells when every answer is 0 as when
    every answer is 1, for each coin stream drawn from ``seeds``.
    """
    for seed in seeds:
        coins = Coins.from_seed(seed, t.coin_count)
        _, zeros = _drive(t, coins, lambda query: 0)
        _, ones = _drive(t, coins, lambda query: 1)
        if collections.Counter(zeros) != collections.Counter(ones):
            return False
    return True


def constant_tester(n, verdict=core.ACCEPT):
    def script(coins):
        yield Verdict(verdict)
    return TesterProgram('constant', n, 0, 0, 0, script)


def single_query_tester(n):
    """
    Accepts iff a random bit of one sample is 0.
    """
    def script(coins):
        yield DrawSample()
        bit = yield Query(0, coins.below(0, n))
        yield Verdict(core.ACCEPT if bit == 0 else core.REJECT)
    return TesterProgram('single-query', n, 1, 1, 1, script)


def first_bit_branch_tester(n):
    """
    Reads bit 0 of one sample, then bit 1 or bit 2 depending on it, and
    accepts iff the two agree.
    """
    if n < 3:
        raise error.HugeObjectPreconditionError('first-bit-branch needs n >= 3.')

    def script(coins):
        yield DrawSample()
        first = yield Query(0, 0)
        second = yield Query(0, 1 if first == 0 else 2)
        yield Verdict(core.ACCEPT if first == second else core.REJECT)
    return TesterProgram('first-bit-branch', n, 1, 2, 0, script)


def complement_pair_tester(n, rounds=2):
    """
    Tests that the support is ``{v, complement(v)}`` for some ``v``: two
    samples must either agree or disagree on every position read. The
    first position is random; each next one is ``(j + 1 + a) mod n`` for
    the bit ``a`` just read from the first sample.
    """
    def script(coins):
        yield DrawSample()
        yield DrawSample()
        j = coins.below(0, n)
        relation = None
        for _ in range(rounds):
            a = yield Query(0, j)
            c = yield Query(1, j)
            if relation is None:
                relation = a ^ c
            elif a ^ c != relation:
                yield Verdict(core.REJECT)
                return
            j = (j + 1 + a) % n
        yield Verdict(core.ACCEPT)
    return TesterProgram('complement-pair', n, 2, 2 * rounds, 1, script)


def prefix_majority_tester(n):
    """
    Accepts iff at least two of the first three bits of one sample are 0.
    Its property depends on index positions.
    """
    if n < 3:
        raise error.HugeObjectPreconditionError('prefix-majority needs n >= 3.')

    def script(coins):
        yield DrawSample()
        zeros = 0
        for j in range(3):
            bit = yield Query(0, j)
            zeros += bit == 0
        yield Verdict(core.ACCEPT if zeros >= 2 else core.REJECT)
    return TesterProgram('prefix-majority', n, 1, 3, 0, script)


def support_one_tester(n, samples=3, width=2):
    """
    Compares ``samples`` samples on ``width`` shared random positions and
    rejects at the first disagreement.
    """
    width = min(width, n)

    def script(coins):
        positions = _substitution(coins, 0, n, width)
        for _ in range(samples):
            yield DrawSample()
        reference = []
        for j in positions:
            bit = yield Query(0, j)
            reference.append(bit)
        for sample in range(1, samples):
            for j, expected in zip(positions, reference):
                bit = yield Query(sample, j)
                if bit != expected:
                    yield Verdict(core.REJECT)
                    return
        yield Verdict(core.ACCEPT)
    return TesterProgram('support-one', n, samples, samples * width, width,
                         script)


def pal_lift_tester(letters, iterations=1):
    """
    The string stage of the palindrome lift on one sample of
    ``2 * letters`` bits. The binary search reads only the high bit of a
    letter; each mirrored check reads two whole letters.
    """
    search = int(math.ceil(math.log2(letters + 1)))

    def script(coins):
        yield DrawSample()
        low, high = 0, letters
        while low < high:
            middle = (low + high) // 2
            top = yield Query(0, 2 * middle)
            if top == 1:
                high = middle
            else:
                low = middle + 1
        boundary = low
        for i in range(iterations):
            j = coins.below(i, letters)
            if j < boundary:
                mirror, allowed = boundary - 1 - j, (0, 1)
            else:
                mirror, allowed = letters - 1 + boundary - j, (2, 3)
            pair = []
            for position in (j, mirror):
                top = yield Query(0, 2 * position)
                bottom = yield Query(0, 2 * position + 1)
                pair.append(2 * top + bottom)
            if pair[0] != pair[1] or pair[0] not in allowed:
                yield Verdict(core.REJECT)
                return
        yield Verdict(core.ACCEPT)
    return TesterProgram('pal-lift', 2 * letters, 1, search + 4 * iterations,
                         iterations, script)


BUILTIN_TESTERS = {
    'constant': constant_tester,
    'single-query': single_query_tester,
    'first-bit-branch': first_bit_branch_tester,
    'complement-pair': complement_pair_tester,
    'prefix-majority': prefix_majority_tester,
    'support-one': support_one_tester,
}


def builtin_tester(name, n):
    """
    A builtin tester over ``{0,1}^n`` by name; ``pal-lift`` reads
    ``n // 2`` letters.
    """
    if name == 'pal-lift':
        return pal_lift_tester(n // 2)
    if name not in BUILTIN_TESTERS:
        raise error.HugeObjectPreconditionError(
            'Unknown tester {name!r}; choose from {names}.'.format(
                name=name,
                names=', '.join(sorted(list(BUILTIN_TESTERS) + ['pal-lift']))
            )
        )
    return BUILTIN_TESTERS[name](n)


def simulate(name, t):
    """
    Apply the simulation ``'exp'``, ``'quad'`` or ``'semi'`` to ``t``.
    """
    simulations = {
        'exp': exponential_sim,
        'quad': quadratic_sim,
        'semi': semi_adaptive_sim,
    }
    if name not in simulations:
        raise error.HugeObjectPreconditionError(
            'Unknown simulation {name!r}.'.format(name=name)
        )
    return simulations[name](t)
