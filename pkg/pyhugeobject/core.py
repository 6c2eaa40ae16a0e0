"""
Binary vectors, index permutations, explicit distributions and the
sample-and-query oracle of the huge object model.

All indices are 0-based: a vector of length ``n`` has positions
``0 .. n-1`` and a permutation over ``[size]`` maps ``0 .. size-1`` to
itself.
"""
import logging
from fractions import Fraction

import numpy as np
from retrying import RetryError, Retrying

from . import error, settings

logger = logging.getLogger(__name__)

MASS_TOLERANCE = 1e-12

# Algorithmic outcomes are returned, never raised.
ACCEPT = 'Accept'
REJECT = 'Reject'
LEARNED = 'Learned'
FAIL = 'Fail'


class _Invalid(object):
    """
    Marker returned by decoders for inputs outside the code's image.
    """

    def __repr__(self):
        return 'Invalid'


INVALID = _Invalid()


def derive_rng(master_seed, *path):
    """
    Build an independent PCG64 stream for ``(master_seed, *path)``.

    The same arguments always produce the same stream, and distinct paths
    (e.g. trial indices) produce statistically independent streams.

    :param master_seed: A non-negative integer seed.
    :type master_seed: int
    :returns: A :py:class:`numpy.random.Generator`
    """
    entropy = [int(master_seed)] + [int(p) for p in path]
    if any(e < 0 for e in entropy):
        raise error.HugeObjectInitializationError(
            'Seeds must be non-negative integers.'
        )
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def child_seed(rng):
    """
    Draw a fresh 63-bit seed from ``rng`` for handing to a sub-component.
    """
    return int(rng.integers(0, 2 ** 63 - 1))


class Resample(Exception):
    """
    Raised by one attempt of a rejection sampler to ask for another draw.
    """
    pass


def _is_resample(exception):
    return isinstance(exception, Resample)


def construct_with_retries(attempt, description, max_attempts=None):
    """
    Call ``attempt`` until it returns instead of raising :py:class:`Resample`.

    :param attempt: A zero-argument callable drawing one candidate.
    :param description: Names the object in the failure message.
    :param max_attempts: Attempt cap; defaults to ``settings.MAX_ATTEMPTS``.
    :raises error.HugeObjectConstructionError: when the cap is reached
    """
    cap = int(settings.MAX_ATTEMPTS if max_attempts is None else max_attempts)
    retryer = Retrying(
        stop_max_attempt_number=cap,
        retry_on_exception=_is_resample
    )
    try:
        return retryer.call(attempt)
    except (Resample, RetryError) as exc:
        raise error.HugeObjectConstructionError(
            '{what}: gave up after {cap} attempts ({detail})'.format(
                what=description,
                cap=cap,
                detail=exc
            )
        )


def largest_remainder(values, total):
    """
    Round non-negative reals summing to ``total`` to integers with the same
    sum, each equal to the floor or the ceiling of its value.

    Remainders are handed out by decreasing fractional part; equal
    fractional parts go to the smaller index first.
    """
    values = np.asarray(values, dtype=float)
    floors = np.floor(values + 1e-12).astype(np.int64)
    floors = np.minimum(floors, np.ceil(values).astype(np.int64))
    missing = int(total) - int(floors.sum())
    if missing < 0 or missing > values.size:
        raise error.HugeObjectPreconditionError(
            'Values sum to {s}, which cannot round to {t}.'.format(
                s=values.sum(),
                t=total
            )
        )
    fractions = values - floors
    # stable sort on -fraction keeps first-index tie-breaking
    order = np.argsort(-fractions, kind='stable')
    rounded = floors.copy()
    rounded[order[:missing]] += 1
    return rounded


class BitVector(object):
    """
    Represents an immutable element of ``{0,1}^n``.

    Public Attributes:
        - ``length``
        - ``bits`` (read-only ``numpy.uint8`` array)

    Example Usage:

        .. code-block:: python

            In [1]: v = BitVector('0110')

            In [2]: v[1], v.weight, str(v)
            Out[2]: (1, 2, '0110')

    """

    __slots__ = ('_bits', '_key')

    def __init__(self, bits):
        if isinstance(bits, str):
            if not bits or set(bits) - {'0', '1'}:
                raise error.HugeObjectInitializationError(
                    'A bit string may only contain 0 and 1: {bits!r}'.format(
                        bits=bits
                    )
                )
            array = np.frombuffer(bits.encode('ascii'), dtype=np.uint8) - 48
        else:
            array = np.asarray(bits)
            if array.ndim != 1 or array.size == 0:
                raise error.HugeObjectInitializationError(
                    'bits must be a non-empty one-dimensional sequence.'
                )
            if not np.all((array == 0) | (array == 1)):
                raise error.HugeObjectInitializationError(
                    'Every element of a BitVector must be 0 or 1.'
                )
        array = np.array(array, dtype=np.uint8)
        array.setflags(write=False)
        self._bits = array
        self._key = array.tobytes()

    @classmethod
    def zeros(cls, length):
        return cls(np.zeros(length, dtype=np.uint8))

    @classmethod
    def ones(cls, length):
        return cls(np.ones(length, dtype=np.uint8))

    @property
    def bits(self):
        return self._bits

    @property
    def length(self):
        return int(self._bits.size)

    @property
    def weight(self):
        """
        The number of ones.
        """
        return int(self._bits.sum())

    def restrict(self, indices):
        """
        The projection onto ``indices``, in the given order.
        """
        indices = np.asarray(indices, dtype=np.intp)
        if indices.size and (indices.min() < 0 or indices.max() >= self.length):
            raise error.HugeObjectOracleError(
                'Projection index out of range for length {n}.'.format(
                    n=self.length
                )
            )
        return self._bits[indices]

    def complement(self):
        return BitVector(1 - self._bits)

    def __len__(self):
        return self.length

    def __getitem__(self, index):
        return int(self._bits[index])

    def __iter__(self):
        return (int(b) for b in self._bits)

    def __eq__(self, other):
        return isinstance(other, BitVector) and self._key == other._key

    def __ne__(self, other):
        return not self == other

    def __lt__(self, other):
        return str(self) < str(other)

    def __hash__(self):
        return hash(self._key)

    def __str__(self):
        return (self._bits + 48).tobytes().decode('ascii')

    def __repr__(self):
        return 'BitVector({bits!r})'.format(bits=str(self))


class Permutation(object):
    """
    Represents a bijection on ``[size]``.

    Applying a permutation ``p`` to a vector ``v`` yields the vector whose
    position ``i`` reads source position ``p(i)``.
    """

    __slots__ = ('_mapping',)

    def __init__(self, mapping):
        array = np.array(mapping, dtype=np.intp)
        if array.ndim != 1 or array.size == 0:
            raise error.HugeObjectInitializationError(
                'A permutation needs a non-empty mapping.'
            )
        if not np.array_equal(np.sort(array), np.arange(array.size)):
            raise error.HugeObjectInitializationError(
                'mapping is not a bijection on [{size}].'.format(size=array.size)
            )
        array.setflags(write=False)
        self._mapping = array

    @classmethod
    def identity(cls, size):
        return cls(np.arange(size))

    @property
    def size(self):
        return int(self._mapping.size)

    @property
    def mapping(self):
        return self._mapping

    def __call__(self, i):
        return int(self._mapping[i])

    def __eq__(self, other):
        return isinstance(other, Permutation) and \
            np.array_equal(self._mapping, other._mapping)

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self._mapping.tobytes())

    def __repr__(self):
        return 'Permutation({mapping})'.format(mapping=self._mapping.tolist())


def compose(p, q):
    """
    The permutation ``r`` with ``apply(v, r) == apply(apply(v, p), q)``.
    """
    if p.size != q.size:
        raise error.HugeObjectDimensionError('Permutation sizes differ.')
    return Permutation(p.mapping[q.mapping])


def inverse(p):
    inv = np.empty(p.size, dtype=np.intp)
    inv[p.mapping] = np.arange(p.size)
    return Permutation(inv)


def random_permutation(size, rng):
    return Permutation(rng.permutation(size))


def apply_permutation(v, p):
    """
    Permute the indices of ``v``: ``result[i] = v[p(i)]``.

    :param v: The vector to permute.
    :type v: BitVector
    :param p: A permutation of the same size.
    :type p: Permutation
    :returns: A new :py:class:`BitVector`
    """
    if v.length != p.size:
        raise error.HugeObjectDimensionError(
            'Vector length {n} does not match permutation size {m}.'.format(
                n=v.length,
                m=p.size
            )
        )
    return BitVector(v.bits[p.mapping])


class ExplicitDistribution(object):
    """
    Represents a finite-support distribution over ``{0,1}^n``.

    Support vectors are pairwise distinct, all of length ``dimension``,
    carry strictly positive mass, and the masses sum to one within
    ``1e-12``.

    Public Attributes:
        - ``dimension``
        - ``support`` (tuple of ``(BitVector, probability)`` pairs)
        - ``vectors``
        - ``probabilities`` (``numpy`` array)
        - ``support_size``

    Public Methods:
        - :py:meth:`from_weights`
        - :py:meth:`uniform`
        - :py:meth:`point_mass`
        - :py:meth:`mass_of`
        - :py:meth:`sample`
        - :py:meth:`matrix`
    """

    def __init__(self, support):
        support = tuple((v, float(p)) for v, p in support)
        if not support:
            raise error.HugeObjectDistributionError(
                'A distribution needs a non-empty support.'
            )

        dimension = support[0][0].length
        seen = set()
        for vector, probability in support:
            if not isinstance(vector, BitVector):
                raise error.HugeObjectDistributionError(
                    'Support elements must be BitVector instances.'
                )
            if vector.length != dimension:
                raise error.HugeObjectDistributionError(
                    'Support vector {v} has length {n}, expected {d}.'.format(
                        v=vector,
                        n=vector.length,
                        d=dimension
                    )
                )
            if not probability > 0:
                raise error.HugeObjectDistributionError(
                    'Probability of {v} must be strictly positive.'.format(
                        v=vector
                    )
                )
            if vector in seen:
                raise error.HugeObjectDistributionError(
                    'Duplicate support vector {v}.'.format(v=vector)
                )
            seen.add(vector)

        total = sum(p for _, p in support)
        if abs(total - 1.0) > MASS_TOLERANCE:
            raise error.HugeObjectDistributionError(
                'Probabilities sum to {total!r}, not 1.'.format(total=total)
            )

        self.dimension = dimension
        self.support = support
        self._index = {v: i for i, (v, _) in enumerate(support)}
        self._cumulative = None

    @classmethod
    def from_weights(cls, weights, normalize=True):
        """
        Build a distribution from ``(vector, weight)`` pairs or a mapping,
        merging repeated vectors by summing their weight.

        :param normalize: Divide by the total weight first.
        :type normalize: bool
        """
        if hasattr(weights, 'items'):
            weights = weights.items()
        merged = {}
        order = []
        for vector, weight in weights:
            if vector not in merged:
                merged[vector] = 0.0
                order.append(vector)
            merged[vector] += float(weight)
        total = sum(merged.values()) if normalize else 1.0
        if total <= 0:
            raise error.HugeObjectDistributionError('Total weight must be positive.')
        return cls((v, merged[v] / total) for v in order if merged[v] > 0)

    @classmethod
    def uniform(cls, vectors):
        """
        The uniform distribution over the rows of a corresponding list;
        repeated vectors accumulate mass.
        """
        vectors = list(vectors)
        return cls.from_weights(((v, 1.0) for v in vectors), normalize=True)

    @classmethod
    def point_mass(cls, vector):
        return cls([(vector, 1.0)])

    @property
    def vectors(self):
        return tuple(v for v, _ in self.support)

    @property
    def probabilities(self):
        return np.array([p for _, p in self.support], dtype=float)

    @property
    def support_size(self):
        return len(self.support)

    def matrix(self):
        """
        The support as a ``support_size x dimension`` uint8 array.
        """
        return np.vstack([v.bits for v in self.vectors])

    def mass_of(self, vector):
        i = self._index.get(vector)
        return 0.0 if i is None else self.support[i][1]

    def __contains__(self, vector):
        return vector in self._index

    def restrict(self, indices):
        """
        Push the distribution forward to the coordinates ``indices``.
        """
        return ExplicitDistribution.from_weights(
            ((BitVector(v.restrict(indices)), p) for v, p in self.support),
            normalize=False
        )

    def sample_index(self, rng):
        """
        Draw one support index using a single uniform from ``rng``.
        """
        if self._cumulative is None:
            self._cumulative = np.cumsum(self.probabilities)
        u = rng.random() * self._cumulative[-1]
        i = int(np.searchsorted(self._cumulative, u, side='right'))
        return min(i, self.support_size - 1)

    def sample(self, rng):
        return self.support[self.sample_index(rng)][0]

    def __eq__(self, other):
        if not isinstance(other, ExplicitDistribution):
            return False
        if self.dimension != other.dimension or \
                self.support_size != other.support_size:
            return False
        return all(
            abs(p - other.mass_of(v)) <= MASS_TOLERANCE for v, p in self.support
        )

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'ExplicitDistribution(dimension={d}, support=<{s} vectors>)'.format(
            d=self.dimension,
            s=self.support_size
        )


def permute_distribution(distribution, p):
    """
    Push ``distribution`` forward under the index permutation ``p``.
    """
    if distribution.dimension != p.size:
        raise error.HugeObjectDimensionError(
            'Distribution dimension {n} does not match permutation size {m}.'
            .format(n=distribution.dimension, m=p.size)
        )
    return ExplicitDistribution(
        (apply_permutation(v, p), prob) for v, prob in distribution.support
    )


class QueryBudget(object):
    """
    Sample and query caps for an oracle; ``None`` means unlimited.
    """

    def __init__(self, max_samples=None, max_queries=None):
        for name, value in (('max_samples', max_samples),
                            ('max_queries', max_queries)):
            if value is not None and (not isinstance(value, int) or value < 0):
                raise error.HugeObjectInitializationError(
                    '{name} must be a non-negative integer or None.'.format(
                        name=name
                    )
                )
        self.max_samples = max_samples
        self.max_queries = max_queries

    def __repr__(self):
        return 'QueryBudget(max_samples={s}, max_queries={q})'.format(
            s=self.max_samples,
            q=self.max_queries
        )


UNLIMITED = QueryBudget()


class HugeObjectOracle(object):
    """
    Sample-and-query access to a hidden distribution.

    Drawing a sample stores a fresh i.i.d. vector but reveals nothing;
    every revealed bit increments ``queries_made`` by one, including a
    repeated query of the same cell.

    Public Attributes:
        - ``dimension``
        - ``samples_taken``
        - ``queries_made``
        - ``transcript`` (list of ``('sample', sid)`` and
          ``('query', sid, j, bit)`` events)

    Public Methods:
        - :py:meth:`draw_sample`
        - :py:meth:`query_bit`
        - :py:meth:`reveal_full`

    Example Usage:

        .. code-block:: python

            In [1]: oracle = HugeObjectOracle(ExplicitDistribution.point_mass(
               ...:     BitVector('101')), rng_seed=3)

            In [2]: sid = oracle.draw_sample()

            In [3]: oracle.query_bit(sid, 1), oracle.queries_made
            Out[3]: (0, 1)

    """

    def __init__(self, distribution, rng_seed, budget=UNLIMITED):
        if not isinstance(distribution, ExplicitDistribution):
            raise error.HugeObjectInitializationError(
                'distribution must be an ExplicitDistribution.'
            )
        self._distribution = distribution
        self.rng_seed = int(rng_seed)
        self.budget = budget
        self._rng = derive_rng(self.rng_seed)
        self._held_samples = []
        self.samples_taken = 0
        self.queries_made = 0
        self.transcript = []

    @property
    def dimension(self):
        return self._distribution.dimension

    def _charge_queries(self, count):
        cap = self.budget.max_queries
        if cap is not None and self.queries_made + count > cap:
            raise error.HugeObjectBudgetError(
                'Query budget of {cap} exceeded.'.format(cap=cap)
            )
        self.queries_made += count

    def _held(self, sid):
        if not isinstance(sid, (int, np.integer)) or \
                not 0 <= sid < len(self._held_samples):
            raise error.HugeObjectOracleError(
                'Unknown sample id {sid!r}.'.format(sid=sid)
            )
        return self._held_samples[sid]

    def draw_sample(self):
        """
        Draw a fresh sample and return its id; no bits are revealed.
        """
        cap = self.budget.max_samples
        if cap is not None and self.samples_taken >= cap:
            raise error.HugeObjectBudgetError(
                'Sample budget of {cap} exceeded.'.format(cap=cap)
            )
        self._held_samples.append(self._distribution.sample(self._rng))
        sid = self.samples_taken
        self.samples_taken += 1
        self.transcript.append(('sample', sid))
        return sid

    def query_bit(self, sid, j):
        """
        Reveal bit ``j`` of sample ``sid``.

        :param sid: A sample id returned by :py:meth:`draw_sample`.
        :type sid: int
        :param j: A 0-based index.
        :type j: int
        :returns: 0 or 1
        """
        vector = self._held(sid)
        if not isinstance(j, (int, np.integer)) or not 0 <= j < vector.length:
            raise error.HugeObjectOracleError(
                'Index {j!r} out of range for dimension {n}.'.format(
                    j=j,
                    n=vector.length
                )
            )
        self._charge_queries(1)
        bit = vector[j]
        self.transcript.append(('query', sid, int(j), bit))
        return bit

    def query_bits(self, sid, indices):
        """
        Reveal several bits of one sample, one query each.

        Accounting and transcript events are the same as for repeated
        :py:meth:`query_bit` calls.
        """
        vector = self._held(sid)
        indices = np.asarray(list(indices), dtype=np.intp)
        if indices.size and (indices.min() < 0 or indices.max() >= vector.length):
            raise error.HugeObjectOracleError(
                'Index set out of range for dimension {n}.'.format(
                    n=vector.length
                )
            )
        self._charge_queries(int(indices.size))
        bits = vector.bits[indices]
        self.transcript.extend(
            ('query', sid, int(j), int(bit)) for j, bit in zip(indices, bits)
        )
        return bits.copy()

    def reveal_full(self, sid):
        """
        Reveal a whole sample at the cost of ``dimension`` queries.
        """
        vector = self._held(sid)
        self._charge_queries(vector.length)
        self.transcript.append(('reveal', sid))
        return vector

    def counters(self):
        return {
            'samples_taken': self.samples_taken,
            'queries_made': self.queries_made,
        }

    def __repr__(self):
        return 'HugeObjectOracle(distribution=<hidden>, rng_seed={seed}, ' \
            'samples_taken={s}, queries_made={q})'.format(
                seed=self.rng_seed,
                s=self.samples_taken,
                q=self.queries_made
            )


def draw_sample(o):
    return o.draw_sample()


def query_bit(o, sid, j):
    return o.query_bit(sid, j)


def reveal_full(o, sid):
    return o.reveal_full(sid)


###########################
# Distribution file format #
###########################
def _parse_probability(token, line_number):
    try:
        value = Fraction(token.strip())
    except (ValueError, ZeroDivisionError):
        raise error.HugeObjectDistributionError(
            'Cannot parse probability {token!r}.'.format(token=token),
            line_number=line_number
        )
    return value


def parse_distribution(lines):
    """
    Parse distribution records ``<probability><TAB><bitstring>``.

    Probabilities may be decimals or exact rationals ``p/q``; lines whose
    first non-blank character is ``#`` and blank lines are ignored. The
    dimension is fixed by the first record.

    :param lines: An iterable of text lines.
    :returns: An :py:class:`ExplicitDistribution`
    """
    records = []
    seen = {}
    dimension = None
    total = Fraction(0)
    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        parts = line.split('\t') if '\t' in line else line.split()
        if len(parts) != 2:
            raise error.HugeObjectDistributionError(
                'Expected "<probability>\\t<bits>".',
                line_number=line_number
            )
        probability = _parse_probability(parts[0], line_number)
        bits = parts[1].strip()
        try:
            vector = BitVector(bits)
        except error.HugeObjectInitializationError as exc:
            raise error.HugeObjectDistributionError(str(exc), line_number)
        if dimension is None:
            dimension = vector.length
        elif vector.length != dimension:
            raise error.HugeObjectDistributionError(
                'Dimension {n} differs from {d}.'.format(
                    n=vector.length,
                    d=dimension
                ),
                line_number=line_number
            )
        if vector in seen:
            raise error.HugeObjectDistributionError(
                'Duplicate support vector {v} (first on line {first}).'.format(
                    v=vector,
                    first=seen[vector]
                ),
                line_number=line_number
            )
        if probability <= 0:
            raise error.HugeObjectDistributionError(
                'Probability must be strictly positive.',
                line_number=line_number
            )
        seen[vector] = line_number
        total += probability
        records.append((vector, probability))

    if not records:
        raise error.HugeObjectDistributionError('No records found.')
    if abs(float(total) - 1.0) > MASS_TOLERANCE:
        raise error.HugeObjectDistributionError(
            'Probabilities sum to {total}, not 1.'.format(total=float(total))
        )
    return ExplicitDistribution((v, float(p)) for v, p in records)


def load_distribution(path):
    with open(path, encoding='utf-8') as f:
        return parse_distribution(f)


def format_distribution(distribution):
    lines = ['# dimension {d}'.format(d=distribution.dimension)]
    for vector, probability in distribution.support:
        lines.append('{p!r}\t{v}'.format(p=probability, v=vector))
    return '\n'.join(lines) + '\n'


def dump_distribution(distribution, path):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_distribution(distribution))
