"""
Recovering the hidden index permutation of a gap-property distribution and
the adaptive tester built on it.

Every vector in the canonical layout (see :py:class:`codes.GapGeometry`)
is either a special ordering vector or an ``FE`` encoding. A recovered
permutation ``pi`` maps an observed position to its canonical position, so
the canonical form of an observed vector ``Y`` is
``apply_permutation(Y, inverse(pi))``.
"""
import logging
import math

import numpy as np

from . import codes, core, error, settings

logger = logging.getLogger(__name__)

FAIL_FRACTION_FACTOR = 4
ENCODED_FRACTION_FLOOR = 0.5
SUPPORT_ONE_CONFIDENCE = 0.05
MASS_SLACK = 1e-9

SPECIAL = 'special'
ENCODING = 'encoding'
OTHER = 'other'


def _binary(value, width):
    """
    ``value`` as ``width`` bits, most significant first.
    """
    return (value >> np.arange(width - 1, -1, -1)) & 1


class GapSpecialVectors(object):
    """
    The ordering vectors of the canonical layout.

    - ``U`` has a single 1 at position 0.
    - ``V[i-1]`` for ``i = 1 .. b`` has ones exactly on ``0 .. i``.
    - ``W[i]`` for ``i = 0 .. pattern_count-1`` is 0 at position 0, carries
      ``i`` in binary on ``B``, and at encoding offset ``p`` carries bit
      ``i`` of ``p``.

    Public Attributes:
        - ``U``
        - ``V`` (tuple)
        - ``W`` (tuple)
    """

    def __init__(self, geo):
        self.geometry = geo
        u = np.zeros(geo.N, dtype=np.uint8)
        u[0] = 1
        self.U = core.BitVector(u)

        chain = []
        for i in range(1, geo.b + 1):
            v = np.zeros(geo.N, dtype=np.uint8)
            v[:i + 1] = 1
            chain.append(core.BitVector(v))
        self.V = tuple(chain)

        offsets = np.arange(geo.k * geo.n)
        patterns = []
        for i in range(geo.pattern_count):
            w = np.zeros(geo.N, dtype=np.uint8)
            w[list(geo.B)] = _binary(i, geo.b)
            w[geo.encoding_start:] = (offsets >> i) & 1
            patterns.append(core.BitVector(w))
        self.W = tuple(patterns)

    def all(self):
        return (self.U,) + self.V + self.W

    def masses(self, alpha):
        """
        ``{vector: mass}`` with ``alpha`` on ``U`` and ``alpha`` spread
        evenly over each of the two families.
        """
        masses = {self.U: alpha}
        for v in self.V:
            masses[v] = alpha / len(self.V)
        for w in self.W:
            masses[w] = alpha / len(self.W)
        return masses


def special_vectors(geo):
    return GapSpecialVectors(geo)


class PermutationRecovery(object):
    """
    Result of :py:func:`find_permutation`.

    Public Attributes:
        - ``pi`` (a :py:class:`core.Permutation` or ``'Fail'``)
        - ``i_star`` (observed position of the marker)
        - ``B_prime`` (observed positions of ``B``, in order)
        - ``C_prime`` (``{j: observed positions of chunk j}``)
        - ``step`` (the failing step, ``None`` on success)
        - ``samples_taken``, ``queries_made``
    """

    def __init__(self, pi, i_star=None, B_prime=None, C_prime=None, step=None,
                 samples_taken=0, queries_made=0):
        self.pi = pi
        self.i_star = i_star
        self.B_prime = tuple(B_prime or ())
        self.C_prime = dict(C_prime or {})
        self.step = step
        self.samples_taken = samples_taken
        self.queries_made = queries_made

    @property
    def failed(self):
        return not isinstance(self.pi, core.Permutation)

    @property
    def marker(self):
        return (self.i_star,) + self.B_prime

    def to_dict(self):
        return {
            'outcome': core.FAIL if self.failed else 'Recovered',
            'step': self.step,
            'pi': None if self.failed else self.pi.mapping.tolist(),
            'i_star': self.i_star,
            'B_prime': list(self.B_prime),
            'samples_taken': self.samples_taken,
            'queries_made': self.queries_made,
        }

    def __repr__(self):
        return 'PermutationRecovery(failed={f}, step={s!r})'.format(
            f=self.failed,
            s=self.step
        )


def ordering_sample_size(geo, c_fp=None):
    c_fp = settings.C_FP if c_fp is None else c_fp
    return int(math.ceil(c_fp * math.log2(geo.N) ** 2 / geo.gap_alpha))


def _marker_pattern(geo):
    pattern = np.ones(geo.b + 1, dtype=np.uint8)
    pattern[0] = 0
    return pattern


def find_permutation(o, geo, c_fp=None):
    """
    Recover the index permutation from fully revealed samples.

    Takes ``ceil(c_fp * log2(N)^2 / alpha)`` samples, identifies the unique
    weight-one vector, the chain of ``b`` vectors through it and the
    pattern vectors, reads off the position of every encoding index from
    the pattern vectors, then checks on a fresh sample set of the same size
    that at most a ``4 * alpha`` fraction lies outside the encoding part.

    Every coin of this routine is a sample draw of ``o``.

    :param o: The oracle of a distribution over ``{0,1}^N``.
    :type o: core.HugeObjectOracle
    :param geo: The layout to recover.
    :type geo: codes.GapGeometry
    :returns: A :py:class:`PermutationRecovery`
    """
    if o.dimension != geo.N:
        raise error.HugeObjectDimensionError(
            'Oracle dimension {d} does not match N={N}.'.format(
                d=o.dimension,
                N=geo.N
            )
        )
    size = ordering_sample_size(geo, c_fp)
    samples_before = o.samples_taken
    queries_before = o.queries_made

    def fail(step, reason):
        logger.info('find_permutation: Fail at step %s (%s)', step, reason)
        return PermutationRecovery(
            core.FAIL,
            step=step,
            samples_taken=o.samples_taken - samples_before,
            queries_made=o.queries_made - queries_before
        )

    revealed = [o.reveal_full(o.draw_sample()) for _ in range(size)]
    distinct = list(dict.fromkeys(revealed))
    logger.debug('find_permutation: %d samples, %d distinct', size,
                 len(distinct))

    singletons = [v for v in distinct if v.weight == 1]
    if len(singletons) != 1:
        return fail('ii', '{c} weight-one vectors'.format(c=len(singletons)))
    u = singletons[0]
    i_star = int(np.flatnonzero(u.bits)[0])

    chain = sorted(
        (v for v in distinct if v != u and v[i_star] == 1 and v.weight >= 2),
        key=lambda v: v.weight
    )
    if len(chain) != geo.b:
        return fail('iii', '{c} chain candidates'.format(c=len(chain)))
    b_prime = []
    previous = u
    for step, v in enumerate(chain, start=2):
        added = np.flatnonzero(v.bits.astype(np.int8) - previous.bits)
        if v.weight != step or added.size != 1 or \
                np.any(v.bits < previous.bits):
            return fail('iii', 'not a chain')
        b_prime.append(int(added[0]))
        previous = v

    pattern_vectors = {}
    for v in distinct:
        block = v.restrict(b_prime)
        if v[i_star] != 0 or np.all(block == 1):
            continue
        value = int(block.dot(1 << np.arange(geo.b - 1, -1, -1)))
        pattern_vectors.setdefault(value, []).append(v)
    if not pattern_vectors:
        return fail('iv', 'no pattern vectors')
    for j in range(geo.pattern_count):
        if len(pattern_vectors.get(j, ())) != 1:
            return fail('iv', 'pattern {j} seen {c} times'.format(
                j=j,
                c=len(pattern_vectors.get(j, ()))
            ))
    # an empty range of forbidden patterns passes
    for j in range(geo.pattern_count, 2 ** geo.b - 1):
        if j in pattern_vectors:
            return fail('iv', 'unexpected pattern {j}'.format(j=j))

    patterns = np.vstack([
        pattern_vectors[j][0].bits for j in range(geo.pattern_count)
    ]).astype(np.int64)
    rest = np.setdiff1d(np.arange(geo.N), [i_star] + b_prime)
    weights = 1 << np.arange(geo.pattern_count, dtype=np.int64)
    offsets = weights.dot(patterns[:, rest])
    mapping = np.empty(geo.N, dtype=np.int64)
    mapping[i_star] = 0
    mapping[b_prime] = np.arange(1, geo.b + 1)
    mapping[rest] = geo.encoding_start + offsets
    if mapping.max() >= geo.N or np.unique(mapping).size != geo.N:
        return fail('v', 'read-off is not a bijection')
    pi = core.Permutation(mapping)

    marker = [i_star] + b_prime
    expected = _marker_pattern(geo)
    outside = 0
    for _ in range(size):
        v = o.reveal_full(o.draw_sample())
        if not np.array_equal(v.restrict(marker), expected):
            outside += 1
    if outside / float(size) > FAIL_FRACTION_FACTOR * geo.gap_alpha:
        return fail('vi', '{c} of {s} outside the encoding part'.format(
            c=outside,
            s=size
        ))

    position = core.inverse(pi).mapping
    c_prime = {
        j: tuple(int(i) for i in position[geo.chunk(j).start:
                                         geo.chunk(j).stop])
        for j in range(geo.n)
    }
    return PermutationRecovery(
        pi,
        i_star=i_star,
        B_prime=b_prime,
        C_prime=c_prime,
        samples_taken=o.samples_taken - samples_before,
        queries_made=o.queries_made - queries_before
    )


def support_one_test(o, epsilon, seed):
    """
    Test whether the distribution is a point mass.

    Draws ``ceil(8/epsilon)`` samples and compares each with the first on
    ``ceil(16 ln 20 / epsilon)`` shared random positions (all positions
    when ``n`` is smaller). Any disagreement rejects.
    """
    if not 0 < epsilon < 1:
        raise error.HugeObjectPreconditionError('epsilon must lie in (0, 1).')
    rng = core.derive_rng(seed)
    n = o.dimension
    count = int(math.ceil(8.0 / epsilon))
    width = min(n, int(math.ceil(
        16 * math.log(1 / SUPPORT_ONE_CONFIDENCE) / epsilon
    )))
    indices = np.sort(rng.choice(n, size=width, replace=False))
    reference = o.query_bits(o.draw_sample(), indices)
    for _ in range(count - 1):
        if not np.array_equal(o.query_bits(o.draw_sample(), indices),
                              reference):
            logger.info('support_one_test: Reject')
            return core.REJECT
    return core.ACCEPT


class VectorStream(object):
    """
    A stream of known vectors exposing the per-bit access of
    :py:func:`supp_est`.
    """

    def __init__(self, vectors, dimension=None):
        self.vectors = list(vectors)
        if dimension is None:
            if not self.vectors:
                raise error.HugeObjectInitializationError(
                    'An empty stream needs an explicit dimension.'
                )
            dimension = len(self.vectors[0])
        self.dimension = dimension
        self.queries_made = 0

    def __len__(self):
        return len(self.vectors)

    def bit(self, t, j):
        self.queries_made += 1
        return self.vectors[t][j]


class DecodedStream(object):
    """
    Samples held by an oracle, read as the payloads of their ``FE``
    encodings. Bit ``j`` of sample ``t`` queries the observed positions of
    chunk ``j`` and decodes them with ``SE``; a chunk that is not a
    codeword reads as ``INVALID``.
    """

    def __init__(self, o, sample_ids, recovery, se):
        self.oracle = o
        self.sample_ids = list(sample_ids)
        self.recovery = recovery
        self.se = se
        self.dimension = len(recovery.C_prime)
        self.invalid_seen = False
        self._decoded = {}

    def __len__(self):
        return len(self.sample_ids)

    def bit(self, t, j):
        key = (t, j)
        if key not in self._decoded:
            chunk = self.oracle.query_bits(
                self.sample_ids[t], self.recovery.C_prime[j]
            )
            decoded = self.se.decode(chunk)
            if decoded is core.INVALID:
                self.invalid_seen = True
                self._decoded[key] = core.INVALID
            else:
                self._decoded[key] = decoded[1]
        return self._decoded[key]


def supp_est(sample_source, s, epsilon, seed, c_se=None, c_si=None):
    """
    Decide whether the distribution behind ``sample_source`` has support at
    most ``s``.

    Reads ``min(len, ceil(c_se * s * ln s / epsilon^2))`` vectors on one
    shared set of ``ceil(c_si * ln s / epsilon)`` random positions and
    accepts iff at most ``s`` distinct projections appear. ``ln s`` is
    floored at 1. A bit reading ``INVALID`` rejects.

    :param sample_source: Provides ``len()``, ``dimension`` and
        ``bit(t, j)``.
    :returns: ``'Accept'`` or ``'Reject'``
    """
    if not 0 < epsilon < 1:
        raise error.HugeObjectPreconditionError('epsilon must lie in (0, 1).')
    if s < 1:
        raise error.HugeObjectPreconditionError('s must be at least 1.')
    c_se = settings.C_SE if c_se is None else c_se
    c_si = settings.C_SI if c_si is None else c_si
    log_s = max(math.log(s), 1.0)
    count = min(len(sample_source),
                int(math.ceil(c_se * s * log_s / epsilon ** 2)))
    width = min(sample_source.dimension,
                int(math.ceil(c_si * log_s / epsilon)))
    rng = core.derive_rng(seed)
    indices = np.sort(rng.choice(sample_source.dimension, size=width,
                                 replace=False))
    logger.debug('supp_est: %d vectors on %d positions, bound %d', count,
                 width, s)

    seen = set()
    for t in range(count):
        pattern = []
        for j in indices:
            bit = sample_source.bit(t, int(j))
            if bit is core.INVALID:
                logger.info('supp_est: Reject on an invalid chunk')
                return core.REJECT
            pattern.append(bit)
        seen.add(tuple(pattern))
        if len(seen) > s:
            logger.info('supp_est: Reject, more than %d patterns', s)
            return core.REJECT
    return core.ACCEPT


class AdaptiveOutcome(object):
    """
    Result of :py:func:`alg_adaptive`.

    Public Attributes:
        - ``verdict``
        - ``step`` (the rejecting step: ``'i'``, ``'ii'``, ``'iv-a'``,
          ``'iv-b'`` or ``'iv-c'``; ``None`` on Accept)
        - ``recovery`` (the :py:class:`PermutationRecovery`)
        - ``encoded_fraction`` (``|Y'| / |Y|``, ``None`` before step iii)
        - ``samples_taken``, ``queries_made``
    """

    def __init__(self, verdict, step, recovery, samples_taken, queries_made,
                 encoded_fraction=None):
        self.verdict = verdict
        self.step = step
        self.recovery = recovery
        self.samples_taken = samples_taken
        self.queries_made = queries_made
        self.encoded_fraction = encoded_fraction

    def to_dict(self):
        return {
            'verdict': self.verdict,
            'step': self.step,
            'find_permutation': self.recovery.to_dict(),
            'encoded_fraction': self.encoded_fraction,
            'samples_taken': self.samples_taken,
            'queries_made': self.queries_made,
        }

    def __repr__(self):
        return 'AdaptiveOutcome(verdict={v!r}, step={s!r})'.format(
            v=self.verdict,
            s=self.step
        )


def alg_adaptive(o, geo, se, ge, epsilon, seed, c_fp=None, c_aa=None,
                 c_ab=None, c_se=None, c_si=None):
    """
    Test membership in the gap property with two adaptive rounds.

    1. Recover the permutation; reject on Fail.
    2. Reveal ``ceil(c_aa/epsilon)`` samples and reject if one that carries
       the encoding marker is not an ``FE`` encoding.
    3. Read the marker positions of ``ceil(c_ab*n/epsilon)`` samples and
       keep those that carry it.
    4. Reject if at most half carry it; otherwise run :py:func:`supp_est`
       with bound ``n`` and ``epsilon/3`` on their decoded payloads,
       rejecting on an invalid chunk or an estimator Reject.

    :returns: An :py:class:`AdaptiveOutcome`
    """
    if not 0 < epsilon < 1:
        raise error.HugeObjectPreconditionError('epsilon must lie in (0, 1).')
    c_aa = settings.C_AA if c_aa is None else c_aa
    c_ab = settings.C_AB if c_ab is None else c_ab
    rng = core.derive_rng(seed)
    samples_before = o.samples_taken
    queries_before = o.queries_made

    def outcome(verdict, step, recovery, fraction=None):
        if verdict == core.REJECT:
            logger.info('alg_adaptive: Reject at step %s', step)
        return AdaptiveOutcome(
            verdict, step, recovery,
            samples_taken=o.samples_taken - samples_before,
            queries_made=o.queries_made - queries_before,
            encoded_fraction=fraction
        )

    recovery = find_permutation(o, geo, c_fp=c_fp)
    if recovery.failed:
        return outcome(core.REJECT, 'i', recovery)

    marker = list(recovery.marker)
    expected = _marker_pattern(geo)
    to_canonical = core.inverse(recovery.pi)
    for _ in range(int(math.ceil(c_aa / float(epsilon)))):
        v = o.reveal_full(o.draw_sample())
        if np.array_equal(v.restrict(marker), expected) and \
                not codes.fe_is_valid(geo, se, ge,
                                      core.apply_permutation(v, to_canonical)):
            return outcome(core.REJECT, 'ii', recovery)

    encoded = []
    total = int(math.ceil(c_ab * geo.n / float(epsilon)))
    for _ in range(total):
        sid = o.draw_sample()
        if np.array_equal(o.query_bits(sid, marker), expected):
            encoded.append(sid)
    fraction = len(encoded) / float(total)
    if fraction <= ENCODED_FRACTION_FLOOR:
        return outcome(core.REJECT, 'iv-a', recovery, fraction)

    stream = DecodedStream(o, encoded, recovery, se)
    verdict = supp_est(stream, geo.n, epsilon / 3.0, core.child_seed(rng),
                       c_se=c_se, c_si=c_si)
    if verdict == core.REJECT:
        step = 'iv-b' if stream.invalid_seen else 'iv-c'
        return outcome(core.REJECT, step, recovery, fraction)
    return outcome(core.ACCEPT, None, recovery, fraction)


def classify_vector(X, pi, geo, special=None):
    """
    Classify an observed vector under the recovered permutation as one of
    ``'special'``, ``'encoding'`` (carries the encoding marker) or
    ``'other'``.
    """
    special = special_vectors(geo) if special is None else special
    canonical = core.apply_permutation(X, core.inverse(pi))
    if canonical in set(special.all()):
        return SPECIAL
    if np.array_equal(canonical.restrict([0] + list(geo.B)),
                      _marker_pattern(geo)):
        return ENCODING
    return OTHER


def is_in_p0_gap(distribution, geo, se, ge, alpha=None):
    """
    Exact membership in the canonical (unpermuted) gap property.

    The special vectors must carry exactly their prescribed masses and
    every other support vector must be an ``FE`` encoding, with at most
    ``n`` distinct payloads overall.
    """
    alpha = geo.gap_alpha if alpha is None else alpha
    if distribution.dimension != geo.N:
        return False
    special = special_vectors(geo)
    for vector, mass in special.masses(alpha).items():
        if abs(distribution.mass_of(vector) - mass) > MASS_SLACK:
            return False
    reserved = set(special.all())
    payloads = set()
    for vector, _ in distribution.support:
        if vector in reserved:
            continue
        z, x, gamma = codes.fe_decode_all(geo, se, ge, vector)
        if gamma or z is core.INVALID:
            return False
        payloads.add(x)
    return len(payloads) <= geo.n
