"""
Generators for the yes/no instance families used in the lower bounds, and
the palindrome string property with its adaptive tester.

Every generator is a pure function of its parameters and seed.
"""
import logging
import math

import numpy as np

from . import codes, core, error, gap, metrics, settings

logger = logging.getLogger(__name__)

YES = 'yes'
NO = 'no'
MATRIX_STREAM = 0
SIGMA_STREAM = 1
SELECTION_STREAM = 2
DEFAULT_Z_COUNT = 4
WEIGHT_SLACK = 1e-9


class PvcParams(object):
    """
    Sizes of the bounded VC-dimension instances.

    Public Attributes:
        - ``k_rows`` (rows of the column-separated matrix ``A``)
        - ``ell`` (columns of ``A``)
        - ``ell_prime`` (columns kept by the query-hard no-instance)
        - ``k_prime`` (rows kept by the sample-hard no-instance)
        - ``n`` (vector length after blow-up)
        - ``seed``
    """

    def __init__(self, k_rows, ell, ell_prime, k_prime, n, seed):
        for name, value in (('k_rows', k_rows), ('ell', ell),
                            ('ell_prime', ell_prime), ('k_prime', k_prime),
                            ('n', n)):
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise error.HugeObjectInitializationError(
                    '{name} must be a positive integer.'.format(name=name)
                )
        if n % ell or n % ell_prime:
            raise error.HugeObjectInitializationError(
                'ell and ell_prime must divide n={n}.'.format(n=n)
            )
        if ell_prime > ell:
            raise error.HugeObjectInitializationError(
                'ell_prime must not exceed ell.'
            )
        if k_prime > k_rows:
            raise error.HugeObjectInitializationError(
                'k_prime must not exceed k_rows.'
            )
        self.k_rows = int(k_rows)
        self.ell = int(ell)
        self.ell_prime = int(ell_prime)
        self.k_prime = int(k_prime)
        self.n = int(n)
        self.seed = int(seed)

    def to_dict(self):
        return {
            'k_rows': self.k_rows,
            'ell': self.ell,
            'ell_prime': self.ell_prime,
            'k_prime': self.k_prime,
            'n': self.n,
            'seed': self.seed,
        }


class SuppHardParams(object):
    """
    Sizes of the support-size instances over ``[2 * n_supp]``.
    """

    def __init__(self, n_supp, eta, mode):
        if not isinstance(n_supp, (int, np.integer)) or n_supp < 1:
            raise error.HugeObjectInitializationError(
                'n_supp must be a positive integer.'
            )
        if not 0 < eta < 0.125:
            raise error.HugeObjectInitializationError(
                'eta must lie in (0, 1/8).'
            )
        if mode not in (YES, NO):
            raise error.HugeObjectInitializationError(
                'mode must be {y!r} or {n!r}.'.format(y=YES, n=NO)
            )
        self.n_supp = int(n_supp)
        self.eta = float(eta)
        self.mode = mode


def _pairwise_column_distance(matrix):
    columns = matrix.T.astype(np.int8)
    return np.count_nonzero(columns[:, None, :] != columns[None, :, :], axis=2)


def gen_pvc_matrix(p, max_attempts=None):
    """
    A ``k_rows x ell`` binary matrix whose columns are pairwise at least
    ``k_rows/3`` apart.

    Every attempt draws ``g = ceil(log2 ell)`` uniformly random vectors of
    ``{0,1}^k_rows`` and takes ``ell`` distinct members of their span over
    GF(2), chosen at random, as the columns. The separation is verified
    over all column pairs and the draw repeated until it holds, so
    ``ell > 2**k_rows`` always ends in a construction error.

    :raises error.HugeObjectConstructionError: when no draw qualifies
    """
    rng = core.derive_rng(p.seed, MATRIX_STREAM)
    g = max(1, (p.ell - 1).bit_length())
    combinations = codes.message_matrix(g)
    needed = p.k_rows / 3.0

    def attempt():
        basis = rng.integers(0, 2, size=(g, p.k_rows))
        span = combinations.dot(basis) % 2
        keys = np.sort(rng.choice(2 ** g, size=p.ell, replace=False))
        matrix = span[keys].T.astype(np.uint8)
        if p.ell > 1:
            distances = _pairwise_column_distance(matrix)
            np.fill_diagonal(distances, p.k_rows)
            if distances.min() < needed:
                raise core.Resample(
                    'column distance {c} below {t:.2f}'.format(
                        c=int(distances.min()),
                        t=needed
                    )
                )
        return matrix

    return core.construct_with_retries(
        attempt,
        'separated column matrix {k}x{ell}'.format(k=p.k_rows, ell=p.ell),
        max_attempts
    )


def blow_up(row, n):
    """
    Repeat every bit of ``row`` ``n / len(row)`` times in place.
    """
    bits = row.bits if isinstance(row, core.BitVector) else np.asarray(row)
    if bits.size == 0 or n % bits.size:
        raise error.HugeObjectDimensionError(
            'Row length {l} does not divide n={n}.'.format(l=bits.size, n=n)
        )
    return core.BitVector(np.repeat(bits, n // bits.size))


def _blown_distribution(rows, p):
    distribution = core.ExplicitDistribution.uniform(
        blow_up(row, p.n) for row in rows
    )
    sigma = core.random_permutation(p.n, core.derive_rng(p.seed, SIGMA_STREAM))
    return core.permute_distribution(distribution, sigma)


def gen_pvc_yes(p, matrix=None):
    """
    Uniform over the blown-up rows of ``A``, index-permuted at random.
    """
    matrix = gen_pvc_matrix(p) if matrix is None else matrix
    return _blown_distribution(matrix, p)


def gen_pvc_no_query(p, matrix=None):
    """
    Uniform over the blown-up rows of ``ell_prime`` random columns of ``A``,
    index-permuted at random.
    """
    matrix = gen_pvc_matrix(p) if matrix is None else matrix
    rng = core.derive_rng(p.seed, SELECTION_STREAM)
    columns = np.sort(rng.choice(p.ell, size=p.ell_prime, replace=False))
    return _blown_distribution(matrix[:, columns], p)


def gen_pvc_no_sample(p, matrix=None):
    """
    Uniform over the blown-up rows of ``k_prime`` random rows of ``A``,
    index-permuted at random.
    """
    matrix = gen_pvc_matrix(p) if matrix is None else matrix
    rng = core.derive_rng(p.seed, SELECTION_STREAM)
    rows = np.sort(rng.choice(p.k_rows, size=p.k_prime, replace=False))
    return _blown_distribution(matrix[rows], p)


def index_classes(distribution):
    """
    Group the positions whose columns agree on the whole support.
    """
    matrix = distribution.matrix()
    _, labels = np.unique(matrix.T, axis=0, return_inverse=True)
    labels = np.asarray(labels).reshape(-1)
    return sorted(
        tuple(int(i) for i in np.flatnonzero(labels == label))
        for label in np.unique(labels)
    )


def _min_pairwise_distance(matrix):
    rows = matrix.astype(np.int8)
    distances = np.count_nonzero(rows[:, None, :] != rows[None, :, :], axis=2)
    np.fill_diagonal(distances, matrix.shape[1] + 1)
    return int(distances.min())


def gen_far_codeword_set(n, count, min_dist, seed, max_attempts=None):
    """
    ``count`` vectors of length ``n`` that are pairwise at least
    ``min_dist`` apart: the first ``count`` codewords of a random linear
    code of dimension ``ceil(log2 count)``, redrawn until the separation
    holds.

    :raises error.HugeObjectConstructionError: when no draw qualifies
    """
    if count < 1 or n < 1:
        raise error.HugeObjectPreconditionError(
            'n and count must be positive.'
        )
    rng = core.derive_rng(seed)
    if count == 1:
        return [core.BitVector(rng.integers(0, 2, size=n))]
    dimension = (count - 1).bit_length()
    messages = codes.message_matrix(dimension)[:count]

    def attempt():
        generator = rng.integers(0, 2, size=(dimension, n))
        words = (messages.dot(generator) % 2).astype(np.uint8)
        closest = _min_pairwise_distance(words)
        if closest < min_dist:
            raise core.Resample('closest pair at distance {c}'.format(c=closest))
        return [core.BitVector(w) for w in words]

    return core.construct_with_retries(
        attempt,
        '{c} codewords of length {n} at distance {d}'.format(
            c=count,
            n=n,
            d=min_dist
        ),
        max_attempts
    )


def _check_base(base, size):
    if not base:
        raise error.HugeObjectDistributionError('The base distribution is empty.')
    total = 0.0
    for element, weight in base.items():
        if not 0 <= element < size:
            raise error.HugeObjectDistributionError(
                'Base element {e} outside [0, {s}).'.format(e=element, s=size)
            )
        units = weight * size
        if weight <= 0 or abs(units - round(units)) > WEIGHT_SLACK * size:
            raise error.HugeObjectDistributionError(
                'Base weight {w!r} is not a positive multiple of 1/{s}.'.format(
                    w=weight,
                    s=size
                )
            )
        total += weight
    if abs(total - 1.0) > WEIGHT_SLACK:
        raise error.HugeObjectDistributionError(
            'Base weights sum to {t!r}.'.format(t=total)
        )


def gen_gap_distribution(geo, se, ge, base, seed, z_count=DEFAULT_Z_COUNT,
                         return_permutation=False, alpha=None):
    """
    A distribution over ``{0,1}^N`` in the gap property when ``base`` has
    support at most ``n``.

    The special vectors get ``alpha``, ``alpha/b`` and
    ``alpha/pattern_count`` each. Element ``i`` of ``base`` is carried by
    the far payload ``y_i`` and its mass ``(1 - 3*alpha) * base[i]`` is
    spread evenly over ``FE(z, y_i)`` for ``z_count`` random messages
    ``z``. The result is index-permuted by a random ``sigma``.

    :param base: ``{element: weight}`` over ``[0, 2n)`` with weights that
        are multiples of ``1/(2n)``.
    :param return_permutation: Also return ``sigma``.
    """
    alpha = geo.gap_alpha if alpha is None else alpha
    if not 0 < alpha < 1 / 3.0:
        raise error.HugeObjectPreconditionError(
            'alpha={a} leaves no encoding mass; it must lie in (0, 1/3).'.format(
                a=alpha
            )
        )
    if z_count < 1:
        raise error.HugeObjectPreconditionError('z_count must be positive.')
    _check_base(base, 2 * geo.n)
    rng = core.derive_rng(seed)
    payloads = gen_far_codeword_set(
        geo.n, 2 * geo.n, int(math.ceil(geo.n / 3.0)), core.child_seed(rng)
    )

    weights = list(gap.special_vectors(geo).masses(alpha).items())
    for element in sorted(base):
        share = (1 - 3 * alpha) * base[element] / z_count
        for _ in range(z_count):
            z = rng.integers(0, geo.n, size=geo.m)
            weights.append(
                (codes.fe_encode(geo, se, ge, z, payloads[element]), share)
            )
    canonical = core.ExplicitDistribution.from_weights(weights, normalize=True)
    sigma = core.random_permutation(geo.N, rng)
    observed = core.permute_distribution(canonical, sigma)
    logger.debug('gen_gap_distribution: support %d over N=%d',
                 observed.support_size, geo.N)
    if return_permutation:
        return observed, sigma
    return observed


def gen_supp_hard(p, seed):
    """
    A distribution over ``[2n]`` as ``{element: weight}``.

    Yes-mode is uniform over a random ``n``-subset. No-mode spreads ``2n``
    units over a random ``ceil((1 + 2*eta) n)``-subset, so every weight
    stays a multiple of ``1/(2n)``. This reproduces the support gap only,
    not the indistinguishability of the two modes.
    """
    rng = core.derive_rng(seed)
    size = 2 * p.n_supp
    if p.mode == YES:
        chosen = rng.choice(size, size=p.n_supp, replace=False)
        units = np.full(p.n_supp, 2)
    else:
        support = int(math.ceil((1 + 2 * p.eta) * p.n_supp))
        chosen = rng.choice(size, size=support, replace=False)
        units = core.largest_remainder(
            np.full(support, size / float(support)), size
        )
    return {
        int(element): unit / float(size)
        for element, unit in sorted(zip(chosen.tolist(), units.tolist()))
    }


class StringOracle(object):
    """
    Per-letter query access to a string over ``{0,1,2,3}``.
    """

    def __init__(self, letters):
        self.letters = np.asarray(letters, dtype=np.int64)
        if self.letters.size and (self.letters.min() < 0 or
                                  self.letters.max() > 3):
            raise error.HugeObjectInitializationError(
                'Letters must lie in {0, 1, 2, 3}.'
            )
        self.queries_made = 0

    def __len__(self):
        return int(self.letters.size)

    def query(self, j):
        self.queries_made += 1
        return int(self.letters[j])


class SampleStringOracle(object):
    """
    Reads letter ``j`` of a held sample as its bits ``2j`` and ``2j+1``.
    """

    def __init__(self, o, sid):
        self.oracle = o
        self.sid = sid
        self.queries_made = 0

    def __len__(self):
        return self.oracle.dimension // 2

    def query(self, j):
        self.queries_made += 1
        high, low = self.oracle.query_bits(self.sid, (2 * j, 2 * j + 1))
        return 2 * int(high) + int(low)


def pal_adaptive_test(string_oracle, epsilon, seed, c_pal=None):
    """
    Test whether a string is a palindrome over ``{0,1}`` followed by a
    palindrome over ``{2,3}``.

    A binary search finds the prefix length ``i`` of the presumed
    ``{0,1}`` part; then ``ceil(c_pal/epsilon)`` random positions are
    checked against their mirror inside their part.
    """
    if not 0 < epsilon < 1:
        raise error.HugeObjectPreconditionError('epsilon must lie in (0, 1).')
    c_pal = settings.C_PAL if c_pal is None else c_pal
    n = len(string_oracle)
    if n == 0:
        return core.ACCEPT
    low, high = 0, n
    while low < high:
        middle = (low + high) // 2
        if string_oracle.query(middle) >= 2:
            high = middle
        else:
            low = middle + 1
    boundary = low

    rng = core.derive_rng(seed)
    for j in rng.integers(0, n, size=int(math.ceil(c_pal / float(epsilon)))):
        j = int(j)
        if j < boundary:
            mirror, allowed = boundary - 1 - j, (0, 1)
        else:
            mirror, allowed = n - 1 + boundary - j, (2, 3)
        left = string_oracle.query(j)
        right = string_oracle.query(mirror)
        if left != right or left not in allowed:
            logger.info('pal_adaptive_test: Reject at position %d', j)
            return core.REJECT
    return core.ACCEPT


def lift_one_p_test(o, epsilon, seed, string_tester=pal_adaptive_test):
    """
    Test the point-mass lift of a string property: reject unless the
    distribution passes :py:func:`gap.support_one_test` at ``epsilon/20``
    and one sample, read two bits per letter, passes ``string_tester`` at
    ``epsilon/2``.
    """
    rng = core.derive_rng(seed)
    if gap.support_one_test(o, epsilon / 20.0, core.child_seed(rng)) == \
            core.REJECT:
        return core.REJECT
    sample = SampleStringOracle(o, o.draw_sample())
    return string_tester(sample, epsilon / 2.0, core.child_seed(rng))


def pal_is_member(s):
    """
    Exact membership: ``s = X Y`` with ``X`` a palindrome over ``{0,1}``
    and ``Y`` a palindrome over ``{2,3}``.
    """
    s = np.asarray(s, dtype=np.int64)
    boundary = int(np.count_nonzero(s < 2))
    head, tail = s[:boundary], s[boundary:]
    if np.any(head >= 2) or np.any(tail < 2) or np.any(tail > 3):
        return False
    return np.array_equal(head, head[::-1]) and np.array_equal(tail, tail[::-1])


def encode_pal_string(s):
    """
    Two bits per letter, high bit first.
    """
    s = np.asarray(s, dtype=np.int64)
    return core.BitVector(np.stack([s >> 1, s & 1], axis=1).reshape(-1))


def decode_pal_string(v):
    bits = v.bits.astype(np.int64)
    if bits.size % 2:
        raise error.HugeObjectDimensionError(
            'An encoded string has an even number of bits.'
        )
    return 2 * bits[0::2] + bits[1::2]


def _random_palindrome(length, letters, rng):
    half = rng.choice(letters, size=(length + 1) // 2)
    return np.concatenate([half, half[:length // 2][::-1]])


def gen_pal_string(n, mode, seed):
    """
    Yes-mode: a random split point and a random palindrome on each side.
    No-mode: uniform over ``{0,1,2,3}^n``.
    """
    rng = core.derive_rng(seed)
    if mode == YES:
        boundary = int(rng.integers(0, n + 1))
        return np.concatenate([
            _random_palindrome(boundary, (0, 1), rng),
            _random_palindrome(n - boundary, (2, 3), rng),
        ]).astype(np.int64)
    if mode == NO:
        return rng.integers(0, 4, size=n)
    raise error.HugeObjectPreconditionError(
        'mode must be {y!r} or {n!r}.'.format(y=YES, n=NO)
    )


def gen_pal_lift(s):
    return core.ExplicitDistribution.point_mass(encode_pal_string(s))


def pvc_farness(p):
    """
    The permutation-minimized matrix distance between the corresponding
    matrices of the yes-instance and the query-hard no-instance built from
    the same ``A``.
    """
    matrix = gen_pvc_matrix(p)
    yes = gen_pvc_yes(p, matrix)
    no = gen_pvc_no_query(p, matrix)
    rows = p.k_rows
    return metrics.min_perm_matrix_distance(
        metrics.corresponding_matrix(yes, rows),
        metrics.corresponding_matrix(no, rows)
    )
