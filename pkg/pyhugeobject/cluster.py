"""
Learning clusterable distributions up to an index permutation, the column
type reconstruction of cluster centers, exhaustive clusterability checks
and the bounded VC-dimension learner and tester built on top of them.

The argument order is ``(zeta, delta, r)`` everywhere: ``zeta`` bounds the
leftover mass, ``delta`` the cluster diameter and ``r`` the cluster count.
"""
import itertools
import logging
import math

import numpy as np

from . import core, error, metrics, settings

logger = logging.getLogger(__name__)

EPSILON_FACTOR = 17
DISTANCE_SLACK = 1e-12


class ClusterLearnParams(object):
    """
    Parameters of :py:func:`test_and_learn`.

    The sample sizes follow the asymptotic formulas scaled by the
    multipliers ``c_t1``, ``c_t2`` and ``c_r``. Desk-scale runs may pin
    ``t1``, ``t2`` or ``r_size`` directly; pinned values are echoed like the
    multipliers.

    When ``zeta`` is 0 the leftover threshold becomes ``1/t2`` (the
    resolution of the unassigned fraction) and the sizes are computed with
    ``delta`` in place of ``zeta``.

    Public Attributes:
        - ``zeta``, ``delta``, ``r``
        - ``c_t1``, ``c_t2``, ``c_r``
        - ``t1``, ``t2``
        - ``zeta_effective``
        - ``epsilon_out``

    Public Methods:
        - :py:meth:`r_size`
        - :py:meth:`to_dict`
    """

    def __init__(self, zeta, delta, r, c_t1=None, c_t2=None, c_r=None,
                 t1=None, t2=None, r_size=None):
        if not 0 <= zeta < 1:
            raise error.HugeObjectInitializationError(
                'zeta must lie in [0, 1), got {z}.'.format(z=zeta)
            )
        if not 0 < delta < 1:
            raise error.HugeObjectInitializationError(
                'delta must lie in (0, 1), got {d}.'.format(d=delta)
            )
        if not isinstance(r, (int, np.integer)) or r < 1:
            raise error.HugeObjectInitializationError(
                'r must be a positive integer, got {r!r}.'.format(r=r)
            )
        self.zeta = float(zeta)
        self.delta = float(delta)
        self.r = int(r)
        self.c_t1 = float(settings.C_T1 if c_t1 is None else c_t1)
        self.c_t2 = float(settings.C_T2 if c_t2 is None else c_t2)
        self.c_r = float(settings.C_R if c_r is None else c_r)
        for name in ('c_t1', 'c_t2', 'c_r'):
            if getattr(self, name) <= 0:
                raise error.HugeObjectInitializationError(
                    '{name} must be positive.'.format(name=name)
                )

        size_zeta = self.zeta if self.zeta > 0 else self.delta
        if t1 is None:
            ratio = self.r / size_zeta
            t1 = max(self.r, int(math.ceil(self.c_t1 * ratio * math.log(ratio))))
        if t2 is None:
            t2 = int(math.ceil(
                self.c_t2 * (t1 ** 2 / size_zeta ** 2) * math.log(t1)
            ))
        self.t1 = int(t1)
        self.t2 = max(1, int(t2))
        if self.t1 < 1:
            raise error.HugeObjectInitializationError('t1 must be positive.')
        self._pinned_r_size = r_size
        self._size_zeta = size_zeta

        self.zeta_effective = self.zeta if self.zeta > 0 else 1.0 / self.t2
        self.epsilon_out = EPSILON_FACTOR * (self.delta + self.zeta_effective)
        if self.epsilon_out >= 1:
            raise error.HugeObjectInitializationError(
                '17*(delta+zeta) = {e} must be below 1.'.format(
                    e=self.epsilon_out
                )
            )

    def r_size(self, n):
        """
        Number of coordinates queried on every sample, clamped to ``n``.
        """
        if self._pinned_r_size is not None:
            return max(1, min(int(self._pinned_r_size), n))
        log_ratio = math.log(self.r / (self.delta * self._size_zeta))
        log_size = (
            math.log(self.c_r) + self.t1 * math.log(4)
            - 2 * math.log(self.delta) - math.log(self._size_zeta)
            + math.log(log_ratio)
        )
        if log_size >= math.log(n):
            return n
        return max(1, min(n, int(math.ceil(math.exp(log_size)))))

    def to_dict(self):
        return {
            'zeta': self.zeta,
            'delta': self.delta,
            'r': self.r,
            'c_t1': self.c_t1,
            'c_t2': self.c_t2,
            'c_r': self.c_r,
            't1': self.t1,
            't2': self.t2,
            'r_size': self._pinned_r_size,
            'zeta_effective': self.zeta_effective,
            'epsilon_out': self.epsilon_out,
        }

    def __repr__(self):
        return 'ClusterLearnParams(zeta={z}, delta={d}, r={r}, t1={t1}, ' \
            't2={t2})'.format(
                z=self.zeta,
                d=self.delta,
                r=self.r,
                t1=self.t1,
                t2=self.t2
            )


def epsilon_bound(params):
    """
    The learning accuracy ``17*(delta+zeta)`` guaranteed for ``params``.
    """
    return params.epsilon_out


class LearnOutcome(object):
    """
    Result of :py:func:`test_and_learn`.

    Public Attributes:
        - ``tag`` (``'Learned'`` or ``'Fail'``)
        - ``distribution`` (``None`` on Fail)
        - ``centers`` (the reconstructed center vectors, one per first-stage
          sample, duplicates kept)
        - ``weights`` (``w_1 .. w_t1``)
        - ``unassigned_fraction`` (``w_0``)
        - ``assignment_counts`` (``[unassigned, c_1 .. c_t1]``)
        - ``samples_taken``, ``queries_made``
        - ``size_precondition_met``
    """

    def __init__(self, tag, weights, unassigned_fraction, assignment_counts,
                 samples_taken, queries_made, distribution=None, centers=None,
                 size_precondition_met=True, step=None):
        self.tag = tag
        self.weights = tuple(weights)
        self.unassigned_fraction = unassigned_fraction
        self.assignment_counts = tuple(int(c) for c in assignment_counts)
        self.samples_taken = samples_taken
        self.queries_made = queries_made
        self.distribution = distribution
        self.centers = tuple(centers or ())
        self.size_precondition_met = size_precondition_met
        self.step = step

    @property
    def learned(self):
        return self.tag == core.LEARNED

    def to_dict(self):
        support = []
        if self.distribution is not None:
            support = [
                {'bits': str(v), 'probability': p}
                for v, p in self.distribution.support
            ]
        return {
            'outcome': self.tag,
            'step': self.step,
            'weights': list(self.weights),
            'unassigned_fraction': self.unassigned_fraction,
            'learned_support': support,
            'samples_taken': self.samples_taken,
            'queries_made': self.queries_made,
            'size_precondition_met': self.size_precondition_met,
        }

    def __repr__(self):
        return 'LearnOutcome(tag={tag!r}, unassigned_fraction={w0!r})'.format(
            tag=self.tag,
            w0=self.unassigned_fraction
        )


class ClusteredAroundSpec(object):
    """
    A center sequence with the radius ``eta`` and leftover mass ``xi`` of
    the clustered-around relation.
    """

    def __init__(self, centers, eta, xi):
        centers = list(centers)
        if not centers:
            raise error.HugeObjectInitializationError('No centers given.')
        for name, value in (('eta', eta), ('xi', xi)):
            if not 0 < value < 1:
                raise error.HugeObjectInitializationError(
                    '{name} must lie in (0, 1), got {v}.'.format(
                        name=name,
                        v=value
                    )
                )
        self.centers = tuple(centers)
        self.eta = float(eta)
        self.xi = float(xi)


class VcLearnParams(object):
    """
    Parameters for learning a distribution that is ``beta``-close to
    having a support of VC-dimension at most ``d``; ``vc_alpha`` is the
    cover radius.
    """

    def __init__(self, d, vc_alpha, beta):
        if not isinstance(d, (int, np.integer)) or d < 0:
            raise error.HugeObjectInitializationError(
                'd must be a non-negative integer.'
            )
        if not 0 < vc_alpha < 1:
            raise error.HugeObjectInitializationError(
                'vc_alpha must lie in (0, 1).'
            )
        if not 0 <= beta < vc_alpha:
            raise error.HugeObjectInitializationError(
                'beta must lie in [0, vc_alpha).'
            )
        self.d = int(d)
        self.vc_alpha = float(vc_alpha)
        self.beta = float(beta)

    @property
    def epsilon_out(self):
        return EPSILON_FACTOR * (3 * self.vc_alpha + self.beta / self.vc_alpha)

    def __repr__(self):
        return 'VcLearnParams(d={d}, vc_alpha={a}, beta={b})'.format(
            d=self.d,
            a=self.vc_alpha,
            b=self.beta
        )


def round_counts(alphas, n):
    """
    Round reals summing to ``n`` to integers summing to ``n``, each the
    floor or the ceiling of its value; ties go to the earlier entry.

    :param alphas: Non-negative reals.
    :param n: Their (integer) total.
    :returns: A ``numpy`` int64 array
    """
    alphas = np.asarray(alphas, dtype=float)
    if np.any(alphas < 0):
        raise error.HugeObjectPreconditionError('Values must be non-negative.')
    if abs(alphas.sum() - n) > 1e-9:
        raise error.HugeObjectPreconditionError(
            'Values sum to {s!r}, expected {n}.'.format(s=float(alphas.sum()), n=n)
        )
    return core.largest_remainder(alphas, n)


def assign_to_centers(center_projs, sample_projs, delta):
    """
    Assign every projected sample to the lowest-indexed projected center
    within normalized distance ``2*delta``.

    :returns: A tuple ``(assignment, counts)``. ``assignment[j]`` is the
        0-based center index of sample ``j`` or ``-1``; ``counts[0]`` is the
        number of unassigned samples and ``counts[i+1]`` the number
        assigned to center ``i``.
    """
    centers = np.atleast_2d(np.asarray(center_projs, dtype=np.uint8))
    samples = np.atleast_2d(np.asarray(sample_projs, dtype=np.uint8))
    if centers.shape[1] != samples.shape[1]:
        raise error.HugeObjectDimensionError(
            'Centers and samples are projected on different index sets.'
        )
    width = centers.shape[1]
    distances = np.count_nonzero(
        samples[:, None, :] != centers[None, :, :], axis=2
    ) / float(width)
    close = distances <= 2 * delta + DISTANCE_SLACK
    assignment = np.where(close.any(axis=1), close.argmax(axis=1), -1)
    counts = np.bincount(assignment + 1, minlength=centers.shape[0] + 1)
    return assignment, counts


def approx_centers(indices, center_projs, n):
    """
    Rebuild full-length centers from their projections on ``indices``.

    Each coordinate of ``indices`` has a column type, the tuple of center
    bits at that coordinate. Type fractions are scaled to ``n`` columns
    with :py:func:`round_counts`, and the output matrix holds that many
    copies of every type, types in lexicographic order.

    :returns: A list with one :py:class:`core.BitVector` per center
    """
    centers = np.atleast_2d(np.asarray(center_projs, dtype=np.uint8))
    if len(indices) < 1 or centers.shape[0] < 1:
        raise error.HugeObjectPreconditionError(
            'Need at least one index and one center.'
        )
    if centers.shape[1] != len(indices):
        raise error.HugeObjectDimensionError(
            'Projections have {w} columns for {k} indices.'.format(
                w=centers.shape[1],
                k=len(indices)
            )
        )
    types, counts = np.unique(centers.T, axis=0, return_counts=True)
    copies = round_counts(counts * (float(n) / centers.shape[1]), n)
    matrix = np.repeat(types, copies, axis=0).T
    return [core.BitVector(row) for row in matrix]


def _size_precondition(n, params):
    # n >= 20 * 2**t1 / delta, compared in log space
    return math.log(n) >= math.log(20.0 / params.delta) + params.t1 * math.log(2)


def test_and_learn(o, params, seed, strict=False):
    """
    Learn a clusterable distribution up to an index permutation.

    Draws ``t1`` center samples and ``t2`` test samples, queries all of them
    on one random coordinate set ``R``, assigns test samples to centers, and
    fails when more than ``3*zeta*t2`` stay unassigned. Otherwise the
    assignment fractions become the masses of centers rebuilt by
    :py:func:`approx_centers`; the unassigned mass goes to the first one.

    :param o: The oracle of the unknown distribution.
    :type o: core.HugeObjectOracle
    :param params: Sizes and thresholds.
    :type params: ClusterLearnParams
    :param seed: Seed for the choice of ``R``.
    :param strict: Raise instead of warn when ``n`` is below
        ``20 * 2**t1 / delta``.
    :returns: A :py:class:`LearnOutcome`
    """
    n = o.dimension
    met = _size_precondition(n, params)
    if not met:
        if strict:
            raise error.HugeObjectPreconditionError(
                'n={n} is below 20*2^t1/delta for t1={t1}.'.format(
                    n=n,
                    t1=params.t1
                )
            )
        logger.warning('test_and_learn: n=%d below 20*2^t1/delta (t1=%d)',
                       n, params.t1)

    rng = core.derive_rng(seed)
    t1, t2 = params.t1, params.t2
    r_size = params.r_size(n)
    samples_before = o.samples_taken
    queries_before = o.queries_made

    center_ids = [o.draw_sample() for _ in range(t1)]
    sample_ids = [o.draw_sample() for _ in range(t2)]
    indices = np.sort(rng.choice(n, size=r_size, replace=False))
    logger.debug('test_and_learn: t1=%d t2=%d |R|=%d', t1, t2, r_size)

    center_projs = np.vstack([o.query_bits(sid, indices) for sid in center_ids])
    sample_projs = np.vstack([o.query_bits(sid, indices) for sid in sample_ids])

    _, counts = assign_to_centers(center_projs, sample_projs, params.delta)
    weights = counts[1:] / float(t2)
    unassigned = counts[0] / float(t2)
    samples_taken = o.samples_taken - samples_before
    queries_made = o.queries_made - queries_before

    if counts[0] > 3 * params.zeta_effective * t2 + DISTANCE_SLACK:
        logger.info('test_and_learn: Fail at step v, %d of %d unassigned',
                    counts[0], t2)
        return LearnOutcome(
            core.FAIL, weights, unassigned, counts, samples_taken,
            queries_made, size_precondition_met=met, step='v'
        )

    centers = approx_centers(indices, center_projs, n)
    masses = list(weights)
    masses[0] += unassigned
    learned = core.ExplicitDistribution.from_weights(
        zip(centers, masses), normalize=True
    )
    logger.debug('test_and_learn: learned support of size %d',
                 learned.support_size)
    return LearnOutcome(
        core.LEARNED, weights, unassigned, counts, samples_taken,
        queries_made, distribution=learned, centers=centers,
        size_precondition_met=met
    )


def _check_small_support(distribution, limit):
    if distribution.support_size > limit:
        raise error.HugeObjectPreconditionError(
            'Exhaustive search supports at most {limit} support vectors, '
            'got {s}.'.format(limit=limit, s=distribution.support_size)
        )


def _pairwise_distances(distribution):
    matrix = distribution.matrix()
    return np.count_nonzero(
        matrix[:, None, :] != matrix[None, :, :], axis=2
    ) / float(distribution.dimension)


def brute_is_clusterable(distribution, zeta, delta, r):
    """
    Decide by exhaustive search whether the support splits into a leftover
    part of mass at most ``zeta`` and at most ``r`` parts of diameter at
    most ``delta``. Supports of up to 12 vectors only.
    """
    _check_small_support(distribution, 12)
    distances = _pairwise_distances(distribution)
    probabilities = distribution.probabilities
    size = distribution.support_size
    # heaviest first so the leftover budget prunes early
    order = sorted(range(size), key=lambda i: -probabilities[i])

    def place(position, clusters, leftover):
        if leftover > zeta + core.MASS_TOLERANCE:
            return False
        if position == size:
            return True
        point = order[position]
        for members in clusters:
            if all(distances[point, other] <= delta + DISTANCE_SLACK
                   for other in members):
                members.append(point)
                if place(position + 1, clusters, leftover):
                    return True
                members.pop()
        if len(clusters) < r:
            clusters.append([point])
            if place(position + 1, clusters, leftover):
                return True
            clusters.pop()
        return place(position + 1, clusters, leftover + probabilities[point])

    return place(0, [], 0.0)


def brute_is_clustered_around(distribution, spec):
    """
    Whether at least ``1 - xi`` of the mass lies within distance ``eta``
    of some center of ``spec``.
    """
    _check_small_support(distribution, 64)
    centers = np.vstack([c.bits for c in spec.centers])
    if centers.shape[1] != distribution.dimension:
        raise error.HugeObjectDimensionError(
            'Centers and distribution have different lengths.'
        )
    distances = np.count_nonzero(
        distribution.matrix()[:, None, :] != centers[None, :, :], axis=2
    ) / float(distribution.dimension)
    covered = (distances <= spec.eta + DISTANCE_SLACK).any(axis=1)
    mass = float(distribution.probabilities[covered].sum())
    return mass >= 1 - spec.xi - core.MASS_TOLERANCE


def _set_partitions(items, max_blocks):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest, max_blocks):
        for i in range(len(partition)):
            yield partition[:i] + [[first] + partition[i]] + partition[i + 1:]
        if len(partition) < max_blocks:
            yield [[first]] + partition


def distance_to_clusterable_brute(distribution, alpha, r):
    """
    An upper bound on the EMD from ``distribution`` to the distributions
    whose support splits into at most ``r`` parts of diameter ``alpha``.

    Every partition of the support into at most ``r`` blocks is tried; a
    block already within diameter ``alpha`` costs nothing, any other block
    is collapsed onto its cheapest member. Supports of up to 8 vectors.
    """
    _check_small_support(distribution, 8)
    distances = _pairwise_distances(distribution)
    probabilities = distribution.probabilities
    best = float('inf')
    for partition in _set_partitions(list(range(distribution.support_size)), r):
        cost = 0.0
        for block in partition:
            if max(distances[i, j] for i in block for j in block) \
                    <= alpha + DISTANCE_SLACK:
                continue
            cost += min(
                sum(probabilities[i] * distances[i, c] for i in block)
                for c in block
            )
            if cost >= best:
                break
        best = min(best, cost)
    return best


def haussler_radius(d, vc_alpha):
    """
    Cluster count ``floor(e*(d+1)*(2e/vc_alpha)**d)`` of an ``vc_alpha``
    cover of a support with VC-dimension ``d``.
    """
    if d < 0 or not 0 < vc_alpha <= 1:
        raise error.HugeObjectPreconditionError(
            'Need d >= 0 and vc_alpha in (0, 1].'
        )
    log_value = 1 + math.log(d + 1) + d * math.log(2 * math.e / vc_alpha)
    if log_value >= 62 * math.log(2):
        raise error.HugeObjectPreconditionError(
            'Radius overflows for d={d}, vc_alpha={a}.'.format(d=d, a=vc_alpha)
        )
    return int(math.floor(math.e * (d + 1) * (2 * math.e / vc_alpha) ** d))


def learn_close_vc(o, p, seed, **size_kwargs):
    """
    Learn a distribution ``beta``-close to VC-dimension ``d`` by running
    :py:func:`test_and_learn` with ``zeta = beta/vc_alpha``,
    ``delta = 3*vc_alpha`` and ``r = haussler_radius(d, vc_alpha)``.

    Extra keyword arguments go to :py:class:`ClusterLearnParams`.
    """
    params = ClusterLearnParams(
        p.beta / p.vc_alpha,
        3 * p.vc_alpha,
        haussler_radius(p.d, p.vc_alpha),
        **size_kwargs
    )
    logger.debug('learn_close_vc: %r', params)
    return test_and_learn(o, params, seed)


def test_vc_property(o, property_candidates, epsilon, d, seed, mode=None,
                     **size_kwargs):
    """
    Test whether the hidden distribution belongs to a property given as a
    finite candidate set of VC-dimension at most ``d``.

    Learns with ``vc_alpha = epsilon/102`` and ``beta = 0``; rejects on
    Fail, otherwise accepts iff some candidate is within ``epsilon/2`` of
    the learned distribution up to an index permutation.

    :param mode: ``'exact'`` or ``'heuristic'`` index-permutation search;
        by default exact when the dimension allows it.
    :returns: ``'Accept'`` or ``'Reject'``
    """
    candidates = list(property_candidates)
    if not candidates:
        raise error.HugeObjectPreconditionError('The candidate set is empty.')
    if not 0 < epsilon < 1:
        raise error.HugeObjectPreconditionError('epsilon must lie in (0, 1).')
    if mode is None:
        mode = 'exact' if o.dimension <= metrics.EXACT_PERMUTATION_LIMIT \
            else 'heuristic'

    outcome = learn_close_vc(
        o, VcLearnParams(d, epsilon / 102.0, 0.0), seed, **size_kwargs
    )
    if not outcome.learned:
        return core.REJECT
    for candidate in candidates:
        distance = metrics.emd_up_to_index_permutation(
            outcome.distribution, candidate, mode=mode
        )
        if distance <= epsilon / 2 + DISTANCE_SLACK:
            return core.ACCEPT
    logger.info('test_vc_property: Reject, no candidate within %.4f',
                epsilon / 2)
    return core.REJECT
