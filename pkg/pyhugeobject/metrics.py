"""
Distances between vectors and between distributions over ``{0,1}^n``.

Exact EMD is solved as an integer min-cost flow on the bipartite support
graph; the ground cost of a pair is its absolute Hamming distance, which is
the normalized distance scaled by ``n``, so costs are exact integers.
"""
import itertools
import logging
import math
from fractions import Fraction
from functools import reduce

import networkx as nx
import numpy as np
from scipy.optimize import linear_sum_assignment, linprog

from . import core, error

logger = logging.getLogger(__name__)

MARGINAL_TOLERANCE = 1e-9
EXACT_PERMUTATION_LIMIT = 8
# largest common denominator accepted before falling back to a binary scale
MAX_EXACT_DENOMINATOR = 10 ** 9
BINARY_MASS_SCALE = 2 ** 40


def _check_lengths(u, v):
    if u.length != v.length:
        raise error.HugeObjectDimensionError(
            'Vectors have lengths {a} and {b}.'.format(a=u.length, b=v.length)
        )


def hamming_abs(u, v):
    """
    Number of positions where ``u`` and ``v`` differ.
    """
    _check_lengths(u, v)
    return int(np.count_nonzero(u.bits != v.bits))


def hamming_norm(u, v):
    """
    Normalized Hamming distance ``|{i : u_i != v_i}| / n``.

    :param u: First vector.
    :type u: core.BitVector
    :param v: Second vector of the same length.
    :type v: core.BitVector
    :returns: A float in ``[0, 1]``
    """
    return hamming_abs(u, v) / float(u.length)


def projected_distance(u, v, indices):
    """
    Normalized Hamming distance of ``u`` and ``v`` restricted to ``indices``.
    """
    _check_lengths(u, v)
    indices = np.asarray(list(indices), dtype=np.intp)
    if indices.size == 0:
        raise error.HugeObjectPreconditionError('The index set is empty.')
    if indices.min() < 0 or indices.max() >= u.length:
        raise error.HugeObjectOracleError(
            'Index set exceeds dimension {n}.'.format(n=u.length)
        )
    return float(np.count_nonzero(u.bits[indices] != v.bits[indices])) / indices.size


def _check_dimensions(d1, d2):
    if d1.dimension != d2.dimension:
        raise error.HugeObjectDimensionError(
            'Distributions have dimensions {a} and {b}.'.format(
                a=d1.dimension,
                b=d2.dimension
            )
        )


def l1_distance(d1, d2):
    """
    The l1 distance between two distributions (twice the variation distance).
    """
    _check_dimensions(d1, d2)
    vectors = set(d1.vectors) | set(d2.vectors)
    return float(sum(abs(d1.mass_of(v) - d2.mass_of(v)) for v in vectors))


def _cross_hamming(a, b):
    """
    Absolute Hamming distances between every row of ``a`` and of ``b``.
    """
    return np.count_nonzero(
        a[:, None, :] != b[None, :, :], axis=2
    ).astype(np.int64)


class FlowSolution(object):
    """
    A transport plan between two distributions.

    Public Attributes:
        - ``pairs`` (tuple of ``(source, target, mass)``)
        - ``objective``
    """

    def __init__(self, pairs, objective):
        self.pairs = tuple(pairs)
        self.objective = float(objective)

    def __repr__(self):
        return 'FlowSolution(pairs=<{n} pairs>, objective={obj!r})'.format(
            n=len(self.pairs),
            obj=self.objective
        )


def _integer_masses(probabilities):
    """
    Scale two or more probability vectors to integers with a common total.

    Masses that are rationals with a small common denominator are scaled
    exactly; anything else is rounded on a ``2**40`` grid with the
    largest-remainder rule so every vector still sums to the scale.
    """
    fractions = [
        [Fraction(p).limit_denominator(10 ** 6) for p in probs]
        for probs in probabilities
    ]
    exact = all(
        abs(float(f) - p) <= 1e-15
        for fs, probs in zip(fractions, probabilities)
        for f, p in zip(fs, probs)
    )
    if exact:
        denominators = [f.denominator for fs in fractions for f in fs]
        scale = reduce(lambda a, b: a * b // math.gcd(a, b), denominators, 1)
        if scale <= MAX_EXACT_DENOMINATOR:
            scaled = [
                np.array([int(f * scale) for f in fs], dtype=np.int64)
                for fs in fractions
            ]
            if all(int(s.sum()) == scale for s in scaled):
                return scale, scaled
    scale = BINARY_MASS_SCALE
    return scale, [
        core.largest_remainder(
            np.asarray(probs) / np.sum(probs) * scale, scale
        )
        for probs in probabilities
    ]


def verify_flow(d1, d2, solution):
    """
    Recompute the objective of ``solution`` in rational arithmetic and check
    that its marginals match ``d1`` and ``d2`` within ``1e-9``.

    :returns: The objective as a :py:class:`fractions.Fraction`
    """
    out_mass = {}
    in_mass = {}
    objective = Fraction(0)
    for source, target, mass in solution.pairs:
        if mass < 0:
            raise error.HugeObjectSolverError('Negative flow on a pair.')
        out_mass[source] = out_mass.get(source, 0.0) + mass
        in_mass[target] = in_mass.get(target, 0.0) + mass
        objective += Fraction(mass) * Fraction(hamming_abs(source, target),
                                               source.length)
    for dist, marginal in ((d1, out_mass), (d2, in_mass)):
        for vector, probability in dist.support:
            if abs(marginal.get(vector, 0.0) - probability) > MARGINAL_TOLERANCE:
                raise error.HugeObjectSolverError(
                    'Flow marginal at {v} is {m}, expected {p}.'.format(
                        v=vector,
                        m=marginal.get(vector, 0.0),
                        p=probability
                    )
                )
    return objective


def emd_exact(d1, d2):
    """
    Earth mover distance between ``d1`` and ``d2`` under the normalized
    Hamming ground metric.

    :returns: A tuple ``(value, FlowSolution)``
    """
    _check_dimensions(d1, d2)
    n = d1.dimension
    sources = d1.vectors
    targets = d2.vectors
    scale, (supply, demand) = _integer_masses(
        [d1.probabilities, d2.probabilities]
    )
    costs = _cross_hamming(d1.matrix(), d2.matrix())

    graph = nx.DiGraph()
    for i, amount in enumerate(supply):
        graph.add_node(('s', i), demand=-int(amount))
    for j, amount in enumerate(demand):
        graph.add_node(('t', j), demand=int(amount))
    for i in range(len(sources)):
        for j in range(len(targets)):
            graph.add_edge(('s', i), ('t', j), weight=int(costs[i, j]))

    try:
        flow = nx.min_cost_flow(graph)
    except (nx.NetworkXUnfeasible, nx.NetworkXUnbounded) as exc:
        raise error.HugeObjectSolverError(
            'Transport problem reported {exc}.'.format(exc=exc)
        )

    pairs = []
    total_cost = 0
    for i, row in enumerate(sources):
        for node, amount in flow[('s', i)].items():
            if amount > 0:
                j = node[1]
                pairs.append((row, targets[j], amount / float(scale)))
                total_cost += amount * int(costs[i, j])
    value = total_cost / float(scale * n)
    solution = FlowSolution(pairs, value)
    verify_flow(d1, d2, solution)
    logger.debug('emd_exact: %d x %d supports, value %.6f',
                 len(sources), len(targets), value)
    return value, solution


def emd_lp(d1, d2):
    """
    EMD by a dense linear program; an independent check on
    :py:func:`emd_exact` for small supports.
    """
    _check_dimensions(d1, d2)
    s1, s2 = d1.support_size, d2.support_size
    costs = _cross_hamming(d1.matrix(), d2.matrix()) / float(d1.dimension)
    equalities = np.zeros((s1 + s2, s1 * s2))
    for i in range(s1):
        equalities[i, i * s2:(i + 1) * s2] = 1.0
    for j in range(s2):
        equalities[s1 + j, j::s2] = 1.0
    rhs = np.concatenate([d1.probabilities, d2.probabilities])
    result = linprog(costs.ravel(), A_eq=equalities, b_eq=rhs,
                     bounds=(0, None), method='highs')
    if not result.success:
        raise error.HugeObjectSolverError(result.message)
    return float(result.fun)


class CorrespondingMatrix(object):
    """
    An ``s x n`` binary matrix whose uniformly random row is distributed
    as some distribution; repeated rows encode multiplicity.

    Public Attributes:
        - ``rows`` (``numpy`` uint8 array)
        - ``s``
        - ``n``
    """

    def __init__(self, rows):
        if isinstance(rows, np.ndarray):
            array = np.array(rows, dtype=np.uint8)
        else:
            array = np.vstack([
                r.bits if isinstance(r, core.BitVector) else np.asarray(r)
                for r in rows
            ]).astype(np.uint8)
        if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
            raise error.HugeObjectInitializationError(
                'A corresponding matrix needs at least one row and column.'
            )
        if not np.all(array <= 1):
            raise error.HugeObjectInitializationError('Entries must be 0 or 1.')
        self.rows = array

    @property
    def s(self):
        return int(self.rows.shape[0])

    @property
    def n(self):
        return int(self.rows.shape[1])

    def row_vectors(self):
        return [core.BitVector(r) for r in self.rows]

    def to_distribution(self):
        return core.ExplicitDistribution.uniform(self.row_vectors())

    def __repr__(self):
        return 'CorrespondingMatrix(s={s}, n={n})'.format(s=self.s, n=self.n)


def corresponding_matrix(distribution, s):
    """
    Build an ``s``-row corresponding matrix of ``distribution``.

    Every probability must be a multiple of ``1/s`` within ``1e-9``.
    """
    rows = []
    for vector, probability in distribution.support:
        copies = probability * s
        if abs(copies - round(copies)) > 1e-9:
            raise error.HugeObjectPreconditionError(
                'Mass {p} of {v} is not a multiple of 1/{s}.'.format(
                    p=probability,
                    v=vector,
                    s=s
                )
            )
        rows.extend([vector] * int(round(copies)))
    if len(rows) != s:
        raise error.HugeObjectPreconditionError(
            'Row count {r} differs from {s}.'.format(r=len(rows), s=s)
        )
    return CorrespondingMatrix(rows)


def _check_shapes(left, right):
    if left.rows.shape != right.rows.shape:
        raise error.HugeObjectDimensionError(
            'Matrix shapes {a} and {b} differ.'.format(
                a=left.rows.shape,
                b=right.rows.shape
            )
        )


def min_perm_matrix_distance(left, right):
    """
    Minimum over row permutations of the normalized Hamming distance
    between two corresponding matrices, solved as an assignment problem.
    """
    _check_shapes(left, right)
    costs = _cross_hamming(left.rows, right.rows)
    row_ind, col_ind = linear_sum_assignment(costs)
    return costs[row_ind, col_ind].sum() / float(left.s * left.n)


def min_perm_matrix_distance_brute(left, right):
    """
    Factorial-time reference for :py:func:`min_perm_matrix_distance`.
    """
    _check_shapes(left, right)
    if left.s > 8:
        raise error.HugeObjectPreconditionError(
            'Brute force is limited to 8 rows.'
        )
    costs = _cross_hamming(left.rows, right.rows)
    columns = np.arange(left.s)
    best = min(
        costs[list(p), columns].sum()
        for p in itertools.permutations(range(left.s))
    )
    return best / float(left.s * left.n)


def emd_brute_force(d1, d2, max_rows=8):
    """
    EMD via a common corresponding-matrix size and an exhaustive
    row-permutation minimum. Usable when every mass is a multiple of
    ``1/s`` for some ``s <= max_rows``.
    """
    _check_dimensions(d1, d2)
    for s in range(1, max_rows + 1):
        try:
            left = corresponding_matrix(d1, s)
            right = corresponding_matrix(d2, s)
        except error.HugeObjectPreconditionError:
            continue
        return min_perm_matrix_distance_brute(left, right)
    raise error.HugeObjectPreconditionError(
        'Masses are not multiples of 1/s for any s <= {m}.'.format(m=max_rows)
    )


def _type_matched_permutation(row_pairs):
    """
    Pick an index permutation for the right-hand side by matching column
    types.

    ``row_pairs`` is a list of ``(x, y)`` vectors taken as corresponding
    rows; column ``j`` of either side has the type ``(x_r[j])_r``. Columns
    of equal type are matched first (the multiset intersection of the two
    type histograms); the rest are paired in lexicographic type order.
    """
    n = row_pairs[0][0].length
    left = np.vstack([x.bits for x, _ in row_pairs])
    right = np.vstack([y.bits for _, y in row_pairs])
    left_types = [left[:, j].tobytes() for j in range(n)]
    right_types = [right[:, j].tobytes() for j in range(n)]

    pools = {}
    for j, t in enumerate(right_types):
        pools.setdefault(t, []).append(j)

    mapping = [None] * n
    unmatched_left = []
    for j, t in enumerate(left_types):
        pool = pools.get(t)
        if pool:
            mapping[j] = pool.pop(0)
        else:
            unmatched_left.append(j)

    unmatched_right = sorted(
        (j for pool in pools.values() for j in pool),
        key=lambda j: (right_types[j], j)
    )
    unmatched_left.sort(key=lambda j: (left_types[j], j))
    for j, k in zip(unmatched_left, unmatched_right):
        mapping[j] = k
    return core.Permutation(mapping)


def emd_up_to_index_permutation(d1, d2, mode='exact', rounds=4):
    """
    EMD between ``d1`` and the closest index permutation of ``d2``.

    :param mode: ``'exact'`` minimizes over all ``n!`` permutations
        (``n <= 8``); ``'heuristic'`` picks permutations by column-type
        matching and returns the EMD of the best one found, an upper bound
        on the exact value.
    :type mode: str
    """
    _check_dimensions(d1, d2)
    n = d1.dimension
    if mode == 'exact':
        if n > EXACT_PERMUTATION_LIMIT:
            raise error.HugeObjectPreconditionError(
                'Exact mode supports n <= {limit}, got {n}.'.format(
                    limit=EXACT_PERMUTATION_LIMIT,
                    n=n
                )
            )
        best = float('inf')
        seen = set()
        for mapping in itertools.permutations(range(n)):
            permuted = core.permute_distribution(d2, core.Permutation(mapping))
            key = frozenset(permuted.support)
            if key in seen:
                continue
            seen.add(key)
            value, _ = emd_exact(d1, permuted)
            if value < best:
                best = value
                if best <= 0.0:
                    break
        return best

    if mode != 'heuristic':
        raise error.HugeObjectPreconditionError(
            'Unknown mode {mode!r}.'.format(mode=mode)
        )
    best, solution = emd_exact(d1, d2)
    for pairs in _initial_row_pairings(d1, d2, solution):
        sigma = _type_matched_permutation(pairs)
        current = core.permute_distribution(d2, sigma)
        value, current_solution = emd_exact(d1, current)
        best = min(best, value)
        for _ in range(rounds):
            step = _type_matched_permutation(
                [(x, y) for x, y, _ in current_solution.pairs]
            )
            if step == core.Permutation.identity(n):
                break
            sigma = core.compose(sigma, step)
            current = core.permute_distribution(d2, sigma)
            refined, current_solution = emd_exact(d1, current)
            if refined >= value:
                break
            value = refined
            best = min(best, value)
        if best <= 0.0:
            break
    return best


def _initial_row_pairings(d1, d2, solution):
    """
    Candidate row correspondences for column-type matching: the optimal
    coupling at the identity, then both supports ranked by mass, then by
    Hamming weight. Weight and mass are unchanged by index permutations.
    """
    yield [(x, y) for x, y, _ in solution.pairs]
    by_mass = [
        sorted(d.support, key=lambda item: (-item[1], str(item[0])))
        for d in (d1, d2)
    ]
    yield [(x, y) for (x, _), (y, _) in zip(*by_mass)]
    by_weight = [
        sorted(d.support, key=lambda item: (item[0].weight, -item[1],
                                            str(item[0])))
        for d in (d1, d2)
    ]
    yield [(x, y) for (x, _), (y, _) in zip(*by_weight)]
