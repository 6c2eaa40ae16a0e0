"""
The encodings used by the gap property.

- ``SE`` maps an index symbol and a secret bit to ``k`` bits with a random
  binary linear code whose distance and dual distance are measured when it
  is built.
- ``GE`` is a Reed-Solomon code over ``GF(2^l)``: a message of ``m``
  symbols is the coefficient vector of a polynomial evaluated at all
  ``n = 2^l`` field elements.
- ``FE`` places a ``0``, then ``b`` ones, then the ``n`` chunks
  ``SE(GE(z)_j, x_j)``.

All positions and symbols are 0-based. The index symbol of ``SE`` is the
field element itself, so the zero element stands for the top value ``n``
of a 1-based enumeration.
"""
import json
import logging
import math

import galois
import numpy as np

from . import core, error

logger = logging.getLogger(__name__)

DEFAULT_TARGET_ZETA = 0.2
# largest default special-vector mass; keeps the encodings at 1 - 3*alpha >= 13/16
MAX_DEFAULT_GAP_ALPHA = 1 / 16.0


class GaloisField(object):
    """
    ``GF(2^l)`` built on the lexicographically least irreducible polynomial
    of degree ``l``.

    Public Attributes:
        - ``l``
        - ``order``
        - ``polynomial`` (integer representation, e.g. ``0b111`` for
          ``x^2 + x + 1``)
        - ``field`` (the :py:mod:`galois` field class)

    Public Methods:
        - :py:meth:`add`
        - :py:meth:`mul`
        - :py:meth:`inverse`
        - :py:meth:`poly_eval`
        - :py:meth:`interpolate`
    """

    def __init__(self, l):
        if not isinstance(l, (int, np.integer)) or not 1 <= l <= 16:
            raise error.HugeObjectInitializationError(
                'Field degree must be an integer in [1, 16], got {l!r}.'.format(
                    l=l
                )
            )
        self.l = int(l)
        self.order = 2 ** self.l
        if self.l == 1:
            self.field = galois.GF(2)
            self.polynomial = 0b10
        else:
            poly = galois.irreducible_poly(2, self.l, method='min')
            self.field = galois.GF(2 ** self.l, irreducible_poly=poly)
            self.polynomial = int(poly)

    def elements(self, values):
        values = np.asarray(values, dtype=np.int64)
        if values.size and (values.min() < 0 or values.max() >= self.order):
            raise error.HugeObjectDimensionError(
                'Symbols must lie in [0, {q}).'.format(q=self.order)
            )
        return self.field(values)

    def add(self, a, b):
        return int(self.elements(a) + self.elements(b))

    def mul(self, a, b):
        return int(self.elements(a) * self.elements(b))

    def inverse(self, a):
        if a == 0:
            raise error.HugeObjectPreconditionError('Zero has no inverse.')
        return int(self.elements(a) ** -1)

    def poly_eval(self, coefficients, points):
        """
        Evaluate the polynomial ``sum_i c_i x^i`` at every point.

        :param coefficients: Ascending coefficients ``c_0 .. c_{m-1}``.
        :returns: A ``numpy`` int64 array
        """
        poly = galois.Poly(self.elements(coefficients)[::-1], field=self.field)
        values = poly(self.elements(points))
        return np.asarray(values.view(np.ndarray), dtype=np.int64)

    def interpolate(self, points, values, length):
        """
        Ascending coefficients, padded to ``length``, of the unique
        polynomial of degree below ``len(points)`` through the given pairs.
        """
        poly = galois.lagrange_poly(self.elements(points), self.elements(values))
        ascending = np.asarray(poly.coeffs.view(np.ndarray), dtype=np.int64)[::-1]
        if ascending.size > length:
            raise error.HugeObjectSolverError(
                'Interpolant has degree {d} >= {m}.'.format(
                    d=ascending.size - 1,
                    m=length
                )
            )
        padded = np.zeros(length, dtype=np.int64)
        padded[:ascending.size] = ascending
        return padded

    def __repr__(self):
        return 'GaloisField(l={l}, polynomial={p:#x})'.format(
            l=self.l,
            p=self.polynomial
        )


class GapGeometry(object):
    """
    Derived sizes and index blocks of the gap construction.

    For ``n = 2^l`` payload bits and chunk length ``k``:
    ``b = floor(log2(ceil(log2(k*n)))) + 1`` and ``N = 1 + b + k*n``.
    Position ``0`` carries the leading marker, ``B = [1, b]`` the ordering
    block, and chunk ``j`` occupies ``[1 + b + k*j, 1 + b + k*(j+1))``.

    Public Attributes:
        - ``l``, ``n``, ``k``, ``b``, ``m``, ``N``
        - ``B`` (tuple of indices)
        - ``pattern_count`` (``ceil(log2(k*n))``, the number of ordering
          patterns)
        - ``gap_alpha`` (``min(1/l, 1/16)`` unless given)

    Public Methods:
        - :py:meth:`chunk`
        - :py:meth:`describe`
    """

    def __init__(self, l, k=None, m=None, alpha=None):
        if not isinstance(l, (int, np.integer)) or l < 1:
            raise error.HugeObjectInitializationError(
                'l must be a positive integer.'
            )
        self.l = int(l)
        self.n = 2 ** self.l
        self.k = int(4 * (self.l + 1) if k is None else k)
        self.m = int(math.ceil(self.n / 2.0) if m is None else m)
        if self.k < 1:
            raise error.HugeObjectInitializationError('k must be positive.')
        if not 1 <= self.m <= self.n:
            raise error.HugeObjectInitializationError(
                'm must lie in [1, n={n}].'.format(n=self.n)
            )
        region = self.k * self.n
        # ceil(log2(kn)) and floor(log2(.)) on integers
        self.pattern_count = (region - 1).bit_length()
        self.b = max(self.pattern_count, 1).bit_length()
        self.N = 1 + self.b + region
        self.B = tuple(range(1, self.b + 1))
        self.gap_alpha = float(
            min(1.0 / self.l, MAX_DEFAULT_GAP_ALPHA) if alpha is None else alpha
        )
        if not 0 < self.gap_alpha <= 1:
            raise error.HugeObjectInitializationError(
                'alpha must lie in (0, 1].'
            )

    @property
    def encoding_start(self):
        return 1 + self.b

    def chunk(self, j):
        """
        The indices of chunk ``j`` as a range.
        """
        if not 0 <= j < self.n:
            raise error.HugeObjectOracleError(
                'Chunk {j} out of range for n={n}.'.format(j=j, n=self.n)
            )
        start = self.encoding_start + self.k * j
        return range(start, start + self.k)

    def describe(self, se=None):
        description = {
            'l': self.l,
            'n': self.n,
            'k': self.k,
            'b': self.b,
            'm': self.m,
            'N': self.N,
            'pattern_count': self.pattern_count,
            'gap_alpha': self.gap_alpha,
        }
        if se is not None:
            description['zeta_measured'] = se.zeta_measured
        return description

    def __eq__(self, other):
        return isinstance(other, GapGeometry) and \
            self.describe() == other.describe()

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'GapGeometry(l={l}, k={k}, m={m}, N={N})'.format(
            l=self.l,
            k=self.k,
            m=self.m,
            N=self.N
        )


def message_matrix(dimension):
    """
    All ``2**dimension`` binary messages, most significant bit first.
    """
    values = np.arange(2 ** dimension, dtype=np.int64)
    shifts = np.arange(dimension - 1, -1, -1)
    return ((values[:, None] >> shifts) & 1).astype(np.int64)


def _weight_distribution(generator):
    codewords = message_matrix(generator.shape[0]).dot(generator) % 2
    weights = codewords.sum(axis=1)
    return np.bincount(weights, minlength=generator.shape[1] + 1)


def _krawtchouk(j, i, length):
    return sum(
        (-1) ** s * math.comb(i, s) * math.comb(length - i, j - s)
        for s in range(0, j + 1)
    )


def _min_distance(distribution):
    nonzero = np.nonzero(distribution[1:])[0]
    return int(nonzero[0] + 1) if nonzero.size else 0


def _dual_min_distance(distribution):
    """
    Minimum distance of the dual code from the weight distribution of the
    code, by the MacWilliams transform in exact integer arithmetic.
    """
    length = distribution.size - 1
    size = int(distribution.sum())
    for j in range(1, length + 1):
        total = sum(
            int(distribution[i]) * _krawtchouk(j, i, length)
            for i in range(length + 1)
        )
        if total // size > 0:
            return j
    return length + 1


class SeCode(object):
    """
    A binary linear code of dimension ``l + 1`` and length ``k``.

    The message of ``(i, a)`` is the ``l`` bits of ``i`` (most significant
    first) followed by ``a``. ``min_distance`` is the minimum weight of a
    nonzero codeword; ``dual_min_distance`` is the dual distance of the
    subcode spanned by the ``l`` index rows, which bounds the size of index
    sets on which ``SE(i, a)`` with uniform ``i`` is uniform.
    ``zeta_measured = (min(min_distance, dual_min_distance) - 1) / k``.

    Public Attributes:
        - ``l``, ``k``
        - ``generator`` (``(l+1) x k`` uint8 array)
        - ``min_distance``, ``dual_min_distance``, ``zeta_measured``
        - ``targets`` (the ``target_zeta`` and ``min_dual_distance`` the
          code was built for, ``None`` for a hand-built code)

    Public Methods:
        - :py:meth:`meets_targets`
        - :py:meth:`to_json`
        - :py:meth:`from_json`
    """

    def __init__(self, l, k, generator, seed=None, targets=None):
        generator = np.asarray(generator, dtype=np.int64) % 2
        if generator.shape != (l + 1, k):
            raise error.HugeObjectDimensionError(
                'Generator must be {r}x{k}, got {shape}.'.format(
                    r=l + 1,
                    k=k,
                    shape=generator.shape
                )
            )
        self.l = int(l)
        self.k = int(k)
        self.seed = seed
        self.targets = dict(targets) if targets else None
        self.generator = generator.astype(np.uint8)
        self.generator.setflags(write=False)

        full = _weight_distribution(generator)
        self.min_distance = _min_distance(full)
        self.dual_min_distance = _dual_min_distance(
            _weight_distribution(generator[:self.l])
        ) if self.l else self.k + 1
        self.zeta_measured = max(
            0, min(self.min_distance, self.dual_min_distance) - 1
        ) / float(self.k)

        codewords = message_matrix(self.l + 1).dot(generator) % 2
        self._codebook = codewords.astype(np.uint8)
        self._lookup = {}
        if self.min_distance > 0:
            for message, word in enumerate(self._codebook):
                self._lookup[word.tobytes()] = (message >> 1, message & 1)

    def meets_targets(self):
        """
        Whether both measured distances reach ``targets``. Always ``True``
        for a code built without targets.
        """
        if not self.targets:
            return True
        return self.min_distance >= self.targets['target_zeta'] * self.k and \
            self.dual_min_distance >= self.targets['min_dual_distance']

    def encode(self, i, a):
        if not 0 <= i < 2 ** self.l:
            raise error.HugeObjectDimensionError(
                'Index symbol {i} out of range [0, {n}).'.format(
                    i=i,
                    n=2 ** self.l
                )
            )
        if a not in (0, 1):
            raise error.HugeObjectDimensionError('The secret must be a bit.')
        return self._codebook[(int(i) << 1) | int(a)]

    def decode(self, bits):
        bits = np.asarray(bits, dtype=np.uint8)
        return self._lookup.get(bits.tobytes(), core.INVALID) \
            if bits.size == self.k else core.INVALID

    def to_json(self):
        width = (self.k + 3) // 4
        rows = [
            '{value:0{width}x}'.format(
                value=int(''.join(str(b) for b in row), 2),
                width=width
            )
            for row in self.generator
        ]
        return json.dumps({
            'l': self.l,
            'k': self.k,
            'generator': rows,
            'min_distance': self.min_distance,
            'dual_min_distance': self.dual_min_distance,
            'zeta_measured': self.zeta_measured,
            'seed': self.seed,
            'targets': self.targets,
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        k = data['k']
        generator = [
            [int(b) for b in '{value:0{k}b}'.format(value=int(row, 16), k=k)]
            for row in data['generator']
        ]
        code = cls(data['l'], k, generator, seed=data.get('seed'),
                   targets=data.get('targets'))
        if code.min_distance != data['min_distance'] or \
                code.dual_min_distance != data['dual_min_distance']:
            raise error.HugeObjectInitializationError(
                'Recorded distances do not match the generator.'
            )
        return code

    def __repr__(self):
        return 'SeCode(l={l}, k={k}, min_distance={d}, ' \
            'dual_min_distance={dd})'.format(
                l=self.l,
                k=self.k,
                d=self.min_distance,
                dd=self.dual_min_distance
            )


def dual_distance_target(l, k, target_zeta):
    """
    The index-subcode dual distance :py:func:`build_se` requires by default:
    ``ceil(target_zeta * k)`` capped at what ``l`` index rows of length
    ``k`` can reach. Dual distance 3 needs ``k`` distinct nonzero columns,
    so ``k < 2**l``; dual distance 4 is reached with distinct columns whose
    leading bit is set, so ``k <= 2**(l-1)``. Otherwise only 2 is possible.
    """
    wanted = int(math.ceil(target_zeta * k - 1e-9))
    if l >= 2 and k <= 2 ** (l - 1):
        reachable = 4
    elif k < 2 ** l:
        reachable = 3
    else:
        reachable = 2
    return max(1, min(wanted, reachable))


def _index_rows(l, k, min_dual_distance, rng):
    """
    ``l x k`` index rows drawn column by column so the dual distance
    reaches ``min(min_dual_distance, 4)`` whenever ``k`` allows it.
    """
    if min_dual_distance >= 4 and l >= 2 and k <= 2 ** (l - 1):
        top = 2 ** (l - 1)
        values = rng.choice(top, size=k, replace=False) + top
    elif min_dual_distance >= 3 and k < 2 ** l:
        values = rng.choice(np.arange(1, 2 ** l), size=k, replace=False)
    else:
        values = rng.integers(1, 2 ** l, size=k)
    shifts = np.arange(l - 1, -1, -1)
    return (np.asarray(values, dtype=np.int64)[None, :] >>
            shifts[:, None]) & 1


def build_se(l, k, target_zeta, seed, min_dual_distance=None,
             max_attempts=None):
    """
    Draw random ``(l+1) x k`` generator matrices until the code has
    minimum distance at least ``target_zeta * k`` and index-subcode dual
    distance at least ``min_dual_distance``.

    :param min_dual_distance: Defaults to
        :py:func:`dual_distance_target`. Both targets are recorded in
        ``SeCode.targets``.
    :raises error.HugeObjectConstructionError: when the attempt cap is hit
    """
    if k < 2 * (l + 1):
        raise error.HugeObjectPreconditionError(
            'k={k} must be at least 2(l+1)={m}.'.format(k=k, m=2 * (l + 1))
        )
    if l + 1 > 20:
        raise error.HugeObjectPreconditionError(
            'Exhaustive distance checks support l <= 19.'
        )
    if min_dual_distance is None:
        min_dual_distance = dual_distance_target(l, k, target_zeta)
    targets = {'target_zeta': float(target_zeta),
               'min_dual_distance': int(min_dual_distance)}
    rng = core.derive_rng(seed)
    best = {'min_distance': -1, 'dual_min_distance': -1}

    def attempt():
        generator = np.vstack([
            _index_rows(l, k, min_dual_distance, rng),
            rng.integers(0, 2, size=(1, k)),
        ])
        code = SeCode(l, k, generator, seed=seed, targets=targets)
        best['min_distance'] = max(best['min_distance'], code.min_distance)
        best['dual_min_distance'] = max(best['dual_min_distance'],
                                        code.dual_min_distance)
        if not code.meets_targets():
            raise core.Resample(
                'best distances {d}/{dd}, needed {t}/{td}'.format(
                    d=best['min_distance'],
                    dd=best['dual_min_distance'],
                    t=target_zeta * k,
                    td=min_dual_distance
                )
            )
        return code

    code = core.construct_with_retries(
        attempt, 'SE code l={l} k={k}'.format(l=l, k=k), max_attempts
    )
    logger.debug('build_se: %r', code)
    return code


def se_encode(code, i, a):
    return core.BitVector(code.encode(i, a))


def se_decode(code, w):
    """
    Exact-match decoding: ``(i, a)`` for a codeword, otherwise ``INVALID``.
    """
    bits = w.bits if isinstance(w, core.BitVector) else w
    return code.decode(bits)


class GeCode(object):
    """
    Reed-Solomon code over ``GF(2^l)`` with message length ``m``, evaluated
    at the field elements ``0 .. n-1`` in that order.
    """

    def __init__(self, l, m):
        self.field = GaloisField(l)
        self.n = self.field.order
        if not 1 <= m <= self.n:
            raise error.HugeObjectInitializationError(
                'm must lie in [1, {n}].'.format(n=self.n)
            )
        self.m = int(m)
        self.points = np.arange(self.n, dtype=np.int64)

    def describe(self):
        return {'l': self.field.l, 'm': self.m,
                'polynomial': '{p:#x}'.format(p=self.field.polynomial)}

    def __repr__(self):
        return 'GeCode(l={l}, m={m})'.format(l=self.field.l, m=self.m)


def build_ge(geo):
    return GeCode(geo.l, geo.m)


def build_gap_codes(geo, seed, target_zeta=DEFAULT_TARGET_ZETA,
                    max_attempts=None):
    """
    The ``(SE, GE)`` pair for ``geo``.
    """
    se = build_se(geo.l, geo.k, target_zeta, seed, max_attempts=max_attempts)
    return se, build_ge(geo)


def _check_symbols(symbols, length, bound, what):
    symbols = np.asarray(symbols, dtype=np.int64)
    if symbols.shape != (length,):
        raise error.HugeObjectDimensionError(
            '{what} must have {length} symbols.'.format(what=what, length=length)
        )
    if symbols.size and (symbols.min() < 0 or symbols.max() >= bound):
        raise error.HugeObjectDimensionError(
            '{what} symbols must lie in [0, {bound}).'.format(
                what=what,
                bound=bound
            )
        )
    return symbols


def ge_encode(geo, code, z):
    """
    Evaluations of the polynomial with coefficients ``z`` at all ``n``
    points.
    """
    z = _check_symbols(z, code.m, code.n, 'z')
    return code.field.poly_eval(z, code.points)


def ge_decode(geo, code, y):
    """
    Interpolate from the first ``m`` evaluations and check the rest.

    :returns: The coefficient vector, or ``INVALID``
    """
    y = _check_symbols(y, code.n, code.n, 'y')
    z = code.field.interpolate(code.points[:code.m], y[:code.m], code.m)
    if code.m < code.n and \
            not np.array_equal(code.field.poly_eval(z, code.points), y):
        return core.INVALID
    return z


def fe_encode(geo, se, ge, z, x):
    """
    ``0 . 1^b . SE(GE(z)_0, x_0) ... SE(GE(z)_{n-1}, x_{n-1})``.
    """
    bits = x.bits if isinstance(x, core.BitVector) else np.asarray(x)
    if bits.shape != (geo.n,):
        raise error.HugeObjectDimensionError(
            'Payload must have {n} bits.'.format(n=geo.n)
        )
    if se.k != geo.k or se.l != geo.l or ge.m != geo.m:
        raise error.HugeObjectDimensionError(
            'Codes do not match the geometry.'
        )
    symbols = ge_encode(geo, ge, z)
    out = np.zeros(geo.N, dtype=np.uint8)
    out[list(geo.B)] = 1
    chunks = np.concatenate([se.encode(symbols[j], int(bits[j]))
                             for j in range(geo.n)])
    out[geo.encoding_start:] = chunks
    return core.BitVector(out)


def _chunk_bits(geo, X, j):
    bits = X.bits if isinstance(X, core.BitVector) else np.asarray(X)
    if bits.shape != (geo.N,):
        raise error.HugeObjectDimensionError(
            'Encoding must have {N} bits.'.format(N=geo.N)
        )
    chunk = geo.chunk(j)
    return bits[chunk.start:chunk.stop]


def fe_decode_bit(geo, se, X, j):
    """
    The secret bit of chunk ``j``, or ``INVALID`` if the chunk is not a
    codeword.
    """
    decoded = se.decode(_chunk_bits(geo, X, j))
    return decoded if decoded is core.INVALID else decoded[1]


def fe_decode_all(geo, se, ge, X):
    """
    Decode every chunk of ``X``.

    :returns: A tuple ``(z, x, gamma)``: ``gamma`` is the set of chunks that
        are not codewords; ``x`` is the payload :py:class:`core.BitVector`
        when ``gamma`` is empty, else ``None``; ``z`` is the GE message when
        the prefix is correct and the index symbols form a codeword, else
        ``INVALID``.
    """
    bits = X.bits if isinstance(X, core.BitVector) else np.asarray(X)
    symbols = np.zeros(geo.n, dtype=np.int64)
    payload = np.zeros(geo.n, dtype=np.uint8)
    gamma = set()
    for j in range(geo.n):
        decoded = se.decode(_chunk_bits(geo, bits, j))
        if decoded is core.INVALID:
            gamma.add(j)
        else:
            symbols[j], payload[j] = decoded
    if gamma:
        return core.INVALID, None, gamma
    x = core.BitVector(payload)
    prefix_ok = bits[0] == 0 and bool(np.all(bits[list(geo.B)] == 1))
    if not prefix_ok:
        return core.INVALID, x, gamma
    return ge_decode(geo, ge, symbols), x, gamma


def fe_is_valid(geo, se, ge, X):
    """
    Whether ``X`` is in the image of ``FE``.
    """
    z, _, gamma = fe_decode_all(geo, se, ge, X)
    return not gamma and z is not core.INVALID
