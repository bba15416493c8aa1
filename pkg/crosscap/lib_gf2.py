# -*- coding: utf-8 -*-
"""
Library for linear algebra over GF(2).

Vectors and matrices are immutable and bit-packed in numpy ``uint64`` words,
bit ``j`` of word ``k`` holding coordinate ``64*k + j``. Coordinate ``i-1``
is the crosscap class mu_i when the space is H_1(N_g; Z_2).
"""
import hashlib
import numpy as np

WORD = 64


class GF2ShapeError(ValueError):
    """Operands have incompatible dimensions."""


class GF2SingularError(ArithmeticError):
    """Matrix is not invertible over GF(2)."""


class DegenerateClassError(ValueError):
    """A transvection was requested along the zero vector."""


def _nwords(n):
    return max(1, (n + WORD - 1) // WORD)


def _pack(bits):
    """Pack a (..., n) array of 0/1 into (..., nwords) uint64."""
    bits = np.asarray(bits, dtype=np.uint64) & np.uint64(1)
    n = bits.shape[-1]
    nw = _nwords(n)
    pad = np.zeros(bits.shape[:-1] + (nw * WORD - n,), dtype=np.uint64)
    bits = np.concatenate([bits, pad], axis=-1).reshape(bits.shape[:-1] + (nw, WORD))
    shifts = np.arange(WORD, dtype=np.uint64)
    return np.bitwise_or.reduce(bits << shifts, axis=-1)


def _unpack(words, n):
    """Inverse of `_pack`, returns uint8 bits."""
    shifts = np.arange(WORD, dtype=np.uint64)
    bits = (words[..., None] >> shifts) & np.uint64(1)
    bits = bits.reshape(words.shape[:-1] + (words.shape[-1] * WORD,))
    return bits[..., :n].astype(np.uint8)


def _frozen(arr):
    arr = np.ascontiguousarray(arr, dtype=np.uint64)
    arr.setflags(write=False)
    return arr


class GF2Vector():
    """
    A vector of F_2^n.

    Parameters
    ----------
    dim : int
        Dimension n.
    words : array of uint64
        Packed coordinates, padding bits must be zero.
    """
    __slots__ = ('dim', 'words')

    def __init__(self, dim, words):
        words = np.asarray(words, dtype=np.uint64).reshape(-1)
        if dim < 1 or words.size != _nwords(dim):
            raise GF2ShapeError('%i words cannot hold a vector of dimension %i' % (words.size, dim))
        spare = _nwords(dim) * WORD - dim
        if spare and int(words[-1]) >> (WORD - spare):
            raise GF2ShapeError('bits set beyond dimension %i' % dim)
        self.dim = dim
        self.words = _frozen(words)

    @classmethod
    def zeros(cls, dim):
        return cls(dim, np.zeros(_nwords(dim), dtype=np.uint64))

    @classmethod
    def from_bits(cls, bits):
        bits = np.asarray(bits).reshape(-1)
        return cls(bits.size, _pack(bits))

    @classmethod
    def from_support(cls, dim, support):
        """Vector with ones at the given 1-based coordinates."""
        bits = np.zeros(dim, dtype=np.uint8)
        for i in support:
            if not 1 <= i <= dim:
                raise GF2ShapeError('coordinate %i outside 1..%i' % (i, dim))
            bits[i - 1] ^= 1
        return cls.from_bits(bits)

    @classmethod
    def from_int(cls, dim, code):
        if code < 0 or code >> dim:
            raise GF2ShapeError('code %i does not fit in dimension %i' % (code, dim))
        mask = (1 << WORD) - 1
        return cls(dim, [(code >> (WORD * k)) & mask for k in range(_nwords(dim))])

    def to_int(self):
        return sum(int(w) << (WORD * k) for k, w in enumerate(self.words))

    def bits(self):
        return _unpack(self.words, self.dim)

    def support(self):
        return tuple(int(i) + 1 for i in np.flatnonzero(self.bits()))

    def weight(self):
        return int(self.bits().sum())

    def is_zero(self):
        return not self.words.any()

    def dot(self, other):
        """Raw bilinear product sum(x_i y_i) mod 2."""
        _check_dims(self.dim, other.dim)
        return int(_unpack(self.words & other.words, self.dim).sum() & 1)

    def __add__(self, other):
        _check_dims(self.dim, other.dim)
        return GF2Vector(self.dim, self.words ^ other.words)

    __sub__ = __add__

    def __eq__(self, other):
        if not isinstance(other, GF2Vector):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((self.dim, self.words.tobytes()))

    def __repr__(self):
        return 'GF2Vector(%i, {%s})' % (self.dim, ','.join(map(str, self.support())))


class GF2Matrix():
    """
    A rows x cols matrix over GF(2), stored row-major as packed words.

    Parameters
    ----------
    rows, cols : int
    data : array of uint64, shape (rows, nwords(cols))
    """
    __slots__ = ('rows', 'cols', 'data')

    def __init__(self, rows, cols, data):
        data = np.asarray(data, dtype=np.uint64)
        if rows < 1 or cols < 1 or data.shape != (rows, _nwords(cols)):
            raise GF2ShapeError('data of shape %s for a %ix%i matrix' % (data.shape, rows, cols))
        self.rows = rows
        self.cols = cols
        self.data = _frozen(data)

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, np.zeros((rows, _nwords(cols)), dtype=np.uint64))

    @classmethod
    def identity(cls, n):
        return cls.from_bits(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_bits(cls, bits):
        bits = np.atleast_2d(np.asarray(bits))
        return cls(bits.shape[0], bits.shape[1], _pack(bits))

    @classmethod
    def from_columns(cls, codes, rows=None):
        """Matrix whose column j is the vector with integer code ``codes[j]``."""
        rows = len(codes) if rows is None else rows
        bits = np.zeros((rows, len(codes)), dtype=np.uint8)
        for j, c in enumerate(codes):
            if c < 0 or c >> rows:
                raise GF2ShapeError('column code %i does not fit in %i rows' % (c, rows))
            for i in range(rows):
                bits[i, j] = (c >> i) & 1
        return cls.from_bits(bits)

    @classmethod
    def from_permutation(cls, n, perm):
        """
        Permutation matrix sending mu_i to mu_perm(i).

        Parameters
        ----------
        perm : dict or callable
            1-based map; missing keys are fixed.
        """
        image = perm if callable(perm) else (lambda i: perm.get(i, i))
        bits = np.zeros((n, n), dtype=np.uint8)
        for i in range(1, n + 1):
            bits[image(i) - 1, i - 1] = 1
        if not (bits.sum(axis=0) == 1).all() or not (bits.sum(axis=1) == 1).all():
            raise GF2ShapeError('map is not a permutation of 1..%i' % n)
        return cls.from_bits(bits)

    def to_bits(self):
        return _unpack(self.data, self.cols)

    def column_codes(self):
        bits = self.to_bits()
        return tuple(sum(int(b) << i for i, b in enumerate(bits[:, j])) for j in range(self.cols))

    def column(self, j):
        """Column j (0-based) as a vector."""
        return GF2Vector.from_bits(self.to_bits()[:, j])

    def transpose(self):
        return GF2Matrix.from_bits(self.to_bits().T)

    @property
    def T(self):
        return self.transpose()

    def is_square(self):
        return self.rows == self.cols

    def is_identity(self):
        return self.is_square() and self == GF2Matrix.identity(self.rows)

    def power(self, k):
        if not self.is_square():
            raise GF2ShapeError('power of a non-square %ix%i matrix' % (self.rows, self.cols))
        base = mat_inverse(self) if k < 0 else self
        k = abs(k)
        result = GF2Matrix.identity(self.rows)
        while k:
            if k & 1:
                result = mat_mul(result, base)
            k >>= 1
            if k:
                base = mat_mul(base, base)
        return result

    def digest(self):
        """Short stable hash of shape and contents."""
        h = hashlib.blake2b(digest_size=8)
        h.update(np.array([self.rows, self.cols], dtype=np.int64).tobytes())
        h.update(self.data.tobytes())
        return h.hexdigest()

    def __matmul__(self, other):
        if isinstance(other, GF2Vector):
            return apply(self, other)
        return mat_mul(self, other)

    def __eq__(self, other):
        if not isinstance(other, GF2Matrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.rows, self.cols, self.data.tobytes()))

    def __repr__(self):
        rows = [''.join(map(str, r)) for r in self.to_bits()]
        return 'GF2Matrix(%ix%i: %s)' % (self.rows, self.cols, ' '.join(rows))


def _check_dims(a, b):
    if a != b:
        raise GF2ShapeError('dimension mismatch: %i vs %i' % (a, b))


def mat_mul(a, b):
    """
    Product a*b. Row i of the result is the XOR of the rows of b selected by
    row i of a.
    """
    _check_dims(a.cols, b.rows)
    sel = a.to_bits().astype(bool)
    rows = np.where(sel[:, :, None], b.data[None, :, :], np.uint64(0))
    return GF2Matrix(a.rows, b.cols, np.bitwise_xor.reduce(rows, axis=1))


def apply(m, x):
    """Image m*x of a vector."""
    _check_dims(m.cols, x.dim)
    parity = _unpack(m.data & x.words[None, :], m.cols).sum(axis=1) & 1
    return GF2Vector.from_bits(parity)


def _eliminate(bits, ncols):
    """
    In-place Gauss-Jordan on the first ncols columns of a uint8 array with
    first-set-bit pivoting. Returns the pivot columns.
    """
    pivots = []
    row = 0
    for col in range(ncols):
        if row == bits.shape[0]:
            break
        candidates = np.flatnonzero(bits[row:, col])
        if candidates.size == 0:
            continue
        p = row + int(candidates[0])
        if p != row:
            bits[[row, p]] = bits[[p, row]]
        hit = np.flatnonzero(bits[:, col])
        hit = hit[hit != row]
        bits[hit] ^= bits[row]
        pivots.append(col)
        row += 1
    return pivots


def mat_inverse(m):
    if not m.is_square():
        raise GF2ShapeError('inverse of a non-square %ix%i matrix' % (m.rows, m.cols))
    n = m.rows
    aug = np.concatenate([m.to_bits(), np.eye(n, dtype=np.uint8)], axis=1)
    if len(_eliminate(aug, n)) < n:
        raise GF2SingularError('matrix of rank < %i is not invertible' % n)
    return GF2Matrix.from_bits(aug[:, n:])


def rank(m):
    return len(_eliminate(m.to_bits().copy(), m.cols))


def transvection(v, gram=None):
    """
    Matrix of x -> x + <x, v> v for the bilinear form with Gram matrix
    ``gram`` (identity when omitted).

    Raises
    ------
    DegenerateClassError
        If v is the zero vector.
    """
    if v.is_zero():
        raise DegenerateClassError('no transvection along the zero vector')
    gram = GF2Matrix.identity(v.dim) if gram is None else gram
    _check_dims(gram.rows, v.dim)
    gv = apply(gram, v).bits()
    outer = np.outer(v.bits(), gv).astype(np.uint8)
    return GF2Matrix.from_bits(np.eye(v.dim, dtype=np.uint8) ^ outer)
