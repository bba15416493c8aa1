# -*- coding: utf-8 -*-
"""
Library for orders of finite matrix groups over GF(2).

A group generated by invertible n x n matrices acts on the 2^n - 1 nonzero
vectors of F_2^n, and the action is faithful. The order comes from a base
and strong generating set built by randomised Schreier-Sims on that action;
orbits are breadth-first searches over integer vector codes with numpy
frontiers and one flat Schreier array per base point.
"""
import hashlib, math, os, zipfile
from dataclasses import dataclass, field

import numpy as np

from .lib_gf2 import GF2Matrix, mat_inverse
from .lib_io import logger, progress
from .lib_surface import ContractError, quotient_action

CACHE_VERSION = 1
DEFAULT_SEED = 2718
AUTO_PROOF_DEGREE = 255        # deterministic check below this many points
PROOF_DEGREE_LIMIT = 2 ** 20   # never prove above this
GUARD_DEGREE = 2 ** 27         # refuse unless forced
MAX_DIM = 62                   # point codes are int64
MODES = ('full', 'quotient')
CERTIFICATES = ('proved', 'reached-target', 'below-target', 'probable')

_ABSENT = -1
_ROOT = -2


class ResourceGuardError(MemoryError):
    """The action is too large to enumerate without --force."""


class OracleOverflowError(RuntimeError):
    """Brute-force closure grew past its cap."""


def sp_order(n):
    """|Sp(2n, 2)| = 2^(n^2) prod_{i=1..n} (4^i - 1)."""
    return 2 ** (n * n) * math.prod(4 ** i - 1 for i in range(1, n + 1))


def expected_order(cfg, mode='full'):
    """
    Order of the image of Mod(N_g) in Aut(H_1(N_g; Z_2)), or in Sp(2h, 2)
    for the quotient action.

    Odd g: the isometry group is Sp(2h, 2). Even g: an extension of
    Sp(2h, 2) by an elementary abelian group of order 2^(2h+1).
    """
    sp = sp_order(cfg.h)
    if mode == 'quotient' or not cfg.even:
        return sp
    return 2 ** (2 * cfg.h + 1) * sp


class MatrixAction():
    """
    A matrix acting on vector codes, stored by columns: column j is the image
    of the basis vector with code 1 << j.
    """
    __slots__ = ('n', 'cols', '_tables')

    def __init__(self, cols):
        self.cols = tuple(int(c) for c in cols)
        self.n = len(self.cols)
        self._tables = None

    @classmethod
    def from_matrix(cls, m):
        m = getattr(m, 'matrix', m)
        return cls(m.column_codes())

    @classmethod
    def identity(cls, n):
        return cls(1 << j for j in range(n))

    def to_matrix(self):
        return GF2Matrix.from_columns(self.cols, self.n)

    def image(self, x):
        y, j = 0, 0
        while x:
            if x & 1:
                y ^= self.cols[j]
            x >>= 1
            j += 1
        return y

    def tables(self):
        """One 256-entry lookup table per byte of the code."""
        if self._tables is None:
            nchunks = (self.n + 7) // 8
            t = np.zeros((nchunks, 256), dtype=np.int64)
            for k in range(nchunks):
                for j in range(8):
                    c = self.cols[8 * k + j] if 8 * k + j < self.n else 0
                    t[k, 1 << j:1 << (j + 1)] = t[k, :1 << j] ^ c
            self._tables = t
        return self._tables

    def images(self, xs):
        """Images of an int64 array of codes."""
        t = self.tables()
        y = np.zeros_like(xs)
        for k in range(t.shape[0]):
            y ^= t[k][(xs >> (8 * k)) & 255]
        return y

    def __mul__(self, other):
        """Composition: self after other."""
        return MatrixAction(self.image(c) for c in other.cols)

    def inverse(self):
        return MatrixAction.from_matrix(mat_inverse(self.to_matrix()))

    def is_identity(self):
        return all(c == 1 << j for j, c in enumerate(self.cols))

    def __eq__(self, other):
        return isinstance(other, MatrixAction) and self.cols == other.cols

    def __hash__(self):
        return hash(self.cols)


class _Level():
    """
    Orbit of one base point under the strong generators fixing the earlier
    base points. ``label[p]`` is the index of the generator that first
    reached p, ``-1`` outside the orbit and ``-2`` at the base point.
    """
    def __init__(self, base, n):
        self.base = base
        self.n = n
        self.gens = []
        self.invs = []
        self.label = np.full(1 << n, _ABSENT, dtype=np.int8)
        self.label[base] = _ROOT
        self.points = []
        self.size = 0
        self._grow(np.array([base], dtype=np.int64))

    def _grow(self, frontier):
        while frontier.size:
            self.points.append(frontier)
            self.size += frontier.size
            parts = []
            for k, a in enumerate(self.gens):
                img = a.images(frontier)
                fresh = np.unique(img[self.label[img] == _ABSENT])
                if fresh.size:
                    self.label[fresh] = k
                    parts.append(fresh)
            frontier = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)

    def add_generator(self, a, ainv=None):
        k = len(self.gens)
        if k >= np.iinfo(np.int8).max:
            raise ResourceGuardError('too many strong generators on one level')
        self.gens.append(a)
        self.invs.append(ainv)
        img = a.images(self.orbit())
        fresh = np.unique(img[self.label[img] == _ABSENT])
        self.label[fresh] = k
        self._grow(fresh)

    def orbit(self):
        return np.concatenate(self.points)

    def strip(self, h):
        """u_p^-1 h where p = h(base), or None if p is outside the orbit."""
        p = h.image(self.base)
        if self.label[p] == _ABSENT:
            return None
        while self.label[p] != _ROOT:
            inv = self.invs[self.label[p]]
            h = inv * h
            p = inv.image(p)
        return h

    def transversal(self, p):
        """Element sending the base point to p."""
        u = MatrixAction.identity(self.n)
        while self.label[p] != _ROOT:
            k = self.label[p]
            u = u * self.gens[k]
            p = self.invs[k].image(p)
        return u


class BSGS():
    """
    Base and strong generating set of a matrix group acting on the nonzero
    vectors of F_2^n.

    Parameters
    ----------
    n : int
        Dimension.
    """
    def __init__(self, n):
        if n > MAX_DIM:
            raise ResourceGuardError('dimension %i above %i' % (n, MAX_DIM))
        self.n = n
        self.levels = []
        self.strong = []  # (generator, depth) in insertion order

    @property
    def degree(self):
        return (1 << self.n) - 1

    def order(self):
        return math.prod(level.size for level in self.levels)

    def base(self):
        return [level.base for level in self.levels]

    def orbit_sizes(self):
        return [level.size for level in self.levels]

    def strong_generators(self):
        return [h for h, _ in self.strong]

    def sift(self, h, start=0):
        """
        Strip h through the levels from ``start``.

        Returns
        -------
        residue : MatrixAction
        depth : int
            Level where stripping stopped; ``len(levels)`` when h went through.
        """
        for d in range(start, len(self.levels)):
            r = self.levels[d].strip(h)
            if r is None:
                return h, d
            h = r
        return h, len(self.levels)

    def _extend(self, h, depth):
        if depth == len(self.levels):
            moved = next(1 << j for j in range(self.n) if h.cols[j] != 1 << j)
            self.levels.append(_Level(moved, self.n))
        hinv = h.inverse()
        self.strong.append((h, depth))
        for level in self.levels[:depth + 1]:
            level.add_generator(h, hinv)
        logger.debug('Strong generator at depth %i, order now %i.' % (depth, self.order()))

    def add(self, h, start=0):
        """Sift h and keep the residue as a strong generator if it is new. Returns True if so."""
        r, d = self.sift(h, start)
        if d == len(self.levels) and r.is_identity():
            return False
        self._extend(r, d)
        return True

    def verify(self):
        """
        Deterministic Schreier-Sims check: every Schreier generator of every
        level sifts to the identity. Missing strong generators are added on
        the way, so on return the order is exact.
        """
        complete = False
        while not complete:
            complete = True
            for j, level in enumerate(self.levels):
                pts = level.orbit()
                for c, p in enumerate(pts):
                    progress(c, len(pts), 'verify level %i' % j)
                    u = level.transversal(int(p))
                    for s in list(level.gens):
                        schreier = level.strip(s * u)
                        if self.add(schreier, j + 1):
                            complete = False
                            break
                    if not complete:
                        break
                if not complete:
                    break


class ProductReplacement():
    """
    Random group elements by product replacement with accumulators.

    Parameters
    ----------
    gens : list of MatrixAction
    rng : numpy.random.Generator
    """
    def __init__(self, gens, rng, extra_slots=10, accus=5, scramble=50):
        ident = MatrixAction.identity(gens[0].n)
        self.rng = rng
        self.reservoir = [ident] * extra_slots + list(gens)
        self.accus = [ident] * accus
        self.accu = 0
        for _ in range(max(scramble, 10 * len(gens))):
            self.stir()

    def stir(self):
        i, j = (int(x) for x in self.rng.integers(1, len(self.reservoir), size=2))
        self.reservoir[0] = c = self.reservoir[0] * self.reservoir[i]
        self.reservoir[j] = q = self.reservoir[j] * c
        self.accu = (self.accu + 1) % len(self.accus)
        self.accus[self.accu] = r = self.accus[self.accu] * q
        return r


def schreier_sims(actions, n, seed=DEFAULT_SEED, target=None, stall=30):
    """
    Randomised Schreier-Sims.

    Stops when the order reaches ``target`` or after ``stall`` consecutive
    random elements sift through. The product of orbit sizes never exceeds
    the true order.
    """
    bsgs = BSGS(n)
    for a in actions:
        bsgs.add(a)
    if not actions:
        return bsgs
    rng = np.random.default_rng(seed)
    rand = ProductReplacement(actions, rng)
    misses = 0
    while misses < stall:
        if target is not None and bsgs.order() >= target:
            break
        misses = 0 if bsgs.add(rand.stir()) else misses + 1
    return bsgs


def orbit(gens, start):
    """
    Orbit of a nonzero vector under the group generated by matrices.

    Parameters
    ----------
    gens : list of GF2Matrix or IsometryMatrix
    start : GF2Vector

    Returns
    -------
    points : ndarray of int64
        Sorted codes of the orbit.
    label : ndarray of int8
        Schreier vector over all codes (-1 outside, -2 at ``start``,
        otherwise the index of the generator reaching the point).
    """
    if start.dim > MAX_DIM:
        raise ResourceGuardError('dimension %i above %i' % (start.dim, MAX_DIM))
    level = _Level(start.to_int(), start.dim)
    for m in gens:
        level.add_generator(MatrixAction.from_matrix(m))
    return np.sort(level.orbit()), level.label


# Results and cache
###################

@dataclass
class OrderResult():
    order: int
    certificate: str
    expected: int = None
    degree: int = 0
    mode: str = 'full'
    seed: int = DEFAULT_SEED
    base: list = field(default_factory=list)
    orbit_sizes: list = field(default_factory=list)
    cached: bool = False

    def __iter__(self):
        return iter((self.order, self.certificate))

    def to_dict(self):
        return {'order': str(self.order), 'certificate': self.certificate,
                'expected': None if self.expected is None else str(self.expected),
                'degree': self.degree, 'mode': self.mode, 'seed': self.seed,
                'base': [int(b) for b in self.base], 'orbit_sizes': [int(s) for s in self.orbit_sizes],
                'cached': self.cached}


def generators_digest(actions, mode):
    h = hashlib.blake2b(digest_size=16)
    h.update(mode.encode())
    for a in actions:
        h.update(np.array(a.cols, dtype=np.int64).tobytes())
    return h.hexdigest()


def cache_path(cache_dir, genus, mode, digest, seed):
    return os.path.join(cache_dir, 'bsgs_g%i_%s_%s_s%i.npz' % (genus, mode, digest[:12], seed))


def save_cache(path, bsgs, genus, mode, digest, seed):
    """Write the BSGS as .npz: header, base, strong generators as packed rows, orbit sizes."""
    os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
    if bsgs.strong:
        rows = np.stack([h.to_matrix().data for h, _ in bsgs.strong])
    else:
        rows = np.zeros((0, bsgs.n, 1), dtype=np.uint64)
    # readers only ever see a complete file
    tmp = '%s.%i.tmp' % (path, os.getpid())
    with open(tmp, 'wb') as f:
        np.savez_compressed(f, version=CACHE_VERSION, genus=genus, mode=mode, digest=digest, seed=seed,
                            n=bsgs.n, base=np.array(bsgs.base(), dtype=np.int64),
                            depth=np.array([d for _, d in bsgs.strong], dtype=np.int64),
                            rows=rows, sizes=np.array(bsgs.orbit_sizes(), dtype=np.int64))
    os.replace(tmp, path)
    logger.info('BSGS cached in %s.' % path)


def load_cache(path, genus, mode, digest, seed):
    """
    Rebuild a cached BSGS, or None if the file is missing or its header does
    not match. Orbits are recomputed and must reproduce the stored sizes.
    """
    if not os.path.exists(path):
        return None
    try:
        with np.load(path, allow_pickle=False) as f:
            header = (int(f['version']), int(f['genus']), str(f['mode']), str(f['digest']), int(f['seed']))
            if header != (CACHE_VERSION, genus, mode, digest, seed):
                logger.warning('Ignoring cache %s: header %s does not match.' % (path, header))
                return None
            n, base, depth, rows, sizes = int(f['n']), f['base'], f['depth'], f['rows'], f['sizes']
    except (OSError, KeyError, ValueError, EOFError, zipfile.BadZipFile) as e:
        logger.warning('Ignoring unreadable cache %s: %s' % (path, e))
        return None
    bsgs = BSGS(n)
    bsgs.levels = [_Level(int(b), n) for b in base]
    for r, d in zip(rows, depth):
        h = MatrixAction.from_matrix(GF2Matrix(n, n, r))
        bsgs.strong.append((h, int(d)))
        hinv = h.inverse()
        for level in bsgs.levels[:int(d) + 1]:
            level.add_generator(h, hinv)
    if bsgs.orbit_sizes() != [int(s) for s in sizes]:
        logger.warning('Ignoring cache %s: orbits do not reproduce.' % path)
        return None
    return bsgs


# Order computation
###################

def _actions(gens, cfg, mode):
    if mode not in MODES:
        raise ValueError('mode must be one of %s' % ', '.join(MODES))
    mats = [getattr(m, 'matrix', m) for m in gens]
    if mode == 'quotient':
        mats = [quotient_action(cfg, m) for m in mats]
    return [a for a in (MatrixAction.from_matrix(m) for m in mats)]


def _certificate(order, expected, proved):
    if expected is not None and order > expected:
        raise ContractError('order %i exceeds the isometry group order %i' % (order, expected))
    if expected is not None and order < expected:
        return 'below-target'
    if proved:
        return 'proved'
    if expected is not None:
        return 'reached-target'
    return 'probable'


def group_order(gens, cfg, mode='full', seed=DEFAULT_SEED, target='auto', force=False,
                verify_degree=AUTO_PROOF_DEGREE, cache_dir=None):
    """
    Order of the group generated by isometry images.

    Parameters
    ----------
    gens : list of GF2Matrix or IsometryMatrix
        g x g isometries.
    cfg : GenusConfig
    mode : str
        ``full`` acts on F_2^g, ``quotient`` on the 2h-dimensional
        symplectic quotient.
    seed : int
        Seed of the random element generator.
    target : int, 'auto' or None
        Order to reach; ``auto`` takes `expected_order`.
    force : bool
        Run above the resource guard.
    verify_degree : int
        Run the deterministic check when the number of points is at most
        this (capped at 2^20).
    cache_dir : str, optional
        Directory for the .npz BSGS cache.

    Returns
    -------
    OrderResult
        Unpacks as ``order, certificate``.
    """
    actions = _actions(gens, cfg, mode)
    n = cfg.g if mode == 'full' else 2 * cfg.h
    degree = (1 << n) - 1
    if degree > GUARD_DEGREE and not force:
        raise ResourceGuardError('%i points exceed the guard of %i, use force' % (degree, GUARD_DEGREE))
    if verify_degree > PROOF_DEGREE_LIMIT:
        raise ValueError('deterministic verification is limited to %i points' % PROOF_DEGREE_LIMIT)
    expected = expected_order(cfg, mode) if target == 'auto' else target

    bsgs, cached, path = None, False, None
    if cache_dir is not None:
        digest = generators_digest(actions, mode)
        path = cache_path(cache_dir, cfg.g, mode, digest, seed)
        bsgs = load_cache(path, cfg.g, mode, digest, seed)
        cached = bsgs is not None
    if bsgs is None:
        logger.info('Schreier-Sims on %i points (genus %i, %s action).' % (degree, cfg.g, mode))
        bsgs = schreier_sims(actions, n, seed, expected)

    proved = degree <= verify_degree
    if proved:
        bsgs.verify()
    if path is not None and not cached:
        save_cache(path, bsgs, cfg.g, mode, digest, seed)

    order = bsgs.order()
    result = OrderResult(order, _certificate(order, expected, proved), expected, degree, mode, seed,
                         bsgs.base(), bsgs.orbit_sizes(), cached)
    logger.info('Order %i (%s).' % (order, result.certificate))
    return result


# Brute force
#############

class MatrixClosure():
    """Elements of a closure, kept as sorted packed keys or column tuples."""

    def __init__(self, n, keys):
        self.n = n
        self._keys = keys

    def __len__(self):
        return len(self._keys)

    def _key(self, m):
        cols = getattr(m, 'matrix', m).column_codes()
        if isinstance(self._keys, np.ndarray):
            return np.uint64(sum(c << (self.n * j) for j, c in enumerate(cols)))
        return cols

    def __contains__(self, m):
        key = self._key(m)
        if isinstance(self._keys, np.ndarray):
            i = np.searchsorted(self._keys, key)
            return i < len(self._keys) and self._keys[i] == key
        return key in self._keys

    def matrices(self):
        if isinstance(self._keys, np.ndarray):
            mask = (1 << self.n) - 1
            for key in self._keys:
                key = int(key)
                yield GF2Matrix.from_columns([(key >> (self.n * j)) & mask for j in range(self.n)], self.n)
        else:
            for cols in self._keys:
                yield GF2Matrix.from_columns(cols, self.n)


DEFAULT_CLOSURE_CAP = 5 * 10 ** 6


def brute_force_closure(gens, cap=DEFAULT_CLOSURE_CAP, n=None):
    """
    All products of the generators, by breadth-first search from the
    identity. Meant as an independent check for small groups.

    Raises
    ------
    OracleOverflowError
        If more than ``cap`` elements are found.
    """
    actions = [MatrixAction.from_matrix(m) for m in gens]
    if n is None:
        if not actions:
            raise ValueError('dimension needed for an empty generating set')
        n = actions[0].n
    if n * n <= 64:
        return MatrixClosure(n, _closure_packed(actions, n, cap))
    return MatrixClosure(n, _closure_tuples(actions, n, cap))


def _closure_packed(actions, n, cap):
    shifts = np.arange(n, dtype=np.uint64) * np.uint64(n)
    mask = np.uint64((1 << n) - 1)

    def pack(cols):
        return np.bitwise_or.reduce(cols.astype(np.uint64) << shifts, axis=1)

    def unpack(keys):
        return ((keys[:, None] >> shifts) & mask).astype(np.int64)

    frontier = np.array([[1 << j for j in range(n)]], dtype=np.int64)
    visited = pack(frontier)
    while frontier.size:
        cand = [pack(a.images(frontier.ravel()).reshape(frontier.shape)) for a in actions]
        if not cand:
            break
        cand = np.unique(np.concatenate(cand))
        new = cand[~np.isin(cand, visited, assume_unique=True)]
        if visited.size + new.size > cap:
            raise OracleOverflowError('closure exceeds %i elements' % cap)
        visited = np.union1d(visited, new)
        frontier = unpack(new)
    return visited


def _closure_tuples(actions, n, cap):
    ident = MatrixAction.identity(n)
    seen = {ident.cols}
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for a in actions:
                p = a * m
                if p.cols not in seen:
                    seen.add(p.cols)
                    nxt.append(p)
        if len(seen) > cap:
            raise OracleOverflowError('closure exceeds %i elements' % cap)
        frontier = nxt
    return frozenset(seen)


# Generator sets
################

# name -> (minimal genus, words); thmB depends on the parity
GENERATOR_SETS = {
    'thm21': (7, ['T', 'A[1] A[2]^-1', 'B[1] B[2]^-1', 'u[1]']),
    'thmA': (19, ['T', 'u[g-1] G[10] C[2]^-1']),
    'thmB-even': (26, ['rho1', 'rho2', 'rho2 A[2] B[r] B[3] u[r+3]']),
    'thmB-odd': (27, ['rho1', 'rho2', 'rho2 A[2] C[r-1] B[3] v[r+2]']),
    'szep': (5, ['A[1]', 'A[2]', 'B[i] for i in 1 .. r', 'C[i] for i in 1 .. nc', 'y[1]']),
    'custom': (5, []),
}


def read_words_file(filename):
    """One word per line, '#' starts a comment."""
    with open(filename) as f:
        lines = [line.split('#', 1)[0].strip() for line in f]
    return [line for line in lines if line]


def generator_set(name, cfg, words=None):
    """
    Words and images of a named generating set.

    Parameters
    ----------
    name : str
        ``thm21``, ``thmA``, ``thmB`` (parity picked from the genus),
        ``szep`` or ``custom``.
    cfg : GenusConfig
    words : list of str, optional
        Word texts for ``custom``.

    Returns
    -------
    list of (str, IsometryMatrix)
    """
    from .lib_ledger import UnsupportedGenusError
    from .lib_words import evaluate, expand_words

    if name == 'thmB':
        name = 'thmB-even' if cfg.even else 'thmB-odd'
    if name not in GENERATOR_SETS:
        raise ValueError('unknown generating set %r' % name)
    gmin, texts = GENERATOR_SETS[name]
    if cfg.g < gmin:
        raise UnsupportedGenusError('generating set %s needs g >= %i' % (name, gmin))
    if name.startswith('thmB-') and (name == 'thmB-even') != cfg.even:
        raise UnsupportedGenusError('generating set %s does not apply to g = %i' % (name, cfg.g))
    if name == 'custom':
        texts = words or []
    return [(str(w), evaluate(w, cfg)) for w in expand_words(texts, cfg.variables())]
