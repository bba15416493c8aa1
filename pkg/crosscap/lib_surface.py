# -*- coding: utf-8 -*-
"""
Library for the mod-2 homology model of the nonorientable surface N_g.

H_1(N_g; Z_2) is F_2^g with basis mu_1..mu_g (one class per crosscap) and
the dot product as intersection form. Curves are represented by their
classes, mapping classes by g x g isometries.
"""
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .lib_gf2 import GF2Matrix, GF2Vector, apply, mat_mul, transvection
from .lib_io import logger

MIN_GENUS = 5

# family name -> printed name of the twist about it
TWIST_LETTERS = {'a': 'A', 'b': 'B', 'c': 'C', 'gamma': 'G', 'd': 'D', 'alpha': 'Alpha', 'beta': 'Beta'}
CURVE_FAMILIES = tuple(TWIST_LETTERS)
GENERATOR_KINDS = ('T', 'rho1', 'rho2', 'u', 'v', 'y', 'twist')


class GenusError(ValueError):
    """Genus outside the supported range."""


class UndefinedCurveError(ValueError):
    """Curve family or index does not exist at this genus."""


class UndefinedGeneratorError(ValueError):
    """Generator index does not exist at this genus."""


class ContractError(ValueError):
    """A non-isometry was handed to an operation that needs one."""


@dataclass(frozen=True)
class GenusConfig():
    """
    Genus and the derived constants.

    g = 2r+2 for even genus, g = 2r+1 for odd genus, h = floor((g-1)/2).
    """
    g: int

    def __post_init__(self):
        if not isinstance(self.g, (int, np.integer)) or self.g < MIN_GENUS:
            raise GenusError('genus must be an integer >= %i, got %r' % (MIN_GENUS, self.g))

    @property
    def even(self):
        return self.g % 2 == 0

    @property
    def r(self):
        return (self.g - 2) // 2 if self.even else (self.g - 1) // 2

    @property
    def h(self):
        return (self.g - 1) // 2

    @property
    def nc(self):
        """Number of c-curves."""
        return self.r if self.even else self.r - 1

    def wrap(self, i):
        """Crosscap index i taken mod g into 1..g."""
        return (i - 1) % self.g + 1

    def variables(self):
        return {'g': self.g, 'r': self.r, 'h': self.h, 'nc': self.nc}


_CURVE_RE = re.compile(r'^\s*(a|b|c|d|gamma|alpha|beta)_\{?(-?\d+)\}?\s*$')


@dataclass(frozen=True)
class CurveName():
    family: str
    index: int

    def __post_init__(self):
        if self.family not in CURVE_FAMILIES:
            raise UndefinedCurveError('unknown curve family %r' % self.family)

    @classmethod
    def parse(cls, text):
        """Parse ``a_1``, ``gamma_10`` or ``b_{3}``."""
        m = _CURVE_RE.match(text)
        if m is None:
            raise UndefinedCurveError('cannot read curve name %r' % text)
        return cls(m.group(1), int(m.group(2)))

    @property
    def twist(self):
        return '%s_%i' % (TWIST_LETTERS[self.family], self.index)

    def __str__(self):
        return '%s_%i' % (self.family, self.index)


@dataclass(frozen=True)
class GeneratorName():
    """
    One of T, rho1, rho2, u_i, v_i, y_i or the Dehn twist about a curve.
    """
    kind: str
    index: int = 0
    curve: CurveName = None

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise UndefinedGeneratorError('unknown generator kind %r' % self.kind)
        if (self.kind == 'twist') != (self.curve is not None):
            raise UndefinedGeneratorError('twists and only twists carry a curve')

    def __str__(self):
        if self.kind == 'twist':
            return self.curve.twist
        if self.kind in ('u', 'v', 'y'):
            return '%s_%i' % (self.kind, self.index)
        return self.kind


@dataclass(frozen=True)
class IsometryMatrix():
    """An isometry of the intersection form together with where it came from."""
    matrix: GF2Matrix
    provenance: str = ''

    def __matmul__(self, other):
        other = getattr(other, 'matrix', other)
        return IsometryMatrix(mat_mul(self.matrix, other), self.provenance)


def _ones(cfg, support):
    return GF2Vector.from_support(cfg.g, [cfg.wrap(i) for i in support])


@lru_cache(maxsize=None)
def curve_class(name, cfg):
    """
    Homology class of a named curve.

    Parameters
    ----------
    name : CurveName
    cfg : GenusConfig

    Returns
    -------
    GF2Vector
        The class; zero for the separating curves alpha_i and beta_i.
    """
    fam, i = name.family, name.index
    g = cfg.g
    if fam == 'a':
        if i in (1, 2) or (i == 3 and g >= 7):
            return _ones(cfg, range(1, 2 * i + 1))
    elif fam == 'b':
        if 1 <= i <= cfg.r:
            return _ones(cfg, (2 * i, 2 * i + 1))
    elif fam == 'c':
        if 1 <= i <= cfg.nc:
            return _ones(cfg, (2 * i + 1, 2 * i + 2))
    elif fam == 'gamma':
        return _ones(cfg, range(i, i + 4))
    elif fam in ('alpha', 'beta'):
        return GF2Vector.zeros(g)
    elif fam == 'd' and i in (1, 2):
        from .lib_words import derived_class
        return derived_class(i, cfg)
    raise UndefinedCurveError('curve %s is not defined at genus %i' % (name, g))


def _perm_matrix(cfg, image):
    return GF2Matrix.from_permutation(cfg.g, lambda i: cfg.wrap(image(i)))


def _swap(cfg, i, j):
    return GF2Matrix.from_permutation(cfg.g, {i: j, j: i})


@lru_cache(maxsize=None)
def generator_image(name, cfg):
    """
    Action of a generator on H_1(N_g; Z_2).

    T cycles the crosscaps, u_i and v_i swap crosscaps i,i+1 and i,i+2, rho1
    and rho2 are the reflections i -> 4-i and i -> 5-i (mod g), a twist is
    the transvection along its curve class. The crosscap slide y_i acts
    trivially.
    """
    kind, i, g = name.kind, name.index, cfg.g
    if kind == 'T':
        return _perm_matrix(cfg, lambda k: k + 1)
    if kind == 'rho1':
        return _perm_matrix(cfg, lambda k: 4 - k)
    if kind == 'rho2':
        return _perm_matrix(cfg, lambda k: 5 - k)
    if kind == 'u' and 1 <= i <= g - 1:
        return _swap(cfg, i, i + 1)
    if kind == 'v' and 1 <= i <= g - 2:
        return _swap(cfg, i, i + 2)
    if kind == 'y' and 1 <= i <= g - 1:
        # the slide is the twist along mu_i+mu_{i+1} followed by the swap
        return mat_mul(transvection(_ones(cfg, (i, i + 1))), _swap(cfg, i, i + 1))
    if kind == 'twist':
        return transvection(curve_class(name.curve, cfg))
    raise UndefinedGeneratorError('generator %s is not defined at genus %i' % (name, g))


def pairing(x, y, gram=None):
    """Intersection number <x, y> mod 2 (dot product unless a Gram matrix is given)."""
    if gram is None:
        return x.dot(y)
    return x.dot(apply(gram, y))


def canonical_class_w(cfg):
    """w = mu_1 + ... + mu_g, fixed by every isometry."""
    return GF2Vector.from_bits(np.ones(cfg.g, dtype=np.uint8))


def is_isometry(m):
    return m.is_square() and mat_mul(m.transpose(), m).is_identity()


def quotient_basis(cfg):
    """
    Basis e_i = mu_i + mu_{i+1} of the symplectic quotient: w-perp itself
    for odd g (2h vectors), w-perp / <w> for even g (first 2h vectors).
    """
    return [_ones(cfg, (i, i + 1)) for i in range(1, 2 * cfg.h + 1)]


def symplectic_form(cfg):
    """Alternating Gram matrix of `quotient_basis`: e_i.e_j = 1 iff |i-j| = 1."""
    n = 2 * cfg.h
    bits = np.zeros((n, n), dtype=np.uint8)
    idx = np.arange(n - 1)
    bits[idx, idx + 1] = 1
    bits[idx + 1, idx] = 1
    return GF2Matrix.from_bits(bits)


def _quotient_coords(cfg, x):
    """Coordinates of an even-weight vector in the quotient basis."""
    c = np.bitwise_xor.accumulate(x.bits())[:cfg.g - 1]
    if cfg.even:
        # reduce mod w, whose coordinates are (1,0,1,...,0,1)
        if c[-1]:
            c = c ^ (np.arange(1, cfg.g) % 2).astype(np.uint8)
        c = c[:cfg.g - 2]
    return c


def quotient_action(cfg, m):
    """
    Action of an isometry on the nondegenerate symplectic space V.

    Parameters
    ----------
    cfg : GenusConfig
    m : GF2Matrix or IsometryMatrix

    Returns
    -------
    GF2Matrix
        2h x 2h matrix in the basis of `quotient_basis`.
    """
    m = getattr(m, 'matrix', m)
    if m.rows != cfg.g or not is_isometry(m):
        raise ContractError('quotient action needs a %ix%i isometry' % (cfg.g, cfg.g))
    cols = [_quotient_coords(cfg, apply(m, e)) for e in quotient_basis(cfg)]
    return GF2Matrix.from_bits(np.stack(cols, axis=1))


class Surface():
    """
    The model at one genus: curve table, generator images and the model dump.

    Parameters
    ----------
    g : int
        Genus.
    """
    def __init__(self, g):
        self.cfg = GenusConfig(g)
        logger.debug('Surface model for genus %i (r=%i, h=%i).' % (g, self.cfg.r, self.cfg.h))

    @property
    def g(self):
        return self.cfg.g

    def curve_class(self, name):
        if isinstance(name, str):
            name = CurveName.parse(name)
        return curve_class(name, self.cfg)

    def generator_image(self, name):
        """Image of a generator with its provenance, e.g. ``u_1: permutation (1 2)``."""
        return IsometryMatrix(generator_image(name, self.cfg), '%s: %s' % (name, describe_image(name, self.cfg)))

    def curves(self):
        """Every named curve of the table at this genus, in display order."""
        cfg = self.cfg
        names = [CurveName('a', 1), CurveName('a', 2)]
        if cfg.g >= 7:
            names += [CurveName('a', 3)]
        names += [CurveName('b', i) for i in range(1, cfg.r + 1)]
        names += [CurveName('c', i) for i in range(1, cfg.nc + 1)]
        names += [CurveName('gamma', i) for i in range(1, cfg.g + 1)]
        if cfg.g >= 7:
            names += [CurveName('d', 1), CurveName('d', 2)]
        return names

    def generators(self):
        cfg = self.cfg
        names = [GeneratorName('T'), GeneratorName('rho1'), GeneratorName('rho2')]
        names += [GeneratorName('u', i) for i in range(1, cfg.g)]
        names += [GeneratorName('v', i) for i in range(1, cfg.g - 1)]
        names += [GeneratorName('y', i) for i in range(1, cfg.g)]
        names += [GeneratorName('twist', curve=c) for c in self.curves()]
        return names

    def dump_model(self):
        """Text lines describing the curve table and generator images."""
        lines = ['# genus %i (r=%i, h=%i)' % (self.g, self.cfg.r, self.cfg.h)]
        for c in self.curves():
            lines.append('%s = {%s}' % (c, ','.join(map(str, self.curve_class(c).support()))))
        for gen in self.generators():
            lines.append('%s: %s' % (gen, describe_image(gen, self.cfg)))
        return lines


def _cycles(cfg, m):
    """Nontrivial cycles of a permutation matrix, 1-based."""
    image = {j + 1: int(np.flatnonzero(col)[0]) + 1 for j, col in enumerate(m.to_bits().T)}
    seen, cycles = set(), []
    for start in range(1, cfg.g + 1):
        if start in seen or image[start] == start:
            continue
        cyc, k = [], start
        while k not in seen:
            seen.add(k)
            cyc.append(k)
            k = image[k]
        cycles.append('(%s)' % ' '.join(map(str, cyc)))
    return ''.join(cycles)


def describe_image(name, cfg):
    m = generator_image(name, cfg)
    if m.is_identity():
        return 'identity'
    if name.kind == 'twist':
        return 'transvection {%s}' % ','.join(map(str, curve_class(name.curve, cfg).support()))
    return 'permutation %s' % _cycles(cfg, m)
