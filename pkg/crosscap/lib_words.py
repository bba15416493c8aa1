# -*- coding: utf-8 -*-
"""
Library for words in the generators: parsing, evaluation to isometries and
the classes of the derived curves d_1, d_2.

Word syntax (letters separated by whitespace)::

    T  rho1  rho2                     rotation and reflections
    u[e]  v[e]  y[e]                  crosscap transpositions and slides
    A[e] B[e] C[e] G[e] D[e]          twists about a, b, c, gamma, d curves
    F1                                a named word bound by a proof script
    ( ... )                           group
    x^-1  x^4  x^{2*i-3}              exponents

``e`` is integer arithmetic over g, r, h, nc and any family variable.
"""
import ast
import operator
import re
from dataclasses import dataclass
from functools import lru_cache

from .lib_gf2 import GF2Matrix, apply, mat_mul
from .lib_io import logger
from .lib_surface import (CurveName, GenusError, GeneratorName, IsometryMatrix,
                          UndefinedCurveError, UndefinedGeneratorError,
                          curve_class, generator_image)


class WordSyntaxError(ValueError):
    """Word or expression text cannot be parsed."""


class UndefinedWordError(ValueError):
    """A letter of the word does not exist at this genus or is unbound."""


# Expressions
#############

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.FloorDiv: operator.floordiv, ast.Mod: operator.mod}
_CMPOPS = {ast.Eq: operator.eq, ast.NotEq: operator.ne, ast.Lt: operator.lt,
           ast.LtE: operator.le, ast.Gt: operator.gt, ast.GtE: operator.ge,
           ast.In: lambda a, b: a in b, ast.NotIn: lambda a, b: a not in b}


def _eval_node(node, env):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body, env)
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return node.value
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise UndefinedWordError('unknown variable %r' % node.id)
        return env[node.id]
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left, env), _eval_node(node.right, env))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Tuple):
        return tuple(_eval_node(e, env) for e in node.elts)
    if isinstance(node, ast.Compare) and all(type(o) in _CMPOPS for o in node.ops):
        left = _eval_node(node.left, env)
        for op, comp in zip(node.ops, node.comparators):
            right = _eval_node(comp, env)
            if not _CMPOPS[type(op)](left, right):
                return False
            left = right
        return True
    if isinstance(node, ast.BoolOp):
        values = [_eval_node(v, env) for v in node.values]
        return all(values) if isinstance(node.op, ast.And) else any(values)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.Not):
        return not _eval_node(node.operand, env)
    raise WordSyntaxError('unsupported expression element %s' % type(node).__name__)


def eval_expr(text, env):
    """
    Evaluate integer arithmetic or a condition such as ``r in (16, 17, 18)``.
    Only literals, the names in ``env`` and arithmetic/comparison operators
    are allowed.
    """
    try:
        tree = ast.parse(text.strip(), mode='eval')
    except SyntaxError as e:
        raise WordSyntaxError('cannot parse expression %r' % text) from e
    return _eval_node(tree, env)


# Words
#######

@dataclass(frozen=True)
class Factor():
    base: object  # GeneratorName or Word
    exponent: int = 1

    def __str__(self):
        base = str(self.base)
        if isinstance(self.base, Word) and self.base.name is None:
            base = '(%s)' % base
        return base if self.exponent == 1 else '%s^%i' % (base, self.exponent)


@dataclass(frozen=True)
class Word():
    """
    A finite product of generators, read left to right as matrices are
    multiplied. A word with a ``name`` is printed by its name.
    """
    factors: tuple = ()
    name: str = None

    def __mul__(self, other):
        return Word(self.factors + other.factors)

    def inverse(self):
        return Word(tuple(Factor(f.base, -f.exponent) for f in reversed(self.factors)))

    def __str__(self):
        if self.name is not None:
            return self.name
        return ' '.join(str(f) for f in self.factors) or 'I'


_TOKEN_RE = re.compile(r'''
    (?P<lpar>\() | (?P<rpar>\)) |
    \^(?:\{(?P<bexp>[^}]*)\}|(?P<exp>[-+]?\d+)) |
    (?P<atom>[A-Za-z][A-Za-z0-9_]*)(?:\[(?P<index>[^\]]*)\])? |
    (?P<space>\s+)
''', re.VERBOSE)

_TWISTS = {'A': 'a', 'B': 'b', 'C': 'c', 'G': 'gamma', 'D': 'd'}
_CURVES = {'a', 'b', 'c', 'd', 'gamma', 'alpha', 'beta'}


def _tokens(text):
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise WordSyntaxError('unexpected %r at position %i of %r' % (text[pos], pos, text))
        pos = m.end()
        if m.lastgroup == 'atom' and m.group('index') is None and text.startswith('[', pos):
            raise WordSyntaxError('unclosed "[" at position %i of %r' % (pos, text))
        if m.lastgroup != 'space':
            yield m


def _atom(name, index, env, names):
    if index is None:
        if name in ('T', 'rho1', 'rho2'):
            return GeneratorName(name)
        if name in ('I', 'id'):
            return Word()
        if name in names:
            return names[name]
        raise UndefinedWordError('unbound word %r' % name)
    i = eval_expr(index, env)
    if name in ('u', 'v', 'y'):
        return GeneratorName(name, i)
    if name in _TWISTS:
        return GeneratorName('twist', curve=CurveName(_TWISTS[name], i))
    raise UndefinedWordError('unknown letter %s[...]' % name)


def parse_word(text, env=None, names=None):
    """
    Parse word text.

    Parameters
    ----------
    text : str
    env : dict, optional
        Integer variables for index and exponent expressions.
    names : dict, optional
        Named words that may appear as letters.

    Returns
    -------
    Word
    """
    env = env or {}
    names = names or {}
    stack = [[]]
    for m in _tokens(text):
        if m.group('lpar'):
            stack.append([])
        elif m.group('rpar'):
            if len(stack) == 1:
                raise WordSyntaxError('unbalanced ")" in %r' % text)
            group = Word(tuple(stack.pop()))
            stack[-1].append(Factor(group))
        elif m.group('atom'):
            stack[-1].append(Factor(_atom(m.group('atom'), m.group('index'), env, names)))
        else:
            if not stack[-1]:
                raise WordSyntaxError('exponent without base in %r' % text)
            exp = m.group('exp') if m.group('exp') is not None else m.group('bexp')
            last = stack[-1].pop()
            stack[-1].append(Factor(last.base, last.exponent * eval_expr(exp, env)))
    if len(stack) != 1:
        raise WordSyntaxError('unbalanced "(" in %r' % text)
    return Word(tuple(stack[0]))


def parse_curves(text, env=None):
    """Parse ``(b[2], b[3])`` or ``a[1]`` into curve names."""
    env = env or {}
    names = []
    for item in text.strip().strip('()').split(','):
        m = re.match(r'^\s*([a-z]+)\[(.*)\]\s*$', item)
        if m is None or m.group(1) not in _CURVES:
            raise WordSyntaxError('cannot read curve %r' % item)
        names.append(CurveName(m.group(1), eval_expr(m.group(2), env)))
    return names


# Evaluation
############

def _power(m, k):
    if k == 1:
        return m
    return m.power(k)


def _matrix(base, cfg):
    if isinstance(base, Word):
        return evaluate(base, cfg).matrix
    try:
        return generator_image(base, cfg)
    except (UndefinedGeneratorError, UndefinedCurveError, GenusError) as e:
        raise UndefinedWordError(str(e)) from e


def evaluate(word, cfg):
    """
    Image of a word in Aut(H_1(N_g; Z_2)).

    Returns
    -------
    IsometryMatrix
        Product of the letter images, left to right.
    """
    result = GF2Matrix.identity(cfg.g)
    for f in word.factors:
        if f.exponent == 0:
            continue
        result = mat_mul(result, _power(_matrix(f.base, cfg), f.exponent))
    return IsometryMatrix(result, str(word))


# Derived curves
################

# W_2 sends a_2 to d_2 and W_1 sends d_2 to d_1
D2_WORD = '(A[1] B[2]^-1)(A[1] C[1]^-1)(A[1] C[2]^-1)(A[1] B[2]^-1)'
D1_WORD = '(C[2] B[1]^-1)(C[2] A[1]^-1)(C[2] C[1]^-1)(C[2] B[1]^-1)'


@lru_cache(maxsize=None)
def derived_class(which, cfg):
    """
    Class of d_1 or d_2, defined as the image of a_2 (resp. d_2) under its
    defining word. Needs g >= 7.
    """
    if cfg.g < 7:
        raise UndefinedCurveError('d_%i needs genus >= 7' % which)
    if which == 2:
        source, text = curve_class(CurveName('a', 2), cfg), D2_WORD
    elif which == 1:
        source, text = derived_class(2, cfg), D1_WORD
    else:
        raise UndefinedCurveError('no curve d_%i' % which)
    image = apply(evaluate(parse_word(text, cfg.variables()), cfg).matrix, source)
    logger.debug('d_%i = {%s} at genus %i' % (which, ','.join(map(str, image.support())), cfg.g))
    return image


_FOR_RE = re.compile(r'^(.*?)\s+for\s+(\w+)\s+in\s+(.+?)\s*\.\.\s*(.+?)\s*$')


def expand_words(texts, env, names=None):
    """
    Parse a list of word texts, expanding entries of the form
    ``B[i] for i in 1 .. r``.
    """
    out = []
    for text in texts:
        m = _FOR_RE.match(text)
        if m is None:
            out.append(parse_word(text, env, names))
            continue
        lo, hi = eval_expr(m.group(3), env), eval_expr(m.group(4), env)
        for i in range(lo, hi + 1):
            out.append(parse_word(m.group(1), dict(env, **{m.group(2): i}), names))
    return out
