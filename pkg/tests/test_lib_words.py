# -*- coding: utf-8 -*-
import pytest

from crosscap.lib_gf2 import mat_inverse, mat_mul
from crosscap.lib_surface import CurveName, GeneratorName, GenusConfig, curve_class, generator_image
from crosscap.lib_words import (UndefinedWordError, Word, WordSyntaxError, derived_class, eval_expr,
                                evaluate, expand_words, parse_curves, parse_word)

LETTERS = ['T', 'rho1', 'rho2', 'u[1]', 'u[g-1]', 'v[2]', 'y[3]', 'A[1]', 'A[2]', 'B[r]',
           'C[1]', 'G[4]', 'D[2]', 'A[1]^-1', 'T^3', '(B[1] C[2]^-1)']


def _random_word(rng, length=6):
    return ' '.join(LETTERS[int(k)] for k in rng.integers(0, len(LETTERS), size=length))


def test_eval_expr():
    env = {'g': 26, 'r': 12, 'i': 3}
    assert eval_expr('2*i-3', env) == 3
    assert eval_expr('r+9', env) == 21
    assert eval_expr('g // 2 % 5', env) == 3
    assert eval_expr('-i', env) == -3
    assert eval_expr('r in (16, 17, 18)', env) is False
    assert eval_expr('r not in (16, 17, 18)', env) is True
    assert eval_expr('1 <= i <= r and g > 20', env) is True


def test_eval_expr_rejects():
    with pytest.raises(WordSyntaxError):
        eval_expr('__import__("os")', {})
    with pytest.raises(WordSyntaxError):
        eval_expr('2 ** 10', {})
    with pytest.raises(WordSyntaxError):
        eval_expr('r +', {'r': 1})
    with pytest.raises(UndefinedWordError):
        eval_expr('k + 1', {'r': 1})


def test_parse_word():
    env = {'g': 7, 'r': 3, 'h': 3, 'nc': 2, 'i': 1}
    w = parse_word('A[1] B[2]^-1', env)
    assert str(w) == 'A_1 B_2^-1'
    assert w.factors[1].exponent == -1
    w = parse_word('T^{2*i-3} (C[1] C[2]^-1) T^{3-2*i}', env)
    assert str(w) == 'T^-1 (C_1 C_2^-1) T'
    assert parse_word('u[g-1] v[r] y[1]', env).factors[0].base == GeneratorName('u', 6)
    assert str(parse_word('', env)) == 'I'
    assert str(parse_word('G[10]', env).factors[0].base) == 'G_10'


def test_parse_word_errors():
    with pytest.raises(WordSyntaxError):
        parse_word('A[1')
    with pytest.raises(WordSyntaxError):
        parse_word('(A[1] B[1]')
    with pytest.raises(WordSyntaxError):
        parse_word('A[1])')
    with pytest.raises(WordSyntaxError):
        parse_word('^2 T')
    with pytest.raises(WordSyntaxError):
        parse_word('T * T')
    with pytest.raises(UndefinedWordError):
        parse_word('F1 T')
    with pytest.raises(UndefinedWordError):
        parse_word('Q[1]')


def test_named_words(cfg7):
    env = cfg7.variables()
    f1 = parse_word('T u[1]', env)
    names = {'F1': Word(f1.factors, name='F1')}
    w = parse_word('F1^-1 T', env, names)
    assert str(w) == 'F1^-1 T'
    expected = mat_mul(mat_inverse(evaluate(f1, cfg7).matrix), generator_image(GeneratorName('T'), cfg7))
    assert evaluate(w, cfg7).matrix == expected


def test_evaluate_homomorphism(cfg7, rng):
    env = cfg7.variables()
    for _ in range(20):
        w1 = parse_word(_random_word(rng), env)
        w2 = parse_word(_random_word(rng), env)
        m1, m2 = evaluate(w1, cfg7).matrix, evaluate(w2, cfg7).matrix
        assert evaluate(w1 * w2, cfg7).matrix == mat_mul(m1, m2)
        assert evaluate(w1.inverse(), cfg7).matrix == mat_inverse(m1)


def test_evaluate_undefined(cfg7):
    env = cfg7.variables()
    with pytest.raises(UndefinedWordError):
        evaluate(parse_word('B[9]', env), cfg7)
    with pytest.raises(UndefinedWordError):
        evaluate(parse_word('u[g]', env), cfg7)
    with pytest.raises(UndefinedWordError):
        evaluate(parse_word('D[1]', env), GenusConfig(6))


def test_evaluate_provenance(cfg7):
    im = evaluate(parse_word('T (B[1] B[2]^-1) T^-1', cfg7.variables()), cfg7)
    assert im.provenance == 'T (B_1 B_2^-1) T^-1'


def test_parse_curves():
    env = {'g': 26, 'r': 12}
    assert parse_curves('(b[1], b[r])', env) == [CurveName('b', 1), CurveName('b', 12)]
    assert parse_curves('(gamma[10])', env) == [CurveName('gamma', 10)]
    assert parse_curves('alpha[g-1]', env) == [CurveName('alpha', 25)]
    with pytest.raises(WordSyntaxError):
        parse_curves('(B[1])', env)


def test_expand_words():
    env = {'g': 7, 'r': 3, 'h': 3, 'nc': 2}
    words = expand_words(['A[1]', 'B[i] for i in 1 .. r', 'C[i] for i in 1 .. nc'], env)
    assert [str(w) for w in words] == ['A_1', 'B_1', 'B_2', 'B_3', 'C_1', 'C_2']


def test_derived_classes(cfg7):
    a2 = curve_class(CurveName('a', 2), cfg7)
    d2 = derived_class(2, cfg7)
    d1 = derived_class(1, cfg7)
    # the defining words are products of isometries, so they keep a_2.a_2
    assert d2.dot(d2) == a2.dot(a2)
    assert d1 == curve_class(CurveName('d', 1), cfg7)
    # d_1 and d_2 only exist from genus 7 on
    with pytest.raises(ValueError):
        derived_class(1, GenusConfig(6))
