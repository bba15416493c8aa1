# -*- coding: utf-8 -*-
import glob
import os

import numpy as np
import pytest
from sympy.combinatorics import Permutation, PermutationGroup

from crosscap.lib_bsgs import (CACHE_VERSION, BSGS, MatrixAction, OracleOverflowError,
                               ResourceGuardError, brute_force_closure, expected_order,
                               generator_set, group_order, load_cache, orbit, read_words_file,
                               schreier_sims, sp_order)
from crosscap.lib_gf2 import GF2Matrix, GF2Vector, apply, mat_inverse, mat_mul
from crosscap.lib_ledger import UnsupportedGenusError
from crosscap.lib_surface import (GeneratorName, GenusConfig, canonical_class_w, generator_image,
                                  is_isometry)


def _matrices(gens):
    return [m for _, m in gens]


def _point_permutation(m, n):
    """Action on the nonzero vectors of F_2^n as a permutation of 0 .. 2^n-2."""
    a = MatrixAction.from_matrix(m)
    return Permutation([a.image(x) - 1 for x in range(1, 1 << n)])


def test_sp_order():
    assert sp_order(1) == 6
    assert sp_order(2) == 720
    assert sp_order(3) == 1451520


def test_expected_order():
    assert expected_order(GenusConfig(5)) == 720
    assert expected_order(GenusConfig(7)) == 1451520
    assert expected_order(GenusConfig(8)) == 185794560
    assert expected_order(GenusConfig(8), 'quotient') == 1451520
    assert expected_order(GenusConfig(8)) // expected_order(GenusConfig(8), 'quotient') == 2 ** 7


def test_matrix_action(rng):
    bits = rng.integers(0, 2, size=(10, 10))
    m = GF2Matrix.from_bits(bits)
    a = MatrixAction.from_matrix(m)
    xs = rng.integers(0, 1 << 10, size=50)
    expected = [apply(m, GF2Vector.from_int(10, int(x))).to_int() for x in xs]
    assert list(a.images(xs.astype(np.int64))) == expected
    assert [a.image(int(x)) for x in xs] == expected
    assert a.to_matrix() == m
    b = MatrixAction.from_matrix(generator_image(GeneratorName('T'), GenusConfig(10)))
    assert (a * b).to_matrix() == mat_mul(m, b.to_matrix())
    assert (b * b.inverse()).is_identity()


def test_generator_sets():
    cfg = GenusConfig(7)
    assert [w for w, _ in generator_set('thm21', cfg)] == ['T', 'A_1 A_2^-1', 'B_1 B_2^-1', 'u_1']
    assert len(generator_set('szep', cfg)) == 2 + cfg.r + cfg.nc + 1
    assert generator_set('custom', cfg) == []
    assert [w for w, _ in generator_set('thmB', GenusConfig(26))][0] == 'rho1'
    with pytest.raises(UnsupportedGenusError):
        generator_set('thmA', GenusConfig(18))
    with pytest.raises(UnsupportedGenusError):
        generator_set('thmB-odd', GenusConfig(26))
    with pytest.raises(ValueError):
        generator_set('thmC', cfg)


def test_read_words_file(tmp_path):
    path = tmp_path / 'words.txt'
    path.write_text('# generators\nT\nA[1] A[2]^-1   # twist quotient\n\nu[1]\n')
    assert read_words_file(str(path)) == ['T', 'A[1] A[2]^-1', 'u[1]']
    words = read_words_file(str(path))
    assert len(generator_set('custom', GenusConfig(7), words)) == 3


def test_order_genus5():
    cfg = GenusConfig(5)
    result = group_order(_matrices(generator_set('szep', cfg)), cfg)
    assert tuple(result) == (720, 'proved')
    assert result.degree == 31


def test_order_genus7():
    cfg = GenusConfig(7)
    order, cert = group_order(_matrices(generator_set('thm21', cfg)), cfg)
    assert (order, cert) == (1451520, 'proved')


def test_order_genus8_quotient():
    cfg = GenusConfig(8)
    result = group_order(_matrices(generator_set('thm21', cfg)), cfg, mode='quotient')
    assert (result.order, result.certificate, result.degree) == (1451520, 'proved', 63)


@pytest.mark.slow
def test_order_genus8_full():
    cfg = GenusConfig(8)
    result = group_order(_matrices(generator_set('thm21', cfg)), cfg)
    assert (result.order, result.certificate) == (185794560, 'proved')


@pytest.mark.slow
@pytest.mark.parametrize('g,name', [(g, 'thm21') for g in range(9, 22)] + [(19, 'thmA'), (20, 'thmA')])
def test_order_reaches_target(g, name):
    cfg = GenusConfig(g)
    mode = 'full' if name == 'thm21' else 'quotient'
    result = group_order(_matrices(generator_set(name, cfg)), cfg, mode=mode, force=True)
    assert result.order == expected_order(cfg, mode)
    assert result.certificate in ('proved', 'reached-target')


def test_below_target():
    cfg = GenusConfig(7)
    rho = _matrices(generator_set('custom', cfg, ['rho1', 'rho2']))
    result = group_order(rho, cfg)
    assert (result.order, result.certificate) == (14, 'below-target')
    assert tuple(group_order([], cfg)) == (1, 'below-target')


def test_no_target():
    cfg = GenusConfig(7)
    rho = _matrices(generator_set('custom', cfg, ['rho1', 'rho2']))
    assert tuple(group_order(rho, cfg, target=None)) == (14, 'proved')
    assert tuple(group_order(rho, cfg, target=None, verify_degree=0)) == (14, 'probable')


def test_guard():
    cfg = GenusConfig(28)
    with pytest.raises(ResourceGuardError):
        group_order([GF2Matrix.identity(28)], cfg)
    with pytest.raises(ValueError):
        group_order([GF2Matrix.identity(7)], GenusConfig(7), verify_degree=2 ** 21)


def test_bsgs_sift():
    cfg = GenusConfig(7)
    t = MatrixAction.from_matrix(generator_image(GeneratorName('T'), cfg))
    bsgs = BSGS(7)
    assert bsgs.add(t)
    assert not bsgs.add(t * t)
    bsgs.verify()
    assert bsgs.order() == 7
    residue, depth = bsgs.sift(t * t * t)
    assert residue.is_identity() and depth == len(bsgs.levels)


def test_orbit_partition():
    cfg = GenusConfig(7)
    gens = _matrices(generator_set('thm21', cfg))
    sizes = sorted(orbit(gens, v)[0].size for v in (canonical_class_w(cfg),
                                                       GF2Vector.from_support(7, [1, 2]),
                                                       GF2Vector.from_support(7, [1])))
    assert sizes == [1, 63, 63]
    points, label = orbit(gens, GF2Vector.from_support(7, [1]))
    assert label[1] == -2
    assert (label[points] >= -2).all() and (label[points] != -1).all()
    assert label[0] == -1


def test_cache(tmp_path):
    cfg = GenusConfig(7)
    gens = _matrices(generator_set('thm21', cfg))
    first = group_order(gens, cfg, cache_dir=str(tmp_path))
    assert not first.cached
    files = glob.glob(os.path.join(str(tmp_path), '*.npz'))
    assert len(files) == 1
    second = group_order(gens, cfg, cache_dir=str(tmp_path))
    assert second.cached
    assert (second.order, second.orbit_sizes) == (first.order, first.orbit_sizes)
    with np.load(files[0]) as f:
        assert int(f['version']) == CACHE_VERSION
        digest = str(f['digest'])
    assert load_cache(files[0], 7, 'full', digest, 2718) is not None
    assert load_cache(files[0], 7, 'full', digest, 1) is None
    assert load_cache(files[0], 7, 'quotient', digest, 2718) is None
    assert load_cache(str(tmp_path / 'missing.npz'), 7, 'full', digest, 2718) is None


def test_closure_against_sympy():
    cfg = GenusConfig(5)
    gens = _matrices(generator_set('szep', cfg))
    closure = brute_force_closure(gens)
    assert len(closure) == 720
    group = PermutationGroup([_point_permutation(m, 5) for m in gens])
    assert group.order() == 720
    assert gens[0].matrix in closure
    assert GF2Matrix.identity(5) in closure
    assert sum(1 for _ in closure.matrices()) == 720


@pytest.mark.parametrize('g', [7, 9, 11])
def test_dihedral_closure(g):
    cfg = GenusConfig(g)
    gens = [generator_image(GeneratorName(k), cfg) for k in ('rho1', 'rho2')]
    assert len(brute_force_closure(gens)) == 2 * g
    perms = [Permutation([int(np.flatnonzero(c)[0]) for c in m.to_bits().T]) for m in gens]
    assert PermutationGroup(perms).order() == 2 * g
    assert group_order(gens, cfg, target=None).order == 2 * g


def test_closure_cap():
    cfg = GenusConfig(7)
    with pytest.raises(OracleOverflowError):
        brute_force_closure(_matrices(generator_set('thm21', cfg)), cap=1000)
    with pytest.raises(ValueError):
        brute_force_closure([])


@pytest.mark.slow
def test_closure_genus7():
    cfg = GenusConfig(7)
    gens = _matrices(generator_set('szep', cfg))
    assert len(brute_force_closure(gens)) == 1451520
    assert tuple(group_order(gens, cfg)) == (1451520, 'proved')


def test_truncated_cache(tmp_path):
    cfg = GenusConfig(7)
    gens = _matrices(generator_set('thm21', cfg))
    first = group_order(gens, cfg, cache_dir=str(tmp_path))
    path, = glob.glob(os.path.join(str(tmp_path), '*.npz'))
    with open(path, 'rb') as f:
        data = f.read()
    with open(path, 'wb') as f:
        f.write(data[:len(data) // 2])
    again = group_order(gens, cfg, cache_dir=str(tmp_path))
    assert not again.cached
    assert (again.order, again.certificate) == (first.order, first.certificate)
    assert group_order(gens, cfg, cache_dir=str(tmp_path)).cached
    assert sorted(os.listdir(str(tmp_path))) == [os.path.basename(path)]


def test_order_generator_invariance():
    cfg = GenusConfig(7)
    gens = _matrices(generator_set('thm21', cfg))
    w = generator_image(GeneratorName('rho1'), cfg)
    variants = [gens[::-1], [mat_inverse(gens[0])] + gens[1:],
                [mat_mul(mat_mul(w, m), mat_inverse(w)) for m in gens]]
    for seed, variant in enumerate(variants):
        assert tuple(group_order(variant, cfg, seed=seed)) == (1451520, 'proved')


@pytest.mark.parametrize('g,name', [(5, 'szep'), (7, 'thm21')])
def test_strong_generators_are_isometries(g, name):
    cfg = GenusConfig(g)
    actions = [MatrixAction.from_matrix(m) for m in _matrices(generator_set(name, cfg))]
    bsgs = schreier_sims(actions, g, target=expected_order(cfg))
    bsgs.verify()
    assert bsgs.order() == expected_order(cfg)
    assert all(is_isometry(h.to_matrix()) for h in bsgs.strong_generators())
