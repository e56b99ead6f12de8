import numpy as np
import pytest

from qsys import homspace as hs
from qsys.category import builtin
from qsys.errors import NotEndomorphism, NotLength3, ShapeMismatch, WordTooLong
from qsys.homspace import (associator, associator_inv, braiding, compose, dagger, fmove, identity,
                           random_morphism, tensor, tensor_id)
from qsys.linalg import BlockDiag


def random_object(cat, rng, max_mult=2):
    mult = {a: int(rng.integers(0, max_mult + 1)) for a in cat.labels}
    if not any(mult.values()):
        mult[cat.labels[-1]] = 1
    return cat.obj({a: m for a, m in mult.items() if m})


def test_basis_dimensions(fib):
    t = fib.obj('tau')
    w = ((t, t), t)
    b = hs.basis(w)
    # tau^3 = 1 + 2 tau
    assert b.dim('1') == 1 and b.dim('tau') == 2
    assert hs.basis((t, (t, t))).dim('tau') == 2


def test_identity_and_compose(fib, rng):
    X = fib.obj({'1': 1, 'tau': 2})
    w = (X, X)
    f = random_morphism(w, X, rng)
    assert (compose(f, identity(w)) - f).norm() == 0
    assert (compose(identity(X), f) - f).norm() == 0
    assert np.allclose(hs.as_endblock(identity(fib.obj({'1': 2}))).blocks[0], np.eye(2))
    assert (dagger(identity(w)) - identity(w)).norm() == 0


def test_compose_associative(fib, rng):
    X = fib.obj('1', 'tau')
    w = (X, X)
    f, g, h = random_morphism(w, X, rng), random_morphism(X, X, rng), random_morphism(X, w, rng)
    assert (compose(compose(h, g), f) - compose(h, compose(g, f))).norm() < 1e-12


def test_compose_shape_mismatch(fib, rng):
    X = fib.obj('1', 'tau')
    with pytest.raises(ShapeMismatch):
        compose(random_morphism(X, X, rng), random_morphism((X, X), (X, X), rng))


def test_dagger_properties(fib, rng):
    X = fib.obj('1', 'tau')
    f = random_morphism((X, X), X, rng)
    g = random_morphism(X, (X, X), rng)
    assert (dagger(dagger(f)) - f).norm() == 0
    assert (dagger(compose(g, f)) - compose(dagger(f), dagger(g))).norm() < 1e-12


@pytest.mark.parametrize('name', ['Fib', 'Ising', 'VecZ3_k1'])
def test_cstar_identity(name, rng):
    cat = builtin(name)
    for _ in range(10):
        X, Y = random_object(cat, rng), random_object(cat, rng)
        f = random_morphism((X, Y), X, rng)
        if f.size == 0:
            continue
        assert compose(dagger(f), f).norm() == pytest.approx(f.norm() ** 2, rel=1e-9)


def test_fmove_trivial_on_vec(rng):
    cat = builtin('VecZ3')
    X = cat.obj('0', '1', '2')
    w = ((X, X), X)
    a = associator(X, X, X)
    for M in a.blocks.values():
        assert np.allclose(np.abs(M), (np.abs(M) > 0.5).astype(float))
        assert np.allclose(M[np.abs(M) > 0.5], 1)
    f = random_morphism(w, X, rng)
    assert (fmove(fmove(f)) - f).norm() < 1e-12


def test_fmove_roundtrip_fib(fib, rng):
    t = fib.obj('tau')
    f = random_morphism(((t, t), t), t, rng)
    g = fmove(f)
    assert g.source == (t, (t, t))
    assert (fmove(g) - f).norm() < 1e-12
    h = fmove(f, 'source')
    assert (fmove(dagger(h), 'target') - dagger(f)).norm() < 1e-12


def test_fmove_needs_length3(fib, rng):
    t = fib.obj('tau')
    with pytest.raises(NotLength3):
        fmove(random_morphism((t, t), t, rng))


def test_associator_fib_block(fib):
    t = fib.obj('tau')
    a = associator(t, t, t)
    F, _, _ = fib.f_block('tau', 'tau', 'tau', 'tau')
    assert np.allclose(a.blocks['tau'], F)


@pytest.mark.parametrize('name', ['Fib', 'Ising', 'VecZ4_k3'])
def test_pentagon_coherence(name, rng):
    cat = builtin(name)
    for _ in range(3):
        A, B, C, D = (random_object(cat, rng, 1) for _ in range(4))
        lhs = compose(associator((A, B), C, D), associator(A, B, (C, D)))
        rhs = compose(tensor(associator(A, B, C), identity(D)),
                      compose(associator(A, (B, C), D), tensor(identity(A), associator(B, C, D))))
        assert (lhs - rhs).norm() < 1e-9


@pytest.mark.parametrize('name', ['Fib', 'Ising', 'VecZ5_q2', 'RepZ2'])
def test_hexagon_coherence(name, rng):
    cat = builtin(name)
    for _ in range(3):
        X, Y, Z = (random_object(cat, rng, 1) for _ in range(3))
        I = identity
        lhs = braiding(X, (Y, Z))
        rhs = compose(associator(Y, Z, X), compose(tensor(I(Y), braiding(X, Z)), compose(
            associator_inv(Y, X, Z), compose(tensor(braiding(X, Y), I(Z)), associator(X, Y, Z)))))
        assert (lhs - rhs).norm() < 1e-9
        lhs = braiding((X, Y), Z)
        rhs = compose(associator_inv(Z, X, Y), compose(tensor(braiding(X, Z), I(Y)), compose(
            associator(X, Z, Y), compose(tensor(I(X), braiding(Y, Z)), associator_inv(X, Y, Z)))))
        assert (lhs - rhs).norm() < 1e-9


def test_associator_naturality(ising, rng):
    X, Y, Z = ising.obj('1', 'sigma'), ising.obj('sigma', 'psi'), ising.obj({'sigma': 2})
    f, g, h = (random_morphism(W, W, rng) for W in (X, Y, Z))
    lhs = compose(associator(X, Y, Z), tensor(f, tensor(g, h)))
    rhs = compose(tensor(tensor(f, g), h), associator(X, Y, Z))
    assert (lhs - rhs).norm() < 1e-9


def test_tensor_id_interchange(fib, rng):
    X = fib.obj('1', 'tau')
    f, h = random_morphism(X, X, rng), random_morphism(X, X, rng)
    lhs = compose(tensor_id(f, X), tensor_id(h, X))
    assert (lhs - tensor_id(compose(f, h), X)).norm() < 1e-12
    assert (dagger(tensor_id(f, X)) - tensor_id(dagger(f), X)).norm() < 1e-12
    assert (tensor_id(identity(X), X) - identity((X, X))).norm() == 0


def test_tensor_id_canonical_nesting(fib, rng):
    X = fib.obj('1', 'tau')
    m = random_morphism((X, X), X, rng)
    g = tensor_id(m, X, side='left')
    assert hs.nesting(g.source) == 'left'
    raw = tensor_id(m, X, side='left', canonical=False)
    assert hs.nesting(raw.source) == 'right'
    assert (fmove(raw) - g).norm() < 1e-12


def test_tensor_id_word_limit(fib, rng):
    X = fib.obj('tau')
    f = random_morphism(((X, X), X), X, rng)
    with pytest.raises(WordTooLong):
        tensor_id(f, X)


def test_interchange_law(ising, rng):
    X, Y = ising.obj('1', 'sigma'), ising.obj('sigma', 'psi')
    f1, f2 = random_morphism(X, X, rng), random_morphism(X, X, rng)
    g1, g2 = random_morphism(Y, Y, rng), random_morphism(Y, Y, rng)
    lhs = compose(tensor(f1, g1), tensor(f2, g2))
    assert (lhs - tensor(compose(f1, f2), compose(g1, g2))).norm() < 1e-12


def test_braiding_symmetric_repz2(repz2, rng):
    X = repz2.obj('+', '-')
    f = random_morphism((X, X), X, rng)
    assert (hs.braid_precompose(hs.braid_precompose(f)) - f).norm() < 1e-12
    assert (hs.monodromy_precompose(f) - f).norm() < 1e-12


def test_braiding_with_unit_trivial(fib, rng):
    U, X = fib.unit_object, fib.obj('1', 'tau')
    b = braiding(U, X)
    assert all(np.allclose(M, np.eye(M.shape[0])) for M in b.blocks.values())


def test_ising_monodromy_channels(ising):
    s = ising.obj('sigma')
    mono = compose(braiding(s, s), braiding(s, s))
    # R^2 on (sigma sigma -> 1) and (sigma sigma -> psi) are different scalars
    assert abs(mono.blocks['1'][0, 0] - mono.blocks['psi'][0, 0]) > 1


def test_endblock_roundtrip_and_positivity(fib, rng):
    X = fib.obj({'1': 2, 'tau': 1})
    f = random_morphism(X, X, rng)
    B = hs.as_endblock(f)
    assert (hs.from_endblock(X, B) - f).norm() == 0
    assert hs.positivity(compose(dagger(f), f))
    assert hs.positivity(identity(X))
    assert not hs.positivity(-identity(X))
    with pytest.raises(NotEndomorphism):
        hs.as_endblock(random_morphism((X, X), X, rng))


def test_unit_projection(fib):
    from qsys.gallery import fib_golden
    A = fib_golden()
    e = hs.as_endblock(compose(A.iota, dagger(A.iota)))
    assert np.allclose(e.block('1'), [[1]]) and np.allclose(e.block('tau'), [[0]])
    assert abs(compose(dagger(A.iota), A.iota).blocks['1'][0, 0] - 1) < 1e-12


def test_coefficients_access(fib):
    X = fib.obj('1', 'tau')
    f = hs.zeros((X, X), X)
    src = (('tau', 0), ('tau', 0), 'tau', 0)
    f.set_coeff(src, ('tau', 0), 2.5)
    assert f.coeff(src, ('tau', 0)) == 2.5
    assert f.coeff(src, ('1', 0)) == 0
    assert list(f.items()) == [(src, 'tau', ('tau', 0), 2.5)]
    with pytest.raises(ShapeMismatch):
        f.set_coeff(src, ('1', 0), 1.0)


def test_make_word_limit(fib):
    X = fib.obj('tau')
    with pytest.raises(WordTooLong):
        hs.make_word(X, X, X, X)
    assert hs.make_word(X, X, X, nest='right') == (X, (X, X))
