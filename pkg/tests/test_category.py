import numpy as np
import pytest

from qsys.category import (GOLDEN, FusionCategoryData, builtin, compute_simple_twist,
                           hexagon_residual, pentagon_residual, validate)
from qsys.errors import MalformedData, NoBraiding, UnknownName, ValidationFailed


def rebuild(cat, F=None, R=None):
    """Fresh category with some F (or R) blocks replaced."""
    F_all = {k: M.copy() for k, M in cat.F.items()}
    F_all.update(F or {})
    R_all = None if cat.R is None else {k: M.copy() for k, M in cat.R.items()}
    if R:
        R_all.update(R)
    return FusionCategoryData(cat.labels, cat.unit, cat.dual, dict(cat._N), F_all, R_all,
                              cat.twist, name=cat.name + '-edited')


@pytest.mark.parametrize('name', ['Hilb', 'RepZ2', 'Fib', 'Ising', 'VecZ2', 'VecZ2_k1', 'VecZ5_k3',
                                  'VecZ7_q2', 'VecZ12_k7'])
def test_builtins_validate(name):
    rep = validate(builtin(name))
    assert rep.accepted
    assert max(rep.residuals.values()) < 1e-9


def test_fib_dimensions_and_pentagon(fib):
    rep = validate(fib)
    assert rep.pentagon_residual < 1e-12
    assert fib.qdim['tau'] == pytest.approx(GOLDEN, abs=1e-10)
    assert fib.N('tau', 'tau', 'tau') == 1


def test_vecz2_trivial():
    cat = builtin('VecZ2')
    rep = validate(cat)
    assert all(r == 0 for r in rep.residuals.values())
    assert cat.qdim == {'0': 1.0, '1': 1.0}


def test_vecz2_sign_flip_rejected():
    # with a single nontrivial F-symbol, the only flip that leaves the cocycle
    # condition touches a unit-gauge block
    cat = builtin('VecZ2')
    bad = rebuild(cat, F={('1', '0', '1', '0'): -np.eye(1)})
    with pytest.raises(ValidationFailed) as err:
        validate(bad)
    assert err.value.residual > 0.5


def test_vecz2_flip_of_nontrivial_symbol_is_other_cocycle():
    # flipping F^{111}_1 of the trivial cocycle gives the valid k = 1 cocycle
    # (the symmetric braiding is dropped: it is not compatible with k = 1)
    cat = builtin('VecZ2')
    key = ('1', '1', '1', '1')
    F = {k: M.copy() for k, M in cat.F.items()}
    F[key] = -F[key]
    flipped = FusionCategoryData(cat.labels, cat.unit, cat.dual, dict(cat._N), F, name='flipped')
    assert validate(flipped).accepted
    for k, M in builtin('VecZ2_k1').F.items():
        assert np.allclose(flipped.F[k], M)


def test_ising_sign_flip_breaks_pentagon(ising):
    key = ('sigma', 'sigma', 'sigma', 'sigma')
    M = ising.F[key].copy()
    M[1, 1] *= -1  # stays unitary up to a sign pattern; pentagon must notice
    bad = rebuild(ising, F={key: M})
    assert pentagon_residual(bad) > 0.1


@pytest.mark.parametrize('name', ['Fib', 'Ising', 'RepZ2', 'VecZ3_k1'])
def test_perturbation_of_every_f_block_rejected(name):
    cat = builtin(name)
    for key, M in cat.F.items():
        P = M.copy()
        P[0, 0] += 1e-3
        with pytest.raises(ValidationFailed):
            validate(rebuild(cat, F={key: P}))


def test_qdim_properties():
    for name in ['Fib', 'Ising', 'RepZ2', 'VecZ6_k1']:
        cat = builtin(name)
        for a in cat.labels:
            assert cat.qdim[a] >= 1 - 1e-12
            assert cat.qdim[cat.dual[a]] == pytest.approx(cat.qdim[a], abs=1e-12)
    assert builtin('Ising').qdim['sigma'] == pytest.approx(np.sqrt(2))


def test_hilb_trivial():
    cat = builtin('Hilb')
    assert cat.labels == ('1',)
    assert cat.is_pointed() and cat.has_trivial_associator()


def test_repz2_symmetric_braiding(repz2):
    assert repz2.labels == ('+', '-')
    assert repz2.r_block('-', '-', '+')[0, 0] == pytest.approx(1)


def test_twists(fib, repz2):
    assert compute_simple_twist(fib, 'tau') == pytest.approx(np.exp(4j * np.pi / 5), abs=1e-10)
    assert compute_simple_twist(fib, '1') == pytest.approx(1)
    for a in repz2.labels:
        assert compute_simple_twist(repz2, a) == pytest.approx(1)


def test_ising_twists(ising):
    assert compute_simple_twist(ising, 'psi') == pytest.approx(-1)
    assert compute_simple_twist(ising, 'sigma') == pytest.approx(np.exp(2j * np.pi / 16), abs=1e-10)


@pytest.mark.parametrize('name', ['RepZ2', 'Ising', 'VecZ9_q1', 'VecZ6_q5', 'VecZ4_q0'])
def test_invertible_twist_equals_self_braiding(name):
    cat = builtin(name)
    for g in cat.labels:
        if abs(cat.qdim[g] - 1) > 1e-9:
            continue
        (g2, _), = cat.outcomes(g, g)
        assert compute_simple_twist(cat, g) == pytest.approx(cat.r_block(g, g, g2)[0, 0], abs=1e-9)


def test_twist_requires_braiding():
    with pytest.raises(NoBraiding):
        compute_simple_twist(builtin('VecZ3_k1'), '1')


def test_inconsistent_twist_rejected(fib):
    bad = FusionCategoryData(fib.labels, fib.unit, fib.dual, dict(fib._N), fib.F, fib.R,
                             {'1': 1, 'tau': 1j}, name='fib-badtwist')
    with pytest.raises(ValidationFailed):
        validate(bad)


def test_reverse_braiding_also_valid(fib):
    # the conjugate braiding is the reverse braiding and satisfies the hexagons too
    conj = rebuild(fib, R={k: M.conj() for k, M in fib.R.items()})
    assert hexagon_residual(conj) < 1e-12


def test_broken_r_fails_hexagon(fib):
    R = {k: M.copy() for k, M in fib.R.items()}
    R['tau', 'tau', 'tau'] = R['tau', 'tau', 'tau'] * np.exp(0.3j)
    assert hexagon_residual(rebuild(fib, R=R)) > 1e-3


def test_validate_deterministic():
    a = validate(builtin('Ising')).to_dict()
    b = validate(builtin('Ising')).to_dict()
    assert a == b


def test_malformed_inputs():
    with pytest.raises(MalformedData):
        FusionCategoryData(['1', '1'], '1', {'1': '1'}, {('1', '1', '1'): 1})
    with pytest.raises(MalformedData):
        FusionCategoryData(['1'], 'x', {'1': '1'}, {('1', '1', '1'): 1})
    with pytest.raises(MalformedData):
        FusionCategoryData(['1', 'a'], '1', {'1': '1', 'a': 'a'},
                           {('1', '1', '1'): 1, ('1', 'a', 'a'): 1, ('a', '1', 'a'): 1,
                            ('a', 'a', '1'): 1, ('a', 'a', 'a'): 1})  # Fib rules, F missing
    with pytest.raises(MalformedData):
        FusionCategoryData(['1'], '1', {'1': '1'}, {('1', '1', 'z'): 1})


def test_unknown_builtin():
    with pytest.raises(UnknownName):
        builtin('Nope')


def test_builtin_cached():
    assert builtin('Fib') is builtin('Fib')
    assert builtin('VecZ4') is builtin('VecZn', n=4)


def test_sum_object(fib):
    X = fib.obj('1', 'tau')
    assert X.dim() == pytest.approx(1 + GOLDEN)
    assert X.mult('tau') == 1 and X.total_mult == 2
    Y = fib.obj({'tau': 2})
    assert Y.dim() == pytest.approx(2 * GOLDEN)
    assert X.dual() == X


def test_validate_timing():
    import time
    for name in ['Fib', 'Ising', 'RepZ2', 'VecZ12_k5', 'VecZ12_q7']:
        t = time.perf_counter()
        validate(builtin(name, check=False))
        assert time.perf_counter() - t < 1.0
