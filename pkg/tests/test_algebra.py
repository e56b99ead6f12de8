import numpy as np
import pytest

from qsys import homspace as hs
from qsys.algebra import (AlgebraObject, check_associative, check_commutative, check_frobenius,
                          check_haploid, check_normalized, check_rigid_haploid, check_special,
                          check_unit, convolution, convolution_unit, counit, deform,
                          frobenius_form_nondegenerate, is_q_system, normalize_algebra,
                          semisimplicity_check, strict_positivity_mm, trivial_algebra)
from qsys.category import builtin
from qsys.errors import NotHaploid, ShapeMismatch, UnsupportedAmbient
from qsys.gallery import (ce1_frobenius_form, ce1_hilb_nilpotent, ce2_repz2_haploid_nonrigid, fib_golden,
                          fixture, ising_1psi, random_endblock, random_invertible, random_psd,
                          repz2_regular, vecz2_cocycle_nonassoc, z9_subgroup)
from qsys.linalg import BlockDiag, op_norm
from qsys.unitarization import unitarize

ALGEBRA_FIXTURES = ['ce1', 'ce2', 'repz2-regular', 'repz2-regular-deformed', 'veczn-regular-4',
                    'fib-golden', 'ising-1psi', 'z9-subgroup']


def scaled_unit(A, c):
    return AlgebraObject(A.X, A.m, A.iota * c, name='scaled')


# -- associativity and unit --------------------------------------------------------------------

def test_ce1_is_an_algebra():
    A = ce1_hilb_nilpotent()
    assert check_associative(A) < 1e-12
    assert check_unit(A) < 1e-12


def test_repz2_regular_is_an_algebra():
    A = repz2_regular()
    assert check_associative(A) < 1e-12
    assert check_unit(A) < 1e-12


def test_cocycle_obstructs_associativity():
    A = vecz2_cocycle_nonassoc()
    assert check_associative(A) > 0.5


def test_trivial_algebra(hilb=None):
    for name in ['Hilb', 'Fib', 'Ising']:
        A = trivial_algebra(builtin(name))
        assert check_associative(A) == 0 and check_unit(A) == 0
        assert check_haploid(A)
        r, lam = check_special(A)
        assert r == 0 and lam == pytest.approx(1)
        assert check_frobenius(A) == 0
        assert check_rigid_haploid(A).ok
        assert np.allclose(check_rigid_haploid(A).pairing, [[1]])


def test_unit_perturbation_detected(rng):
    A = fib_golden()
    m = A.m + hs.random_morphism(A.m.source, A.m.target, rng) * 1e-2
    B = AlgebraObject(A.X, m, A.iota)
    assert check_unit(B) > 1e-3


@pytest.mark.parametrize('name', ALGEBRA_FIXTURES)
def test_fixtures_are_algebras(name):
    A = fixture(name)
    assert check_associative(A) < 1e-9
    assert check_unit(A) < 1e-9


def test_shape_validation(fib):
    A = fib_golden()
    with pytest.raises(ShapeMismatch):
        AlgebraObject(A.X, A.comult, A.iota)
    with pytest.raises(ShapeMismatch):
        AlgebraObject(A.X, A.m, A.iota * 0)


# -- haploid, normalized -----------------------------------------------------------------------

def test_haploid_examples():
    assert check_haploid(ce2_repz2_haploid_nonrigid())
    assert not check_haploid(ce1_hilb_nilpotent())
    assert check_haploid(fib_golden())


def test_normalized_examples():
    A = repz2_regular()
    assert check_normalized(A) == 0
    assert check_normalized(scaled_unit(A, 2)) == pytest.approx(3)


def test_normalize_algebra_rescales():
    A = repz2_regular()
    B = scaled_unit(A, 2)
    # B is an algebra only once m is rescaled too: n = m / 2 has unit 2 iota
    B = AlgebraObject(A.X, A.m / 2, A.iota * 2)
    assert check_unit(B) < 1e-12
    N = normalize_algebra(B)
    assert check_normalized(N) < 1e-12
    assert (N.m - A.m).norm() < 1e-12  # m rescaled by the factor 2
    assert (normalize_algebra(N).m - N.m).norm() < 1e-12


def test_normalize_ce2_keeps_pattern():
    A = ce2_repz2_haploid_nonrigid()
    N = normalize_algebra(A)
    assert check_normalized(N) < 1e-12
    pattern = {(s, t) for s, _, t, _ in A.m.items()}
    assert {(s, t) for s, _, t, _ in N.m.items()} == pattern


# -- Frobenius, special -------------------------------------------------------------------------

def test_frobenius_and_special_on_q_systems():
    for name in ['repz2-regular', 'fib-golden', 'veczn-regular-5']:
        A = fixture(name)
        assert check_frobenius(A) < 1e-8
        r, lam = check_special(A)
        assert r < 1e-8
        assert is_q_system(A)
    assert check_special(repz2_regular())[1] == pytest.approx(2)


def test_deformed_not_special():
    A = fixture('repz2-regular-deformed')
    assert check_special(A)[0] > 0.1
    assert check_frobenius(A) > 0.1


def test_ce2_not_frobenius():
    A = ce2_repz2_haploid_nonrigid()
    assert check_frobenius(A) > 1e-3
    assert check_special(A)[0] > 1e-3


def test_commutativity():
    assert check_commutative(repz2_regular()) == 0
    assert check_commutative(trivial_algebra(builtin('Fib'))) == 0
    assert check_commutative(ising_1psi()) > 1
    assert check_commutative(z9_subgroup()) < 1e-12


# -- convolution -------------------------------------------------------------------------------

def test_convolution_unit_and_properties(rng):
    A = fib_golden()
    e = convolution_unit(A)
    for _ in range(5):
        T, S, R = (random_endblock(A.X, rng) for _ in range(3))
        assert op_norm(convolution(A, e, T) - T) < 1e-10
        assert op_norm(convolution(A, T, e) - T) < 1e-10
        lhs = convolution(A, convolution(A, T, S), R)
        rhs = convolution(A, T, convolution(A, S, R))
        assert op_norm(lhs - rhs) < 1e-10 * max(1, op_norm(lhs))
        assert op_norm(convolution(A, T, S).H - convolution(A, T.H, S.H)) < 1e-10


def test_convolution_trivial_scalars():
    A = trivial_algebra(builtin('Fib'))
    U = A.X
    a, b = 2 - 1j, 0.5 + 3j
    T = BlockDiag(U.labels, (np.array([[a]]),))
    S = BlockDiag(U.labels, (np.array([[b]]),))
    assert convolution(A, T, S).blocks[0][0, 0] == pytest.approx(a * b)


def test_convolution_accepts_tree_morphisms(rng):
    A = repz2_regular()
    T = random_endblock(A.X, rng)
    out = convolution(A, hs.from_endblock(A.X, T), hs.identity(A.X))
    assert op_norm(hs.as_endblock(out) - convolution(A, T, BlockDiag.identity(T.labels, T.sizes))) < 1e-12


def test_strict_positivity():
    for name in ALGEBRA_FIXTURES:
        assert strict_positivity_mm(fixture(name)), name
    A = trivial_algebra(builtin('Hilb'))
    assert np.allclose(hs.compose(A.m, A.comult).blocks['1'], [[1]])


def test_strict_positivity_flags_broken_unit():
    A = repz2_regular()
    m = A.m.from_vector(A.m.to_vector() * np.array([1, 1, 0.01, 0.01]))
    # the channels into - almost vanish: mm* is no longer bounded below by 1/alpha
    assert not strict_positivity_mm(AlgebraObject(A.X, m, A.iota))


# -- rigidity ----------------------------------------------------------------------------------

def test_ce2_not_rigid():
    res = check_rigid_haploid(ce2_repz2_haploid_nonrigid())
    assert not res.ok
    assert res.rank == 1
    assert res.message == 'pairing degenerate, rank 1 of 2'


def test_repz2_rigid():
    res = check_rigid_haploid(repz2_regular())
    assert res.ok
    assert np.linalg.svd(res.pairing, compute_uv=False)[-1] > 0.5
    assert res.conjugate_residual < 1e-8


def test_rigidity_requires_haploid():
    with pytest.raises(NotHaploid):
        check_rigid_haploid(ce1_hilb_nilpotent())


def test_counit_left_inverse():
    A = deform(fib_golden(), BlockDiag(('1', 'tau'), (3 * np.eye(1), 0.5 * np.eye(1))))
    e = counit(A)
    assert abs(hs.compose(e, A.iota).blocks['1'][0, 0] - 1) < 1e-12


@pytest.mark.parametrize('name', ['repz2-regular', 'fib-golden', 'ce2', 'veczn-regular-3', 'ising-1psi'])
def test_rigidity_invariant_under_deformation(name, rng):
    A = fixture(name)
    base = check_rigid_haploid(A).ok
    for _ in range(5):
        assert check_rigid_haploid(deform(A, random_invertible(A.X, rng))).ok == base


def test_ce1_frobenius_form():
    A = ce1_hilb_nilpotent()
    res = frobenius_form_nondegenerate(A, ce1_frobenius_form())
    assert res.ok
    assert np.allclose(res.pairing, [[1, 1], [1, 0]])
    assert not frobenius_form_nondegenerate(A, np.array([1.0, 0.0])).ok
    assert frobenius_form_nondegenerate(trivial_algebra(builtin('Hilb')), np.array([1.0])).ok


# -- semisimplicity ----------------------------------------------------------------------------

def test_semisimplicity():
    ok, G = semisimplicity_check(ce1_hilb_nilpotent())
    assert not ok
    assert np.allclose(G, [[2, 0], [0, 0]])
    assert semisimplicity_check(repz2_regular())[0]
    assert semisimplicity_check(trivial_algebra(builtin('Hilb')))[0]


def test_semisimplicity_unsupported():
    with pytest.raises(UnsupportedAmbient):
        semisimplicity_check(fib_golden())


# -- the special / Frobenius lemma on a small sample --------------------------------------------

def test_special_iff_frobenius_sample(rng):
    tol = 1e-8
    for name in ['repz2-regular', 'fib-golden', 'veczn-regular-3', 'ce2', 'ising-1psi']:
        A = fixture(name)
        for B in (A, deform(A, random_invertible(A.X, rng))):
            assert (check_frobenius(B) < tol) == (check_special(B)[0] < tol)
        if check_rigid_haploid(A).ok:
            Q, _ = unitarize(deform(A, random_psd(A.X, rng) + BlockDiag.identity(A.X.labels, [1] * len(A.X.labels))))
            assert check_frobenius(Q) < tol and check_special(Q)[0] < tol
