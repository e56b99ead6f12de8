import numpy as np
import pytest

from conftest import random_complex, random_hermitian
from qsys.errors import NoConvergence, NonHermitian, NotPSD, Singular
from qsys.linalg import (BlockDiag, herm_eig, is_invertible, min_eigenvalue, op_norm, polar,
                         power_iterate, psd_inv_sqrt, psd_sqrt)


def test_herm_eig_identity():
    w, V = herm_eig(np.eye(2))
    assert np.allclose(w, [1, 1])


def test_herm_eig_diagonal_ascending():
    w, _ = herm_eig(np.diag([2.0, 0.0]))
    assert np.allclose(w, [0, 2])


def test_herm_eig_reconstructs(rng):
    for _ in range(20):
        M = random_hermitian(rng, 5)
        w, V = herm_eig(M)
        assert op_norm((V * w) @ V.conj().T - M) < 1e-9
        assert np.all(np.diff(w) >= 0)


def test_herm_eig_rejects_nonhermitian():
    with pytest.raises(NonHermitian):
        herm_eig(np.array([[0, 1], [0, 0]]))


def test_psd_sqrt_examples(rng):
    assert np.allclose(psd_sqrt(np.eye(3)), np.eye(3))
    assert np.allclose(psd_sqrt(np.diag([4.0, 1.0])), np.diag([2, 1]))
    A = random_complex(rng, 3, 3)
    M = A.conj().T @ A
    R = psd_sqrt(M)
    assert op_norm(R @ R - M) < 1e-8
    assert op_norm(R - R.conj().T) < 1e-12
    assert min_eigenvalue(R) > -1e-10


def test_psd_sqrt_scaling(rng):
    A = random_complex(rng, 4, 4)
    M = A @ A.conj().T
    for c in (0.1, 2.0, 7.5):
        assert op_norm(psd_sqrt(c ** 2 * M) - c * psd_sqrt(M)) < 1e-9 * max(1, c * op_norm(psd_sqrt(M)))


def test_psd_sqrt_clamps_rounding_noise():
    R = psd_sqrt(np.diag([1.0, -5e-11]))
    assert np.allclose(R, np.diag([1, 0]))


def test_psd_sqrt_rejects_negative():
    with pytest.raises(NotPSD):
        psd_sqrt(np.diag([1.0, -1e-3]))


def test_psd_inv_sqrt(rng):
    A = random_complex(rng, 3, 3)
    M = A @ A.conj().T + np.eye(3)
    R = psd_inv_sqrt(M)
    assert op_norm(R @ M @ R - np.eye(3)) < 1e-9
    with pytest.raises(Singular):
        psd_inv_sqrt(np.diag([1.0, 0.0]))


def test_polar_examples(rng):
    Q, _ = np.linalg.qr(random_complex(rng, 3, 3))
    U, P = polar(Q)
    assert op_norm(U - Q) < 1e-9 and op_norm(P - np.eye(3)) < 1e-9
    U, P = polar(np.diag([3.0, 2.0]))
    assert np.allclose(U, np.eye(2)) and np.allclose(P, np.diag([3, 2]))


def test_polar_random(rng):
    for _ in range(20):
        M = random_complex(rng, 4, 4)
        U, P = polar(M)
        assert op_norm(U.conj().T @ U - np.eye(4)) < 1e-9
        assert op_norm(U @ P - M) < 1e-9
        assert op_norm(P - psd_sqrt(M.conj().T @ M)) < 1e-9


def test_polar_singular():
    with pytest.raises(Singular):
        polar(np.array([[1, 1], [1, 1]]))


def test_op_norm_examples(rng):
    assert op_norm(np.eye(4)) == pytest.approx(1)
    assert op_norm(np.diag([2.0, -3.0])) == pytest.approx(3)
    M = random_complex(rng, 5, 5)
    v = random_complex(rng, 5)
    for _ in range(500):
        v = M.conj().T @ (M @ v)
        v /= np.linalg.norm(v)
    assert op_norm(M) == pytest.approx(np.linalg.norm(M @ v), abs=1e-8)


def test_op_norm_blockdiag():
    B = BlockDiag(('a', 'b'), (np.eye(1), np.diag([2.0, -5.0])))
    assert op_norm(B) == pytest.approx(5)


def test_is_invertible():
    assert is_invertible(np.eye(2))
    assert not is_invertible(np.array([[1, 2], [2, 4]]))


def test_blockdiag_algebra(rng):
    B = BlockDiag(('a', 'b'), (random_complex(rng, 1, 1), random_complex(rng, 2, 2)))
    C = BlockDiag(('a', 'b'), (random_complex(rng, 1, 1), random_complex(rng, 2, 2)))
    assert op_norm((B @ C).H - C.H @ B.H) < 1e-12
    assert op_norm(B.from_vector(B.to_vector()) - B) == 0
    assert op_norm((B + C) - C - B) < 1e-12
    assert np.isclose(B.inner(C), np.vdot(B.to_vector(), C.to_vector()))
    I = BlockDiag.identity(('a', 'b'), (1, 2))
    assert I.is_scalar()[0] and I.is_psd()


def test_power_iterate_identity_map():
    start = BlockDiag.identity(('a', 'b'), (1, 2))
    res = power_iterate(lambda V: V, start)
    assert res.rate == pytest.approx(1)
    assert op_norm(res.direction - start) < 1e-12


def test_power_iterate_scalar_map():
    start = BlockDiag.identity(('a',), (2,))
    V, rate = power_iterate(lambda V: 3 * V, start)
    assert rate == pytest.approx(3)
    assert op_norm(V) == pytest.approx(1)


def test_power_iterate_peripheral_spectrum():
    # swap of two blocks: eigenvalues +1 and -1, plain iteration would oscillate
    start = BlockDiag(('a', 'b'), (np.eye(1), 2 * np.eye(1)))
    res = power_iterate(lambda V: BlockDiag(V.labels, (V.blocks[1], V.blocks[0])), start)
    assert res.rate == pytest.approx(1)
    assert res.direction.min_eigenvalue() > 0


def test_power_iterate_positive_map_gives_positive_direction(rng):
    labels, sizes = ('a', 'b'), (2, 1)
    K = [random_complex(rng, 3, 3) for _ in range(3)]

    def L(V):
        # Kraus-form map on the 3x3 block embedding, projected back onto the blocks
        full = np.zeros((3, 3), complex)
        full[:2, :2], full[2:, 2:] = V.blocks
        out = sum(k @ full @ k.conj().T for k in K)
        return BlockDiag(labels, (out[:2, :2], out[2:, 2:]))

    res = power_iterate(L, BlockDiag.identity(labels, sizes))
    assert op_norm(L(res.direction) - res.rate * res.direction) < 1e-12
    assert res.direction.min_eigenvalue() > 0


def test_power_iterate_no_convergence():
    start = BlockDiag(('a',), (np.diag([1.0, 1.0]),))
    # rotation with complex spectrum never settles on a real rate
    R = np.array([[0, -1], [1, 0]], dtype=complex)
    with pytest.raises(NoConvergence):
        power_iterate(lambda V: BlockDiag(V.labels, (R @ V.blocks[0] @ R.conj().T * 1j,)), start,
                      max_iter=50)


def test_power_iterate_zero_start():
    with pytest.raises(ValueError):
        power_iterate(lambda V: V, BlockDiag.zeros(('a',), (1,)))
