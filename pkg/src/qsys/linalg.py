"""Dense complex matrix kernel.

Every tolerance used by the rest of the package lives here. Matrices are plain
``complex128`` numpy arrays; :class:`BlockDiag` bundles one square block per
simple label and is the coordinate form of ``Hom(X, X)``.
"""
from __future__ import annotations

from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import NoConvergence, NonHermitian, NotPSD, Singular

TOL_MORPHISM = 1e-9  # equalities of morphisms
TOL_DERIVED = 1e-8  # derived quantities (scalars, residuals of composites)
TOL_HERM = 1e-10
TOL_CLAMP = 1e-10  # eigenvalues in (-TOL_CLAMP, 0) are rounding noise
TOL_NOT_PSD = 1e-8


def as_cmatrix(M) -> np.ndarray:
    """Return ``M`` as a finite 2D complex array (copy-free when possible)."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise ValueError(f'expected a matrix, got shape {A.shape}')
    if not np.all(np.isfinite(A)):
        raise ValueError('matrix has non-finite entries')
    return A


def op_norm(M) -> float:
    """Spectral norm; for a :class:`BlockDiag` the maximum over its blocks."""
    if isinstance(M, BlockDiag):
        return max((op_norm(b) for b in M.blocks), default=0.0)
    A = np.asarray(M, dtype=complex)
    if A.size == 0:
        return 0.0
    if A.ndim == 1:
        return float(np.linalg.norm(A))
    return float(np.linalg.norm(A, 2))


def herm_eig(M, tol: float = TOL_HERM) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition ``M = V diag(w) V^dagger`` of a Hermitian matrix.

    Eigenvalues are returned in ascending order.

    Raises
    ------
    NonHermitian
        If ``||M - M^dagger||_op >= tol``.
    """
    A = as_cmatrix(M)
    if A.shape[0] != A.shape[1]:
        raise NonHermitian(f'non-square matrix {A.shape}')
    skew = op_norm(A - A.conj().T)
    if skew >= tol:
        raise NonHermitian(f'||M - M^*|| = {skew:.3e}')
    w, V = np.linalg.eigh(0.5 * (A + A.conj().T))
    return w, V


def _clamped_eig(M) -> tuple[np.ndarray, np.ndarray]:
    w, V = herm_eig(M)
    if w.size and w[0] < -TOL_NOT_PSD:
        raise NotPSD(f'minimal eigenvalue {w[0]:.3e}')
    return np.where(w < TOL_CLAMP, np.maximum(w, 0.0), w), V


def psd_sqrt(M) -> np.ndarray:
    """Positive square root of a positive semi-definite matrix."""
    w, V = _clamped_eig(M)
    return (V * np.sqrt(w)) @ V.conj().T


def psd_inv_sqrt(M) -> np.ndarray:
    w, V = _clamped_eig(M)
    if w.size and w[0] <= TOL_CLAMP:
        raise Singular('matrix is not strictly positive')
    return (V / np.sqrt(w)) @ V.conj().T


def min_eigenvalue(M) -> float:
    A = as_cmatrix(M)
    if A.size == 0:
        return np.inf
    return float(np.linalg.eigvalsh(0.5 * (A + A.conj().T))[0])


def is_psd(M, tol: float = TOL_CLAMP) -> bool:
    return min_eigenvalue(M) > -tol


def polar(M) -> tuple[np.ndarray, np.ndarray]:
    """Polar decomposition ``M = U P`` with ``U`` unitary and ``P = sqrt(M^dagger M)``.

    Raises
    ------
    Singular
        If the smallest singular value of ``M`` is ``<= 1e-10``.
    """
    A = as_cmatrix(M)
    if A.shape[0] != A.shape[1]:
        raise Singular(f'non-square matrix {A.shape}')
    if A.size and np.linalg.svd(A, compute_uv=False)[-1] <= 1e-10:
        raise Singular('matrix is not invertible')
    AhA = A.conj().T @ A
    P = psd_sqrt(0.5 * (AhA + AhA.conj().T))
    U = A @ psd_inv_sqrt(0.5 * (AhA + AhA.conj().T))
    return U, P


def is_invertible(M, rel_tol: float = 1e-9) -> bool:
    A = as_cmatrix(M)
    if A.shape[0] != A.shape[1]:
        return False
    if A.size == 0:
        return True
    s = np.linalg.svd(A, compute_uv=False)
    return bool(s[-1] > rel_tol * s[0])


@dataclass(frozen=True)
class BlockDiag:
    """Block-diagonal matrix, one square block per simple label.

    The central projections of ``Hom(X, X)`` are the block indicators.
    """

    labels: tuple
    blocks: tuple

    def __post_init__(self):
        if len(self.labels) != len(self.blocks):
            raise ValueError('one block per label required')
        blocks = tuple(as_cmatrix(b) for b in self.blocks)
        for b in blocks:
            if b.shape[0] != b.shape[1]:
                raise ValueError(f'non-square block {b.shape}')
        object.__setattr__(self, 'labels', tuple(self.labels))
        object.__setattr__(self, 'blocks', blocks)

    @classmethod
    def identity(cls, labels: Sequence, sizes: Sequence[int]) -> BlockDiag:
        return cls(tuple(labels), tuple(np.eye(n, dtype=complex) for n in sizes))

    @classmethod
    def zeros(cls, labels: Sequence, sizes: Sequence[int]) -> BlockDiag:
        return cls(tuple(labels), tuple(np.zeros((n, n), dtype=complex) for n in sizes))

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(b.shape[0] for b in self.blocks)

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.blocks)

    def __len__(self):
        return len(self.blocks)

    def block(self, label) -> np.ndarray:
        return self.blocks[self.labels.index(label)]

    def _check(self, other: BlockDiag):
        if self.labels != other.labels or self.sizes != other.sizes:
            raise ValueError('incompatible block structures')

    def __add__(self, other: BlockDiag) -> BlockDiag:
        self._check(other)
        return BlockDiag(self.labels, tuple(a + b for a, b in zip(self.blocks, other.blocks)))

    def __sub__(self, other: BlockDiag) -> BlockDiag:
        self._check(other)
        return BlockDiag(self.labels, tuple(a - b for a, b in zip(self.blocks, other.blocks)))

    def __mul__(self, c) -> BlockDiag:
        return BlockDiag(self.labels, tuple(c * b for b in self.blocks))

    __rmul__ = __mul__

    def __truediv__(self, c) -> BlockDiag:
        return BlockDiag(self.labels, tuple(b / c for b in self.blocks))

    def __matmul__(self, other: BlockDiag) -> BlockDiag:
        self._check(other)
        return BlockDiag(self.labels, tuple(a @ b for a, b in zip(self.blocks, other.blocks)))

    @property
    def H(self) -> BlockDiag:
        return BlockDiag(self.labels, tuple(b.conj().T for b in self.blocks))

    def inner(self, other: BlockDiag) -> complex:
        """Hilbert-Schmidt inner product, antilinear in ``self``."""
        self._check(other)
        return complex(sum(np.vdot(a, b) for a, b in zip(self.blocks, other.blocks)))

    def to_vector(self) -> np.ndarray:
        return np.concatenate([b.ravel() for b in self.blocks]) if self.blocks else np.zeros(0, complex)

    def from_vector(self, v) -> BlockDiag:
        out, pos = [], 0
        for n in self.sizes:
            out.append(np.asarray(v[pos:pos + n * n], dtype=complex).reshape(n, n))
            pos += n * n
        return BlockDiag(self.labels, tuple(out))

    def map_blocks(self, fn: Callable[[np.ndarray], np.ndarray]) -> BlockDiag:
        return BlockDiag(self.labels, tuple(fn(b) for b in self.blocks))

    def min_eigenvalue(self) -> float:
        return min((min_eigenvalue(b) for b in self.blocks), default=np.inf)

    def is_psd(self, tol: float = TOL_CLAMP) -> bool:
        return self.min_eigenvalue() > -tol

    def is_scalar(self, tol: float = TOL_DERIVED) -> tuple[bool, complex]:
        """Whether ``self`` is ``c * 1`` and the least-squares ``c``."""
        dim = sum(self.sizes)
        c = sum(np.trace(b) for b in self.blocks) / dim if dim else 0.0
        ident = BlockDiag.identity(self.labels, self.sizes)
        return op_norm(self - c * ident) < tol * max(1.0, abs(c)), complex(c)


@dataclass
class PowerIteration:
    """Result of :func:`power_iterate`; unpacks as ``(direction, rate)``."""

    direction: BlockDiag
    rate: float
    iterations: int
    residual: float = field(default=np.nan)

    def __iter__(self):
        return iter((self.direction, self.rate))


def power_iterate(L: Callable[[BlockDiag], BlockDiag], start: BlockDiag,
                  max_iter: int = 10_000, tol: float = 1e-12) -> PowerIteration:
    """Leading eigen-direction of a positive map by iterating ``id + L``.

    Adding the identity kills the peripheral spectrum of an irreducible positive
    map, so the iteration converges to the Perron-Frobenius direction even when
    ``L`` itself has several eigenvalues on its spectral circle. The direction is
    renormalized to operator norm one after every step; ``rate`` is the
    eigenvalue of ``L`` (not of ``id + L``).

    Raises
    ------
    NoConvergence
        If ``||L(V) - rate V||_op >= tol`` after ``max_iter`` steps.
    """
    nrm = op_norm(start)
    if nrm == 0:
        raise ValueError('start vector must be nonzero')
    V = start / nrm
    LV = L(V)
    res = np.inf
    for it in range(1, max_iter + 1):
        W = V + LV
        V = W / op_norm(W)
        LV = L(V)
        rate = (V.inner(LV) / V.inner(V)).real
        res = op_norm(LV - rate * V)
        if res < tol:
            return PowerIteration(V, float(rate), it, res)
    raise NoConvergence(f'power iteration: residual {res:.3e} after {max_iter} steps')
