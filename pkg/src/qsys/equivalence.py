"""Equivalences of algebras, the unitarity test, and heuristic least-squares solvers.

The solvers are search heuristics: a ``NotFound`` or an empty search result is
flagged ``no_certificate`` and proves nothing.
"""
from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from . import homspace as hs
from .algebra import (AlgebraObject, check_associative, check_commutative, check_haploid,
                      check_normalized, check_rigid_haploid, check_special, check_unit)
from .category import SumObject
from .errors import PreconditionFailed, QSysError
from .homspace import TreeMorphism, compose, tensor
from .linalg import TOL_DERIVED, BlockDiag, op_norm

TOL_UNITARY = 1e-7
DEFAULT_RESTARTS = 32


def verify_equivalence(S, A: AlgebraObject, B: AlgebraObject) -> dict:
    """Residuals ``{'mult': ||S m - n (S x S)||, 'unit': ||S iota - j||}``."""
    Sm = hs.endo(A.X, S) if A.X == B.X else S
    mult = compose(Sm, A.m) - compose(B.m, tensor(Sm, Sm))
    unit = compose(Sm, A.iota) - B.iota
    return {'mult': mult.norm(), 'unit': unit.norm()}


def assert_unitary_equivalence(S, A: AlgebraObject, B: AlgebraObject, tol: float = TOL_DERIVED) -> bool:
    """Check ``S^* S = 1`` for an equivalence between normalized haploid Q-systems.

    Raises
    ------
    PreconditionFailed
        Names the first failing hypothesis (``normalized``, ``haploid``,
        ``special`` or ``equivalence``).
    """
    for which, C in (('A', A), ('B', B)):
        if not check_haploid(C):
            raise PreconditionFailed(f'{which} is not haploid', check='haploid')
        if check_normalized(C) >= tol:
            raise PreconditionFailed(f'{which} is not normalized', check='normalized')
        if check_special(C)[0] >= tol:
            raise PreconditionFailed(f'{which} is not special', check='special')
    res = verify_equivalence(S, A, B)
    if max(res.values()) >= tol:
        raise PreconditionFailed(f'S is not an equivalence: {res}', check='equivalence')
    B_ = S if isinstance(S, BlockDiag) else hs.as_endblock(S)
    return unitarity_defect(B_) < TOL_UNITARY


def unitarity_defect(S: BlockDiag) -> float:
    return op_norm(S.H @ S - BlockDiag.identity(S.labels, S.sizes))


# -- least squares over holomorphic quadratic residuals ----------------------------------------

@dataclass
class QuadraticModel:
    """``r(z) = c + L z + Q(z, z)`` for a holomorphic residual map of degree <= 2.

    Extracted once by probing, after which residuals and exact Jacobians cost a
    few dense products; this keeps many random restarts affordable.
    """

    c: np.ndarray
    L: np.ndarray
    Q: np.ndarray  # symmetric in its last two axes

    @classmethod
    def probe(cls, fun: Callable, n: int) -> QuadraticModel:
        c = fun(np.zeros(n, dtype=complex))
        E = np.eye(n, dtype=complex)
        plus = [fun(E[i]) for i in range(n)]
        minus = [fun(-E[i]) for i in range(n)]
        L = np.array([(p - q) / 2 for p, q in zip(plus, minus)]).T
        diag = [(p + q) / 2 - c for p, q in zip(plus, minus)]
        Q = np.zeros((c.size, n, n), dtype=complex)
        for i in range(n):
            Q[:, i, i] = diag[i]
            for j in range(i + 1, n):
                off = (fun(E[i] + E[j]) - c - L[:, i] - L[:, j] - diag[i] - diag[j]) / 2
                Q[:, i, j] = Q[:, j, i] = off
        return cls(c, L, Q)

    def __call__(self, z):
        return self.c + self.L @ z + np.einsum('kij,i,j->k', self.Q, z, z)

    def jacobian(self, z):
        return self.L + 2 * np.einsum('kij,j->ki', self.Q, z)


def _solve_holomorphic(model: QuadraticModel, z0: np.ndarray, max_nfev: int = 200):
    """Minimise ``||model(z)||`` over complex ``z`` with a real Levenberg-Marquardt solver."""
    n = z0.size

    def split(x):
        return x[:n] + 1j * x[n:]

    def res(x):
        r = model(split(x))
        return np.concatenate([r.real, r.imag])

    def jac(x):
        J = model.jacobian(split(x))
        return np.block([[J.real, -J.imag], [J.imag, J.real]])

    x0 = np.concatenate([z0.real, z0.imag])
    method = 'lm' if model.c.size >= n else 'trf'
    out = least_squares(res, x0, jac=jac, method=method, xtol=1e-15, ftol=1e-15, gtol=1e-15,
                        max_nfev=max_nfev)
    return split(out.x)


@dataclass
class Intertwiner:
    S: BlockDiag
    source: AlgebraObject
    target: AlgebraObject
    residuals: dict
    restart: int

    @property
    def ok(self) -> bool:
        return max(self.residuals.values()) < TOL_DERIVED

    def __bool__(self):
        return self.ok


@dataclass
class NotFound:
    """No intertwiner was found; this does not certify inequivalence."""

    restarts: int
    best_residual: float
    reason: str = ''
    no_certificate: bool = True

    def __bool__(self):
        return False


def _random_unitary(X: SumObject, rng: np.random.Generator) -> BlockDiag:
    blocks = []
    for _, m in X.summands:
        G = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        q, r = np.linalg.qr(G)
        blocks.append(q * (np.diag(r) / np.abs(np.diag(r))))
    return BlockDiag(X.labels, tuple(blocks))


def _propagate(A: AlgebraObject, B: AlgebraObject, known: dict) -> tuple[dict, list]:
    """Extend ``known`` blocks through channels ``a b -> c`` with ``a, b`` known.

    ``S_c`` follows linearly from ``S_c m_A = m_B (S_a x S_b)`` whenever the
    known channels of ``m_A`` into ``c`` have full row rank. Returns the grown
    dictionary and the labels still missing.
    """
    X = A.X
    seg = hs.basis((X, X)).segments
    known = dict(known)
    pending = [a for a in X.labels if a not in known]
    progress = True
    while progress and pending:
        progress = False
        for c in list(pending):
            lhs, rhs = [], []
            for (a, b), (off, n1, n2, N) in seg.get(c, {}).items():
                if a in known and b in known:
                    cols = slice(off, off + n1 * n2 * N)
                    K = hs.kron(hs.kron(known[a], known[b]), np.eye(N))
                    lhs.append(A.m.blocks[c][:, cols])
                    rhs.append(B.m.blocks[c][:, cols] @ K)
            if lhs:
                MA, MB = np.hstack(lhs), np.hstack(rhs)
                if np.linalg.matrix_rank(MA, tol=1e-8) == MA.shape[0]:
                    # S_c MA = MB  =>  MA^T S_c^T = MB^T
                    known[c] = np.linalg.lstsq(MA.T, MB.T, rcond=None)[0].T
                    pending.remove(c)
                    progress = True
    return known, pending


def _channel_residual(A: AlgebraObject, B: AlgebraObject, blk: dict) -> np.ndarray:
    """``S_t m_A - m_B (S_a x S_b)`` on every channel whose three blocks are in ``blk``."""
    out = []
    for t, sg in hs.basis((A.X, A.X)).segments.items():
        if t not in blk:
            continue
        for (a, b), (off, n1, n2, N) in sg.items():
            if a in blk and b in blk:
                cols = slice(off, off + n1 * n2 * N)
                K = hs.kron(hs.kron(blk[a], blk[b]), np.eye(N))
                out.append((blk[t] @ A.m.blocks[t][:, cols] - B.m.blocks[t][:, cols] @ K).ravel())
    return np.concatenate(out) if out else np.zeros(0, dtype=complex)


def _propagated_start(A: AlgebraObject, B: AlgebraObject, rng: np.random.Generator) -> BlockDiag:
    """Initial guess for an intertwiner built block by block.

    The unit block comes from ``S iota = j`` and the rest follows by
    :func:`_propagate`. When propagation is stuck, one missing block is fitted
    by :func:`_reduced_block` and propagation resumes.
    """
    X, cat = A.X, A.category
    known = {}
    u = cat.unit
    if X.mult(u) == 1:
        known[u] = B.iota.blocks[u] / A.iota.blocks[u][0, 0]
    known, pending = _propagate(A, B, known)
    while pending:
        known[pending[0]] = _reduced_block(A, B, known, pending[0], rng)
        known, pending = _propagate(A, B, known)
    return BlockDiag(X.labels, tuple(known[a] for a in X.labels))


def _reduced_block(A: AlgebraObject, B: AlgebraObject, known: dict, c, rng, tries: int = 12) -> np.ndarray:
    """Fit ``S_c`` so that it and everything propagated from it satisfy their channels.

    With no such constraint the block is a random unitary (a free choice).
    """
    mc = A.X.mult(c)
    obj = A.category.obj({c: mc})
    start = _random_unitary(obj, rng).blocks[0]

    def fun_c(z):
        blk, _ = _propagate(A, B, {**known, c: z.reshape(mc, mc)})
        return _channel_residual(A, B, blk)

    if fun_c(start.ravel()).size == 0:
        return start

    def fun(x):
        r = fun_c(x[:mc * mc] + 1j * x[mc * mc:])
        return np.concatenate([r.real, r.imag])

    best, best_r = start, np.inf
    for k in range(tries):
        # later tries spread over magnitudes: unnormalized gauges can be far from unitary
        z0 = start if k == 0 else _random_unitary(obj, rng).blocks[0] * 10.0 ** rng.uniform(-2, 2)
        x0 = np.concatenate([z0.real.ravel(), z0.imag.ravel()])
        method = 'lm' if fun(x0).size >= x0.size else 'trf'
        out = least_squares(fun, x0, method=method, xtol=1e-14, ftol=1e-14, gtol=1e-14, max_nfev=400)
        Z = (out.x[:mc * mc] + 1j * out.x[mc * mc:]).reshape(mc, mc)
        r = np.linalg.norm(out.fun)
        if r < best_r - 1e-12 and np.linalg.svd(Z, compute_uv=False)[-1] > 1e-6:
            best, best_r = Z, r
        if best_r < 1e-12:
            break
    return best


def _same_object(X: SumObject, Y: SumObject) -> bool:
    return X.category is Y.category and X.summands == Y.summands


def solve_intertwiner(A: AlgebraObject, B: AlgebraObject, seed: int = 0,
                      restarts: int = DEFAULT_RESTARTS, tol: float = TOL_DERIVED):
    """Search an invertible ``S`` in End(X) with ``S m = n (S x S)`` and ``S iota = j``.

    Restart 0 starts from the identity, later restarts from seeded random
    invertibles; the lowest restart index that succeeds wins.

    Returns
    -------
    Intertwiner or NotFound
    """
    if not _same_object(A.X, B.X):
        return NotFound(0, np.inf, reason='underlying objects differ')
    X = A.X
    ref = BlockDiag.zeros(X.labels, [m for _, m in X.summands])
    ident = BlockDiag.identity(ref.labels, ref.sizes)
    n = ident.to_vector().size

    def fun(z):
        # unknowns: S and its would-be inverse T, each intertwining in its own
        # direction; S T = 1 keeps the search away from singular S
        Sb, Tb = ref.from_vector(z[:n]), ref.from_vector(z[n:])
        S, T = hs.from_endblock(X, Sb), hs.from_endblock(X, Tb)
        parts = [compose(S, A.m) - compose(B.m, tensor(S, S)), compose(S, A.iota) - B.iota,
                 compose(T, B.m) - compose(A.m, tensor(T, T)), compose(T, B.iota) - A.iota]
        return np.concatenate([p.to_vector() for p in parts] + [(Sb @ Tb - ident).to_vector()])

    model = QuadraticModel.probe(fun, 2 * n)
    rng = np.random.default_rng(seed)
    best = np.inf
    for k in range(restarts):
        S0 = ident if k == 0 else _propagated_start(A, B, rng)
        if min(np.linalg.svd(b, compute_uv=False)[-1] for b in S0.blocks) < 1e-6:
            S0 = _random_unitary(X, rng)
        T0 = S0.map_blocks(np.linalg.inv)
        z = _solve_holomorphic(model, np.concatenate([S0.to_vector(), T0.to_vector()]))
        S = ref.from_vector(z[:n])
        res = verify_equivalence(S, A, B)
        r = max(res.values())
        best = min(best, r)
        if r < tol and all(np.linalg.svd(b, compute_uv=False)[-1] > 1e-9 * op_norm(S) for b in S.blocks):
            return Intertwiner(S, A, B, res, k)
    return NotFound(restarts, best, reason=f'best residual {best:.3e}')


# -- algebra search ----------------------------------------------------------------------------

class SearchResult(list):
    """List of algebras found by :func:`search_algebra`; heuristic, hence ``no_certificate``."""

    def __init__(self, items=(), best_residual=np.inf, restarts=0):
        super().__init__(items)
        self.best_residual = best_residual
        self.restarts = restarts
        self.no_certificate = True


def search_algebra(X: SumObject, haploid: bool = True, commutative: bool = False, rigid: bool = False,
                   seed: int = 0, restarts: int = 16, tol: float = TOL_DERIVED,
                   dedupe_restarts: int = 8) -> SearchResult:
    """Least-squares search for unital associative multiplications on ``X``.

    The unit is fixed to the first unit copy (any injective unit is equivalent
    to this one through an automorphism of ``X``) and the multiplication
    coefficients solve associativity and unitality (plus commutativity if asked).
    Solutions are deduplicated up to equivalence found by
    :func:`solve_intertwiner`; with ``rigid`` only rigid solutions are kept.
    """
    cat = X.category
    if X.total_mult > 50:
        raise ValueError('search_algebra is limited to objects of total multiplicity 50')
    if haploid and X.mult(cat.unit) != 1:
        return SearchResult()
    U = cat.unit_object
    n_unit = X.mult(cat.unit)
    if n_unit == 0:
        return SearchResult()
    m_ref = hs.zeros((X, X), X)
    nm = m_ref.size
    one = hs.identity(X)
    a = hs.associator(X, X, X)
    lu, ru = hs.unitor(X, 'left'), hs.unitor(X, 'right')
    fixed_iota = np.zeros(n_unit, dtype=complex)
    fixed_iota[0] = 1

    iota = TreeMorphism(U, X, {cat.unit: fixed_iota.reshape(-1, 1)})

    def unpack(z):
        return m_ref.from_vector(z), iota

    def fun(z):
        m, i = unpack(z)
        parts = [(compose(m, compose(tensor(m, one), a)) - compose(m, tensor(one, m))).to_vector(),
                 (compose(m, tensor(i, one)) - lu).to_vector(),
                 (compose(m, tensor(one, i)) - ru).to_vector()]
        if commutative:
            parts.append((hs.braid_precompose(m) - m).to_vector())
        return np.concatenate(parts)

    model = QuadraticModel.probe(fun, nm)
    rng = np.random.default_rng(seed)
    found, keys, best = [], [], np.inf
    for k in range(restarts):
        z0 = rng.standard_normal(nm) + 1j * rng.standard_normal(nm)
        z = _solve_holomorphic(model, z0, max_nfev=400)
        m, i = unpack(z)
        A = AlgebraObject(X, m, i, name=f'search-{k}')
        r = check_associative(A) + check_unit(A)
        if commutative:
            r += check_commutative(A)
        best = min(best, r)
        if r >= tol:
            continue
        is_rigid = check_haploid(A) and bool(check_rigid_haploid(A))
        if rigid and not is_rigid:
            continue
        # rigid solutions are compared through their unitarizations, where any
        # equivalence is unitary and hence well conditioned
        key = _unitarized_or_none(A) if is_rigid else None
        key = A if key is None else key
        if any(solve_intertwiner(k, key, seed=seed, restarts=dedupe_restarts) for k in keys):
            continue
        found.append(A)
        keys.append(key)
    return SearchResult(found, best, restarts)


def _unitarized_or_none(A: AlgebraObject):
    from .unitarization import unitarize
    try:
        return unitarize(A)[0]
    except QSysError:
        return None
