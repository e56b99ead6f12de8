"""Deform a haploid rigid algebra into a normalized standard Q-system.

Pipeline: Perron-Frobenius eigenvector ``T`` of ``Phi(T) = T * 1_X`` on
End(X), the identity ``T * T = gamma T``, deformation by ``S = sqrt(T)``, then
normalization of the unit. The result is certified by recomputing every axiom.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import homspace as hs
from .algebra import (AlgebraObject, check_associative, check_commutative, check_frobenius,
                      check_haploid, check_normalized, check_rigid_haploid, check_special,
                      check_unit, convolution, deform, normalize_algebra, unit_multiplicity,
                      unit_scalar)
from .category import SumObject, compute_simple_twist
from .errors import (ConvolutionIdempotenceFailed, NoConvergence, NotHaploid, NotRigid,
                     NumericalFailure)
from .linalg import (TOL_DERIVED, TOL_MORPHISM, BlockDiag, PowerIteration, op_norm,
                     power_iterate, psd_sqrt)

TOL_LAMBDA = 1e-7


def object_dimension(X: SumObject) -> float:
    return X.dim()


def phi(A: AlgebraObject, T):
    """``Phi(T) = T * 1_X``."""
    X = A.X
    ident = BlockDiag.identity(X.labels, [m for _, m in X.summands])
    return convolution(A, T, ident if isinstance(T, BlockDiag) else hs.identity(X))


def phi_matrix(A: AlgebraObject) -> np.ndarray:
    """Matrix of ``Phi`` on the flattened blocks of End(X), built by probing."""
    def run():
        X = A.X
        ref = BlockDiag.zeros(X.labels, [m for _, m in X.summands])
        n = ref.to_vector().size
        cols = []
        for k in range(n):
            e = np.zeros(n, dtype=complex)
            e[k] = 1
            cols.append(phi(A, ref.from_vector(e)).to_vector())
        return np.array(cols).T
    return A.memo('phi_matrix', run)


def _dense_pf(M: np.ndarray, ref: BlockDiag) -> tuple[BlockDiag, float]:
    w, V = np.linalg.eig(M)
    k = int(np.argmax(w.real))
    T = ref.from_vector(V[:, k])
    # fix the phase so the direction is positive
    tr = sum(np.trace(b) for b in T.blocks)
    T = T * (abs(tr) / tr if abs(tr) > 0 else 1.0)
    return T / op_norm(T), float(w[k].real)


def _predicted_steps(M: np.ndarray, tol: float) -> float:
    """Rough step count of the ``id + Phi`` iteration from the spectral gap of ``M``."""
    w = np.sort(np.abs(1 + np.linalg.eigvals(M)))[::-1]
    if w.size < 2 or w[1] == 0:
        return 1.0
    ratio = w[1] / w[0]
    if ratio >= 1 - 1e-12:
        return np.inf
    return np.log(tol) / np.log(ratio)


def pf_eigen(A: AlgebraObject, tol: float = 1e-13, max_iter: int = 20_000) -> PowerIteration:
    """Strictly positive ``T`` with ``Phi(T) = rate T`` and ``||T||_op = 1``.

    Power iteration on ``id + Phi/rho`` from ``1_X``, where ``rho`` is Phi's
    spectral radius, so ``tol`` is relative to the scale of the algebra. A dense
    eigensolve of Phi's matrix is the fallback if the iteration stalls or the
    spectral gap predicts more than ``max_iter`` steps. The dense path reports
    zero iterations. The reported residual is relative as well.

    Raises
    ------
    NotHaploid, NotRigid, NoConvergence
    """
    if not check_haploid(A):
        raise NotHaploid(f'Hom(1,X) has dimension {unit_multiplicity(A)}')
    rig = check_rigid_haploid(A)
    if not rig:
        raise NotRigid(rig.message, witness=rig.pairing)
    X = A.X
    start = BlockDiag.identity(X.labels, [m for _, m in X.summands])
    M = phi_matrix(A)
    rho = float(np.max(np.abs(np.linalg.eigvals(M)))) or 1.0
    M = M / rho

    def L(V):
        return V.from_vector(M @ V.to_vector())

    try:
        if _predicted_steps(M, tol) > max_iter:
            raise NoConvergence('power iteration would stall; using the dense eigensolve')
        res = power_iterate(L, start, max_iter=max_iter, tol=tol)
        T = res.direction
    except NoConvergence:
        T, rate = _dense_pf(M, start)
        r = op_norm(L(T) - rate * T)
        if r >= max(tol, 1e-11):
            raise
        res = PowerIteration(T, rate, 0, r)  # zero iterations marks the dense path
    res.rate *= rho
    T = T.map_blocks(lambda b: 0.5 * (b + b.conj().T))
    T = T / op_norm(T)
    if T.min_eigenvalue() <= 1e-10:
        raise NumericalFailure(f'Perron-Frobenius direction not strictly positive '
                               f'(min eigenvalue {T.min_eigenvalue():.3e})')
    res.direction = T
    return res


@dataclass
class QSystemCertificate:
    """Outcome of :func:`unitarize`.

    ``S`` is the total deformer, so ``A_S = deform(A, S)`` is the certified Q-system.
    """

    S: BlockDiag
    lam: float
    dX: float
    gamma: float
    residuals: dict
    pf_iterations: int
    pf_rate: float
    idempotence_residual: float
    algebra: str = ''
    extra: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return (all(r < TOL_DERIVED for r in self.residuals.values())
                and abs(self.lam - self.dX) < TOL_LAMBDA and self.S.min_eigenvalue() > 0)

    def to_dict(self) -> dict:
        return {
            'algebra': self.algebra,
            'valid': self.valid,
            'lambda': self.lam,
            'dX': self.dX,
            'gamma': self.gamma,
            'idempotence_residual': self.idempotence_residual,
            'pf_iterations': self.pf_iterations,
            'pf_rate': self.pf_rate,
            'residuals': dict(self.residuals),
            'S': {a: [[[z.real, z.imag] for z in row] for row in b]
                  for a, b in zip(self.S.labels, self.S.blocks)},
            **self.extra,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def check_twist_trivial(A: AlgebraObject, tol: float = TOL_MORPHISM) -> bool:
    return all(abs(compute_simple_twist(A.category, a) - 1) < tol for a in A.X.labels)


def certify(A: AlgebraObject, commutative: bool | None = None) -> dict:
    """Recompute every Q-system residual of ``A``."""
    out = {
        'associative': check_associative(A),
        'unit': check_unit(A),
        'frobenius': check_frobenius(A),
        'special': check_special(A)[0],
        'normalized': check_normalized(A),
    }
    if commutative:
        out['commutative'] = check_commutative(A)
        twist = max(abs(compute_simple_twist(A.category, a) - 1) for a in A.X.labels)
        out['twist'] = twist
    return {k: float(v) for k, v in out.items()}


def unitarize(A: AlgebraObject, tol: float = TOL_DERIVED) -> tuple[AlgebraObject, QSystemCertificate]:
    """Deform a haploid rigid algebra into an equivalent normalized standard Q-system.

    Returns
    -------
    A_S : AlgebraObject
    cert : QSystemCertificate

    Raises
    ------
    NotHaploid, NotRigid
        Input outside the theorem's hypotheses.
    ConvolutionIdempotenceFailed
        ``T * T`` is not proportional to ``T``; only possible for invalid input.
    NumericalFailure
        A recomputed residual exceeds its tolerance.
    """
    if not check_haploid(A):
        raise NotHaploid(f'Hom(1,X) has dimension {unit_multiplicity(A)}')
    for name, r in (('associative', check_associative(A)), ('unit', check_unit(A))):
        if r >= tol:
            raise NumericalFailure(f'input is not an algebra: {name} residual {r:.3e}')
    pf = pf_eigen(A)
    T = pf.direction
    TT = convolution(A, T, T)
    gamma = (T.inner(TT) / T.inner(T)).real
    idem = op_norm(TT - gamma * T) / max(1.0, abs(gamma))
    if idem >= TOL_MORPHISM:
        raise ConvolutionIdempotenceFailed(f'||T*T - gamma T|| / |gamma| = {idem:.3e}')
    S = T.map_blocks(psd_sqrt)
    alpha = unit_scalar(deform(A, S)).real
    S_total = S * np.sqrt(alpha)
    A_S = normalize_algebra(deform(A, S, name=A.name))
    commutative = A.category.is_braided and check_commutative(A) < tol
    res = certify(A_S, commutative)
    lam = check_special(A_S)[1]
    dX = object_dimension(A.X)
    cert = QSystemCertificate(S_total, lam, dX, float(gamma), res, pf.iterations, pf.rate, idem,
                              algebra=A.name)
    bad = {k: v for k, v in res.items() if v >= tol}
    if bad:
        raise NumericalFailure(f'unitarized algebra fails {sorted(bad)}: {bad}')
    if abs(lam - dX) >= TOL_LAMBDA:
        raise NumericalFailure(f'specialness scalar {lam} differs from d(X) = {dX}')
    return A_S, cert
