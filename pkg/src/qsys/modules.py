"""Left modules over algebra objects: representation, unitarity and locality checks."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import homspace as hs
from .algebra import AlgebraObject, check_commutative, check_special
from .category import SumObject
from .errors import NoBraiding, NotCommutative, ShapeMismatch
from .homspace import TreeMorphism, compose, dagger, identity, tensor
from .linalg import TOL_DERIVED, BlockDiag, op_norm


@dataclass(eq=False)
class AModule:
    """Left ``A``-module ``(Y, m_Y)`` with ``m_Y: X Y -> Y``."""

    A: AlgebraObject
    Y: SumObject
    mY: TreeMorphism
    name: str = ''

    def __post_init__(self):
        if self.mY.source != (self.A.X, self.Y) or self.mY.target != self.Y:
            raise ShapeMismatch('m_Y must be a morphism X (x) Y -> Y')


def free_module(A: AlgebraObject) -> AModule:
    return AModule(A, A.X, A.m, name='free')


def check_module(M: AModule) -> float:
    """Representation residual plus unit residual."""
    X, Y, mY, A = M.A.X, M.Y, M.mY, M.A
    lhs = compose(mY, compose(tensor(identity(X), mY), hs.associator_inv(X, X, Y)))
    rhs = compose(mY, tensor(A.m, identity(Y)))
    unit = compose(mY, tensor(A.iota, identity(Y))) - hs.unitor(Y, 'left')
    return (lhs - rhs).norm() + unit.norm()


@dataclass
class UnitaryModuleResult:
    ok: bool
    residual: float
    scalar: float
    algebra_scalar: float

    def __bool__(self):
        return self.ok

    def __iter__(self):
        return iter((self.residual, self.scalar))


def check_unitary_module(M: AModule, tol: float = TOL_DERIVED) -> UnitaryModuleResult:
    """``m_Y m_Y^*`` must be the scalar of ``m m^*``; unpacks as ``(residual, scalar)``."""
    B = hs.as_endblock(compose(M.mY, dagger(M.mY)))
    c = float(sum(np.trace(b) for b in B.blocks).real / sum(B.sizes))
    res = op_norm(B - c * BlockDiag.identity(B.labels, B.sizes))
    lam = check_special(M.A)[1]
    return UnitaryModuleResult(bool(res < tol and abs(c - lam) < 1e-7), res, c, lam)


def check_local_module(M: AModule, tol: float = TOL_DERIVED) -> float:
    """``||m_Y b_{Y,X} b_{X,Y} - m_Y||``.

    Raises
    ------
    NoBraiding
    NotCommutative
        Locality is only defined over commutative algebras.
    """
    if not M.A.category.is_braided:
        raise NoBraiding('locality needs a braided ambient')
    if check_commutative(M.A) >= tol:
        raise NotCommutative(f'algebra {M.A.name or "A"} is not commutative '
                             f'(residual {check_commutative(M.A):.3e})')
    return (hs.monodromy_precompose(M.mY) - M.mY).norm()


def conjugate_module(M: AModule, S) -> AModule:
    """Transport the action along an invertible ``S`` in End(Y): ``S^-1 m_Y (1 x S)``."""
    S = hs.endo(M.Y, S)
    Sinv = hs.from_endblock(M.Y, hs.as_endblock(S).map_blocks(np.linalg.inv))
    return AModule(M.A, M.Y, compose(Sinv, compose(M.mY, tensor(identity(M.A.X), S))), name=M.name)
