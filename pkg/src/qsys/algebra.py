"""Algebra objects ``A = (X, m, iota)`` and their axiom checks.

Every checker returns a residual (an operator norm) rather than a boolean, so
the tolerance applied by the caller is visible. ``TOL_MORPHISM`` and
``TOL_DERIVED`` from :mod:`qsys.linalg` are the defaults used by the boolean
wrappers.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import homspace as hs
from .category import SumObject
from .errors import NotHaploid, ShapeMismatch, UnsupportedAmbient
from .homspace import TreeMorphism, compose, dagger, identity, tensor
from .linalg import TOL_DERIVED, TOL_MORPHISM, BlockDiag, op_norm


@dataclass(eq=False)
class AlgebraObject:
    """Object ``X`` with multiplication ``m: X X -> X`` and unit ``iota: 1 -> X``."""

    X: SumObject
    m: TreeMorphism
    iota: TreeMorphism
    name: str = ''
    _memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        X, U = self.X, self.X.category.unit_object
        if self.m.source != (X, X) or self.m.target != X:
            raise ShapeMismatch('m must be a morphism X (x) X -> X')
        if self.iota.source != U or self.iota.target != X:
            raise ShapeMismatch('iota must be a morphism 1 -> X')
        col = self.iota.blocks.get(X.category.unit)
        if col is None or np.linalg.norm(col) <= 1e-10:
            raise ShapeMismatch('iota must be injective')

    @property
    def category(self):
        return self.X.category

    @property
    def unit_object(self) -> SumObject:
        return self.X.category.unit_object

    def memo(self, key, fn):
        if key not in self._memo:
            self._memo[key] = fn()
        return self._memo[key]

    @property
    def comult(self) -> TreeMorphism:
        return self.memo('comult', lambda: dagger(self.m))


def trivial_algebra(cat) -> AlgebraObject:
    U = cat.unit_object
    return AlgebraObject(U, TreeMorphism((U, U), U, {cat.unit: [[1]]}),
                         identity(U), name='trivial')


def algebra_from_channels(X: SumObject, coeffs: dict, iota=1.0, name='') -> AlgebraObject:
    """Build ``m`` from ``{(src_tree, tgt_tree): value}`` with leaf/node tuples.

    ``iota`` is either a scalar (haploid case) or the column of the unit block.
    """
    m = hs.zeros((X, X), X)
    for (src, tgt), v in coeffs.items():
        m.set_coeff(src, tgt, v)
    U = X.category.unit_object
    col = np.atleast_1d(np.asarray(iota, dtype=complex)).reshape(-1, 1)
    return AlgebraObject(X, m, TreeMorphism(U, X, {X.category.unit: col}), name=name)


# -- basic axioms ------------------------------------------------------------------------------

def check_associative(A: AlgebraObject) -> float:
    """``||m (m x 1) a - m (1 x m)||`` on the right-nested word ``X (X X)``."""
    def run():
        X, m = A.X, A.m
        lhs = compose(m, compose(tensor(m, identity(X)), hs.associator(X, X, X)))
        rhs = compose(m, tensor(identity(X), m))
        return (lhs - rhs).norm()
    return A.memo('associative', run)


def check_unit(A: AlgebraObject) -> float:
    def run():
        X, m, i = A.X, A.m, A.iota
        left = compose(m, tensor(i, identity(X))) - hs.unitor(X, 'left')
        right = compose(m, tensor(identity(X), i)) - hs.unitor(X, 'right')
        return left.norm() + right.norm()
    return A.memo('unit', run)


def unit_multiplicity(A: AlgebraObject) -> int:
    return A.X.mult(A.category.unit)


def check_haploid(A: AlgebraObject) -> bool:
    return unit_multiplicity(A) == 1


def unit_scalar(A: AlgebraObject) -> complex:
    """``alpha = iota^* iota`` (a scalar because the unit is simple)."""
    col = A.iota.blocks[A.category.unit]
    return complex(np.vdot(col, col))


def check_normalized(A: AlgebraObject) -> float:
    return abs(unit_scalar(A) - 1)


def deform(A: AlgebraObject, S, name: str | None = None) -> AlgebraObject:
    """``A_S = (X, S^-1 m (S x S), S^-1 iota)`` for invertible ``S`` in End(X)."""
    X = A.X
    S = hs.endo(X, S)
    Sinv = hs.from_endblock(X, hs.as_endblock(S).map_blocks(np.linalg.inv))
    m = compose(Sinv, compose(A.m, tensor(S, S)))
    return AlgebraObject(X, m, compose(Sinv, A.iota), name=A.name if name is None else name)


def normalize_algebra(A: AlgebraObject) -> AlgebraObject:
    """Deform by ``sqrt(alpha) 1`` so that the unit becomes an isometry."""
    r = np.sqrt(unit_scalar(A).real)
    return AlgebraObject(A.X, A.m * r, A.iota / r, name=A.name)


def mm_star(A: AlgebraObject) -> TreeMorphism:
    return A.memo('mm*', lambda: compose(A.m, A.comult))


def check_frobenius(A: AlgebraObject) -> float:
    """Largest of the two Frobenius relation residuals against ``m^* m``."""
    def run():
        X, m, mc = A.X, A.m, A.comult
        rhs = compose(mc, m)
        one = identity(X)
        r1 = compose(tensor(m, one), compose(hs.associator(X, X, X), tensor(one, mc))) - rhs
        r2 = compose(tensor(one, m), compose(hs.associator_inv(X, X, X), tensor(mc, one))) - rhs
        return max(r1.norm(), r2.norm())
    return A.memo('frobenius', run)


def check_special(A: AlgebraObject) -> tuple[float, float]:
    """``(residual, lam)`` with ``lam`` the least-squares scalar of ``m m^*``."""
    def run():
        B = hs.as_endblock(mm_star(A))
        dim = sum(B.sizes)
        lam = sum(np.trace(b) for b in B.blocks).real / dim
        return op_norm(B - lam * BlockDiag.identity(B.labels, B.sizes)), float(lam)
    return A.memo('special', run)


def check_commutative(A: AlgebraObject) -> float:
    return A.memo('commutative', lambda: (hs.braid_precompose(A.m) - A.m).norm())


def is_q_system(A: AlgebraObject, tol: float = TOL_DERIVED) -> bool:
    return (check_associative(A) < tol and check_unit(A) < tol and check_frobenius(A) < tol
            and check_special(A)[0] < tol)


# -- convolution -------------------------------------------------------------------------------

def convolution(A: AlgebraObject, T, S):
    """``T * S = m (T x S) m^*``; returns the same kind (BlockDiag or TreeMorphism) as ``T``."""
    X = A.X
    Tm, Sm = hs.endo(X, T), hs.endo(X, S)
    out = compose(A.m, compose(tensor(Tm, Sm), A.comult))
    return hs.as_endblock(out) if isinstance(T, BlockDiag) else out


def convolution_unit(A: AlgebraObject) -> BlockDiag:
    """``iota iota^*``, the unit of the convolution product."""
    return hs.as_endblock(compose(A.iota, dagger(A.iota)))


def strict_positivity_mm(A: AlgebraObject, tol: float = TOL_MORPHISM) -> bool:
    """``m m^* >= alpha^{-1} 1`` with ``alpha = iota^* iota``."""
    B = hs.as_endblock(mm_star(A))
    shift = 1.0 / unit_scalar(A).real
    return B.min_eigenvalue() - shift > -tol


# -- rigidity ----------------------------------------------------------------------------------

@dataclass
class PairingResult:
    """Outcome of a pairing test; unpacks as ``(ok, pairing)``."""

    ok: bool
    pairing: np.ndarray
    rank: int
    conjugate_residual: float | None = None
    coevaluation: TreeMorphism | None = None

    def __bool__(self):
        return self.ok

    def __iter__(self):
        return iter((self.ok, self.pairing))

    @property
    def message(self) -> str:
        n = self.pairing.shape[0]
        if self.ok:
            return f'pairing nondegenerate, rank {self.rank} of {n}'
        return f'pairing degenerate, rank {self.rank} of {n}'


def counit(A: AlgebraObject) -> TreeMorphism:
    """The functional ``eps: X -> 1`` with ``eps iota = 1`` supported on the unit copy."""
    if not check_haploid(A):
        raise NotHaploid(f'Hom(1,X) has dimension {unit_multiplicity(A)}')
    c = A.iota.blocks[A.category.unit][0, 0]
    return TreeMorphism(A.X, A.unit_object, {A.category.unit: [[1 / c]]})


def _copies(X: SumObject) -> list:
    return [(a, i) for a, m in X.summands for i in range(m)]


def pairing_matrix(A: AlgebraObject, eps: TreeMorphism) -> np.ndarray:
    """``P[(a,i),(b,j)]``: coefficient of ``eps m`` on the pair of copies, zero unless ``b`` is dual to ``a``."""
    X, cat = A.X, A.category
    e = compose(eps, A.m)
    copies = _copies(X)
    P = np.zeros((len(copies), len(copies)), dtype=complex)
    for p, (a, i) in enumerate(copies):
        for q, (b, j) in enumerate(copies):
            if cat.N(a, b, cat.unit):
                P[p, q] = e.coeff(((a, i), (b, j), cat.unit, 0), (cat.unit, 0))
    return P


def _conjugate_equations(A: AlgebraObject, e: TreeMorphism):
    """Solve for a coevaluation ``i: 1 -> X X`` by least squares; return ``(i, residual)``.

    Both zigzag composites are linear in ``i``, so their matrices are built by
    probing the standard basis of ``Hom(1, X X)``.
    """
    X, U = A.X, A.unit_object
    one = identity(X)
    probe = hs.zeros(U, (X, X))
    zig = compose(hs.unitor(X, 'left'), compose(tensor(e, one), hs.associator(X, X, X)))
    zag = compose(hs.unitor(X, 'right'), compose(tensor(one, e), hs.associator_inv(X, X, X)))

    def both(i):
        # (X, 1) and (1, X) carry the coordinates of X itself
        z1 = TreeMorphism._raw(X, X, compose(zig, tensor(one, i)).blocks)
        z2 = TreeMorphism._raw(X, X, compose(zag, tensor(i, one)).blocks)
        return z1, z2

    cols = []
    for k in range(probe.size):
        v = np.zeros(probe.size, dtype=complex)
        v[k] = 1
        z1, z2 = both(probe.from_vector(v))
        cols.append(np.concatenate([z1.to_vector(), z2.to_vector()]))
    M = np.array(cols).T
    target = np.concatenate([one.to_vector(), one.to_vector()])
    sol = np.linalg.lstsq(M, target, rcond=None)[0]
    i = probe.from_vector(sol)
    z1, z2 = both(i)
    return i, max((z1 - one).norm(), (z2 - one).norm())


def _pairing_test(A: AlgebraObject, eps: TreeMorphism, rel_tol: float = 1e-9) -> PairingResult:
    P = pairing_matrix(A, eps)
    s = np.linalg.svd(P, compute_uv=False)
    scale = s[0] if s.size else 0.0
    rank = int(np.sum(s > rel_tol * scale)) if scale > 0 else 0
    ok = scale > 0 and rank == P.shape[0]
    res = coev = None
    if ok:
        coev, res = _conjugate_equations(A, compose(eps, A.m))
        ok = res < TOL_DERIVED
    return PairingResult(bool(ok), P, rank, res, coev)


def check_rigid_haploid(A: AlgebraObject) -> PairingResult:
    """Rigidity test for a haploid algebra through the pairing ``eps m``.

    The pairing matrix must be invertible; a coevaluation is then solved for and
    both conjugate equations are verified.

    Raises
    ------
    NotHaploid
    """
    return A.memo('rigid', lambda: _pairing_test(A, counit(A)))


def frobenius_form_nondegenerate(A: AlgebraObject, eps) -> PairingResult:
    """Pairing test with a caller-supplied functional ``eps: X -> 1``.

    ``eps`` may be a TreeMorphism or the row vector of its unit block.
    """
    if not isinstance(eps, TreeMorphism):
        row = np.asarray(eps, dtype=complex).reshape(1, -1)
        eps = TreeMorphism(A.X, A.unit_object, {A.category.unit: row})
    return _pairing_test(A, eps)


# -- semisimplicity of the underlying algebra --------------------------------------------------

def structure_constants(A: AlgebraObject) -> np.ndarray:
    """``C[p, q, r]``: coefficient of copy ``r`` in the product of copies ``p`` and ``q``."""
    cat = A.category
    if not cat.is_pointed() or not cat.has_trivial_associator():
        raise UnsupportedAmbient('needs a pointed ambient with trivial associator')
    copies = _copies(A.X)
    C = np.zeros((len(copies),) * 3, dtype=complex)
    pos = {c: k for k, c in enumerate(copies)}
    for src, s, tgt, v in A.m.items():
        (t1, t2, _, _) = src
        C[pos[t1], pos[t2], pos[tgt]] = v
    return C


def trace_form(A: AlgebraObject) -> np.ndarray:
    """Gram matrix ``G[p, q] = Tr(L_p L_q)`` of the left regular representation."""
    C = structure_constants(A)
    L = np.transpose(C, (0, 2, 1))  # L[p] maps copy q to sum_r C[p,q,r] r
    return np.einsum('pij,qji->pq', L, L)


def semisimplicity_check(A: AlgebraObject) -> tuple[bool, np.ndarray]:
    """Whether the underlying ordinary algebra is semisimple; returns ``(ok, gram)``."""
    G = trace_form(A)
    s = np.linalg.svd(G, compute_uv=False)
    ok = bool(s[0] > 0 and s[-1] > 1e-9 * s[0])
    return ok, G
