"""Named algebra and module fixtures, plus seeded random deformers."""
from __future__ import annotations

import numpy as np

from .algebra import AlgebraObject, algebra_from_channels
from .category import GOLDEN, builtin
from .errors import UnknownName
from .homspace import zeros
from .linalg import BlockDiag
from .modules import AModule


def _leaf(a, i=0):
    return (a, i)


def _node(a, b, c, i=0, j=0, mu=0):
    return ((a, i), (b, j), c, mu)


def group_algebra(cat, elements, name=''):
    """All structure constants 1 on the channels ``g h -> g + h`` of a pointed category."""
    X = cat.obj(*elements)
    coeffs = {}
    for a in elements:
        for b in elements:
            (c, _), = cat.outcomes(a, b)
            coeffs[_node(a, b, c), _leaf(c)] = 1.0
    return algebra_from_channels(X, coeffs, 1.0, name=name)


def ce1_hilb_nilpotent() -> AlgebraObject:
    """``X = C^2`` in Hilb with basis ``{I, N}``, ``N^2 = 0``; copy 0 is ``I``."""
    cat = builtin('Hilb')
    X = cat.obj({'1': 2})
    one = '1'
    coeffs = {
        (((one, 0), (one, 0), one, 0), (one, 0)): 1.0,  # I I = I
        (((one, 0), (one, 1), one, 0), (one, 1)): 1.0,  # I N = N
        (((one, 1), (one, 0), one, 0), (one, 1)): 1.0,  # N I = N
    }
    return algebra_from_channels(X, coeffs, [1.0, 0.0], name='ce1-hilb-nilpotent')


def ce1_frobenius_form() -> np.ndarray:
    """``eps(a I + b N) = a + b`` as a row vector."""
    return np.array([1.0, 1.0])


def ce2_repz2_haploid_nonrigid() -> AlgebraObject:
    """Two-dimensional algebra ``span{I, N}`` with ``N^2 = 0`` inside Rep(Z2).

    In the orthonormal basis ``u0 = I/sqrt2`` (trivial rep) and ``u1 = N`` (sign rep).
    """
    cat = builtin('RepZ2')
    r = 1 / np.sqrt(2)
    coeffs = {(_node('+', '+', '+'), _leaf('+')): r, (_node('+', '-', '-'), _leaf('-')): r,
              (_node('-', '+', '-'), _leaf('-')): r}
    return algebra_from_channels(cat.obj('+', '-'), coeffs, np.sqrt(2), name='ce2-repz2-haploid-nonrigid')


def repz2_regular() -> AlgebraObject:
    return group_algebra(builtin('RepZ2'), ['+', '-'], name='repz2-regular')


def repz2_regular_deformed() -> AlgebraObject:
    from .algebra import deform
    A = repz2_regular()
    return deform(A, BlockDiag(('+', '-'), (np.eye(1), 2 * np.eye(1))), name='repz2-regular-deformed')


def veczn_regular(n: int = 3) -> AlgebraObject:
    cat = builtin('VecZn', n=n)
    return group_algebra(cat, list(cat.labels), name=f'veczn-regular-{n}')


def fib_golden() -> AlgebraObject:
    """Q-system on ``1 + tau`` in Fib, normalized with ``m m^* = (1 + phi) 1``."""
    cat = builtin('Fib')
    t = 'tau'
    coeffs = {(_node('1', '1', '1'), _leaf('1')): 1.0, (_node('1', t, t), _leaf(t)): 1.0,
              (_node(t, '1', t), _leaf(t)): 1.0, (_node(t, t, '1'), _leaf('1')): np.sqrt(GOLDEN),
              (_node(t, t, t), _leaf(t)): GOLDEN ** -0.5}
    return algebra_from_channels(cat.obj('1', t), coeffs, 1.0, name='fib-golden')


def ising_1psi() -> AlgebraObject:
    cat = builtin('Ising')
    p = 'psi'
    coeffs = {(_node('1', '1', '1'), _leaf('1')): 1.0, (_node('1', p, p), _leaf(p)): 1.0,
              (_node(p, '1', p), _leaf(p)): 1.0, (_node(p, p, '1'), _leaf('1')): 1.0}
    return algebra_from_channels(cat.obj('1', p), coeffs, 1.0, name='ising-1psi')


def vecz2_cocycle_nonassoc() -> AlgebraObject:
    """Naive group algebra of Z2 in Vec_{Z2} twisted by the nontrivial cocycle."""
    return group_algebra(builtin('VecZ2_k1'), ['0', '1'], name='vecz2-cocycle-nonassoc')


def z9_subgroup() -> AlgebraObject:
    """Commutative algebra ``0 + 3 + 6`` in Vec_{Z9} with braiding ``exp(2 pi i g h / 9)``."""
    return group_algebra(builtin('VecZ9_q1'), ['0', '3', '6'], name='z9-subgroup')


def coset_module(A: AlgebraObject, coset, character=None, name='') -> AModule:
    """``Y = coset`` with ``g . y_h = chi(g) y_{g+h}`` over a group algebra ``A``."""
    cat = A.category
    Y = cat.obj(*coset)
    mY = zeros((A.X, Y), Y)
    for g in A.X.labels:
        for h in Y.labels:
            (c, _), = cat.outcomes(g, h)
            mY.set_coeff(_node(g, h, c), _leaf(c), 1.0 if character is None else character(g))
    return AModule(A, Y, mY, name=name)


def z9_coset_module() -> AModule:
    return coset_module(z9_subgroup(), ['1', '4', '7'], name='z9-coset')


def repz2_sign_module() -> AModule:
    """Regular Z2 algebra acting on ``+ + -`` through the sign character."""
    return coset_module(repz2_regular(), ['+', '-'], lambda g: -1.0 if g == '-' else 1.0,
                        name='repz2-sign')


ALGEBRAS = {
    'ce1-hilb-nilpotent': ce1_hilb_nilpotent,
    'ce2-repz2-haploid-nonrigid': ce2_repz2_haploid_nonrigid,
    'repz2-regular': repz2_regular,
    'repz2-regular-deformed': repz2_regular_deformed,
    'veczn-regular': veczn_regular,
    'fib-golden': fib_golden,
    'ising-1psi': ising_1psi,
    'vecz2-cocycle-nonassoc': vecz2_cocycle_nonassoc,
    'z9-subgroup': z9_subgroup,
}
MODULES = {'z9-coset': z9_coset_module, 'repz2-sign': repz2_sign_module}
ALIASES = {'ce1': 'ce1-hilb-nilpotent', 'ce2': 'ce2-repz2-haploid-nonrigid'}


def fixture(name: str):
    """Look up an algebra (or module) fixture; ``veczn-regular-5`` selects ``n``."""
    name = ALIASES.get(name, name)
    if name in ALGEBRAS:
        return ALGEBRAS[name]()
    if name in MODULES:
        return MODULES[name]()
    if name.startswith('veczn-regular-'):
        try:
            return veczn_regular(int(name.rsplit('-', 1)[1]))
        except ValueError:
            pass
    raise UnknownName(f'no fixture named {name!r}')


def fixture_names() -> list:
    return list(ALGEBRAS) + list(MODULES)


# -- random deformers --------------------------------------------------------------------------

def _blocks(X, rng, fn):
    return BlockDiag(X.labels, tuple(fn(m, rng) for m in (mult for _, mult in X.summands)))


def random_positive(X, rng: np.random.Generator, spread: float = 1.0) -> BlockDiag:
    """Strictly positive element of End(X): ``G G^* + 0.1``, scaled by ``spread``."""
    def pos(m, rng):
        G = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        return spread * (G @ G.conj().T) + 0.1 * np.eye(m)
    return _blocks(X, rng, pos)


def random_invertible(X, rng: np.random.Generator) -> BlockDiag:
    """Complex Gaussian blocks shifted away from singularity."""
    def inv(m, rng):
        G = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        return G + 2.0 * np.exp(2j * np.pi * rng.random()) * np.eye(m)
    return _blocks(X, rng, inv)


def random_endblock(X, rng: np.random.Generator) -> BlockDiag:
    return _blocks(X, rng, lambda m, r: r.standard_normal((m, m)) + 1j * r.standard_normal((m, m)))


def random_psd(X, rng: np.random.Generator) -> BlockDiag:
    def psd(m, rng):
        G = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        return G @ G.conj().T
    return _blocks(X, rng, psd)
