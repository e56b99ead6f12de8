"""Fusion-tree coordinates for morphisms between tensor words.

A *word* is either a :class:`~qsys.category.SumObject` or a pair ``(w1, w2)`` of
words; the pair structure is the bracketing, so ``((X, Y), Z)`` is left-nested
and ``(X, (Y, Z))`` right-nested.

A basis *tree* of a word is a coisometry ``W -> s`` onto a simple ``s``:

* leaf ``(label, copy)`` picks one copy of a summand,
* node ``(t1, t2, s, mu)`` fuses the coupled labels of ``t1`` and ``t2`` into
  ``s`` through vertex ``mu``.

For fixed ``s`` the trees have orthogonal ranges and sum (as ``t^* t``) to the
identity, so a morphism ``f: W -> W'`` is stored as one matrix per simple
``s`` with entries ``t'_i f t_j^* = M_s[i, j]``. Composition is matrix product
and the dagger is the conjugate transpose.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .category import FusionCategoryData, SumObject
from .errors import NotEndomorphism, NotLength3, ShapeMismatch, WordTooLong
from .linalg import TOL_CLAMP, BlockDiag, op_norm

MAX_WORD = 3


# -- words -------------------------------------------------------------------------------------

def is_leaf(w) -> bool:
    return isinstance(w, SumObject)


def word_length(w) -> int:
    return 1 if is_leaf(w) else word_length(w[0]) + word_length(w[1])


def word_factors(w) -> tuple:
    return (w,) if is_leaf(w) else word_factors(w[0]) + word_factors(w[1])


def word_category(w) -> FusionCategoryData:
    return w.category if is_leaf(w) else word_category(w[0])


def nesting(w) -> str:
    """``'single'``, ``'pair'``, ``'left'``, ``'right'`` or ``'other'``."""
    if is_leaf(w):
        return 'single'
    a, b = w
    if is_leaf(a) and is_leaf(b):
        return 'pair'
    if not is_leaf(a) and is_leaf(b) and word_length(a) == 2:
        return 'left'
    if is_leaf(a) and not is_leaf(b) and word_length(b) == 2:
        return 'right'
    return 'other'


def make_word(*factors, nest: str = 'left'):
    """Bracket up to three factors; length-3 words default to left nesting."""
    if len(factors) == 1:
        return factors[0]
    if len(factors) == 2:
        return (factors[0], factors[1])
    if len(factors) == 3:
        x, y, z = factors
        return ((x, y), z) if nest == 'left' else (x, (y, z))
    raise WordTooLong(f'words have at most {MAX_WORD} factors')


def word_str(w) -> str:
    return f'({w})' if is_leaf(w) else f'[{word_str(w[0])} x {word_str(w[1])}]'


def coupled(t) -> str:
    return t[0] if len(t) == 2 else t[2]


# -- bases -------------------------------------------------------------------------------------

@dataclass(frozen=True)
class _Basis:
    trees: dict  # s -> tuple of trees
    index: dict  # s -> {tree: position}
    segments: dict  # s -> {(e1, e2): (offset, n1, n2, N)} for pair words

    def dim(self, s) -> int:
        return len(self.trees.get(s, ()))


@lru_cache(maxsize=None)
def basis(w) -> _Basis:
    cat = word_category(w)
    trees, segments = {}, {}
    if is_leaf(w):
        for a, m in w.summands:
            trees[a] = tuple((a, i) for i in range(m))
    else:
        b1, b2 = basis(w[0]), basis(w[1])
        for s in cat.labels:
            out, seg = [], {}
            for e1 in cat.labels:
                n1 = b1.dim(e1)
                for e2 in cat.labels:
                    N, n2 = cat.N(e1, e2, s), b2.dim(e2)
                    if N == 0 or n1 == 0 or n2 == 0:
                        continue
                    seg[e1, e2] = (len(out), n1, n2, N)
                    out.extend((t1, t2, s, mu) for t1 in b1.trees[e1] for t2 in b2.trees[e2]
                               for mu in range(N))
            if out:
                trees[s], segments[s] = tuple(out), seg
    index = {s: {t: i for i, t in enumerate(ts)} for s, ts in trees.items()}
    return _Basis(trees, index, segments)


def channels(w) -> tuple:
    cat = word_category(w)
    b = basis(w)
    return tuple(s for s in cat.labels if b.dim(s))


# -- morphisms ---------------------------------------------------------------------------------

class TreeMorphism:
    """Morphism ``source -> target`` as one coefficient matrix per simple channel.

    ``blocks[s]`` has shape ``(dim_s(target), dim_s(source))``; channels where
    either side is empty are omitted.
    """

    __slots__ = ('source', 'target', 'blocks')

    def __init__(self, source, target, blocks: dict | None = None):
        self.source, self.target = source, target
        bs, bt = basis(source), basis(target)
        out = {}
        for s in word_category(source).labels:
            n, m = bt.dim(s), bs.dim(s)
            if n and m:
                given = None if blocks is None else blocks.get(s)
                if given is None:
                    out[s] = np.zeros((n, m), dtype=complex)
                else:
                    M = np.asarray(given, dtype=complex)
                    if M.shape != (n, m):
                        raise ShapeMismatch(f'block {s}: shape {M.shape}, expected {(n, m)}')
                    out[s] = M
        self.blocks = out

    @classmethod
    def _raw(cls, source, target, blocks):
        f = object.__new__(cls)
        f.source, f.target, f.blocks = source, target, blocks
        return f

    def __repr__(self):
        return f'TreeMorphism({word_str(self.source)} -> {word_str(self.target)})'

    # linear structure
    def _same(self, other):
        if self.source != other.source or self.target != other.target:
            raise ShapeMismatch(f'{self!r} vs {other!r}')

    def __add__(self, other):
        self._same(other)
        return TreeMorphism._raw(self.source, self.target,
                                 {s: b + other.blocks[s] for s, b in self.blocks.items()})

    def __sub__(self, other):
        self._same(other)
        return TreeMorphism._raw(self.source, self.target,
                                 {s: b - other.blocks[s] for s, b in self.blocks.items()})

    def __neg__(self):
        return TreeMorphism._raw(self.source, self.target, {s: -b for s, b in self.blocks.items()})

    def __mul__(self, c):
        return TreeMorphism._raw(self.source, self.target, {s: c * b for s, b in self.blocks.items()})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return TreeMorphism._raw(self.source, self.target, {s: b / c for s, b in self.blocks.items()})

    def __matmul__(self, other):
        return compose(self, other)

    @property
    def H(self):
        return dagger(self)

    def norm(self) -> float:
        return max((op_norm(b) for b in self.blocks.values()), default=0.0)

    def to_vector(self) -> np.ndarray:
        return np.concatenate([b.ravel() for b in self.blocks.values()]) if self.blocks else np.zeros(0, complex)

    def from_vector(self, v):
        out, pos = {}, 0
        for s, b in self.blocks.items():
            out[s] = np.asarray(v[pos:pos + b.size], dtype=complex).reshape(b.shape)
            pos += b.size
        return TreeMorphism._raw(self.source, self.target, out)

    @property
    def size(self) -> int:
        return sum(b.size for b in self.blocks.values())

    def coeff(self, src_tree, tgt_tree) -> complex:
        s = coupled(src_tree)
        if coupled(tgt_tree) != s or s not in self.blocks:
            return 0j
        return complex(self.blocks[s][basis(self.target).index[s][tgt_tree],
                                      basis(self.source).index[s][src_tree]])

    def set_coeff(self, src_tree, tgt_tree, value):
        s = coupled(src_tree)
        if coupled(tgt_tree) != s:
            raise ShapeMismatch('source and target trees carry different channels')
        self.blocks[s][basis(self.target).index[s][tgt_tree], basis(self.source).index[s][src_tree]] = value

    def items(self):
        """Nonzero ``(src_tree, s, tgt_tree, value)`` entries in basis order."""
        bs, bt = basis(self.source), basis(self.target)
        for s, M in self.blocks.items():
            for i, j in zip(*np.nonzero(M)):
                yield bs.trees[s][j], s, bt.trees[s][i], complex(M[i, j])


def zeros(source, target) -> TreeMorphism:
    return TreeMorphism(source, target)


def identity(w) -> TreeMorphism:
    b = basis(w)
    return TreeMorphism._raw(w, w, {s: np.eye(len(ts), dtype=complex) for s, ts in b.trees.items()})


def compose(g: TreeMorphism, f: TreeMorphism) -> TreeMorphism:
    """``g o f``."""
    if g.source != f.target:
        raise ShapeMismatch(f'cannot compose {g!r} after {f!r}')
    out = {}
    for s in word_category(f.source).labels:
        if s in g.blocks and s in f.blocks:
            out[s] = g.blocks[s] @ f.blocks[s]
    return TreeMorphism(f.source, g.target, out)


def dagger(f: TreeMorphism) -> TreeMorphism:
    return TreeMorphism._raw(f.target, f.source, {s: b.conj().T for s, b in f.blocks.items()})


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two matrices; cheaper than ``np.kron`` for tiny blocks."""
    if a.shape == (1, 1):
        return a[0, 0] * b
    if b.shape == (1, 1):
        return a * b[0, 0]
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(a.shape[0] * b.shape[0],
                                                                a.shape[1] * b.shape[1])


def tensor(f: TreeMorphism, g: TreeMorphism) -> TreeMorphism:
    """``f (x) g`` on the pair words, without any word-length limit."""
    src, tgt = (f.source, g.source), (f.target, g.target)
    bs, bt = basis(src), basis(tgt)
    out = {}
    for s, seg_t in bt.segments.items():
        seg_s = bs.segments.get(s)
        if not seg_s:
            continue
        M = np.zeros((bt.dim(s), bs.dim(s)), dtype=complex)
        for (e1, e2), (ot, _, _, N) in seg_t.items():
            hit = seg_s.get((e1, e2))
            if hit is None or e1 not in f.blocks or e2 not in g.blocks:
                continue
            os_ = hit[0]
            K = kron(f.blocks[e1], g.blocks[e2])
            if N > 1:
                K = kron(K, np.eye(N))
            M[ot:ot + K.shape[0], os_:os_ + K.shape[1]] = K
        out[s] = M
    return TreeMorphism._raw(src, tgt, out)


# -- structural morphisms ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def associator(w1, w2, w3) -> TreeMorphism:
    """``a: w1 (w2 w3) -> (w1 w2) w3``; its matrix on simple leaves is the F-symbol."""
    cat = word_category(w1)
    src, tgt = (w1, (w2, w3)), ((w1, w2), w3)
    bs, bt = basis(src), basis(tgt)
    out = {}
    for s, trees in bt.trees.items():
        M = np.zeros((len(trees), bs.dim(s)), dtype=complex)
        idx = bs.index[s]
        for i, ((t1, t2, e, mu), t3, _, nu) in enumerate(trees):
            a, b, c = coupled(t1), coupled(t2), coupled(t3)
            F, rows, cols = cat.f_block(a, b, c, s)
            row = F[rows[e, mu, nu]]
            for (f, rho, sig), j in cols.items():
                x = row[j]
                if x != 0:
                    M[i, idx[(t1, (t2, t3, f, rho), s, sig)]] = x
        out[s] = M
    return TreeMorphism._raw(src, tgt, out)


def associator_inv(w1, w2, w3) -> TreeMorphism:
    return dagger(associator(w1, w2, w3))


@lru_cache(maxsize=None)
def braiding(w1, w2) -> TreeMorphism:
    """``b_{w1,w2}: w1 w2 -> w2 w1`` from the R-symbols of the coupled labels."""
    cat = word_category(w1)
    src, tgt = (w1, w2), (w2, w1)
    bs, bt = basis(src), basis(tgt)
    out = {}
    for s, trees in bs.trees.items():
        M = np.zeros((bt.dim(s), len(trees)), dtype=complex)
        idx = bt.index[s]
        for j, (t1, t2, _, mu) in enumerate(trees):
            R = cat.r_block(coupled(t1), coupled(t2), s)
            for nu in range(R.shape[1]):
                if R[mu, nu] != 0:
                    M[idx[(t2, t1, s, nu)], j] = R[mu, nu]
        out[s] = M
    return TreeMorphism._raw(src, tgt, out)


def unitor(w, side: str = 'left') -> TreeMorphism:
    """``1 w -> w`` (``side='left'``) or ``w 1 -> w``; identity in coordinates."""
    u = word_category(w).unit_object
    src = (u, w) if side == 'left' else (w, u)
    return TreeMorphism._raw(src, w, {s: np.eye(len(ts), dtype=complex) for s, ts in basis(w).trees.items()})


# -- public moves ------------------------------------------------------------------------------

def _split3(w):
    kind = nesting(w)
    if kind == 'left':
        return kind, (w[0][0], w[0][1], w[1])
    if kind == 'right':
        return kind, (w[0], w[1][0], w[1][1])
    raise NotLength3(f'{word_str(w)} is not a bracketed length-3 word')


def fmove(f: TreeMorphism, side: str = 'source') -> TreeMorphism:
    """Re-express ``f`` with the other bracketing of its source (or target) word.

    Left-nested becomes right-nested and vice versa; the morphism itself is
    unchanged up to the unitary associator.
    """
    if side == 'source':
        kind, (x, y, z) = _split3(f.source)
        return compose(f, associator(x, y, z) if kind == 'left' else associator_inv(x, y, z))
    if side == 'target':
        kind, (x, y, z) = _split3(f.target)
        return compose(associator_inv(x, y, z) if kind == 'left' else associator(x, y, z), f)
    raise ValueError("side must be 'source' or 'target'")


def to_left_nesting(f: TreeMorphism) -> TreeMorphism:
    """Bring every length-3 end of ``f`` to the canonical left nesting."""
    if nesting(f.source) == 'right':
        f = fmove(f, 'source')
    if nesting(f.target) == 'right':
        f = fmove(f, 'target')
    return f


def tensor_id(f: TreeMorphism, w, side: str = 'right', canonical: bool = True) -> TreeMorphism:
    """``f (x) 1_w`` (``side='right'``) or ``1_w (x) f`` (``side='left'``).

    Length-3 results are returned left-nested unless ``canonical`` is false.

    Raises
    ------
    WordTooLong
        If either resulting word would exceed three factors.
    """
    if max(word_length(f.source), word_length(f.target)) + word_length(w) > MAX_WORD:
        raise WordTooLong('tensor_id would produce a word longer than 3')
    g = tensor(f, identity(w)) if side == 'right' else tensor(identity(w), f)
    return to_left_nesting(g) if canonical else g


def braid_precompose(f: TreeMorphism) -> TreeMorphism:
    """``f o b`` where ``b: w2 w1 -> w1 w2`` for ``f.source = (w1, w2)``."""
    if is_leaf(f.source):
        raise ShapeMismatch('braiding needs a two-factor source')
    w1, w2 = f.source
    return compose(f, braiding(w2, w1))


def monodromy_precompose(f: TreeMorphism) -> TreeMorphism:
    """``f o b_{w2,w1} o b_{w1,w2}``."""
    if is_leaf(f.source):
        raise ShapeMismatch('monodromy needs a two-factor source')
    w1, w2 = f.source
    return compose(f, compose(braiding(w2, w1), braiding(w1, w2)))


# -- endomorphisms of a single object ----------------------------------------------------------

def as_endblock(f: TreeMorphism) -> BlockDiag:
    if not is_leaf(f.source) or f.source != f.target:
        raise NotEndomorphism(f'{f!r} is not an endomorphism of a single object')
    X = f.source
    return BlockDiag(X.labels, tuple(f.blocks[a] for a in X.labels))


def from_endblock(X: SumObject, B: BlockDiag) -> TreeMorphism:
    if tuple(B.labels) != X.labels:
        raise ShapeMismatch('block labels do not match the object')
    return TreeMorphism(X, X, dict(zip(B.labels, B.blocks)))


def endo(X: SumObject, T) -> TreeMorphism:
    """Accept a TreeMorphism or BlockDiag and return the TreeMorphism ``X -> X``."""
    if isinstance(T, BlockDiag):
        return from_endblock(X, T)
    if T.source != X or T.target != X:
        raise ShapeMismatch(f'{T!r} is not an endomorphism of {X}')
    return T


def positivity(e, tol: float = TOL_CLAMP) -> bool:
    if isinstance(e, TreeMorphism):
        e = as_endblock(e)
    return e.is_psd(tol)


def norm(f) -> float:
    return f.norm() if isinstance(f, TreeMorphism) else op_norm(f)


def random_morphism(source, target, rng: np.random.Generator) -> TreeMorphism:
    f = zeros(source, target)
    return f.from_vector(rng.standard_normal(f.size) + 1j * rng.standard_normal(f.size))
