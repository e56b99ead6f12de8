"""Skeletal unitary fusion categories: data model, coherence checks, gallery.

Conventions
-----------
Simple labels are strings. Fusion vertices ``a (x) b -> c`` carry a multiplicity
index ``mu < N[a, b, c]``.

F-symbols: the left-nested basis tree ``(e, mu, nu)`` of ``Hom((a b) c, d)``
(``mu: a b -> e``, ``nu: e c -> d``) precomposed with the associator
``a (b c) -> (a b) c`` equals ``sum F[abcd][(e,mu,nu), (f,rho,sigma)]`` times the
right-nested tree ``(f, rho, sigma)`` (``rho: b c -> f``, ``sigma: a f -> d``).
Rows and columns are ordered lexicographically by label order, then
multiplicity indices.

R-symbols: ``R[abc]`` has shape ``N[a,b,c] x N[b,a,c]``; the ``b a -> c`` vertex
``nu`` precomposed with the braiding ``a b -> b a`` equals
``sum_mu R[abc][mu, nu]`` times the ``a b -> c`` vertex ``mu``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import MalformedData, NoBraiding, UnknownName, ValidationFailed
from .linalg import TOL_MORPHISM, op_norm

GOLDEN = (1 + np.sqrt(5)) / 2


class FusionCategoryData:
    """Finite skeletal fusion category with optional braiding and twist.

    Parameters
    ----------
    labels : sequence of str
        Simple objects, in a fixed order. The order fixes every basis ordering.
    unit : str
    dual : dict
        ``label -> dual label``.
    fusion : dict
        ``(a, b, c) -> N_ab^c`` for the nonzero multiplicities.
    F : dict
        ``(a, b, c, d) -> matrix`` in the canonical row/column order (see module
        docstring). Missing blocks whose space is ``1 x 1`` or that involve the
        unit are filled with the identity (strict-unit gauge).
    R : dict, optional
        ``(a, b, c) -> matrix`` of shape ``N_ab^c x N_ba^c``.
    twist : dict, optional
        ``label -> complex`` ribbon twist; cross-checked against ``R``.
    """

    def __init__(self, labels, unit, dual, fusion, F=None, R=None, twist=None, name=None,
                 qdim_hint=None):
        self.labels = tuple(str(a) for a in labels)
        if len(set(self.labels)) != len(self.labels):
            raise MalformedData('duplicate labels')
        self.unit = str(unit)
        self.name = name or 'custom'
        self._index = {a: i for i, a in enumerate(self.labels)}
        if self.unit not in self._index:
            raise MalformedData(f'unit {unit!r} is not a label')
        self.dual = {str(a): str(b) for a, b in dual.items()}
        for a in self.labels:
            if a not in self.dual or self.dual[a] not in self._index:
                raise MalformedData(f'dual of {a!r} missing or unknown')
        self._N = {}
        for (a, b, c), n in fusion.items():
            for x in (a, b, c):
                if x not in self._index:
                    raise MalformedData(f'fusion rule mentions unknown label {x!r}')
            n = int(n)
            if n < 0:
                raise MalformedData('negative fusion multiplicity')
            if n:
                self._N[a, b, c] = n
        self._outcomes = {}
        for a in self.labels:
            for b in self.labels:
                self._outcomes[a, b] = tuple((c, self._N[a, b, c]) for c in self.labels
                                             if (a, b, c) in self._N)
        self.F = {}
        for key in self.f_keys():
            rows, cols = self.f_rows(*key), self.f_cols(*key)
            if len(rows) != len(cols):
                raise MalformedData(f'F{key}: inconsistent fusion rules ({len(rows)} vs {len(cols)})')
            given = None if F is None else F.get(key)
            if given is None:
                if self.unit in key[:3] or len(rows) == 1:
                    given = np.eye(len(rows), dtype=complex)
                else:
                    raise MalformedData(f'F-symbol {key} missing')
            M = np.asarray(given, dtype=complex)
            if M.shape != (len(rows), len(cols)):
                raise MalformedData(f'F{key} has shape {M.shape}, expected {(len(rows), len(cols))}')
            self.F[key] = M
        self.R = None
        if R is not None:
            self.R = {}
            for a, b in itertools.product(self.labels, repeat=2):
                for c, n in self.outcomes(a, b):
                    given = R.get((a, b, c))
                    if given is None:
                        if self.unit in (a, b):
                            given = np.eye(n, dtype=complex)
                        else:
                            raise MalformedData(f'R-symbol {(a, b, c)} missing')
                    M = np.asarray(given, dtype=complex)
                    if M.ndim == 0:
                        M = M.reshape(1, 1)
                    if M.shape != (n, self.N(b, a, c)):
                        raise MalformedData(f'R{(a, b, c)} has shape {M.shape}')
                    self.R[a, b, c] = M
        self.twist = None if twist is None else {str(a): complex(t) for a, t in twist.items()}
        self.qdim_hint = qdim_hint
        self._f_index = {}

    def __repr__(self):
        return f'FusionCategoryData({self.name!r}, labels={list(self.labels)})'

    # -- fusion rules -------------------------------------------------------------------------
    def N(self, a, b, c) -> int:
        return self._N.get((a, b, c), 0)

    def outcomes(self, a, b) -> tuple:
        """``((c, N_ab^c), ...)`` over the nonzero channels, in label order."""
        return self._outcomes[a, b]

    @property
    def rank(self) -> int:
        return len(self.labels)

    @property
    def is_braided(self) -> bool:
        return self.R is not None

    def label_index(self, a) -> int:
        return self._index[a]

    def f_rows(self, a, b, c, d) -> list:
        return [(e, mu, nu) for e, n1 in self.outcomes(a, b) for mu in range(n1)
                for nu in range(self.N(e, c, d))]

    def f_cols(self, a, b, c, d) -> list:
        return [(f, rho, sig) for f, n1 in self.outcomes(b, c) for rho in range(n1)
                for sig in range(self.N(a, f, d))]

    def f_keys(self):
        for a, b, c in itertools.product(self.labels, repeat=3):
            ds = set()
            for e, _ in self.outcomes(a, b):
                ds.update(d for d, _ in self.outcomes(e, c))
            for d in self.labels:
                if d in ds:
                    yield a, b, c, d

    def f_block(self, a, b, c, d):
        """``(matrix, row_index, col_index)`` or ``None`` for an empty space."""
        key = (a, b, c, d)
        hit = self._f_index.get(key)
        if hit is None:
            M = self.F.get(key)
            if M is None:
                return None
            hit = (M, {r: i for i, r in enumerate(self.f_rows(*key))},
                   {r: i for i, r in enumerate(self.f_cols(*key))})
            self._f_index[key] = hit
        return hit

    def r_block(self, a, b, c) -> np.ndarray:
        if self.R is None:
            raise NoBraiding(f'category {self.name!r} carries no braiding')
        return self.R[a, b, c]

    # -- dimensions ---------------------------------------------------------------------------
    def fusion_matrix(self, a) -> np.ndarray:
        """``(N_a)_{bc} = N_ab^c``."""
        n = self.rank
        M = np.zeros((n, n))
        for b in self.labels:
            for c, m in self.outcomes(a, b):
                M[self._index[b], self._index[c]] = m
        return M

    @cached_property
    def qdim(self) -> dict:
        """Quantum dimensions as Perron-Frobenius eigenvalues of the fusion matrices."""
        return {a: float(np.max(np.linalg.eigvals(self.fusion_matrix(a)).real)) for a in self.labels}

    def obj(self, *args, **kwargs) -> SumObject:
        """Build a :class:`SumObject`: ``obj('1', 'tau')`` or ``obj({'1': 1, 'tau': 2})``."""
        if len(args) == 1 and isinstance(args[0], dict):
            summands = args[0].items()
        elif args:
            summands = [(a, 1) for a in args]
        else:
            summands = kwargs.items()
        return SumObject(self, tuple((str(a), int(m)) for a, m in summands))

    @cached_property
    def unit_object(self) -> SumObject:
        return SumObject(self, ((self.unit, 1),))

    def is_pointed(self, tol=1e-9) -> bool:
        return all(abs(d - 1) < tol for d in self.qdim.values())

    def has_trivial_associator(self, tol=1e-12) -> bool:
        return all(op_norm(M - np.eye(M.shape[0])) < tol for M in self.F.values())


@dataclass(frozen=True)
class SumObject:
    """Formal direct sum of simple objects; summand labels are distinct."""

    category: FusionCategoryData = field(repr=False)
    summands: tuple

    def __post_init__(self):
        seen = set()
        for a, m in self.summands:
            if a not in self.category._index:
                raise MalformedData(f'unknown label {a!r}')
            if a in seen:
                raise MalformedData(f'label {a!r} repeated; use its multiplicity instead')
            if m < 1:
                raise MalformedData(f'multiplicity of {a!r} must be >= 1')
            seen.add(a)
        if not self.summands:
            raise MalformedData('empty object')

    @property
    def labels(self) -> tuple:
        return tuple(a for a, _ in self.summands)

    def mult(self, a) -> int:
        for b, m in self.summands:
            if b == a:
                return m
        return 0

    @property
    def total_mult(self) -> int:
        return sum(m for _, m in self.summands)

    def dim(self) -> float:
        d = self.category.qdim
        return float(sum(m * d[a] for a, m in self.summands))

    def dual(self) -> SumObject:
        return SumObject(self.category, tuple((self.category.dual[a], m) for a, m in self.summands))

    def __str__(self):
        return ' + '.join(a if m == 1 else f'{m}*{a}' for a, m in self.summands)


# -- validation --------------------------------------------------------------------------------

@dataclass
class ValidationReport:
    category: str
    qdim: dict
    fusion_residual: float = 0.0
    unitarity_residual: float = 0.0
    unit_gauge_residual: float = 0.0
    pentagon_residual: float = 0.0
    r_unitarity_residual: float | None = None
    hexagon_residual: float | None = None
    twist_residual: float | None = None
    worst: str = ''
    tol: float = TOL_MORPHISM

    @property
    def residuals(self) -> dict:
        out = {'fusion': self.fusion_residual, 'F_unitarity': self.unitarity_residual,
               'unit_gauge': self.unit_gauge_residual, 'pentagon': self.pentagon_residual}
        if self.r_unitarity_residual is not None:
            out['R_unitarity'] = self.r_unitarity_residual
            out['hexagon'] = self.hexagon_residual
        if self.twist_residual is not None:
            out['twist'] = self.twist_residual
        return out

    @property
    def accepted(self) -> bool:
        return all(r < self.tol for r in self.residuals.values())

    def to_dict(self) -> dict:
        return {'category': self.category, 'accepted': self.accepted,
                'qdim': dict(self.qdim), 'residuals': self.residuals, 'worst': self.worst}


class _Worst:
    def __init__(self):
        self.value, self.where = 0.0, ''

    def update(self, value, where):
        if value > self.value:
            self.value, self.where = value, where
        return value


def _fusion_residual(cat: FusionCategoryData, worst: _Worst) -> float:
    res = 0.0
    u, dual = cat.unit, cat.dual
    for a in cat.labels:
        if dual[dual[a]] != a:
            res = max(res, worst.update(1.0, f'dual of dual of {a}'))
        if cat.N(a, dual[a], u) != 1:
            res = max(res, worst.update(1.0, f'N[{a},{dual[a]},1] != 1'))
        for b in cat.labels:
            want = int(a == b)
            if cat.N(u, a, b) != want or cat.N(a, u, b) != want:
                res = max(res, worst.update(1.0, f'unit fusion {a},{b}'))
            for c in cat.labels:
                if cat.N(a, b, c) != cat.N(dual[b], dual[a], dual[c]):
                    res = max(res, worst.update(1.0, f'N[{a},{b},{c}] duality'))
    return res


def pentagon_residual(cat: FusionCategoryData, worst: _Worst | None = None) -> float:
    """Largest entry-wise mismatch of the pentagon equation over all label quadruples.

    With ``T1 = ((a b)_f c)_g d -> e`` and ``T4 = a (b (c d)_h)_k -> e``, the two
    associator paths give::

        sum_s F[fcde][(g,nu,ka),(h,rho,s)] F[abhe][(f,mu,s),(k,la,om)]
          = sum_{j,al,be,ga} F[abcg][(f,mu,nu),(j,al,be)] F[ajde][(g,be,ka),(k,ga,om)]
                             F[bcdk][(j,al,ga),(h,rho,la)]
    """
    worst = worst or _Worst()
    out = 0.0
    fb = cat.f_block
    for a, b, c, d in itertools.product(cat.labels, repeat=4):
        lhs, rhs = {}, {}
        for f, nab in cat.outcomes(a, b):
            for g, nfc in cat.outcomes(f, c):
                for e, ngd in cat.outcomes(g, d):
                    F1, r1, c1 = fb(f, c, d, e)
                    F3, r3, c3 = fb(a, b, c, g)
                    for mu, nu, ka in itertools.product(range(nab), range(nfc), range(ngd)):
                        src = (f, mu, g, nu, e, ka)
                        row1 = F1[r1[g, nu, ka]]
                        for (h, rho, s), i1 in c1.items():
                            x = row1[i1]
                            if x == 0:
                                continue
                            F2, r2, c2 = fb(a, b, h, e)
                            row2 = F2[r2[f, mu, s]]
                            for (k, la, om), i2 in c2.items():
                                key = (src, h, rho, k, la, om)
                                lhs[key] = lhs.get(key, 0) + x * row2[i2]
                        row3 = F3[r3[f, mu, nu]]
                        for (j, al, be), i3 in c3.items():
                            y = row3[i3]
                            if y == 0:
                                continue
                            F4, r4, c4 = fb(a, j, d, e)
                            row4 = F4[r4[g, be, ka]]
                            for (k, ga, om), i4 in c4.items():
                                z = y * row4[i4]
                                if z == 0:
                                    continue
                                F5, r5, c5 = fb(b, c, d, k)
                                row5 = F5[r5[j, al, ga]]
                                for (h, rho, la), i5 in c5.items():
                                    key = (src, h, rho, k, la, om)
                                    rhs[key] = rhs.get(key, 0) + z * row5[i5]
        for key in lhs.keys() | rhs.keys():
            r = abs(lhs.get(key, 0) - rhs.get(key, 0))
            if r > out:
                out = worst.update(r, f'pentagon a,b,c,d={a},{b},{c},{d}') or r
                out = max(out, r)
    return out


def hexagon_residual(cat: FusionCategoryData, worst: _Worst | None = None) -> float:
    """Largest mismatch over both hexagon equations (see module docstring for conventions)."""
    worst = worst or _Worst()
    R = cat.r_block
    fb = cat.f_block
    out = 0.0
    for a, b, c in itertools.product(cat.labels, repeat=3):
        # hexagon 1: (a b) c -> b (c a)
        lhs, rhs = {}, {}
        for g, nab in cat.outcomes(a, b):
            for d, ngc in cat.outcomes(g, c):
                Fabc, rabc, cabc = fb(a, b, c, d)
                Fbca, rbca, cbca = fb(b, c, a, d)
                for ka, la in itertools.product(range(nab), range(ngc)):
                    src = (g, ka, la, d)
                    row = Fabc[rabc[g, ka, la]].conj()
                    for (e, mu, nu1), i in cabc.items():  # nu1: a e -> d
                        x = row[i]
                        if x == 0:
                            continue
                        Rae = R(a, e, d)
                        for nu in range(Rae.shape[1]):  # nu: e a -> d
                            y = x * Rae[nu1, nu]
                            if y == 0:
                                continue
                            rowb = Fbca[rbca[e, mu, nu]].conj()
                            for (f, rho, sig), j in cbca.items():
                                key = (src, f, rho, sig)
                                lhs[key] = lhs.get(key, 0) + y * rowb[j]
                Fbac, rbac, cbac = fb(b, a, c, d)
                for (h, pi, tau), i in rbac.items():  # pi: b a -> h
                    Rab = R(a, b, h)
                    for ka in range(Rab.shape[0]):
                        x = Rab[ka, pi]
                        if x == 0 or h != g:
                            continue
                        for la in range(cat.N(h, c, d)):
                            if la != tau:
                                continue
                            src = (h, ka, la, d)
                            for (f, rho1, sig), j in cbac.items():  # rho1: a c -> f
                                y = x * Fbac[i, j].conj()
                                if y == 0:
                                    continue
                                Rac = R(a, c, f)
                                for rho in range(Rac.shape[1]):
                                    key = (src, f, rho, sig)
                                    rhs[key] = rhs.get(key, 0) + y * Rac[rho1, rho]
        for key in lhs.keys() | rhs.keys():
            r = abs(lhs.get(key, 0) - rhs.get(key, 0))
            out = max(out, worst.update(r, f'hexagon1 a,b,c={a},{b},{c}') if r > out else r)
        # hexagon 2: a (b c) -> (c a) b
        lhs, rhs = {}, {}
        for e, nca in cat.outcomes(c, a):
            for d, neb in cat.outcomes(e, b):
                Fcab, rcab, ccab = fb(c, a, b, d)
                Fabc, rabc, cabc = fb(a, b, c, d)
                Facb, racb, cacb = fb(a, c, b, d)
                for mu, nu in itertools.product(range(nca), range(neb)):
                    tgt = (e, mu, nu, d)
                    row = Fcab[rcab[e, mu, nu]]
                    for (f, rho, sig), i in ccab.items():  # sig: c f -> d
                        x = row[i]
                        if x == 0:
                            continue
                        Rfc = R(f, c, d)
                        for sig1 in range(Rfc.shape[0]):  # sig1: f c -> d
                            y = x * Rfc[sig1, sig]
                            if y == 0:
                                continue
                            rowa = Fabc[rabc[f, rho, sig1]]
                            for (g, ka, la), j in cabc.items():
                                key = (tgt, g, ka, la)
                                lhs[key] = lhs.get(key, 0) + y * rowa[j]
                    Rac = R(a, c, e)
                    for mu1 in range(Rac.shape[0]):  # mu1: a c -> e
                        x = Rac[mu1, mu]
                        if x == 0:
                            continue
                        rowc = Facb[racb[e, mu1, nu]]
                        for (h, pi, tau), j in cacb.items():  # pi: c b -> h
                            y = x * rowc[j]
                            if y == 0:
                                continue
                            Rbc = R(b, c, h)
                            for pi1 in range(Rbc.shape[0]):
                                key = (tgt, h, pi1, tau)
                                rhs[key] = rhs.get(key, 0) + y * Rbc[pi1, pi]
        for key in lhs.keys() | rhs.keys():
            r = abs(lhs.get(key, 0) - rhs.get(key, 0))
            out = max(out, worst.update(r, f'hexagon2 a,b,c={a},{b},{c}') if r > out else r)
    return out


def compute_simple_twist(cat: FusionCategoryData, a, tol: float = TOL_MORPHISM) -> complex:
    """Ribbon twist of a simple: ``(1/d_a) sum_c d_c tr R^{aa}_c``.

    If the category carries twist data, agreement is asserted.
    """
    if not cat.is_braided:
        raise NoBraiding(f'category {cat.name!r} carries no braiding')
    d = cat.qdim
    theta = sum(d[c] * np.trace(cat.r_block(a, a, c)) for c, _ in cat.outcomes(a, a)) / d[a]
    theta = complex(theta)
    if cat.twist is not None and a in cat.twist and abs(cat.twist[a] - theta) >= tol:
        raise ValidationFailed(f'twist of {a}: data {cat.twist[a]} vs braiding {theta}',
                               worst=f'twist {a}', residual=abs(cat.twist[a] - theta))
    return theta


def validate(cat: FusionCategoryData, tol: float = TOL_MORPHISM, strict: bool = True) -> ValidationReport:
    """Run every coherence check and return the residual report.

    Raises
    ------
    ValidationFailed
        If ``strict`` and any residual is ``>= tol``; carries the worst instance.
    """
    worst = _Worst()
    report = ValidationReport(cat.name, dict(cat.qdim), tol=tol)
    report.fusion_residual = _fusion_residual(cat, worst)
    if report.fusion_residual == 0:
        uni, gauge = 0.0, 0.0
        for key, M in cat.F.items():
            r = op_norm(M.conj().T @ M - np.eye(M.shape[0]))
            uni = max(uni, worst.update(r, f'F{key} unitarity'))
            if cat.unit in key[:3]:
                g = op_norm(M - np.eye(M.shape[0]))
                gauge = max(gauge, worst.update(g, f'F{key} unit gauge'))
        report.unitarity_residual, report.unit_gauge_residual = uni, gauge
        report.pentagon_residual = float(pentagon_residual(cat, worst))
        if cat.is_braided:
            report.r_unitarity_residual = float(max(
                worst.update(op_norm(M.conj().T @ M - np.eye(M.shape[1])), f'R{key} unitarity')
                for key, M in cat.R.items()))
            report.hexagon_residual = float(hexagon_residual(cat, worst))
            if cat.twist is not None:
                tw = 0.0
                tw = max(tw, worst.update(abs(cat.twist.get(cat.unit, 1) - 1), 'twist of unit'))
                for a in cat.labels:
                    theta = sum(cat.qdim[c] * np.trace(cat.r_block(a, a, c))
                                for c, _ in cat.outcomes(a, a)) / cat.qdim[a]
                    tw = max(tw, worst.update(abs(cat.twist.get(a, theta) - theta), f'twist {a}'))
                report.twist_residual = float(tw)
    if cat.qdim_hint:
        for a, d in cat.qdim_hint.items():
            r = abs(d - cat.qdim[a])
            report.fusion_residual = max(report.fusion_residual, worst.update(r, f'qdim of {a}'))
    report.worst = worst.where
    if strict and not report.accepted:
        raise ValidationFailed(f'category {cat.name!r} rejected: {worst.where} (residual {worst.value:.3e})',
                               worst=worst.where, residual=worst.value)
    return report


# -- gallery -----------------------------------------------------------------------------------

def _hilb():
    return FusionCategoryData(['1'], '1', {'1': '1'}, {('1', '1', '1'): 1}, R={}, twist={'1': 1},
                              name='Hilb')


def _vec_zn(n: int, k: int = 0, q: int | None = None, labels=None, name=None):
    if not 1 <= n <= 12:
        raise ValueError('VecZn requires 1 <= n <= 12')
    if not 0 <= k < n:
        raise ValueError('cocycle index must satisfy 0 <= k < n')
    lab = labels or [str(g) for g in range(n)]
    fusion = {(lab[g], lab[h], lab[(g + h) % n]): 1 for g in range(n) for h in range(n)}
    dual = {lab[g]: lab[-g % n] for g in range(n)}
    F = {}
    for a, b, c in itertools.product(range(n), repeat=3):
        carry = b + c - (b + c) % n
        F[lab[a], lab[b], lab[c], lab[(a + b + c) % n]] = [[np.exp(2j * np.pi * k * a * carry / n**2)]]
    R = twist = None
    if k == 0:
        q = q or 0
        R = {(lab[g], lab[h], lab[(g + h) % n]): [[np.exp(2j * np.pi * q * g * h / n)]]
             for g in range(n) for h in range(n)}
        twist = {lab[g]: np.exp(2j * np.pi * q * g * g / n) for g in range(n)}
    elif q:
        raise ValueError('braiding parameter requires the trivial cocycle')
    return FusionCategoryData(lab, lab[0], dual, fusion, F, R, twist,
                              name=name or f'VecZ{n}' + (f'_k{k}' if k else '') + (f'_q{q}' if q else ''))


def _rep_z2():
    return _vec_zn(2, 0, 0, labels=['+', '-'], name='RepZ2')


def _fib():
    lab = ['1', 'tau']
    fusion = {('1', '1', '1'): 1, ('1', 'tau', 'tau'): 1, ('tau', '1', 'tau'): 1,
              ('tau', 'tau', '1'): 1, ('tau', 'tau', 'tau'): 1}
    p = GOLDEN
    F = {('tau', 'tau', 'tau', 'tau'): [[1 / p, 1 / np.sqrt(p)], [1 / np.sqrt(p), -1 / p]]}
    R = {('tau', 'tau', '1'): [[np.exp(-4j * np.pi / 5)]], ('tau', 'tau', 'tau'): [[np.exp(3j * np.pi / 5)]]}
    twist = {'1': 1, 'tau': np.exp(4j * np.pi / 5)}
    return FusionCategoryData(lab, '1', {'1': '1', 'tau': 'tau'}, fusion, F, R, twist, name='Fib')


def _ising():
    lab = ['1', 'sigma', 'psi']
    s, p = 'sigma', 'psi'
    fusion = {('1', x, x): 1 for x in lab}
    fusion.update({(x, '1', x): 1 for x in lab})
    fusion.update({(s, s, '1'): 1, (s, s, p): 1, (s, p, s): 1, (p, s, s): 1, (p, p, '1'): 1})
    r2 = 1 / np.sqrt(2)
    F = {(s, s, s, s): [[r2, r2], [r2, -r2]], (s, p, s, p): [[-1]], (p, s, p, s): [[-1]]}
    R = {(s, s, '1'): [[np.exp(-1j * np.pi / 8)]], (s, s, p): [[np.exp(3j * np.pi / 8)]],
         (s, p, s): [[-1j]], (p, s, s): [[-1j]], (p, p, '1'): [[-1]]}
    twist = {'1': 1, s: np.exp(1j * np.pi / 8), p: -1}
    return FusionCategoryData(lab, '1', {x: x for x in lab}, fusion, F, R, twist, name='Ising')


BUILTIN_NAMES = ('Hilb', 'RepZ2', 'Fib', 'Ising', 'VecZn')
_VECZN = re.compile(r'^VecZ(\d+)(?:_k(\d+))?(?:_q(\d+))?$')


_CACHE: dict = {}


def builtin(name: str, n: int | None = None, k: int = 0, q: int | None = None,
            check: bool = True) -> FusionCategoryData:
    """Gallery categories: ``Hilb``, ``RepZ2``, ``Fib``, ``Ising``, ``VecZn``.

    ``VecZn`` takes the group order ``n``, cocycle index ``k`` and, for ``k = 0``,
    the bicharacter braiding ``R(g, h) = exp(2 pi i q g h / n)`` (``q = 0`` is the
    symmetric braiding). The compact spelling ``'VecZ9_q1'`` is also accepted.

    Instances are cached, so objects built from two calls with the same
    arguments compare equal. Treat the result as read-only.
    """
    m = _VECZN.match(name)
    if m:
        name, n = 'VecZn', int(m.group(1))
        k = int(m.group(2) or 0)
        q = int(m.group(3)) if m.group(3) else None
    makers = {'Hilb': _hilb, 'RepZ2': _rep_z2, 'Fib': _fib, 'Ising': _ising}
    if name == 'VecZn':
        if n is None:
            raise ValueError('VecZn needs the group order n')
        key = (name, n, k, q)
    elif name in makers:
        key = (name,)
    else:
        raise UnknownName(f'no built-in category named {name!r}')
    entry = _CACHE.get(key)
    if entry is None:
        cat = _vec_zn(n, k, q) if name == 'VecZn' else makers[name]()
        entry = _CACHE[key] = [cat, False]
    if check and not entry[1]:
        validate(entry[0])
        entry[1] = True
    return entry[0]
