"""JSON serialization of categories, morphisms, algebras, modules and reports.

Complex numbers are stored as ``[re, im]`` pairs. Fusion trees are nested
lists: a leaf is ``[label, copy]`` and a node is ``[t1, t2, s, mu]``. A word is
``{"factors": [{label: mult}, ...], "nesting": tag}`` with ``tag`` one of
``single``, ``pair``, ``left``, ``right``.
"""
from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from . import homspace as hs
from .algebra import AlgebraObject
from .category import FusionCategoryData, SumObject, builtin
from .errors import MalformedData, QSysError, UnknownName
from .homspace import TreeMorphism
from .modules import AModule


def cnum(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def from_cnum(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    try:
        re, im = v
        return complex(float(re), float(im))
    except (TypeError, ValueError) as exc:
        raise MalformedData(f'expected a [re, im] pair, got {v!r}') from exc


def cmatrix(M) -> list:
    return [[cnum(z) for z in row] for row in np.atleast_2d(M)]


def from_cmatrix(rows) -> np.ndarray:
    return np.array([[from_cnum(z) for z in row] for row in rows], dtype=complex)


def dumps(obj) -> str:
    """Deterministic JSON text; key order is the insertion order of ``obj``."""
    return json.dumps(obj, indent=2) + '\n'


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise MalformedData(f'{path}: invalid JSON ({exc})') from exc


# -- categories --------------------------------------------------------------------------------

def category_to_dict(cat: FusionCategoryData) -> dict:
    out = {
        'name': cat.name,
        'labels': list(cat.labels),
        'unit': cat.unit,
        'dual': {a: cat.dual[a] for a in cat.labels},
        'fusion': [[a, b, c, n] for (a, b, c), n in sorted(cat._N.items(), key=lambda kv: [
            cat.label_index(x) for x in kv[0]])],
        'F': [],
    }
    for key in cat.f_keys():
        a, b, c, d = key
        out['F'].append({'a': a, 'b': b, 'c': c, 'd': d,
                         'rows': [list(r) for r in cat.f_rows(*key)],
                         'cols': [list(r) for r in cat.f_cols(*key)],
                         'matrix': cmatrix(cat.F[key])})
    if cat.R is not None:
        out['R'] = [{'a': a, 'b': b, 'c': c, 'matrix': cmatrix(M)} for (a, b, c), M in cat.R.items()]
    if cat.twist is not None:
        out['twist'] = {a: cnum(t) for a, t in cat.twist.items()}
    return out


def category_from_dict(d: dict) -> FusionCategoryData:
    try:
        labels = d['labels']
        fusion = {(str(a), str(b), str(c)): int(n) for a, b, c, n in d['fusion']}
        F = {}
        for rec in d.get('F', []):
            key = (rec['a'], rec['b'], rec['c'], rec['d'])
            F[key] = _reorder_f(key, rec, labels, fusion)
        R = None
        if 'R' in d:
            R = {(r['a'], r['b'], r['c']): from_cmatrix(r['matrix']) for r in d['R']}
        twist = None if 'twist' not in d else {a: from_cnum(t) for a, t in d['twist'].items()}
        return FusionCategoryData(labels, d['unit'], d['dual'], fusion, F, R, twist,
                                  name=d.get('name'))
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedData(f'category file: {exc!r}') from exc


def _reorder_f(key, rec, labels, fusion) -> np.ndarray:
    """Matrix in the canonical row/column order, whatever order the file lists them in."""
    M = from_cmatrix(rec['matrix'])
    rows = [tuple(r) for r in rec.get('rows', [])]
    cols = [tuple(r) for r in rec.get('cols', [])]
    if not rows and not cols:
        return M
    order = {a: i for i, a in enumerate(labels)}
    canon_r = sorted(rows, key=lambda r: (order[r[0]], r[1], r[2]))
    canon_c = sorted(cols, key=lambda r: (order[r[0]], r[1], r[2]))
    if M.shape != (len(rows), len(cols)):
        raise MalformedData(f'F{key}: matrix shape {M.shape} does not match its row/col lists')
    ri = [rows.index(r) for r in canon_r]
    ci = [cols.index(c) for c in canon_c]
    return M[np.ix_(ri, ci)]


def load_category(ref, base: Path | None = None) -> FusionCategoryData:
    """Category from a built-in name, a JSON path or an inline dict."""
    if isinstance(ref, FusionCategoryData):
        return ref
    if isinstance(ref, dict):
        return category_from_dict(ref)
    ref = str(ref)
    path = Path(ref) if base is None or os.path.isabs(ref) else base / ref
    if path.suffix == '.json' or path.exists():
        if not path.exists():
            raise UnknownName(f'category file {path} not found')
        return category_from_dict(read_json(path))
    return builtin(ref)


def _category_ref(cat: FusionCategoryData):
    """Built-in name when the category is a gallery one, else the inline payload."""
    try:
        ref = builtin(cat.name, check=False)
    except (QSysError, ValueError):
        return category_to_dict(cat)
    same = (ref.labels == cat.labels and ref.F.keys() == cat.F.keys()
            and all(np.array_equal(ref.F[k], cat.F[k]) for k in cat.F)
            and (ref.R is None) == (cat.R is None)
            and (cat.R is None or all(np.array_equal(ref.R[k], cat.R[k]) for k in cat.R)))
    return cat.name if same else category_to_dict(cat)


# -- words, trees, morphisms -------------------------------------------------------------------

def sum_object_to_list(X: SumObject) -> list:
    return [{'label': a, 'mult': m} for a, m in X.summands]


def sum_object_from_list(cat: FusionCategoryData, items) -> SumObject:
    try:
        return cat.obj({str(it['label']): int(it['mult']) for it in items})
    except (KeyError, TypeError) as exc:
        raise MalformedData(f'bad object description {items!r}') from exc


def word_to_dict(w) -> dict:
    tag = hs.nesting(w)
    if tag == 'other':
        raise MalformedData('only words of length at most 3 are serializable')
    return {'factors': [dict(f.summands) for f in hs.word_factors(w)], 'nesting': tag}


def word_from_dict(cat: FusionCategoryData, d: dict):
    factors = [cat.obj({str(a): int(m) for a, m in f.items()}) for f in d['factors']]
    tag = d.get('nesting', 'left')
    expected = {1: ('single',), 2: ('pair',), 3: ('left', 'right')}.get(len(factors))
    if expected is None or tag not in expected:
        raise MalformedData(f'nesting tag {tag!r} does not fit {len(factors)} factors')
    return hs.make_word(*factors, nest=tag)


def tree_to_list(t) -> list:
    if len(t) == 2:
        return [t[0], int(t[1])]
    t1, t2, s, mu = t
    return [tree_to_list(t1), tree_to_list(t2), s, int(mu)]


def tree_from_list(v) -> tuple:
    if len(v) == 2 and isinstance(v[0], str):
        return (v[0], int(v[1]))
    if len(v) == 4:
        return (tree_from_list(v[0]), tree_from_list(v[1]), str(v[2]), int(v[3]))
    raise MalformedData(f'bad fusion tree {v!r}')


def morphism_to_dict(f: TreeMorphism) -> dict:
    return {
        'source_word': word_to_dict(f.source),
        'target_word': word_to_dict(f.target),
        'coeffs': [{'src_tree': tree_to_list(ts), 's': s, 'tgt_tree': tree_to_list(tt), 'value': cnum(v)}
                   for ts, s, tt, v in f.items()],
    }


def morphism_from_dict(cat: FusionCategoryData, d: dict) -> TreeMorphism:
    try:
        f = hs.zeros(word_from_dict(cat, d['source_word']), word_from_dict(cat, d['target_word']))
        for rec in d['coeffs']:
            src, tgt = tree_from_list(rec['src_tree']), tree_from_list(rec['tgt_tree'])
            if hs.coupled(src) != rec.get('s', hs.coupled(src)):
                raise MalformedData(f'tree {rec["src_tree"]} does not end in channel {rec["s"]}')
            f.set_coeff(src, tgt, from_cnum(rec['value']))
    except KeyError as exc:
        raise MalformedData(f'morphism payload: unknown tree or missing field {exc}') from exc
    return f


# -- algebras and modules ----------------------------------------------------------------------

def algebra_to_dict(A: AlgebraObject) -> dict:
    return {
        'kind': 'algebra',
        'name': A.name,
        'category': _category_ref(A.category),
        'X': sum_object_to_list(A.X),
        'm': morphism_to_dict(A.m),
        'iota': morphism_to_dict(A.iota),
    }


def algebra_from_dict(d: dict, base: Path | None = None, cat=None) -> AlgebraObject:
    try:
        cat = cat or load_category(d['category'], base)
        X = sum_object_from_list(cat, d['X'])
        m, iota = morphism_from_dict(cat, d['m']), morphism_from_dict(cat, d['iota'])
        return AlgebraObject(X, m, iota, name=d.get('name', ''))
    except KeyError as exc:
        raise MalformedData(f'algebra file: missing field {exc}') from exc


def module_to_dict(M: AModule) -> dict:
    out = algebra_to_dict(M.A)
    out.update(kind='module', algebra_name=M.A.name, name=M.name, Y=sum_object_to_list(M.Y),
               mY=morphism_to_dict(M.mY))
    return out


def module_from_dict(d: dict, base: Path | None = None) -> AModule:
    try:
        cat = load_category(d['category'], base)
        A = algebra_from_dict({**d, 'name': d.get('algebra_name', '')}, base, cat=cat)
        Y = sum_object_from_list(cat, d['Y'])
        return AModule(A, Y, morphism_from_dict(cat, d['mY']), name=d.get('name', ''))
    except KeyError as exc:
        raise MalformedData(f'module file: missing field {exc}') from exc


def to_dict(obj) -> dict:
    if isinstance(obj, AModule):
        return module_to_dict(obj)
    if isinstance(obj, AlgebraObject):
        return algebra_to_dict(obj)
    if isinstance(obj, FusionCategoryData):
        return category_to_dict(obj)
    if isinstance(obj, TreeMorphism):
        return morphism_to_dict(obj)
    raise TypeError(f'cannot serialize {type(obj).__name__}')


def load(path):
    """Read an algebra, module or category file, dispatching on its contents."""
    path = Path(path)
    if not path.exists():
        raise UnknownName(f'{path} not found')
    d = read_json(path)
    if not isinstance(d, dict):
        raise MalformedData(f'{path}: top level must be an object')
    if d.get('kind') == 'module' or 'mY' in d:
        return module_from_dict(d, path.parent)
    if 'm' in d:
        return algebra_from_dict(d, path.parent)
    if 'labels' in d:
        return category_from_dict(d)
    raise MalformedData(f'{path}: not a category, algebra or module file')


def save(path, obj) -> None:
    write_json(path, to_dict(obj))
