"""Batch command-line front end: ``qsys validate|check|unitarize|equiv|gallery``.

Exit codes: 0 pass, 1 axiom or theorem check failed, 2 usage or input error,
3 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .algebra import (AlgebraObject, check_associative, check_commutative, check_frobenius,
                      check_haploid, check_normalized, check_rigid_haploid, check_special,
                      check_unit, unit_multiplicity)
from .category import FusionCategoryData, builtin, validate
from .equivalence import (DEFAULT_RESTARTS, NotFound, assert_unitary_equivalence, solve_intertwiner,
                          unitarity_defect)
from .errors import (MalformedData, NoConvergence, NotHaploid, NotRigid, NumericalFailure,
                     PreconditionFailed, QSysError, ShapeMismatch, UnknownName, ValidationFailed)
from .gallery import fixture, fixture_names
from .linalg import TOL_DERIVED, TOL_MORPHISM
from .modules import AModule, check_local_module, check_module, check_unitary_module
from .unitarization import unitarize

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass
class RunReport:
    """Everything a command computed. ``to_json`` leaves out the wall time so
    reruns with the same inputs and seed are byte-identical."""

    command: str
    inputs: list
    seed: int = 0
    results: dict = field(default_factory=dict)
    verdict: str = 'pass'
    message: str = ''
    wall_time: float = 0.0

    def to_dict(self, timing: bool = False) -> dict:
        out = {'command': self.command, 'inputs': list(self.inputs), 'seed': self.seed,
               'verdict': self.verdict, 'message': self.message, 'results': _plain(self.results)}
        if timing:
            out['wall_time'] = self.wall_time
        return out

    def to_json(self, timing: bool = False) -> str:
        return io.dumps(self.to_dict(timing))


def _plain(v):
    """JSON-friendly copy: numpy scalars to floats, complex to ``[re, im]``."""
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.ndarray):
        return _plain(v.tolist())
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (complex, np.complexfloating)):
        return io.cnum(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    return v


class Failure(Exception):
    """Raised inside a command to stop with a given exit code."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def default_tol(fallback: float) -> float:
    env = os.environ.get('QSF_TOL')
    if env is None:
        return fallback
    try:
        return float(env)
    except ValueError:
        raise Failure(EXIT_USAGE, f'QSF_TOL={env!r} is not a number') from None


def resolve(ref: str):
    """Algebra, module or category from a file path, a fixture name or a built-in name."""
    path = Path(ref)
    if path.exists():
        return io.load(path)
    try:
        return fixture(ref)
    except UnknownName:
        pass
    try:
        return builtin(ref, check=False)
    except (UnknownName, ValueError):
        raise Failure(EXIT_USAGE, f'{ref!r} is neither a file nor a known fixture or category') from None


def _algebra(ref: str) -> AlgebraObject:
    obj = resolve(ref)
    if isinstance(obj, AModule):
        return obj.A
    if not isinstance(obj, AlgebraObject):
        raise Failure(EXIT_USAGE, f'{ref!r} is not an algebra')
    return obj


def _table(rows) -> str:
    width = max((len(k) for k, *_ in rows), default=0)
    lines = []
    for key, value, ok in rows:
        shown = f'{value:.3e}' if isinstance(value, float) else str(value)
        status = 'info' if ok is None else ('ok' if ok else 'FAIL')
        lines.append(f'  {key:<{width}}  {shown:>12}  {status}')
    return '\n'.join(lines)


# -- commands ----------------------------------------------------------------------------------

def cmd_validate(args, report: RunReport) -> str:
    obj = resolve(args.category)
    if not isinstance(obj, FusionCategoryData):
        raise Failure(EXIT_USAGE, f'{args.category!r} is not a category')
    tol = args.tol if args.tol is not None else default_tol(TOL_MORPHISM)
    rep = validate(obj, tol=tol, strict=False)
    report.results = {'category': obj.name, **rep.to_dict()}
    text = _table([(k, v, v < tol) for k, v in rep.residuals.items()])
    if not rep.accepted:
        raise Failure(EXIT_FAIL, f'{text}\nrejected: worst residual {rep.worst}')
    return f'{text}\naccepted: {obj.name}'


CHECKS = ('associative', 'unit', 'frobenius', 'special', 'normalized', 'haploid', 'rigid', 'commutative')


def _run_check(A: AlgebraObject, name: str, tol: float):
    """``(value, ok, message)`` for one predicate."""
    if name == 'associative':
        r = check_associative(A)
        return r, r < tol, ''
    if name == 'unit':
        r = check_unit(A)
        return r, r < tol, ''
    if name == 'frobenius':
        r = check_frobenius(A)
        return r, r < tol, ''
    if name == 'special':
        r, lam = check_special(A)
        return r, r < tol, f'lambda = {lam:.12g}'
    if name == 'normalized':
        r = check_normalized(A)
        return r, r < tol, ''
    if name == 'haploid':
        k = unit_multiplicity(A)
        return k, check_haploid(A), '' if k == 1 else f'Hom(1,X) has dimension {k}'
    if name == 'rigid':
        if not check_haploid(A):
            return 'n/a', False, f'Hom(1,X) has dimension {unit_multiplicity(A)}'
        res = check_rigid_haploid(A)
        return res.rank, res.ok, '' if res.ok else res.message
    if name == 'commutative':
        if not A.category.is_braided:
            return 'n/a', False, 'ambient category has no braiding'
        r = check_commutative(A)
        return r, r < tol, ''
    raise ValueError(name)


def _module_rows(M: AModule, tol: float) -> list:
    """Module axioms must hold; unitarity and locality are reported only."""
    rows = [('module', check_module(M), None)]
    um = check_unitary_module(M, tol)
    rows.append(('unitary_module', um.residual, f'unitary: {um.ok}'))
    if M.A.category.is_braided and check_commutative(M.A) < tol:
        r = check_local_module(M, tol)
        rows.append(('local', r, f'local: {r < tol}'))
    return [(name, v, v < tol if note is None else None, note or '') for name, v, note in rows]


def cmd_check(args, report: RunReport) -> str:
    obj = resolve(args.algebra)
    A = _algebra(args.algebra)
    tol = args.tol if args.tol is not None else default_tol(TOL_DERIVED)
    chosen = [c for c in CHECKS if getattr(args, c)] or [c for c in CHECKS if c != 'commutative']
    outcomes = [(name, *_run_check(A, name, tol)) for name in chosen]
    if isinstance(obj, AModule):
        outcomes += _module_rows(obj, tol)
    rows, results, failures = [], {}, []
    for name, value, ok, msg in outcomes:
        rows.append((name, value, ok))
        results[name] = {'value': value, 'ok': ok, **({'message': msg} if msg else {})}
        if ok is False:
            failures.append((name, value, msg))
    report.results = {'algebra': A.name, 'tol': tol, 'checks': results}
    text = _table(rows)
    if failures:
        # name the worst residual among the numeric failures, else the first failure
        numeric = [f for f in failures if isinstance(f[1], float)]
        name, value, msg = max(numeric, key=lambda f: f[1]) if numeric else failures[0]
        detail = msg or f'{name} residual {value:.3e}'
        raise Failure(EXIT_FAIL, f'{text}\nfailed: {name}: {detail}')
    return text


def cmd_unitarize(args, report: RunReport) -> str:
    A = _algebra(args.algebra)
    tol = args.tol if args.tol is not None else default_tol(TOL_DERIVED)
    try:
        _, cert = unitarize(A, tol=tol)
    except (NotHaploid, NotRigid) as exc:
        raise Failure(EXIT_FAIL, f'theorem hypotheses fail: {exc}') from exc
    report.results = cert.to_dict()
    if args.out:
        Path(args.out).write_text(cert.to_json() + '\n')
    rows = [(k, v, v < tol) for k, v in cert.residuals.items()]
    rows.append(('|lambda - d(X)|', abs(cert.lam - cert.dX), cert.valid))
    text = f'{_table(rows)}\n  lambda = {cert.lam:.12g}, d(X) = {cert.dX:.12g}'
    if not cert.valid:
        raise Failure(EXIT_FAIL, f'{text}\ncertificate invalid')
    return text


def cmd_equiv(args, report: RunReport) -> str:
    A, B = _algebra(args.algebra_a), _algebra(args.algebra_b)
    tol = args.tol if args.tol is not None else default_tol(TOL_DERIVED)
    found = solve_intertwiner(A, B, seed=args.seed, restarts=args.restarts, tol=tol)
    if isinstance(found, NotFound):
        report.results = {'found': False, 'restarts': found.restarts,
                          'best_residual': found.best_residual, 'reason': found.reason}
        raise Failure(EXIT_FAIL, f'no intertwiner found ({found.reason}); this is not a proof of '
                                 f'inequivalence')
    S = found.S
    res = {'found': True, 'restart': found.restart, 'residuals': found.residuals,
           'S': {a: io.cmatrix(b) for a, b in zip(S.labels, S.blocks)},
           'unitarity_defect': unitarity_defect(S)}
    text = f'intertwiner found at restart {found.restart}\n' + _table(
        [(k, v, v < tol) for k, v in found.residuals.items()])
    try:
        unitary = assert_unitary_equivalence(S, A, B, tol=tol)
    except PreconditionFailed as exc:
        res['unitarity'] = {'applicable': False, 'precondition': exc.check}
        report.results = res
        return f'{text}\nunitarity not asserted: precondition {exc.check} fails ({exc})'
    res['unitarity'] = {'applicable': True, 'unitary': unitary}
    report.results = res
    text += f'\n  ||S*S - 1|| = {res["unitarity_defect"]:.3e}'
    if not unitary:
        raise Failure(EXIT_FAIL, f'{text}\nequivalence of normalized Q-systems is not unitary')
    return text


def cmd_gallery(args, report: RunReport) -> str:
    names = fixture_names() if args.name == 'all' else [args.name]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name in names:
        try:
            obj = fixture(name)
        except UnknownName as exc:
            raise Failure(EXIT_USAGE, str(exc)) from exc
        path = out / f'{name}.json'
        io.save(path, obj)
        written.append(str(path))
    report.results = {'written': written}
    return '\n'.join(written)


# -- entry point -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog='qsys', description='Algebra objects and Q-systems in unitary '
                                                         'fusion categories.')
    p.add_argument('--report', help='write the run report as JSON to this path')
    sub = p.add_subparsers(dest='command', required=True)

    def common(sp):
        sp.add_argument('--tol', type=float, default=None,
                        help='residual tolerance (default: QSF_TOL or the built-in value)')
        sp.add_argument('--seed', type=int, default=0, help='seed for every random choice')

    sp = sub.add_parser('validate', help='check pentagon, hexagon and unitarity of a category')
    sp.add_argument('category', help='JSON file or built-in name (Fib, Ising, RepZ2, VecZ5_k2, ...)')
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser('check', help='evaluate algebra axioms')
    sp.add_argument('algebra', help='JSON file or gallery name')
    for c in CHECKS:
        sp.add_argument(f'--{c}', action='store_true')
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser('unitarize', help='deform a haploid rigid algebra into a standard Q-system')
    sp.add_argument('algebra')
    sp.add_argument('--out', help='write the certificate JSON here')
    common(sp)
    sp.set_defaults(func=cmd_unitarize)

    sp = sub.add_parser('equiv', help='search an algebra isomorphism and test its unitarity')
    sp.add_argument('algebra_a')
    sp.add_argument('algebra_b')
    sp.add_argument('--restarts', type=int, default=DEFAULT_RESTARTS)
    common(sp)
    sp.set_defaults(func=cmd_equiv)

    sp = sub.add_parser('gallery', help='write fixture files')
    sp.add_argument('name', help="fixture name or 'all'")
    sp.add_argument('--out', default='.', help='output directory')
    sp.set_defaults(func=cmd_gallery)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    inputs = [v for k, v in vars(args).items() if k in ('category', 'algebra', 'algebra_a', 'algebra_b', 'name')]
    report = RunReport(args.command, inputs, seed=getattr(args, 'seed', 0))
    start = time.perf_counter()
    code = EXIT_OK
    try:
        print(args.func(args, report))
    except Failure as exc:
        code, report.message = exc.code, str(exc).rsplit('\n', 1)[-1]
        print(exc, file=sys.stderr if code == EXIT_USAGE else sys.stdout)
    except (NumericalFailure, NoConvergence) as exc:
        code, report.message = EXIT_NUMERIC, f'numerical failure: {exc}'
        print(report.message)
    except ValidationFailed as exc:
        code, report.message = EXIT_FAIL, f'validation failed: {exc}'
        print(report.message)
    except (MalformedData, UnknownName, ShapeMismatch, OSError) as exc:
        code, report.message = EXIT_USAGE, f'input error: {exc}'
        print(report.message, file=sys.stderr)
    except QSysError as exc:
        code, report.message = EXIT_FAIL, f'{type(exc).__name__}: {exc}'
        print(report.message)
    report.verdict = 'pass' if code == EXIT_OK else 'fail'
    report.wall_time = time.perf_counter() - start
    if args.report:
        Path(args.report).write_text(report.to_json())
    return code


if __name__ == '__main__':
    sys.exit(main())
