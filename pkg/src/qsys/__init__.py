"""Algebra objects and Q-systems in skeletal unitary fusion categories.

The main entry points are re-exported here; see the submodules for the rest.
"""
from .algebra import (AlgebraObject, check_associative, check_commutative, check_frobenius,
                      check_haploid, check_normalized, check_rigid_haploid, check_special,
                      check_unit, convolution, deform, frobenius_form_nondegenerate,
                      semisimplicity_check)
from .category import FusionCategoryData, SumObject, builtin, validate
from .equivalence import assert_unitary_equivalence, search_algebra, solve_intertwiner
from .errors import QSysError
from .homspace import TreeMorphism
from .modules import AModule, check_local_module, check_module, check_unitary_module
from .unitarization import QSystemCertificate, pf_eigen, unitarize

__version__ = '0.1.0'

__all__ = [
    'AlgebraObject', 'AModule', 'FusionCategoryData', 'QSysError', 'QSystemCertificate',
    'SumObject', 'TreeMorphism', 'assert_unitary_equivalence', 'builtin', 'check_associative',
    'check_commutative', 'check_frobenius', 'check_haploid', 'check_local_module', 'check_module',
    'check_normalized', 'check_rigid_haploid', 'check_special', 'check_unit',
    'check_unitary_module', 'convolution', 'deform', 'frobenius_form_nondegenerate', 'pf_eigen',
    'search_algebra', 'semisimplicity_check', 'solve_intertwiner', 'unitarize', 'validate',
]
