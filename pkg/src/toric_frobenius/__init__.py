"""Frobenius push-forwards of rank-one reflexive sheaves on toric varieties.

``F_* O_X(D)`` splits as a sum of ``O_X(E)``, with ``O_X(E)`` appearing once
for every point of the cube ``{0, ..., ell-1}^r`` of T-divisors in the class
``D - ell*E``. This package computes that splitting exactly and checks it
against independent lattice-point counts.
"""

from .classgroup import ClassGroup, DivisorClass, compute_class_group
from .fan import (
    BUILTIN_NAMES,
    Fan,
    builtin_fan,
    is_complete,
    is_simplicial,
    is_smooth,
    validate,
)
from .frobenius import (
    BudgetExceeded,
    ClassDistribution,
    Decomposition,
    class_distribution,
    class_distribution_convolution,
    class_distribution_cube,
    decompose,
    multiplicity,
)
from .lattice import IntMatrix, kernel_basis, smith_normal_form, solve_integer
from .sections import UNBOUNDED, count_effective_divisors, count_lattice_points, h0, polytope_of
from .verify import SuiteConfig, run_suite

__version__ = "0.1.0"
