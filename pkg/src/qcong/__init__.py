"""Counting solutions of ternary quadratic congruences in boxes.

The package splits into integer arithmetic helpers (`arith`), Dirichlet
character machinery (`characters`), a smooth cutoff and its Mellin data
(`smoothing`), exact and smoothed box counts (`counting`), variance and
moment computations (`moments`), L-function evaluation (`lfunc`), scan
drivers (`experiments`), and a CLI (`cli`).
"""

from .arith import FactoredModulus, admissible_moduli, factorize, jacobi, sqrt_mod, tau
from .characters import CharacterGroup, DirichletCharacter, enumerate_characters, quadratic_characters
from .counting import (
    CongruenceInstance,
    count_box_bruteforce,
    count_box_fast,
    count_box_smoothed,
    local_density,
    main_term,
    minimal_height,
    representation_count,
)
from .errors import DomainError, QcongError, ScaleCapError, ToleranceError
from .experiments import ScanConfig, ScanReport, run_ladder
from .lfunc import contour_identity_check, eighth_moment, hurwitz_zeta, l_eval
from .moments import e_moment, f_moment, g_decomposition, moment_report, variance_report
from .smoothing import SmoothWeight, mellin_transform, transition_profile

__version__ = "0.1.0"

__all__ = [
    "CharacterGroup",
    "CongruenceInstance",
    "DirichletCharacter",
    "DomainError",
    "FactoredModulus",
    "QcongError",
    "ScaleCapError",
    "ScanConfig",
    "ScanReport",
    "SmoothWeight",
    "ToleranceError",
    "admissible_moduli",
    "contour_identity_check",
    "count_box_bruteforce",
    "count_box_fast",
    "count_box_smoothed",
    "e_moment",
    "eighth_moment",
    "enumerate_characters",
    "f_moment",
    "factorize",
    "g_decomposition",
    "hurwitz_zeta",
    "jacobi",
    "l_eval",
    "local_density",
    "main_term",
    "mellin_transform",
    "minimal_height",
    "moment_report",
    "quadratic_characters",
    "representation_count",
    "run_ladder",
    "sqrt_mod",
    "tau",
    "transition_profile",
    "variance_report",
    "__version__",
]
