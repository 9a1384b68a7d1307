"""Quasimodular descendent potentials of K3 surfaces in imprimitive curve classes.

Exact q-series arithmetic, Hecke operators, (quasi)modular decomposition at
levels 1 and 2, symbolic descendent potentials, and the genus-2 degeneration
check in divisibility 2.
"""

from .qseries import PrecisionError, QSeries, b_op, dq, u_op
from .hecke import c_coeff, hecke_t, mobius, t_wrong
from .modforms import QMForm, ddc2, decompose, discriminant, eisenstein_c, to_qseries
from .potentials import (
    Insertion, InsertionClass, PotentialExpr, PotentialKey, apply_mcf, assemble_H,
    check_divisor_compat, reduce,
)
from .catalogue import Catalogue, base_series, evaluate
from .degeneration import assemble_f22, crosscheck_mcf

__version__ = "0.1.0"

__all__ = [
    "Catalogue", "Insertion", "InsertionClass", "PotentialExpr", "PotentialKey",
    "PrecisionError", "QMForm", "QSeries", "apply_mcf", "assemble_H", "assemble_f22",
    "b_op", "base_series", "c_coeff", "check_divisor_compat", "crosscheck_mcf", "ddc2",
    "decompose", "discriminant", "dq", "eisenstein_c", "evaluate", "hecke_t", "mobius",
    "reduce", "t_wrong", "to_qseries", "u_op",
]
