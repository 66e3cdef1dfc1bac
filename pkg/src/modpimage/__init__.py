"""Images of mod-p Galois representations over square-zero Hecke algebras.

Finite fields and the algebras T = F_q[X_1..X_m]/(X_i X_j), 2x2 matrix groups
over them, the conjugation modules, the distinct-trace census, inference of
the image from an observed trace count, and desk-scale checks of the
extension-theoretic results.
"""

from .errors import (
    CapacityError, ContractError, DatasetError, DomainError, ModpImageError, NonUnitError,
    ParameterError, TheoremViolation, Unrealizable,
)
from .ffield import FieldParams, FqElem, fq_enumerate, fq_inv, fq_mul, gf
from .imageinfer import ext_degrees, infer, multiplicity_report
from .localalg import AlgebraParams, TElem, subalgebra_generated, t_inv, t_mul
from .tracecensus import census_bruteforce, census_formula, generate_table

__version__ = "0.1.0"

__all__ = [
    "AlgebraParams", "CapacityError", "ContractError", "DatasetError", "DomainError", "FieldParams",
    "FqElem", "ModpImageError", "NonUnitError", "ParameterError", "TElem", "TheoremViolation",
    "Unrealizable", "census_bruteforce", "census_formula", "ext_degrees", "fq_enumerate", "fq_inv",
    "fq_mul", "generate_table", "gf", "infer", "multiplicity_report", "subalgebra_generated",
    "t_inv", "t_mul",
]
