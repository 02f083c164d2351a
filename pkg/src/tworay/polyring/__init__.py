from .poly import NONHOMOGENEOUS, Nonhomogeneous, Poly, Ring, multidegree, weighted_degree
from .groebner import (
    BLOCK,
    GREVLEX,
    BudgetExceeded,
    Ideal,
    MonomialOrder,
    buchberger,
    current_budget,
    dimension,
    eliminate,
    groebner,
    saturate,
)
from .pfaffian import GradedSkewMatrix, pfaffian4, pfaffians5, signed_pfaffian_vector

__all__ = [
    "NONHOMOGENEOUS", "Nonhomogeneous", "Poly", "Ring", "multidegree", "weighted_degree",
    "BLOCK", "GREVLEX", "BudgetExceeded", "Ideal", "MonomialOrder", "buchberger",
    "current_budget", "dimension", "eliminate", "groebner", "saturate",
    "GradedSkewMatrix", "pfaffian4", "pfaffians5", "signed_pfaffian_vector",
]
