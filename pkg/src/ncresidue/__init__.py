"""Exact symbol calculus and noncommutative residues on ordinary and quantum tori."""

from .calculus import (
    DecompositionCertificate,
    commutator_exp,
    commutator_xi,
    compose,
    residue,
    trace_defect,
    uniqueness_decompose,
)
from .cyclotomic import CyclotomicScalar, cyclotomic_phase, cyclotomic_polynomial
from .errors import (
    CalculusError,
    CriticalDegreeError,
    DomainError,
    InsufficientExpansionError,
    ParseError,
    ValidationError,
)
from .nctorus import (
    NCPolynomial,
    NCSymbol,
    SemiclassicalReport,
    Theta,
    nc_apply,
    nc_compose,
    nc_residue,
    nc_trace_defect,
    nc_u,
    nc_v,
    semiclassical_check,
    to_euclidean,
)
from .scalars import (
    ComplexRational,
    PiGradedScalar,
    gamma_half,
    sphere_monomial_integral,
    sphere_surface_measure,
    torus_volume,
)
from .symbols import (
    ClassicalSymbol,
    HomogeneousComponent,
    SymbolTerm,
    TrigPolynomial,
    canonicalize,
    euler_antiderivatives,
    exp_symbol,
    monomial_symbol,
    one_symbol,
    sphere_average,
    xi_symbol,
    zero_component,
)

__all__ = [
    "CalculusError",
    "ClassicalSymbol",
    "ComplexRational",
    "CriticalDegreeError",
    "CyclotomicScalar",
    "DecompositionCertificate",
    "DomainError",
    "HomogeneousComponent",
    "InsufficientExpansionError",
    "NCPolynomial",
    "NCSymbol",
    "ParseError",
    "PiGradedScalar",
    "SemiclassicalReport",
    "SymbolTerm",
    "Theta",
    "TrigPolynomial",
    "ValidationError",
    "canonicalize",
    "commutator_exp",
    "commutator_xi",
    "compose",
    "cyclotomic_phase",
    "cyclotomic_polynomial",
    "euler_antiderivatives",
    "exp_symbol",
    "gamma_half",
    "monomial_symbol",
    "nc_apply",
    "nc_compose",
    "nc_residue",
    "nc_trace_defect",
    "nc_u",
    "nc_v",
    "one_symbol",
    "residue",
    "semiclassical_check",
    "sphere_average",
    "sphere_monomial_integral",
    "sphere_surface_measure",
    "to_euclidean",
    "torus_volume",
    "trace_defect",
    "uniqueness_decompose",
    "xi_symbol",
    "zero_component",
]

__version__ = "0.1.0"
