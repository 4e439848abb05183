"""Complex-time Hamiltonian flows acting on Kahler structures."""

from ._core import (
    Evolved,
    GeodesicProbe,
    KahlerflowError,
    System,
    expm,
    geodesic_probe,
    linear_model,
    parse_expr,
    quartic_model,
    separable_model,
    standard_system,
    su2_algebra,
    torus_model,
    tstark_classification,
    tstark_closed_form,
    tstark_kappa,
    tstark_lie_series,
    tstark_potential_check,
)

__all__ = [
    "Evolved",
    "GeodesicProbe",
    "KahlerflowError",
    "System",
    "expm",
    "geodesic_probe",
    "linear_model",
    "parse_expr",
    "quartic_model",
    "separable_model",
    "standard_system",
    "su2_algebra",
    "torus_model",
    "tstark_classification",
    "tstark_closed_form",
    "tstark_kappa",
    "tstark_lie_series",
    "tstark_potential_check",
]
