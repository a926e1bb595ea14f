"""Numerical laboratory for sharp Fourier extension constants on conic sections."""

from .numerics import (
    QuadratureResult,
    SpectrumReport,
    DomainError,
    BudgetExceededError,
    ConsistencyError,
    bessel_j,
    bessel_zero,
    gegenbauer,
    integrate,
    sym_eig,
)

__all__ = [
    "QuadratureResult",
    "SpectrumReport",
    "DomainError",
    "BudgetExceededError",
    "ConsistencyError",
    "bessel_j",
    "bessel_zero",
    "gegenbauer",
    "integrate",
    "sym_eig",
]

__version__ = "0.1.0"
