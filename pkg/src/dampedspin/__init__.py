"""Damped two-level dynamics from closed-form Bloch solutions.

Continuing an undamped solution to the complex gyromagnetic factor
gamma / (1 - i alpha) and mapping it back to the sphere through the
stereographic coordinate gives an exact solution of the Landau-Lifshitz-Gilbert
equation.
"""
from .core import (
    ComplexSpinVector,
    DampedGyro,
    DensityMatrix2,
    SpinVector,
    WaveFunction2,
    density_to_spin,
    inverse_stereographic,
    spin_to_density,
    stereographic,
    wavefunction_to_xi,
)
from .closedform import (
    LinearXSolution,
    PrecessionSolution,
    bloch_to_llg,
    linear_x_bloch,
    linear_x_llg,
    precession_bloch,
    precession_llg,
    xi_precession,
    xi_secant,
)
from .dynamics import EvolutionConfig, Trajectory, integrate
from .pulses import ConstantZ, CosXZ, SechX, TabulatedX, field_at, pulse_area

__version__ = "0.1.0"

__all__ = [
    "ComplexSpinVector", "DampedGyro", "DensityMatrix2", "SpinVector", "WaveFunction2",
    "density_to_spin", "inverse_stereographic", "spin_to_density", "stereographic", "wavefunction_to_xi",
    "LinearXSolution", "PrecessionSolution", "bloch_to_llg", "linear_x_bloch", "linear_x_llg",
    "precession_bloch", "precession_llg", "xi_precession", "xi_secant",
    "EvolutionConfig", "Trajectory", "integrate",
    "ConstantZ", "CosXZ", "SechX", "TabulatedX", "field_at", "pulse_area",
]
