"""State types and the maps between them.

A pure two-level state is carried around in three equivalent forms:

* a real moment ``M`` on the sphere of radius ``|M|``,
* the stereographic coordinate ``xi = (Mx + i My) / (|M| + Mz)``,
* the density matrix ``rho = (1 + M.sigma) / 2`` (for ``|M| <= 1``).

Units: hbar = 1, so ``H = (gamma / 2) B.sigma``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import BadTrace, NotAState, NotHermitian, PoleSingularity

EPS_POLE = 1e-12
STATE_TOL = 1e-12

# stereographic coordinate is a plain Python complex
StereoPoint = complex


class SpinVector(NamedTuple):
    x: float
    y: float
    z: float

    @property
    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)


class ComplexSpinVector(NamedTuple):
    x: complex
    y: complex
    z: complex

    def square(self) -> complex:
        """Bilinear invariant x^2 + y^2 + z^2 (no conjugation)."""
        return self.x * self.x + self.y * self.y + self.z * self.z

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=complex)


class WaveFunction2(NamedTuple):
    psi1: complex
    psi2: complex

    @property
    def norm(self) -> float:
        return math.sqrt(abs(self.psi1) ** 2 + abs(self.psi2) ** 2)

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=complex)


class DensityMatrix2(NamedTuple):
    rho11: complex
    rho12: complex
    rho21: complex
    rho22: complex

    def matrix(self) -> np.ndarray:
        return np.array([[self.rho11, self.rho12], [self.rho21, self.rho22]], dtype=complex)

    @classmethod
    def from_matrix(cls, m) -> "DensityMatrix2":
        m = np.asarray(m, dtype=complex)
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))

    def purity_defect(self) -> float:
        """max |rho^2 - rho| over the four entries."""
        m = self.matrix()
        return float(np.max(np.abs(m @ m - m)))


@dataclass(frozen=True)
class DampedGyro:
    """Gyromagnetic factor with Gilbert damping.

    ``gamma_bar = gamma / (1 - i alpha)`` is the complex factor that turns an
    undamped solution into a damped one.
    """

    gamma: float
    alpha: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.gamma) or not math.isfinite(self.alpha):
            raise ValueError("gamma and alpha must be finite")
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")

    @property
    def gamma_bar(self) -> complex:
        if self.alpha == 0:
            return complex(self.gamma)
        return self.gamma / (1 - 1j * self.alpha)

    @property
    def reduced_gamma(self) -> float:
        """gamma / (1 + alpha^2), the precession rate prefactor of the LL form."""
        return self.gamma / (1 + self.alpha * self.alpha)


def stereographic(N: Sequence[complex], M: float, eps_pole: float = EPS_POLE) -> StereoPoint:
    """Project a (possibly complex) moment onto the plane: (Nx + i Ny)/(M + Nz).

    ``M`` is the conserved length of the trajectory, passed in rather than
    recomputed from the components.
    """
    nx, ny, nz = N
    denom = M + nz
    if abs(denom) <= eps_pole * abs(M):
        raise PoleSingularity(f"|M + Nz| = {abs(denom):.3g} at the south pole")
    # In the southern hemisphere M + Nz cancels. On the (complex) sphere
    # Nx^2 + Ny^2 = (M - Nz)(M + Nz), so the conjugate form is equal and well conditioned.
    if abs(denom) < abs(M - nz):
        defect = nx * nx + ny * ny + nz * nz - M * M
        if abs(defect) <= 1e-12 * M * M:
            return (M - nz) / (nx - 1j * ny)
    return (nx + 1j * ny) / denom


def inverse_stereographic(xi: StereoPoint, M: float, eps_pole: float = EPS_POLE) -> SpinVector:
    """Rebuild the real moment of length ``M`` whose stereographic image is ``xi``."""
    if M <= 0:
        raise ValueError(f"M must be positive, got {M}")
    xi = complex(xi)
    if abs(xi) > 1.0 / eps_pole:
        return SpinVector(0.0, 0.0, -M)
    r2 = xi.real * xi.real + xi.imag * xi.imag
    d = 1.0 + r2
    return SpinVector(2.0 * xi.real * M / d, 2.0 * xi.imag * M / d, (1.0 - r2) * M / d)


def inverse_stereographic_velocity(xi: StereoPoint, xi_dot: complex, M: float) -> np.ndarray:
    """Time derivative of ``inverse_stereographic(xi, M)`` given ``d xi/dt``."""
    xc = xi.conjugate()
    xdc = xi_dot.conjugate()
    d2 = (1.0 + abs(xi) ** 2) ** 2
    vx = (xi_dot - xi_dot * xc * xc + xdc - xdc * xi * xi) / d2
    vy = -1j * (xi_dot + xi_dot * xc * xc - xdc - xdc * xi * xi) / d2
    vz = -2.0 * (xi_dot * xc + xi * xdc) / d2
    return M * np.array([vx.real, vy.real, vz.real])


def spin_to_density(M: Sequence[float]) -> DensityMatrix2:
    mx, my, mz = (float(c) for c in M)
    if math.sqrt(mx * mx + my * my + mz * mz) > 1.0 + STATE_TOL:
        raise NotAState(f"|M| = {math.sqrt(mx*mx + my*my + mz*mz):.15g} exceeds 1")
    rho12 = complex(mx, -my) / 2
    return DensityMatrix2(complex((1 + mz) / 2), rho12, rho12.conjugate(), complex((1 - mz) / 2))


def density_to_spin(rho, tol: float = STATE_TOL) -> SpinVector:
    if not isinstance(rho, DensityMatrix2):
        rho = DensityMatrix2.from_matrix(rho)
    r11, r12, r21, r22 = (complex(v) for v in rho)
    if abs(r21 - r12.conjugate()) > tol or abs(r11.imag) > tol or abs(r22.imag) > tol:
        raise NotHermitian("density matrix is not Hermitian")
    if abs(r11 + r22 - 1) > tol:
        raise BadTrace(f"trace = {r11 + r22}")
    return SpinVector((r12 + r21).real, (1j * (r12 - r21)).real, (r11 - r22).real)


def wavefunction_to_xi(psi: Sequence[complex], eps_pole: float = EPS_POLE) -> StereoPoint:
    psi1, psi2 = psi
    if abs(psi1) <= eps_pole:
        raise PoleSingularity("psi1 vanishes; xi = psi2/psi1 is at infinity")
    return complex(psi2) / complex(psi1)


def wavefunction_to_density(psi: Sequence[complex]) -> DensityMatrix2:
    """rho_ij = psi_i psi_j^*."""
    p1, p2 = (complex(c) for c in psi)
    return DensityMatrix2(
        complex(abs(p1) ** 2), p1 * p2.conjugate(), p2 * p1.conjugate(), complex(abs(p2) ** 2)
    )


def wavefunction_to_spin(psi: Sequence[complex]) -> SpinVector:
    """Moment of a (not necessarily normalized) spinor; |M| = |psi|^2."""
    p1, p2 = (complex(c) for c in psi)
    c = p1.conjugate() * p2
    return SpinVector(2 * c.real, 2 * c.imag, abs(p1) ** 2 - abs(p2) ** 2)


def spin_from_angles(theta: float, phi: float, M: float = 1.0) -> SpinVector:
    st = math.sin(theta)
    return SpinVector(M * st * math.cos(phi), M * st * math.sin(phi), M * math.cos(theta))


def xi_from_angles(theta: float, phi: float) -> StereoPoint:
    return math.tan(theta / 2) * cmath.exp(1j * phi)


def wavefunction_from_angles(theta: float, phi: float) -> WaveFunction2:
    """Spinor (cos(theta/2), e^{i phi} sin(theta/2)); the global phase is a convention."""
    return WaveFunction2(complex(math.cos(theta / 2)), math.sin(theta / 2) * cmath.exp(1j * phi))
