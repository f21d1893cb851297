"""Closed-form Bloch solutions and their damped (LLG) counterparts.

A Bloch solution that is analytic in gamma is evaluated at the complex factor
gamma / (1 - i alpha). The resulting complex moment N is projected
stereographically, and the real moment rebuilt from that point solves the LLG
equation with the original real gamma and damping alpha.

Two families are catalogued:

``precession``
    constant field (0, 0, B0), Omega = gamma B0;
``linear_x``
    arbitrary x-polarized field (b(t), 0, 0), parametrized by
    a = (1 - xi0) / (1 + xi0) = r e^{iu}.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from . import core
from .core import ComplexSpinVector, SpinVector, StereoPoint
from .errors import PoleSingularity, UnknownFamily, UnsupportedPulse
from .pulses import X_POLARIZED, Pulse, field_at, pulse_area


@dataclass(frozen=True)
class PrecessionSolution:
    theta0: float
    phi0: float
    Omega: float
    alpha: float = 0.0
    M: float = 1.0

    @property
    def omega_prime(self) -> float:
        return self.Omega / (1 + self.alpha ** 2)

    @property
    def omega_bar(self) -> complex:
        return self.Omega / (1 - 1j * self.alpha)


@dataclass(frozen=True)
class LinearXSolution:
    """Bloch/LLG solution under an x-polarized drive.

    ``r`` and ``u`` are the modulus and argument of ``a``. The initial
    orientation holds at ``t_ref`` and the pulse area is measured from there.
    """

    r: float
    u: float
    gamma: float
    pulse: Pulse
    alpha: float = 0.0
    M: float = 1.0
    t_ref: float = 0.0

    def __post_init__(self):
        if not isinstance(self.pulse, X_POLARIZED):
            raise UnsupportedPulse(f"{type(self.pulse).__name__} is not x-polarized")

    @classmethod
    def from_angles(cls, theta0: float, phi0: float, gamma: float, pulse: Pulse,
                    alpha: float = 0.0, M: float = 1.0, t_ref: float = 0.0) -> "LinearXSolution":
        xi0 = core.xi_from_angles(theta0, phi0)
        if abs(1 + xi0) <= core.EPS_POLE:
            raise PoleSingularity("initial moment along -x makes a infinite")
        a = (1 - xi0) / (1 + xi0)
        return cls(abs(a), cmath.phase(a), gamma, pulse, alpha, M, t_ref)

    @property
    def a(self) -> complex:
        return cmath.rect(self.r, self.u)

    @property
    def gamma_bar(self) -> complex:
        return self.gamma / (1 - 1j * self.alpha)

    def area(self, t: float) -> float:
        return pulse_area(self.pulse, self.t_ref, t)

    def x(self, t: float) -> float:
        """Undamped rotation angle gamma f(t)."""
        return self.gamma * self.area(t)

    def x_bar(self, t: float) -> float:
        """Damped rotation angle gamma f(t) / (1 + alpha^2)."""
        return self.gamma * self.area(t) / (1 + self.alpha ** 2)


# -- precession --------------------------------------------------------------

def precession_bloch(s: PrecessionSolution, t: float) -> SpinVector:
    st = math.sin(s.theta0)
    phase = s.Omega * t + s.phi0
    return SpinVector(s.M * st * math.cos(phase), s.M * st * math.sin(phase), s.M * math.cos(s.theta0))


def precession_llg(s: PrecessionSolution, t: float) -> SpinVector:
    """Damped precession relaxing to (0, 0, sign(Omega) M)."""
    st, ct = math.sin(s.theta0), math.cos(s.theta0)
    if st == 0 or s.alpha == 0:
        return precession_bloch(replace(s, Omega=s.omega_prime), t)
    wp = s.omega_prime
    g = s.alpha * wp * t
    # cosh/sinh scaled by 2 e^{-|g|} so that long times do not overflow
    q = math.exp(-2 * abs(g))
    sg = math.copysign(1.0, g)
    ch, sh = 1 + q, sg * (1 - q)
    denom = ch + ct * sh
    scale = 2 * math.exp(-abs(g)) / denom
    phase = wp * t + s.phi0
    return SpinVector(
        s.M * st * math.cos(phase) * scale,
        s.M * st * math.sin(phase) * scale,
        s.M * (ct * ch + sh) / denom,
    )


def xi_precession(s: PrecessionSolution, t: float) -> StereoPoint:
    if abs(math.cos(s.theta0) + 1) <= core.EPS_POLE:
        raise PoleSingularity("theta0 = pi is the south pole")
    wp = s.omega_prime
    return math.tan(s.theta0 / 2) * cmath.exp(1j * (wp * t + s.phi0)) * math.exp(-s.alpha * wp * t)


# -- linear x drive ------------------------------------------------------------

def _linear_x_components(M: float, r: float, u: float, angle) -> tuple:
    d = 1 + r * r
    if isinstance(angle, complex):
        sin, cos = cmath.sin, cmath.cos
    else:
        sin, cos = math.sin, math.cos
    return M * (1 - r * r) / d, -2 * M * r * sin(angle + u) / d, 2 * M * r * cos(angle + u) / d


def linear_x_bloch(s: LinearXSolution, t: float) -> SpinVector:
    return SpinVector(*_linear_x_components(s.M, s.r, s.u, s.x(t)))


def linear_x_llg(s: LinearXSolution, t: float) -> SpinVector:
    """Damped solution under the x drive.

    Dividing the E = e^{alpha xbar} form through by E^2 shows it is the Bloch
    form with r -> r e^{-alpha xbar} and x -> xbar; that form avoids overflow.
    """
    xb = s.x_bar(t)
    return SpinVector(*_linear_x_components(s.M, s.r * math.exp(-s.alpha * xb), s.u, xb))


def xi_secant(s: LinearXSolution, t: float) -> StereoPoint:
    A = s.a * cmath.exp(1j * s.gamma_bar * s.area(t))
    denom = 1 + A
    if abs(denom) <= core.EPS_POLE:
        raise PoleSingularity("1 + a exp(i gamma_bar f) vanishes")
    return (1 - A) / denom


# -- generic pipeline -------------------------------------------------------------

FAMILIES = ("precession", "linear_x")


def _with_alpha(family: str, params, alpha: float):
    if family == "precession":
        if not isinstance(params, PrecessionSolution):
            raise TypeError("precession family needs PrecessionSolution params")
    elif family == "linear_x":
        if not isinstance(params, LinearXSolution):
            raise TypeError("linear_x family needs LinearXSolution params")
    else:
        raise UnknownFamily(f"unknown solution family {family!r}; known: {', '.join(FAMILIES)}")
    return replace(params, alpha=alpha)


def complexified_bloch(family: str, params, alpha: float, t: float) -> ComplexSpinVector:
    """N(t) = M(gamma_bar, t): the Bloch solution with gamma -> gamma/(1 - i alpha)."""
    p = _with_alpha(family, params, alpha)
    if family == "precession":
        st = math.sin(p.theta0)
        phase = p.omega_bar * t + p.phi0
        return ComplexSpinVector(p.M * st * cmath.cos(phase), p.M * st * cmath.sin(phase),
                                 complex(p.M * math.cos(p.theta0)))
    return ComplexSpinVector(*_linear_x_components(p.M, p.r, p.u, complex(p.gamma_bar * p.area(t))))


def bloch_to_llg(family: str, params, alpha: float, t: float) -> SpinVector:
    """Damped moment at time t via continuation, projection and reconstruction."""
    N = complexified_bloch(family, params, alpha, t)
    xi = core.stereographic(N, params.M)
    return core.inverse_stereographic(xi, params.M)


def family_field(family: str, params, t: float, gamma: float = 1.0) -> np.ndarray:
    """Field driving the family; for precession, B0 = Omega / gamma."""
    if family == "precession":
        return np.array([0.0, 0.0, params.Omega / gamma])
    if family == "linear_x":
        return field_at(params.pulse, t)
    raise UnknownFamily(family)


def family_xi(family: str, params, alpha: float, t: float) -> StereoPoint:
    p = _with_alpha(family, params, alpha)
    return xi_precession(p, t) if family == "precession" else xi_secant(p, t)


def family_xi_dot(family: str, params, alpha: float, t: float) -> complex:
    """Analytic d xi / dt of the damped family."""
    p = _with_alpha(family, params, alpha)
    if family == "precession":
        return 1j * p.omega_bar * xi_precession(p, t)
    b = field_at(p.pulse, t)[0]
    A = p.a * cmath.exp(1j * p.gamma_bar * p.area(t))
    A_dot = 1j * p.gamma_bar * b * A
    return -2 * A_dot / (1 + A) ** 2


def bloch_to_llg_velocity(family: str, params, alpha: float, t: float) -> np.ndarray:
    """Analytic dM'/dt, obtained by differentiating the stereographic reconstruction."""
    xi = family_xi(family, params, alpha, t)
    return core.inverse_stereographic_velocity(xi, family_xi_dot(family, params, alpha, t), params.M)
