"""Damped self-induced transparency and damped dynamical localization."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np
from scipy import optimize

from . import specfun
from .closedform import LinearXSolution, linear_x_llg
from .core import DampedGyro, SpinVector
from .dynamics import EvolutionConfig, integrate, llg_rhs
from .pulses import SechX, pulse_area

SIT_WINDOW = 20.0  # pulse widths


def _fmt_value(v) -> str:
    if isinstance(v, (tuple, list)):
        return "(" + ", ".join(_fmt_value(c) for c in v) + ")"
    if isinstance(v, complex):
        return f"{v.real:.12g}{v.imag:+.12g}j"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


class _KeyValue:
    def to_text(self) -> str:
        """Flat ``key=value`` block, one field per line."""
        return "\n".join(f"{f.name.rstrip('_')}={_fmt_value(getattr(self, f.name))}" for f in fields(self)) + "\n"


# -- self-induced transparency ------------------------------------------------------

@dataclass(frozen=True)
class SitResonance(_KeyValue):
    x_infinity: float
    resonance_n: int
    deviation: float
    resonant: bool
    shifted: bool


@dataclass(frozen=True)
class SitReport(_KeyValue):
    x_infinity: float
    resonance_n: Optional[int]
    shifted: bool
    final_state: SpinVector
    recovery_error: float
    closed_form_state: SpinVector
    closed_form_error: float


def _nearest_resonance(x_inf: float, alpha: float, rtol: float = 1e-9):
    period = 2 * math.pi * (1 + alpha ** 2)
    n = round(x_inf / period)
    deviation = x_inf - n * period
    return n, deviation, abs(deviation) <= rtol * max(1.0, abs(x_inf))


def sit_resonance_check(gamma: float, a: float, tau: float, alpha: float) -> SitResonance:
    """Resonance bookkeeping for a sech pulse, area counted from the pulse centre.

    x(inf) = gamma a tau pi / 2; transparency needs x(inf) = 2 n pi (1 + alpha^2).
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    x_inf = gamma * a * tau * math.pi / 2
    n, dev, ok = _nearest_resonance(x_inf, alpha)
    return SitResonance(x_inf, n, dev, ok, alpha > 0)


def sit_final_state(alpha: float, x_bar_inf: float, M: float = 1.0) -> SpinVector:
    """Final moment at resonance for a start at the north pole: (tanh, 0, sech)(alpha xbar)."""
    s = alpha * x_bar_inf
    return SpinVector(M * math.tanh(s), 0.0, M / math.cosh(s))


def _angles(initial) -> tuple:
    M = float(np.linalg.norm(initial))
    theta = math.acos(max(-1.0, min(1.0, initial[2] / M)))
    phi = math.atan2(initial[1], initial[0])
    return M, theta, phi


def sit_run(pulse: SechX, gyro: DampedGyro, initial, dt: float = 1e-3,
            t_start: Optional[float] = None, t_end: Optional[float] = None) -> SitReport:
    """Integrate the LLG equation through a sech pulse and compare with the closed form.

    The default window runs from the pulse centre to 20 widths after it, so
    x_infinity matches the resonance bookkeeping of ``sit_resonance_check``.
    ``resonance_n`` counts whole 2 pi (1 + alpha^2) turns over the window that
    was actually integrated, or is None off resonance.
    """
    if t_start is None:
        t_start = pulse.t0
    if t_end is None:
        t_end = pulse.t0 + SIT_WINDOW * pulse.tau
    initial = tuple(float(c) for c in initial)
    cfg = EvolutionConfig(t_start, t_end, dt, gyro, pulse)
    traj = integrate(llg_rhs, initial, cfg)
    final = SpinVector(*traj.states[-1])

    M, theta, phi = _angles(initial)
    closed = linear_x_llg(
        LinearXSolution.from_angles(theta, phi, gyro.gamma, pulse, gyro.alpha, M, t_ref=t_start), t_end
    )
    x_inf = gyro.gamma * pulse_area(pulse, t_start, t_end)
    n, _, ok = _nearest_resonance(x_inf, gyro.alpha, rtol=1e-6)
    return SitReport(
        x_infinity=x_inf,
        resonance_n=n if ok else None,
        shifted=gyro.alpha > 0,
        final_state=final,
        recovery_error=float(np.linalg.norm(np.subtract(final, initial))),
        closed_form_state=closed,
        closed_form_error=float(np.linalg.norm(np.subtract(final, closed))),
    )


def sit_transparency_optimum(alpha: float, gamma: float = 1.0, tau: float = 1.0,
                             lo: float = 3.5, hi: float = 4.5, dt: float = 1e-2,
                             xtol: float = 1e-7) -> float:
    """Value of gamma a tau where the numerically integrated final My vanishes.

    Starting from the north pole, My(inf) is proportional to sin(xbar(inf)),
    so its sign change inside [lo, hi] marks the transparency condition.
    """
    def final_my(gat):
        pulse = SechX(gat / (gamma * tau), tau, 0.0)
        cfg = EvolutionConfig(0.0, SIT_WINDOW * tau, dt * tau, DampedGyro(gamma, alpha), pulse)
        return integrate(llg_rhs, (0.0, 0.0, 1.0), cfg).states[-1][1]

    return optimize.brentq(final_my, lo, hi, xtol=xtol)


# -- dynamical localization ----------------------------------------------------------

@dataclass(frozen=True)
class DynlocReport(_KeyValue):
    chi: float
    lambda_: float
    q2_mean: complex
    secular_omega: complex
    t_chi: float
    expansion_error: float


def q2_from_chi(chi: float, alpha: float, cfg: specfun.BesselConfig = specfun.DEFAULT) -> complex:
    """<q^2> = J0(chi / (1 - i alpha)) = J0(lambda (1 + i alpha))."""
    lam = chi / (1 + alpha ** 2)
    return specfun.bessel_j(0, complex(lam, lam * alpha), cfg)


def dynloc_q2(a: float, gamma: float, omega: float, alpha: float = 0.0,
              cfg: specfun.BesselConfig = specfun.DEFAULT) -> complex:
    if not omega > 0:
        raise ValueError("omega must be positive")
    return q2_from_chi(2 * a * gamma / omega, alpha, cfg)


def dynloc_q2_numeric(a: float, gamma: float, omega: float, alpha: float = 0.0,
                      n_points: int = 4096) -> complex:
    """Period average of q^2 = exp(2 i a gamma_bar sin(omega t) / omega), trapezoidal rule.

    For a smooth periodic integrand the trapezoidal rule over one period is
    spectrally accurate, so this is an independent check of the Bessel value.
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    gbar = gamma / (1 - 1j * alpha)
    t = np.arange(n_points) * (2 * math.pi / omega) / n_points
    return complex(np.mean(np.exp(2j * a * gbar * np.sin(omega * t) / omega)))


def q2_expansion(chi: float, alpha: float) -> complex:
    """Second-order Taylor expansion of J0(chi / (1 - i alpha)) in alpha.

        J0 - i alpha chi J1 + alpha^2 (chi/2) (J1 + chi J0)

    At a zero of J0 this is -i alpha chi J1(chi) + alpha^2 (chi/2)^2 J2(chi).
    """
    j0 = specfun.bessel_j(0, chi).real
    j1 = specfun.bessel_j(1, chi).real
    return complex(j0 + alpha ** 2 * 0.5 * chi * (j1 + chi * j0), -alpha * chi * j1)


def dynloc_secular(epsilon: float, gamma: float, chi: float, alpha: float) -> complex:
    """Off-resonance secular frequency epsilon gamma <q^2>."""
    return epsilon * gamma * q2_from_chi(chi, alpha)


def secular_expansion(epsilon: float, gamma: float, chi: float, alpha: float) -> complex:
    return epsilon * gamma * q2_expansion(chi, alpha)


def secular_expansion_error(epsilon: float, gamma: float, chi: float, alpha: float) -> float:
    return abs(dynloc_secular(epsilon, gamma, chi, alpha) - secular_expansion(epsilon, gamma, chi, alpha))


def _bessel_table(chi: float, order: int) -> dict:
    return {k: specfun.bessel_j(k, chi).real for k in range(-order, order + 1)}


def dynloc_t_chi(chi: float, n_max: int = 50, swap_order: bool = False) -> float:
    """T(chi) = -sum_{m,n != 0} J_n J_{n-m} J_m / (m n) with |m|, |n| <= n_max.

    Summed with m in the outer loop, or n in the outer loop with ``swap_order``.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    J = _bessel_table(chi, 2 * n_max)
    idx = [k for k in range(-n_max, n_max + 1) if k != 0]
    total = 0.0
    for outer in idx:
        for inner in idx:
            m, n = (inner, outer) if swap_order else (outer, inner)
            total += J[n] * J[n - m] * J[m] / (m * n)
    return -total


def resonant_secular(chi: float, gamma: float, epsilon: float, omega: float, n_max: int = 50) -> float:
    """Third-order secular frequency at a localization point: 2 gamma^3 eps^3 T(chi) / omega^2."""
    return 2 * gamma ** 3 * epsilon ** 3 * dynloc_t_chi(chi, n_max) / omega ** 2


def dynloc_report(chi: float, alpha: float, epsilon: float = 1.0, gamma: float = 1.0,
                  n_max: int = 50) -> DynlocReport:
    q2 = q2_from_chi(chi, alpha)
    omega = epsilon * gamma * q2
    return DynlocReport(
        chi=chi,
        lambda_=chi / (1 + alpha ** 2),
        q2_mean=q2,
        secular_omega=omega,
        t_chi=dynloc_t_chi(chi, n_max),
        expansion_error=abs(omega - secular_expansion(epsilon, gamma, chi, alpha)),
    )


def min_abs_j0_damped(alpha: float, x_max: float = 30.0, n_grid: int = 3000) -> tuple:
    """(argmin, min) of |J0(x (1 + i alpha))| over real x in (0, x_max].

    Coarse grid followed by bounded scalar refinement around the best point.
    The Bessel domain is widened to cover |x (1 + i alpha)| at x = x_max.
    """
    cfg = specfun.BesselConfig(domain_radius=max(specfun.DEFAULT.domain_radius,
                                                 x_max * math.hypot(1.0, alpha) * (1 + 1e-12)))

    def mod(x):
        return abs(specfun.bessel_j(0, complex(x, x * alpha), cfg))

    xs = np.linspace(x_max / n_grid, x_max, n_grid)
    vals = np.array([mod(x) for x in xs])
    i = int(np.argmin(vals))
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, n_grid - 1)]
    res = optimize.minimize_scalar(mod, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    if res.fun < vals[i]:
        return float(res.x), float(res.fun)
    return float(xs[i]), float(vals[i])


def write_scan_csv(path, rows) -> None:
    """Rows of (param, complex value) as ``param,value_re,value_im``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("param", "value_re", "value_im"))
        for p, v in rows:
            v = complex(v)
            w.writerow((f"{p:.12g}", f"{v.real:.12g}", f"{v.imag:.12g}"))
