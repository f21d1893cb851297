"""Equations of motion and a fixed-step RK4 integrator.

The damped dynamics has four interchangeable representations:

* moment:        Landau-Lifshitz form of the LLG equation (``llg_rhs``)
* stereographic: Riccati equation for xi (``riccati_rhs``)
* density:       -i[H, rho] + i alpha [rho_dot, rho] (``damped_density_rhs``)
* spinor:        Schrodinger equation with field B - (alpha/gamma) M_dot
                 (``damped_wavefunction_rhs``)

The integrator never renormalizes; drift of the conserved quantity is reported
so that integration errors stay visible.
"""
from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate as _quad

from . import core
from .core import DampedGyro, DensityMatrix2
from .errors import NotNormalized, NotPure, StepTooLarge
from .pulses import Pulse, field_at

SIGMA = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

DRIFT_LIMIT = 1e-3


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def bloch_rhs(M, B, gamma: float) -> np.ndarray:
    """dM/dt = -gamma M x B."""
    c = _cross(M, B)
    return np.array([-gamma * c[0], -gamma * c[1], -gamma * c[2]])


def llg_rhs(M, B, gyro: DampedGyro, Mnorm: float) -> np.ndarray:
    """Explicit Landau-Lifshitz form of the Gilbert equation.

    dM/dt = -g M x B - (g alpha / |M|) M x (M x B),  g = gamma / (1 + alpha^2)
    """
    g = gyro.reduced_gamma
    mxb = _cross(M, B)
    mmxb = _cross(M, mxb)
    k = g * gyro.alpha / Mnorm
    return np.array([-g * mxb[0] - k * mmxb[0], -g * mxb[1] - k * mmxb[1], -g * mxb[2] - k * mmxb[2]])


def gilbert_residual(M, Mdot, B, gyro: DampedGyro, Mnorm: float) -> float:
    """|Mdot + gamma M x B - (alpha/|M|) M x Mdot|, the defect of the implicit Gilbert form."""
    mxb = _cross(M, B)
    mxd = _cross(M, Mdot)
    k = gyro.alpha / Mnorm
    r = [Mdot[i] + gyro.gamma * mxb[i] - k * mxd[i] for i in range(3)]
    return math.sqrt(r[0] ** 2 + r[1] ** 2 + r[2] ** 2)


def riccati_rhs(xi: complex, B, gyro: DampedGyro) -> complex:
    """d xi/dt = i gamma_bar / 2 (B- xi^2 + 2 Bz xi - B+)."""
    bp = complex(B[0], B[1])
    bm = complex(B[0], -B[1])
    return 0.5j * gyro.gamma_bar * (bm * xi * xi + 2 * B[2] * xi - bp)


def schrodinger_rhs(psi, B, gamma: float) -> np.ndarray:
    """-i (gamma/2) (B.sigma) psi with hbar = 1."""
    p1, p2 = psi[0], psi[1]
    bx, by, bz = B[0], B[1], B[2]
    h = -0.5j * gamma
    return np.array([h * (bz * p1 + complex(bx, -by) * p2), h * (complex(bx, by) * p1 - bz * p2)])


def hamiltonian(B, gamma: float) -> np.ndarray:
    return 0.5 * gamma * np.einsum("i,ijk->jk", np.asarray(B, dtype=float), SIGMA)


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix2):
        return rho.matrix()
    return np.asarray(rho, dtype=complex)


def _spin_of_matrix(m: np.ndarray) -> tuple:
    return ((m[0, 1] + m[1, 0]).real, (1j * (m[0, 1] - m[1, 0])).real, (m[0, 0] - m[1, 1]).real)


def damped_density_rhs(rho, B, gyro: DampedGyro, check: bool = True) -> np.ndarray:
    """Solve rho_dot = -i[H, rho] + i alpha [rho_dot, rho] for rho_dot.

    The implicit equation is resolved through the moment: rho -> M, LL step,
    rho_dot = (M_dot . sigma) / 2.
    """
    m = _as_matrix(rho)
    if check:
        defect = float(np.max(np.abs(m @ m - m)))
        if defect > 1e-8:
            raise NotPure(f"|rho^2 - rho| = {defect:.3g}")
    mdot = llg_rhs(_spin_of_matrix(m), B, gyro, 1.0)
    return 0.5 * np.einsum("i,ijk->jk", mdot, SIGMA)


def damped_density_defect(rho, rho_dot, B, gyro: DampedGyro) -> float:
    """max-entry defect of the implicit damped von Neumann equation."""
    m = _as_matrix(rho)
    d = np.asarray(rho_dot, dtype=complex)
    H = hamiltonian(B, gyro.gamma)
    r = d + 1j * (H @ m - m @ H) - 1j * gyro.alpha * (d @ m - m @ d)
    return float(np.max(np.abs(r)))


def damped_wavefunction_rhs(psi, B, gyro: DampedGyro, check: bool = True) -> np.ndarray:
    """Schrodinger equation in the effective field B - (alpha/gamma) M_dot.

    The effective field is real, so the spinor norm is conserved exactly.
    """
    if check:
        n = math.sqrt(abs(psi[0]) ** 2 + abs(psi[1]) ** 2)
        if abs(n - 1) > 1e-10:
            raise NotNormalized(f"|psi| = {n!r}")
    if gyro.alpha == 0 or gyro.gamma == 0:
        return schrodinger_rhs(psi, B, gyro.gamma)
    mdot = llg_rhs(core.wavefunction_to_spin(psi), B, gyro, 1.0)
    k = gyro.alpha / gyro.gamma
    beff = (B[0] - k * mdot[0], B[1] - k * mdot[1], B[2] - k * mdot[2])
    return schrodinger_rhs(psi, beff, gyro.gamma)


def gauge_phase(B0, gamma: float, t: float) -> complex:
    """exp(-i gamma int_0^t B0), which restores the trace part of the Hamiltonian.

    ``B0`` is a constant or a callable of time.
    """
    if callable(B0):
        integral, _ = _quad.quad(B0, 0.0, t, epsabs=1e-14, epsrel=1e-13, limit=200)
    else:
        integral = float(B0) * t
    return cmath.exp(-1j * gamma * integral)


# -- integration ----------------------------------------------------------------

@dataclass(frozen=True)
class EvolutionConfig:
    t_start: float
    t_end: float
    dt: float
    gyro: DampedGyro
    pulse: Pulse
    record_every: int = 1

    def __post_init__(self):
        for name in ("t_start", "t_end", "dt"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        if not 0 < self.dt <= self.t_end - self.t_start:
            raise ValueError("dt must be in (0, t_end - t_start]")
        if int(self.record_every) != self.record_every or self.record_every < 1:
            raise ValueError("record_every must be a positive integer")

    @property
    def n_steps(self) -> int:
        """Steps of size (t_end - t_start)/n_steps, the closest to dt that lands on t_end."""
        return max(1, round((self.t_end - self.t_start) / self.dt))


@dataclass
class Trajectory:
    kind: str  # "spin", "xi", "density" or "wavefunction"
    times: np.ndarray
    states: np.ndarray
    norm_drift: float

    def spins(self, M: float = 1.0) -> np.ndarray:
        """States converted to moments, shape (n, 3)."""
        if self.kind == "spin":
            return np.asarray(self.states, dtype=float)
        if self.kind == "xi":
            return np.array([core.inverse_stereographic(x, M) for x in self.states])
        if self.kind == "density":
            return np.array([_spin_of_matrix(m) for m in self.states])
        return np.array([core.wavefunction_to_spin(p) for p in self.states])

    def to_csv(self, path) -> None:
        write_trajectory_csv(path, self)


_KINDS: dict[Callable, str] = {
    bloch_rhs: "spin",
    llg_rhs: "spin",
    riccati_rhs: "xi",
    damped_density_rhs: "density",
    schrodinger_rhs: "wavefunction",
    damped_wavefunction_rhs: "wavefunction",
}


def _prepare(rhs, initial, cfg: EvolutionConfig):
    gyro, pulse = cfg.gyro, cfg.pulse
    if rhs is bloch_rhs:
        y0 = np.asarray(initial, dtype=float)
        return y0, lambda t, y: bloch_rhs(y, field_at(pulse, t), gyro.gamma)
    if rhs is llg_rhs:
        y0 = np.asarray(initial, dtype=float)
        mnorm = float(np.linalg.norm(y0))
        return y0, lambda t, y: llg_rhs(y, field_at(pulse, t), gyro, mnorm)
    if rhs is riccati_rhs:
        return complex(initial), lambda t, y: riccati_rhs(y, field_at(pulse, t), gyro)
    if rhs is damped_density_rhs:
        y0 = _as_matrix(initial)
        damped_density_rhs(y0, field_at(pulse, cfg.t_start), gyro)  # purity check on the start
        return y0, lambda t, y: damped_density_rhs(y, field_at(pulse, t), gyro, check=False)
    if rhs is schrodinger_rhs:
        y0 = np.asarray(initial, dtype=complex)
        return y0, lambda t, y: schrodinger_rhs(y, field_at(pulse, t), gyro.gamma)
    if rhs is damped_wavefunction_rhs:
        y0 = np.asarray(initial, dtype=complex)
        damped_wavefunction_rhs(y0, field_at(pulse, cfg.t_start), gyro)
        return y0, lambda t, y: damped_wavefunction_rhs(y, field_at(pulse, t), gyro, check=False)
    raise ValueError(f"unsupported right-hand side {rhs!r}")


def _drift(kind: str, states, y0) -> float:
    if kind == "xi":
        # the stereographic chart has no norm to drift
        return 0.0 if all(cmath.isfinite(x) for x in states) else math.inf
    if kind == "density":
        return max(float(np.max(np.abs(m @ m - m))) for m in states)
    ref = float(np.linalg.norm(y0))
    return max(abs(float(np.linalg.norm(s)) - ref) for s in states)


def rk4_step(f, t: float, y, h: float):
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(rhs, initial, cfg: EvolutionConfig, drift_limit: float = DRIFT_LIMIT) -> Trajectory:
    """Classic fixed-step RK4 for one of this module's right-hand sides.

    Records the initial state and every ``record_every``-th step (plus the
    final one). Raises StepTooLarge when the conserved quantity drifts by more
    than ``drift_limit``; the offending trajectory is attached to the error.
    """
    kind = _KINDS.get(rhs)
    if kind is None:
        raise ValueError(f"unsupported right-hand side {rhs!r}")
    y, f = _prepare(rhs, initial, cfg)
    y0 = y
    n = cfg.n_steps
    h = (cfg.t_end - cfg.t_start) / n
    times, states = [cfg.t_start], [y]
    for i in range(1, n + 1):
        y = rk4_step(f, cfg.t_start + (i - 1) * h, y, h)
        if i % cfg.record_every == 0 or i == n:
            times.append(cfg.t_start + i * h)
            states.append(y)
    drift = _drift(kind, states, y0)
    traj = Trajectory(kind, np.array(times), np.array(states), drift)
    if not drift <= drift_limit:
        raise StepTooLarge(f"norm drift {drift:.3g} exceeds {drift_limit:g}; reduce dt", traj)
    return traj


# -- CSV export -----------------------------------------------------------------

HEADERS = {
    "spin": ("t", "Mx", "My", "Mz"),
    "xi": ("t", "re_xi", "im_xi"),
    "wavefunction": ("t", "re_psi1", "im_psi1", "re_psi2", "im_psi2"),
}


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def write_trajectory_csv(dest, traj: Trajectory) -> None:
    """Write to a path or an open text stream. Density trajectories are written as moments."""
    if hasattr(dest, "write"):
        _write_rows(dest, traj)
    else:
        with open(dest, "w", newline="") as fh:
            _write_rows(fh, traj)


def _write_rows(fh, traj: Trajectory) -> None:
    kind = "spin" if traj.kind == "density" else traj.kind
    rows = traj.spins() if traj.kind == "density" else traj.states
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(HEADERS[kind])
    for t, s in zip(traj.times, rows):
        if kind == "spin":
            vals = [s[0], s[1], s[2]]
        elif kind == "xi":
            vals = [s.real, s.imag]
        else:
            vals = [s[0].real, s[0].imag, s[1].real, s[1].imag]
        w.writerow([_fmt(t)] + [_fmt(float(v)) for v in vals])
