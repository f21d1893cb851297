"""Acceptance gate: nine criteria at their stated tolerances.

Each check returns (passed, detail). Under pytest each criterion is one test
and prints a PASS/FAIL line (visible with ``-s``); run this file directly to
print all nine lines as a summary.
"""
import math
import sys
import time

import mpmath
import numpy as np

from dampedspin.closedform import (
    FAMILIES,
    LinearXSolution,
    PrecessionSolution,
    bloch_to_llg,
    bloch_to_llg_velocity,
    family_field,
    precession_bloch,
    precession_llg,
)
from dampedspin.core import DampedGyro, spin_from_angles, spin_to_density, wavefunction_from_angles, xi_from_angles
from dampedspin.dynamics import (
    EvolutionConfig,
    bloch_rhs,
    damped_density_rhs,
    damped_wavefunction_rhs,
    gilbert_residual,
    integrate,
    llg_rhs,
    riccati_rhs,
)
from dampedspin.experiments import (
    dynloc_q2,
    dynloc_q2_numeric,
    dynloc_t_chi,
    secular_expansion_error,
    sit_final_state,
    sit_run,
    sit_transparency_optimum,
)
from dampedspin.pulses import ConstantZ, SechX
from dampedspin.specfun import bessel_j, j0_complex_via_expansion, j0_zero


def _report(n, ok, detail, elapsed):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail} ({elapsed:.1f}s)")


def _run(n, check):
    t0 = time.perf_counter()
    ok, detail = check()
    _report(n, ok, detail, time.perf_counter() - t0)
    return ok, detail


# 1. continuation + stereographic reconstruction solves the LL form

def check_1():
    params = {
        "precession": PrecessionSolution(1.1, 0.4, 1.3, M=1.7),
        "linear_x": LinearXSolution.from_angles(0.8, -0.6, 1.2, SechX(1.0, 1.0, 2.0), M=1.7),
    }
    h = 1e-5
    worst_fd = worst_gil = 0.0
    for name in FAMILIES:
        p = params[name]
        for alpha in (0.01, 0.1, 1.0):
            gyro = DampedGyro(1.0 if name == "precession" else p.gamma, alpha)
            for t in np.linspace(0.25, 8.0, 12):
                B = family_field(name, p, t)
                m = np.array(bloch_to_llg(name, p, alpha, t))
                rhs = llg_rhs(m, B, gyro, p.M)
                fd = (np.array(bloch_to_llg(name, p, alpha, t + h))
                      - np.array(bloch_to_llg(name, p, alpha, t - h))) / (2 * h)
                worst_fd = max(worst_fd, np.linalg.norm(fd - rhs) / np.linalg.norm(rhs))
                v = bloch_to_llg_velocity(name, p, alpha, t)
                worst_gil = max(worst_gil, gilbert_residual(m, v, B, gyro, p.M))
    ok = worst_fd <= 1e-6 and worst_gil <= 1e-10
    return ok, f"FD relative residual {worst_fd:.2e} <= 1e-6, Gilbert residual {worst_gil:.2e} <= 1e-10"


# 2. vector, stereographic and density evolutions agree

def check_2():
    theta, phi, alpha = 1.2, 0.4, 0.1
    M0 = spin_from_angles(theta, phi)
    worst = 0.0
    for pulse in (ConstantZ(1.0), SechX(1.0, 1.0, 3.0)):
        cfg = EvolutionConfig(0.0, 10.0, 1e-3, DampedGyro(1.0, alpha), pulse)
        vec = integrate(llg_rhs, M0, cfg).spins()
        ric = integrate(riccati_rhs, xi_from_angles(theta, phi), cfg).spins()
        den = integrate(damped_density_rhs, spin_to_density(M0), cfg).spins()
        worst = max(worst, np.max(np.abs(vec - ric)), np.max(np.abs(vec - den)))
    return worst <= 1e-7, f"max pointwise disagreement {worst:.2e} <= 1e-7"


# 3. purity of rho' and unitarity of psi' under damping

def check_3():
    theta, phi = 2.0, -0.7
    purity = drift = 0.0
    for pulse in (ConstantZ(1.0), SechX(1.5, 0.8, 4.0)):
        for alpha in (0.01, 0.1, 1.0):
            cfg = EvolutionConfig(0.0, 10.0, 1e-3, DampedGyro(1.0, alpha), pulse, record_every=10)
            rho = integrate(damped_density_rhs, spin_to_density(spin_from_angles(theta, phi)), cfg)
            psi = integrate(damped_wavefunction_rhs, wavefunction_from_angles(theta, phi), cfg)
            purity = max(purity, rho.norm_drift)
            drift = max(drift, psi.norm_drift)
    ok = purity <= 1e-8 and drift <= 1e-8
    return ok, f"max|rho^2 - rho| {purity:.2e}, wavefunction norm drift {drift:.2e} (both <= 1e-8)"


# 4. damped precession

def check_4():
    alpha = 0.1
    s = PrecessionSolution(math.pi / 2, 0.0, 1.0, alpha)
    cfg = EvolutionConfig(0.0, 10.0, 1e-3, DampedGyro(1.0, alpha), ConstantZ(1.0))
    traj = integrate(llg_rhs, precession_llg(s, 0), cfg)
    err = max(np.max(np.abs(m - precession_llg(s, t))) for t, m in zip(traj.times, traj.states))
    T = 10 / (alpha * s.omega_prime)
    closed = np.linalg.norm(np.subtract(precession_llg(s, T), (0, 0, 1)))
    long = integrate(llg_rhs, precession_llg(s, 0), EvolutionConfig(0.0, T, 1e-2, DampedGyro(1.0, alpha),
                                                                     ConstantZ(1.0)))
    numeric = np.linalg.norm(long.states[-1] - np.array([0, 0, 1.0]))
    ok = err <= 1e-8 and closed < 1e-3 and numeric < 1e-3
    return ok, (f"closed form vs RK4 {err:.2e} <= 1e-8; |M'(T) - (0,0,M)| = {closed:.2e} closed form, "
                f"{numeric:.2e} RK4, at T = {T:.1f} (< 1e-3)")


# 5. SIT resonance shift

def check_5():
    alpha = 0.1
    opt = sit_transparency_optimum(alpha)
    rep = sit_run(SechX(4 * (1 + alpha ** 2), 1.0, 0.0), DampedGyro(1.0, alpha), (0.0, 0.0, 1.0))
    expect = sit_final_state(alpha, 2 * math.pi)
    err = float(np.max(np.abs(np.subtract(rep.final_state, expect))))
    ok = abs(opt - 4 * (1 + alpha ** 2)) <= 1e-3 and err <= 1e-6
    return ok, f"optimum gamma a tau = {opt:.6f} (target 4.04 +- 1e-3); final state error {err:.2e} <= 1e-6"


# 6. localization destroyed by damping

def check_6():
    z = j0_zero(1)
    a = z / 2
    q0 = abs(dynloc_q2(a, 1.0, 1.0, 0.0))
    q1 = dynloc_q2(a, 1.0, 1.0, 0.01)
    quad = dynloc_q2_numeric(a, 1.0, 1.0, 0.01)
    ratio = secular_expansion_error(1.0, 1.0, z, 0.02) / secular_expansion_error(1.0, 1.0, z, 0.01)
    ok = (q0 <= 1e-10 and abs(q1.imag / -0.0124845 - 1) <= 0.01 and abs(q1 - quad) <= 1e-10
          and abs(q1.real) <= 0.01 * abs(q1.imag) and 7 <= ratio <= 9)
    return ok, (f"|<q2>|(alpha=0) = {q0:.1e}; <q2>(alpha=0.01) = {q1.real:.2e}{q1.imag:+.7f}i "
                f"(series vs quadrature {abs(q1 - quad):.1e}); expansion error ratio {ratio:.3f} in [7, 9]")


# 7. Bessel layer

def _mp_bisect_zero(k):
    lo, hi = mpmath.mpf((k - 0.75) * math.pi), mpmath.mpf((k + 0.25) * math.pi)
    flo = mpmath.besselj(0, lo)
    for _ in range(80):
        mid = (lo + hi) / 2
        fm = mpmath.besselj(0, mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return float((lo + hi) / 2)


def check_7():
    zeros = max(abs(j0_zero(k) - _mp_bisect_zero(k)) for k in range(1, 6))
    theta = np.arange(4096) * 2 * np.pi / 4096
    ja = max(abs(np.mean(np.exp(1j * chi * np.sin(theta))) - bessel_j(0, chi)) for chi in (0.5, 1.0, 2.4, 7.3, 12.0))
    exp = max(abs(j0_complex_via_expansion(lam, al, km) - bessel_j(0, lam * (1 + 1j * al)))
              for lam, al, km in ((2.4048255577, 0.1, 20), (1.0, 1.0, 30)))
    j1 = min(abs(bessel_j(1, j0_zero(k))) for k in range(1, 6))
    ok = zeros <= 1e-10 and ja <= 1e-10 and exp <= 1e-12 and j1 > 0.1
    return ok, (f"zeros vs bisection {zeros:.1e}; Jacobi-Anger {ja:.1e}; expansion {exp:.1e}; "
                f"min|J1| at zeros {j1:.3f} > 0.1")


# 8. T(chi) convergence

def check_8():
    z = j0_zero(1)
    diff = abs(dynloc_t_chi(z, 50) - dynloc_t_chi(z, 100))
    brute = 0.0
    for m in (-1, 1):
        for n in (-1, 1):
            brute += bessel_j(n, z).real * bessel_j(n - m, z).real * bessel_j(m, z).real / (m * n)
    exact = dynloc_t_chi(z, 1) == -brute
    return diff < 1e-10 and exact, f"|T50 - T100| = {diff:.1e} < 1e-10; n_max=1 equals enumeration exactly: {exact}"


# 9. RK4 order

def check_9():
    s = PrecessionSolution(1.0, 0.2, 1.0)

    def err(dt):
        cfg = EvolutionConfig(0.0, 10.0, dt, DampedGyro(1.0), ConstantZ(1.0))
        traj = integrate(bloch_rhs, precession_bloch(s, 0), cfg)
        return max(np.max(np.abs(m - precession_bloch(s, t))) for t, m in zip(traj.times, traj.states))

    ratio = err(0.1) / err(0.05)
    return 14 <= ratio <= 18, f"error ratio dt/(dt/2) = {ratio:.3f} in [14, 18]"


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9]


def test_criterion_1_transformation():
    assert _run(1, check_1)[0]


def test_criterion_2_three_representations():
    assert _run(2, check_2)[0]


def test_criterion_3_purity_and_unitarity():
    assert _run(3, check_3)[0]


def test_criterion_4_damped_precession():
    assert _run(4, check_4)[0]


def test_criterion_5_sit_resonance_shift():
    assert _run(5, check_5)[0]


def test_criterion_6_localization_destroyed():
    assert _run(6, check_6)[0]


def test_criterion_7_bessel_layer():
    assert _run(7, check_7)[0]


def test_criterion_8_t_chi_convergence():
    assert _run(8, check_8)[0]


def test_criterion_9_rk4_order():
    assert _run(9, check_9)[0]


if __name__ == "__main__":
    results = [_run(i, c)[0] for i, c in enumerate(CHECKS, start=1)]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
