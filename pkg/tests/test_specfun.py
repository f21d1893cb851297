import math

import mpmath
import numpy as np
import pytest

from dampedspin.errors import DomainTooLarge, OutOfRange
from dampedspin.specfun import BesselConfig, bessel_j, j0_complex_via_expansion, j0_zero

# mpmath besseljzero, 40 digits
J0_ZEROS = [
    2.4048255576957727686,
    5.5200781102863106496,
    8.653727912911012217,
    11.791534439014281614,
    14.930917708487785948,
    18.071063967910922543,
    21.211636629879258959,
    24.352471530749302737,
    27.493479132040254796,
]


def _bisect_oracle(k):
    """Bisection on mpmath's (independent, high-precision) J0."""
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


def test_j0_at_origin_and_parity():
    assert bessel_j(0, 0) == 1
    assert bessel_j(1, 0) == 0
    for x in (0.3, 2.0, 7.5 + 1j):
        assert bessel_j(-1, x) == -bessel_j(1, x)
        assert bessel_j(-4, x) == bessel_j(4, x)


def test_j0_of_i_is_modified_bessel():
    # J0(i) = I0(1); oracle is the modified series sum (1/4)^k / (k!)^2
    i0 = math.fsum(0.25 ** k / math.factorial(k) ** 2 for k in range(30))
    assert bessel_j(0, 1j) == pytest.approx(i0, rel=1e-15)
    assert i0 == pytest.approx(1.2660658777520084, rel=1e-15)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 12])
@pytest.mark.parametrize("z", [0.1, 2.4, 9.0 - 3j, 1j * 4, 14.9, 25 + 2j])
def test_bessel_against_mpmath(n, z):
    ref = complex(mpmath.besselj(n, z))
    scale = max(1.0, abs(ref))
    # cancellation in the ascending series grows like e^{|z|}
    tol = 1e-15 * math.exp(abs(z)) / math.sqrt(abs(z) + 1) + 1e-15
    assert abs(bessel_j(n, z) - ref) <= tol * scale


def test_domain_guard():
    with pytest.raises(DomainTooLarge):
        bessel_j(0, 30.5)
    assert bessel_j(0, 30.5, BesselConfig(domain_radius=31)) != 0


def test_config_validation():
    with pytest.raises(ValueError):
        BesselConfig(series_tol=0)
    with pytest.raises(ValueError):
        BesselConfig(max_terms=10)


def test_series_convergence_is_saturated():
    big = BesselConfig(max_terms=400)
    for z in (0.5, 3.0 + 1j, 12.0, 20j):
        for n in (0, 1, 3):
            a, b = bessel_j(n, z), bessel_j(n, z, big)
            assert abs(a - b) <= 1e-15 * max(1.0, abs(a))


@pytest.mark.parametrize("k", range(1, 10))
def test_j0_zeros(k):
    z = j0_zero(k)
    assert z == pytest.approx(J0_ZEROS[k - 1], abs=1e-10)
    assert z == pytest.approx(_bisect_oracle(k), abs=1e-10)


def test_j0_zero_values_quoted():
    assert round(j0_zero(1), 10) == 2.4048255577
    assert round(j0_zero(2), 10) == 5.5200781103
    for k in range(1, 6):
        assert abs(bessel_j(0, j0_zero(k))) <= 1e-10


def test_j0_zero_range():
    with pytest.raises(OutOfRange):
        j0_zero(0)
    with pytest.raises(OutOfRange):
        j0_zero(10)


def test_j0_and_j1_have_no_common_zero():
    for k in range(1, 10):
        assert abs(bessel_j(1, j0_zero(k))) > 0.1


def test_expansion_alpha_zero_is_exact():
    for lam in (0.5, 2.4, 11.0):
        assert j0_complex_via_expansion(lam, 0.0) == bessel_j(0, lam)


@pytest.mark.parametrize("lam, alpha, kmax", [(2.4048255577, 0.1, 20), (1.0, 1.0, 30)])
def test_expansion_examples(lam, alpha, kmax):
    direct = bessel_j(0, lam * (1 + 1j * alpha))
    assert abs(j0_complex_via_expansion(lam, alpha, kmax) - direct) <= 1e-12


def test_expansion_random_agreement():
    rng = np.random.default_rng(3)
    for _ in range(100):
        lam = rng.uniform(0.0, 10.0)
        alpha = rng.uniform(0.0, 0.3)
        direct = bessel_j(0, lam * (1 + 1j * alpha))
        assert abs(j0_complex_via_expansion(lam, alpha, 40) - direct) <= 1e-12 * max(1.0, abs(direct))


def test_expansion_domain():
    with pytest.raises(DomainTooLarge):
        j0_complex_via_expansion(31.0, 0.01)


def test_jacobi_anger_quadrature():
    # period average of exp(i chi sin(theta)) equals J0(chi)
    theta = np.arange(4096) * 2 * np.pi / 4096
    for chi in (0.0, 1.0, 2.4048255577, 7.3):
        avg = np.mean(np.exp(1j * chi * np.sin(theta)))
        assert abs(avg - bessel_j(0, chi)) <= 1e-10


def test_no_complex_zeros_near_real_axis():
    for alpha in (0.01, 0.1):
        xs = np.linspace(0.01, 29.9 / math.hypot(1, alpha), 1500)
        vals = [abs(bessel_j(0, x * (1 + 1j * alpha))) for x in xs]
        assert min(vals) > 1e-3
