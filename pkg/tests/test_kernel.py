"""Christoffel-Darboux kernels, their identities and scaling limits."""

import math

import numpy as np
import pytest
import scipy.special as sps

from rmtlab.errors import ValidationError
from rmtlab.potential import IntervalSet, Potential, Singularity
from rmtlab.equilibrium import solve_support, density
from rmtlab.classify import CriticalPoint, bulk_point, extract_model_data, find_critical_points
from rmtlab.orthopoly import build_quadrature, stieltjes_recurrence
from rmtlab.kernel import (
    KernelGrid,
    airy_kernel,
    bessel_kernel,
    cd_kernel,
    convergence_scan,
    kernel_diag,
    kernel_grid,
    kernel_matrix,
    projection_residual,
    reference_grid,
    scaled_kernel,
    scaled_kernel_grid,
    sine_kernel,
    trace_check,
)

LINE = IntervalSet(((-math.inf, math.inf),))
NEG = IntervalSet(((-math.inf, 0.0),))


def gaussian(n):
    return Potential(n=n, reg=(0.0, 1.0), singularities=(), support=LINE)


def quartic_critical(n):
    return Potential(n=n, reg=(0.0, -2.0, 0.0, 1.0), singularities=(), support=LINE)


def mp_potential(n, alpha=0.0):
    sings = () if alpha == 0.0 else (Singularity(b=0.0, alpha=alpha),)
    return Potential(n=n, reg=(-1.0,), singularities=sings, support=NEG)


def fit(p, resolution=None):
    n = p.n
    res = resolution or max(900, 6 * n)
    q = build_quadrature(p, res, degree_hint=2 * (n + 2))
    return stieltjes_recurrence(q, n + 1), q


# ---------------------------------------------------------------------------
# finite-n identities


def test_k1_gaussian_closed_form():
    p = gaussian(1)
    r, q = fit(p, 400)
    assert cd_kernel(r, p, 0.0, 0.0) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi),
                                                      abs=1e-12)


@pytest.mark.parametrize("make", [gaussian, quartic_critical])
@pytest.mark.parametrize("n", [10, 30])
def test_trace_counts_states(make, n):
    p = make(n)
    r, q = fit(p)
    assert abs(trace_check(r, p, q) - n) / n < 1e-12


@pytest.mark.parametrize("make", [gaussian, quartic_critical])
def test_projection_identity(make):
    p = make(10)
    r, q = fit(p)
    probes = [(-1.3, 0.7), (0.0, 0.0), (0.5, -0.5), (1.2, 1.1)]
    assert projection_residual(r, p, q, probes) < 1e-7


def test_kernel_matrix_symmetric_to_roundoff():
    p = gaussian(20)
    r, q = fit(p)
    xs = np.linspace(-1.8, 1.8, 13)
    K = kernel_matrix(r, p, xs, xs)
    assert np.array_equal(K, K.T)


def test_diagonal_approaches_density():
    n = 40
    p = gaussian(n)
    r, q = fit(p)
    em = solve_support(p, "one_cut")
    xs = np.linspace(-1.5, 1.5, 11)
    assert np.max(np.abs(kernel_diag(r, p, xs) / n - density(em, xs))) < 1e-2


def test_off_domain_points_give_zero():
    p = mp_potential(12)
    r, q = fit(p, 700)
    assert cd_kernel(r, p, 0.5, -1.0) == 0.0
    assert cd_kernel(r, p, 1.0, 2.0) == 0.0
    g = kernel_grid(r, p, np.array([-1.0, 0.5]))
    assert g.meta["outside_points"] == 2
    assert g.values[1, 1] == 0.0


def test_confluent_branch_continuous():
    p = gaussian(15)
    r, q = fit(p)
    x = 0.3
    near = cd_kernel(r, p, x, x + 5e-9)   # confluent evaluation
    far = cd_kernel(r, p, x, x + 5e-7)    # difference quotient
    assert near == pytest.approx(cd_kernel(r, p, x, x), rel=1e-7)
    assert far == pytest.approx(near, rel=1e-5)


def test_recurrence_must_reach_degree_n():
    p = gaussian(10)
    q = build_quadrature(p, 600, degree_hint=22)
    r = stieltjes_recurrence(q, 5)
    with pytest.raises(ValidationError, match="degree"):
        cd_kernel(r, p, 0.0, 0.0)


def test_scaled_points_must_stay_in_domain():
    n = 30
    p = mp_potential(n)
    r, q = fit(p, 800)
    em = solve_support(p, "hard_edge_one_cut")
    cp = [c for c in find_critical_points(em) if abs(c.x_star) < 1e-9][0]
    with pytest.raises(ValidationError, match="domain"):
        scaled_kernel(r, p, cp, 1.0, -1.0)
    with pytest.raises(ValidationError, match="domain"):
        scaled_kernel_grid(r, p, cp, np.array([-1.0, 0.5]))


def test_scaled_grid_metadata():
    n = 30
    p = gaussian(n)
    r, q = fit(p)
    cp = bulk_point(solve_support(p, "one_cut"), 0.0)
    g = scaled_kernel_grid(r, p, cp, np.linspace(-1, 1, 5))
    assert isinstance(g, KernelGrid)
    assert g.meta["n"] == n and g.meta["scaled"] is True
    assert g.meta["delta"] == 1.0
    assert g.values.shape == (5, 5)


# ---------------------------------------------------------------------------
# scaling limits


def test_bulk_limit_is_sine():
    n = 80
    p = gaussian(n)
    r, q = fit(p)
    em = solve_support(p, "one_cut")
    cp = bulk_point(em, 0.0)
    us = np.linspace(-2, 2, 9)
    g = scaled_kernel_grid(r, p, cp, us)
    # with E_1 = rho(0) = 1/pi the mapped sine law is sin(u-v)/(pi(u-v))
    ref = np.array([[math.sin(a - b) / (math.pi * (a - b)) if a != b else 1.0 / math.pi
                     for b in us] for a in us])
    assert np.max(np.abs(g.values - ref)) < 5e-3


def test_soft_edge_limit_is_airy():
    n = 100
    p = gaussian(n)
    r, q = fit(p)
    em = solve_support(p, "one_cut")
    cp = [c for c in find_critical_points(em) if c.kind == "edge" and c.x_star > 0][0]
    us = np.linspace(-4, 1, 9)
    g = scaled_kernel_grid(r, p, cp, us)
    ref = np.array([[airy_kernel(a, b) for b in us] for a in us])
    assert np.max(np.abs(g.values - ref)) < 3e-2


@pytest.mark.parametrize("alpha,tol", [(0.0, 1e-3), (0.5, 1e-2)])
def test_hard_edge_limit_is_bessel(alpha, tol):
    n = 100
    p = mp_potential(n, alpha)
    r, q = fit(p)
    em = solve_support(p, "hard_edge_one_cut")
    cp = [c for c in find_critical_points(em) if abs(c.x_star) < 1e-9][0]
    md = extract_model_data(em, cp, n, p)
    s = 4.0 * md.e_series[0] ** 2
    assert s == pytest.approx(4.0, abs=1e-9)
    us = np.linspace(-3.0, -0.05, 9)
    g = scaled_kernel_grid(r, p, cp, us)
    ref = np.array([[s * bessel_kernel(2 * alpha, s * abs(a), s * abs(b))
                     for b in us] for a in us])
    assert np.max(np.abs(g.values - ref)) < tol


def test_merge_family_kernels_collapse():
    tau = 2.0
    cp = CriticalPoint(x_star=0.0, kind="interior", order_k=1, delta=1.0 / 3.0,
                       m_h=2, m_r=0, m_p=0, radius=0.5)
    us = np.linspace(-2, 2, 7)
    mats = []
    for n in (30, 60):
        t = -2.0 + tau * n ** (-2.0 / 3.0)
        p = Potential(n=n, reg=(0.0, t, 0.0, 1.0), singularities=(), support=LINE)
        r, q = fit(p)
        mats.append(scaled_kernel_grid(r, p, cp, us).values)
    assert np.max(np.abs(mats[0] - mats[1])) < 6e-2


# ---------------------------------------------------------------------------
# reference kernels


def test_sine_kernel_values():
    assert sine_kernel(0.7, 0.7) == 1.0
    assert sine_kernel(0.5, 0.0) == pytest.approx(2.0 / math.pi, abs=1e-14)
    assert sine_kernel(0.25, -0.25) == sine_kernel(-0.25, 0.25)


def test_airy_kernel_against_scipy():
    for u, v in [(-2.0, 0.5), (0.0, 1.0), (-3.5, -3.2)]:
        aiu, apu, _, _ = sps.airy(u)
        aiv, apv, _, _ = sps.airy(v)
        assert airy_kernel(u, v) == pytest.approx(
            (aiu * apv - aiv * apu) / (u - v), abs=1e-10)
    u = -1.3
    ai, ap, _, _ = sps.airy(u)
    assert airy_kernel(u, u) == pytest.approx(ap * ap - u * ai * ai, abs=1e-10)


def test_bessel_kernel_against_scipy():
    for alpha in (0.0, 1.0):
        for u, v in [(0.5, 2.0), (3.0, 7.5), (0.01, 0.02)]:
            su, sv = math.sqrt(u), math.sqrt(v)
            ref = (sps.jv(alpha, su) * sv * sps.jvp(alpha, sv)
                   - sps.jv(alpha, sv) * su * sps.jvp(alpha, su)) / (2.0 * (u - v))
            assert bessel_kernel(alpha, u, v) == pytest.approx(ref, abs=1e-10)


def test_bessel_kernel_diagonal_continuity():
    # alpha = 0 tends to 1/4 at the edge, alpha > 0 vanishes
    assert bessel_kernel(0.0, 0.0, 0.0) == 0.25
    assert bessel_kernel(0.0, 1e-10, 1e-10) == pytest.approx(0.25, abs=1e-6)
    assert bessel_kernel(1.0, 0.0, 0.0) == 0.0
    assert bessel_kernel(1.0, 1e-10, 1e-10) == pytest.approx(0.0, abs=1e-6)


def test_bessel_kernel_input_validation():
    with pytest.raises(ValidationError):
        bessel_kernel(-1.5, 1.0, 2.0)
    with pytest.raises(ValidationError):
        bessel_kernel(0.0, -1.0, 2.0)


def test_reference_grid_shapes_and_kinds():
    u = np.linspace(0.1, 2.0, 4)
    g = reference_grid("bessel", u, alpha=1.0)
    assert g.values.shape == (4, 4)
    assert g.meta["reference"] == "bessel"
    with pytest.raises(ValidationError, match="unknown"):
        reference_grid("gamma", u)


# ---------------------------------------------------------------------------
# convergence scan plumbing


class _BulkScenario:
    """Minimal scenario: Gaussian bulk against the sine law."""

    name = "inline-gue-bulk"
    reference = "sine"
    compare_abs = False

    def make_potential(self, n):
        return gaussian(n)

    def equilibrium(self, p):
        return solve_support(p, "one_cut")

    def critical_point(self, em, p):
        return bulk_point(em, 0.0)

    def recurrence(self, p):
        return fit(p)

    def model_data(self, em, cp, p):
        return extract_model_data(em, cp, p.n, p)

    def reference_law(self, md):
        s = md.e_series[1] / math.pi
        return (lambda u, v: s * sine_kernel(s * u, s * v)), {"kind": "sine", "scale": s}


def test_convergence_scan_reports_decay():
    sc = _BulkScenario()
    out = convergence_scan(sc, [20, 40, 80], np.linspace(-1.5, 1.5, 5))
    errs = [row["sup_error"] for row in out["rows"]]
    assert len(errs) == 3
    assert errs[0] > errs[1] > errs[2]
    assert out["fitted_decay"] == pytest.approx(-1.0, abs=0.2)
    assert out["reference"]["kind"] == "sine"
