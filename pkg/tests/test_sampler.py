"""Coulomb-gas Metropolis chain and histogram comparisons."""

import math

import numpy as np
import pytest

from rmtlab.errors import ValidationError
from rmtlab.potential import IntervalSet, Potential, Singularity
from rmtlab.equilibrium import mass_right_of, solve_support
from rmtlab.sampler import (
    EmpiricalDensity,
    chain_log_density,
    compare_density,
    histogram_density,
    mcmc_chain,
    mcmc_sample,
)

LINE = IntervalSet(((-math.inf, math.inf),))
NEG = IntervalSet(((-math.inf, 0.0),))


def gaussian(n):
    return Potential(n=n, reg=(0.0, 1.0), singularities=(), support=LINE)


def test_same_seed_reproduces_exactly():
    p = gaussian(6)
    a = mcmc_sample(p, steps=120, burn_in=40, thin=2, seed=99)
    b = mcmc_sample(p, steps=120, burn_in=40, thin=2, seed=99)
    assert len(a) == len(b) == 40
    assert all(np.array_equal(x, y) for x, y in zip(a, b))


def test_parameter_validation():
    p = gaussian(4)
    with pytest.raises(ValidationError, match="burn_in"):
        mcmc_sample(p, steps=10, burn_in=10)
    with pytest.raises(ValidationError, match="thin"):
        mcmc_sample(p, steps=10, burn_in=2, thin=0)


def test_domain_restriction_holds():
    p = Potential(n=8, reg=(-1.0,), singularities=(), support=NEG)
    kept, st = mcmc_chain(p, steps=400, burn_in=100, seed=5)
    assert all(np.all(cfg < 0.0) for cfg in kept)
    assert np.all(st.positions < 0.0)


def test_charge_position_never_occupied():
    p = Potential(n=6, reg=(-1.0,),
                  singularities=(Singularity(b=0.0, alpha=0.5),), support=NEG)
    kept, _ = mcmc_chain(p, steps=300, burn_in=100, seed=3)
    assert all(np.all(cfg != 0.0) for cfg in kept)


def test_incremental_log_density_consistent():
    p = gaussian(10)
    _, st = mcmc_chain(p, steps=250, burn_in=50, seed=11)
    full = chain_log_density(p, st.positions)
    assert abs(full - st.log_density) < 1e-9 * max(1.0, abs(full))


def test_acceptance_rate_lands_in_band():
    p = gaussian(12)
    _, st = mcmc_chain(p, steps=1200, burn_in=600, seed=42)
    assert 0.2 <= st.acceptance_rate() <= 0.65


def test_move_and_reverse_ratios_cancel():
    p = gaussian(5)
    kept, _ = mcmc_chain(p, steps=60, burn_in=20, seed=8)
    x = kept[0].copy()
    for i, dx in [(0, 0.3), (2, -0.15), (4, 0.05)]:
        y = x.copy()
        y[i] += dx
        forward = chain_log_density(p, y) - chain_log_density(p, x)
        reverse = chain_log_density(p, x) - chain_log_density(p, y)
        assert forward + reverse == pytest.approx(0.0, abs=1e-12)


def test_single_particle_gaussian_mean():
    # n = 1 target is exactly e^{-x^2/2}: mean 0 within 3 batch-mean SEs
    p = gaussian(1)
    kept, _ = mcmc_chain(p, steps=4200, burn_in=200, seed=17)
    vals = np.array([k[0] for k in kept])
    batches = vals.reshape(20, -1).mean(axis=1)
    se = batches.std(ddof=1) / math.sqrt(batches.size)
    assert abs(vals.mean()) < 3.0 * se


# ---------------------------------------------------------------------------
# histograms


def test_histogram_constant_samples_single_spike():
    emp = histogram_density([np.array([0.5, 0.5])] * 3, np.linspace(0, 1, 5))
    assert np.count_nonzero(emp.values) == 1
    assert emp.mass() == pytest.approx(1.0, abs=1e-12)


def test_histogram_normalization():
    rng = np.random.default_rng(0)
    samples = [rng.normal(size=10) for _ in range(50)]
    emp = histogram_density(samples, np.linspace(-3, 3, 25))
    assert emp.mass() == pytest.approx(1.0, abs=1e-12)


def test_histogram_interval_set_bins():
    # gapped bins: samples in the gap are dropped before normalizing
    gappy = IntervalSet(((0.0, 0.4), (0.6, 1.0)))
    emp = histogram_density([np.array([0.1, 0.3, 0.5, 0.7, 0.8])], gappy)
    assert emp.bins == ((0.0, 0.4), (0.6, 1.0))
    assert np.allclose(emp.values, [2 / (4 * 0.4), 2 / (4 * 0.4)])
    assert emp.mass() == pytest.approx(1.0, abs=1e-12)


def test_histogram_error_cases():
    with pytest.raises(ValidationError, match="at least one"):
        histogram_density([], np.linspace(0, 1, 5))
    with pytest.raises(ValidationError, match="inside"):
        histogram_density([np.array([5.0])], np.linspace(0, 1, 5))


def test_compare_density_zero_for_exact_bin_averages():
    p = gaussian(20)
    em = solve_support(p, "one_cut")
    edges = np.linspace(-2.2, 2.2, 23)
    cum = np.array([mass_right_of(em, float(e)) for e in edges])
    avg = (cum[:-1] - cum[1:]) / np.diff(edges)
    emp = EmpiricalDensity(bins=tuple(zip(edges[:-1], edges[1:])), values=avg)
    out = compare_density(emp, em)
    assert out["sup_dev"] < 1e-12
    assert out["l1_dev"] < 1e-12


def test_gaussian_chain_matches_semicircle_roughly():
    p = gaussian(24)
    kept, _ = mcmc_chain(p, steps=1500, burn_in=300, seed=123)
    em = solve_support(p, "one_cut")
    emp = histogram_density(kept, np.linspace(-2.2, 2.2, 23))
    out = compare_density(emp, em)
    assert out["l1_dev"] < 0.12
