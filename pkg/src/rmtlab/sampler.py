"""Metropolis sampling of the joint eigenvalue density.

The chain targets

    log pi(x_1..x_n) = 2 sum_{i<j} log|x_i - x_j| + sum_k log w(x_k),

the Coulomb-gas form of the eigenvalue measure; log w already carries
the -n V and charge terms.  Single-site Gaussian proposals, step scale
tuned during burn-in only, so fixed-seed runs are reproducible and the
post-burn-in chain satisfies detailed balance exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .equilibrium import EquilibriumMeasure, mass_right_of
from .errors import NumericalError, ValidationError
from .potential import IntervalSet, Potential, eval_potential, log_weight, validate

_RECHECK_EVERY = 10_000   # proposals between cache-vs-recompute audits
_TUNE_WINDOW = 50         # sweeps per burn-in tuning decision


@dataclass
class ChainState:
    """Mutable single-chain state; positions always inside the domain."""

    positions: np.ndarray
    log_density: float
    rng_seed: int
    step_scale: float
    accept_count: int = 0
    propose_count: int = 0

    def acceptance_rate(self) -> float:
        return self.accept_count / max(1, self.propose_count)


def chain_log_density(p: Potential, xs: np.ndarray) -> float:
    """Full recomputation of the chain's log target."""
    xs = np.asarray(xs, dtype=float)
    lw = float(np.sum(log_weight(p, xs)))
    d = xs[:, None] - xs[None, :]
    iu = np.triu_indices(xs.size, k=1)
    return 2.0 * float(np.sum(np.log(np.abs(d[iu])))) + lw


def _initial_positions(p: Potential, n: int) -> np.ndarray:
    """Spread n points over the region where e^{-V} is not negligible."""
    spots = []
    for lo, hi in p.support.intervals:
        a, b = lo, hi
        ref = 0.0 if a < 0.0 < b else (a if math.isfinite(a) else b)
        if not math.isfinite(a):
            a = ref - 1.0
            while p.n * (eval_potential(p, a, "reg") - eval_potential(p, ref, "reg")) < 20.0 \
                    and ref - a < 1e6:
                a = ref - 2.0 * (ref - a)
        if not math.isfinite(b):
            b = ref + 1.0
            while p.n * (eval_potential(p, b, "reg") - eval_potential(p, ref, "reg")) < 20.0 \
                    and b - ref < 1e6:
                b = ref + 2.0 * (b - ref)
        spots.append((a, b))
    total = sum(b - a for a, b in spots)
    if not (total > 0.0 and math.isfinite(total)):
        raise NumericalError("cannot place chain points inside the domain")
    out = []
    left = n
    for i, (a, b) in enumerate(spots):
        take = left if i == len(spots) - 1 else max(1, round(n * (b - a) / total))
        take = min(take, left)
        pad = 0.01 * (b - a)
        out.append(np.linspace(a + pad, b - pad, take))
        left -= take
        if left == 0:
            break
    xs = np.concatenate(out)
    if xs.size != n:
        raise NumericalError("cannot place chain points inside the domain")
    lw = log_weight(p, xs)
    if not np.all(np.isfinite(lw)):
        raise NumericalError("initial chain points landed on a zero of the weight")
    return xs


def mcmc_chain(p: Potential, steps: int, burn_in: int, thin: int = 1,
               seed: int = 0) -> tuple[list[np.ndarray], ChainState]:
    """Run the chain for `steps` sweeps and keep every thin-th after burn-in.

    One sweep proposes one Gaussian move per site in fixed order.  The
    cached log density is audited against full recomputation every 10^4
    proposals; drift beyond 1e-9 aborts the run.
    """
    validate(p)
    if steps <= burn_in:
        raise ValidationError("steps must exceed burn_in")
    if thin < 1:
        raise ValidationError("thin must be at least 1")
    n = p.n
    xs = _initial_positions(p, n)
    span = float(xs.max() - xs.min()) if n > 1 else 1.0
    state = ChainState(
        positions=xs,
        log_density=chain_log_density(p, xs),
        rng_seed=int(seed),
        step_scale=max(span / max(n, 4), 1e-3),
    )
    rng = np.random.Generator(np.random.PCG64(seed))
    kept: list[np.ndarray] = []
    lw_cache = np.asarray(log_weight(p, xs), dtype=float)
    window_acc = window_prop = 0
    since_check = 0

    for sweep in range(steps):
        noise = rng.standard_normal(n)
        gates = np.log(rng.random(n))
        for i in range(n):
            state.propose_count += 1
            window_prop += 1
            since_check += 1
            old = xs[i]
            new = old + state.step_scale * noise[i]
            if p.support.contains(new):
                lw_new = float(log_weight(p, new))
                if math.isfinite(lw_new):
                    d_new = np.abs(new - xs)
                    d_old = np.abs(old - xs)
                    d_new[i] = 1.0
                    d_old[i] = 1.0
                    delta = (2.0 * float(np.sum(np.log(d_new)) - np.sum(np.log(d_old)))
                             + lw_new - lw_cache[i])
                    if gates[i] < delta:
                        xs[i] = new
                        lw_cache[i] = lw_new
                        state.log_density += delta
                        state.accept_count += 1
                        window_acc += 1
            if since_check >= _RECHECK_EVERY:
                since_check = 0
                full = chain_log_density(p, xs)
                if abs(full - state.log_density) > 1e-9 * max(1.0, abs(full)):
                    raise NumericalError(
                        f"incremental log density drifted by {abs(full - state.log_density):.3g}"
                    )
                state.log_density = full
        if sweep < burn_in and (sweep + 1) % _TUNE_WINDOW == 0 and window_prop > 0:
            rate = window_acc / window_prop
            if rate < 0.2:
                state.step_scale *= 0.8
            elif rate > 0.6:
                state.step_scale *= 1.25
            window_acc = window_prop = 0
        if sweep >= burn_in and (sweep - burn_in) % thin == 0:
            kept.append(xs.copy())
    state.positions = xs
    return kept, state


def mcmc_sample(p: Potential, steps: int, burn_in: int, thin: int = 1,
                seed: int = 0) -> list[np.ndarray]:
    """Kept configurations only; see mcmc_chain for the full state."""
    return mcmc_chain(p, steps, burn_in, thin, seed)[0]


# ---------------------------------------------------------------------------
# empirical densities


@dataclass(frozen=True)
class EmpiricalDensity:
    """Histogram density: values[i] on bins[i] = (lo_i, hi_i)."""

    bins: tuple[tuple[float, float], ...]
    values: np.ndarray

    def widths(self) -> np.ndarray:
        return np.array([hi - lo for lo, hi in self.bins])

    def mass(self) -> float:
        return float(np.sum(self.values * self.widths()))


def _as_bins(bins) -> tuple[tuple[float, float], ...]:
    if isinstance(bins, IntervalSet):
        out = bins.intervals
    else:
        edges = np.asarray(bins, dtype=float)
        if edges.ndim != 1 or edges.size < 2 or not np.all(np.diff(edges) > 0):
            raise ValidationError(
                "bin edges must be increasing with at least two entries")
        out = tuple(zip(edges[:-1], edges[1:]))
    if not all(math.isfinite(lo) and math.isfinite(hi) for lo, hi in out):
        raise ValidationError("histogram bins must be finite")
    return tuple((float(lo), float(hi)) for lo, hi in out)


def histogram_density(samples, bins) -> EmpiricalDensity:
    """Normalized histogram over the bins (total mass 1 across them).

    bins is an array of edges (contiguous bins) or an IntervalSet
    (disjoint bins, gaps allowed).  Samples falling outside every bin
    are discarded before normalizing, so the values integrate to 1
    over the bins that were given.
    """
    if len(samples) == 0:
        raise ValidationError("histogram needs at least one sample")
    pairs = _as_bins(bins)
    data = np.concatenate([np.atleast_1d(np.asarray(s, dtype=float)) for s in samples])
    if isinstance(bins, IntervalSet):
        counts = np.array([np.count_nonzero((data >= lo) & (data <= hi))
                           for lo, hi in pairs], dtype=float)
    else:
        counts, _ = np.histogram(data, bins=np.asarray(bins, dtype=float))
        counts = counts.astype(float)
    total = counts.sum()
    if total == 0:
        raise ValidationError("no samples fall inside the bins")
    widths = np.array([hi - lo for lo, hi in pairs])
    return EmpiricalDensity(bins=pairs, values=counts / (total * widths))


def compare_density(emp: EmpiricalDensity, em: EquilibriumMeasure) -> dict:
    """Sup and L1 deviation of the histogram from bin-averaged rho."""
    widths = emp.widths()
    avg = np.array([
        (mass_right_of(em, lo) - mass_right_of(em, hi)) / (hi - lo)
        for lo, hi in emp.bins
    ])
    dev = np.abs(emp.values - avg)
    return {
        "sup_dev": float(np.max(dev)),
        "l1_dev": float(np.sum(dev * widths)),
    }
