"""Reference limit laws and statistical comparison.

Closed forms for the Gaussian and half-chi(3) laws, a fine-grid
simulator for functionals of drifted Brownian motion on [0, 1]
(running maximum minus half the endpoint, and the expected argmax
location), and the Kolmogorov-Smirnov sup-distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rng import stream


@dataclass(frozen=True)
class ReferenceLaw:
    """A limit law against which empirical samples are compared.

    kind: "gaussian", "chi3_half", "brownian_max_minus_half" or
    "brownian_argmax_expectation".  The first two have closed-form
    CDFs; the Brownian functionals are defined by simulation and
    carry their grid parameters in ``method``.
    """

    kind: str
    mu: float = 0.0
    sigma2: float = 1.0
    lam: float = 0.0
    method: dict = field(default_factory=dict)


def gaussian_cdf(x: float, mu: float = 0.0, sigma2: float = 1.0) -> float:
    return 0.5 * (1.0 + math.erf((x - mu) / math.sqrt(2.0 * sigma2)))


def chi3_half_cdf(x: float) -> float:
    """CDF of one half of a chi random variable with 3 degrees of freedom.

    P(chi_3/2 <= x) = P(chi_3 <= 2x) = erf(y/sqrt(2)) - sqrt(2/pi) y exp(-y^2/2)
    with y = 2x.
    """
    if x <= 0.0:
        return 0.0
    y = 2.0 * x
    return math.erf(y / math.sqrt(2.0)) - math.sqrt(2.0 / math.pi) * y * math.exp(-0.5 * y * y)


def reference_cdf(law: ReferenceLaw, x: float) -> float:
    """Closed-form CDF of a reference law at x."""
    if law.kind == "gaussian":
        return gaussian_cdf(x, law.mu, law.sigma2)
    if law.kind == "chi3_half":
        return chi3_half_cdf(x)
    raise ValueError(f"no closed-form CDF for law kind {law.kind!r}; simulate it")


def simulate_brownian_functional(
    lam: float, kind: str, paths: int, steps: int, rng_seed: int
):
    """Simulate a functional of Brownian motion with drift lam on [0, 1].

    kind "max_minus_half" returns per-path samples of
    max_t B_t - B_1 / 2; kind "argmax_expectation" returns the mean
    location of the (leftmost) grid argmax of B, including time 0.

    Paths are generated in fixed-size blocks with one counter-based
    substream per block, so the result depends only on
    (lam, kind, paths, steps, rng_seed), not on scheduling.
    """
    if steps < 10**4 or paths < 10**4:
        raise ValueError("need steps >= 1e4 and paths >= 1e4")
    if kind not in ("max_minus_half", "argmax_expectation"):
        raise ValueError(f"unknown functional kind {kind!r}")
    block = max(1, 2**24 // steps)
    scale = 1.0 / math.sqrt(steps)
    drift = lam / steps
    samples = np.empty(paths) if kind == "max_minus_half" else None
    argmax_sum = 0.0
    done = 0
    block_index = 0
    while done < paths:
        m = min(block, paths - done)
        rng = stream(rng_seed, block_index, "brownian-functional")
        incr = rng.standard_normal((m, steps), dtype=np.float32)
        b = np.cumsum(incr, axis=1, dtype=np.float64)
        b *= scale
        if drift:
            b += drift * np.arange(1, steps + 1)
        if kind == "max_minus_half":
            peak = np.maximum(b.max(axis=1), 0.0)  # the path starts at 0
            samples[done : done + m] = peak - 0.5 * b[:, -1]
        else:
            interior = np.argmax(b, axis=1) + 1
            best = np.where(b.max(axis=1) > 0.0, interior, 0)
            argmax_sum += float(best.sum()) / steps
        done += m
        block_index += 1
    if kind == "max_minus_half":
        return samples
    return argmax_sum / paths


def ks_statistic(samples, cdf) -> float:
    """Two-sided sup-distance between the empirical CDF and ``cdf``."""
    xs = np.sort(np.asarray(samples, dtype=float))
    n = xs.size
    if n == 0:
        raise ValueError("need at least one sample")
    f = np.array([cdf(x) for x in xs])
    upper = np.abs(np.arange(1, n + 1) / n - f).max()
    lower = np.abs(np.arange(0, n) / n - f).max()
    return float(max(upper, lower))
