"""First-passage laws of a biased simple random walk and the excursion chain.

The walk steps -1 with probability p and +1 with probability q = 1-p.
V_k is the first visit time of level k.  Starting from 1, the time of
the first visit to 0 is odd with

    P(V_0 = 2k+1) = C(2k+1, k) / (2k+1) * p^(k+1) * q^k,

computed here in log space (and by a term recurrence for long arrays).
The excursion chain (tau_k, I_k) decomposes a walk conditioned to stay
positive into excursions below its running prefix; driven by the
reversed height profile of a configuration, the stopped length sum
recovers M - K + 1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .rng import stream


@dataclass(frozen=True)
class WalkParams:
    """Step law of the walk: -1 with probability p, +1 with q = 1-p."""

    p: float
    n: Optional[int] = None
    lam: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must be in (0, 1), got {self.p}")

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @classmethod
    def critical(cls, n: int, lam: float) -> "WalkParams":
        """p = (1 - lam/sqrt(n)) / 2, the critical scaling window."""
        p = 0.5 * (1.0 - lam / math.sqrt(n))
        return cls(p=p, n=n, lam=lam)


def hitting_pmf(w: WalkParams, k: int) -> float:
    """P_1(V_0 = 2k+1), evaluated in log space for large k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return w.p
    log_binom = math.lgamma(2 * k + 2) - math.lgamma(k + 1) - math.lgamma(k + 2)
    log_p = (
        -math.log(2 * k + 1)
        + log_binom
        + (k + 1) * math.log(w.p)
        + k * math.log(w.q)
    )
    return math.exp(log_p)


def hitting_pmf_array(w: WalkParams, kmax: int) -> np.ndarray:
    """P_1(V_0 = 2k+1) for k = 0..kmax via the exact term recurrence."""
    if kmax < 0:
        return np.zeros(0)
    k = np.arange(kmax, dtype=np.float64)
    # pmf(k+1) = pmf(k) * 2(2k+1)/(k+2) * p * q
    ratios = 2.0 * (2.0 * k + 1.0) / (k + 2.0) * w.p * w.q
    out = np.empty(kmax + 1)
    out[0] = 1.0
    if kmax:
        np.cumprod(ratios, out=out[1:])
    out *= w.p
    return out


def hitting_gf(w: WalkParams, s: float) -> float:
    """Generating function g(s) = (1 - sqrt(1 - 4pq s^2)) / (2qs); g(0) = 0."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must be in [0, 1], got {s}")
    if s == 0.0:
        return 0.0
    return (1.0 - math.sqrt(max(0.0, 1.0 - 4.0 * w.p * w.q * s * s))) / (2.0 * w.q * s)


def escape_probability(w: WalkParams) -> float:
    """P_1(V_0 = infinity): 0 for p >= 1/2, (q-p)/q below."""
    if w.p >= 0.5:
        return 0.0
    return (w.q - w.p) / w.q


def tail_exact_symmetric(m: int) -> float:
    """P_1(V_0 > m) = C(m, ceil(m/2)) / 2^m at p = 1/2.

    Big-int division rounds correctly, so this is exact to the last
    ulp; the big-int cost grows with m, keep it for cross-checks.
    """
    return math.comb(m, (m + 1) // 2) / (1 << m)


def hitting_tail(w: WalkParams, m: int) -> float:
    """P_1(V_0 > m) = 1 - sum of the pmf over odd times <= m.

    The compensated sum of the recurrence terms keeps the absolute
    error near 1e-13 even at m = 1e6; tail_exact_symmetric provides the
    exact reference at p = 1/2.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    if m == 0:
        return 1.0
    kmax = (m - 1) // 2
    return 1.0 - math.fsum(hitting_pmf_array(w, kmax).tolist())


def _tails_upto(w: WalkParams, m: int) -> np.ndarray:
    """tails[j] = P_1(V_0 > j) for j = 0..m, via a long-double cumsum."""
    kmax = max((m - 1) // 2, 0)
    pmf = hitting_pmf_array(w, kmax).astype(np.longdouble)
    cum = np.concatenate([[0.0], np.cumsum(pmf)])
    j = np.arange(m + 1)
    covered = np.where(j >= 1, (j - 1) // 2 + 1, 0)
    return (1.0 - cum[covered]).astype(np.float64)


def _survival_from_two(w: WalkParams, m: int, tails: np.ndarray) -> float:
    """P_2(V_0 > m) = sum_k P(V_1 = 2k+1) P_1(V_0 > m-2k-1) + P(V_1 > m)."""
    if m <= 1:
        return 1.0
    kmax = (m - 1) // 2
    pmf = hitting_pmf_array(w, kmax)
    j = 2 * np.arange(kmax + 1) + 1
    return float(np.dot(pmf, tails[m - j])) + float(tails[m])


def conditional_hit_probability(w: WalkParams, m: int) -> float:
    """P_2(V_1 < m | V_0 > m) via the finite decomposition sums."""
    if m < 2:
        raise ValueError("m must be >= 2")
    tails = _tails_upto(w, m)
    kmax = (m - 2) // 2  # strict: 2k+1 < m
    pmf = hitting_pmf_array(w, kmax)
    j = 2 * np.arange(kmax + 1) + 1
    num = float(np.dot(pmf, tails[m - j]))
    den = num + float(tails[m])
    return num / den


def conditional_hit_expectation(w: WalkParams, m: int) -> float:
    """E_2(V_1 1{V_1 <= m} | V_0 > m)."""
    if m < 2:
        raise ValueError("m must be >= 2")
    tails = _tails_upto(w, m)
    kmax = (m - 1) // 2  # weak: 2k+1 <= m
    pmf = hitting_pmf_array(w, kmax)
    j = 2 * np.arange(kmax + 1) + 1
    num = float(np.dot(j * pmf, tails[m - j]))
    return num / _survival_from_two(w, m, tails)


MAX_ENUMERATION_LEN = 25


def enumerate_hitting_oracle(w: WalkParams, max_len: int) -> dict[int, float]:
    """Exact P_1(V_0 = j) for odd j <= max_len by counting survival paths.

    Integer path counts over (time, level) with exact step-probability
    weights; independent of the reflection-principle formula, so it
    serves as its verification oracle.
    """
    if max_len > MAX_ENUMERATION_LEN:
        raise ValueError(f"max_len must be <= {MAX_ENUMERATION_LEN}")
    counts = {1: 1}  # paths alive at the current time, keyed by level
    table: dict[int, float] = {}
    for t in range(1, max_len + 1):
        nxt: dict[int, int] = {}
        absorbed = 0
        for level, c in counts.items():
            down, up = level - 1, level + 1
            if down == 0:
                absorbed += c
            else:
                nxt[down] = nxt.get(down, 0) + c
            nxt[up] = nxt.get(up, 0) + c
        if absorbed:
            # every first-passage path of length t has (t+1)/2 down-steps
            table[t] = absorbed * w.p ** ((t + 1) // 2) * w.q ** ((t - 1) // 2)
        counts = nxt
    return table


@dataclass(frozen=True)
class ExcursionRecord:
    """One realization of the excursion chain up to its stopping index."""

    tau: tuple[int, ...]
    indicators: tuple[int, ...]
    N: int
    horizon: int

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(self.tau[i + 1] - self.tau[i] for i in range(len(self.tau) - 1))

    @property
    def total(self) -> int:
        """Sum of the first N excursion lengths, tau_{N+1} - tau_1.

        For a record extracted from a string's reversed reflected
        profile, this equals M - K + 1 whenever K is attained by its
        defining set (not the fallback value L + 2).
        """
        return self.tau[self.N + 1] - self.tau[1]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["k", "tau", "indicator"])
            for k, (t, i) in enumerate(zip(self.tau, self.indicators)):
                writer.writerow([k, t, i])


def excursion_record_from_heights(heights: Sequence[int]) -> ExcursionRecord:
    """Deterministic excursion decomposition of a walk path.

    ``heights`` is the reversed, reflected profile seen from a leftmost
    maximum: heights[0] = 0, heights[1] = 1, heights[2] = 2 and the path
    never returns to 0.  Excursion k starts at tau_k; I_k flags that the
    remaining path stays strictly above heights[tau_k] - 1.
    """
    h = list(heights)
    horizon = len(h) - 1
    if horizon < 2 or h[0] != 0 or h[1] != 1 or h[2] != 2:
        raise ValueError("heights must start 0, 1, 2 (leftmost-maximum anchoring)")
    tau = [1]
    ind = []

    def indicator(at: int) -> int:
        floor = h[at] - 1 if at <= horizon else 0
        return int(all(h[i] > floor for i in range(at + 1, horizon + 1)))

    ind.append(indicator(1))
    n_stop = None
    while n_stop is None:
        t = tau[-1]
        if ind[-1] == 1:
            tau.append(t + 1)
        else:
            ret = next(i for i in range(1, horizon - t + 1) if h[t + i] == h[t] - 1)
            tau.append(t + ret + 1)
        ind.append(indicator(tau[-1]))
        k = len(ind) - 1
        if k >= 1 and ind[k] == 1 and ind[k - 1] == 1:
            n_stop = k
    tau.append(tau[-1] + 1)  # excursion N is trivial, so tau_{N+1} = tau_N + 1
    return ExcursionRecord(tau=tuple(tau), indicators=tuple(ind), N=n_stop, horizon=horizon)


def simulate_excursion_chain(w: WalkParams, horizon: int, rng_seed: int) -> ExcursionRecord:
    """Sample the excursion chain with its exact conditional laws.

    Nontrivial excursion lengths are first-passage times conditioned to
    land inside the remaining horizon while the level below survives;
    trivial-excursion indicators use the survival-conditioned hitting
    tail.  Fully determined by (params, horizon, seed).
    """
    if horizon < 2:
        raise ValueError("horizon must be >= 2")
    rng = stream(rng_seed, 0, "excursion-chain")
    tails = _tails_upto(w, horizon)
    kmax = (horizon - 1) // 2
    pmf = hitting_pmf_array(w, kmax)

    def p_trivial(remaining: int) -> float:
        if remaining <= 0:
            return 1.0
        return float(tails[remaining]) / _survival_from_two(w, remaining, tails)

    def sample_length(remaining: int) -> int:
        ks = np.arange((remaining - 1) // 2 + 1)
        j = 2 * ks + 1
        weights = pmf[ks] * tails[remaining - j]
        total = weights.sum()
        if total <= 0:
            return 1
        pick = np.searchsorted(np.cumsum(weights), rng.random() * total)
        return int(j[min(pick, len(j) - 1)])

    tau = [1]
    ind = [1]  # I_0 = 1 almost surely
    n_stop = None
    while n_stop is None:
        t = tau[-1]
        if ind[-1] == 1:
            tau.append(t + 1)
        else:
            remaining = horizon - t
            v = sample_length(remaining) if remaining >= 1 else 1
            tau.append(t + v + 1)
        rem_next = horizon - tau[-1]
        ind.append(int(rng.random() < p_trivial(rem_next)))
        k = len(ind) - 1
        if ind[k] == 1 and ind[k - 1] == 1:
            n_stop = k
    tau.append(tau[-1] + 1)  # excursion N is trivial, so tau_{N+1} = tau_N + 1
    return ExcursionRecord(tau=tuple(tau), indicators=tuple(ind), N=n_stop, horizon=horizon)


def reversed_reflected_heights(t: str):
    """Height path seen backwards from the leftmost maximum of a string.

    Returns (heights, M, K, L) where heights[i] = S_M - S_{M-i} for
    i = 0..M-L.  Requires a defined leftmost maximum with M >= L+2.
    """
    from .landmarks import landmarks  # local import to avoid a cycle

    lm = landmarks(t)
    if lm.M is None:
        raise ValueError("string has no interior maximum")
    if lm.M < lm.L + 2:
        raise ValueError("maximum is not anchored away from the 2-prefix")
    from .batch import height_profiles, strings_to_array

    s = height_profiles(strings_to_array([t]))[0]
    m_pos, l_pos = lm.M, lm.L
    heights = [int(s[m_pos] - s[m_pos - i]) for i in range(m_pos - l_pos + 1)]
    return heights, lm.M, lm.K, lm.L


def pmf_table_to_csv(table: dict[int, float], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "probability"])
        for j in sorted(table):
            writer.writerow([j, repr(table[j])])
