"""Monte Carlo experiments and the exact small-n enumeration oracle.

The enumerator walks every backbone and every placement of the single 1
and returns exact laws for the stabilization times and the excess.  The
Monte Carlo harness estimates the same quantities at large n, using the
switching-position predicate {U < K} = {excess = 0} as an O(n) fast
path with full dynamics reserved for the rare undecided samples and
for cross-checks.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from . import batch
from .reference import ReferenceLaw, ks_statistic, reference_cdf
from .sampling import critical_density, sample_three_with_scp_batch, sample_two_batch

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ExactLaw:
    """Exact distributions from full enumeration at one (n, p)."""

    n: int
    p: float
    excess: dict
    t_three: dict
    t_two: dict

    def prob_excess(self, e: int) -> float:
        return self.excess.get(e, 0.0)


def exact_excess_distribution(n: int, p: float) -> ExactLaw:
    """Exact laws of the excess and both stabilization times.

    Enumerates all 2^n backbones with weight p^{#2}(1-p)^{#0} and all
    uniform placements of the 1 on the backbone's 0-positions (or at
    position 1 when there are none), then runs the exact dynamics.
    """
    if not 1 <= n <= 14:
        raise ValueError("exact enumeration supports 1 <= n <= 14")
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    q = 1.0 - p
    codes = np.arange(2 ** n, dtype=np.uint32)
    bits = (codes[:, None] >> np.arange(n)[None, :]) & 1
    backbones = (bits * 2).astype(np.uint8)  # bit 1 -> symbol 2
    n_twos = bits.sum(axis=1)
    weights = p ** n_twos * q ** (n - n_twos)

    tri_rows = []
    tri_weights = []
    for row, w in zip(backbones, weights):
        zeros = np.flatnonzero(row == 0)
        places = zeros if zeros.size else np.array([0])
        share = w / places.size
        for pos in places:
            placed = row.copy()
            placed[pos] = 1
            tri_rows.append(placed)
            tri_weights.append(share)
    tri = np.array(tri_rows, dtype=np.uint8)
    tri_weights = np.array(tri_weights)

    t3 = batch.stabilize_times_array(tri)
    proj = np.where(tri == 1, 0, tri).astype(np.uint8)
    t2_of_tri = batch.sorting_time_two_array(proj)
    e = t3 - t2_of_tri
    t2 = batch.sorting_time_two_array(backbones)

    def law(values, wts):
        out = {}
        for v, w in zip(values.tolist(), wts.tolist()):
            out[v] = out.get(v, 0.0) + w
        return dict(sorted(out.items()))

    return ExactLaw(
        n=n,
        p=p,
        excess=law(e, tri_weights),
        t_three=law(t3, tri_weights),
        t_two=law(t2, weights),
    )


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    samples: int
    master_seed: int
    p: float | None = None
    scaling: str = "fixed"  # fixed | critical_plus | critical_minus
    lam: float = 0.0
    mode: str = "predicate"  # predicate | simulate | both
    crosscheck_fraction: float = 0.01

    def density(self) -> float:
        if self.scaling == "fixed":
            if self.p is None or not 0.0 < self.p < 1.0:
                raise ValueError("fixed scaling needs p in (0, 1)")
            return self.p
        if self.scaling == "critical_plus":
            return critical_density(self.n, self.lam, "plus")
        if self.scaling == "critical_minus":
            return critical_density(self.n, self.lam, "minus")
        raise ValueError(f"unknown scaling {self.scaling!r}")

    def validate(self) -> None:
        if self.samples < 1:
            raise ValueError("need at least one sample")
        if self.mode not in ("predicate", "simulate", "both"):
            raise ValueError(f"unknown mode {self.mode!r}")
        self.density()


@dataclass(frozen=True)
class ExperimentResult:
    config: dict
    estimates: dict
    stderr: dict
    samples: list = field(default_factory=list)
    ks: float | None = None
    reference: str | None = None
    wall_seconds: float = 0.0
    schema_version: int = SCHEMA_VERSION

    def to_json(self, path=None) -> str:
        text = json.dumps(asdict(self), indent=1)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


_BLOCK = 1024  # samples per vectorized block; fixed for reproducibility


def _reference_for_t2(cfg: ExperimentConfig):
    p = cfg.density()
    if cfg.scaling != "fixed":
        return None, None  # simulated Brownian law, compared externally
    if cfg.p == 0.5:
        return ReferenceLaw("chi3_half"), "chi3_half"
    law = ReferenceLaw("gaussian", mu=0.0, sigma2=p * (1.0 - p))
    return law, f"gaussian(0,{p * (1.0 - p)})"


def _blocks(samples: int):
    return [(start, min(_BLOCK, samples - start)) for start in range(0, samples, _BLOCK)]


def run_stabilization_experiment(cfg: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Sample backbones and normalize their two-type stabilization times.

    Fixed density: (T - max(p, 1-p) n) / sqrt(n).  Critical scalings:
    (T - n/2) / sqrt(n).  The result carries the normalized samples and
    a KS distance against the closed-form reference when one exists.
    Blocks are keyed by sample index, so the result is identical for
    any worker count.
    """
    cfg.validate()
    t0 = time.time()
    p = cfg.density()
    center = max(p, 1.0 - p) * cfg.n if cfg.scaling == "fixed" else cfg.n / 2.0
    scale = np.sqrt(cfg.n)
    vals = np.empty(cfg.samples)

    def fill(block):
        start, m = block
        rows = sample_two_batch(cfg.n, p, cfg.master_seed, m, start_index=start)
        t = batch.sorting_time_two_array(rows)
        vals[start : start + m] = (t - center) / scale

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        list(pool.map(fill, _blocks(cfg.samples)))
    law, label = _reference_for_t2(cfg)
    ks = ks_statistic(vals, lambda x: reference_cdf(law, x)) if law else None
    return ExperimentResult(
        config=asdict(cfg),
        estimates={"mean": float(vals.mean()), "variance": float(vals.var(ddof=1))},
        stderr={"mean": float(vals.std(ddof=1) / np.sqrt(cfg.samples))},
        samples=vals.tolist(),
        ks=ks,
        reference=label,
        wall_seconds=time.time() - t0,
    )


def _excess_block(cfg: ExperimentConfig, p: float, start: int, m: int):
    """One block of excess samples; returns (e0, e1, egt1, checked, mismatches)."""
    rows, u = sample_three_with_scp_batch(cfg.n, p, cfg.master_seed, m, start_index=start)
    if cfg.mode == "simulate":
        e = _simulate_excess_rows(rows)
        return (e == 0).sum(), (e == 1).sum(), (e > 1).sum(), 0, 0

    fields = batch.landmark_fields(rows)
    zero = u < fields["K"]
    tail = u > cfg.n - fields["R"]
    undecided = np.flatnonzero(~zero & tail)
    e_und = _simulate_excess_rows(rows[undecided]) if undecided.size else np.array([], int)
    e0 = int(zero.sum())
    egt1 = int((e_und > 1).sum())
    e1 = m - e0 - egt1

    checked = mismatches = 0
    if cfg.mode == "both" or cfg.crosscheck_fraction > 0:
        if cfg.mode == "both":
            idx = np.arange(m)
        else:
            stride = max(1, int(round(1.0 / cfg.crosscheck_fraction)))
            idx = np.arange(0, m, stride)
        e_chk = _simulate_excess_rows(rows[idx])
        mismatches = int(((e_chk == 0) != zero[idx]).sum())
        checked = idx.size
    return e0, e1, egt1, checked, mismatches


def _simulate_excess_rows(rows: np.ndarray) -> np.ndarray:
    if rows.size == 0:
        return np.zeros(0, dtype=np.int64)
    t3 = batch.stabilize_times_array(rows)
    proj = np.where(rows == 1, 0, rows).astype(np.uint8)
    return t3 - batch.sorting_time_two_array(proj)


def run_excess_experiment(cfg: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Estimate P(excess = 0), P(excess = 1) and P(excess > 1).

    Mode "predicate" decides excess = 0 by the switching-position
    predicate {U < K} and runs the dynamics only on samples with
    U > n - R (the only ones that can have excess > 1), plus a
    simulated cross-check subsample.  Mode "simulate" runs the full
    dynamics on every sample; mode "both" does both and asserts
    agreement sample by sample.  Blocks are keyed by sample index and
    merged by sums, so the result is identical for any worker count.
    """
    cfg.validate()
    t0 = time.time()
    p = cfg.density()
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        parts = list(
            pool.map(lambda blk: _excess_block(cfg, p, blk[0], blk[1]), _blocks(cfg.samples))
        )
    c0 = sum(int(part[0]) for part in parts)
    c1 = sum(int(part[1]) for part in parts)
    cg = sum(int(part[2]) for part in parts)
    checked = sum(part[3] for part in parts)
    mismatches = sum(part[4] for part in parts)
    if mismatches:
        raise AssertionError(
            f"predicate/simulation mismatch on {mismatches} of {checked} samples"
        )
    total = cfg.samples
    est = {
        "P(E=0)": c0 / total,
        "P(E=1)": c1 / total,
        "P(E>1)": cg / total,
        "crosschecked": checked,
    }
    err = {
        key: float(np.sqrt(est[key] * (1.0 - est[key]) / total))
        for key in ("P(E=0)", "P(E=1)", "P(E>1)")
    }
    return ExperimentResult(
        config=asdict(cfg),
        estimates=est,
        stderr=err,
        wall_seconds=time.time() - t0,
    )


def estimate_mk_gap(
    n: int,
    samples: int,
    rng_seed: int,
    p: float | None = None,
    lam: float | None = None,
) -> dict:
    """Monte Carlo mean and normal CI of the landmark gap M - K.

    Pass either a fixed density p or a critical-scaling lam (minus
    convention).  Rows without a defined leftmost maximum are excluded
    from the gap and reported separately.  Also reports mean(M)/n for
    the supercritical regime.
    """
    if (p is None) == (lam is None):
        raise ValueError("pass exactly one of p and lam")
    dens = p if p is not None else critical_density(n, lam, "minus")
    gaps = []
    m_sum = 0.0
    undefined = 0
    done = 0
    while done < samples:
        m = min(_BLOCK, samples - done)
        rows = sample_two_batch(n, dens, rng_seed, m, start_index=done)
        fields = batch.landmark_fields(rows)
        ok = fields["M_defined"]
        undefined += int((~ok).sum())
        gaps.append((fields["M"] - fields["K"])[ok])
        m_sum += float(fields["M"][ok].sum())
        done += m
    gaps = np.concatenate(gaps) if gaps else np.zeros(0)
    count = gaps.size
    mean = float(gaps.mean()) if count else float("nan")
    half = float(1.96 * gaps.std(ddof=1) / np.sqrt(count)) if count > 1 else float("nan")
    return {
        "n": n,
        "density": dens,
        "samples": samples,
        "defined": count,
        "undefined_m": undefined,
        "mean_gap": mean,
        "ci95_halfwidth": half,
        "mean_m_over_n": m_sum / count / n if count else float("nan"),
    }
