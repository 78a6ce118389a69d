"""Random initial conditions.

Backbones are Bernoulli product strings over {0, 2} with density p of
2s.  A three-type initial condition inserts the single 1 at a uniformly
chosen 0-position of the backbone (position 1 if the backbone has no
0s).  Critical density scalings place p at 1/2 +- lambda/(2 sqrt(n)).

All draws come from counter-based substreams keyed by
(master_seed, sample_index), so batches are reproducible independently
of worker count and any individual sample can be regenerated alone.
"""

from __future__ import annotations

import numpy as np

from .rng import stream

_TAG_BACKBONE = "initial-condition"


def critical_density(n: int, lam: float, convention: str) -> float:
    """Density 1/2 + lambda/(2 sqrt(n)) or 1/2 - lambda/(2 sqrt(n)).

    ``convention`` is "plus" or "minus"; the two critical limit
    regimes use opposite signs and the caller must say which one
    explicitly.
    """
    if convention not in ("plus", "minus"):
        raise ValueError("convention must be 'plus' or 'minus'")
    if n < 1:
        raise ValueError("n must be positive")
    shift = lam / (2.0 * np.sqrt(n))
    p = 0.5 + shift if convention == "plus" else 0.5 - shift
    if not 0.0 < p < 1.0:
        raise ValueError(f"critical density {p} outside (0, 1)")
    return p


def sample_two_batch(
    n: int, p: float, master_seed: int, count: int, start_index: int = 0
) -> np.ndarray:
    """Batch of Bernoulli backbones as a (count, n) uint8 matrix.

    Row i is drawn from the substream (master_seed, start_index + i)
    and does not depend on the other rows, so batches may be produced
    in any block structure or worker layout.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    out = np.empty((count, n), dtype=np.uint8)
    for i in range(count):
        rng = stream(master_seed, start_index + i, _TAG_BACKBONE)
        out[i] = np.where(rng.random(n) < p, 2, 0)
    return out


def sample_two(n: int, p: float, rng_seed: int, sample_index: int = 0) -> str:
    """One Bernoulli backbone: each symbol is 2 w.p. p, else 0."""
    row = sample_two_batch(n, p, rng_seed, 1, start_index=sample_index)[0]
    return (row + ord("0")).tobytes().decode("ascii")


def sample_three_with_scp_batch(
    n: int, p: float, master_seed: int, count: int, start_index: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Batch of three-type initial conditions with their 1-positions.

    Returns (strings, u) where strings is (count, n) uint8 with exactly
    one symbol 1 per row and u holds the 1-based position of the 1.
    The 1 replaces a uniformly chosen 0 of the backbone; a backbone
    with no 0s gets the 1 at position 1 instead.

    The position draw reuses the same substream as the backbone (one
    extra uniform after the n symbol draws), so the pair is regenerable
    from (master_seed, sample_index) alone.
    """
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    out = np.empty((count, n), dtype=np.uint8)
    u = np.empty(count, dtype=np.int64)
    for i in range(count):
        rng = stream(master_seed, start_index + i, _TAG_BACKBONE)
        row = np.where(rng.random(n) < p, 2, 0).astype(np.uint8)
        zeros = np.flatnonzero(row == 0)
        if zeros.size:
            pos = zeros[int(rng.random() * zeros.size)]
        else:
            pos = 0
        row[pos] = 1
        out[i] = row
        u[i] = pos + 1
    return out, u


def sample_three_with_scp(
    n: int, p: float, rng_seed: int, sample_index: int = 0
) -> tuple[str, int]:
    """One three-type initial condition and the position of its 1."""
    rows, u = sample_three_with_scp_batch(n, p, rng_seed, 1, start_index=sample_index)
    return (rows[0] + ord("0")).tobytes().decode("ascii"), int(u[0])


def write_strings(path, strings, header: dict | None = None) -> None:
    """Write sampled configurations one per line.

    Header entries (seed policy, parameters) become leading '#' comment
    lines so every output records how to regenerate it.
    """
    with open(path, "w") as fh:
        for key, value in (header or {}).items():
            fh.write(f"# {key} = {value}\n")
        for s in strings:
            fh.write(s + "\n")


def read_strings(path) -> list[str]:
    """Read configurations written by write_strings, skipping comments."""
    out = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                out.append(line)
    return out
