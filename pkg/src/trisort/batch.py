"""Vectorized batch versions of the dynamics and landmark scans.

Configurations are numpy uint8 matrices, one string per row, symbol
values 0/1/2.  The per-string functions in :mod:`trisort.core` and
:mod:`trisort.landmarks` are the correctness oracles; every function
here must agree with them, which the test suite checks exhaustively on
small strings.
"""

from __future__ import annotations

import numpy as np

_NEG = np.iinfo(np.int64).min // 4


def strings_to_array(strings) -> np.ndarray:
    """Stack equal-length strings into a (rows, n) uint8 matrix."""
    strings = list(strings)
    n = len(strings[0])
    if any(len(s) != n for s in strings):
        raise ValueError("all strings in a batch must have equal length")
    flat = np.frombuffer("".join(strings).encode("ascii"), dtype=np.uint8)
    return (flat - ord("0")).reshape(len(strings), n)


def array_to_strings(a: np.ndarray) -> list[str]:
    return [(row + ord("0")).tobytes().decode("ascii") for row in np.atleast_2d(a)]


def step_three_array(a: np.ndarray) -> np.ndarray:
    """Parallel update applied to every row; same rules as core.step_three."""
    a = np.atleast_2d(a)
    rows, n = a.shape
    out = a.copy()
    if n < 2:
        return out
    incr = a[:, :-1] < a[:, 1:]
    left_ok = np.ones_like(incr)
    left_ok[:, 1:] = a[:, :-2] >= a[:, 1:-1]
    right_ok = np.ones_like(incr)
    if n >= 3:
        right_ok[:, :-1] = a[:, 1:-1] >= a[:, 2:]
        triple = (a[:, :-2] == 0) & (a[:, 1:-1] == 1) & (a[:, 2:] == 2)
        r, c = np.nonzero(triple)
        out[r, c + 1] = 2
        out[r, c + 2] = 1
    pair = incr & left_ok & right_ok
    r, c = np.nonzero(pair)
    out[r, c] = a[r, c + 1]
    out[r, c + 1] = a[r, c]
    return out


def stabilize_times_array(a: np.ndarray, return_final: bool = False):
    """Stabilization time of every row under the parallel update.

    Rows that reach their fixed point drop out of the iteration, so the
    total work is proportional to the surviving rows per step.
    """
    a = np.atleast_2d(a).copy()
    rows, n = a.shape
    times = np.zeros(rows, dtype=np.int64)
    active = np.arange(rows)
    step_count = 0
    cap = 3 * n + 4
    while active.size:
        cur = a[active]
        nxt = step_three_array(cur)
        changed = (nxt != cur).any(axis=1)
        moved = active[changed]
        a[moved] = nxt[changed]
        times[moved] += 1
        active = moved
        step_count += 1
        if step_count > cap:
            raise AssertionError("batch dynamics did not stabilize")
    if return_final:
        return times, a
    return times


def height_profiles(a: np.ndarray) -> np.ndarray:
    """Height S_0..S_n of each row's type-1 projection (1 counts as 0)."""
    a = np.atleast_2d(a)
    rows, n = a.shape
    steps = np.where(a == 2, -1, 1)
    s = np.zeros((rows, n + 1), dtype=np.int64)
    np.cumsum(steps, axis=1, out=s[:, 1:])
    return s


def sorting_time_two_array(a: np.ndarray) -> np.ndarray:
    """Closed-form two-type stabilization time of each row (values 0/2)."""
    a = np.atleast_2d(a)
    rows, n = a.shape
    s = height_profiles(a)
    is_two = a == 2
    n_twos = is_two.sum(axis=1)
    has_two = n_twos > 0
    last_two = np.where(has_two, n - 1 - np.argmax(is_two[:, ::-1], axis=1), -1)
    # heights at 0-positions strictly before the last 2
    col = np.arange(n)
    eligible = (~is_two) & (col[None, :] < last_two[:, None])
    peak = np.where(eligible, s[:, 1:], _NEG).max(axis=1)
    t = n_twos + peak - 1
    return np.where(eligible.any(axis=1), np.maximum(t, 0), 0)


def landmark_fields(a: np.ndarray) -> dict:
    """L, R, window, leftmost maximum M and switching position K per row.

    Operates on the type-1 projection of each row (symbol 1 counts as
    0).  Rows with an empty window get ``m_defined=False``; rows whose
    defining set for K is empty get the fallback ``K = L + 2``.
    """
    a = np.atleast_2d(a)
    rows, n = a.shape
    proj_is_two = a == 2
    s = height_profiles(a)

    not_two = ~proj_is_two
    l = np.where(not_two.any(axis=1), np.argmax(not_two, axis=1), n)
    tail_is_two = proj_is_two[:, ::-1]
    r = np.where(tail_is_two.any(axis=1), np.argmax(tail_is_two, axis=1), n)

    lo = l + 1
    hi = n - r - 1
    window_ok = lo <= hi
    col = np.arange(n + 1)

    # K: rightmost k in [L+2, hi] whose prefix max over [L, k-2] stays
    # below S_k - 1; positions left of L are excluded from the max.
    masked = np.where(col[None, :] >= l[:, None], s, _NEG)
    prefmax = np.maximum.accumulate(masked, axis=1)
    cond = np.zeros((rows, n + 1), dtype=bool)
    cond[:, 2:] = prefmax[:, :-2] < s[:, 2:] - 1
    cond &= (col[None, :] >= (l + 2)[:, None]) & (col[None, :] <= hi[:, None])
    has_k = cond.any(axis=1)
    k_pos = n - np.argmax(cond[:, ::-1], axis=1)
    # No upper clamp: strings ending in the lone 1 need K = L+2 > n for
    # the zero-excess predicate to hold.
    k_fallback = l + 2
    k = np.where(has_k, k_pos, k_fallback)

    in_window = (col[None, :] >= lo[:, None]) & (col[None, :] <= hi[:, None])
    s_window = np.where(in_window, s, _NEG)
    m = s_window.argmax(axis=1)
    m_defined = window_ok

    return {
        "L": l,
        "R": r,
        "lo": lo,
        "hi": hi,
        "S": s,
        "K": k,
        "K_fallback": ~has_k,
        "M": np.where(m_defined, m, -1),
        "M_defined": m_defined,
    }
