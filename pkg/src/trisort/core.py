"""Parallel-update sorting dynamics for two- and three-symbol strings.

Strings are plain Python ``str`` objects over the alphabets {'0','2'}
(two types) and {'0','1','2'} (three types).  One update step swaps, all
at once, every adjacent increasing pair whose neighbourhood permits it;
for three types the substring ``012`` resolves to ``021`` (the ``12``
swap wins the conflict).  Repeated stepping sorts any string into
non-increasing order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

TWO_ALPHABET = frozenset("02")
THREE_ALPHABET = frozenset("012")


def _check_symbols(s: str, alphabet: frozenset, what: str) -> None:
    if len(s) < 1:
        raise ValueError(f"{what} must have length >= 1")
    bad = set(s) - alphabet
    if bad:
        raise ValueError(f"invalid symbol(s) {sorted(bad)} in {what} {s!r}")


@dataclass(frozen=True)
class StabilizationOutcome:
    """Result of running the dynamics to its fixed point.

    ``steps`` is the number of change-producing update applications; a
    sorted input has ``steps == 0``.  ``trajectory`` (when recorded) has
    ``steps + 1`` entries, starting at the input and ending at ``final``.
    """

    final: str
    steps: int
    trajectory: Optional[tuple[str, ...]] = None


def project(omega: str, which: int) -> str:
    """Collapse a three-type string to two types.

    ``which=1`` identifies 1 with 0 (second-class particles count as
    particles); ``which=2`` identifies 1 with 2.
    """
    _check_symbols(omega, THREE_ALPHABET, "string")
    if which == 1:
        return omega.replace("1", "0")
    if which == 2:
        return omega.replace("1", "2")
    raise ValueError(f"projection must be 1 or 2, got {which}")


def step_two(b: str) -> str:
    """One parallel update of a two-type string: every 02 becomes 20.

    Occurrences of 02 cannot overlap, so the simultaneous update is
    unambiguous; all decisions are read from the input string.
    """
    _check_symbols(b, TWO_ALPHABET, "two-type string")
    out = list(b)
    for i in range(len(b) - 1):
        if b[i] == "0" and b[i + 1] == "2":
            out[i] = "2"
            out[i + 1] = "0"
    return "".join(out)


def step_three(t: str) -> str:
    """One parallel update of a three-type string.

    Two rules, both evaluated on the input configuration:

    * every substring 012 becomes 021 (conflict resolution: the 12 swap
      has priority over the 01 swap);
    * every other adjacent increasing pair s[i] < s[i+1] is swapped,
      provided s[i-1] >= s[i] and s[i+1] >= s[i+2]; comparisons against
      positions outside the string are treated as satisfied.

    The triple rule and the qualifying pair swaps never overlap, so the
    writes commute.
    """
    _check_symbols(t, THREE_ALPHABET, "three-type string")
    n = len(t)
    s = [int(c) for c in t]
    out = s[:]
    for i in range(n - 2):
        if s[i] == 0 and s[i + 1] == 1 and s[i + 2] == 2:
            out[i + 1] = 2
            out[i + 2] = 1
    for i in range(n - 1):
        if (
            s[i] < s[i + 1]
            and (i == 0 or s[i - 1] >= s[i])
            and (i + 2 >= n or s[i + 1] >= s[i + 2])
        ):
            out[i] = s[i + 1]
            out[i + 1] = s[i]
    return "".join(str(c) for c in out)


def is_sorted_nonincreasing(s: str) -> bool:
    """True iff the symbols never increase from left to right."""
    return all(s[i] >= s[i + 1] for i in range(len(s) - 1))


def _stabilize(s: str, step, record_trajectory: bool, max_steps: int) -> StabilizationOutcome:
    trajectory = [s] if record_trajectory else None
    steps = 0
    current = s
    while True:
        nxt = step(current)
        if nxt == current:
            break
        current = nxt
        steps += 1
        if trajectory is not None:
            trajectory.append(current)
        if steps > max_steps:
            raise AssertionError(f"dynamics did not stabilize within {max_steps} steps")
    return StabilizationOutcome(
        final=current,
        steps=steps,
        trajectory=tuple(trajectory) if trajectory is not None else None,
    )


def stabilize_two(b: str, record_trajectory: bool = False) -> StabilizationOutcome:
    """Iterate step_two to its fixed point.  Takes at most n-1 steps."""
    _check_symbols(b, TWO_ALPHABET, "two-type string")
    return _stabilize(b, step_two, record_trajectory, max_steps=len(b))


def stabilize_three(t: str, record_trajectory: bool = False) -> StabilizationOutcome:
    """Iterate step_three to its fixed point."""
    _check_symbols(t, THREE_ALPHABET, "three-type string")
    # 2n is a safe cap: the projected string sorts in < n steps and the
    # lone second-class particle needs at most n further swaps.
    return _stabilize(t, step_three, record_trajectory, max_steps=3 * len(t) + 4)


def sorting_time_two(b: str) -> int:
    """Closed-form stabilization time of a two-type string in O(n).

    View the 0s as cars driving right into empty sites (the 2s).  A car
    with i-1 cars behind it and height S at its start position finishes
    at time (#2s) + S - 1 unless no 2 ever lies to its right; the
    stabilization time is the maximum of these finish times, or 0 for a
    sorted string.  Verified against stabilize_two exhaustively in the
    test suite.
    """
    _check_symbols(b, TWO_ALPHABET, "two-type string")
    last_two = b.rfind("2")
    if last_two <= 0:
        return 0
    n_twos = b.count("2")
    height = 0
    best = None
    for i in range(last_two):
        if b[i] == "0":
            height += 1
            if best is None or height > best:
                best = height
        else:
            height -= 1
    if best is None:
        return 0
    return max(0, n_twos + best - 1)


def excess(t: str) -> int:
    """Extra steps the full dynamics needs beyond its two-type projection."""
    three = stabilize_three(t).steps
    two = sorting_time_two(project(t, 1))
    e = three - two
    if e < 0:
        raise AssertionError(f"negative excess {e} for {t!r}")
    return e
