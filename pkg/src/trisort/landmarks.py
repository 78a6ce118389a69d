"""Height profile and structural landmarks of a configuration.

For a string with at most one second-class particle the landmarks are:
L (maximal prefix of 2s of the projection), R (maximal suffix of 0s),
U (position of the 1), the leftmost-maximum chain M_0 > M_1 > ... of the
height profile on the interior window, and the switching position K.
``U < K`` characterises zero excess, which gives the O(n) fast path used
by the experiment harness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import batch
from .core import THREE_ALPHABET, _check_symbols, excess, project, step_three


@dataclass(frozen=True)
class HeightProfile:
    """Partial sums S_0..S_n with a +1 step per 0 and -1 per 2."""

    values: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class LandmarkSet:
    L: int
    R: int
    U: Optional[int]
    M_list: tuple[int, ...]
    K: int
    K_fallback: bool
    m: Optional[int]  # index with M_list[m] == K, when K sits on the chain

    @property
    def M(self) -> Optional[int]:
        return self.M_list[0] if self.M_list else None

    def to_text(self) -> str:
        """Key/value record used by the golden-file tests and the CLI."""
        lines = [
            f"L {self.L}",
            f"R {self.R}",
            f"U {self.U if self.U is not None else '-'}",
            f"M {' '.join(str(x) for x in self.M_list) if self.M_list else '-'}",
            f"K {self.K}{' fallback' if self.K_fallback else ''}",
        ]
        return "\n".join(lines)


def height_profile(b: str) -> HeightProfile:
    """Height function of a two-type string."""
    _check_symbols(b, frozenset("02"), "two-type string")
    values = [0]
    for c in b:
        values.append(values[-1] + (1 if c == "0" else -1))
    return HeightProfile(values=tuple(values))


def _require_single_one(t: str, at_most: bool) -> Optional[int]:
    ones = t.count("1")
    if ones > 1:
        raise ValueError(f"string {t!r} has {ones} second-class particles; at most one is supported")
    if ones == 0:
        if at_most:
            return None
        raise ValueError(f"string {t!r} has no second-class particle")
    return t.index("1") + 1


def landmarks(t: str) -> LandmarkSet:
    """Compute all landmarks of a string with at most one 1.

    The M chain is read off the height profile level by level from the
    window maximum downwards and truncated as soon as a level's leftmost
    position fails to decrease, which is where the chain stops carrying
    the block structure (and where a tracked maximum has annihilated).
    """
    _check_symbols(t, THREE_ALPHABET, "three-type string")
    u = _require_single_one(t, at_most=True)
    a = batch.strings_to_array([t])
    f = batch.landmark_fields(a)
    n = len(t)
    l = int(f["L"][0])
    r = int(f["R"][0])
    k = int(f["K"][0])
    s = f["S"][0]
    lo, hi = int(f["lo"][0]), int(f["hi"][0])

    m_list: list[int] = []
    if lo <= hi:
        window = s[lo : hi + 1]
        top = int(window.max())
        bottom = int(window.min())
        prev = None
        for level in range(top, bottom - 1, -1):
            hits = np.nonzero(window == level)[0]
            if hits.size == 0:
                break
            pos = lo + int(hits[0])
            if prev is not None and pos >= prev:
                break
            m_list.append(pos)
            prev = pos
    m_index = m_list.index(k) if k in m_list else None
    return LandmarkSet(
        L=l,
        R=r,
        U=u,
        M_list=tuple(m_list),
        K=k,
        K_fallback=bool(f["K_fallback"][0]),
        m=m_index,
    )


def predict_zero_excess(t: str) -> bool:
    """True iff U < K, which equals {excess == 0} for single-1 strings."""
    u = _require_single_one(t, at_most=False)
    lm = landmarks(t)
    return u < lm.K


def check_excess_gt_one_implies_tail(t: str) -> bool:
    """Verify (excess > 1) => (U > n - R) for one string.

    Runs the full dynamics, so this is an oracle-grade check rather than
    a fast path; it must return True on every valid input.
    """
    u = _require_single_one(t, at_most=False)
    lm = landmarks(t)
    if excess(t) <= 1:
        return True
    return u > len(t) - lm.R


def u_position_cdf(b: str, m: int) -> float:
    """P(U <= m | backbone): fraction of the 0s lying in the first m slots.

    Equals (m + S_m) / (n + S_n).  The inequality is weak: counting
    the 0s in positions 1..m is exactly what uniform placement of the
    1 on the 0-positions produces.
    """
    hp = height_profile(b)
    n = len(b)
    if not 0 <= m <= n:
        raise ValueError(f"m must be in [0, {n}], got {m}")
    total = n + hp.values[n]
    if total == 0:
        raise ValueError("string has no 0s; U is undefined")
    return (m + hp.values[m]) / total


@dataclass(frozen=True)
class PhaseStep:
    """Transitions of the tracked maxima during one evolution step."""

    step: int
    L: int
    R: int
    U: Optional[int]
    M_list: tuple[int, ...]
    labels: tuple[str, ...]  # one label per tracked maximum that moved or vanished


@dataclass(frozen=True)
class PhaseTrace:
    steps: tuple[PhaseStep, ...] = field(default_factory=tuple)

    def all_labels(self) -> list[str]:
        return [lab for st in self.steps for lab in st.labels]

    def unexplained(self) -> list[tuple[int, str]]:
        return [(st.step, lab) for st in self.steps for lab in st.labels if lab.startswith("unexplained")]

    def to_text(self) -> str:
        lines = []
        for st in self.steps:
            ms = " ".join(str(x) for x in st.M_list) if st.M_list else "-"
            labs = ",".join(st.labels) if st.labels else "-"
            lines.append(f"step {st.step} L {st.L} R {st.R} U {st.U if st.U is not None else '-'} M {ms} labels {labs}")
        return "\n".join(lines)


def _classify(old: LandmarkSet, new: LandmarkSet) -> list[str]:
    labels = []
    for k, pos in enumerate(old.M_list):
        if k < len(new.M_list):
            delta = new.M_list[k] - pos
            if delta == -1 and pos >= old.L + 2:
                labels.append("bulk")
            elif delta == 1 and pos == old.L + 1 and (k == 0 or old.M_list[k - 1] > old.L + 2):
                labels.append("edge")
            else:
                labels.append(f"unexplained:move{delta:+d}@k={k}")
        else:
            at_edge = pos == old.L + 1
            blocked = k > 0 and old.M_list[k - 1] == old.L + 2
            closing = k == 0 and not new.M_list
            if at_edge and (blocked or closing):
                labels.append("annihilated")
            else:
                labels.append(f"unexplained:vanish@k={k}")
    return labels


def track_phases(t: str) -> PhaseTrace:
    """Relabel every tracked maximum after each evolution step.

    Maxima are matched across steps by their level index (depth below
    the window maximum), which stays put while positions drift.  Every
    observed transition should be one of bulk (-1), edge (+1 at the left
    block) or annihilated; anything else is reported as unexplained.
    """
    _require_single_one(t, at_most=True)
    steps: list[PhaseStep] = []
    current = t
    lm = landmarks(current)
    j = 0
    while True:
        nxt = step_three(current)
        if nxt == current:
            break
        nlm = landmarks(nxt)
        steps.append(
            PhaseStep(
                step=j,
                L=lm.L,
                R=lm.R,
                U=lm.U,
                M_list=lm.M_list,
                labels=tuple(_classify(lm, nlm)),
            )
        )
        current, lm = nxt, nlm
        j += 1
    return PhaseTrace(steps=tuple(steps))
