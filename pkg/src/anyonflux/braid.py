"""Artin braid words, their abelian phases and trace closures.

A word on ``n`` strands is a sequence of nonzero integers; ``k`` stands for
``sigma_|k|`` with crossing sign ``sign(k)``. Letters act left to right on strand
positions, and in ``sigma_i`` the strand at position ``i - 1`` (0-based) passes
over the one at ``i``; for ``sigma_i^-1`` it passes under.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .links import (
    Crossing,
    FramedLinkDiagram,
    LinkParseError,
    format_gauss_code,
    unit_phase,
)

__all__ = [
    "BraidWord",
    "parse_braid",
    "exponent_sum",
    "abelian_phase",
    "permutation",
    "cycles",
    "closure",
    "closure_gauss_code",
]


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError("a braid needs at least one strand")
        object.__setattr__(self, "letters", tuple(int(k) for k in self.letters))
        for k in self.letters:
            if k == 0 or abs(k) > self.strands - 1:
                raise ValueError(
                    f"letter {k} is not a generator of the {self.strands}-strand braid group"
                )

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.strands != other.strands:
            raise ValueError("cannot compose braids on different numbers of strands")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-k for k in reversed(self.letters)))

    def __str__(self) -> str:
        return f"{self.strands}: " + " ".join(str(k) for k in self.letters)


def parse_braid(text: str) -> BraidWord:
    """Read ``"n: k1 k2 ..."``; ``#`` starts a comment, newlines are whitespace."""
    body = " ".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    m = re.fullmatch(r"(\d+)\s*:\s*(.*)", body, flags=re.S)
    if m is None:
        raise LinkParseError(f"expected 'n: k1 k2 ...', got {body[:30]!r}")
    n = int(m.group(1))
    letters = []
    for tok in m.group(2).split():
        try:
            letters.append(int(tok))
        except ValueError:
            raise LinkParseError(f"braid letter {tok!r} is not an integer") from None
    if n < 1:
        raise LinkParseError("strand count must be positive")
    for k in letters:
        if k == 0:
            raise LinkParseError("braid letter 0 is not allowed")
        if abs(k) >= n:
            raise LinkParseError(f"generator {k} out of range for {n} strands")
    return BraidWord(n, tuple(letters))


def exponent_sum(w: BraidWord) -> int:
    return sum(1 if k > 0 else -1 for k in w.letters)


def abelian_phase(w: BraidWord, K: float) -> complex:
    """Each crossing contributes ``exp(+-2*pi*i/K)``."""
    if K == 0:
        raise ValueError("level K must be nonzero")
    e = exponent_sum(w)
    return unit_phase((e % K) / K)


def permutation(w: BraidWord) -> tuple[int, ...]:
    """``perm[p]`` is the bottom position of the strand starting at position ``p``."""
    at = list(range(w.strands))  # at[position] = starting position of the strand there
    for k in w.letters:
        i = abs(k) - 1
        at[i], at[i + 1] = at[i + 1], at[i]
    perm = [0] * w.strands
    for pos, start in enumerate(at):
        perm[start] = pos
    return tuple(perm)


def cycles(perm: tuple[int, ...]) -> list[list[int]]:
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        p = start
        while not seen[p]:
            seen[p] = True
            cyc.append(p)
            p = perm[p]
        out.append(cyc)
    return out


def _component_of_start(w: BraidWord) -> list[int]:
    comp = [0] * w.strands
    for n, cyc in enumerate(cycles(permutation(w))):
        for p in cyc:
            comp[p] = n
    return comp


def closure(w: BraidWord) -> FramedLinkDiagram:
    """Blackboard-framed trace closure; components ordered by smallest start position."""
    comp = _component_of_start(w)
    at = list(range(w.strands))
    crossings = []
    for k in w.letters:
        i = abs(k) - 1
        left, right = comp[at[i]], comp[at[i + 1]]
        over, under = (left, right) if k > 0 else (right, left)
        crossings.append(Crossing(over, under, 1 if k > 0 else -1))
        at[i], at[i + 1] = at[i + 1], at[i]
    return FramedLinkDiagram(len(cycles(permutation(w))), tuple(crossings))


def closure_gauss_code(w: BraidWord) -> str:
    """Signed Gauss code of the closure, labels numbered by letter position.

    Components come out in the same order as in :func:`closure`.
    """
    n = w.strands
    # for every letter record the two positions involved
    events: dict[int, list[tuple[int, str, int, int]]] = {p: [] for p in range(n)}
    at = list(range(n))
    for step, k in enumerate(w.letters):
        i = abs(k) - 1
        sign = 1 if k > 0 else -1
        left_kind, right_kind = ("O", "U") if k > 0 else ("U", "O")
        events[at[i]].append((step, left_kind, step + 1, sign))
        events[at[i + 1]].append((step, right_kind, step + 1, sign))
        at[i], at[i + 1] = at[i + 1], at[i]
    code = []
    for cyc in cycles(permutation(w)):
        tokens = []
        for start in cyc:  # follow the component strand by strand
            tokens.extend((kind, label, sign) for _, kind, label, sign in events[start])
        code.append(tokens)
    return format_gauss_code(code)
