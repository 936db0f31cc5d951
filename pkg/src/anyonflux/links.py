"""Framed link diagrams, their crossing invariants and Wilson-loop expectation values.

A diagram is stored as signed crossings between numbered components. Framing is
read off the diagram (blackboard framing: signed self-crossings of a component)
plus an optional integer offset per component, so a link can also be given purely
at the invariant level as a zero-crossing diagram with offsets.

Two text formats are understood:

crossing list::

    # comment
    components 2
    cross 0 1 -
    cross 1 0 -
    framing 0 3

signed extended Gauss code, one component per line, labels global to the file;
a line holding only ``.`` is a component without crossings::

    O1+ U2+ O3+ U1+ O2+ U3+
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Crossing",
    "FramedLinkDiagram",
    "LinkInvariants",
    "LinkParseError",
    "InconsistentDiagramError",
    "parse_link_text",
    "parse_gauss_code",
    "parse_link",
    "detect_format",
    "invariants",
    "expectation",
    "unit_phase",
    "mirror",
    "disjoint_union",
    "format_crossing_list",
    "format_gauss_code",
]


class LinkParseError(ValueError):
    """Malformed link text. ``line`` is 1-based, or None when not tied to a line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InconsistentDiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Crossing:
    over: int
    under: int
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"crossing sign must be +1 or -1, got {self.sign!r}")
        if self.over < 0 or self.under < 0:
            raise ValueError("component indices must be non-negative")


@dataclass(frozen=True)
class FramedLinkDiagram:
    num_components: int
    crossings: tuple[Crossing, ...] = ()
    framing_offsets: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.num_components < 1:
            raise ValueError("a link needs at least one component")
        object.__setattr__(self, "crossings", tuple(self.crossings))
        offsets = self.framing_offsets
        if offsets is None:
            offsets = (0,) * self.num_components
        offsets = tuple(int(o) for o in offsets)
        if len(offsets) != self.num_components:
            raise ValueError(
                f"{len(offsets)} framing offsets given for {self.num_components} components"
            )
        object.__setattr__(self, "framing_offsets", offsets)
        for x in self.crossings:
            if x.over >= self.num_components or x.under >= self.num_components:
                raise ValueError(
                    f"crossing {x} references a component >= {self.num_components}"
                )

    @property
    def is_trivial(self) -> bool:
        return not self.crossings and not any(self.framing_offsets)


@dataclass(frozen=True)
class LinkInvariants:
    framings: tuple[int, ...]
    linking: tuple[tuple[int, ...], ...]
    total_crossing_number: int

    def linking_matrix(self) -> np.ndarray:
        return np.array(self.linking, dtype=np.int64).reshape(
            len(self.framings), len(self.framings)
        )

    def to_dict(self) -> dict:
        return {
            "framings": list(self.framings),
            "linking": [list(row) for row in self.linking],
            "total_crossing_number": self.total_crossing_number,
        }


# -- parsing -----------------------------------------------------------------

_SIGNS = {"+": 1, "+1": 1, "-": -1, "-1": -1}


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_index(token: str, lineno: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise LinkParseError(f"{what} must be an integer, got {token!r}", lineno) from None
    if value < 0:
        raise LinkParseError(f"{what} must be non-negative, got {value}", lineno)
    return value


def parse_link_text(text: str) -> FramedLinkDiagram:
    """Parse the crossing-list format.

    The ``components`` header must come before any ``cross`` or ``framing`` line.
    Crossings are kept in file order; repeated ``framing`` lines for the same
    component accumulate.
    """
    n = None
    crossings: list[Crossing] = []
    offsets: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        tokens = line.split()
        head = tokens[0]
        if head == "components":
            if n is not None:
                raise LinkParseError("duplicate 'components' header", lineno)
            if len(tokens) != 2:
                raise LinkParseError("expected 'components <n>'", lineno)
            n = _parse_index(tokens[1], lineno, "component count")
            if n < 1:
                raise LinkParseError("component count must be positive", lineno)
            offsets = [0] * n
            continue
        if n is None:
            raise LinkParseError(f"'{head}' before 'components' header", lineno)
        if head == "cross":
            if len(tokens) != 4:
                raise LinkParseError("expected 'cross <over> <under> <sign>'", lineno)
            over = _parse_index(tokens[1], lineno, "over component")
            under = _parse_index(tokens[2], lineno, "under component")
            for idx in (over, under):
                if idx >= n:
                    raise LinkParseError(
                        f"component index {idx} out of range for {n} components", lineno
                    )
            if tokens[3] not in _SIGNS:
                raise LinkParseError(f"bad crossing sign {tokens[3]!r}", lineno)
            crossings.append(Crossing(over, under, _SIGNS[tokens[3]]))
        elif head == "framing":
            if len(tokens) != 3:
                raise LinkParseError("expected 'framing <component> <int>'", lineno)
            comp = _parse_index(tokens[1], lineno, "framing component")
            if comp >= n:
                raise LinkParseError(
                    f"framing given for undeclared component {comp}", lineno
                )
            try:
                offsets[comp] += int(tokens[2])
            except ValueError:
                raise LinkParseError(
                    f"framing offset must be an integer, got {tokens[2]!r}", lineno
                ) from None
        else:
            raise LinkParseError(f"unknown directive {head!r}", lineno)
    if n is None:
        raise LinkParseError("missing 'components <n>' header")
    return FramedLinkDiagram(n, tuple(crossings), tuple(offsets))


_GAUSS_TOKEN = re.compile(r"^([OU])(\d+)([+-])$")


def parse_gauss_code(text: str) -> FramedLinkDiagram:
    """Parse signed extended Gauss code, one component per non-blank line.

    Each label must occur exactly once as ``O`` and once as ``U`` with the same
    sign. Crossings are ordered by first appearance of their label. Planarity is
    not checked.
    """
    over_at: dict[int, tuple[int, int, int]] = {}   # label -> (component, sign, line)
    under_at: dict[int, tuple[int, int, int]] = {}
    order: list[int] = []
    component = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        component += 1
        if line == ".":
            continue
        for token in line.split():
            m = _GAUSS_TOKEN.match(token)
            if m is None:
                raise LinkParseError(f"bad Gauss token {token!r}", lineno)
            kind, label, sign = m.group(1), int(m.group(2)), _SIGNS[m.group(3)]
            if label < 1:
                raise LinkParseError(f"labels must be positive, got {label}", lineno)
            table = over_at if kind == "O" else under_at
            if label in table:
                raise LinkParseError(f"label {label} seen twice as {kind}", lineno)
            other = under_at if kind == "O" else over_at
            if label in other and other[label][1] != sign:
                raise LinkParseError(
                    f"sign mismatch for label {label} (line {other[label][2]} vs here)",
                    lineno,
                )
            table[label] = (component, sign, lineno)
            if label not in other:
                order.append(label)
    if component < 0:
        raise LinkParseError("empty Gauss code")
    dangling = sorted(set(over_at) ^ set(under_at))
    if dangling:
        raise LinkParseError(f"dangling labels {dangling}: need one O and one U each")
    crossings = tuple(
        Crossing(over_at[lab][0], under_at[lab][0], over_at[lab][1]) for lab in order
    )
    return FramedLinkDiagram(component + 1, crossings)


def detect_format(text: str) -> str:
    """Return ``'crossings'``, ``'gauss'`` or ``'braid'`` from the first real token."""
    for raw in text.splitlines():
        line = _strip_comment(raw)
        if not line:
            continue
        first = line.split()[0]
        if first == "components":
            return "crossings"
        if first[0] in "OU" or first == ".":
            return "gauss"
        if re.match(r"^\d+:", first):
            return "braid"
        raise LinkParseError(f"cannot detect link format from {first!r}")
    raise LinkParseError("no content")


def parse_link(text: str) -> FramedLinkDiagram:
    """Parse either link format (auto-detected); braid words are closed."""
    kind = detect_format(text)
    if kind == "crossings":
        return parse_link_text(text)
    if kind == "gauss":
        return parse_gauss_code(text)
    from .braid import closure, parse_braid

    return closure(parse_braid(text))


# -- invariants --------------------------------------------------------------

def invariants(d: FramedLinkDiagram) -> LinkInvariants:
    """Framing numbers, linking matrix and total crossing number of ``d``.

    The total crossing number counts ordered pairs, so it is the signed crossing
    count plus the framing offsets.
    """
    n = d.num_components
    framings = list(d.framing_offsets)
    doubled = [[0] * n for _ in range(n)]
    for x in d.crossings:
        if x.over == x.under:
            framings[x.over] += x.sign
        else:
            doubled[x.over][x.under] += x.sign
            doubled[x.under][x.over] += x.sign
    linking = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if doubled[i][j] % 2:
                raise InconsistentDiagramError(
                    f"components {i} and {j} have odd signed crossing sum {doubled[i][j]}"
                )
            linking[i][j] = linking[j][i] = doubled[i][j] // 2
    total = sum(framings) + sum(linking[i][j] for i in range(n) for j in range(n))
    return LinkInvariants(
        tuple(framings), tuple(tuple(row) for row in linking), total
    )


def unit_phase(turns: float) -> complex:
    """exp(2*pi*i*turns), exact at multiples of a quarter turn."""
    turns = math.fmod(turns, 1.0)
    quarter = turns * 4
    if quarter == int(quarter):
        return (1 + 0j, 1j, -1 + 0j, -1j)[int(quarter) % 4]
    angle = 2 * math.pi * turns
    return complex(math.cos(angle), math.sin(angle))


def expectation(inv: LinkInvariants | int, K: float) -> complex:
    """Wilson-loop expectation exp(2*pi*i * #L / K) in the level-K state."""
    if K == 0:
        raise ValueError("level K must be nonzero")
    total = inv if isinstance(inv, int) else inv.total_crossing_number
    # reduce mod K first so large #L keeps full precision
    return unit_phase(math.fmod(total, K) / K)


def mirror(d: FramedLinkDiagram) -> FramedLinkDiagram:
    return FramedLinkDiagram(
        d.num_components,
        tuple(Crossing(x.over, x.under, -x.sign) for x in d.crossings),
        tuple(-o for o in d.framing_offsets),
    )


def disjoint_union(*parts: FramedLinkDiagram) -> FramedLinkDiagram:
    """Place diagrams side by side, renumbering components in order."""
    shift = 0
    crossings: list[Crossing] = []
    offsets: list[int] = []
    for d in parts:
        crossings.extend(
            Crossing(x.over + shift, x.under + shift, x.sign) for x in d.crossings
        )
        offsets.extend(d.framing_offsets)
        shift += d.num_components
    return FramedLinkDiagram(shift, tuple(crossings), tuple(offsets))


# -- formatting --------------------------------------------------------------

def format_crossing_list(d: FramedLinkDiagram) -> str:
    lines = [f"components {d.num_components}"]
    lines += [
        f"cross {x.over} {x.under} {'+' if x.sign > 0 else '-'}" for x in d.crossings
    ]
    lines += [
        f"framing {i} {o}" for i, o in enumerate(d.framing_offsets) if o
    ]
    return "\n".join(lines) + "\n"


def format_gauss_code(components: Sequence[Iterable[tuple[str, int, int]]]) -> str:
    """Render ``[(kind, label, sign), ...]`` per component as Gauss-code text."""
    lines = []
    for comp in components:
        text = " ".join(f"{k}{lab}{'+' if s > 0 else '-'}" for k, lab, s in comp)
        lines.append(text or ".")
    return "\n".join(lines) + "\n"
