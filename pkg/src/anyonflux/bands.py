"""Normalized 2-band Bloch maps on the Brillouin torus and their degree.

A 2-band Bloch Hamiltonian ``H(k) = d(k) . sigma`` is gapped exactly when ``d``
never vanishes; ``d / |d|`` is then a map from the torus to the 2-sphere whose
degree is the Chern number of the bands.

The degree is computed by triangulating the sampling grid and adding up the signed
areas of the spherical triangles spanned by the sampled unit vectors. With grid
point ``(j, l)`` at ``k = (2 pi j / N, 2 pi l / N)``, each plaquette is split into
``(j,l) -> (j+1,l) -> (j+1,l+1)`` and ``(j,l) -> (j+1,l+1) -> (j,l+1)``.
How the sign of this degree relates to the valence-band Chern number is recorded
in ``conventions.json``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np

__all__ = [
    "GAP_TOL",
    "ANTIPODAL_TOL",
    "RESIDUAL_TOL",
    "NumericalPreconditionError",
    "GapClosingError",
    "AntipodalTriangleError",
    "UnderResolvedError",
    "BlochMap",
    "TwoBandModel",
    "DegreeResult",
    "sample_model",
    "solid_angles",
    "hopf_degree",
    "chern_number",
    "valence_chern_sign",
    "load_table",
    "parse_model",
]

GAP_TOL = 1e-8
ANTIPODAL_TOL = 1e-12
RESIDUAL_TOL = 0.1


class NumericalPreconditionError(ValueError):
    """The map is not well defined or not resolved well enough."""


class GapClosingError(NumericalPreconditionError):
    pass


class AntipodalTriangleError(NumericalPreconditionError):
    pass


class UnderResolvedError(NumericalPreconditionError):
    pass


@dataclass(frozen=True, eq=False)
class BlochMap:
    N: int
    n: np.ndarray           # (N, N, 3), first axis kx
    min_gap: float | None = None

    def __post_init__(self):
        n = np.asarray(self.n, dtype=float)
        if self.N < 2 or n.shape != (self.N, self.N, 3):
            raise ValueError(f"expected an ({self.N}, {self.N}, 3) array, got {n.shape}")
        norms = np.linalg.norm(n, axis=-1)
        if np.max(np.abs(norms - 1)) > 1e-12:
            raise ValueError("Bloch map samples must be unit vectors")
        n.setflags(write=False)
        object.__setattr__(self, "n", n)

    @classmethod
    def from_vectors(cls, d: np.ndarray, gap_tol: float = GAP_TOL) -> "BlochMap":
        """Normalize raw d-vectors, refusing to do so where the gap closes."""
        d = np.asarray(d, dtype=float)
        norms = np.linalg.norm(d, axis=-1)
        idx = np.unravel_index(np.argmin(norms), norms.shape)
        min_gap = float(norms[idx])
        if min_gap < gap_tol:
            raise GapClosingError(
                f"|d(k)| = {min_gap:.3g} at grid point {tuple(int(i) for i in idx)}: gap closes"
            )
        return cls(d.shape[0], d / norms[..., None], min_gap)

    def swap_axes(self) -> "BlochMap":
        return BlochMap(self.N, np.swapaxes(self.n, 0, 1), self.min_gap)

    def __neg__(self) -> "BlochMap":
        return BlochMap(self.N, -self.n, self.min_gap)


@dataclass(frozen=True)
class TwoBandModel:
    """A named d-vector model; ``kind`` is ``"qwz"``, ``"constant"`` or ``"table"``."""

    kind: str
    params: tuple = ()
    table: np.ndarray | None = None

    @classmethod
    def qwz(cls, m: float) -> "TwoBandModel":
        return cls("qwz", (float(m),))

    @classmethod
    def constant(cls, x: float, y: float, z: float) -> "TwoBandModel":
        return cls("constant", (float(x), float(y), float(z)))

    @classmethod
    def tabulated(cls, d: np.ndarray) -> "TwoBandModel":
        d = np.asarray(d, dtype=float)
        if d.ndim != 3 or d.shape[0] != d.shape[1] or d.shape[2] != 3:
            raise ValueError(f"tabulated model needs shape (N, N, 3), got {d.shape}")
        return cls("table", (d.shape[0],), d)

    def d_vector(self) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
        if self.kind == "qwz":
            (m,) = self.params
            return lambda kx, ky: np.stack(
                [np.sin(kx), np.sin(ky), m + np.cos(kx) + np.cos(ky)], axis=-1
            )
        if self.kind == "constant":
            vec = np.array(self.params, dtype=float)
            return lambda kx, ky: np.broadcast_to(vec, kx.shape + (3,)).copy()
        raise ValueError(f"model kind {self.kind!r} has no closed form")

    def label(self) -> str:
        if self.kind == "qwz":
            return f"qwz:m={self.params[0]!r}"
        if self.kind == "constant":
            return "constant:" + ",".join(repr(v) for v in self.params)
        return f"table:N={self.params[0]}"


def sample_model(model: TwoBandModel, N: int, gap_tol: float = GAP_TOL) -> BlochMap:
    if model.kind == "table":
        if N is not None and N != model.params[0]:
            raise ValueError(f"tabulated model has N={model.params[0]}, asked for N={N}")
        return BlochMap.from_vectors(model.table, gap_tol)
    if N < 2:
        raise ValueError("grid resolution N must be at least 2")
    k = 2 * np.pi * np.arange(N) / N
    kx, ky = np.meshgrid(k, k, indexing="ij")
    return BlochMap.from_vectors(model.d_vector()(kx, ky), gap_tol)


def _triangles(n: np.ndarray):
    a = n
    b = np.roll(n, -1, axis=0)                 # (j+1, l)
    c = np.roll(np.roll(n, -1, axis=0), -1, axis=1)  # (j+1, l+1)
    d = np.roll(n, -1, axis=1)                 # (j, l+1)
    return (a, b, c), (a, c, d)


def _signed_area(u, v, w, antipodal_tol):
    # Van Oosterom-Strackee: tan(omega/2) = u.(v x w) / (1 + u.v + v.w + w.u)
    uv = np.einsum("...i,...i", u, v)
    vw = np.einsum("...i,...i", v, w)
    wu = np.einsum("...i,...i", w, u)
    worst = min(float(np.min(1 + uv)), float(np.min(1 + vw)), float(np.min(1 + wu)))
    if worst < antipodal_tol:
        raise AntipodalTriangleError(
            "a triangle has (nearly) antipodal corners; increase N"
        )
    triple = np.einsum("...i,...i", u, np.cross(v, w))
    return 2 * np.arctan2(triple, 1 + uv + vw + wu)


def solid_angles(m: BlochMap, antipodal_tol: float = ANTIPODAL_TOL) -> np.ndarray:
    """Signed solid angles, shape ``(2, N, N)``: lower and upper triangle per plaquette."""
    lower, upper = _triangles(m.n)
    return np.stack(
        [_signed_area(*lower, antipodal_tol), _signed_area(*upper, antipodal_tol)]
    )


@dataclass(frozen=True)
class DegreeResult:
    degree: int
    raw: float
    residual: float

    def __int__(self) -> int:
        return self.degree


def hopf_degree(
    m: BlochMap,
    residual_tol: float = RESIDUAL_TOL,
    antipodal_tol: float = ANTIPODAL_TOL,
) -> DegreeResult:
    """Degree of the Bloch map by summing signed spherical triangle areas."""
    omega = solid_angles(m, antipodal_tol)
    # fsum keeps the reduction order-independent and reproducible
    raw = math.fsum(omega.ravel().tolist()) / (4 * math.pi)
    degree = int(round(raw))
    residual = abs(raw - degree)
    if residual >= residual_tol:
        raise UnderResolvedError(
            f"degree sum {raw:.6f} is {residual:.3g} away from an integer; increase N"
        )
    return DegreeResult(degree, raw, residual)


def chern_number(
    m: BlochMap,
    residual_tol: float = RESIDUAL_TOL,
    antipodal_tol: float = ANTIPODAL_TOL,
) -> int:
    """Same integer as :func:`hopf_degree`, under this module's orientation convention."""
    return hopf_degree(m, residual_tol, antipodal_tol).degree


def _conventions() -> dict:
    text = resources.files("anyonflux").joinpath("conventions.json").read_text()
    return json.loads(text)


def valence_chern_sign() -> int:
    """Factor ``s`` with valence-band Chern number ``= s * hopf_degree``."""
    return int(_conventions()["band_topology"]["valence_chern_per_degree"])


# -- input -------------------------------------------------------------------

def load_table(source: str | Path | io.TextIOBase) -> TwoBandModel:
    """Read a ``jx,jy,dx,dy,dz`` CSV covering a complete N x N grid."""
    if isinstance(source, (str, Path)):
        with open(source, newline="", encoding="utf-8") as fh:
            return load_table(fh)
    reader = csv.DictReader(source)
    if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != [
        "jx", "jy", "dx", "dy", "dz"
    ]:
        raise ValueError("table header must be 'jx,jy,dx,dy,dz'")
    rows = {}
    for lineno, row in enumerate(reader, start=2):
        try:
            j, l = int(row["jx"]), int(row["jy"])
            vec = (float(row["dx"]), float(row["dy"]), float(row["dz"]))
        except (TypeError, ValueError):
            raise ValueError(f"line {lineno}: malformed row {row!r}") from None
        if (j, l) in rows:
            raise ValueError(f"line {lineno}: duplicate grid point ({j}, {l})")
        rows[(j, l)] = vec
    N = math.isqrt(len(rows))
    if N * N != len(rows) or N < 2:
        raise ValueError(f"{len(rows)} rows do not form a complete square grid")
    d = np.empty((N, N, 3))
    for j in range(N):
        for l in range(N):
            if (j, l) not in rows:
                raise ValueError(f"grid point ({j}, {l}) missing from table")
            d[j, l] = rows[(j, l)]
    return TwoBandModel.tabulated(d)


def parse_model(spec: str) -> TwoBandModel:
    """``qwz:m=<float>``, ``constant:x,y,z`` or a path to a CSV table."""
    if spec.startswith("qwz:"):
        key, _, value = spec[4:].partition("=")
        if key.strip() != "m" or not value:
            raise ValueError(f"expected 'qwz:m=<float>', got {spec!r}")
        return TwoBandModel.qwz(float(value))
    if spec.startswith("constant:"):
        parts = spec[len("constant:"):].split(",")
        if len(parts) != 3:
            raise ValueError(f"expected 'constant:x,y,z', got {spec!r}")
        return TwoBandModel.constant(*(float(p) for p in parts))
    return load_table(spec)
