"""Level-K clock/shift representations of the quantum torus and modular intertwiners.

At level K the central generator acts as ``zeta = exp(i*pi/K)`` (or its negative,
``zeta_branch=1``), so ``W(1,0) W(0,1) = q W(0,1) W(1,0)`` with ``q = zeta**2 =
exp(2*pi*i/K)``. The K-dimensional irreducible representations are labelled by a
sector ``(alpha, beta)`` in ``[0, 1)**2``, i.e. by the central characters of
``Wh(K, 0)`` and ``Wh(0, K)``.

Intertwiners for modular group elements are not written down in closed form. They
are extracted numerically as the null space of the linear conditions

    P rho(Wh(v)) = mu(v) rho(Wh(v g)) P,    v in {(1,0), (0,1)}

with an SVD.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import SL2Z, GroupWord, S, T
from .links import unit_phase

__all__ = [
    "Level",
    "Sector",
    "LevelRep",
    "Intertwiner",
    "ModularReport",
    "NonScalarError",
    "MissingIntertwinerError",
    "ALGEBRAIC_TOL",
    "SVD_TOL",
    "build_rep",
    "rep_word",
    "rep_residuals",
    "central_characters",
    "transformed_sector",
    "find_intertwiner",
    "modular_relations",
    "phase_align",
]

ALGEBRAIC_TOL = 1e-12
SVD_TOL = 1e-9


class NonScalarError(ValueError):
    pass


class MissingIntertwinerError(ValueError):
    pass


@dataclass(frozen=True)
class Level:
    K: int
    zeta_branch: int = 0

    def __post_init__(self):
        if int(self.K) != self.K or self.K < 1:
            raise ValueError(f"level K must be a positive integer, got {self.K!r}")
        if self.zeta_branch not in (0, 1):
            raise ValueError("zeta_branch must be 0 or 1")

    def zeta_power(self, n: int) -> complex:
        """``zeta**n`` computed from the exact exponent."""
        turns = (n % (2 * self.K)) / (2 * self.K)
        if self.zeta_branch and n % 2:
            turns += 0.5
        return unit_phase(turns)

    def q_power(self, n: int) -> complex:
        return unit_phase((n % self.K) / self.K)

    @property
    def zeta(self) -> complex:
        return self.zeta_power(1)

    @property
    def q(self) -> complex:
        return self.q_power(1)


@dataclass(frozen=True)
class Sector:
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not 0 <= value < 1:
                raise ValueError(f"sector {name} must lie in [0, 1), got {value!r}")

    @classmethod
    def from_characters(cls, lam_x: complex, lam_y: complex) -> "Sector":
        def turns(z):
            t = (cmath.phase(z) / (2 * math.pi)) % 1.0
            # clean round-off so that e.g. 0.9999999999999999 reads as 0
            t = round(t, 12) % 1.0
            return t

        return cls(turns(lam_x), turns(lam_y))

    def as_tuple(self) -> tuple[float, float]:
        return (self.alpha, self.beta)


@dataclass(frozen=True, eq=False)
class LevelRep:
    level: Level
    sector: Sector
    U: np.ndarray
    V: np.ndarray

    @property
    def K(self) -> int:
        return self.level.K


def build_rep(level: Level | int, sector: Sector | None = None) -> LevelRep:
    """Clock and shift matrices twisted by the sector phases."""
    if not isinstance(level, Level):
        level = Level(level)
    sector = sector or Sector()
    K = level.K
    clock = np.diag([level.q_power(j) for j in range(K)])
    shift = np.zeros((K, K), dtype=complex)
    shift[(np.arange(K) + 1) % K, np.arange(K)] = 1.0
    U = unit_phase(sector.alpha / K) * clock
    V = unit_phase(sector.beta / K) * shift
    U.setflags(write=False)
    V.setflags(write=False)
    return LevelRep(level, sector, U, V)


def _mpow(M: np.ndarray, n: int) -> np.ndarray:
    if n < 0:
        return np.linalg.matrix_power(M.conj().T, -n)
    return np.linalg.matrix_power(M, n)


def rep_word(rep: LevelRep, w: GroupWord | tuple[int, int, int]) -> np.ndarray:
    """Image of ``zeta^c Wh(a, b)``, i.e. ``zeta^(c + a*b) V^b U^a``."""
    c, a, b = w
    return rep.level.zeta_power(c + a * b) * (_mpow(rep.V, b) @ _mpow(rep.U, a))


def rep_residuals(rep: LevelRep) -> dict[str, float]:
    """Defining-relation and unitarity residuals (max elementwise)."""
    U, V, q = rep.U, rep.V, rep.level.q
    eye = np.eye(rep.K)
    return {
        "commutation": float(np.max(np.abs(U @ V - q * V @ U))),
        "unitarity_U": float(np.max(np.abs(U @ U.conj().T - eye))),
        "unitarity_V": float(np.max(np.abs(V @ V.conj().T - eye))),
    }


def _scalar(M: np.ndarray, tol: float) -> complex:
    lam = complex(np.trace(M) / M.shape[0])
    off = float(np.max(np.abs(M - lam * np.eye(M.shape[0]))))
    if off >= tol:
        raise NonScalarError(f"matrix is not scalar (residual {off:.3g})")
    return lam


def central_characters(rep: LevelRep, tol: float = SVD_TOL) -> tuple[complex, complex]:
    K = rep.K
    return (
        _scalar(rep_word(rep, (0, K, 0)), tol),
        _scalar(rep_word(rep, (0, 0, K)), tol),
    )


def transformed_sector(rep: LevelRep, g: SL2Z, tol: float = SVD_TOL) -> Sector:
    """Sector of the pulled-back representation ``Wh(v) -> rho(Wh(v g))``.

    A phase-free intertwiner for ``g`` exists exactly when this equals
    ``rep.sector``.
    """
    K = rep.K
    lam = []
    for v in ((1, 0), (0, 1)):
        a, b = g.apply(*v)
        lam.append(_scalar(rep_word(rep, (0, K * a, K * b)), tol))
    return Sector.from_characters(*lam)


@dataclass(eq=False)
class Intertwiner:
    """Unitary ``P`` with ``P rho(Wh(v)) P^-1 = mu(v) rho(Wh(v g))``.

    ``P`` is scaled to be unitary and its first entry of modulus above 1e-6
    (row-major order) is made real positive; the remaining global phase freedom
    is handled by :func:`phase_align`.
    """

    g: SL2Z
    P: np.ndarray
    mu: tuple[complex, complex]
    residual: float
    unitarity: float
    singular_values: tuple[float, float]  # smallest and second smallest


def _free_phases(rep: LevelRep, g: SL2Z, tol: float) -> tuple[complex, complex]:
    # mu(v)^K must match the central characters of Wh(K v) and Wh(K v g)
    K = rep.K
    mus = []
    for v in ((1, 0), (0, 1)):
        a, b = g.apply(*v)
        lam = _scalar(rep_word(rep, (0, K * v[0], K * v[1])), tol)
        lam_g = _scalar(rep_word(rep, (0, K * a, K * b)), tol)
        turns = round(cmath.phase(lam / lam_g) / (2 * math.pi), 12) % 1.0
        mus.append(unit_phase(turns / K))
    return mus[0], mus[1]


def find_intertwiner(
    rep: LevelRep,
    g: SL2Z,
    phases: str = "free",
    tol: float = SVD_TOL,
) -> Intertwiner | None:
    """Solve for the unitary implementing ``g`` on ``rep``, or None.

    ``phases="free"`` lets each generator pick up the unit phase fixed by matching
    central characters; ``phases="strict"`` demands ``mu = 1``, which succeeds only
    when ``g`` maps the sector to itself.
    """
    if not isinstance(g, SL2Z):
        raise TypeError("expected an SL2Z element")
    if phases == "strict":
        mu = (1 + 0j, 1 + 0j)
    elif phases == "free":
        mu = _free_phases(rep, g, tol)
    else:
        raise ValueError(f"phases must be 'free' or 'strict', got {phases!r}")
    K = rep.K
    eye = np.eye(K)
    gens = (rep.U, rep.V)
    targets = [rep_word(rep, (0, *g.apply(*v))) for v in ((1, 0), (0, 1))]
    # row-major vec: vec(P A) = (I kron A^T) vec(P), vec(B P) = (B kron I) vec(P)
    blocks = [
        np.kron(eye, A.T) - m * np.kron(B, eye) for A, B, m in zip(gens, targets, mu)
    ]
    _, sing, vh = np.linalg.svd(np.vstack(blocks))
    smallest = float(sing[-1])
    second = float(sing[-2]) if len(sing) > 1 else math.inf
    if smallest > tol:
        return None
    P = vh[-1].conj().reshape(K, K)
    P *= math.sqrt(K) / np.linalg.norm(P)
    lead = P.ravel()[np.argmax(np.abs(P.ravel()) > 1e-6)]
    P *= abs(lead) / lead
    Pinv = P.conj().T
    residual = max(
        float(np.max(np.abs(P @ A @ Pinv - m * B)))
        for A, B, m in zip(gens, targets, mu)
    )
    unitarity = float(np.max(np.abs(P @ Pinv - eye)))
    return Intertwiner(g, P, mu, residual, unitarity, (smallest, second))


def phase_align(A: np.ndarray, B: np.ndarray) -> tuple[complex, float]:
    """Unit phase ``phi`` minimising ``|A - phi B|``, and the max residual after it."""
    overlap = complex(np.vdot(B, A))
    phi = overlap / abs(overlap) if abs(overlap) > 0 else 1 + 0j
    return phi, float(np.max(np.abs(A - phi * B)))


@dataclass
class ModularReport:
    K: int
    sector: Sector
    s_phase: complex          # P_S^4 = s_phase * I
    s_residual: float
    st_phase: complex         # (P_S P_T)^3 = st_phase * P_S^2
    st_residual: float
    mu_S: tuple[complex, complex]
    mu_T: tuple[complex, complex]
    extra: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(self.s_residual, self.st_residual)


def modular_relations(
    level: Level | int,
    sector: Sector | None = None,
    phases: str = "free",
    tol: float = SVD_TOL,
) -> ModularReport:
    """Check ``S^4 = 1`` and ``(S T)^3 = S^2`` on the intertwiners, up to phase."""
    rep = build_rep(level, sector)
    found = {}
    for name, g in (("S", S), ("T", T)):
        it = find_intertwiner(rep, g, phases=phases, tol=tol)
        if it is None:
            raise MissingIntertwinerError(
                f"no {name}-intertwiner for K={rep.K}, sector {rep.sector.as_tuple()}"
                f" ({phases} phases); {name} maps it to "
                f"{transformed_sector(rep, g).as_tuple()}"
            )
        found[name] = it
    PS, PT = found["S"].P, found["T"].P
    s_phase, s_res = phase_align(np.linalg.matrix_power(PS, 4), np.eye(rep.K))
    st_phase, st_res = phase_align(
        np.linalg.matrix_power(PS @ PT, 3), np.linalg.matrix_power(PS, 2)
    )
    return ModularReport(
        rep.K, rep.sector, s_phase, s_res, st_phase, st_res,
        found["S"].mu, found["T"].mu,
    )
