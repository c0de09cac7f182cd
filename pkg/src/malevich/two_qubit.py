"""Two-qubit states with inaccessible levels and their entanglement measures.

The basis order is (m1, m2) = (+,+), (+,-), (-,+), (-,-). An inaccessible
level is one whose row and column of the density matrix vanish. The measure
functions accept a :class:`TwoQubitDensity`, a single 4x4 array or a stack of
shape ``(..., 4, 4)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from . import qubit
from .exceptions import NotDensity, NotPositive, UnsupportedFamily
from .numerics import PSD_TOL, check_density, eigenvalues, matrix_sqrt_psd, partial_transpose
from .qubit import ProbabilityTriple, as_triple, off_diagonal
from .qutrit import ComponentQubits, component_qubits, qutrit_from_probabilities

WITNESS_MARGIN = 1e-9
PPT_TOL = 1e-10
# spin-flip eigenvalues at or below this are round-off of exact zeros
ETA_SQ_FLOOR = 1e-14

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SPIN_FLIP = np.kron(SIGMA_Y, SIGMA_Y)


class Family(str, Enum):
    CENTER_BLOCK = "center_block"
    CORNER_BLOCK = "corner_block"
    QUTRIT_EMBED_1 = "qutrit_embed_1"
    QUTRIT_EMBED_2 = "qutrit_embed_2"
    QUTRIT_EMBED_3 = "qutrit_embed_3"
    QUTRIT_EMBED_4 = "qutrit_embed_4"
    GENERAL = "general"


# zero row/column of each one-inaccessible-state placement
_EMBED_ZERO = {1: 3, 2: 0, 3: 1, 4: 2}
_EMBED_FAMILY = {k: Family(f"qutrit_embed_{k}") for k in _EMBED_ZERO}

SEPARABLE_AREA_BOUND = {
    Family.CENTER_BLOCK: 2.5,
    Family.CORNER_BLOCK: 2.5,
    Family.QUTRIT_EMBED_1: 8.0,
    Family.QUTRIT_EMBED_2: 8.0,
    Family.QUTRIT_EMBED_3: (57 + math.sqrt(17)) / 8,
    Family.QUTRIT_EMBED_4: 8.0,
}


class PPTVerdict(str, Enum):
    SEPARABLE = "separable_by_ppt"
    ENTANGLED = "entangled"


class WitnessVerdict(str, Enum):
    CERTIFIED_ENTANGLED = "certified_entangled"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class TwoQubitDensity:
    matrix: np.ndarray
    family: Family = Family.GENERAL

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "matrix", check_density(self.matrix, dim=4))

    @property
    def inaccessible(self) -> tuple[int, ...]:
        """Basis levels (0-based) whose row and column are exactly zero."""
        m = self.matrix
        return tuple(k for k in range(4) if not np.any(m[k]) and not np.any(m[:, k]))


class EntanglementReport(NamedTuple):
    negativity: float
    log_negativity: float
    concurrence: float
    ppt_verdict: PPTVerdict
    pt_eigenvalues: np.ndarray


class ClosedForm(NamedTuple):
    """Closed-form concurrence and whether the underlying state is positive."""

    value: float
    physical: bool


def _matrix(rho) -> np.ndarray:
    if isinstance(rho, TwoQubitDensity):
        return rho.matrix
    a = np.asarray(rho, dtype=complex)
    if a.shape[-2:] != (4, 4):
        raise NotDensity(f"expected 4x4 matrices, got shape {a.shape}")
    return a


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def _block_state(p: Sequence[float], idx: tuple[int, int], family: Family) -> TwoQubitDensity:
    p = as_triple(p)
    if not p.is_quantum:
        raise NotPositive(f"{tuple(p)} lies outside the quantum ball (residual {p.residual:.3g})")
    i, j = idx
    m = np.zeros((4, 4), dtype=complex)
    c = off_diagonal(p.p1, p.p2)
    m[i, i], m[i, j], m[j, i], m[j, j] = p.p3, c, c.conjugate(), 1.0 - p.p3
    return TwoQubitDensity(m, family)


def center_block_state(p: Sequence[float]) -> TwoQubitDensity:
    """Qubit block on (+,-), (-,+); levels (+,+) and (-,-) inaccessible."""
    return _block_state(p, (1, 2), Family.CENTER_BLOCK)


def corner_block_state(p: Sequence[float]) -> TwoQubitDensity:
    """Qubit block on (+,+), (-,-); levels (+,-) and (-,+) inaccessible."""
    return _block_state(p, (0, 3), Family.CORNER_BLOCK)


def embed_positions(placement: int) -> list[int]:
    if placement not in _EMBED_ZERO:
        raise ValueError(f"placement must be 1, 2, 3 or 4, not {placement!r}")
    zero = _EMBED_ZERO[placement]
    return [k for k in range(4) if k != zero]


def embed_matrix(R, placement: int) -> np.ndarray:
    """Place 3x3 matrices (or a stack) into 4x4 with one zero row/column, unchecked."""
    R = np.asarray(R, dtype=complex)
    pos = embed_positions(placement)
    out = np.zeros(R.shape[:-2] + (4, 4), dtype=complex)
    out[..., np.ix_(pos, pos)[0], np.ix_(pos, pos)[1]] = R
    return out


def qutrit_embed_state(R, placement: int) -> TwoQubitDensity:
    """Two-qubit state with one inaccessible level carrying the qutrit ``R``.

    Placement 1 leaves (-,-) empty, 2 leaves (+,+) empty, 3 leaves (+,-)
    empty and 4 leaves (-,+) empty.
    """
    R = check_density(R, dim=3)
    return TwoQubitDensity(embed_matrix(R, placement), _EMBED_FAMILY[placement])


def pt_eigenvalues(rho, subsystem: str = "second") -> np.ndarray:
    """Eigenvalues (descending) of the partial transpose."""
    return eigenvalues(partial_transpose(_matrix(rho), subsystem))


def negativity(rho, subsystem: str = "second"):
    """Sum of the magnitudes of the negative partial-transpose eigenvalues."""
    w = pt_eigenvalues(rho, subsystem)
    return _scalar(-np.sum(np.minimum(w, 0.0), axis=-1))


def log_negativity(rho, subsystem: str = "second"):
    return _scalar(np.log(2 * np.asarray(negativity(rho, subsystem)) + 1))


def spin_flip(rho) -> np.ndarray:
    """``(sigma_y x sigma_y) rho* (sigma_y x sigma_y)``."""
    return SPIN_FLIP @ _matrix(rho).conj() @ SPIN_FLIP


def spin_flip_roots(rho) -> np.ndarray:
    """Square roots of the eigenvalues of ``rho rho~``, descending.

    They are obtained from the Hermitian matrix ``sqrt(rho) rho~ sqrt(rho)``,
    which is similar to ``rho rho~``.
    """
    m = _matrix(rho)
    root = matrix_sqrt_psd(m, floor=ETA_SQ_FLOOR)
    w = eigenvalues(root @ spin_flip(m) @ root)
    w = np.where(w <= ETA_SQ_FLOOR, 0.0, w)
    return np.sqrt(w)


def concurrence_wootters(rho):
    eta = spin_flip_roots(rho)
    c = eta[..., 0] - eta[..., 1] - eta[..., 2] - eta[..., 3]
    return _scalar(np.clip(c, 0.0, 1.0))


def ppt_verdict(rho, tol: float = PPT_TOL) -> PPTVerdict:
    w = pt_eigenvalues(rho)
    return PPTVerdict.ENTANGLED if float(np.min(w)) < -tol else PPTVerdict.SEPARABLE


def entanglement_report(rho) -> EntanglementReport:
    m = _matrix(rho)
    w = pt_eigenvalues(m)
    neg = float(-np.sum(np.minimum(w, 0.0)))
    verdict = PPTVerdict.ENTANGLED if w[-1] < -PPT_TOL else PPTVerdict.SEPARABLE
    return EntanglementReport(
        negativity=neg,
        log_negativity=math.log(2 * neg + 1),
        concurrence=concurrence_wootters(m),
        ppt_verdict=verdict,
        pt_eigenvalues=w,
    )


def _coherence_magnitude(p1: float, p2: float) -> float:
    return math.hypot(p1 - 0.5, p2 - 0.5)


def concurrence_closed_form(family, data) -> ClosedForm:
    """Concurrence from the probabilities alone.

    ``data`` is a probability triple for the block families and a
    :class:`ComponentQubits` (or a 3x3 density matrix) for the embedded-qutrit
    families. The value is twice the magnitude of the one coherence that links
    the two accessible product states: the block coherence, ``D`` for
    placement 1, ``B`` for placement 2 and ``A`` for placements 3 and 4.
    ``physical`` is False when no positive state has these probabilities.
    """
    family = Family(family)
    if family in (Family.CENTER_BLOCK, Family.CORNER_BLOCK):
        p = as_triple(data)
        return ClosedForm(2 * _coherence_magnitude(p.p1, p.p2), p.is_quantum)
    if family is Family.GENERAL:
        raise UnsupportedFamily("no closed form for a general two-qubit state")
    c = data if isinstance(data, ComponentQubits) else component_qubits(data)
    t = {
        Family.QUTRIT_EMBED_1: c.D,
        Family.QUTRIT_EMBED_2: c.B,
        Family.QUTRIT_EMBED_3: c.A,
        Family.QUTRIT_EMBED_4: c.A,
    }[family]
    physical = c.A.p3 + c.B.p3 >= 1 - PSD_TOL and qutrit_from_probabilities(c.A, c.B, c.D).is_psd
    return ClosedForm(2 * _coherence_magnitude(t.p1, t.p2), physical)


def negativity_closed_form(p: Sequence[float]) -> float:
    """Negativity of the block families, ``sqrt((p1 - 1/2)^2 + (p2 - 1/2)^2)``."""
    p = as_triple(p)
    return _coherence_magnitude(p.p1, p.p2)


def family_area(state: TwoQubitDensity) -> float:
    """Area sum matching the family: the block qubit or the embedded qutrit's B, C, D sum."""
    from .qutrit import qutrit_area_sum

    m = state.matrix
    if state.family is Family.CENTER_BLOCK:
        return qubit.area_sum(block_probabilities(m, (1, 2)))
    if state.family is Family.CORNER_BLOCK:
        return qubit.area_sum(block_probabilities(m, (0, 3)))
    if state.family is Family.GENERAL:
        raise UnsupportedFamily("no area sum defined for a general two-qubit state")
    placement = int(state.family.value[-1])
    pos = embed_positions(placement)
    return qutrit_area_sum(component_qubits(m[np.ix_(pos, pos)]))


def block_probabilities(m, idx: tuple[int, int]) -> ProbabilityTriple:
    i, j = idx
    return qubit.probabilities_from_entry(m[i, j], m[i, i].real)


def area_witness(family, S: float) -> WitnessVerdict:
    """Entanglement certificate from the area sum alone.

    Certifies entanglement only when ``S`` exceeds the largest area sum any
    separable member of the family can reach; below that the separable and
    entangled ranges overlap and the answer is inconclusive.
    """
    family = Family(family)
    if family not in SEPARABLE_AREA_BOUND:
        raise UnsupportedFamily(f"no separable area bound for {family.value}")
    if S > SEPARABLE_AREA_BOUND[family] + WITNESS_MARGIN:
        return WitnessVerdict.CERTIFIED_ENTANGLED
    return WitnessVerdict.INCONCLUSIVE
