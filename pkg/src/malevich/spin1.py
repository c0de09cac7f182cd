"""Spin-1 coherent states and their component-qubit areas as functions of the mean spin.

Basis order is (|1,1>, |1,0>, |1,-1>), the same order used for qutrits
elsewhere in the package. The coherent state with parameter ``zeta`` has
amplitudes ``(zeta^2, sqrt(2) zeta, 1) / (1 + |zeta|^2)``.
"""

from __future__ import annotations

import math
from typing import Iterator, NamedTuple

import numpy as np

from . import qubit
from .exceptions import NotUnitNorm, OutOfRange
from .numerics import check_density
from .qubit import ProbabilityTriple
from .qutrit import AREA_LOWER_BOUND, AREA_UPPER_BOUND_ABD, ComponentQubits, qutrit_area_sum

UNIT_NORM_TOL = 1e-8
DISK_TOL = 1e-12
# the coherent-state total stays below the A,B,D-parameterized maximum; allow the stated slack
TOTAL_UPPER = AREA_UPPER_BOUND_ABD + 5e-3
TOTAL_LOWER = AREA_LOWER_BOUND
QUBIT_LOWER = qubit.AREA_MIN
QUBIT_UPPER = qubit.AREA_MAX_QUANTUM
BOUND_SLACK = 1e-9

_S2 = math.sqrt(2.0)
JX = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / _S2
JY = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / _S2
JZ = np.diag([1.0, 0.0, -1.0]).astype(complex)


class SpinMeanVector(NamedTuple):
    jx: float
    jy: float
    jz: float

    @property
    def norm(self) -> float:
        return math.sqrt(self.jx ** 2 + self.jy ** 2 + self.jz ** 2)


class AreaCheck(NamedTuple):
    value: float
    in_bounds: bool


class InequalityReport(NamedTuple):
    per_qubit: dict[str, AreaCheck]
    total: AreaCheck


class ScanRow(NamedTuple):
    jy: float
    jz: float
    S_A: float
    S_B: float
    S_D: float
    S_total: float
    residual_A: float
    residual_B: float
    residual_D: float


def coherent_vector(zeta: complex) -> np.ndarray:
    z = complex(zeta)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise OutOfRange(f"zeta must be finite, got {zeta!r}")
    return np.array([z * z, _S2 * z, 1.0], dtype=complex) / (1.0 + abs(z) ** 2)


def coherent_state(zeta: complex) -> np.ndarray:
    psi = coherent_vector(zeta)
    rho = np.outer(psi, psi.conj())
    return 0.5 * (rho + rho.conj().T)


def spin_means(rho) -> SpinMeanVector:
    r = check_density(rho, dim=3)
    return SpinMeanVector(*(float(np.trace(r @ J).real) for J in (JX, JY, JZ)))


def _unit(j) -> SpinMeanVector:
    j = SpinMeanVector(*(float(x) for x in j))
    if abs(j.norm - 1.0) > UNIT_NORM_TOL:
        raise NotUnitNorm(f"mean spin vector has norm {j.norm:.12g}, expected 1")
    return j


def probabilities_from_means(j) -> ComponentQubits:
    """Component-qubit probabilities of the coherent state with mean spin ``j``.

    ``A``, ``B`` and ``D`` follow from closed forms in the mean values; ``C``
    shares ``A``'s coherence and takes population ``p3(A) + p3(B) - 1``.
    """
    jx, jy, jz = _unit(j)
    A = ProbabilityTriple(
        0.25 * (2 + jx * jx - jy * jy),
        0.5 * (1 + jx * jy),
        0.25 * (3 - jz) * (1 + jz),
    )
    B = ProbabilityTriple(
        0.25 * (2 + _S2 * jx * (1 + jz)),
        0.25 * (2 + _S2 * jy * (1 + jz)),
        0.5 * (1 + jz * jz),
    )
    D3 = 0.5 * (1 - jz) * (1 + jz)
    D = ProbabilityTriple(
        0.25 * (2 + _S2 * jx * (1 - jz)),
        0.25 * (2 + _S2 * jy * (1 - jz)),
        D3,
    )
    C = ProbabilityTriple(A.p1, A.p2, A.p3 + B.p3 - 1.0)
    return ComponentQubits(A, B, C, D)


def qubit_constraint_residual(j, which: str) -> float:
    """``sum (p_k - 1/2)^2 - 1/4`` for component qubit ``A``, ``B`` or ``D``."""
    c = probabilities_from_means(j)
    if which not in ("A", "B", "D"):
        raise ValueError(f"qubit must be 'A', 'B' or 'D', not {which!r}")
    return qubit.quantumness_residual(getattr(c, which))


def _check(value: float, lo: float, hi: float) -> AreaCheck:
    return AreaCheck(value, lo - BOUND_SLACK <= value <= hi + BOUND_SLACK)


def inequality_report(j) -> InequalityReport:
    c = probabilities_from_means(j)
    per = {
        name: _check(qubit._area_sum(*getattr(c, name)), QUBIT_LOWER, QUBIT_UPPER)
        for name in ("A", "B", "D")
    }
    return InequalityReport(per, _check(qutrit_area_sum(c), TOTAL_LOWER, TOTAL_UPPER))


def grid_scan(resolution: int = 201, jx_sign: int = 1) -> Iterator[ScanRow]:
    """Area sums over a uniform ``resolution x resolution`` grid on ``[-1, 1]^2``.

    Rows run over ``jy`` (outer) then ``jz`` (inner); points with
    ``jy^2 + jz^2 > 1`` are skipped and ``jx = jx_sign * sqrt(1 - jy^2 - jz^2)``.
    """
    if int(resolution) != resolution or resolution < 2:
        raise ValueError(f"resolution must be an integer >= 2, got {resolution!r}")
    if jx_sign not in (1, -1):
        raise ValueError(f"jx_sign must be +1 or -1, got {jx_sign!r}")
    axis = np.linspace(-1.0, 1.0, int(resolution))
    for jy in axis:
        for jz in axis:
            r2 = jy * jy + jz * jz
            if r2 > 1.0 + DISK_TOL:
                continue
            jx = jx_sign * math.sqrt(max(0.0, 1.0 - r2))
            c = probabilities_from_means((jx, jy, jz))
            yield ScanRow(
                float(jy),
                float(jz),
                qubit._area_sum(*c.A),
                qubit._area_sum(*c.B),
                qubit._area_sum(*c.D),
                qutrit_area_sum(c),
                qubit.quantumness_residual(c.A),
                qubit.quantumness_residual(c.B),
                qubit.quantumness_residual(c.D),
            )
